#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "rramtk/model.hpp"
#include "rramtk/mosfet.hpp"

namespace rramtk {

/// Non-convergence or lost bracket in a DC solve.
struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
  double residual = 0;
};

/// Memristor branch as seen by DC solves: either the sinh IV at a frozen
/// resistive state, or a plain linear resistance (worst-case studies).
struct MemBranch {
  enum class Kind { model, linear };
  Kind kind = Kind::linear;
  ModelParams params;  // used when kind == model
  double r = 0;        // frozen state (model) or resistance (linear)

  double i(double v) const;
  double di_dv(double v) const;
  static MemBranch linear(double ohms);
  static MemBranch model(const ModelParams& p, double state);
};

enum class Orientation { source_to_rram, drain_to_rram };

/// 1T1R stack: WORD -- FET -- node -- memristor(+) -- BIT, gate on SEL. The
/// orientation picks which nominal FET terminal faces the memristor node.
struct OneT1RConfig {
  Orientation orientation = Orientation::source_to_rram;
  MosfetParams fet;
  MemBranch mem;
  double v_word = 0;
  double v_bit = 0;
  double v_gate = 0;
  double v_bulk = 0;
};

struct SeriesSolution {
  double i = 0;      ///< branch current, positive WORD -> BIT
  double v_mem = 0;  ///< node - BIT
  double v_fet = 0;  ///< WORD - node
  double node = 0;   ///< internal node voltage
  FetOperatingPoint fet_op;
};

/// DC operating point of the series stack by monotone bisection on the
/// internal node. Residual <= 1e-12 A or 1e-9 relative. KVL is exact by
/// construction: v_mem + v_fet spans WORD - BIT.
SeriesSolution dc_solve_series(const OneT1RConfig& cell);

struct OrientationReport {
  // solutions indexed [orientation][polarity]: fwd = +vdd WORD->BIT
  SeriesSolution fwd_s2r, rev_s2r, fwd_d2r, rev_d2r;
  Orientation recommended = Orientation::source_to_rram;  // argmax of min(fwd, rev)
};

/// Four DC solves (2 orientations x 2 polarities) into a fixed load with the
/// gate fully open, reproducing the corner-table methodology.
OrientationReport compare_orientations(const MosfetParams& fet, double load_ohm,
                                       double vdd);

/// 2T1R high-voltage cell: memristor between WORD and the internal node,
/// pMOS Q4 from BIT2 (high rail) and nMOS Q5 to BIT1 (ground), both sources
/// pointing away from the memristor. Exactly one device may be on.
struct TwoT1RConfig {
  MosfetParams q4;  // pmos
  MosfetParams q5;  // nmos
  MemBranch mem;
  double v_bit1 = 0.0;
  double v_bit2 = 10.0;
  double v_gate_q4_on = 7.0, v_gate_q4_off = 10.0;
  double v_gate_q5_on = 3.0, v_gate_q5_off = 0.0;
  // allowed gate swing windows per the biasing scheme
  double nmos_gate_lo = 0.0, nmos_gate_hi = 3.0;
  double pmos_gate_lo = 7.0, pmos_gate_hi = 10.0;
};

struct TwoT1RSolution {
  double v_mem = 0;  ///< signed, positive when the WORD side is high
  double i = 0;      ///< magnitude of the branch current
  bool gate_window_ok = false;
  double node = 0;
  std::vector<FetOperatingPoint> fets;   // q4 then q5
  std::vector<MosfetParams> fet_params;  // matching entries for soac_check
};

/// Throws std::invalid_argument when both devices are enabled.
TwoT1RSolution dc_solve_2t1r(const TwoT1RConfig& cell, double v_word, bool q4_on,
                             bool q5_on);

struct IvSample {
  double v = 0;
  double i = 0;
};

/// Worst-case linearisation R_wc = min |v/i| over the sampled biases, so the
/// line i = v/R_wc overestimates the current demand at every sample. Throws
/// when the samples do not cover v_range, conduct with the wrong sign, or
/// carry no current at all.
double worst_case_linearize(const std::vector<IvSample>& iv,
                            std::pair<double, double> v_range);

/// Branch current of the 1T1R for every (gate, output-node) pair; the WORD
/// terminal stays at the configured rail.
std::vector<std::vector<double>> loadline_surface(const OneT1RConfig& cell,
                                                  const std::vector<double>& v_gate_grid,
                                                  const std::vector<double>& v_out_grid);

/// Double transmission-gate cell: either the EXT pair (S1,4) or the USR pair
/// (S2,3) is closed, never both.
struct TgCellConfig {
  double r_on = 0;          ///< switch on-resistance (ohm)
  bool external_mode = false;  ///< true: EXT terminals connected, false: USR
};

struct TgRouting {
  bool ext_connected = false;
  bool usr_connected = false;
  double series_resistance = 0;  ///< 2 * r_on along the closed path
};

TgRouting tg_route(const TgCellConfig& cell);

}  // namespace rramtk
