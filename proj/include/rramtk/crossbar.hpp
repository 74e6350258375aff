#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rramtk/cell.hpp"
#include "rramtk/netlist.hpp"
#include "rramtk/stimulus.hpp"

namespace rramtk {

/// Sheet-resistance arithmetic: (length/width) squares times ohms-per-square.
double line_resistance(double width_um, double length_um, double rho_sq);

enum class BulkMode { column, row, common };

enum class XbarCellKind { passive, one_t1r };
enum class SelectorKind { square_law, ideal_switch };

struct WireGeometry {
  double width_um = 1.0;
  double pitch_um = 2.0;  ///< segment length per cell pitch
};

/// N x M crossbar of 1T1R (or passive 1R) cells. Wordlines and select lines
/// run column-wise, bitlines row-wise (memristors tied horizontally), with
/// one lumped line segment per cell pitch.
struct CrossbarSpec {
  std::size_t rows = 1;
  std::size_t cols = 1;
  XbarCellKind cell_kind = XbarCellKind::one_t1r;

  // memristor description: model-based cells carry a frozen DeviceState each,
  // linear cells a plain resistance
  bool mem_linear = false;
  ModelParams mem_params;       // used when !mem_linear
  DeviceState mem_init;         // initial state + bounds for every cell

  SelectorKind selector = SelectorKind::ideal_switch;
  MosfetParams fet;             // used when selector == square_law
  double switch_r_on = 0;       ///< ohm; 0 means a hard short when on
  double v_sel_on = 1.8, v_sel_off = 0.0;

  double rho_sq = 0;  ///< ohms per square; 0 collapses lines to ideal wires
  WireGeometry bit_line;
  WireGeometry word_line;
  WireGeometry sel_line;
  BulkMode bulk_mode = BulkMode::common;

  void validate() const;
};

/// Per-cell resistive states of one array.
struct ArrayState {
  std::size_t rows = 0, cols = 0;
  std::vector<double> r;  // row-major
  double r_floor = 0, r_ceil = 0;

  double& at(std::size_t row, std::size_t col) { return r[row * cols + col]; }
  double at(std::size_t row, std::size_t col) const { return r[row * cols + col]; }
};

ArrayState initial_state(const CrossbarSpec& spec);
void write_array_csv(std::ostream& out, const ArrayState& st);
ArrayState array_from_csv(std::istream& in);

/// Built node graph plus the terminal bookkeeping needed to bias it.
struct CrossbarNetlist {
  Netlist net;
  CrossbarSpec spec;
  std::vector<NodeId> bit_terminals;   // one per row
  std::vector<NodeId> word_terminals;  // one per column
  std::vector<NodeId> sel_terminals;   // one per column (1T1R only)
  std::vector<NodeId> bulk_terminals;  // per bulk_mode
  std::vector<NodeId> bit_taps;        // row-major line tap nodes
  std::vector<NodeId> word_taps;
  std::vector<NodeId> cell_nodes;      // 1T1R internal nodes, -1 for passive
  std::vector<std::size_t> mem_index;  // row-major device indices
  std::vector<std::optional<std::size_t>> fet_index;  // square-law selectors
  // ideal switches are realised as resistors rebuilt per solve
  std::size_t terminal_count() const;
};

CrossbarNetlist build(const CrossbarSpec& spec, const ArrayState& st);

/// Bias assignment by terminal; anything left unset floats.
struct XbarBiases {
  std::vector<std::optional<double>> bit;   // per row
  std::vector<std::optional<double>> word;  // per column
  std::vector<bool> sel_on;                 // per column, 1T1R only
};

/// DC solve of the array with the given bias assignment. For ideal-switch
/// selectors the off cells are open circuits, so unselected devices see no
/// bias at all.
DcSolution solve_array(const CrossbarNetlist& xbar, const XbarBiases& biases,
                       const NewtonOptions& opts = {});

struct ReadResult {
  double rs_estimate = 0;  ///< ohm, from the terminal current at v_read
  double error_pct = 0;    ///< vs the stored state of the target cell
  double i_terminal = 0;   ///< A into the driven wordline terminal
};

enum class ReadScheme { isolated, passive_float };

/// Reads cell (row, col): the wordline is driven at v_read, the bitline
/// grounded. 1T1R arrays enable only the target selector; passive arrays
/// leave unselected lines floating, which exposes sneak paths.
ReadResult read_cell(const CrossbarNetlist& xbar, const ArrayState& st,
                     std::size_t row, std::size_t col, double v_read);

struct DisturbReport {
  double max_delta_r = 0;
  std::size_t worst_row = 0, worst_col = 0;
};

struct ProgramResult {
  DisturbReport disturb;
  std::vector<SoacViolation> soac;  ///< non-empty means the pulse was aborted
  double target_r_before = 0, target_r_after = 0;
};

/// Applies a piecewise-constant pulse to the wordline of cell (row, col)
/// with the bitline grounded. Per timestep the array is solved, ratings are
/// checked, then every memristor advances by the closed-form update at its
/// solved branch voltage. States and the report come back through `st`.
ProgramResult program_cell(CrossbarNetlist& xbar, ArrayState& st, std::size_t row,
                           std::size_t col, const Waveform& pulse, double t_s);

struct IrDropReport {
  double delivered_v = 0;  ///< voltage across the far-corner device
  std::size_t worst_row = 0, worst_col = 0;
};

/// Far-corner delivered voltage with a single worst-case cell conducting.
IrDropReport ir_drop_report(const CrossbarSpec& spec, double worst_case_r,
                            double v_drive);

/// First-order RC estimate for a digital line: total line resistance times a
/// user-supplied per-line capacitance.
double line_rc_estimate(const CrossbarSpec& spec, double c_line_f);

}  // namespace rramtk
