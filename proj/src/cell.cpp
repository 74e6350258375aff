#include "rramtk/cell.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace rramtk {

double MemBranch::i(double v) const {
  if (kind == Kind::linear) return v / r;
  return current(params, r, v);
}

double MemBranch::di_dv(double v) const {
  if (kind == Kind::linear) return 1.0 / r;
  const double a = v >= 0 ? params.a_p : params.a_n;
  const double b = v >= 0 ? params.b_p : params.b_n;
  return a * b * std::cosh(b * v) / r;
}

MemBranch MemBranch::linear(double ohms) {
  if (!(ohms > 0)) throw std::invalid_argument("MemBranch: resistance must be > 0");
  MemBranch m;
  m.kind = Kind::linear;
  m.r = ohms;
  return m;
}

MemBranch MemBranch::model(const ModelParams& p, double state) {
  if (!(state > 0)) throw std::invalid_argument("MemBranch: state must be > 0");
  MemBranch m;
  m.kind = Kind::model;
  m.params = p;
  m.r = state;
  return m;
}

namespace {

// Bisection for a continuous monotone "current leaving the node" function.
// Returns the node voltage; throws SolverError when the bracket is invalid
// or the residual target is missed.
double bisect_node(const std::function<double(double)>& leaving, double lo, double hi,
                   double i_scale) {
  double flo = leaving(lo);
  double fhi = leaving(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if (flo * fhi > 0) throw SolverError("dc solve: root not bracketed");

  double a = lo, b = hi;
  double fa = flo;
  for (int iter = 0; iter < 200; ++iter) {
    const double x = 0.5 * (a + b);
    if (x == a || x == b) break;  // interval down to adjacent doubles
    const double fx = leaving(x);
    if (fx == 0) return x;
    if ((fx > 0) == (fhi > 0)) {
      b = x;
    } else {
      a = x;
      fa = fx;
    }
  }
  const double x = std::abs(fa) <= std::abs(leaving(b)) ? a : b;
  const double res = std::abs(leaving(x));
  if (res > 1e-12 && res > 1e-9 * i_scale)
    throw SolverError("dc solve: residual target missed");
  return x;
}

// Current WORD -> node through the FET for a given internal node voltage.
double fet_series_current(const MosfetParams& fet, Orientation orientation,
                          double v_gate, double v_word, double node) {
  if (orientation == Orientation::source_to_rram)
    return mosfet_current(fet, v_gate, node, v_word);   // source faces the node
  return -mosfet_current(fet, v_gate, v_word, node);    // drain faces the node
}

}  // namespace

SeriesSolution dc_solve_series(const OneT1RConfig& cell) {
  cell.fet.validate();
  const double lo = std::min(cell.v_word, cell.v_bit);
  const double hi = std::max(cell.v_word, cell.v_bit);

  const auto leaving = [&](double x) {
    // KCL at the node: memristor current out minus FET current in.
    return cell.mem.i(x - cell.v_bit) -
           fet_series_current(cell.fet, cell.orientation, cell.v_gate, cell.v_word, x);
  };

  const double i_scale = std::abs(cell.mem.i(hi - lo)) + 1e-15;

  SeriesSolution sol;
  sol.node = lo == hi ? lo : bisect_node(leaving, lo, hi, i_scale);
  sol.v_mem = sol.node - cell.v_bit;
  sol.v_fet = cell.v_word - sol.node;
  sol.i = cell.mem.i(sol.v_mem);
  if (std::abs(sol.i) < 1e-15) {  // gate off: no conduction
    sol.i = 0;
    sol.v_mem = 0;
    sol.node = cell.v_bit;
    sol.v_fet = cell.v_word - cell.v_bit;
  }
  const bool s2r = cell.orientation == Orientation::source_to_rram;
  sol.fet_op = {"fet", cell.v_gate, s2r ? sol.node : cell.v_word,
                s2r ? cell.v_word : sol.node, cell.v_bulk};
  return sol;
}

OrientationReport compare_orientations(const MosfetParams& fet, double load_ohm,
                                       double vdd) {
  OneT1RConfig cell;
  cell.fet = fet;
  cell.mem = MemBranch::linear(load_ohm);
  cell.v_gate = fet.polarity == FetPolarity::nmos ? vdd : 0.0;  // fully open
  cell.v_bulk = fet.polarity == FetPolarity::nmos ? 0.0 : vdd;

  OrientationReport rep;
  const auto run = [&](Orientation o, bool forward) {
    cell.orientation = o;
    cell.v_word = forward ? vdd : 0.0;
    cell.v_bit = forward ? 0.0 : vdd;
    return dc_solve_series(cell);
  };
  rep.fwd_s2r = run(Orientation::source_to_rram, true);
  rep.rev_s2r = run(Orientation::source_to_rram, false);
  rep.fwd_d2r = run(Orientation::drain_to_rram, true);
  rep.rev_d2r = run(Orientation::drain_to_rram, false);

  const double min_s2r = std::min(std::abs(rep.fwd_s2r.i), std::abs(rep.rev_s2r.i));
  const double min_d2r = std::min(std::abs(rep.fwd_d2r.i), std::abs(rep.rev_d2r.i));
  rep.recommended = min_s2r >= min_d2r ? Orientation::source_to_rram
                                       : Orientation::drain_to_rram;
  return rep;
}

TwoT1RSolution dc_solve_2t1r(const TwoT1RConfig& cell, double v_word, bool q4_on,
                             bool q5_on) {
  if (q4_on && q5_on)
    throw std::invalid_argument("2T1R: Q4 and Q5 are never concurrently on");
  cell.q4.validate();
  cell.q5.validate();

  const double vg4 = q4_on ? cell.v_gate_q4_on : cell.v_gate_q4_off;
  const double vg5 = q5_on ? cell.v_gate_q5_on : cell.v_gate_q5_off;

  // KCL at the internal node; the memristor's positive terminal sits on
  // WORD, both FET drains face the node. The off device is still evaluated
  // so that a wrongly enabling gate voltage shows up.
  const auto leaving = [&](double x) {
    const double mem_leave = -cell.mem.i(v_word - x);
    const double q5_leave = mosfet_current(cell.q5, vg5, cell.v_bit1, x);
    const double q4_leave = mosfet_current(cell.q4, vg4, cell.v_bit2, x);
    return mem_leave + q5_leave + q4_leave;
  };

  const double lo = std::min({cell.v_bit1, cell.v_bit2, v_word});
  const double hi = std::max({cell.v_bit1, cell.v_bit2, v_word});
  TwoT1RSolution sol;
  sol.node = bisect_node(leaving, lo, hi, std::abs(cell.mem.i(hi - lo)) + 1e-12);
  sol.v_mem = v_word - sol.node;
  sol.i = std::abs(cell.mem.i(sol.v_mem));
  sol.gate_window_ok = vg5 >= cell.nmos_gate_lo && vg5 <= cell.nmos_gate_hi &&
                       vg4 >= cell.pmos_gate_lo && vg4 <= cell.pmos_gate_hi;
  // q4: pmos with source on BIT2, drain on the node; q5: nmos source on BIT1
  sol.fets.push_back({"Q4", vg4, cell.v_bit2, sol.node, cell.v_bit2});
  sol.fets.push_back({"Q5", vg5, cell.v_bit1, sol.node, cell.v_bit1});
  sol.fet_params = {cell.q4, cell.q5};
  return sol;
}

double worst_case_linearize(const std::vector<IvSample>& iv,
                            std::pair<double, double> v_range) {
  if (v_range.first >= v_range.second)
    throw std::invalid_argument("worst_case_linearize: empty voltage range");
  double v_min = std::numeric_limits<double>::infinity();
  double v_max = -v_min;
  double r_wc = std::numeric_limits<double>::infinity();
  for (const auto& s : iv) {
    v_min = std::min(v_min, s.v);  // any sample counts toward coverage
    v_max = std::max(v_max, s.v);
    if (s.v < v_range.first || s.v > v_range.second) continue;
    if (s.i * s.v < 0)
      throw std::invalid_argument("worst_case_linearize: current opposes bias");
    if (s.v != 0 && s.i != 0) r_wc = std::min(r_wc, std::abs(s.v / s.i));
  }
  const double tol = 1e-9 * (v_range.second - v_range.first);
  if (v_min > v_range.first + tol || v_max < v_range.second - tol)
    throw std::invalid_argument("worst_case_linearize: samples do not cover v_range");
  if (!std::isfinite(r_wc))
    throw std::invalid_argument("worst_case_linearize: no conducting sample");
  return r_wc;
}

std::vector<std::vector<double>> loadline_surface(const OneT1RConfig& cell,
                                                  const std::vector<double>& v_gate_grid,
                                                  const std::vector<double>& v_out_grid) {
  if (v_gate_grid.empty() || v_out_grid.empty())
    throw std::invalid_argument("loadline_surface: grids must be non-empty");
  std::vector<std::vector<double>> out(v_gate_grid.size(),
                                       std::vector<double>(v_out_grid.size(), 0.0));
  OneT1RConfig probe = cell;
  for (std::size_t gi = 0; gi < v_gate_grid.size(); ++gi) {
    probe.v_gate = v_gate_grid[gi];
    for (std::size_t oi = 0; oi < v_out_grid.size(); ++oi) {
      probe.v_bit = v_out_grid[oi];
      out[gi][oi] = dc_solve_series(probe).i;
    }
  }
  return out;
}

TgRouting tg_route(const TgCellConfig& cell) {
  if (cell.r_on < 0) throw std::invalid_argument("tg_route: r_on must be >= 0");
  TgRouting r;
  r.ext_connected = cell.external_mode;
  r.usr_connected = !cell.external_mode;
  r.series_resistance = 2.0 * cell.r_on;  // one switch on each device terminal
  return r;
}

}  // namespace rramtk
