#include "rramtk/crossbar.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "rramtk/csvio.hpp"

namespace rramtk {

double line_resistance(double width_um, double length_um, double rho_sq) {
  if (!(width_um > 0)) throw std::invalid_argument("line_resistance: width must be > 0");
  if (rho_sq < 0) throw std::invalid_argument("line_resistance: rho_sq must be >= 0");
  return length_um / width_um * rho_sq;
}

void CrossbarSpec::validate() const {
  if (rows < 1 || cols < 1) throw std::invalid_argument("CrossbarSpec: empty array");
  if (rho_sq < 0) throw std::invalid_argument("CrossbarSpec: rho_sq must be >= 0");
  if (!(bit_line.width_um > 0 && word_line.width_um > 0 && sel_line.width_um > 0))
    throw std::invalid_argument("CrossbarSpec: wire widths must be > 0");
  if (!mem_linear) {
    mem_params.validate();
    mem_init.validate();
  }
  if (cell_kind == XbarCellKind::one_t1r && selector == SelectorKind::square_law)
    fet.validate();
  if (switch_r_on < 0) throw std::invalid_argument("CrossbarSpec: switch_r_on must be >= 0");
}

ArrayState initial_state(const CrossbarSpec& spec) {
  ArrayState st;
  st.rows = spec.rows;
  st.cols = spec.cols;
  st.r.assign(spec.rows * spec.cols, spec.mem_init.r);
  st.r_floor = spec.mem_init.r_floor;
  st.r_ceil = spec.mem_init.r_ceil;
  return st;
}

void write_array_csv(std::ostream& out, const ArrayState& st) {
  out << "rows,cols\n" << st.rows << ',' << st.cols << '\n';
  for (std::size_t r = 0; r < st.rows; ++r) {
    for (std::size_t c = 0; c < st.cols; ++c) {
      if (c) out << ',';
      out << format_double(st.at(r, c));
    }
    out << '\n';
  }
}

ArrayState array_from_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("array csv: empty input");
  if (line.rfind("rows,cols", 0) != 0)
    throw std::invalid_argument("array csv: missing rows,cols header");
  if (!std::getline(in, line)) throw std::invalid_argument("array csv: missing shape row");
  const auto shape = split_csv_line(line);
  if (shape.size() != 2) throw std::invalid_argument("array csv: bad shape row");
  ArrayState st;
  st.rows = static_cast<std::size_t>(parse_double(shape[0]));
  st.cols = static_cast<std::size_t>(parse_double(shape[1]));
  st.r.reserve(st.rows * st.cols);
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    for (const auto& f : split_csv_line(line)) st.r.push_back(parse_double(f));
  }
  if (st.r.size() != st.rows * st.cols)
    throw std::invalid_argument("array csv: element count does not match shape");
  return st;
}

std::size_t CrossbarNetlist::terminal_count() const {
  return bit_terminals.size() + word_terminals.size() + sel_terminals.size() +
         bulk_terminals.size();
}

namespace {

MemBranch cell_branch(const CrossbarSpec& spec, double state) {
  return spec.mem_linear ? MemBranch::linear(state)
                         : MemBranch::model(spec.mem_params, state);
}

}  // namespace

CrossbarNetlist build(const CrossbarSpec& spec, const ArrayState& st) {
  spec.validate();
  if (st.rows != spec.rows || st.cols != spec.cols)
    throw std::invalid_argument("build: state shape does not match spec");

  CrossbarNetlist x;
  x.spec = spec;
  const std::size_t rows = spec.rows, cols = spec.cols;

  const double r_seg_bit =
      spec.rho_sq > 0 ? line_resistance(spec.bit_line.width_um, spec.bit_line.pitch_um,
                                        spec.rho_sq)
                      : 0.0;
  const double r_seg_word =
      spec.rho_sq > 0 ? line_resistance(spec.word_line.width_um, spec.word_line.pitch_um,
                                        spec.rho_sq)
                      : 0.0;

  // Line taps; with zero segment resistance a whole line collapses onto its
  // terminal node.
  x.bit_taps.assign(rows * cols, -1);
  x.word_taps.assign(rows * cols, -1);
  for (std::size_t r = 0; r < rows; ++r) {
    const NodeId term = x.net.add_node("BIT" + std::to_string(r));
    x.bit_terminals.push_back(term);
    for (std::size_t c = 0; c < cols; ++c) {
      if (c == 0 || r_seg_bit == 0) {
        x.bit_taps[r * cols + c] = term;
      } else {
        const NodeId tap = x.net.add_node("b" + std::to_string(r) + "_" + std::to_string(c));
        x.bit_taps[r * cols + c] = tap;
        x.net.add_resistor(x.bit_taps[r * cols + c - 1], tap, r_seg_bit);
      }
    }
  }
  for (std::size_t c = 0; c < cols; ++c) {
    const NodeId term = x.net.add_node("WORD" + std::to_string(c));
    x.word_terminals.push_back(term);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == 0 || r_seg_word == 0) {
        x.word_taps[r * cols + c] = term;
      } else {
        const NodeId tap = x.net.add_node("w" + std::to_string(r) + "_" + std::to_string(c));
        x.word_taps[r * cols + c] = tap;
        x.net.add_resistor(x.word_taps[(r - 1) * cols + c], tap, r_seg_word);
      }
    }
  }

  if (spec.cell_kind == XbarCellKind::one_t1r) {
    for (std::size_t c = 0; c < cols; ++c)
      x.sel_terminals.push_back(x.net.add_node("SEL" + std::to_string(c)));
    switch (spec.bulk_mode) {
      case BulkMode::column:
        for (std::size_t c = 0; c < cols; ++c)
          x.bulk_terminals.push_back(x.net.add_node("NWELL" + std::to_string(c)));
        break;
      case BulkMode::row:
        for (std::size_t r = 0; r < rows; ++r)
          x.bulk_terminals.push_back(x.net.add_node("NWELL" + std::to_string(r)));
        break;
      case BulkMode::common:
        x.bulk_terminals.push_back(x.net.add_node("SUB"));
        break;
    }
  }

  x.mem_index.assign(rows * cols, 0);
  x.cell_nodes.assign(rows * cols, -1);
  x.fet_index.assign(rows * cols, std::nullopt);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t k = r * cols + c;
      const NodeId bit = x.bit_taps[k];
      const NodeId word = x.word_taps[k];
      if (spec.cell_kind == XbarCellKind::passive) {
        x.mem_index[k] = x.net.add_memristor(word, bit, cell_branch(spec, st.at(r, c)));
        continue;
      }
      const NodeId node =
          x.net.add_node("n" + std::to_string(r) + "_" + std::to_string(c));
      x.cell_nodes[k] = node;
      x.mem_index[k] = x.net.add_memristor(node, bit, cell_branch(spec, st.at(r, c)));
      if (spec.selector == SelectorKind::square_law) {
        const NodeId bulk = spec.bulk_mode == BulkMode::column
                                ? x.bulk_terminals[c]
                                : spec.bulk_mode == BulkMode::row ? x.bulk_terminals[r]
                                                                  : x.bulk_terminals[0];
        // source faces the memristor node
        x.fet_index[k] = x.net.add_fet(spec.fet, x.sel_terminals[c], node, word, bulk,
                                       "q" + std::to_string(r) + "_" + std::to_string(c));
      }
    }
  }
  return x;
}

namespace {

std::map<NodeId, double> assemble_biases(const CrossbarNetlist& x,
                                         const XbarBiases& biases) {
  std::map<NodeId, double> out;
  for (std::size_t r = 0; r < x.bit_terminals.size(); ++r)
    if (r < biases.bit.size() && biases.bit[r]) out[x.bit_terminals[r]] = *biases.bit[r];
  for (std::size_t c = 0; c < x.word_terminals.size(); ++c)
    if (c < biases.word.size() && biases.word[c]) out[x.word_terminals[c]] = *biases.word[c];
  for (std::size_t c = 0; c < x.sel_terminals.size(); ++c) {
    const bool on = c < biases.sel_on.size() && biases.sel_on[c];
    out[x.sel_terminals[c]] = on ? x.spec.v_sel_on : x.spec.v_sel_off;
  }
  for (NodeId b : x.bulk_terminals) out[b] = 0.0;
  return out;
}

// Ideal-switch selectors are rebuilt per solve: on cells get a series
// resistance (or a hard short), off cells stay open.
Netlist with_switches(const CrossbarNetlist& x, const XbarBiases& biases) {
  Netlist net = x.net;
  if (x.spec.cell_kind != XbarCellKind::one_t1r ||
      x.spec.selector != SelectorKind::ideal_switch)
    return net;
  for (std::size_t r = 0; r < x.spec.rows; ++r) {
    for (std::size_t c = 0; c < x.spec.cols; ++c) {
      const bool on = c < biases.sel_on.size() && biases.sel_on[c];
      if (!on) continue;
      const std::size_t k = r * x.spec.cols + c;
      if (x.spec.switch_r_on > 0)
        net.add_resistor(x.word_taps[k], x.cell_nodes[k], x.spec.switch_r_on);
      else
        net.add_conductance(x.word_taps[k], x.cell_nodes[k], 1e12);
    }
  }
  return net;
}

}  // namespace

DcSolution solve_array(const CrossbarNetlist& xbar, const XbarBiases& biases,
                       const NewtonOptions& opts) {
  const Netlist net = with_switches(xbar, biases);
  return solve_dc(net, assemble_biases(xbar, biases), opts);
}

ReadResult read_cell(const CrossbarNetlist& xbar, const ArrayState& st, std::size_t row,
                     std::size_t col, double v_read) {
  if (row >= xbar.spec.rows || col >= xbar.spec.cols)
    throw std::invalid_argument("read_cell: cell out of range");
  if (!xbar.spec.mem_linear && std::abs(v_read) > xbar.spec.mem_params.v_guard)
    throw std::invalid_argument("read_cell: |v_read| exceeds the state guard");

  XbarBiases biases;
  biases.bit.assign(xbar.spec.rows, std::nullopt);
  biases.word.assign(xbar.spec.cols, std::nullopt);
  biases.sel_on.assign(xbar.spec.cols, false);
  biases.word[col] = v_read;
  biases.bit[row] = 0.0;
  if (xbar.spec.cell_kind == XbarCellKind::one_t1r) {
    // isolated read: unselected wordlines grounded, target selector on
    for (std::size_t c = 0; c < xbar.spec.cols; ++c)
      if (c != col) biases.word[c] = 0.0;
    biases.sel_on[col] = true;
  }
  // passive arrays leave unselected lines floating: the sneak-path setting

  const Netlist net = with_switches(xbar, biases);
  const DcSolution sol = solve_dc(net, assemble_biases(xbar, biases));

  ReadResult out;
  out.i_terminal = terminal_current(net, sol.v, xbar.word_terminals[col]);
  if (out.i_terminal == 0) throw SolverError("read_cell: no terminal current");
  if (xbar.spec.mem_linear) {
    out.rs_estimate = v_read / out.i_terminal;
  } else {
    const auto& p = xbar.spec.mem_params;
    out.rs_estimate = (v_read >= 0 ? p.a_p * std::sinh(p.b_p * v_read)
                                   : p.a_n * std::sinh(p.b_n * v_read)) /
                      out.i_terminal;
  }
  out.error_pct = 100.0 * (out.rs_estimate - st.at(row, col)) / st.at(row, col);
  return out;
}

ProgramResult program_cell(CrossbarNetlist& xbar, ArrayState& st, std::size_t row,
                           std::size_t col, const Waveform& pulse, double t_s) {
  if (row >= xbar.spec.rows || col >= xbar.spec.cols)
    throw std::invalid_argument("program_cell: cell out of range");
  if (xbar.spec.mem_linear)
    throw std::invalid_argument("program_cell: linear cells carry no dynamics");

  XbarBiases biases;
  biases.bit.assign(xbar.spec.rows, std::nullopt);  // unselected bitlines float
  biases.word.assign(xbar.spec.cols, std::nullopt);
  biases.sel_on.assign(xbar.spec.cols, false);
  biases.bit[row] = 0.0;
  for (std::size_t c = 0; c < xbar.spec.cols; ++c)
    if (c != col) biases.word[c] = 0.0;  // unselected wordlines grounded
  if (xbar.spec.cell_kind == XbarCellKind::one_t1r) biases.sel_on[col] = true;

  ProgramResult result;
  result.target_r_before = st.at(row, col);
  std::vector<double> before = st.r;

  for (const auto& seg : pulse.segments) {
    const StepSplit split = split_duration(seg.duration, t_s);
    const std::size_t n_steps = split.n_full + (split.remainder > 0 ? 1 : 0);
    for (std::size_t k = 0; k < n_steps; ++k) {
      const double dt = k < split.n_full ? t_s : split.remainder;
      biases.word[col] = seg.voltage;

      const Netlist net = with_switches(xbar, biases);
      const DcSolution sol = solve_dc(net, assemble_biases(xbar, biases));

      if (xbar.spec.selector == SelectorKind::square_law) {
        std::vector<FetOperatingPoint> pts;
        std::vector<MosfetParams> params;
        for (std::size_t f = 0; f < net.fet_count(); ++f) {
          pts.push_back(net.fet_operating_point(f, sol.v));
          params.push_back(net.fet_params(f));
        }
        result.soac = soac_check(pts, params);
        if (!result.soac.empty()) {
          result.target_r_after = st.at(row, col);
          return result;  // abort on rating violations
        }
      }

      for (std::size_t cr = 0; cr < xbar.spec.rows; ++cr) {
        for (std::size_t cc = 0; cc < xbar.spec.cols; ++cc) {
          const std::size_t idx = xbar.mem_index[cr * xbar.spec.cols + cc];
          const double v_dev = net.memristor_voltage(idx, sol.v);
          double r = st.at(cr, cc);
          r = analytical_step(xbar.spec.mem_params, r, v_dev, dt);
          r = std::clamp(r, st.r_floor, st.r_ceil);
          st.at(cr, cc) = r;
          xbar.net.memristor(idx).r = r;
        }
      }
    }
  }

  for (std::size_t cr = 0; cr < xbar.spec.rows; ++cr) {
    for (std::size_t cc = 0; cc < xbar.spec.cols; ++cc) {
      if (cr == row && cc == col) continue;
      const double delta = std::abs(st.at(cr, cc) - before[cr * xbar.spec.cols + cc]);
      if (delta > result.disturb.max_delta_r) {
        result.disturb.max_delta_r = delta;
        result.disturb.worst_row = cr;
        result.disturb.worst_col = cc;
      }
    }
  }
  result.target_r_after = st.at(row, col);
  return result;
}

IrDropReport ir_drop_report(const CrossbarSpec& spec, double worst_case_r,
                            double v_drive) {
  spec.validate();
  if (!(worst_case_r > 0))
    throw std::invalid_argument("ir_drop_report: worst_case_r must be > 0");

  // Single conducting cell at the far corner; wires per the spec geometry.
  const std::size_t rows = spec.rows, cols = spec.cols;
  const double r_seg_bit =
      spec.rho_sq > 0
          ? line_resistance(spec.bit_line.width_um, spec.bit_line.pitch_um, spec.rho_sq)
          : 0.0;
  const double r_seg_word =
      spec.rho_sq > 0
          ? line_resistance(spec.word_line.width_um, spec.word_line.pitch_um, spec.rho_sq)
          : 0.0;

  Netlist net;
  const NodeId word_term = net.add_node("WORD");
  const NodeId bit_term = net.add_node("BIT");
  NodeId word_end = word_term;
  for (std::size_t r = 1; r < rows && r_seg_word > 0; ++r) {
    const NodeId next = net.add_node("w" + std::to_string(r));
    net.add_resistor(word_end, next, r_seg_word);
    word_end = next;
  }
  NodeId bit_end = bit_term;
  for (std::size_t c = 1; c < cols && r_seg_bit > 0; ++c) {
    const NodeId next = net.add_node("b" + std::to_string(c));
    net.add_resistor(bit_end, next, r_seg_bit);
    bit_end = next;
  }
  const std::size_t cell = net.add_memristor(word_end, bit_end, MemBranch::linear(worst_case_r));

  const DcSolution sol = solve_dc(net, {{word_term, v_drive}, {bit_term, 0.0}});
  IrDropReport rep;
  rep.delivered_v = net.memristor_voltage(cell, sol.v);
  rep.worst_row = rows - 1;
  rep.worst_col = cols - 1;
  return rep;
}

double line_rc_estimate(const CrossbarSpec& spec, double c_line_f) {
  if (c_line_f < 0) throw std::invalid_argument("line_rc_estimate: capacitance < 0");
  const double total = line_resistance(spec.sel_line.width_um,
                                       spec.sel_line.pitch_um * spec.rows, spec.rho_sq);
  return total * c_line_f;
}

}  // namespace rramtk
