#include "rramtk/netlist.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

namespace rramtk {

NodeId Netlist::add_node(std::string name) {
  names_.push_back(std::move(name));
  return static_cast<NodeId>(names_.size() - 1);
}

void Netlist::add_resistor(NodeId a, NodeId b, double ohms) {
  if (!(ohms > 0)) throw std::invalid_argument("Netlist: resistance must be > 0");
  resistors_.push_back({a, b, 1.0 / ohms});
}

void Netlist::add_conductance(NodeId a, NodeId b, double siemens) {
  if (!(siemens > 0)) throw std::invalid_argument("Netlist: conductance must be > 0");
  resistors_.push_back({a, b, siemens});
}

std::size_t Netlist::add_memristor(NodeId plus, NodeId minus, MemBranch branch) {
  mems_.push_back({plus, minus, std::move(branch)});
  return mems_.size() - 1;
}

std::size_t Netlist::add_fet(MosfetParams m, NodeId gate, NodeId source, NodeId drain,
                             NodeId bulk, std::string name) {
  m.validate();
  fets_.push_back({m, gate, source, drain, bulk, std::move(name)});
  return fets_.size() - 1;
}

double Netlist::memristor_voltage(std::size_t idx, const std::vector<double>& v) const {
  const auto& m = mems_.at(idx);
  return v[m.plus] - v[m.minus];
}

FetOperatingPoint Netlist::fet_operating_point(std::size_t idx,
                                               const std::vector<double>& v) const {
  const auto& f = fets_.at(idx);
  return {f.name, v[f.gate], v[f.source], v[f.drain], f.bulk >= 0 ? v[f.bulk] : 0.0};
}

namespace {

struct Assembly {
  Eigen::VectorXd residual;     // KCL at unknown nodes, current leaving
  Eigen::MatrixXd jacobian;
  double max_branch_current = 0;
};

class System {
 public:
  System(const Netlist& net, const std::map<NodeId, double>& biases,
         const NewtonOptions& opts)
      : net_(net), opts_(opts), index_(net.node_count(), -1) {
    voltages_.resize(net.node_count(), 0.0);
    for (NodeId n = 0; n < static_cast<NodeId>(net.node_count()); ++n) {
      const auto it = biases.find(n);
      if (it != biases.end()) {
        voltages_[n] = it->second;
      } else {
        index_[n] = static_cast<int>(unknowns_.size());
        unknowns_.push_back(n);
      }
    }
  }

  std::size_t unknown_count() const { return unknowns_.size(); }

  void set_unknowns(const Eigen::VectorXd& x) {
    for (std::size_t k = 0; k < unknowns_.size(); ++k) voltages_[unknowns_[k]] = x[k];
  }

  Eigen::VectorXd unknown_vector() const {
    Eigen::VectorXd x(unknowns_.size());
    for (std::size_t k = 0; k < unknowns_.size(); ++k) x[k] = voltages_[unknowns_[k]];
    return x;
  }

  const std::vector<double>& voltages() const { return voltages_; }

  Assembly assemble(bool with_jacobian) const {
    const std::size_t m = unknowns_.size();
    Assembly out;
    out.residual = Eigen::VectorXd::Zero(m);
    if (with_jacobian) out.jacobian = Eigen::MatrixXd::Zero(m, m);

    const auto stamp_pair = [&](NodeId a, NodeId b, double i, double di_dva,
                                double di_dvb) {
      // current i leaves a and enters b
      const int ia = index_[a], ib = index_[b];
      if (ia >= 0) out.residual[ia] += i;
      if (ib >= 0) out.residual[ib] -= i;
      if (!with_jacobian) return;
      if (ia >= 0) {
        out.jacobian(ia, ia) += di_dva;
        if (ib >= 0) out.jacobian(ia, ib) += di_dvb;
      }
      if (ib >= 0) {
        out.jacobian(ib, ib) -= di_dvb;
        if (ia >= 0) out.jacobian(ib, ia) -= di_dva;
      }
    };

    for (const auto& r : net_.resistors()) {
      const double i = (voltages_[r.a] - voltages_[r.b]) * r.g;
      out.max_branch_current = std::max(out.max_branch_current, std::abs(i));
      stamp_pair(r.a, r.b, i, r.g, -r.g);
    }
    for (const auto& mem : net_.memristors()) {
      const double v = voltages_[mem.plus] - voltages_[mem.minus];
      const double i = mem.branch.i(v);
      const double g = mem.branch.di_dv(v);
      out.max_branch_current = std::max(out.max_branch_current, std::abs(i));
      stamp_pair(mem.plus, mem.minus, i, g, -g);
    }
    for (const auto& f : net_.fets()) {
      const FetEval e =
          mosfet_eval(f.params, voltages_[f.gate], voltages_[f.source], voltages_[f.drain]);
      out.max_branch_current = std::max(out.max_branch_current, std::abs(e.i_d));
      // i_d leaves the drain node and enters the source node
      const int id = index_[f.drain], is = index_[f.source], ig = index_[f.gate];
      if (id >= 0) out.residual[id] += e.i_d;
      if (is >= 0) out.residual[is] -= e.i_d;
      if (with_jacobian) {
        if (id >= 0) {
          out.jacobian(id, id) += e.di_dvd;
          if (is >= 0) out.jacobian(id, is) += e.di_dvs;
          if (ig >= 0) out.jacobian(id, ig) += e.di_dvg;
        }
        if (is >= 0) {
          out.jacobian(is, is) -= e.di_dvs;
          if (id >= 0) out.jacobian(is, id) -= e.di_dvd;
          if (ig >= 0) out.jacobian(is, ig) -= e.di_dvg;
        }
      }
    }
    // leak from every unknown node to ground keeps floats solvable
    for (std::size_t k = 0; k < m; ++k) {
      out.residual[k] += opts_.leak_conductance * voltages_[unknowns_[k]];
      if (with_jacobian) out.jacobian(k, k) += opts_.leak_conductance;
    }
    return out;
  }

  // Linearised initial guess: memristors at their zero-bias conductance,
  // FETs at a crude on-conductance. Deterministic by construction.
  void initial_guess() {
    const std::size_t m = unknowns_.size();
    if (m == 0) return;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m);
    const auto stamp_g = [&](NodeId a, NodeId b, double cond) {
      const int ia = index_[a], ib = index_[b];
      if (ia >= 0) g(ia, ia) += cond;
      if (ib >= 0) g(ib, ib) += cond;
      if (ia >= 0 && ib >= 0) {
        g(ia, ib) -= cond;
        g(ib, ia) -= cond;
      }
      // biased neighbours move to the right-hand side
      if (ia >= 0 && ib < 0) rhs[ia] += cond * voltages_[b];
      if (ib >= 0 && ia < 0) rhs[ib] += cond * voltages_[a];
    };
    for (const auto& r : net_.resistors()) stamp_g(r.a, r.b, r.g);
    for (const auto& mem : net_.memristors()) stamp_g(mem.plus, mem.minus, mem.branch.di_dv(0.0));
    for (const auto& f : net_.fets()) stamp_g(f.source, f.drain, f.params.k_gain);
    for (std::size_t k = 0; k < m; ++k) g(k, k) += opts_.leak_conductance;
    const Eigen::VectorXd x0 = g.partialPivLu().solve(rhs);
    set_unknowns(x0);
  }

 private:
  const Netlist& net_;
  const NewtonOptions& opts_;
  std::vector<int> index_;        // node -> unknown slot or -1
  std::vector<NodeId> unknowns_;  // unknown slot -> node
  std::vector<double> voltages_;
};

}  // namespace

DcSolution solve_dc(const Netlist& net, const std::map<NodeId, double>& biases,
                    const NewtonOptions& opts) {
  System sys(net, biases, opts);
  DcSolution sol;
  if (sys.unknown_count() == 0) {
    sol.v = sys.voltages();
    return sol;
  }

  sys.initial_guess();
  Eigen::VectorXd x = sys.unknown_vector();
  Assembly a = sys.assemble(true);

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    const double tol = std::max(opts.rel_tol * a.max_branch_current, opts.abs_tol);
    const double res = a.residual.lpNorm<Eigen::Infinity>();
    if (res <= tol) {
      sol.v = sys.voltages();
      sol.iterations = iter - 1;
      sol.residual = res;
      sol.max_branch_current = a.max_branch_current;
      return sol;
    }

    Eigen::VectorXd dx = a.jacobian.partialPivLu().solve(-a.residual);
    const double biggest = dx.lpNorm<Eigen::Infinity>();
    if (biggest > opts.step_limit_v) dx *= opts.step_limit_v / biggest;

    // step halving on residual-norm increase
    const double norm0 = a.residual.norm();
    double alpha = 1.0;
    Assembly next;
    for (int halving = 0; halving < 40; ++halving) {
      sys.set_unknowns(x + alpha * dx);
      next = sys.assemble(true);
      if (next.residual.norm() <= norm0 || alpha < 1e-12) break;
      alpha *= 0.5;
    }
    x = x + alpha * dx;
    sys.set_unknowns(x);
    a = std::move(next);
  }

  SolverError err("dc solve: Newton failed to converge, residual = " +
                  std::to_string(a.residual.lpNorm<Eigen::Infinity>()) + " A");
  err.residual = a.residual.lpNorm<Eigen::Infinity>();
  throw err;
}

double terminal_current(const Netlist& net, const std::vector<double>& v, NodeId node) {
  double leaving = 0;
  for (const auto& r : net.resistors()) {
    if (r.a == node) leaving += (v[r.a] - v[r.b]) * r.g;
    if (r.b == node) leaving += (v[r.b] - v[r.a]) * r.g;
  }
  for (const auto& mem : net.memristors()) {
    const double i = mem.branch.i(v[mem.plus] - v[mem.minus]);
    if (mem.plus == node) leaving += i;
    if (mem.minus == node) leaving -= i;
  }
  for (const auto& f : net.fets()) {
    const double i = mosfet_current(f.params, v[f.gate], v[f.source], v[f.drain]);
    if (f.drain == node) leaving += i;
    if (f.source == node) leaving -= i;
  }
  return leaving;
}

}  // namespace rramtk
