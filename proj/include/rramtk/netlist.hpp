#pragma once

#include <map>
#include <string>
#include <vector>

#include "rramtk/cell.hpp"
#include "rramtk/mosfet.hpp"

namespace rramtk {

using NodeId = int;

/// Flat node/branch circuit description consumed by the damped-Newton DC
/// solver. Elements: resistors, memristor branches (sinh IV at a frozen
/// state, or linear) and square-law FETs. Gates and bulks draw no current.
class Netlist {
 public:
  NodeId add_node(std::string name);
  std::size_t node_count() const { return names_.size(); }
  const std::string& node_name(NodeId n) const { return names_.at(n); }

  void add_resistor(NodeId a, NodeId b, double ohms);
  void add_conductance(NodeId a, NodeId b, double siemens);
  /// Returns the device index used to update the frozen state later.
  std::size_t add_memristor(NodeId plus, NodeId minus, MemBranch branch);
  std::size_t add_fet(MosfetParams m, NodeId gate, NodeId source, NodeId drain,
                      NodeId bulk, std::string name);

  std::size_t memristor_count() const { return mems_.size(); }
  MemBranch& memristor(std::size_t idx) { return mems_[idx].branch; }
  const MemBranch& memristor(std::size_t idx) const { return mems_[idx].branch; }
  /// Voltage across memristor idx (plus minus minus) in a solution.
  double memristor_voltage(std::size_t idx, const std::vector<double>& v) const;

  std::size_t fet_count() const { return fets_.size(); }
  const MosfetParams& fet_params(std::size_t idx) const { return fets_[idx].params; }
  FetOperatingPoint fet_operating_point(std::size_t idx,
                                        const std::vector<double>& v) const;

  struct Resistor {
    NodeId a, b;
    double g;
  };
  struct Memristor {
    NodeId plus, minus;
    MemBranch branch;
  };
  struct Fet {
    MosfetParams params;
    NodeId gate, source, drain, bulk;
    std::string name;
  };
  const std::vector<Resistor>& resistors() const { return resistors_; }
  const std::vector<Memristor>& memristors() const { return mems_; }
  const std::vector<Fet>& fets() const { return fets_; }

 private:
  std::vector<std::string> names_;
  std::vector<Resistor> resistors_;
  std::vector<Memristor> mems_;
  std::vector<Fet> fets_;
};

struct NewtonOptions {
  int max_iterations = 50;
  double rel_tol = 1e-9;            ///< KCL residual vs largest branch current
  double abs_tol = 1e-18;           ///< A, floor for currentless networks
  double leak_conductance = 1e-12;  ///< S to ground from every unknown node
  double step_limit_v = 10.0;       ///< per-iteration voltage step cap
};

struct DcSolution {
  std::vector<double> v;  ///< per-node voltages
  int iterations = 0;
  double residual = 0;            ///< max |KCL| over unknown nodes (A)
  double max_branch_current = 0;  ///< scale the residual was checked against
};

/// Damped Newton on the nodal equations. Nodes absent from `biases` float
/// behind the leak conductance. Step halving on residual increase; throws
/// SolverError with the residual in the message on non-convergence.
DcSolution solve_dc(const Netlist& net, const std::map<NodeId, double>& biases,
                    const NewtonOptions& opts = {});

/// Current injected into the circuit at a biased node (sum of branch
/// currents leaving it).
double terminal_current(const Netlist& net, const std::vector<double>& v, NodeId node);

}  // namespace rramtk
