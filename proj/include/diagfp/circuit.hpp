#pragma once

// Boolean circuits under the weak fault model: netlist parsing, the CNF
// reduction with one health variable per gate, and a test solver over the
// set hypothesis space whose fault alphabet is the gate names.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "diagfp/sat.hpp"
#include "diagfp/strategy.hpp"

namespace diagfp {

enum class GateKind { And, Or, Not, Xor, Buf };

const char* gate_kind_name(GateKind kind);
GateKind parse_gate_kind(std::string_view text);
bool gate_eval(GateKind kind, const std::vector<bool>& inputs);

struct Gate {
  std::string name;
  GateKind kind;
  std::string output;
  std::vector<std::string> inputs;
};

class Circuit {
 public:
  /// Validates: unique gate names, one driver per signal, every used signal
  /// driven, arity (not/buf exactly one input, others at least one), acyclic.
  Circuit(std::vector<std::string> inputs, std::vector<std::string> outputs, std::vector<Gate> gates);

  const std::vector<std::string>& inputs() const { return inputs_; }
  const std::vector<std::string>& outputs() const { return outputs_; }
  const std::vector<Gate>& gates() const { return gates_; }
  /// All signals: primary inputs first, then gate outputs in declaration order.
  const std::vector<std::string>& signals() const { return signals_; }
  /// Gate indices in an order where every gate follows the drivers of its inputs.
  const std::vector<std::size_t>& topological_order() const { return topo_; }
  bool has_signal(std::string_view s) const;

  /// SHS over the gate names, in declaration order.
  Space space() const;

 private:
  std::vector<std::string> inputs_, outputs_;
  std::vector<Gate> gates_;
  std::vector<std::string> signals_;
  std::vector<std::size_t> topo_;
};

struct PinObservation {
  std::vector<std::pair<std::string, bool>> assignments;
};

struct CircuitProblem {
  Circuit circuit;
  PinObservation observation;
};

/// `input`, `output`, `gate <name> <kind> <out> <in...>` and `obs <signal> <0|1>` lines.
CircuitProblem parse_circuit(std::string_view text);
std::string render_circuit(const CircuitProblem& p);

/// Signal variables named after the signals, health variables "ab(<gate>)".
/// Each gate's clauses carry ab(<gate>) so a faulty gate is unconstrained.
CnfFormula encode_circuit(const Circuit& c);

class CircuitSatSolver final : public TestSolver {
 public:
  CircuitSatSolver(Circuit circuit, PinObservation obs);

  const Space& space() const override { return space_; }
  TestOutcome solve(const PropertySet& request) override;
  std::string name() const override { return "circuit-sat"; }
  SolverCounters counters() const override { return counters_; }

  std::string export_dimacs(const PropertySet& request) const;

 private:
  CnfFormula encode_request(const PropertySet& request, std::vector<Lit>& activations) const;

  Circuit circuit_;
  PinObservation obs_;
  Space space_;
  CnfFormula base_;
  std::vector<Lit> ab_;
  SolverCounters counters_;
};

}  // namespace diagfp
