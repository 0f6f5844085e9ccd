#include "diagfp/circuit.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "diagfp/error.hpp"

namespace diagfp {

const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::And: return "and";
    case GateKind::Or: return "or";
    case GateKind::Not: return "not";
    case GateKind::Xor: return "xor";
    case GateKind::Buf: return "buf";
  }
  return "?";
}

GateKind parse_gate_kind(std::string_view text) {
  for (auto k : {GateKind::And, GateKind::Or, GateKind::Not, GateKind::Xor, GateKind::Buf}) {
    if (text == gate_kind_name(k)) return k;
  }
  usage_error("unknown gate kind '" + std::string(text) + "' (expected and|or|not|xor|buf)");
}

bool gate_eval(GateKind kind, const std::vector<bool>& in) {
  switch (kind) {
    case GateKind::And: return std::all_of(in.begin(), in.end(), [](bool b) { return b; });
    case GateKind::Or: return std::any_of(in.begin(), in.end(), [](bool b) { return b; });
    case GateKind::Not: return !in.at(0);
    case GateKind::Buf: return in.at(0);
    case GateKind::Xor: return std::count(in.begin(), in.end(), true) % 2 == 1;
  }
  return false;
}

Circuit::Circuit(std::vector<std::string> inputs, std::vector<std::string> outputs, std::vector<Gate> gates)
    : inputs_(std::move(inputs)), outputs_(std::move(outputs)), gates_(std::move(gates)) {
  std::map<std::string, std::size_t> driver;  // signal -> gate index, or SIZE_MAX for primary inputs
  for (const auto& s : inputs_) {
    if (!driver.emplace(s, SIZE_MAX).second) usage_error("signal '" + s + "' declared as input twice");
    signals_.push_back(s);
  }
  std::set<std::string> names;
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    const auto& gate = gates_[g];
    if (!names.insert(gate.name).second) usage_error("duplicate gate '" + gate.name + "'");
    const bool unary = gate.kind == GateKind::Not || gate.kind == GateKind::Buf;
    if (unary && gate.inputs.size() != 1) usage_error("gate '" + gate.name + "' needs exactly one input");
    if (gate.inputs.empty()) usage_error("gate '" + gate.name + "' has no inputs");
    if (!driver.emplace(gate.output, g).second) usage_error("signal '" + gate.output + "' has more than one driver");
    signals_.push_back(gate.output);
  }
  for (const auto& gate : gates_) {
    for (const auto& in : gate.inputs) {
      if (!driver.count(in)) usage_error("gate '" + gate.name + "' reads undriven signal '" + in + "'");
    }
  }
  for (const auto& o : outputs_) {
    if (!driver.count(o)) usage_error("output '" + o + "' is not driven");
  }
  // Kahn's algorithm over gate dependencies, lowest index first for determinism.
  std::vector<std::size_t> pending(gates_.size(), 0);
  std::vector<std::vector<std::size_t>> readers(gates_.size());
  for (std::size_t g = 0; g < gates_.size(); ++g) {
    for (const auto& in : gates_[g].inputs) {
      const std::size_t d = driver.at(in);
      if (d == SIZE_MAX) continue;
      ++pending[g];
      readers[d].push_back(g);
    }
  }
  std::set<std::size_t> ready;
  for (std::size_t g = 0; g < gates_.size(); ++g)
    if (pending[g] == 0) ready.insert(g);
  while (!ready.empty()) {
    const std::size_t g = *ready.begin();
    ready.erase(ready.begin());
    topo_.push_back(g);
    for (std::size_t r : readers[g])
      if (--pending[r] == 0) ready.insert(r);
  }
  if (topo_.size() != gates_.size()) usage_error("circuit contains a cycle");
}

bool Circuit::has_signal(std::string_view s) const {
  return std::find(signals_.begin(), signals_.end(), s) != signals_.end();
}

Space Circuit::space() const {
  std::vector<std::string> names;
  for (const auto& g : gates_) names.push_back(g.name);
  return Space(SpaceTag::SHS, std::move(names));
}

CircuitProblem parse_circuit(std::string_view text) {
  std::vector<std::string> inputs, outputs;
  std::vector<Gate> gates;
  PinObservation obs;
  std::vector<std::size_t> obs_lines;
  std::istringstream in{std::string(text)};
  std::size_t number = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    try {
      if (tok[0] == "input") {
        inputs.insert(inputs.end(), tok.begin() + 1, tok.end());
      } else if (tok[0] == "output") {
        outputs.insert(outputs.end(), tok.begin() + 1, tok.end());
      } else if (tok[0] == "gate") {
        if (tok.size() < 5) throw ParseError(number, "expected 'gate <name> <kind> <out> <in...>'");
        gates.push_back({tok[1], parse_gate_kind(tok[2]), tok[3], {tok.begin() + 4, tok.end()}});
      } else if (tok[0] == "obs") {
        if (tok.size() != 3 || (tok[2] != "0" && tok[2] != "1")) throw ParseError(number, "expected 'obs <signal> <0|1>'");
        for (const auto& [s, v] : obs.assignments) {
          if (s == tok[1]) throw ParseError(number, "signal '" + tok[1] + "' observed twice");
        }
        obs.assignments.emplace_back(tok[1], tok[2] == "1");
        obs_lines.push_back(number);
      } else {
        throw ParseError(number, "unknown keyword '" + tok[0] + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(number, e.what());
    }
  }
  Circuit circuit = [&] {
    try {
      return Circuit(std::move(inputs), std::move(outputs), std::move(gates));
    } catch (const Error& e) {
      throw ParseError(0, e.what());
    }
  }();
  for (std::size_t i = 0; i < obs.assignments.size(); ++i) {
    if (!circuit.has_signal(obs.assignments[i].first)) {
      throw ParseError(obs_lines[i], "observed signal '" + obs.assignments[i].first + "' does not exist");
    }
  }
  return {std::move(circuit), std::move(obs)};
}

std::string render_circuit(const CircuitProblem& p) {
  std::ostringstream out;
  const auto& c = p.circuit;
  out << "input";
  for (const auto& s : c.inputs()) out << ' ' << s;
  out << "\noutput";
  for (const auto& s : c.outputs()) out << ' ' << s;
  out << '\n';
  for (const auto& g : c.gates()) {
    out << "gate " << g.name << ' ' << gate_kind_name(g.kind) << ' ' << g.output;
    for (const auto& i : g.inputs) out << ' ' << i;
    out << '\n';
  }
  for (const auto& [s, v] : p.observation.assignments) out << "obs " << s << ' ' << (v ? 1 : 0) << '\n';
  return out.str();
}

CnfFormula encode_circuit(const Circuit& c) {
  CnfFormula cnf;
  for (const auto& s : c.signals()) cnf.new_var(s);
  for (const auto& g : c.gates()) cnf.new_var("ab(" + g.name + ")");
  for (const auto& g : c.gates()) {
    const Lit ab = cnf.find_var("ab(" + g.name + ")");
    const Lit out = cnf.find_var(g.output);
    std::vector<Lit> in;
    for (const auto& s : g.inputs) in.push_back(cnf.find_var(s));
    switch (g.kind) {
      case GateKind::Buf:
      case GateKind::Not: {
        const Lit x = g.kind == GateKind::Not ? -in[0] : in[0];
        cnf.add_clause({ab, -out, x});
        cnf.add_clause({ab, out, -x});
        break;
      }
      case GateKind::And: {
        std::vector<Lit> big{ab, out};
        for (Lit x : in) {
          cnf.add_clause({ab, -out, x});
          big.push_back(-x);
        }
        cnf.add_clause(std::move(big));
        break;
      }
      case GateKind::Or: {
        std::vector<Lit> big{ab, -out};
        for (Lit x : in) {
          cnf.add_clause({ab, out, -x});
          big.push_back(x);
        }
        cnf.add_clause(std::move(big));
        break;
      }
      case GateKind::Xor: {
        // Chain the parity through auxiliaries; only the final equation is guarded.
        Lit acc = in[0];
        for (std::size_t i = 1; i < in.size(); ++i) {
          const bool last = i + 1 == in.size();
          const Lit y = last ? out : cnf.new_var(g.name + ".x" + std::to_string(i));
          const Lit a = acc, b = in[i];
          const Lit guard = last ? ab : 0;
          auto emit = [&](std::vector<Lit> cl) {
            if (guard) cl.insert(cl.begin(), guard);
            cnf.add_clause(std::move(cl));
          };
          emit({-y, a, b});
          emit({-y, -a, -b});
          emit({y, -a, b});
          emit({y, a, -b});
          acc = y;
        }
        if (in.size() == 1) {
          cnf.add_clause({ab, -out, in[0]});
          cnf.add_clause({ab, out, -in[0]});
        }
        break;
      }
    }
  }
  return cnf;
}

CircuitSatSolver::CircuitSatSolver(Circuit circuit, PinObservation obs)
    : circuit_(std::move(circuit)), obs_(std::move(obs)), space_(circuit_.space()), base_(encode_circuit(circuit_)) {
  for (const auto& [s, v] : obs_.assignments) {
    const Lit x = base_.find_var(s);
    if (!x) usage_error("observed signal '" + s + "' does not exist");
    base_.add_clause({v ? x : -x});
  }
  for (const auto& g : circuit_.gates()) ab_.push_back(base_.find_var("ab(" + g.name + ")"));
}

CnfFormula CircuitSatSolver::encode_request(const PropertySet& request, std::vector<Lit>& activations) const {
  CnfFormula cnf = base_;
  activations.clear();
  const auto ng = static_cast<std::uint32_t>(ab_.size());
  for (std::size_t i = 0; i < request.size(); ++i) {
    const auto& p = request[i];
    if (p.anchor.tag() != SpaceTag::SHS) usage_error("circuit diagnosis works in the set hypothesis space");
    const Lit a = cnf.new_var("act" + std::to_string(i));
    activations.push_back(a);
    const auto& h = p.anchor;
    switch (p.kind) {
      case PropertyKind::Desc:
        for (FaultId f : h.faults()) cnf.add_clause({-a, ab_[f.index]});
        break;
      case PropertyKind::Anc:
        for (std::uint32_t g = 0; g < ng; ++g)
          if (!h.count(FaultId{g})) cnf.add_clause({-a, -ab_[g]});
        break;
      case PropertyKind::NegDesc: {
        std::vector<Lit> cl{-a};
        for (FaultId f : h.faults()) cl.push_back(-ab_[f.index]);
        cnf.add_clause(std::move(cl));
        break;
      }
      case PropertyKind::NegAnc: {
        std::vector<Lit> cl{-a};
        for (std::uint32_t g = 0; g < ng; ++g)
          if (!h.count(FaultId{g})) cl.push_back(ab_[g]);
        cnf.add_clause(std::move(cl));
        break;
      }
    }
  }
  return cnf;
}

TestOutcome CircuitSatSolver::solve(const PropertySet& request) {
  ++counters_.tests;
  std::vector<Lit> activations;
  const CnfFormula cnf = encode_request(request, activations);
  SatSolver sat;
  sat.add_formula(cnf);
  const auto result = sat.solve(activations);
  counters_.work += sat.conflicts();
  if (result == SatSolver::Result::Unsat) {
    ++counters_.failures;
    const auto& failed = sat.failed_assumptions();
    Conflict conflict;
    for (std::size_t i = 0; i < request.size(); ++i) {
      if (std::find(failed.begin(), failed.end(), activations[i]) != failed.end()) conflict.props.add(request[i]);
    }
    return TestFailed{std::move(conflict)};
  }
  std::vector<FaultId> broken;
  for (std::uint32_t g = 0; g < ab_.size(); ++g)
    if (sat.model_value(ab_[g])) broken.push_back(FaultId{g});
  Hypothesis h = Hypothesis::set(std::move(broken));
  if (!member(h, request)) {
    throw Error(ErrorCode::InternalConsistency, "circuit model " + render(h, space_) + " violates the request");
  }
  std::vector<std::string> witness;
  for (const auto& s : circuit_.signals()) witness.push_back(s + "=" + (sat.model_value(cnf.find_var(s)) ? "1" : "0"));
  ++counters_.candidates;
  return CandidateFound{std::move(h), std::move(witness)};
}

std::string CircuitSatSolver::export_dimacs(const PropertySet& request) const {
  std::vector<Lit> activations;
  const CnfFormula cnf = encode_request(request, activations);
  std::vector<std::string> comments{"diagfp circuit test"};
  for (std::size_t i = 0; i < request.size(); ++i) {
    comments.push_back("assumption " + std::to_string(activations[i]) + " " + render(request[i], space_));
  }
  return cnf.to_dimacs(comments, activations);
}

}  // namespace diagfp
