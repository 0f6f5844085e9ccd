#pragma once

// Bounded-reachability SAT encoding of diagnosis tests on a DesModel.
//
// Timesteps run 0..n with n = k * (|o| + 1): the i-th observed event is
// pinned to step k * i and the last k steps leave room for unobservable
// behaviour after the final observation. Several events may share a step
// when their components are disjoint; decoding linearises them by event id.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "diagfp/des_model.hpp"
#include "diagfp/sat.hpp"
#include "diagfp/strategy.hpp"

namespace diagfp {

struct EncodingParams {
  std::size_t steps_per_obs = 7;

  std::size_t horizon(std::size_t obs_len) const { return steps_per_obs * (obs_len + 1); }
};

/// Owns a CnfFormula and the variable layout for one model and horizon.
class DesEncoding {
 public:
  DesEncoding(const DesModel& m, std::size_t obs_len, EncodingParams p, SpaceTag tag);

  /// Transition relation, frame axioms, exactly-one states, event/transition
  /// links, per-component at-most-one events and the initial states. For
  /// SqHS also at most one fault per step, so fault order is never ambiguous.
  void encode_model();
  /// Pins observed events to their steps and forbids observables elsewhere.
  void encode_observation(const Observation& o);
  /// Adds the clauses of prop, each assertion guarded by -activation.
  void encode_property(const Property& prop, Lit activation);

  CnfFormula& formula() { return cnf_; }
  const CnfFormula& formula() const { return cnf_; }
  std::size_t horizon() const { return n_; }

  Lit state_var(std::uint32_t c, StateId s, std::size_t t) const;
  Lit event_var(EventId e, std::size_t t) const;

  /// Reads a trace off a model of the formula.
  template <class Value>
  Trace decode(Value&& value) const {
    Trace trace;
    for (std::size_t t = 1; t <= n_; ++t) {
      for (EventId e = 0; e < m_.events().size(); ++e) {
        if (value(event_var(e, t))) trace.push_back(e);
      }
    }
    return trace;
  }

 private:
  Lit counter(FaultId f, std::uint32_t j, std::size_t t);
  Lit occurrence(FaultId f);
  std::vector<Lit> fault_vars(std::size_t t) const;

  const DesModel& m_;
  std::size_t k_;
  std::size_t n_;
  SpaceTag tag_;
  CnfFormula cnf_;
  std::vector<std::vector<Lit>> state_;  // [c][t * |S_c| + s]
  std::vector<Lit> event_;               // [(t - 1) * |E| + e]
  std::vector<std::vector<Lit>> trans_;  // [c][(t - 1) * |T_c| + i]
  std::map<std::uint32_t, Lit> occ_;
  std::map<std::tuple<std::uint32_t, std::uint32_t, std::size_t>, Lit> cnt_;
  std::size_t property_count_ = 0;
};

struct SatOptions {
  EncodingParams params;
};

/// Test solver that builds one CNF per request on top of a cached
/// model-plus-observation encoding.
class DesSatSolver final : public TestSolver {
 public:
  DesSatSolver(const DesModel& model, Observation obs, SpaceTag tag, SatOptions options = {});

  const Space& space() const override { return space_; }
  TestOutcome solve(const PropertySet& request) override;
  std::string name() const override { return "sat"; }
  SolverCounters counters() const override { return counters_; }

  std::size_t horizon() const { return base_.horizon(); }

  /// DIMACS text of the full test: base formula, property clauses, and one
  /// unit clause per activation literal, with a variable map in comments.
  std::string export_dimacs(const PropertySet& request) const;

 private:
  DesEncoding encode_request(const PropertySet& request, std::vector<Lit>& activations) const;

  const DesModel& model_;
  Observation obs_;
  Space space_;
  SatOptions options_;
  DesEncoding base_;
  SolverCounters counters_;
};

}  // namespace diagfp
