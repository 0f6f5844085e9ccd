#pragma once

// Exact test solver: breadth-first search over the product of the model's
// components, an observation tracker and one monitor per property. Also
// hosts the enumeration oracle used to cross-check the other solvers.

#include <optional>
#include <span>
#include <vector>

#include "diagfp/des_model.hpp"
#include "diagfp/strategy.hpp"

namespace diagfp {

struct ExplicitOptions {
  std::size_t state_budget = 5'000'000;
};

class ExplicitSolver final : public TestSolver {
 public:
  ExplicitSolver(const DesModel& model, Observation obs, SpaceTag tag, ExplicitOptions options = {});

  const Space& space() const override { return space_; }
  TestOutcome solve(const PropertySet& request) override;
  std::string name() const override { return "explicit"; }
  SolverCounters counters() const override { return counters_; }

  /// Is some candidate dominated by no element of s?
  TestOutcome solve_coverage(std::span<const Hypothesis> s) { return solve(question_coverage(s)); }

  /// Search outcome plus the trace that produced it, for callers that want
  /// event ids rather than names.
  std::optional<Trace> last_witness() const { return last_witness_; }

 private:
  const DesModel& model_;
  Observation obs_;
  Space space_;
  ExplicitOptions options_;
  SolverCounters counters_;
  std::optional<Trace> last_witness_;
};

/// Number of global states reachable from the initial tuples (all events enabled).
std::size_t reachable_global_states(const DesModel& m, std::size_t budget = 5'000'000);

/// Length of the longest path of unobservable events among reachable global
/// states, or nullopt if such paths can loop.
std::optional<std::size_t> silent_depth(const DesModel& m, std::size_t budget = 5'000'000);

/// (R + 1) * (|o| + 1) with R the number of reachable global states: every
/// minimal candidate has a witness no longer than this.
std::size_t certified_bound(const DesModel& m, const Observation& o, std::size_t budget = 5'000'000);

/// Hypotheses of every trace of length <= bound that the model accepts and
/// that matches o, in canonical order. Throws StateBudget past the budget.
std::vector<Hypothesis> oracle_candidates(const DesModel& m, const Observation& o, SpaceTag tag, std::size_t bound,
                                          std::size_t budget = 5'000'000);

/// min_antichain(oracle_candidates(...)).
std::vector<Hypothesis> oracle_diagnose(const DesModel& m, const Observation& o, SpaceTag tag, std::size_t bound,
                                        std::size_t budget = 5'000'000);

}  // namespace diagfp
