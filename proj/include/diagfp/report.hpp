#pragma once

// Diagnosis reports rendered as text or as versioned JSON ("diagfp/1").

#include <optional>
#include <string>
#include <vector>

#include "diagfp/strategy.hpp"

namespace diagfp {

struct DiagnosisReport {
  std::string command;  // diagnose | oracle | verify
  std::string problem;  // des | circuit
  Space space{SpaceTag::SHS, {}};
  std::string strategy;  // empty for oracle runs
  std::string solver;    // sat | explicit | circuit-sat | oracle
  std::vector<Hypothesis> candidates;
  bool complete = true;
  bool oracle = false;
  std::optional<StrategyStats> stats;
  std::optional<SolverCounters> solver_counters;
  std::optional<std::size_t> horizon;  // SAT bound n
  std::optional<std::size_t> steps_per_obs;
  std::optional<std::size_t> oracle_bound;
  std::optional<Verification> verification;
};

std::string report_json(const DiagnosisReport& r);
std::string report_text(const DiagnosisReport& r);

}  // namespace diagfp
