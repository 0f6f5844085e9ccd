#pragma once

// Exploration strategies (PLS, PLS+r, PFS and its e/c/ec variants) over an
// abstract test solver, conflict-directed successors and the minimal
// diagnosis verifier.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "diagfp/hypothesis.hpp"
#include "diagfp/property.hpp"

namespace diagfp {

struct CandidateFound {
  Hypothesis hypothesis;
  std::vector<std::string> witness;  // behaviour trace (event names), empty for static systems
};

struct TestFailed {
  Conflict conflict;
};

using TestOutcome = std::variant<CandidateFound, TestFailed>;

inline bool is_candidate(const TestOutcome& o) { return std::holds_alternative<CandidateFound>(o); }

struct SolverCounters {
  std::uint64_t tests = 0;
  std::uint64_t candidates = 0;
  std::uint64_t failures = 0;
  std::uint64_t work = 0;  // visited states (explicit) or conflicts (CDCL)
};

/// Contract every test solver honours: a Candidate exhibits all requested
/// properties, and a conflict is a subset of the requested properties whose
/// hypothesis set contains no candidate.
class TestSolver {
 public:
  virtual ~TestSolver() = default;
  virtual const Space& space() const = 0;
  virtual TestOutcome solve(const PropertySet& request) = 0;
  virtual std::string name() const = 0;
  virtual SolverCounters counters() const = 0;
};

enum class StrategyKind { PLS, PLSr, PFS, PFSe, PFSc, PFSec };

const char* strategy_name(StrategyKind kind);  // pls|pls-r|pfs|pfs-e|pfs-c|pfs-ec
StrategyKind parse_strategy(std::string_view text);

struct StrategyOptions {
  std::size_t iteration_cap = 10000;
  bool conflict_cache = true;  // c/ec variants only
  CandidateEncoding encoding = CandidateEncoding::Children;
};

struct StrategyStats {
  std::uint64_t tests = 0;
  std::uint64_t candidate_tests = 0;
  std::uint64_t coverage_tests = 0;
  std::uint64_t minimality_tests = 0;
  std::uint64_t conflicts_used = 0;  // cache hits that replaced a test
  std::uint64_t expanded = 0;        // hypotheses whose successors were generated
  std::uint64_t iterations = 0;
  double wall_ms = 0;
};

struct DiagnosisResult {
  std::vector<Hypothesis> minimal_candidates;  // canonical order
  bool complete = true;  // false when the iteration cap was hit
  StrategyStats stats;
};

DiagnosisResult run_pls(TestSolver& solver, const StrategyOptions& options = {});
DiagnosisResult run_pls_r(TestSolver& solver, const StrategyOptions& options = {});
DiagnosisResult run_pfs(TestSolver& solver, StrategyKind variant, const StrategyOptions& options = {});
DiagnosisResult run_strategy(StrategyKind kind, TestSolver& solver, const StrategyOptions& options = {});

/// min(desc(h) \ hypos(c)) computed through ⊗ over the NegDesc anchors of c.
std::vector<Hypothesis> conflict_successors(const Hypothesis& h, const Conflict& c, const Space& space);

struct ConditionCheck {
  std::string name;  // candidacy | non_domination | minimality | coverage
  bool passed = true;
  std::optional<Hypothesis> witness;
  std::string detail;
};

struct Verification {
  bool passed = true;
  std::vector<ConditionCheck> conditions;
};

/// Checks that s is the minimal diagnosis: every element is a candidate,
/// no element dominates another, every element is minimal, and s covers
/// the diagnosis.
Verification verify_minimal_diagnosis(std::span<const Hypothesis> s, TestSolver& solver);

}  // namespace diagfp
