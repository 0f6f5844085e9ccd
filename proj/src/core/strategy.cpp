#include "diagfp/strategy.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "diagfp/error.hpp"

namespace diagfp {

const char* strategy_name(StrategyKind kind) {
  switch (kind) {
    case StrategyKind::PLS: return "pls";
    case StrategyKind::PLSr: return "pls-r";
    case StrategyKind::PFS: return "pfs";
    case StrategyKind::PFSe: return "pfs-e";
    case StrategyKind::PFSc: return "pfs-c";
    case StrategyKind::PFSec: return "pfs-ec";
  }
  return "?";
}

StrategyKind parse_strategy(std::string_view text) {
  for (auto k : {StrategyKind::PLS, StrategyKind::PLSr, StrategyKind::PFS, StrategyKind::PFSe, StrategyKind::PFSc,
                 StrategyKind::PFSec}) {
    if (text == strategy_name(k)) return k;
  }
  usage_error("unknown strategy '" + std::string(text) + "' (expected pls|pls-r|pfs|pfs-e|pfs-c|pfs-ec)");
}

namespace {

class Stopwatch {
 public:
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

const CandidateFound* as_candidate(const TestOutcome& o) { return std::get_if<CandidateFound>(&o); }

}  // namespace

DiagnosisResult run_pls(TestSolver& solver, const StrategyOptions& options) {
  Stopwatch clock;
  DiagnosisResult result;
  std::vector<Hypothesis> found;
  while (true) {
    if (result.stats.iterations >= options.iteration_cap) {
      result.complete = false;
      break;
    }
    ++result.stats.iterations;
    ++result.stats.tests;
    ++result.stats.coverage_tests;
    auto outcome = solver.solve(question_coverage(found));
    const auto* cand = as_candidate(outcome);
    if (!cand) break;
    found.push_back(cand->hypothesis);
  }
  result.minimal_candidates = min_antichain(found);
  result.stats.wall_ms = clock.elapsed_ms();
  return result;
}

DiagnosisResult run_pls_r(TestSolver& solver, const StrategyOptions& options) {
  Stopwatch clock;
  DiagnosisResult result;
  std::vector<Hypothesis> found;
  auto budget_left = [&] { return result.stats.iterations < options.iteration_cap; };
  bool exhausted = false;
  while (!exhausted) {
    if (!budget_left()) {
      exhausted = true;
      break;
    }
    ++result.stats.iterations;
    ++result.stats.tests;
    ++result.stats.coverage_tests;
    auto outcome = solver.solve(question_coverage(found));
    const auto* cand = as_candidate(outcome);
    if (!cand) break;
    Hypothesis delta = cand->hypothesis;
    while (true) {
      if (!budget_left()) {
        exhausted = true;
        break;
      }
      ++result.stats.iterations;
      ++result.stats.tests;
      ++result.stats.minimality_tests;
      auto refined = solver.solve(question_minimal(delta));
      const auto* better = as_candidate(refined);
      if (!better) break;
      delta = better->hypothesis;
    }
    if (exhausted) break;
    found.push_back(std::move(delta));
  }
  result.complete = !exhausted;
  // Every stored element is minimal; sorting only fixes the output order.
  result.minimal_candidates = min_antichain(found);
  result.stats.wall_ms = clock.elapsed_ms();
  return result;
}

DiagnosisResult run_pfs(TestSolver& solver, StrategyKind variant, const StrategyOptions& options) {
  const bool essential = variant == StrategyKind::PFSe || variant == StrategyKind::PFSec;
  const bool conflicts = variant == StrategyKind::PFSc || variant == StrategyKind::PFSec;
  if (variant == StrategyKind::PLS || variant == StrategyKind::PLSr) usage_error("run_pfs needs a pfs variant");

  Stopwatch clock;
  DiagnosisResult result;
  const Space& space = solver.space();
  std::set<Hypothesis> open{Hypothesis::nominal(space.tag())};
  std::vector<Hypothesis> found;
  std::vector<Conflict> cache;

  while (!open.empty()) {
    if (result.stats.iterations >= options.iteration_cap) {
      result.complete = false;
      break;
    }
    ++result.stats.iterations;
    Hypothesis h = *open.begin();
    open.erase(open.begin());

    auto subsumes = [&](const Hypothesis& g) { return leq(g, h); };
    if (std::any_of(open.begin(), open.end(), subsumes) || std::any_of(found.begin(), found.end(), subsumes)) {
      continue;
    }

    if (essential) {
      std::vector<Hypothesis> rest(open.begin(), open.end());
      rest.insert(rest.end(), found.begin(), found.end());
      ++result.stats.tests;
      ++result.stats.coverage_tests;
      if (!is_candidate(solver.solve(question_coverage(rest)))) continue;
    }

    std::optional<Conflict> conflict;
    if (conflicts && options.conflict_cache) {
      for (const auto& c : cache) {
        if (member(h, c.props)) {
          conflict = c;
          ++result.stats.conflicts_used;
          break;
        }
      }
    }
    if (!conflict) {
      ++result.stats.tests;
      ++result.stats.candidate_tests;
      auto outcome = solver.solve(question_candidate(h, space, options.encoding));
      if (const auto* cand = as_candidate(outcome)) {
        if (cand->hypothesis != h) {
          throw Error(ErrorCode::InternalConsistency,
                      "candidate test for " + render(h, space) + " returned " + render(cand->hypothesis, space));
        }
        for (const auto& g : found) {
          if (leq(g, h) || leq(h, g)) {
            throw Error(ErrorCode::InternalConsistency, "result set would lose the antichain property");
          }
        }
        found.push_back(h);
        continue;
      }
      conflict = std::get<TestFailed>(outcome).conflict;
      if (conflicts) cache.push_back(*conflict);
    }

    ++result.stats.expanded;
    auto successors = conflicts ? conflict_successors(h, *conflict, space) : children(h, space);
    for (auto& s : successors) open.insert(std::move(s));
  }

  result.minimal_candidates = found;
  canonicalize(result.minimal_candidates);
  result.stats.wall_ms = clock.elapsed_ms();
  return result;
}

DiagnosisResult run_strategy(StrategyKind kind, TestSolver& solver, const StrategyOptions& options) {
  switch (kind) {
    case StrategyKind::PLS: return run_pls(solver, options);
    case StrategyKind::PLSr: return run_pls_r(solver, options);
    default: return run_pfs(solver, kind, options);
  }
}

std::vector<Hypothesis> conflict_successors(const Hypothesis& h, const Conflict& c, const Space& space) {
  std::vector<Hypothesis> merged;
  for (const auto& p : c.props) {
    switch (p.kind) {
      case PropertyKind::Desc:
        break;
      case PropertyKind::NegDesc: {
        auto lcd = otimes(h, p.anchor);
        merged.insert(merged.end(), lcd.begin(), lcd.end());
        break;
      }
      case PropertyKind::Anc:
      case PropertyKind::NegAnc:
        // desc(h) \ hypos(C) is not determined by the NegDesc part alone here.
        return children(h, space);
    }
  }
  return min_antichain(merged);
}

Verification verify_minimal_diagnosis(std::span<const Hypothesis> s, TestSolver& solver) {
  const Space& space = solver.space();
  Verification v;

  ConditionCheck candidacy;
  candidacy.name = "candidacy";
  for (const auto& h : s) {
    if (!is_candidate(solver.solve(question_candidate(h, space)))) {
      candidacy.passed = false;
      candidacy.witness = h;
      candidacy.detail = render(h, space) + " is not a candidate";
      break;
    }
  }

  ConditionCheck domination;
  domination.name = "non_domination";
  for (const auto& a : s) {
    for (const auto& b : s) {
      if (less(a, b) && domination.passed) {
        domination.passed = false;
        domination.witness = b;
        domination.detail = render(a, space) + " is strictly preferred to " + render(b, space);
      }
    }
  }

  ConditionCheck minimality;
  minimality.name = "minimality";
  for (const auto& h : s) {
    auto outcome = solver.solve(question_minimal(h));
    if (const auto* cand = std::get_if<CandidateFound>(&outcome)) {
      minimality.passed = false;
      minimality.witness = cand->hypothesis;
      minimality.detail = render(cand->hypothesis, space) + " is a candidate strictly preferred to " + render(h, space);
      break;
    }
  }

  ConditionCheck coverage;
  coverage.name = "coverage";
  {
    auto outcome = solver.solve(question_coverage(s));
    if (const auto* cand = std::get_if<CandidateFound>(&outcome)) {
      coverage.passed = false;
      coverage.witness = cand->hypothesis;
      coverage.detail = "candidate " + render(cand->hypothesis, space) + " is not covered";
    }
  }

  v.conditions = {candidacy, domination, minimality, coverage};
  v.passed = std::all_of(v.conditions.begin(), v.conditions.end(), [](const auto& c) { return c.passed; });
  return v;
}

}  // namespace diagfp
