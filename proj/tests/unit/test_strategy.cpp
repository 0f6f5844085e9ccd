#include <functional>

#include "diagfp/explicit_solver.hpp"
#include "diagfp/strategy.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace diagfp;

namespace {

Hypothesis H(const char* text, const Space& s) { return parse_hypothesis(text, s); }

// Answers tests from an explicit finite candidate set. The conflict is either
// the whole request or a greedily shrunk subset of it.
class ListSolver final : public TestSolver {
 public:
  enum class Pick { Smallest, Largest };

  ListSolver(Space space, std::vector<Hypothesis> candidates, bool shrink_conflicts, Pick pick = Pick::Smallest)
      : space_(std::move(space)), candidates_(std::move(candidates)), shrink_(shrink_conflicts), pick_(pick) {
    canonicalize(candidates_);
  }

  const Space& space() const override { return space_; }
  std::string name() const override { return "list"; }
  SolverCounters counters() const override { return counters_; }

  TestOutcome solve(const PropertySet& request) override {
    ++counters_.tests;
    requests.push_back(request);
    const std::size_t nf = space_.fault_count();
    std::vector<Hypothesis> hits;
    for (const auto& h : candidates_)
      if (ref::member(h, request, nf)) hits.push_back(h);
    if (!hits.empty()) {
      ++counters_.candidates;
      return CandidateFound{pick_ == Pick::Smallest ? hits.front() : hits.back(), {}};
    }
    ++counters_.failures;
    PropertySet core = request;
    if (shrink_) {
      for (std::size_t i = 0; i < core.size();) {
        PropertySet without;
        for (std::size_t j = 0; j < core.size(); ++j)
          if (j != i) without.add(core[j]);
        if (!ref::any_member(candidates_, without, nf)) {
          core = without;
        } else {
          ++i;
        }
      }
    }
    return TestFailed{Conflict{core}};
  }

  std::vector<PropertySet> requests;

 private:
  Space space_;
  std::vector<Hypothesis> candidates_;
  bool shrink_;
  Pick pick_;
  SolverCounters counters_;
};

const StrategyKind kAll[] = {StrategyKind::PLS,  StrategyKind::PLSr, StrategyKind::PFS,
                             StrategyKind::PFSe, StrategyKind::PFSc, StrategyKind::PFSec};

}  // namespace

TEST_CASE("strategy names round trip") {
  for (auto k : kAll) CHECK(parse_strategy(strategy_name(k)) == k);
  CHECK_THROWS_AS(parse_strategy("dfs"), Error);
}

TEST_CASE("empty diagnosis: the first coverage test fails") {
  Space sh(SpaceTag::SHS, {"f"});
  for (auto k : kAll) {
    ListSolver solver(sh, {}, true);
    auto r = run_strategy(k, solver);
    CHECK(r.complete);
    CHECK(r.minimal_candidates.empty());
  }
  ListSolver solver(sh, {}, false);
  run_pls(solver);
  CHECK(solver.requests.size() == 1);
}

TEST_CASE("all hypotheses candidates: PLS needs |F|+1 tests with a cooperative solver") {
  Space sh(SpaceTag::SHS, {"a", "b", "c"});
  ListSolver solver(sh, ref::universe(SpaceTag::SHS, 3, 3), false);
  auto r = run_pls(solver);
  CHECK(r.minimal_candidates == std::vector<Hypothesis>{Hypothesis::nominal(SpaceTag::SHS)});
  CHECK(r.stats.tests <= 4);
}

TEST_CASE("PLS+r refines a non-minimal candidate") {
  // {f} is a candidate and {f,g} too; the solver always answers with the largest.
  Space sh(SpaceTag::SHS, {"f", "g"});
  ListSolver solver(sh, {H("{f}", sh), H("{f,g}", sh)}, false, ListSolver::Pick::Largest);
  auto r = run_pls_r(solver);
  CHECK(r.minimal_candidates == std::vector<Hypothesis>{H("{f}", sh)});
  CHECK(r.stats.minimality_tests >= 1);
}

TEST_CASE("PLS with an adversarial solver on an infinite space hits the cap") {
  Space ms(SpaceTag::MHS, {"f"});
  std::vector<Hypothesis> cands;
  for (std::uint32_t i = 0; i < 200; ++i) cands.push_back(Hypothesis::multiset({{FaultId{0}, i}}));
  ListSolver solver(ms, cands, false, ListSolver::Pick::Largest);
  StrategyOptions opt;
  opt.iteration_cap = 50;
  auto r = run_pls(solver, opt);
  CHECK_FALSE(r.complete);
}

TEST_CASE("every strategy agrees with the reference minimum on random candidate sets") {
  for (auto tag : {SpaceTag::SHS, SpaceTag::MHS, SpaceTag::SqHS}) {
    Space s(tag, {"f1", "f2", "f3"});
    std::mt19937_64 rng(101 + static_cast<int>(tag));
    for (int i = 0; i < 60; ++i) {
      // Upward-closed-within-bound candidate sets keep PFS finite.
      std::vector<Hypothesis> seeds;
      for (int k = 0; k < 1 + i % 3; ++k) seeds.push_back(ref::random_hypothesis(rng, tag, 3, 2));
      std::vector<Hypothesis> cands;
      for (const auto& h : ref::universe(tag, 3, 3))
        for (const auto& sd : seeds)
          if (ref::leq(sd, h, 3)) {
            cands.push_back(h);
            break;
          }
      const auto expected = ref::minimal(cands, 3);
      for (auto k : kAll) {
        for (bool shrink : {false, true}) {
          ListSolver solver(s, cands, shrink);
          StrategyOptions opt;
          opt.iteration_cap = 1500;
          auto r = run_strategy(k, solver, opt);
          if (!r.complete) {
            // Only plain PFS / PFS+c may wander off into the infinite part of the space.
            CHECK((k == StrategyKind::PFS || k == StrategyKind::PFSc));
            CHECK(tag != SpaceTag::SHS);
            continue;
          }
          CHECK(r.minimal_candidates == expected);
          CHECK(is_antichain(r.minimal_candidates));
        }
      }
    }
  }
}

TEST_CASE("conflict_successors examples") {
  Space sq(SpaceTag::SqHS, {"f1", "f2", "f3"});
  const auto h0 = Hypothesis::nominal(SpaceTag::SqHS);
  Conflict c6{PropertySet{Property::neg_desc(H("[f1]", sq)), Property::neg_desc(H("[f2]", sq))}};
  CHECK(conflict_successors(h0, c6, sq) == std::vector<Hypothesis>{H("[f1]", sq), H("[f2]", sq)});

  Conflict c7;
  std::vector<Hypothesis> pairs;
  for (const auto& h : ref::universe(SpaceTag::SqHS, 3, 2))
    if (h.size() == 2) {
      pairs.push_back(h);
      c7.props.add(Property::neg_desc(h));
    }
  CHECK(pairs.size() == 9);
  CHECK(conflict_successors(h0, c7, sq) == pairs);

  Space sh(SpaceTag::SHS, {"a", "b", "c"});
  const auto h = H("{a}", sh);
  CHECK(conflict_successors(h, Conflict{question_candidate(h, sh)}, sh) == children(h, sh));
  CHECK(conflict_successors(h, Conflict{PropertySet{Property::desc(h)}}, sh).empty());
}

TEST_CASE("conflict_successors equals brute-force min(desc(h) minus hypos(C)) on SqHS") {
  Space sq(SpaceTag::SqHS, {"f1", "f2"});
  const std::size_t bound = 5;
  const auto all = ref::universe(SpaceTag::SqHS, 2, bound);
  std::mt19937_64 rng(77);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    auto h = ref::random_hypothesis(rng, SpaceTag::SqHS, 2, 1);
    Conflict c;
    c.props.add(Property::desc(h));
    for (int k = 0; k < 1 + i % 3; ++k) {
      auto g = ref::random_descendant(rng, ref::random_hypothesis(rng, SpaceTag::SqHS, 2, 1), 2, 1);
      if (!ref::leq(g, h, 2)) c.props.add(Property::neg_desc(g));
    }
    if (!ref::member(h, c.props, 2)) continue;
    std::vector<Hypothesis> outside;
    for (const auto& d : all)
      if (ref::leq(h, d, 2) && !ref::member(d, c.props, 2)) outside.push_back(d);
    auto got = conflict_successors(h, c, sq);
    for (const auto& g : got) REQUIRE(g.size() <= bound);
    CHECK(got == ref::minimal(outside, 2));
    ++checked;
  }
  CHECK(checked > 100);
}

TEST_CASE("PFS with conflicts returns the same set with no more tests") {
  Space sq(SpaceTag::SqHS, {"f1", "f2", "f3"});
  std::vector<Hypothesis> cands;
  for (const auto& h : ref::universe(SpaceTag::SqHS, 3, 3))
    if (ref::leq(H("[f2,f3]", sq), h, 3) || ref::leq(H("[f1,f1]", sq), h, 3)) cands.push_back(h);
  ListSolver plain(sq, cands, true);
  ListSolver with(sq, cands, true);
  auto a = run_pfs(plain, StrategyKind::PFSe);
  auto b = run_pfs(with, StrategyKind::PFSec);
  REQUIRE(a.complete);
  REQUIRE(b.complete);
  CHECK(a.minimal_candidates == b.minimal_candidates);
  CHECK(b.stats.candidate_tests <= a.stats.candidate_tests);
}

TEST_CASE("conflict cache replaces tests in PFS+c") {
  Space sh(SpaceTag::SHS, {"a", "b", "c", "d"});
  std::vector<Hypothesis> cands;
  for (const auto& h : ref::universe(SpaceTag::SHS, 4, 4))
    if (ref::leq(H("{c,d}", sh), h, 4)) cands.push_back(h);
  ListSolver on(sh, cands, true);
  ListSolver off(sh, cands, true);
  StrategyOptions no_cache;
  no_cache.conflict_cache = false;
  auto r1 = run_pfs(on, StrategyKind::PFSc);
  auto r2 = run_pfs(off, StrategyKind::PFSc, no_cache);
  CHECK(r1.minimal_candidates == std::vector<Hypothesis>{H("{c,d}", sh)});
  CHECK(r2.minimal_candidates == r1.minimal_candidates);
  CHECK(r1.stats.tests <= r2.stats.tests);
}

TEST_CASE("candidates stored by PFS satisfy their candidacy question") {
  Space ms(SpaceTag::MHS, {"a", "b"});
  std::vector<Hypothesis> cands;
  for (const auto& h : ref::universe(SpaceTag::MHS, 2, 4))
    if (ref::leq(H("{a:2}", ms), h, 2) || ref::leq(H("{a:1,b:1}", ms), h, 2)) cands.push_back(h);
  ListSolver solver(ms, cands, true);
  auto r = run_pfs(solver, StrategyKind::PFSec);
  CHECK(r.minimal_candidates == std::vector<Hypothesis>{H("{a:1,b:1}", ms), H("{a:2}", ms)});
  for (const auto& h : r.minimal_candidates) CHECK(ref::any_member(cands, question_candidate(h, ms), 2));
}

TEST_CASE("verify_minimal_diagnosis") {
  Space sh(SpaceTag::SHS, {"a", "b"});
  std::vector<Hypothesis> cands{H("{a}", sh), H("{a,b}", sh), H("{b}", sh)};
  ListSolver solver(sh, cands, true);
  std::vector<Hypothesis> good{H("{a}", sh), H("{b}", sh)};
  CHECK(verify_minimal_diagnosis(good, solver).passed);

  auto empty = verify_minimal_diagnosis(std::vector<Hypothesis>{}, solver);
  CHECK_FALSE(empty.passed);
  bool coverage_failed = false;
  for (const auto& c : empty.conditions)
    if (c.name == "coverage" && !c.passed) coverage_failed = c.witness.has_value();
  CHECK(coverage_failed);

  std::vector<Hypothesis> missing{H("{a}", sh)};
  CHECK_FALSE(verify_minimal_diagnosis(missing, solver).passed);

  std::vector<Hypothesis> chain{H("{a}", sh), H("{a,b}", sh), H("{b}", sh)};
  auto v = verify_minimal_diagnosis(chain, solver);
  CHECK_FALSE(v.passed);
  bool dom_failed = false;
  for (const auto& c : v.conditions)
    if (c.name == "non_domination") dom_failed = !c.passed;
  CHECK(dom_failed);

  ListSolver nominal_ok(sh, {Hypothesis::nominal(SpaceTag::SHS), H("{a}", sh)}, true);
  std::vector<Hypothesis> both{Hypothesis::nominal(SpaceTag::SHS), H("{a}", sh)};
  CHECK_FALSE(verify_minimal_diagnosis(both, nominal_ok).passed);

  std::vector<Hypothesis> with_h0{Hypothesis::nominal(SpaceTag::SHS), H("{a}", sh), H("{b}", sh)};
  auto v2 = verify_minimal_diagnosis(with_h0, solver);
  CHECK_FALSE(v2.passed);
  bool cand_failed = false;
  for (const auto& c : v2.conditions)
    if (c.name == "candidacy" && !c.passed) cand_failed = c.witness == Hypothesis::nominal(SpaceTag::SHS);
  CHECK(cand_failed);
}

TEST_CASE("toy one-shot through the explicit solver") {
  auto m = parse_model(read_file(DIAGFP_FIXTURES "/one_shot.des"));
  auto o = parse_observation(read_file(DIAGFP_FIXTURES "/one_shot.obs"), m);
  for (auto tag : {SpaceTag::SHS, SpaceTag::MHS, SpaceTag::SqHS}) {
    const auto expected = ref::diagnosis(m, o, tag);
    REQUIRE(expected.size() == 1);
    for (auto k : kAll) {
      ExplicitSolver solver(m, o, tag);
      auto r = run_strategy(k, solver);
      CHECK(r.complete);
      CHECK(r.minimal_candidates == expected);
      if (k == StrategyKind::PFS) CHECK(r.stats.candidate_tests == 2);
      CHECK(verify_minimal_diagnosis(r.minimal_candidates, solver).passed);
    }
  }
}
