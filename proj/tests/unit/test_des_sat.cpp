#include <algorithm>

#include "diagfp/des_sat.hpp"
#include "diagfp/explicit_solver.hpp"
#include "diagfp/generator.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace diagfp;

namespace {

DesModel one_shot() { return parse_model(read_file(DIAGFP_FIXTURES "/one_shot.des")); }

bool has_clause(const CnfFormula& f, std::vector<Lit> want) {
  std::sort(want.begin(), want.end());
  for (auto c : f.clauses()) {
    std::sort(c.begin(), c.end());
    if (c == want) return true;
  }
  return false;
}

// One component that can emit every fault at any time.
DesModel free_faults() {
  return parse_model(R"(
component c
  states a
  init a
  trans a f1 a
  trans a f2 a
end
observable
faults f1 f2
)");
}

}  // namespace

TEST_CASE("SHS Desc({f}) over three steps is one guarded long clause") {
  auto m = one_shot();
  DesEncoding enc(m, 0, EncodingParams{3}, SpaceTag::SHS);
  CHECK(enc.horizon() == 3);
  const Lit a = enc.formula().new_var("act0");
  enc.encode_property(Property::desc(Hypothesis::set({FaultId{0}})), a);
  const EventId f = *m.find_event("f");
  CHECK(has_clause(enc.formula(), {-a, enc.event_var(f, 1), enc.event_var(f, 2), enc.event_var(f, 3)}));
  CHECK(enc.formula().var_name(enc.event_var(f, 2)) == "f@2");
}

TEST_CASE("SHS Anc({}) forbids every fault at every step") {
  auto m = one_shot();
  DesEncoding enc(m, 1, EncodingParams{2}, SpaceTag::SHS);
  const Lit a = enc.formula().new_var("act0");
  enc.encode_property(Property::anc(Hypothesis::nominal(SpaceTag::SHS)), a);
  const EventId f = *m.find_event("f");
  for (std::size_t t = 1; t <= enc.horizon(); ++t) CHECK(has_clause(enc.formula(), {-a, -enc.event_var(f, t)}));
}

TEST_CASE("observation pins observed events and forbids the rest") {
  auto m = one_shot();
  const EventId o1 = *m.find_event("o1");
  DesEncoding enc(m, 1, EncodingParams{2}, SpaceTag::SHS);
  enc.encode_observation(Observation{{o1}});
  CHECK(has_clause(enc.formula(), {enc.event_var(o1, 2)}));
  for (std::size_t t : {1, 3, 4}) CHECK(has_clause(enc.formula(), {-enc.event_var(o1, t)}));

  DesEncoding twice(m, 2, EncodingParams{1}, SpaceTag::SHS);
  twice.encode_observation(Observation{{o1, o1}});
  CHECK(has_clause(twice.formula(), {twice.event_var(o1, 1)}));
  CHECK(has_clause(twice.formula(), {twice.event_var(o1, 2)}));
  CHECK(has_clause(twice.formula(), {-twice.event_var(o1, 3)}));

  DesEncoding none(m, 0, EncodingParams{3}, SpaceTag::SHS);
  none.encode_observation(Observation{});
  for (std::size_t t = 1; t <= 3; ++t) CHECK(has_clause(none.formula(), {-none.event_var(o1, t)}));
}

TEST_CASE("every model of the one-shot encoding decodes to an accepted trace") {
  auto m = one_shot();
  DesEncoding enc(m, 1, EncodingParams{2}, SpaceTag::SHS);
  enc.encode_model();
  enc.encode_observation(Observation{{*m.find_event("o1")}});
  ref::Simulator sim{m};
  SatSolver s;
  s.add_formula(enc.formula());
  int models = 0;
  while (s.solve() == SatSolver::Result::Sat && models < 200) {
    ++models;
    const auto t = enc.decode([&](Lit v) { return s.model_value(v); });
    CHECK(sim.accepts(t));
    std::vector<Lit> block;
    for (std::size_t step = 1; step <= enc.horizon(); ++step)
      for (EventId e = 0; e < m.events().size(); ++e) {
        const Lit v = enc.event_var(e, step);
        block.push_back(s.model_value(v) ? -v : v);
      }
    s.add_clause(block);
  }
  // f at step 1 before o1 at step 2; nothing else may happen.
  CHECK(models == 1);
}

TEST_CASE("one state, no transitions: only the empty trace") {
  auto m = parse_model("component c\n  states a\n  init a\nend\nobservable\nfaults\n");
  DesSatSolver solver(m, Observation{}, SpaceTag::SHS);
  auto r = solver.solve(PropertySet{});
  REQUIRE(is_candidate(r));
  CHECK(std::get<CandidateFound>(r).witness.empty());
}

TEST_CASE("SqHS Desc([f1]) fails on a behaviour without f1") {
  auto m = free_faults();
  DesEncoding enc(m, 0, EncodingParams{2}, SpaceTag::SqHS);
  enc.encode_model();
  const Lit a = enc.formula().new_var("act0");
  enc.encode_property(Property::desc(Hypothesis::sequence({FaultId{0}})), a);
  SatSolver s;
  s.add_formula(enc.formula());
  std::vector<Lit> assume{a, -enc.event_var(0, 1), -enc.event_var(0, 2)};
  CHECK(s.solve(assume) == SatSolver::Result::Unsat);
  CHECK(std::find(s.failed_assumptions().begin(), s.failed_assumptions().end(), a) != s.failed_assumptions().end());
}

TEST_CASE("property encodings equal the order definitions on forced fault sequences") {
  auto m = free_faults();
  const std::size_t k = 5;
  int wrong = 0, checked = 0;
  for (auto tag : {SpaceTag::SHS, SpaceTag::MHS, SpaceTag::SqHS}) {
    const auto anchors = ref::universe(tag, 2, 3);
    for (const auto& anchor : anchors) {
      for (auto kind : {PropertyKind::Desc, PropertyKind::Anc, PropertyKind::NegDesc, PropertyKind::NegAnc}) {
        DesEncoding enc(m, 0, EncodingParams{k}, tag);
        enc.encode_model();
        const Lit a = enc.formula().new_var("act0");
        const Property p{kind, anchor};
        enc.encode_property(p, a);
        SatSolver s;
        s.add_formula(enc.formula());
        // Every fault word of length <= 4 laid out from step 1, one fault per step.
        std::vector<std::vector<std::uint32_t>> words{{}};
        for (std::size_t len = 1; len <= 4; ++len) {
          std::vector<std::vector<std::uint32_t>> next;
          for (const auto& w : words)
            if (w.size() == len - 1)
              for (std::uint32_t f = 0; f < 2; ++f) {
                auto x = w;
                x.push_back(f);
                next.push_back(x);
              }
          words.insert(words.end(), next.begin(), next.end());
        }
        for (const auto& w : words) {
          std::vector<Lit> assume{a};
          std::vector<EventId> fault_events;
          for (std::size_t t = 1; t <= k; ++t)
            for (std::uint32_t f = 0; f < 2; ++f) {
              const bool on = t <= w.size() && w[t - 1] == f;
              const Lit v = enc.event_var(m.fault_event(FaultId{f}), t);
              assume.push_back(on ? v : -v);
              if (on) fault_events.push_back(m.fault_event(FaultId{f}));
            }
          const auto h = ref::hypothesis_of(fault_events, m, tag);
          const bool expected = ref::exhibits(h, p, 2);
          if ((s.solve(assume) == SatSolver::Result::Sat) != expected) ++wrong;
          ++checked;
        }
      }
    }
  }
  CHECK(checked > 1000);
  CHECK(wrong == 0);
}

TEST_CASE("MHS threshold variables count occurrences") {
  auto m = free_faults();
  const std::size_t k = 6;
  std::mt19937_64 rng(3);
  int wrong = 0;
  for (int trial = 0; trial < 200; ++trial) {
    DesEncoding enc(m, 0, EncodingParams{k}, SpaceTag::MHS);
    enc.encode_model();
    const Lit a = enc.formula().new_var("act0");
    const std::uint32_t j = 1 + static_cast<std::uint32_t>(rng() % 4);
    enc.encode_property(Property::desc(Hypothesis::multiset({{FaultId{0}, j}})), a);
    const int cvar = enc.formula().find_var("cnt(f1," + std::to_string(j) + ")@" + std::to_string(k));
    REQUIRE(cvar != 0);
    std::vector<Lit> assume;
    int count = 0;
    for (std::size_t t = 1; t <= k; ++t) {
      const bool on = rng() % 2;
      count += on;
      const Lit v = enc.event_var(m.fault_event(FaultId{0}), t);
      assume.push_back(on ? v : -v);
    }
    SatSolver s;
    s.add_formula(enc.formula());
    REQUIRE(s.solve(assume) == SatSolver::Result::Sat);
    if (s.model_value(cvar) != (count >= static_cast<int>(j))) ++wrong;
  }
  CHECK(wrong == 0);
}

TEST_CASE("one-shot SAT tests") {
  auto m = one_shot();
  auto o = parse_observation("o1", m);
  DesSatSolver solver(m, o, SpaceTag::SHS, SatOptions{EncodingParams{2}});
  CHECK(solver.horizon() == 4);
  const Space sh = m.space(SpaceTag::SHS);
  auto yes = solver.solve(question_candidate(Hypothesis::set({FaultId{0}}), sh));
  REQUIRE(is_candidate(yes));
  const auto& w = std::get<CandidateFound>(yes).witness;
  CHECK(w == std::vector<std::string>{"f", "o1"});

  const auto req = question_candidate(Hypothesis::nominal(SpaceTag::SHS), sh);
  auto no = solver.solve(req);
  REQUIRE_FALSE(is_candidate(no));
  const auto& c = std::get<TestFailed>(no).conflict.props;
  CHECK(c.contains(Property::neg_desc(Hypothesis::set({FaultId{0}}))));
  for (const auto& p : c) CHECK(req.contains(p));
}

TEST_CASE("unconstrained model: empty coverage test finds h0") {
  auto m = parse_model("component c\n  states a\n  init a\n  trans a u a\nend\nobservable\nfaults\n");
  DesSatSolver solver(m, Observation{}, SpaceTag::SqHS);
  auto r = solver.solve(question_coverage(std::vector<Hypothesis>{}));
  REQUIRE(is_candidate(r));
  CHECK(std::get<CandidateFound>(r).hypothesis == Hypothesis::nominal(SpaceTag::SqHS));
}

TEST_CASE("DIMACS export is deterministic and names variables") {
  auto m = one_shot();
  auto o = parse_observation("o1", m);
  DesSatSolver solver(m, o, SpaceTag::SHS, SatOptions{EncodingParams{2}});
  const auto req = question_candidate(Hypothesis::set({FaultId{0}}), m.space(SpaceTag::SHS));
  const auto a = solver.export_dimacs(req);
  CHECK(a == solver.export_dimacs(req));
  CHECK(a.find(" f@1\n") != std::string::npos);
  CHECK(a.find(" f@2\n") != std::string::npos);
  CHECK(a.find("c horizon 4 steps_per_obs 2") != std::string::npos);
  CHECK(a.find("c assumption ") != std::string::npos);
}

TEST_CASE("SAT verdicts and conflicts agree with the reference on generated instances") {
  int mismatches = 0, bad_conflicts = 0, tests = 0;
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    GeneratorParams p;
    p.seed = seed;
    p.components = 1 + seed % 3;
    p.states = 2 + seed % 3;
    p.faults = 1 + seed % 3;
    p.obs_len = seed % 5;
    auto inst = generate_instance(p);
    auto m = parse_model(inst.model_text);
    auto o = parse_observation(inst.observation_text, m);
    const std::size_t k = std::max<std::size_t>(7, inst.silent_depth + 1);
    std::mt19937_64 rng(seed);
    for (auto tag : {SpaceTag::SHS, SpaceTag::MHS, SpaceTag::SqHS}) {
      const Space s = m.space(tag);
      const auto cands = ref::candidates(m, o, tag);
      DesSatSolver solver(m, o, tag, SatOptions{EncodingParams{k}});
      for (int i = 0; i < 4; ++i) {
        auto h = ref::random_hypothesis(rng, tag, s.fault_count(), 3);
        const auto req = i % 2 ? question_candidate(h, s) : question_minimal(h);
        auto out = solver.solve(req);
        ++tests;
        if (is_candidate(out) != ref::any_member(cands, req, s.fault_count())) ++mismatches;
        if (!is_candidate(out)) {
          const auto& c = std::get<TestFailed>(out).conflict.props;
          for (const auto& q : c)
            if (!req.contains(q)) ++bad_conflicts;
          if (ref::any_member(cands, c, s.fault_count())) ++bad_conflicts;
        }
      }
    }
  }
  CHECK(tests == 720);
  CHECK(mismatches == 0);
  CHECK(bad_conflicts == 0);
}
