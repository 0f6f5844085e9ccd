#include "diagfp/property.hpp"
#include "doctest.h"
#include "oracle.hpp"

using namespace diagfp;

namespace {

Hypothesis H(const char* text, const Space& s) { return parse_hypothesis(text, s); }

std::vector<Hypothesis> hypos(const PropertySet& ps, const std::vector<Hypothesis>& universe, std::size_t nf) {
  std::vector<Hypothesis> out;
  for (const auto& h : universe)
    if (ref::member(h, ps, nf)) out.push_back(h);
  return out;
}

struct Bounded {
  SpaceTag tag;
  std::size_t nf;
  std::size_t bound;
};

// SHS |F| <= 4, MHS counts <= 2 (total <= 2 per fault via universe), SqHS length <= 3.
const Bounded kSmall[] = {{SpaceTag::SHS, 4, 4}, {SpaceTag::MHS, 2, 4}, {SpaceTag::SqHS, 2, 3}};

Space space_for(const Bounded& b) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < b.nf; ++i) names.push_back("f" + std::to_string(i + 1));
  return Space(b.tag, names);
}

}  // namespace

TEST_CASE("exhibits examples") {
  Space sh(SpaceTag::SHS, {"f1", "f2", "f3"});
  CHECK(exhibits(H("{f1,f2,f3}", sh), Property::desc(H("{f1,f2}", sh))));
  CHECK(exhibits(H("{f3}", sh), Property::neg_anc(H("{f1,f2}", sh))));
  CHECK_FALSE(exhibits(H("{f1}", sh), Property::neg_anc(H("{f1,f2}", sh))));
  CHECK_FALSE(member(H("{f1}", sh), PropertySet{Property::anc(H("{f2}", sh))}));
  for (const auto& h : ref::universe(SpaceTag::SHS, 3, 3)) {
    CHECK(exhibits(h, Property::desc(Hypothesis::nominal(SpaceTag::SHS))));
  }
  CHECK(member(Hypothesis::nominal(SpaceTag::SqHS), PropertySet{}));
}

TEST_CASE("exhibits agrees with the reference on every small pair") {
  for (const auto& b : kSmall) {
    const auto all = ref::universe(b.tag, b.nf, 3);
    int disagreements = 0;
    for (const auto& h : all)
      for (const auto& g : all)
        for (auto kind : {PropertyKind::Desc, PropertyKind::Anc, PropertyKind::NegDesc, PropertyKind::NegAnc}) {
          Property p{kind, g};
          if (exhibits(h, p) != ref::exhibits(h, p, b.nf)) ++disagreements;
        }
    CHECK(disagreements == 0);
  }
}

TEST_CASE("member: SqHS [f1] within {Desc([f1]), NegDesc([f1,f1])}") {
  Space sq(SpaceTag::SqHS, {"f1", "f2"});
  PropertySet ps{Property::desc(H("[f1]", sq)), Property::neg_desc(H("[f1,f1]", sq))};
  CHECK(member(H("[f1]", sq), ps));
  const auto expected = hypos(ps, ref::universe(SpaceTag::SqHS, 2, 2), 2);
  CHECK(std::find(expected.begin(), expected.end(), H("[f1]", sq)) != expected.end());
}

TEST_CASE("property sets are duplicate-free and keep insertion order") {
  Space sh(SpaceTag::SHS, {"a", "b"});
  PropertySet ps;
  CHECK(ps.add(Property::neg_desc(H("{b}", sh))));
  CHECK(ps.add(Property::desc(H("{a}", sh))));
  CHECK_FALSE(ps.add(Property::neg_desc(H("{b}", sh))));
  REQUIRE(ps.size() == 2);
  CHECK(ps[0].kind == PropertyKind::NegDesc);
  CHECK(render(ps, sh) == "{neg_desc({b}), desc({a})}");
}

TEST_CASE("question_candidate examples") {
  Space sq(SpaceTag::SqHS, {"f1", "f2"});
  PropertySet expected{Property::desc(H("[]", sq)), Property::neg_desc(H("[f1]", sq)),
                       Property::neg_desc(H("[f2]", sq))};
  CHECK(question_candidate(H("[]", sq), sq) == expected);
  Space one(SpaceTag::SHS, {"f"});
  CHECK(question_candidate(H("{f}", one), one) == PropertySet{Property::desc(H("{f}", one))});
  Space ms(SpaceTag::MHS, {"f"});
  CHECK(question_candidate(H("{f:1}", ms), ms) ==
        PropertySet{Property::desc(H("{f:1}", ms)), Property::neg_desc(H("{f:2}", ms))});
  CHECK(question_candidate(H("{f:1}", ms), ms, CandidateEncoding::DescAncestors) ==
        PropertySet{Property::desc(H("{f:1}", ms)), Property::anc(H("{f:1}", ms))});
}

TEST_CASE("question builders denote the stated sets on small spaces") {
  for (const auto& b : kSmall) {
    const Space s = space_for(b);
    const auto all = ref::universe(b.tag, b.nf, b.bound);
    // Hypotheses whose children stay inside the universe.
    const auto inner = ref::universe(b.tag, b.nf, b.bound - 1);
    for (const auto& h : inner) {
      for (auto enc : {CandidateEncoding::Children, CandidateEncoding::DescAncestors}) {
        CHECK(hypos(question_candidate(h, s, enc), all, b.nf) == std::vector<Hypothesis>{h});
      }
      std::vector<Hypothesis> strict_ancestors;
      for (const auto& g : all)
        if (g != h && ref::leq(g, h, b.nf)) strict_ancestors.push_back(g);
      CHECK(hypos(question_minimal(h), all, b.nf) == strict_ancestors);
    }
  }
}

TEST_CASE("question_minimal and question_coverage examples") {
  Space sh(SpaceTag::SHS, {"f1", "f2"});
  CHECK(hypos(question_minimal(H("{}", sh)), ref::universe(SpaceTag::SHS, 2, 2), 2).empty());
  CHECK(hypos(question_minimal(H("{f1,f2}", sh)), ref::universe(SpaceTag::SHS, 2, 2), 2) ==
        std::vector<Hypothesis>{H("{}", sh), H("{f1}", sh), H("{f2}", sh)});
  Space sq(SpaceTag::SqHS, {"f1", "f2"});
  CHECK(hypos(question_minimal(H("[f1,f2]", sq)), ref::universe(SpaceTag::SqHS, 2, 2), 2) ==
        std::vector<Hypothesis>{H("[]", sq), H("[f1]", sq), H("[f2]", sq)});

  CHECK(question_coverage(std::vector<Hypothesis>{}).empty());
  std::vector<Hypothesis> s1{H("{f1}", sh)};
  CHECK(hypos(question_coverage(s1), ref::universe(SpaceTag::SHS, 2, 2), 2) ==
        std::vector<Hypothesis>{H("{}", sh), H("{f2}", sh)});
  std::vector<Hypothesis> s2{H("[f1]", sq), H("[f2]", sq)};
  CHECK(hypos(question_coverage(s2), ref::universe(SpaceTag::SqHS, 2, 2), 2) == std::vector<Hypothesis>{H("[]", sq)});
}

TEST_CASE("coverage denotes the undominated hypotheses") {
  for (const auto& b : kSmall) {
    const auto all = ref::universe(b.tag, b.nf, b.bound);
    std::mt19937_64 rng(5);
    for (int i = 0; i < 40; ++i) {
      std::vector<Hypothesis> s;
      for (int k = 0; k < i % 4; ++k) s.push_back(ref::random_hypothesis(rng, b.tag, b.nf, 2));
      std::vector<Hypothesis> expected;
      for (const auto& h : all) {
        bool dominated = false;
        for (const auto& g : s) dominated = dominated || ref::leq(g, h, b.nf);
        if (!dominated) expected.push_back(h);
      }
      CHECK(hypos(question_coverage(s), all, b.nf) == expected);
    }
  }
}

TEST_CASE("convex representation examples") {
  Space sh(SpaceTag::SHS, {"f1", "f2"});
  std::vector<Hypothesis> single{H("{f1}", sh)};
  const auto p = convex_representation(single, sh, 2);
  PropertySet expected{Property::neg_anc(H("{}", sh)), Property::neg_desc(H("{f1,f2}", sh)),
                       Property::neg_desc(H("{f2}", sh))};
  CHECK(p.size() == expected.size());
  for (const auto& q : expected) CHECK(p.contains(q));
  CHECK(hypos(p, ref::universe(SpaceTag::SHS, 2, 2), 2) == single);

  const auto all = ref::universe(SpaceTag::SHS, 2, 2);
  CHECK(convex_representation(all, sh, 2).empty());

  std::vector<Hypothesis> holes{H("{}", sh), H("{f1,f2}", sh)};
  try {
    convex_representation(holes, sh, 2);
    FAIL("expected a convexity violation");
  } catch (const ConvexityError& e) {
    CHECK(e.code() == ErrorCode::ConvexityViolation);
    CHECK(e.low == H("{}", sh));
    CHECK(e.high == H("{f1,f2}", sh));
    CHECK((e.middle == H("{f1}", sh) || e.middle == H("{f2}", sh)));
  }
}

TEST_CASE("convex representation agrees with membership on random convex sets") {
  for (const auto& b : kSmall) {
    const Space s = space_for(b);
    const std::size_t bound = b.tag == SpaceTag::SHS ? 4 : 2;
    const auto all = ref::universe(b.tag, b.nf, bound);
    std::mt19937_64 rng(19);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
      // Intervals [lo, hi] minus a random ancestor cone are convex.
      auto lo = ref::random_hypothesis(rng, b.tag, b.nf, 1);
      auto hi = ref::random_descendant(rng, lo, b.nf, 1);
      std::vector<Hypothesis> set;
      for (const auto& h : all)
        if (ref::leq(lo, h, b.nf) && ref::leq(h, hi, b.nf)) set.push_back(h);
      if (set.empty()) continue;
      const auto p = convex_representation(set, s, bound);
      CHECK(hypos(p, all, b.nf) == set);
      ++checked;
    }
    CHECK(checked > 20);
  }
}
