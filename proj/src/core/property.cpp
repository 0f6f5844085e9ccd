#include "diagfp/property.hpp"

#include <algorithm>

namespace diagfp {

const char* property_kind_name(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::Desc: return "desc";
    case PropertyKind::Anc: return "anc";
    case PropertyKind::NegDesc: return "neg_desc";
    case PropertyKind::NegAnc: return "neg_anc";
  }
  return "?";
}

PropertySet::PropertySet(std::initializer_list<Property> props) {
  for (const auto& p : props) add(p);
}

bool PropertySet::add(Property p) {
  if (contains(p)) return false;
  props_.push_back(std::move(p));
  return true;
}

bool PropertySet::contains(const Property& p) const {
  return std::find(props_.begin(), props_.end(), p) != props_.end();
}

bool exhibits(const Hypothesis& h, const Property& p) {
  switch (p.kind) {
    case PropertyKind::Desc: return leq(p.anchor, h);
    case PropertyKind::Anc: return leq(h, p.anchor);
    case PropertyKind::NegDesc: return !leq(p.anchor, h);
    case PropertyKind::NegAnc: return !leq(h, p.anchor);
  }
  return false;
}

bool member(const Hypothesis& h, const PropertySet& ps) {
  return std::all_of(ps.begin(), ps.end(), [&](const Property& p) { return exhibits(h, p); });
}

PropertySet question_candidate(const Hypothesis& h, const Space& space, CandidateEncoding encoding) {
  PropertySet ps;
  ps.add(Property::desc(h));
  if (encoding == CandidateEncoding::DescAncestors) {
    ps.add(Property::anc(h));
    return ps;
  }
  for (auto& c : children(h, space)) ps.add(Property::neg_desc(std::move(c)));
  return ps;
}

PropertySet question_minimal(const Hypothesis& d) {
  return PropertySet{Property::anc(d), Property::neg_desc(d)};
}

PropertySet question_coverage(std::span<const Hypothesis> s) {
  std::vector<Hypothesis> ordered(s.begin(), s.end());
  canonicalize(ordered);
  PropertySet ps;
  for (auto& h : ordered) ps.add(Property::neg_desc(std::move(h)));
  return ps;
}

PropertySet convex_representation(std::span<const Hypothesis> h_set, const Space& space,
                                  std::size_t universe_bound) {
  const auto universe = enumerate_universe(space, universe_bound);
  std::vector<Hypothesis> in(h_set.begin(), h_set.end());
  canonicalize(in);
  for (const auto& h : in) {
    if (!std::binary_search(universe.begin(), universe.end(), h)) {
      usage_error("hypothesis " + render(h, space) + " lies outside the enumerated universe");
    }
  }
  auto inside = [&](const Hypothesis& h) { return std::binary_search(in.begin(), in.end(), h); };

  if (in.empty()) {
    Hypothesis h0 = Hypothesis::nominal(space.tag());
    return PropertySet{Property::desc(h0), Property::neg_desc(h0)};
  }

  std::vector<Hypothesis> below, above, unrelated;
  for (const auto& c : universe) {
    if (inside(c)) continue;
    bool is_below = false, is_above = false;
    const Hypothesis* low = nullptr;
    const Hypothesis* high = nullptr;
    for (const auto& h : in) {
      if (leq(c, h)) {
        is_below = true;
        high = &h;
      }
      if (leq(h, c)) {
        is_above = true;
        low = &h;
      }
    }
    if (is_below && is_above) {
      throw ConvexityError(*low, c, *high,
                           "hypothesis set is not convex: " + render(*low, space) + " < " + render(c, space) + " < " +
                               render(*high, space));
    }
    if (is_below) {
      below.push_back(c);
    } else if (is_above) {
      above.push_back(c);
    } else {
      unrelated.push_back(c);
    }
  }

  PropertySet ps;
  for (const auto& c : below) {
    bool maximal = std::none_of(below.begin(), below.end(), [&](const Hypothesis& d) { return less(c, d); });
    if (maximal) ps.add(Property::neg_anc(c));
  }
  for (auto& c : min_antichain(above)) ps.add(Property::neg_desc(std::move(c)));
  for (auto& c : min_antichain(unrelated)) ps.add(Property::neg_desc(std::move(c)));
  return ps;
}

std::string render(const Property& p, const Space& space) {
  return std::string(property_kind_name(p.kind)) + "(" + render(p.anchor, space) + ")";
}

std::string render(const PropertySet& ps, const Space& space) {
  std::string out = "{";
  bool first = true;
  for (const auto& p : ps) {
    if (!first) out += ", ";
    out += render(p, space);
    first = false;
  }
  return out + "}";
}

}  // namespace diagfp
