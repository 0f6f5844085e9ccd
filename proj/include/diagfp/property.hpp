#pragma once

// Symbolic hypothesis sets: conjunctions of descendant/ancestor properties
// and their negations, plus builders for the diagnostic questions.

#include <span>
#include <string>
#include <vector>

#include "diagfp/error.hpp"
#include "diagfp/hypothesis.hpp"

namespace diagfp {

enum class PropertyKind { Desc, Anc, NegDesc, NegAnc };

const char* property_kind_name(PropertyKind kind);  // desc|anc|neg_desc|neg_anc

struct Property {
  PropertyKind kind;
  Hypothesis anchor;

  static Property desc(Hypothesis h) { return {PropertyKind::Desc, std::move(h)}; }
  static Property anc(Hypothesis h) { return {PropertyKind::Anc, std::move(h)}; }
  static Property neg_desc(Hypothesis h) { return {PropertyKind::NegDesc, std::move(h)}; }
  static Property neg_anc(Hypothesis h) { return {PropertyKind::NegAnc, std::move(h)}; }

  friend bool operator==(const Property&, const Property&) = default;
};

/// Duplicate-free, insertion-ordered conjunction of properties.
class PropertySet {
 public:
  PropertySet() = default;
  PropertySet(std::initializer_list<Property> props);

  /// Appends p unless already present. Returns true when added.
  bool add(Property p);
  bool contains(const Property& p) const;

  std::size_t size() const { return props_.size(); }
  bool empty() const { return props_.empty(); }
  const Property& operator[](std::size_t i) const { return props_[i]; }
  auto begin() const { return props_.begin(); }
  auto end() const { return props_.end(); }

  friend bool operator==(const PropertySet&, const PropertySet&) = default;

 private:
  std::vector<Property> props_;
};

/// A property set whose hypothesis set contains no diagnosis candidate.
struct Conflict {
  PropertySet props;
};

bool exhibits(const Hypothesis& h, const Property& p);
bool member(const Hypothesis& h, const PropertySet& ps);

enum class CandidateEncoding {
  Children,       // {Desc(h)} ∪ {NegDesc(c) | c ∈ children(h)}
  DescAncestors,  // {Desc(h), Anc(h)}
};

PropertySet question_candidate(const Hypothesis& h, const Space& space,
                               CandidateEncoding encoding = CandidateEncoding::Children);
PropertySet question_minimal(const Hypothesis& d);
PropertySet question_coverage(std::span<const Hypothesis> s);

/// Witness a ≺ c ≺ b with a, b in the set and c outside it.
class ConvexityError : public Error {
 public:
  ConvexityError(Hypothesis a, Hypothesis c, Hypothesis b, const std::string& message)
      : Error(ErrorCode::ConvexityViolation, message), low(std::move(a)), middle(std::move(c)), high(std::move(b)) {}
  Hypothesis low, middle, high;
};

/// Property set P with hypos(P) ∩ U = h_set, where U is the universe of
/// hypotheses within universe_bound (see enumerate_universe). Throws
/// ConvexityError when h_set is not convex within U.
PropertySet convex_representation(std::span<const Hypothesis> h_set, const Space& space, std::size_t universe_bound);

std::string render(const Property& p, const Space& space);
std::string render(const PropertySet& ps, const Space& space);

}  // namespace diagfp
