#pragma once

// Hypothesis spaces: values, the preference order, children, least common
// descendants and the SqHS -> MHS -> SHS -> BHS abstraction chain.

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace diagfp {

enum class SpaceTag { BHS, SHS, MHS, SqHS };

const char* space_tag_name(SpaceTag tag);
SpaceTag parse_space_tag(std::string_view text);

/// Index of a fault event in the fault alphabet of a Space.
struct FaultId {
  std::uint32_t index = 0;
  auto operator<=>(const FaultId&) const = default;
};

/// A hypothesis space: its kind and the ordered, duplicate-free fault alphabet.
class Space {
 public:
  Space(SpaceTag tag, std::vector<std::string> faults);

  SpaceTag tag() const { return tag_; }
  const std::vector<std::string>& faults() const { return faults_; }
  std::size_t fault_count() const { return faults_.size(); }

  std::optional<FaultId> find_fault(std::string_view name) const;
  FaultId fault(std::string_view name) const;
  const std::string& name(FaultId f) const;

  Space with_tag(SpaceTag tag) const { return Space(tag, faults_); }

 private:
  SpaceTag tag_;
  std::vector<std::string> faults_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

struct FaultCount {
  FaultId fault;
  std::uint32_t count = 0;
  auto operator<=>(const FaultCount&) const = default;
};

/// Immutable hypothesis value. Always held in canonical form: sets are
/// sorted and duplicate-free, multisets are sorted with no zero counts.
class Hypothesis {
 public:
  static Hypothesis nominal(SpaceTag tag);
  static Hypothesis binary(bool faulty);
  static Hypothesis set(std::vector<FaultId> faults);
  static Hypothesis multiset(std::vector<FaultCount> counts);
  static Hypothesis sequence(std::vector<FaultId> faults);

  SpaceTag tag() const { return tag_; }
  bool faulty() const;
  bool is_nominal() const { return !faulty(); }

  /// SHS: the set (sorted). SqHS: the sequence. Empty otherwise.
  std::span<const FaultId> faults() const { return faults_; }
  /// MHS only.
  std::span<const FaultCount> counts() const { return counts_; }

  /// Occurrences of f (SHS: 0/1, SqHS: occurrences in the sequence).
  std::uint32_t count(FaultId f) const;

  /// Cardinality: BHS 0/1, SHS |h|, MHS total count, SqHS length.
  std::size_t size() const;

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;

  /// Total tie-break order (tag, size, then lexicographic). Used for
  /// deterministic iteration only, never as preference.
  friend std::strong_ordering operator<=>(const Hypothesis& a, const Hypothesis& b);

 private:
  SpaceTag tag_ = SpaceTag::SHS;
  bool faulty_ = false;  // BHS only
  std::vector<FaultId> faults_;
  std::vector<FaultCount> counts_;
};

std::string render(const Hypothesis& h, const Space& space);
Hypothesis parse_hypothesis(std::string_view text, const Space& space);

/// a ⪯ b. Throws a usage error when the variants differ.
bool leq(const Hypothesis& a, const Hypothesis& b);
inline bool less(const Hypothesis& a, const Hypothesis& b) { return a != b && leq(a, b); }

/// The minimal strict descendants of h, in canonical order.
std::vector<Hypothesis> children(const Hypothesis& h, const Space& space);

/// Least common descendants min(desc(a) ∩ desc(b)), in canonical order.
std::vector<Hypothesis> otimes(const Hypothesis& a, const Hypothesis& b);

/// Projects along SqHS -> MHS -> SHS -> BHS (any number of steps).
Hypothesis project(const Hypothesis& h, SpaceTag to);

/// Minimal elements of s, deduplicated, in canonical order.
std::vector<Hypothesis> min_antichain(std::span<const Hypothesis> s);

/// True iff no two distinct elements are comparable.
bool is_antichain(std::span<const Hypothesis> s);

/// Sorts canonically and removes duplicates.
void canonicalize(std::vector<Hypothesis>& s);

/// Every hypothesis of the space within a size bound: SHS all subsets
/// (bound ignored), MHS counts <= bound per fault, SqHS length <= bound,
/// BHS both values.
std::vector<Hypothesis> enumerate_universe(const Space& space, std::size_t bound);

}  // namespace diagfp
