#include "diagfp/hypothesis.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "diagfp/error.hpp"

namespace diagfp {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return "usage";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::UnsupportedAbstraction: return "unsupported-abstraction";
    case ErrorCode::ConvexityViolation: return "convexity-violation";
    case ErrorCode::StateBudget: return "state-budget";
    case ErrorCode::InternalConsistency: return "internal-consistency";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

const char* space_tag_name(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::BHS: return "bhs";
    case SpaceTag::SHS: return "shs";
    case SpaceTag::MHS: return "mhs";
    case SpaceTag::SqHS: return "sqhs";
  }
  return "?";
}

SpaceTag parse_space_tag(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "bhs") return SpaceTag::BHS;
  if (lower == "shs") return SpaceTag::SHS;
  if (lower == "mhs") return SpaceTag::MHS;
  if (lower == "sqhs") return SpaceTag::SqHS;
  usage_error("unknown hypothesis space '" + std::string(text) + "' (expected bhs|shs|mhs|sqhs)");
}

// ---------------------------------------------------------------------------
// Space

Space::Space(SpaceTag tag, std::vector<std::string> faults) : tag_(tag), faults_(std::move(faults)) {
  for (std::uint32_t i = 0; i < faults_.size(); ++i) {
    if (!index_.emplace(faults_[i], i).second) usage_error("duplicate fault '" + faults_[i] + "' in alphabet");
  }
}

std::optional<FaultId> Space::find_fault(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return FaultId{it->second};
}

FaultId Space::fault(std::string_view name) const {
  auto f = find_fault(name);
  if (!f) usage_error("unknown fault '" + std::string(name) + "'");
  return *f;
}

const std::string& Space::name(FaultId f) const {
  if (f.index >= faults_.size()) usage_error("fault index out of range");
  return faults_[f.index];
}

// ---------------------------------------------------------------------------
// Hypothesis

Hypothesis Hypothesis::nominal(SpaceTag tag) {
  Hypothesis h;
  h.tag_ = tag;
  return h;
}

Hypothesis Hypothesis::binary(bool faulty) {
  Hypothesis h;
  h.tag_ = SpaceTag::BHS;
  h.faulty_ = faulty;
  return h;
}

Hypothesis Hypothesis::set(std::vector<FaultId> faults) {
  Hypothesis h;
  h.tag_ = SpaceTag::SHS;
  std::sort(faults.begin(), faults.end());
  faults.erase(std::unique(faults.begin(), faults.end()), faults.end());
  h.faults_ = std::move(faults);
  return h;
}

Hypothesis Hypothesis::multiset(std::vector<FaultCount> counts) {
  Hypothesis h;
  h.tag_ = SpaceTag::MHS;
  std::sort(counts.begin(), counts.end());
  for (const auto& fc : counts) {
    if (fc.count == 0) continue;
    if (!h.counts_.empty() && h.counts_.back().fault == fc.fault) {
      h.counts_.back().count += fc.count;
    } else {
      h.counts_.push_back(fc);
    }
  }
  return h;
}

Hypothesis Hypothesis::sequence(std::vector<FaultId> faults) {
  Hypothesis h;
  h.tag_ = SpaceTag::SqHS;
  h.faults_ = std::move(faults);
  return h;
}

bool Hypothesis::faulty() const {
  switch (tag_) {
    case SpaceTag::BHS: return faulty_;
    case SpaceTag::MHS: return !counts_.empty();
    default: return !faults_.empty();
  }
}

std::uint32_t Hypothesis::count(FaultId f) const {
  switch (tag_) {
    case SpaceTag::BHS: return 0;
    case SpaceTag::SHS: return std::binary_search(faults_.begin(), faults_.end(), f) ? 1 : 0;
    case SpaceTag::MHS: {
      auto it = std::lower_bound(counts_.begin(), counts_.end(), f,
                                 [](const FaultCount& fc, FaultId x) { return fc.fault < x; });
      return (it != counts_.end() && it->fault == f) ? it->count : 0;
    }
    case SpaceTag::SqHS: return static_cast<std::uint32_t>(std::count(faults_.begin(), faults_.end(), f));
  }
  return 0;
}

std::size_t Hypothesis::size() const {
  switch (tag_) {
    case SpaceTag::BHS: return faulty_ ? 1 : 0;
    case SpaceTag::MHS: {
      std::size_t total = 0;
      for (const auto& fc : counts_) total += fc.count;
      return total;
    }
    default: return faults_.size();
  }
}

std::strong_ordering operator<=>(const Hypothesis& a, const Hypothesis& b) {
  if (auto c = a.tag_ <=> b.tag_; c != 0) return c;
  if (auto c = a.size() <=> b.size(); c != 0) return c;
  if (auto c = a.faulty_ <=> b.faulty_; c != 0) return c;
  if (auto c = std::lexicographical_compare_three_way(a.faults_.begin(), a.faults_.end(), b.faults_.begin(),
                                                      b.faults_.end());
      c != 0)
    return c;
  return std::lexicographical_compare_three_way(a.counts_.begin(), a.counts_.end(), b.counts_.begin(),
                                                b.counts_.end());
}

// ---------------------------------------------------------------------------
// Canonical text

std::string render(const Hypothesis& h, const Space& space) {
  std::string out;
  switch (h.tag()) {
    case SpaceTag::BHS:
      return h.faulty() ? "faulty" : "nominal";
    case SpaceTag::SHS:
    case SpaceTag::SqHS: {
      const bool seq = h.tag() == SpaceTag::SqHS;
      out += seq ? '[' : '{';
      bool first = true;
      for (FaultId f : h.faults()) {
        if (!first) out += ',';
        out += space.name(f);
        first = false;
      }
      out += seq ? ']' : '}';
      return out;
    }
    case SpaceTag::MHS: {
      out += '{';
      bool first = true;
      for (const auto& fc : h.counts()) {
        if (!first) out += ',';
        out += space.name(fc.fault);
        out += ':';
        out += std::to_string(fc.count);
        first = false;
      }
      out += '}';
      return out;
    }
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_items(std::string_view body) {
  std::vector<std::string_view> items;
  body = trim(body);
  if (body.empty()) return items;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = body.find(',', start);
    items.push_back(trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return items;
}

}  // namespace

Hypothesis parse_hypothesis(std::string_view text, const Space& space) {
  std::string_view t = trim(text);
  auto bad = [&](const std::string& why) -> Error {
    return Error(ErrorCode::Parse, "cannot parse hypothesis '" + std::string(text) + "': " + why);
  };
  if (space.tag() == SpaceTag::BHS) {
    if (t == "nominal") return Hypothesis::binary(false);
    if (t == "faulty") return Hypothesis::binary(true);
    throw bad("expected nominal|faulty");
  }
  const bool seq = space.tag() == SpaceTag::SqHS;
  const char open = seq ? '[' : '{';
  const char close = seq ? ']' : '}';
  if (t.size() < 2 || t.front() != open || t.back() != close) throw bad(std::string("expected ") + open + "..." + close);
  auto items = split_items(t.substr(1, t.size() - 2));
  auto lookup = [&](std::string_view name) {
    auto f = space.find_fault(name);
    if (!f) throw bad("unknown fault '" + std::string(name) + "'");
    return *f;
  };
  switch (space.tag()) {
    case SpaceTag::SHS: {
      std::vector<FaultId> fs;
      for (auto item : items) fs.push_back(lookup(item));
      return Hypothesis::set(std::move(fs));
    }
    case SpaceTag::SqHS: {
      std::vector<FaultId> fs;
      for (auto item : items) fs.push_back(lookup(item));
      return Hypothesis::sequence(std::move(fs));
    }
    case SpaceTag::MHS: {
      std::vector<FaultCount> cs;
      for (auto item : items) {
        auto colon = item.find(':');
        if (colon == std::string_view::npos) throw bad("expected fault:count");
        std::string num(trim(item.substr(colon + 1)));
        if (num.empty() || !std::all_of(num.begin(), num.end(), ::isdigit)) throw bad("bad count '" + num + "'");
        cs.push_back({lookup(trim(item.substr(0, colon))), static_cast<std::uint32_t>(std::stoul(num))});
      }
      return Hypothesis::multiset(std::move(cs));
    }
    case SpaceTag::BHS: break;
  }
  throw bad("unsupported space");
}

// ---------------------------------------------------------------------------
// Order

namespace {

void require_same_space(const Hypothesis& a, const Hypothesis& b) {
  if (a.tag() != b.tag()) {
    usage_error(std::string("cannot compare hypotheses of spaces ") + space_tag_name(a.tag()) + " and " +
                space_tag_name(b.tag()));
  }
}

bool is_subsequence(std::span<const FaultId> a, std::span<const FaultId> b) {
  std::size_t i = 0;
  for (std::size_t j = 0; j < b.size() && i < a.size(); ++j) {
    if (a[i] == b[j]) ++i;
  }
  return i == a.size();
}

}  // namespace

bool leq(const Hypothesis& a, const Hypothesis& b) {
  require_same_space(a, b);
  switch (a.tag()) {
    case SpaceTag::BHS: return !a.faulty() || b.faulty();
    case SpaceTag::SHS:
      return std::includes(b.faults().begin(), b.faults().end(), a.faults().begin(), a.faults().end());
    case SpaceTag::MHS: {
      for (const auto& fc : a.counts()) {
        if (b.count(fc.fault) < fc.count) return false;
      }
      return true;
    }
    case SpaceTag::SqHS: return is_subsequence(a.faults(), b.faults());
  }
  return false;
}

void canonicalize(std::vector<Hypothesis>& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

std::vector<Hypothesis> children(const Hypothesis& h, const Space& space) {
  if (h.tag() != space.tag()) usage_error("hypothesis does not belong to the space");
  std::vector<Hypothesis> out;
  const auto nf = static_cast<std::uint32_t>(space.fault_count());
  switch (h.tag()) {
    case SpaceTag::BHS:
      if (!h.faulty()) out.push_back(Hypothesis::binary(true));
      break;
    case SpaceTag::SHS:
      for (std::uint32_t i = 0; i < nf; ++i) {
        FaultId f{i};
        if (h.count(f)) continue;
        std::vector<FaultId> fs(h.faults().begin(), h.faults().end());
        fs.push_back(f);
        out.push_back(Hypothesis::set(std::move(fs)));
      }
      break;
    case SpaceTag::MHS:
      for (std::uint32_t i = 0; i < nf; ++i) {
        std::vector<FaultCount> cs(h.counts().begin(), h.counts().end());
        cs.push_back({FaultId{i}, 1});
        out.push_back(Hypothesis::multiset(std::move(cs)));
      }
      break;
    case SpaceTag::SqHS: {
      auto seq = h.faults();
      for (std::size_t pos = 0; pos <= seq.size(); ++pos) {
        for (std::uint32_t i = 0; i < nf; ++i) {
          // Inserting f right after an existing f duplicates the insertion before it.
          if (pos > 0 && seq[pos - 1].index == i) continue;
          std::vector<FaultId> fs(seq.begin(), seq.end());
          fs.insert(fs.begin() + static_cast<std::ptrdiff_t>(pos), FaultId{i});
          out.push_back(Hypothesis::sequence(std::move(fs)));
        }
      }
      break;
    }
  }
  canonicalize(out);
  return out;
}

namespace {

// Minimal shuffle-merges of a[i..] and b[j..]. Minimality composes: a minimal
// merge x·s always has s minimal among the merges of the remaining suffixes.
class SequenceMerge {
 public:
  SequenceMerge(std::span<const FaultId> a, std::span<const FaultId> b) : a_(a), b_(b) {}

  const std::vector<std::vector<FaultId>>& solve(std::size_t i, std::size_t j) {
    auto key = i * (b_.size() + 1) + j;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<std::vector<FaultId>> results;
    if (i == a_.size()) {
      results.emplace_back(b_.begin() + static_cast<std::ptrdiff_t>(j), b_.end());
    } else if (j == b_.size()) {
      results.emplace_back(a_.begin() + static_cast<std::ptrdiff_t>(i), a_.end());
    } else {
      auto extend = [&](FaultId head, std::size_t ni, std::size_t nj) {
        for (const auto& tail : solve(ni, nj)) {
          std::vector<FaultId> r;
          r.reserve(tail.size() + 1);
          r.push_back(head);
          r.insert(r.end(), tail.begin(), tail.end());
          results.push_back(std::move(r));
        }
      };
      extend(a_[i], i + 1, j);
      extend(b_[j], i, j + 1);
      if (a_[i] == b_[j]) extend(a_[i], i + 1, j + 1);
      std::vector<Hypothesis> hs;
      hs.reserve(results.size());
      for (auto& r : results) hs.push_back(Hypothesis::sequence(std::move(r)));
      results.clear();
      for (const auto& h : min_antichain(hs)) results.emplace_back(h.faults().begin(), h.faults().end());
    }
    return memo_.emplace(key, std::move(results)).first->second;
  }

 private:
  std::span<const FaultId> a_;
  std::span<const FaultId> b_;
  std::map<std::size_t, std::vector<std::vector<FaultId>>> memo_;
};

}  // namespace

std::vector<Hypothesis> otimes(const Hypothesis& a, const Hypothesis& b) {
  require_same_space(a, b);
  if (leq(a, b)) return {b};
  if (leq(b, a)) return {a};
  switch (a.tag()) {
    case SpaceTag::BHS: return {Hypothesis::binary(true)};
    case SpaceTag::SHS: {
      std::vector<FaultId> fs(a.faults().begin(), a.faults().end());
      fs.insert(fs.end(), b.faults().begin(), b.faults().end());
      return {Hypothesis::set(std::move(fs))};
    }
    case SpaceTag::MHS: {
      std::map<FaultId, std::uint32_t> merged;
      for (const auto& fc : a.counts()) merged[fc.fault] = fc.count;
      for (const auto& fc : b.counts()) merged[fc.fault] = std::max(merged[fc.fault], fc.count);
      std::vector<FaultCount> cs;
      for (const auto& [f, c] : merged) cs.push_back({f, c});
      return {Hypothesis::multiset(std::move(cs))};
    }
    case SpaceTag::SqHS: {
      SequenceMerge merge(a.faults(), b.faults());
      std::vector<Hypothesis> out;
      for (const auto& r : merge.solve(0, 0)) out.push_back(Hypothesis::sequence(r));
      return min_antichain(out);
    }
  }
  return {};
}

namespace {

int chain_rank(SpaceTag tag) {
  switch (tag) {
    case SpaceTag::BHS: return 0;
    case SpaceTag::SHS: return 1;
    case SpaceTag::MHS: return 2;
    case SpaceTag::SqHS: return 3;
  }
  return -1;
}

Hypothesis project_one_step(const Hypothesis& h) {
  switch (h.tag()) {
    case SpaceTag::SqHS: {
      std::vector<FaultCount> cs;
      for (FaultId f : h.faults()) cs.push_back({f, 1});
      return Hypothesis::multiset(std::move(cs));
    }
    case SpaceTag::MHS: {
      std::vector<FaultId> fs;
      for (const auto& fc : h.counts()) fs.push_back(fc.fault);
      return Hypothesis::set(std::move(fs));
    }
    case SpaceTag::SHS: return Hypothesis::binary(h.faulty());
    case SpaceTag::BHS: break;
  }
  return h;
}

}  // namespace

Hypothesis project(const Hypothesis& h, SpaceTag to) {
  if (chain_rank(to) > chain_rank(h.tag())) {
    throw Error(ErrorCode::UnsupportedAbstraction, std::string("no abstraction from ") + space_tag_name(h.tag()) +
                                                       " to " + space_tag_name(to));
  }
  Hypothesis cur = h;
  while (cur.tag() != to) cur = project_one_step(cur);
  return cur;
}

std::vector<Hypothesis> min_antichain(std::span<const Hypothesis> s) {
  std::vector<Hypothesis> sorted(s.begin(), s.end());
  canonicalize(sorted);
  // Canonical order sorts by size first, so any strict ancestor precedes its descendants.
  std::vector<Hypothesis> out;
  for (const auto& h : sorted) {
    bool dominated = false;
    for (const auto& m : out) {
      if (leq(m, h)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(h);
  }
  return out;
}

bool is_antichain(std::span<const Hypothesis> s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i != j && leq(s[i], s[j])) return false;
    }
  }
  return true;
}

std::vector<Hypothesis> enumerate_universe(const Space& space, std::size_t bound) {
  std::vector<Hypothesis> out;
  const auto nf = static_cast<std::uint32_t>(space.fault_count());
  switch (space.tag()) {
    case SpaceTag::BHS:
      out = {Hypothesis::binary(false), Hypothesis::binary(true)};
      break;
    case SpaceTag::SHS:
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nf); ++mask) {
        std::vector<FaultId> fs;
        for (std::uint32_t i = 0; i < nf; ++i)
          if (mask & (std::uint64_t{1} << i)) fs.push_back(FaultId{i});
        out.push_back(Hypothesis::set(std::move(fs)));
      }
      break;
    case SpaceTag::MHS: {
      std::vector<std::uint32_t> counts(nf, 0);
      while (true) {
        std::vector<FaultCount> cs;
        for (std::uint32_t i = 0; i < nf; ++i) cs.push_back({FaultId{i}, counts[i]});
        out.push_back(Hypothesis::multiset(std::move(cs)));
        std::uint32_t k = 0;
        while (k < nf && counts[k] == bound) counts[k++] = 0;
        if (k == nf) break;
        ++counts[k];
      }
      break;
    }
    case SpaceTag::SqHS: {
      std::vector<std::vector<FaultId>> layer{{}};
      for (std::size_t len = 0; len <= bound; ++len) {
        std::vector<std::vector<FaultId>> next;
        for (const auto& s : layer) {
          out.push_back(Hypothesis::sequence(s));
          if (len == bound) continue;
          for (std::uint32_t i = 0; i < nf; ++i) {
            auto t = s;
            t.push_back(FaultId{i});
            next.push_back(std::move(t));
          }
        }
        layer = std::move(next);
      }
      break;
    }
  }
  canonicalize(out);
  return out;
}

}  // namespace diagfp
