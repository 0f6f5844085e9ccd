#include "diagfp/explicit_solver.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>

#include "diagfp/error.hpp"

namespace diagfp {

namespace {

using Slots = std::vector<std::uint32_t>;

struct SlotsHash {
  std::size_t operator()(const Slots& s) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto v : s) h = (h ^ v) * 1099511628211ull;
    return h;
  }
};

/// All global successor tuples of `from` on event e (component part only).
void global_successors(const DesModel& m, std::span<const std::uint32_t> from, EventId e,
                       std::vector<Slots>& out) {
  out.clear();
  out.emplace_back(from.begin(), from.end());
  for (std::uint32_t c : m.participants(e)) {
    std::vector<Slots> grown;
    for (const auto& p : out) {
      for (StateId s2 : m.successors(c, p[c], e)) {
        Slots q = p;
        q[c] = s2;
        grown.push_back(std::move(q));
      }
    }
    out = std::move(grown);
    if (out.empty()) return;
  }
}

std::vector<Slots> initial_tuples(const DesModel& m) {
  std::vector<Slots> tuples{{}};
  for (const auto& c : m.components()) {
    std::vector<Slots> next;
    for (const auto& t : tuples) {
      for (StateId s : c.initial) {
        Slots u = t;
        u.push_back(s);
        next.push_back(std::move(u));
      }
    }
    tuples = std::move(next);
  }
  return tuples;
}

[[noreturn]] void budget_exceeded(std::size_t budget) {
  throw Error(ErrorCode::StateBudget, "state budget of " + std::to_string(budget) + " visited states exceeded");
}

// Per-property monitors. Counters serve SHS/MHS (one per fault, saturating),
// sequence monitors serve SqHS (one per distinct anchor and direction).
class MonitorBank {
 public:
  MonitorBank(const Space& space, const PropertySet& request) : space_(space), request_(request) {
    const auto nf = static_cast<std::uint32_t>(space.fault_count());
    if (space.tag() == SpaceTag::SqHS) {
      for (const auto& p : request) {
        const bool desc_side = p.kind == PropertyKind::Desc || p.kind == PropertyKind::NegDesc;
        auto& list = desc_side ? desc_anchors_ : anc_anchors_;
        auto it = std::find(list.begin(), list.end(), p.anchor);
        binding_.push_back(static_cast<std::size_t>(it - list.begin()));
        if (it == list.end()) list.push_back(p.anchor);
      }
      // Anc slots follow all Desc slots.
      for (std::size_t i = 0; i < request.size(); ++i) {
        const auto k = request[i].kind;
        if (k == PropertyKind::Anc || k == PropertyKind::NegAnc) binding_[i] += desc_anchors_.size();
      }
      width_ = desc_anchors_.size() + anc_anchors_.size();
    } else {
      caps_.assign(nf, 1);
      for (const auto& p : request) {
        for (std::uint32_t f = 0; f < nf; ++f) caps_[f] = std::max(caps_[f], p.anchor.count(FaultId{f}) + 1);
      }
      width_ = nf;
    }
  }

  std::size_t width() const { return width_; }

  void advance(std::uint32_t* slots, FaultId f) const {
    if (space_.tag() != SpaceTag::SqHS) {
      slots[f.index] = std::min(slots[f.index] + 1, caps_[f.index]);
      return;
    }
    for (std::size_t i = 0; i < desc_anchors_.size(); ++i) {
      auto seq = desc_anchors_[i].faults();
      if (slots[i] < seq.size() && seq[slots[i]] == f) ++slots[i];
    }
    for (std::size_t i = 0; i < anc_anchors_.size(); ++i) {
      auto seq = anc_anchors_[i].faults();
      auto& st = slots[desc_anchors_.size() + i];
      const auto reject = static_cast<std::uint32_t>(seq.size() + 1);
      if (st == reject) continue;
      std::uint32_t p = st;
      while (p < seq.size() && seq[p] != f) ++p;
      st = p < seq.size() ? p + 1 : reject;
    }
  }

  bool holds(const std::uint32_t* slots, std::size_t i) const {
    const auto& p = request_[i];
    if (space_.tag() != SpaceTag::SqHS) return exhibits(counter_hypothesis(slots), p);
    const auto len = p.anchor.size();
    const auto st = slots[binding_[i]];
    switch (p.kind) {
      case PropertyKind::Desc: return st == len;
      case PropertyKind::NegDesc: return st < len;
      case PropertyKind::Anc: return st != len + 1;
      case PropertyKind::NegAnc: return st == len + 1;
    }
    return false;
  }

  bool accepting(const std::uint32_t* slots) const {
    if (space_.tag() != SpaceTag::SqHS) return member(counter_hypothesis(slots), request_);
    for (std::size_t i = 0; i < request_.size(); ++i) {
      if (!holds(slots, i)) return false;
    }
    return true;
  }

  /// Anc and NegDesc can only turn false as faults accumulate.
  bool dead(const std::uint32_t* slots) const {
    std::optional<Hypothesis> h;
    for (std::size_t i = 0; i < request_.size(); ++i) {
      const auto k = request_[i].kind;
      if (k != PropertyKind::Anc && k != PropertyKind::NegDesc) continue;
      if (space_.tag() == SpaceTag::SqHS) {
        if (!holds(slots, i)) return true;
      } else {
        if (!h) h = counter_hypothesis(slots);
        if (!exhibits(*h, request_[i])) return true;
      }
    }
    return false;
  }

 private:
  Hypothesis counter_hypothesis(const std::uint32_t* slots) const {
    const auto nf = static_cast<std::uint32_t>(caps_.size());
    if (space_.tag() == SpaceTag::SHS) {
      std::vector<FaultId> fs;
      for (std::uint32_t f = 0; f < nf; ++f)
        if (slots[f] > 0) fs.push_back(FaultId{f});
      return Hypothesis::set(std::move(fs));
    }
    std::vector<FaultCount> cs;
    for (std::uint32_t f = 0; f < nf; ++f)
      if (slots[f] > 0) cs.push_back({FaultId{f}, slots[f]});
    return Hypothesis::multiset(std::move(cs));
  }

  const Space& space_;
  const PropertySet& request_;
  std::vector<std::uint32_t> caps_;
  std::vector<Hypothesis> desc_anchors_, anc_anchors_;
  std::vector<std::size_t> binding_;
  std::size_t width_ = 0;
};

}  // namespace

ExplicitSolver::ExplicitSolver(const DesModel& model, Observation obs, SpaceTag tag, ExplicitOptions options)
    : model_(model), obs_(std::move(obs)), space_(model.space(tag)), options_(options) {
  if (tag == SpaceTag::BHS) usage_error("the explicit solver supports shs, mhs and sqhs");
  for (EventId e : obs_.events) {
    if (e >= model.events().size() || !model.is_observable(e)) usage_error("observation contains a non-observable event");
  }
}

TestOutcome ExplicitSolver::solve(const PropertySet& request) {
  for (const auto& p : request) {
    if (p.anchor.tag() != space_.tag()) usage_error("property anchor belongs to a different hypothesis space");
  }
  ++counters_.tests;
  last_witness_.reset();

  const MonitorBank bank(space_, request);
  const std::size_t nc = model_.components().size();
  const std::size_t width = nc + 1 + bank.width();
  const auto ne = static_cast<EventId>(model_.events().size());
  const auto obs_len = static_cast<std::uint32_t>(obs_.events.size());

  // Flat arena of visited states plus their BFS parent links.
  std::vector<std::uint32_t> arena;
  std::vector<std::pair<std::uint32_t, EventId>> parent;
  std::unordered_map<Slots, std::uint32_t, SlotsHash> index;
  std::deque<std::uint32_t> queue;
  std::optional<std::uint32_t> goal;

  auto visit = [&](Slots&& s, std::uint32_t from, EventId via) -> bool {
    if (bank.dead(s.data() + nc + 1)) return false;
    auto [it, inserted] = index.emplace(std::move(s), static_cast<std::uint32_t>(parent.size()));
    if (!inserted) return false;
    if (parent.size() >= options_.state_budget) budget_exceeded(options_.state_budget);
    arena.insert(arena.end(), it->first.begin(), it->first.end());
    parent.emplace_back(from, via);
    const std::uint32_t id = it->second;
    const std::uint32_t* slots = arena.data() + static_cast<std::size_t>(id) * width;
    if (slots[nc] == obs_len && bank.accepting(slots + nc + 1)) {
      goal = id;
      return true;
    }
    queue.push_back(id);
    return false;
  };

  constexpr std::uint32_t kRoot = UINT32_MAX;
  for (auto& t : initial_tuples(model_)) {
    t.resize(width, 0);
    if (visit(std::move(t), kRoot, 0)) break;
  }

  std::vector<Slots> succ;
  while (!goal && !queue.empty()) {
    const std::uint32_t id = queue.front();
    queue.pop_front();
    const Slots cur(arena.begin() + static_cast<std::ptrdiff_t>(id) * width,
                    arena.begin() + static_cast<std::ptrdiff_t>(id + 1) * width);
    const std::uint32_t idx = cur[nc];
    for (EventId e = 0; e < ne && !goal; ++e) {
      if (model_.is_observable(e) && (idx >= obs_len || obs_.events[idx] != e)) continue;
      global_successors(model_, std::span(cur.data(), nc), e, succ);
      for (auto& g : succ) {
        Slots next = cur;
        std::copy(g.begin(), g.end(), next.begin());
        if (model_.is_observable(e)) ++next[nc];
        if (auto f = model_.fault_id(e)) bank.advance(next.data() + nc + 1, *f);
        if (visit(std::move(next), id, e)) break;
      }
    }
  }
  counters_.work += parent.size();

  if (!goal) {
    ++counters_.failures;
    return TestFailed{Conflict{request}};
  }

  Trace trace;
  for (std::uint32_t at = *goal; parent[at].first != kRoot; at = parent[at].first) trace.push_back(parent[at].second);
  std::reverse(trace.begin(), trace.end());
  Hypothesis h = trace_hypothesis(trace, model_, space_.tag());
  if (!trace_in_model(trace, model_) || !trace_matches_observation(trace, model_, obs_) || !member(h, request)) {
    throw Error(ErrorCode::InternalConsistency,
                "explicit search produced witness " + render_trace(trace, model_) + " that fails re-validation");
  }
  ++counters_.candidates;
  last_witness_ = trace;
  return CandidateFound{std::move(h), trace_names(trace, model_)};
}

// ---------------------------------------------------------------------------
// Global reachability and the enumeration oracle

namespace {

/// Reachable global tuples and the edges between them.
struct GlobalGraph {
  std::vector<Slots> states;
  std::vector<std::vector<std::pair<EventId, std::uint32_t>>> edges;
};

GlobalGraph explore(const DesModel& m, std::size_t budget) {
  GlobalGraph g;
  std::unordered_map<Slots, std::uint32_t, SlotsHash> index;
  auto add = [&](Slots s) {
    auto [it, inserted] = index.emplace(s, static_cast<std::uint32_t>(g.states.size()));
    if (inserted) {
      if (g.states.size() >= budget) budget_exceeded(budget);
      g.states.push_back(std::move(s));
      g.edges.emplace_back();
    }
    return it->second;
  };
  for (auto& t : initial_tuples(m)) add(std::move(t));
  std::vector<Slots> succ;
  for (std::uint32_t id = 0; id < g.states.size(); ++id) {
    for (EventId e = 0; e < m.events().size(); ++e) {
      const Slots cur = g.states[id];
      global_successors(m, cur, e, succ);
      for (auto& s : succ) {
        std::uint32_t to = add(std::move(s));
        g.edges[id].emplace_back(e, to);
      }
    }
  }
  return g;
}

Hypothesis extend(const Hypothesis& h, FaultId f) {
  switch (h.tag()) {
    case SpaceTag::SHS: {
      std::vector<FaultId> fs(h.faults().begin(), h.faults().end());
      fs.push_back(f);
      return Hypothesis::set(std::move(fs));
    }
    case SpaceTag::MHS: {
      std::vector<FaultCount> cs(h.counts().begin(), h.counts().end());
      cs.push_back({f, 1});
      return Hypothesis::multiset(std::move(cs));
    }
    case SpaceTag::SqHS: {
      std::vector<FaultId> fs(h.faults().begin(), h.faults().end());
      fs.push_back(f);
      return Hypothesis::sequence(std::move(fs));
    }
    case SpaceTag::BHS: return Hypothesis::binary(true);
  }
  return h;
}

}  // namespace

std::size_t reachable_global_states(const DesModel& m, std::size_t budget) { return explore(m, budget).states.size(); }

std::optional<std::size_t> silent_depth(const DesModel& m, std::size_t budget) {
  const auto g = explore(m, budget);
  const std::size_t n = g.states.size();
  // Longest path in the silent subgraph by DFS with colouring; a grey hit means a cycle.
  std::vector<int> colour(n, 0);
  std::vector<std::size_t> depth(n, 0);
  std::vector<std::uint32_t> order;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (colour[root]) continue;
    std::vector<std::pair<std::uint32_t, std::size_t>> stack{{root, 0}};
    colour[root] = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      const auto& out = g.edges[v];
      while (next < out.size() && m.is_observable(out[next].first)) ++next;
      if (next == out.size()) {
        colour[v] = 2;
        order.push_back(v);
        stack.pop_back();
        continue;
      }
      const std::uint32_t w = out[next++].second;
      if (colour[w] == 1) return std::nullopt;
      if (colour[w] == 0) {
        colour[w] = 1;
        stack.emplace_back(w, 0);
      }
    }
  }
  // No back edge: the silent graph is a DAG and `order` is a postorder.
  std::size_t longest = 0;
  for (std::uint32_t v : order) {
    for (const auto& [e, w] : g.edges[v]) {
      if (!m.is_observable(e)) depth[v] = std::max(depth[v], depth[w] + 1);
    }
    longest = std::max(longest, depth[v]);
  }
  return longest;
}

std::size_t certified_bound(const DesModel& m, const Observation& o, std::size_t budget) {
  return (reachable_global_states(m, budget) + 1) * (o.events.size() + 1);
}

std::vector<Hypothesis> oracle_candidates(const DesModel& m, const Observation& o, SpaceTag tag, std::size_t bound,
                                          std::size_t budget) {
  if (tag == SpaceTag::BHS) usage_error("the oracle supports shs, mhs and sqhs");
  // A configuration is a global tuple with the observation index appended, plus the hypothesis so far.
  using Config = std::pair<Slots, Hypothesis>;
  std::set<Config> seen;
  std::vector<Config> layer;
  for (auto& t : initial_tuples(m)) {
    t.push_back(0);
    Config c{std::move(t), Hypothesis::nominal(tag)};
    if (seen.insert(c).second) layer.push_back(std::move(c));
  }
  const std::size_t nc = m.components().size();
  const auto obs_len = static_cast<std::uint32_t>(o.events.size());
  std::vector<Slots> succ;
  for (std::size_t depth = 0; depth < bound && !layer.empty(); ++depth) {
    std::vector<Config> next_layer;
    for (const auto& [slots, h] : layer) {
      const std::uint32_t idx = slots[nc];
      for (EventId e = 0; e < m.events().size(); ++e) {
        if (m.is_observable(e) && (idx >= obs_len || o.events[idx] != e)) continue;
        global_successors(m, std::span(slots.data(), nc), e, succ);
        if (succ.empty()) continue;
        const auto f = m.fault_id(e);
        const Hypothesis h2 = f ? extend(h, *f) : h;
        for (auto& g : succ) {
          g.push_back(m.is_observable(e) ? idx + 1 : idx);
          Config c{std::move(g), h2};
          if (seen.size() >= budget) budget_exceeded(budget);
          if (seen.insert(c).second) next_layer.push_back(std::move(c));
        }
      }
    }
    layer = std::move(next_layer);
  }
  std::vector<Hypothesis> out;
  for (const auto& [slots, h] : seen) {
    if (slots[nc] == obs_len) out.push_back(h);
  }
  canonicalize(out);
  return out;
}

std::vector<Hypothesis> oracle_diagnose(const DesModel& m, const Observation& o, SpaceTag tag, std::size_t bound,
                                        std::size_t budget) {
  return min_antichain(oracle_candidates(m, o, tag, bound, budget));
}

}  // namespace diagfp
