#include "diagfp/sat.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "diagfp/error.hpp"

namespace diagfp {

// ---------------------------------------------------------------------------
// CnfFormula

int CnfFormula::new_var(std::string name) {
  const int v = num_vars() + 1;
  if (!index_.emplace(name, v).second) {
    throw Error(ErrorCode::InternalConsistency, "variable name '" + name + "' registered twice");
  }
  names_.push_back(std::move(name));
  return v;
}

int CnfFormula::find_var(std::string_view name) const {
  auto it = index_.find(std::string(name));
  return it == index_.end() ? 0 : it->second;
}

void CnfFormula::add_clause(std::vector<Lit> clause) {
  for (Lit l : clause) {
    if (l == 0 || std::abs(l) > num_vars()) {
      throw Error(ErrorCode::InternalConsistency, "clause mentions unknown variable " + std::to_string(l));
    }
  }
  clauses_.push_back(std::move(clause));
}

void CnfFormula::at_most_one(std::span<const Lit> lits, const std::string& tag, Lit guard) {
  auto emit = [&](std::vector<Lit> c) {
    if (guard) c.push_back(guard);
    add_clause(std::move(c));
  };
  const std::size_t n = lits.size();
  if (n <= 1) return;
  if (n <= 8) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) emit({-lits[i], -lits[j]});
    return;
  }
  // Sequential counter: s_k means "some of lits[0..k] is true".
  std::vector<Lit> s(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) s[k] = new_var(tag + "#" + std::to_string(k));
  emit({-lits[0], s[0]});
  for (std::size_t k = 1; k + 1 < n; ++k) {
    emit({-lits[k], s[k]});
    emit({-s[k - 1], s[k]});
    emit({-lits[k], -s[k - 1]});
  }
  emit({-lits[n - 1], -s[n - 2]});
}

void CnfFormula::exactly_one(std::span<const Lit> lits, const std::string& tag, Lit guard) {
  std::vector<Lit> some(lits.begin(), lits.end());
  if (guard) some.push_back(guard);
  add_clause(std::move(some));
  at_most_one(lits, tag, guard);
}

std::string CnfFormula::to_dimacs(std::span<const std::string> comments, std::span<const Lit> extra_units) const {
  std::ostringstream out;
  for (const auto& c : comments) out << "c " << c << '\n';
  for (int v = 1; v <= num_vars(); ++v) out << "c var " << v << ' ' << var_name(v) << '\n';
  out << "p cnf " << num_vars() << ' ' << clauses_.size() + extra_units.size() << '\n';
  for (const auto& c : clauses_) {
    for (Lit l : c) out << l << ' ';
    out << "0\n";
  }
  for (Lit l : extra_units) out << l << " 0\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// CDCL solver

namespace {

constexpr std::uint32_t kNoReason = UINT32_MAX;
constexpr std::int8_t kFalse = 0, kTrue = 1, kUndef = 2;

inline int var_of(int l) { return l >> 1; }
inline int to_internal(Lit l) { return l > 0 ? 2 * (l - 1) : 2 * (-l - 1) + 1; }
inline Lit to_external(int l) { return (l & 1) ? -(var_of(l) + 1) : var_of(l) + 1; }

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

struct SatSolver::Impl {
  struct Clause {
    std::vector<int> lits;
    bool learnt = false;
    bool removed = false;
    double activity = 0;
  };
  struct Watcher {
    std::uint32_t cref;
    int blocker;
  };

  bool ok = true;
  std::vector<Clause> clauses;
  std::vector<std::uint32_t> learnts;
  std::vector<std::vector<Watcher>> watches;  // indexed by literal; clauses watching its negation
  std::vector<std::int8_t> assigns;
  std::vector<std::int8_t> polarity;  // saved phase: 1 means the negative literal
  std::vector<std::uint32_t> reason;
  std::vector<int> level;
  std::vector<double> activity;
  std::vector<char> seen;
  std::vector<int> trail;
  std::vector<std::size_t> trail_lim;
  std::size_t qhead = 0;

  // Binary max-heap of unassigned variables by activity.
  std::vector<int> heap;
  std::vector<int> heap_pos;  // -1 when absent

  double var_inc = 1.0, cla_inc = 1.0;
  double max_learnts = 0;

  std::vector<int> assumptions;
  std::vector<char> model;
  std::vector<Lit> failed;

  std::uint64_t n_conflicts = 0, n_decisions = 0, n_propagations = 0;

  int num_vars() const { return static_cast<int>(assigns.size()); }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  std::int8_t value(int l) const {
    const std::int8_t a = assigns[var_of(l)];
    return a == kUndef ? kUndef : static_cast<std::int8_t>(a ^ (l & 1));
  }

  void reserve(int n) {
    while (num_vars() < n) {
      const int x = num_vars();
      assigns.push_back(kUndef);
      polarity.push_back(1);
      reason.push_back(kNoReason);
      level.push_back(0);
      activity.push_back(0);
      seen.push_back(0);
      watches.emplace_back();
      watches.emplace_back();
      heap_pos.push_back(-1);
      heap_insert(x);
    }
  }

  // -- heap --
  bool heap_less(int a, int b) const { return activity[a] > activity[b]; }
  void heap_up(std::size_t i) {
    const int x = heap[i];
    while (i > 0) {
      const std::size_t p = (i - 1) / 2;
      if (!heap_less(x, heap[p])) break;
      heap[i] = heap[p];
      heap_pos[heap[i]] = static_cast<int>(i);
      i = p;
    }
    heap[i] = x;
    heap_pos[x] = static_cast<int>(i);
  }
  void heap_down(std::size_t i) {
    const int x = heap[i];
    for (;;) {
      std::size_t c = 2 * i + 1;
      if (c >= heap.size()) break;
      if (c + 1 < heap.size() && heap_less(heap[c + 1], heap[c])) ++c;
      if (!heap_less(heap[c], x)) break;
      heap[i] = heap[c];
      heap_pos[heap[i]] = static_cast<int>(i);
      i = c;
    }
    heap[i] = x;
    heap_pos[x] = static_cast<int>(i);
  }
  void heap_insert(int x) {
    if (heap_pos[x] >= 0) return;
    heap.push_back(x);
    heap_up(heap.size() - 1);
  }
  int heap_pop() {
    const int top = heap[0];
    heap_pos[top] = -1;
    heap[0] = heap.back();
    heap.pop_back();
    if (!heap.empty()) {
      heap_pos[heap[0]] = 0;
      heap_down(0);
    }
    return top;
  }

  void bump_var(int x) {
    if ((activity[x] += var_inc) > 1e100) {
      for (auto& a : activity) a *= 1e-100;
      var_inc *= 1e-100;
    }
    if (heap_pos[x] >= 0) heap_up(static_cast<std::size_t>(heap_pos[x]));
  }
  void bump_clause(Clause& c) {
    if ((c.activity += cla_inc) > 1e20) {
      for (auto cr : learnts) clauses[cr].activity *= 1e-20;
      cla_inc *= 1e-20;
    }
  }

  void enqueue(int l, std::uint32_t from) {
    const int x = var_of(l);
    assigns[x] = static_cast<std::int8_t>(!(l & 1));
    reason[x] = from;
    level[x] = decision_level();
    trail.push_back(l);
  }

  void attach(std::uint32_t cref) {
    const auto& c = clauses[cref].lits;
    watches[c[0] ^ 1].push_back({cref, c[1]});
    watches[c[1] ^ 1].push_back({cref, c[0]});
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t i = trail.size(); i-- > trail_lim[static_cast<std::size_t>(lvl)];) {
      const int x = var_of(trail[i]);
      assigns[x] = kUndef;
      reason[x] = kNoReason;
      polarity[x] = static_cast<std::int8_t>(trail[i] & 1);
      heap_insert(x);
    }
    trail.resize(trail_lim[static_cast<std::size_t>(lvl)]);
    trail_lim.resize(static_cast<std::size_t>(lvl));
    qhead = trail.size();
  }

  std::uint32_t propagate() {
    std::uint32_t conflict = kNoReason;
    while (qhead < trail.size()) {
      const int p = trail[qhead++];
      const int false_lit = p ^ 1;
      auto& ws = watches[p];
      ++n_propagations;
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        const Watcher w = ws[i];
        if (value(w.blocker) == kTrue) {
          ws[j++] = ws[i++];
          continue;
        }
        Clause& cl = clauses[w.cref];
        if (cl.removed) {
          ++i;
          continue;
        }
        auto& c = cl.lits;
        if (c[0] == false_lit) std::swap(c[0], c[1]);
        ++i;
        const int first = c[0];
        const Watcher nw{w.cref, first};
        if (first != w.blocker && value(first) == kTrue) {
          ws[j++] = nw;
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.size(); ++k) {
          if (value(c[k]) != kFalse) {
            std::swap(c[1], c[k]);
            watches[c[1] ^ 1].push_back(nw);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = nw;
        if (value(first) == kFalse) {
          conflict = w.cref;
          qhead = trail.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void analyze(std::uint32_t conflict, std::vector<int>& out, int& bt_level) {
    int path = 0;
    int p = -1;
    out.assign(1, 0);
    std::size_t index = trail.size();
    do {
      Clause& c = clauses[conflict];
      if (c.learnt) bump_clause(c);
      for (std::size_t j = (p == -1 ? 0 : 1); j < c.lits.size(); ++j) {
        const int q = c.lits[j];
        const int x = var_of(q);
        if (!seen[x] && level[x] > 0) {
          bump_var(x);
          seen[x] = 1;
          if (level[x] >= decision_level()) {
            ++path;
          } else {
            out.push_back(q);
          }
        }
      }
      while (!seen[var_of(trail[--index])]) {
      }
      p = trail[index];
      conflict = reason[var_of(p)];
      seen[var_of(p)] = 0;
      --path;
    } while (path > 0);
    out[0] = p ^ 1;

    // Drop literals implied by the rest of the clause through a single reason.
    const std::vector<int> marked(out.begin() + 1, out.end());
    std::size_t keep = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
      const int x = var_of(out[i]);
      bool redundant = false;
      if (reason[x] != kNoReason) {
        redundant = true;
        const auto& r = clauses[reason[x]].lits;
        for (std::size_t k = 1; k < r.size(); ++k) {
          const int y = var_of(r[k]);
          if (!seen[y] && level[y] > 0) {
            redundant = false;
            break;
          }
        }
      }
      if (!redundant) out[keep++] = out[i];
    }
    for (int q : marked) seen[var_of(q)] = 0;
    out.resize(keep);

    bt_level = 0;
    if (out.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < out.size(); ++i)
        if (level[var_of(out[i])] > level[var_of(out[max_i])]) max_i = i;
      std::swap(out[1], out[max_i]);
      bt_level = level[var_of(out[1])];
    }
  }

  /// p is true and contradicts an assumption; collect the assumptions behind it.
  void analyze_final(int p) {
    failed.clear();
    failed.push_back(to_external(p ^ 1));
    if (decision_level() == 0) return;
    seen[var_of(p)] = 1;
    for (std::size_t i = trail.size(); i-- > trail_lim[0];) {
      const int x = var_of(trail[i]);
      if (!seen[x]) continue;
      if (reason[x] == kNoReason) {
        failed.push_back(to_external(trail[i]));
      } else {
        const auto& c = clauses[reason[x]].lits;
        for (std::size_t k = 1; k < c.size(); ++k)
          if (level[var_of(c[k])] > 0) seen[var_of(c[k])] = 1;
      }
      seen[x] = 0;
    }
    seen[var_of(p)] = 0;
    std::sort(failed.begin(), failed.end());
    failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
  }

  void reduce_db() {
    std::sort(learnts.begin(), learnts.end(),
              [&](std::uint32_t a, std::uint32_t b) { return clauses[a].activity < clauses[b].activity; });
    const std::size_t half = learnts.size() / 2;
    std::vector<std::uint32_t> kept;
    for (std::size_t i = 0; i < learnts.size(); ++i) {
      Clause& c = clauses[learnts[i]];
      const int x = var_of(c.lits[0]);
      const bool locked = reason[x] == learnts[i] && value(c.lits[0]) == kTrue;
      if (i < half && !locked && c.lits.size() > 2) {
        c.removed = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
      } else {
        kept.push_back(learnts[i]);
      }
    }
    learnts = std::move(kept);
  }

  bool add_clause(std::vector<int> c) {
    if (!ok) return false;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    std::size_t keep = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i + 1 < c.size() && c[i + 1] == (c[i] ^ 1)) return true;  // tautology
      const auto v = value(c[i]);
      if (v == kTrue) return true;
      if (v == kUndef) c[keep++] = c[i];
    }
    c.resize(keep);
    if (c.empty()) return ok = false;
    if (c.size() == 1) {
      enqueue(c[0], kNoReason);
      return ok = (propagate() == kNoReason);
    }
    clauses.push_back({std::move(c), false, false, 0});
    attach(static_cast<std::uint32_t>(clauses.size() - 1));
    return true;
  }

  enum class Status { Sat, Unsat, Unknown };

  Status search(int conflict_limit) {
    int local_conflicts = 0;
    std::vector<int> learnt;
    for (;;) {
      const std::uint32_t conflict = propagate();
      if (conflict != kNoReason) {
        ++n_conflicts;
        ++local_conflicts;
        if (decision_level() == 0) {
          ok = false;
          failed.clear();
          return Status::Unsat;
        }
        int bt = 0;
        analyze(conflict, learnt, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          clauses.push_back({learnt, true, false, 0});
          const auto cref = static_cast<std::uint32_t>(clauses.size() - 1);
          learnts.push_back(cref);
          attach(cref);
          bump_clause(clauses[cref]);
          enqueue(learnt[0], cref);
        }
        var_inc /= 0.95;
        cla_inc /= 0.999;
        continue;
      }
      if (local_conflicts >= conflict_limit) {
        cancel_until(0);
        return Status::Unknown;
      }
      if (static_cast<double>(learnts.size()) - static_cast<double>(trail.size()) >= max_learnts) {
        reduce_db();
        max_learnts *= 1.1;
      }
      int next = -1;
      while (decision_level() < static_cast<int>(assumptions.size())) {
        const int a = assumptions[static_cast<std::size_t>(decision_level())];
        const auto v = value(a);
        if (v == kTrue) {
          trail_lim.push_back(trail.size());
        } else if (v == kFalse) {
          analyze_final(a ^ 1);
          return Status::Unsat;
        } else {
          next = a;
          break;
        }
      }
      if (next < 0) {
        while (!heap.empty()) {
          const int x = heap_pop();
          if (assigns[x] == kUndef) {
            next = 2 * x + polarity[x];
            break;
          }
        }
        if (next < 0) return Status::Sat;
        ++n_decisions;
      }
      trail_lim.push_back(trail.size());
      enqueue(next, kNoReason);
    }
  }
};

SatSolver::SatSolver() : impl_(std::make_unique<Impl>()) {}
SatSolver::~SatSolver() = default;

void SatSolver::reserve_vars(int n) { impl_->reserve(n); }
int SatSolver::num_vars() const { return impl_->num_vars(); }

bool SatSolver::add_clause(std::span<const Lit> clause) {
  std::vector<int> c;
  c.reserve(clause.size());
  for (Lit l : clause) {
    if (l == 0) usage_error("literal 0 is not allowed in a clause");
    impl_->reserve(std::abs(l));
    c.push_back(to_internal(l));
  }
  return impl_->add_clause(std::move(c));
}

void SatSolver::add_formula(const CnfFormula& f) {
  impl_->reserve(f.num_vars());
  for (const auto& c : f.clauses()) add_clause(c);
}

SatSolver::Result SatSolver::solve(std::span<const Lit> assumptions) {
  auto& s = *impl_;
  s.failed.clear();
  s.model.clear();
  s.assumptions.clear();
  for (Lit l : assumptions) {
    if (l == 0) usage_error("literal 0 is not allowed as an assumption");
    s.reserve(std::abs(l));
    s.assumptions.push_back(to_internal(l));
  }
  if (!s.ok) return Result::Unsat;
  s.max_learnts = std::max(1000.0, static_cast<double>(s.clauses.size()) / 3.0);
  Impl::Status status = Impl::Status::Unknown;
  for (int restart = 0; status == Impl::Status::Unknown; ++restart) {
    status = s.search(static_cast<int>(luby(2, restart) * 100));
  }
  if (status == Impl::Status::Sat) {
    s.model.resize(static_cast<std::size_t>(s.num_vars()));
    for (int x = 0; x < s.num_vars(); ++x) s.model[static_cast<std::size_t>(x)] = s.assigns[x] == kTrue;
  }
  s.cancel_until(0);
  return status == Impl::Status::Sat ? Result::Sat : Result::Unsat;
}

bool SatSolver::model_value(int v) const {
  if (v < 1 || static_cast<std::size_t>(v) > impl_->model.size()) usage_error("no model value for variable");
  return impl_->model[static_cast<std::size_t>(v - 1)];
}

const std::vector<Lit>& SatSolver::failed_assumptions() const { return impl_->failed; }
std::uint64_t SatSolver::conflicts() const { return impl_->n_conflicts; }
std::uint64_t SatSolver::decisions() const { return impl_->n_decisions; }
std::uint64_t SatSolver::propagations() const { return impl_->n_propagations; }

}  // namespace diagfp
