#include "diagfp/des_sat.hpp"

#include <algorithm>

#include "diagfp/error.hpp"

namespace diagfp {

namespace {

std::string at(const std::string& name, std::size_t t) { return name + "@" + std::to_string(t); }

}  // namespace

DesEncoding::DesEncoding(const DesModel& m, std::size_t obs_len, EncodingParams p, SpaceTag tag)
    : m_(m), k_(p.steps_per_obs), n_(p.horizon(obs_len)), tag_(tag) {
  if (p.steps_per_obs < 1) usage_error("steps per observation must be at least 1");
  if (tag == SpaceTag::BHS) usage_error("the sat solver supports shs, mhs and sqhs");
  const auto& comps = m.components();
  state_.resize(comps.size());
  trans_.resize(comps.size());
  for (std::size_t t = 0; t <= n_; ++t) {
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (const auto& s : comps[c].states) state_[c].push_back(cnf_.new_var(at(comps[c].name + "." + s, t)));
    }
    if (t == 0) continue;
    for (const auto& e : m.events()) event_.push_back(cnf_.new_var(at(e, t)));
    for (std::size_t c = 0; c < comps.size(); ++c) {
      for (const auto& tr : comps[c].transitions) {
        const auto& st = comps[c].states;
        trans_[c].push_back(cnf_.new_var(
            at(comps[c].name + ":" + st[tr.from] + "-" + m.event_name(tr.event) + "->" + st[tr.to], t)));
      }
    }
  }
}

Lit DesEncoding::state_var(std::uint32_t c, StateId s, std::size_t t) const {
  return state_.at(c).at(t * m_.components()[c].states.size() + s);
}

Lit DesEncoding::event_var(EventId e, std::size_t t) const {
  if (t < 1 || t > n_) usage_error("event timestep out of range");
  return event_.at((t - 1) * m_.events().size() + e);
}

std::vector<Lit> DesEncoding::fault_vars(std::size_t t) const {
  std::vector<Lit> out;
  for (EventId e : m_.faults()) out.push_back(event_var(e, t));
  return out;
}

void DesEncoding::encode_model() {
  const auto& comps = m_.components();
  for (std::uint32_t c = 0; c < comps.size(); ++c) {
    const auto& comp = comps[c];
    const std::size_t ns = comp.states.size();
    const std::size_t nt = comp.transitions.size();

    std::vector<Lit> init;
    for (StateId s : comp.initial) init.push_back(state_var(c, s, 0));
    cnf_.add_clause(init);

    for (std::size_t t = 0; t <= n_; ++t) {
      std::vector<Lit> states;
      for (StateId s = 0; s < ns; ++s) states.push_back(state_var(c, s, t));
      cnf_.exactly_one(states, at("eo(" + comp.name + ")", t));
      if (t == 0) continue;

      for (std::size_t i = 0; i < nt; ++i) {
        const auto& tr = comp.transitions[i];
        const Lit x = trans_[c][(t - 1) * nt + i];
        cnf_.add_clause({-x, state_var(c, tr.to, t)});
        cnf_.add_clause({-x, state_var(c, tr.from, t - 1)});
        cnf_.add_clause({-x, event_var(tr.event, t)});
      }
      // A state can only become true through a transition entering it.
      for (StateId s = 0; s < ns; ++s) {
        std::vector<Lit> clause{-state_var(c, s, t), state_var(c, s, t - 1)};
        for (std::size_t i = 0; i < nt; ++i) {
          if (comp.transitions[i].to == s) clause.push_back(trans_[c][(t - 1) * nt + i]);
        }
        cnf_.add_clause(std::move(clause));
      }
      std::vector<Lit> events;
      for (EventId e : comp.alphabet) {
        std::vector<Lit> clause{-event_var(e, t)};
        for (std::size_t i = 0; i < nt; ++i) {
          if (comp.transitions[i].event == e) clause.push_back(trans_[c][(t - 1) * nt + i]);
        }
        cnf_.add_clause(std::move(clause));
        events.push_back(event_var(e, t));
      }
      cnf_.at_most_one(events, at("amo(" + comp.name + ")", t));
    }
  }
  if (tag_ == SpaceTag::SqHS) {
    for (std::size_t t = 1; t <= n_; ++t) cnf_.at_most_one(fault_vars(t), at("amo(faults)", t));
  }
}

void DesEncoding::encode_observation(const Observation& o) {
  if (n_ != k_ * (o.events.size() + 1)) usage_error("observation length does not match the encoding horizon");
  for (std::size_t t = 1; t <= n_; ++t) {
    const bool pinned = t % k_ == 0 && t / k_ <= o.events.size();
    for (EventId e : m_.observable()) {
      const bool expected = pinned && o.events[t / k_ - 1] == e;
      cnf_.add_clause({expected ? event_var(e, t) : -event_var(e, t)});
    }
  }
}

Lit DesEncoding::occurrence(FaultId f) {
  if (auto it = occ_.find(f.index); it != occ_.end()) return it->second;
  const EventId e = m_.fault_event(f);
  const Lit occ = cnf_.new_var("occ(" + m_.event_name(e) + ")");
  std::vector<Lit> some{-occ};
  for (std::size_t t = 1; t <= n_; ++t) {
    some.push_back(event_var(e, t));
    cnf_.add_clause({-event_var(e, t), occ});
  }
  cnf_.add_clause(std::move(some));
  occ_.emplace(f.index, occ);
  return occ;
}

// cnt(f, j)@t: f occurred at least j times within steps 1..t.
Lit DesEncoding::counter(FaultId f, std::uint32_t j, std::size_t t) {
  const auto key = std::make_tuple(f.index, j, t);
  if (auto it = cnt_.find(key); it != cnt_.end()) return it->second;
  const EventId e = m_.fault_event(f);
  const Lit v = cnf_.new_var(at("cnt(" + m_.event_name(e) + "," + std::to_string(j) + ")", t));
  cnt_.emplace(key, v);
  if (t == 0) {
    cnf_.add_clause({-v});
    return v;
  }
  const Lit prev = counter(f, j, t - 1);
  const Lit fe = event_var(e, t);
  cnf_.add_clause({-prev, v});
  if (j == 1) {
    cnf_.add_clause({-fe, v});
    cnf_.add_clause({-v, prev, fe});
  } else {
    const Lit below = counter(f, j - 1, t - 1);
    cnf_.add_clause({-below, -fe, v});
    cnf_.add_clause({-v, prev, below});
    cnf_.add_clause({-v, prev, fe});
  }
  return v;
}

void DesEncoding::encode_property(const Property& prop, Lit activation) {
  if (prop.anchor.tag() != tag_) usage_error("property anchor belongs to a different hypothesis space");
  const std::size_t id = property_count_++;
  const Lit g = -activation;
  const auto nf = static_cast<std::uint32_t>(m_.faults().size());
  const auto& h = prop.anchor;

  switch (tag_) {
    case SpaceTag::SHS: {
      switch (prop.kind) {
        case PropertyKind::Desc:
          for (FaultId f : h.faults()) {
            std::vector<Lit> clause{g};
            for (std::size_t t = 1; t <= n_; ++t) clause.push_back(event_var(m_.fault_event(f), t));
            cnf_.add_clause(std::move(clause));
          }
          break;
        case PropertyKind::Anc:
          for (std::uint32_t f = 0; f < nf; ++f) {
            if (h.count(FaultId{f})) continue;
            for (std::size_t t = 1; t <= n_; ++t) cnf_.add_clause({g, -event_var(m_.fault_event(FaultId{f}), t)});
          }
          break;
        case PropertyKind::NegDesc: {
          std::vector<Lit> clause{g};
          for (FaultId f : h.faults()) clause.push_back(-occurrence(f));
          cnf_.add_clause(std::move(clause));
          break;
        }
        case PropertyKind::NegAnc: {
          std::vector<Lit> clause{g};
          for (std::uint32_t f = 0; f < nf; ++f)
            if (!h.count(FaultId{f})) clause.push_back(occurrence(FaultId{f}));
          cnf_.add_clause(std::move(clause));
          break;
        }
      }
      return;
    }
    case SpaceTag::MHS: {
      switch (prop.kind) {
        case PropertyKind::Desc:
          for (const auto& fc : h.counts()) cnf_.add_clause({g, counter(fc.fault, fc.count, n_)});
          break;
        case PropertyKind::Anc:
          for (std::uint32_t f = 0; f < nf; ++f)
            cnf_.add_clause({g, -counter(FaultId{f}, h.count(FaultId{f}) + 1, n_)});
          break;
        case PropertyKind::NegDesc: {
          std::vector<Lit> clause{g};
          for (const auto& fc : h.counts()) clause.push_back(-counter(fc.fault, fc.count, n_));
          cnf_.add_clause(std::move(clause));
          break;
        }
        case PropertyKind::NegAnc: {
          std::vector<Lit> clause{g};
          for (std::uint32_t f = 0; f < nf; ++f) clause.push_back(counter(FaultId{f}, h.count(FaultId{f}) + 1, n_));
          cnf_.add_clause(std::move(clause));
          break;
        }
      }
      return;
    }
    case SpaceTag::SqHS:
      break;
    case SpaceTag::BHS:
      usage_error("the sat solver supports shs, mhs and sqhs");
  }

  const auto seq = h.faults();
  const std::size_t k = seq.size();
  const std::string tag = std::to_string(id);
  auto fv = [&](FaultId f, std::size_t t) { return event_var(m_.fault_event(f), t); };

  if (prop.kind == PropertyKind::Desc || prop.kind == PropertyKind::NegDesc) {
    // dh_i@t: seq[0..i) embeds into the fault projection of steps 1..t.
    if (k == 0) {
      if (prop.kind == PropertyKind::NegDesc) cnf_.add_clause({g});
      return;
    }
    std::vector<std::vector<Lit>> dh(k + 1, std::vector<Lit>(n_ + 1, 0));
    for (std::size_t t = 0; t <= n_; ++t)
      for (std::size_t i = 1; i <= k; ++i)
        dh[i][t] = cnf_.new_var(at("dh" + tag + "_" + std::to_string(i), t));
    for (std::size_t i = 1; i <= k; ++i) cnf_.add_clause({-dh[i][0]});
    for (std::size_t t = 1; t <= n_; ++t) {
      for (std::size_t i = 1; i <= k; ++i) {
        const Lit cur = dh[i][t], prev = dh[i][t - 1], f = fv(seq[i - 1], t);
        cnf_.add_clause({-prev, cur});
        if (i == 1) {
          cnf_.add_clause({-f, cur});
          cnf_.add_clause({-cur, prev, f});
        } else {
          const Lit below = dh[i - 1][t - 1];
          cnf_.add_clause({-below, -f, cur});
          cnf_.add_clause({-cur, prev, below});
          cnf_.add_clause({-cur, prev, f});
        }
      }
    }
    cnf_.add_clause({g, prop.kind == PropertyKind::Desc ? dh[k][n_] : -dh[k][n_]});
    return;
  }

  // ah_i@t: the fault projection of steps 1..t embeds into seq[0..i).
  // A fault f at step t keeps ah_i true iff f occurs in seq[0..i) and the
  // projection before t embeds into the prefix ending just before the last
  // such occurrence; a step without faults leaves ah_i unchanged.
  std::vector<std::vector<Lit>> ah(k + 1, std::vector<Lit>(n_ + 1, 0));
  for (std::size_t t = 0; t <= n_; ++t)
    for (std::size_t i = 0; i <= k; ++i) ah[i][t] = cnf_.new_var(at("ah" + tag + "_" + std::to_string(i), t));
  for (std::size_t i = 0; i <= k; ++i) cnf_.add_clause({ah[i][0]});
  for (std::size_t t = 1; t <= n_; ++t) {
    const auto faults_now = fault_vars(t);
    for (std::size_t i = 0; i <= k; ++i) {
      const Lit cur = ah[i][t], prev = ah[i][t - 1];
      std::vector<Lit> keep_true{-prev, cur}, keep_false{prev, -cur};
      keep_true.insert(keep_true.end(), faults_now.begin(), faults_now.end());
      keep_false.insert(keep_false.end(), faults_now.begin(), faults_now.end());
      cnf_.add_clause(std::move(keep_true));
      cnf_.add_clause(std::move(keep_false));
      for (std::uint32_t f = 0; f < nf; ++f) {
        const Lit fe = fv(FaultId{f}, t);
        std::size_t last = 0;  // 1-based position of the last f in seq[0..i), 0 if none
        for (std::size_t p = 1; p <= i; ++p)
          if (seq[p - 1].index == f) last = p;
        if (last == 0) {
          cnf_.add_clause({-fe, -cur});
        } else {
          const Lit before = ah[last - 1][t - 1];
          cnf_.add_clause({-fe, -cur, before});
          cnf_.add_clause({-fe, cur, -before});
        }
      }
    }
  }
  cnf_.add_clause({g, prop.kind == PropertyKind::Anc ? ah[k][n_] : -ah[k][n_]});
}

// ---------------------------------------------------------------------------
// DesSatSolver

DesSatSolver::DesSatSolver(const DesModel& model, Observation obs, SpaceTag tag, SatOptions options)
    : model_(model),
      obs_(std::move(obs)),
      space_(model.space(tag)),
      options_(options),
      base_(model, obs_.events.size(), options.params, tag) {
  for (EventId e : obs_.events) {
    if (e >= model.events().size() || !model.is_observable(e)) usage_error("observation contains a non-observable event");
  }
  base_.encode_model();
  base_.encode_observation(obs_);
}

DesEncoding DesSatSolver::encode_request(const PropertySet& request, std::vector<Lit>& activations) const {
  DesEncoding enc = base_;
  activations.clear();
  for (std::size_t i = 0; i < request.size(); ++i) {
    const Lit a = enc.formula().new_var("act" + std::to_string(i));
    activations.push_back(a);
    enc.encode_property(request[i], a);
  }
  return enc;
}

TestOutcome DesSatSolver::solve(const PropertySet& request) {
  ++counters_.tests;
  std::vector<Lit> activations;
  const DesEncoding enc = encode_request(request, activations);
  SatSolver sat;
  sat.add_formula(enc.formula());
  const auto result = sat.solve(activations);
  counters_.work += sat.conflicts();

  if (result == SatSolver::Result::Unsat) {
    ++counters_.failures;
    const auto& failed = sat.failed_assumptions();
    Conflict conflict;
    for (std::size_t i = 0; i < request.size(); ++i) {
      if (std::find(failed.begin(), failed.end(), activations[i]) != failed.end()) conflict.props.add(request[i]);
    }
    return TestFailed{std::move(conflict)};
  }

  const Trace trace = enc.decode([&](Lit v) { return sat.model_value(v); });
  Hypothesis h = trace_hypothesis(trace, model_, space_.tag());
  if (!trace_in_model(trace, model_) || !trace_matches_observation(trace, model_, obs_) || !member(h, request)) {
    throw Error(ErrorCode::InternalConsistency,
                "sat model decodes to " + render_trace(trace, model_) + ", which fails re-validation");
  }
  ++counters_.candidates;
  return CandidateFound{std::move(h), trace_names(trace, model_)};
}

std::string DesSatSolver::export_dimacs(const PropertySet& request) const {
  std::vector<Lit> activations;
  const DesEncoding enc = encode_request(request, activations);
  std::vector<std::string> comments{
      "diagfp des test",
      "space " + std::string(space_tag_name(space_.tag())),
      "horizon " + std::to_string(enc.horizon()) + " steps_per_obs " + std::to_string(options_.params.steps_per_obs),
  };
  for (std::size_t i = 0; i < request.size(); ++i) {
    comments.push_back("assumption " + std::to_string(activations[i]) + " " + render(request[i], space_));
  }
  return enc.formula().to_dimacs(comments, activations);
}

}  // namespace diagfp
