#include "diagfp/generator.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "diagfp/error.hpp"
#include "diagfp/explicit_solver.hpp"
#include "json.hpp"

namespace diagfp {

void GeneratorParams::validate() const {
  auto check = [](std::size_t v, std::size_t lo, std::size_t hi, const char* what) {
    if (v < lo || v > hi) {
      usage_error(std::string(what) + " must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  };
  check(components, 1, 4, "components");
  check(states, 2, 5, "states");
  check(faults, 0, 3, "faults");
  check(obs_len, 0, 5, "observation length");
}

namespace {

// Unbiased draw in [0, n) that does not depend on the standard library's
// distribution implementations, so instances are identical everywhere.
class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}

  std::size_t below(std::size_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = rng_();
    } while (x >= limit);
    return static_cast<std::size_t>(x % n);
  }
  bool chance(std::size_t num, std::size_t den) { return below(den) < num; }

 private:
  std::mt19937_64 rng_;
};

struct Draft {
  std::string name;
  std::size_t states;
  std::vector<std::size_t> init;
  std::vector<std::tuple<std::size_t, std::string, std::size_t>> trans;
};

}  // namespace

GeneratedInstance generate_instance(const GeneratorParams& params) {
  params.validate();
  Draw draw(params.seed);
  const std::size_t nc = params.components;
  const std::size_t ns = params.states;

  std::vector<Draft> comps(nc);
  for (std::size_t c = 0; c < nc; ++c) {
    comps[c].name = "c" + std::to_string(c + 1);
    comps[c].states = ns;
    comps[c].init.push_back(0);
    if (draw.chance(1, 5)) comps[c].init.push_back(1 + draw.below(ns - 1));
  }

  // Event owners: observable and silent events may be shared by two components.
  struct EventPlan {
    std::string name;
    bool observable;
    bool fault;
    std::vector<std::size_t> owners;
  };
  std::vector<EventPlan> events;
  const std::size_t n_obs = 2 + draw.below(2);
  const std::size_t n_silent = 1 + draw.below(2);
  auto owners = [&](bool may_share) {
    std::vector<std::size_t> o{draw.below(nc)};
    if (may_share && nc > 1 && draw.chance(1, 3)) {
      std::size_t other = draw.below(nc - 1);
      if (other >= o[0]) ++other;
      o.push_back(other);
    }
    std::sort(o.begin(), o.end());
    return o;
  };
  for (std::size_t i = 0; i < n_obs; ++i) events.push_back({"o" + std::to_string(i + 1), true, false, owners(true)});
  for (std::size_t i = 0; i < n_silent; ++i) events.push_back({"u" + std::to_string(i + 1), false, false, owners(true)});
  for (std::size_t i = 0; i < params.faults; ++i) events.push_back({"f" + std::to_string(i + 1), false, true, owners(false)});

  // Observable transitions go anywhere; unobservable ones strictly upward.
  for (const auto& ev : events) {
    for (std::size_t c : ev.owners) {
      const std::size_t count = 1 + draw.below(ev.observable ? 3 : 2);
      for (std::size_t k = 0; k < count; ++k) {
        std::size_t from, to;
        if (ev.observable) {
          from = draw.below(ns);
          to = draw.below(ns);
        } else {
          from = draw.below(ns - 1);
          to = from + 1 + draw.below(ns - 1 - from);
        }
        auto t = std::make_tuple(from, ev.name, to);
        auto& list = comps[c].trans;
        if (std::find(list.begin(), list.end(), t) == list.end()) list.push_back(t);
      }
    }
  }

  std::string text;
  for (const auto& c : comps) {
    text += "component " + c.name + "\n  states";
    for (std::size_t s = 0; s < c.states; ++s) text += " s" + std::to_string(s);
    text += "\n  init";
    for (std::size_t s : c.init) text += " s" + std::to_string(s);
    text += "\n";
    for (const auto& [from, e, to] : c.trans) {
      text += "  trans s" + std::to_string(from) + " " + e + " s" + std::to_string(to) + "\n";
    }
    text += "end\n";
  }
  text += "observable";
  for (const auto& ev : events)
    if (ev.observable) text += " " + ev.name;
  text += "\nfaults";
  for (const auto& ev : events)
    if (ev.fault) text += " " + ev.name;
  text += "\n";

  const DesModel model = parse_model(text);

  // Observation: the longest of a few random walks, stopping at obs_len observables.
  Observation best;
  for (int attempt = 0; attempt < 16 && best.events.size() < params.obs_len; ++attempt) {
    std::vector<StateId> cur;
    for (const auto& c : model.components()) cur.push_back(c.initial[draw.below(c.initial.size())]);
    Observation walk;
    for (std::size_t step = 0; step < 64 && walk.events.size() < params.obs_len; ++step) {
      std::vector<std::vector<StateId>> options;
      for (EventId e = 0; e < model.events().size(); ++e) {
        std::vector<std::vector<StateId>> partial{cur};
        for (std::uint32_t c : model.participants(e)) {
          std::vector<std::vector<StateId>> grown;
          for (const auto& p : partial)
            for (StateId s2 : model.successors(c, p[c], e)) {
              auto q = p;
              q[c] = s2;
              grown.push_back(std::move(q));
            }
          partial = std::move(grown);
        }
        for (auto& p : partial) {
          p.push_back(e);
          options.push_back(std::move(p));
        }
      }
      if (options.empty()) break;
      auto pick = options[draw.below(options.size())];
      const EventId e = pick.back();
      pick.pop_back();
      cur = std::move(pick);
      if (model.is_observable(e)) walk.events.push_back(e);
    }
    if (walk.events.size() > best.events.size() || attempt == 0) best = std::move(walk);
  }

  GeneratedInstance out;
  out.model_text = render_model(model);
  out.observation_text = render_observation(best, model);
  out.reachable_states = reachable_global_states(model);
  out.oracle_bound = certified_bound(model, best);
  const auto depth = silent_depth(model);
  if (!depth) throw Error(ErrorCode::InternalConsistency, "generated model has cyclic silent behaviour");
  out.silent_depth = *depth;

  nlohmann::ordered_json side;
  side["schema"] = "diagfp-instance/1";
  side["seed"] = params.seed;
  side["params"] = {{"components", params.components},
                    {"states", params.states},
                    {"faults", params.faults},
                    {"obs_len", params.obs_len}};
  side["observation_length"] = best.events.size();
  side["reachable_states"] = out.reachable_states;
  side["oracle_bound"] = out.oracle_bound;
  side["silent_depth"] = out.silent_depth;
  out.sidecar_json = side.dump(2) + "\n";
  return out;
}

}  // namespace diagfp
