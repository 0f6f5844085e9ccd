#include "diagfp/des_model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "diagfp/error.hpp"
#include "json.hpp"

namespace diagfp {

bool Component::participates(EventId e) const {
  return std::binary_search(alphabet.begin(), alphabet.end(), e);
}

DesModel::DesModel(std::vector<Component> components, std::vector<std::string> events,
                   std::vector<EventId> observable, std::vector<EventId> faults)
    : components_(std::move(components)),
      events_(std::move(events)),
      observable_(std::move(observable)),
      faults_(std::move(faults)) {
  const auto ne = static_cast<EventId>(events_.size());
  for (EventId e = 0; e < ne; ++e) {
    if (!event_index_.emplace(events_[e], e).second) usage_error("duplicate event '" + events_[e] + "'");
  }
  observable_flag_.assign(ne, false);
  fault_index_.assign(ne, -1);
  for (EventId e : observable_) {
    if (e >= ne) usage_error("observable event out of range");
    if (observable_flag_[e]) usage_error("event '" + events_[e] + "' declared observable twice");
    observable_flag_[e] = true;
  }
  for (std::size_t i = 0; i < faults_.size(); ++i) {
    EventId e = faults_[i];
    if (e >= ne) usage_error("fault event out of range");
    if (fault_index_[e] >= 0) usage_error("event '" + events_[e] + "' declared as fault twice");
    if (observable_flag_[e]) usage_error("fault event '" + events_[e] + "' must not be observable");
    fault_index_[e] = static_cast<int>(i);
  }

  participants_.assign(ne, {});
  std::set<std::string> names;
  for (std::uint32_t c = 0; c < components_.size(); ++c) {
    auto& comp = components_[c];
    if (!names.insert(comp.name).second) usage_error("duplicate component '" + comp.name + "'");
    if (comp.states.empty()) usage_error("component '" + comp.name + "' has no states");
    if (comp.initial.empty()) usage_error("component '" + comp.name + "' has no initial state");
    const auto ns = static_cast<StateId>(comp.states.size());
    for (StateId s : comp.initial)
      if (s >= ns) usage_error("component '" + comp.name + "': initial state out of range");
    std::set<EventId> alphabet(comp.declared.begin(), comp.declared.end());
    for (const auto& t : comp.transitions) {
      if (t.from >= ns || t.to >= ns || t.event >= ne) usage_error("component '" + comp.name + "': bad transition");
      alphabet.insert(t.event);
    }
    comp.alphabet.assign(alphabet.begin(), alphabet.end());
    for (EventId e : comp.alphabet) participants_[e].push_back(c);

    std::vector<std::vector<StateId>> table(static_cast<std::size_t>(ns) * ne);
    for (const auto& t : comp.transitions) table[t.from * ne + t.event].push_back(t.to);
    for (auto& v : table) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    succ_.push_back(std::move(table));
  }
  for (EventId e = 0; e < ne; ++e) {
    if (participants_[e].empty()) usage_error("event '" + events_[e] + "' belongs to no component");
  }
}

std::optional<EventId> DesModel::find_event(std::string_view name) const {
  auto it = event_index_.find(std::string(name));
  if (it == event_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<FaultId> DesModel::fault_id(EventId e) const {
  int i = fault_index_.at(e);
  if (i < 0) return std::nullopt;
  return FaultId{static_cast<std::uint32_t>(i)};
}

Space DesModel::space(SpaceTag tag) const {
  std::vector<std::string> names;
  for (EventId e : faults_) names.push_back(events_[e]);
  return Space(tag, std::move(names));
}

const std::vector<StateId>& DesModel::successors(std::uint32_t c, StateId s, EventId e) const {
  return succ_.at(c).at(static_cast<std::size_t>(s) * events_.size() + e);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    ++number;
    if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
    std::istringstream in{std::string(raw)};
    Line line{number, {}};
    for (std::string tok; in >> tok;) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

struct ComponentDraft {
  Component comp;
  std::size_t line = 0;
  std::unordered_map<std::string, StateId> state_index;
};

}  // namespace

DesModel parse_model(std::string_view text) {
  std::vector<std::string> events;
  std::unordered_map<std::string, EventId> event_index;
  auto intern = [&](const std::string& name) {
    auto [it, inserted] = event_index.emplace(name, static_cast<EventId>(events.size()));
    if (inserted) events.push_back(name);
    return it->second;
  };

  std::vector<Component> components;
  std::set<std::string> component_names;
  std::optional<ComponentDraft> current;
  std::vector<std::pair<std::string, std::size_t>> observable_names, fault_names;

  auto state_of = [&](ComponentDraft& d, const std::string& name, std::size_t line) {
    auto it = d.state_index.find(name);
    if (it == d.state_index.end()) {
      throw ParseError(line, "state '" + name + "' is not declared in component '" + d.comp.name + "'");
    }
    return it->second;
  };

  for (const auto& line : tokenize(text)) {
    const auto& kw = line.tokens[0];
    const std::size_t argc = line.tokens.size() - 1;
    if (!current) {
      if (kw == "component") {
        if (argc != 1) throw ParseError(line.number, "expected 'component <name>'");
        if (!component_names.insert(line.tokens[1]).second) {
          throw ParseError(line.number, "duplicate component '" + line.tokens[1] + "'");
        }
        current.emplace();
        current->comp.name = line.tokens[1];
        current->line = line.number;
      } else if (kw == "observable" || kw == "faults") {
        auto& target = kw == "observable" ? observable_names : fault_names;
        for (std::size_t i = 1; i < line.tokens.size(); ++i) target.emplace_back(line.tokens[i], line.number);
      } else {
        throw ParseError(line.number, "unexpected '" + kw + "' outside a component block");
      }
      continue;
    }
    auto& d = *current;
    if (kw == "states") {
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        const auto& s = line.tokens[i];
        auto id = static_cast<StateId>(d.comp.states.size());
        if (!d.state_index.emplace(s, id).second) throw ParseError(line.number, "duplicate state '" + s + "'");
        d.comp.states.push_back(s);
      }
    } else if (kw == "init") {
      if (argc == 0) throw ParseError(line.number, "expected 'init <state> ...'");
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        StateId s = state_of(d, line.tokens[i], line.number);
        if (std::find(d.comp.initial.begin(), d.comp.initial.end(), s) == d.comp.initial.end()) {
          d.comp.initial.push_back(s);
        }
      }
    } else if (kw == "trans") {
      if (argc != 3) throw ParseError(line.number, "expected 'trans <from> <event> <to>'");
      Transition t{state_of(d, line.tokens[1], line.number), intern(line.tokens[2]),
                   state_of(d, line.tokens[3], line.number)};
      if (std::find(d.comp.transitions.begin(), d.comp.transitions.end(), t) == d.comp.transitions.end()) {
        d.comp.transitions.push_back(t);
      }
    } else if (kw == "events") {
      for (std::size_t i = 1; i < line.tokens.size(); ++i) {
        EventId e = intern(line.tokens[i]);
        if (std::find(d.comp.declared.begin(), d.comp.declared.end(), e) == d.comp.declared.end()) {
          d.comp.declared.push_back(e);
        }
      }
    } else if (kw == "end") {
      if (argc != 0) throw ParseError(line.number, "unexpected tokens after 'end'");
      if (d.comp.states.empty()) throw ParseError(line.number, "component '" + d.comp.name + "' declares no states");
      if (d.comp.initial.empty()) {
        throw ParseError(line.number, "component '" + d.comp.name + "' declares no initial state");
      }
      components.push_back(std::move(d.comp));
      current.reset();
    } else {
      throw ParseError(line.number, "unknown keyword '" + kw + "' in component '" + d.comp.name + "'");
    }
  }
  if (current) throw ParseError(current->line, "component '" + current->comp.name + "' is missing 'end'");

  auto resolve = [&](const std::vector<std::pair<std::string, std::size_t>>& names, const char* what) {
    std::vector<EventId> ids;
    for (const auto& [name, line] : names) {
      auto it = event_index.find(name);
      if (it == event_index.end()) {
        throw ParseError(line, std::string(what) + " event '" + name + "' does not appear in any component");
      }
      if (std::find(ids.begin(), ids.end(), it->second) != ids.end()) {
        throw ParseError(line, std::string(what) + " event '" + name + "' listed twice");
      }
      ids.push_back(it->second);
    }
    return ids;
  };
  auto observable = resolve(observable_names, "observable");
  auto faults = resolve(fault_names, "fault");
  for (const auto& [name, line] : fault_names) {
    if (std::find(observable.begin(), observable.end(), event_index.at(name)) != observable.end()) {
      throw ParseError(line, "fault event '" + name + "' must not be observable");
    }
  }
  return DesModel(std::move(components), std::move(events), std::move(observable), std::move(faults));
}

Observation parse_observation(std::string_view text, const DesModel& model) {
  Observation o;
  for (const auto& line : tokenize(text)) {
    if (line.tokens.size() != 1) throw ParseError(line.number, "expected one event per line");
    auto e = model.find_event(line.tokens[0]);
    if (!e) throw ParseError(line.number, "unknown event '" + line.tokens[0] + "'");
    if (!model.is_observable(*e)) throw ParseError(line.number, "event '" + line.tokens[0] + "' is not observable");
    o.events.push_back(*e);
  }
  return o;
}

Trace parse_trace(std::string_view text, const DesModel& model) {
  std::string cleaned(text);
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  Trace t;
  for (std::string tok; in >> tok;) {
    auto e = model.find_event(tok);
    if (!e) usage_error("unknown event '" + tok + "' in trace");
    t.push_back(*e);
  }
  return t;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_model(const DesModel& model) {
  std::ostringstream out;
  for (const auto& c : model.components()) {
    out << "component " << c.name << "\n  states";
    for (const auto& s : c.states) out << ' ' << s;
    out << "\n  init";
    for (StateId s : c.initial) out << ' ' << c.states[s];
    out << '\n';
    if (!c.declared.empty()) {
      out << "  events";
      for (EventId e : c.declared) out << ' ' << model.event_name(e);
      out << '\n';
    }
    for (const auto& t : c.transitions) {
      out << "  trans " << c.states[t.from] << ' ' << model.event_name(t.event) << ' ' << c.states[t.to] << '\n';
    }
    out << "end\n";
  }
  out << "observable";
  for (EventId e : model.observable()) out << ' ' << model.event_name(e);
  out << "\nfaults";
  for (EventId e : model.faults()) out << ' ' << model.event_name(e);
  out << '\n';
  return out.str();
}

std::string render_observation(const Observation& o, const DesModel& model) {
  std::string out;
  for (EventId e : o.events) out += model.event_name(e) + "\n";
  return out;
}

std::vector<std::string> trace_names(const Trace& t, const DesModel& model) {
  std::vector<std::string> names;
  for (EventId e : t) names.push_back(model.event_name(e));
  return names;
}

std::string render_trace(const Trace& t, const DesModel& model) {
  std::string out = "[";
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (i) out += ',';
    out += model.event_name(t[i]);
  }
  return out + "]";
}

std::string model_to_json(const DesModel& model) {
  nlohmann::ordered_json j;
  j["components"] = nlohmann::ordered_json::array();
  for (const auto& c : model.components()) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["states"] = c.states;
    std::vector<std::string> init, declared;
    for (StateId s : c.initial) init.push_back(c.states[s]);
    for (EventId e : c.declared) declared.push_back(model.event_name(e));
    jc["init"] = init;
    jc["events"] = declared;
    jc["transitions"] = nlohmann::ordered_json::array();
    for (const auto& t : c.transitions) {
      jc["transitions"].push_back({c.states[t.from], model.event_name(t.event), c.states[t.to]});
    }
    j["components"].push_back(std::move(jc));
  }
  std::vector<std::string> obs, faults;
  for (EventId e : model.observable()) obs.push_back(model.event_name(e));
  for (EventId e : model.faults()) faults.push_back(model.event_name(e));
  j["observable"] = obs;
  j["faults"] = faults;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Trace semantics

bool trace_in_model(const Trace& t, const DesModel& m) {
  const auto& comps = m.components();
  for (EventId e : t) {
    if (e >= m.events().size()) usage_error("trace contains an unknown event");
  }
  std::set<std::vector<StateId>> current{{}};
  for (const auto& c : comps) {
    std::set<std::vector<StateId>> next;
    for (const auto& tuple : current) {
      for (StateId s : c.initial) {
        auto ext = tuple;
        ext.push_back(s);
        next.insert(std::move(ext));
      }
    }
    current = std::move(next);
  }
  for (EventId e : t) {
    std::set<std::vector<StateId>> next;
    for (const auto& tuple : current) {
      std::vector<std::vector<StateId>> partial{tuple};
      for (std::uint32_t c : m.participants(e)) {
        std::vector<std::vector<StateId>> grown;
        for (const auto& p : partial) {
          for (StateId s2 : m.successors(c, p[c], e)) {
            auto q = p;
            q[c] = s2;
            grown.push_back(std::move(q));
          }
        }
        partial = std::move(grown);
      }
      next.insert(partial.begin(), partial.end());
    }
    current = std::move(next);
    if (current.empty()) return false;
  }
  return true;
}

Hypothesis trace_hypothesis(const Trace& t, const DesModel& m, SpaceTag space) {
  std::vector<FaultId> seq;
  for (EventId e : t) {
    if (auto f = m.fault_id(e)) seq.push_back(*f);
  }
  switch (space) {
    case SpaceTag::SqHS: return Hypothesis::sequence(std::move(seq));
    case SpaceTag::SHS: return Hypothesis::set(std::move(seq));
    case SpaceTag::MHS: {
      std::vector<FaultCount> cs;
      for (FaultId f : seq) cs.push_back({f, 1});
      return Hypothesis::multiset(std::move(cs));
    }
    case SpaceTag::BHS: return Hypothesis::binary(!seq.empty());
  }
  return Hypothesis::nominal(space);
}

bool trace_matches_observation(const Trace& t, const DesModel& m, const Observation& o) {
  std::size_t i = 0;
  for (EventId e : t) {
    if (!m.is_observable(e)) continue;
    if (i >= o.events.size() || o.events[i] != e) return false;
    ++i;
  }
  return i == o.events.size();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace diagfp
