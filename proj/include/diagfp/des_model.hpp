#pragma once

// Discrete event systems as networks of partially synchronised automata,
// their text format, and trace semantics.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "diagfp/hypothesis.hpp"

namespace diagfp {

using EventId = std::uint32_t;
using StateId = std::uint32_t;

struct Transition {
  StateId from;
  EventId event;
  StateId to;
  auto operator<=>(const Transition&) const = default;
};

struct Component {
  std::string name;
  std::vector<std::string> states;
  std::vector<StateId> initial;
  std::vector<Transition> transitions;  // duplicate-free, declaration order
  std::vector<EventId> alphabet;        // sorted: events in transitions plus declared ones
  std::vector<EventId> declared;        // extra alphabet entries from `events` lines

  bool participates(EventId e) const;
};

using Trace = std::vector<EventId>;

struct Observation {
  std::vector<EventId> events;
};

class DesModel {
 public:
  /// Validates and indexes. Throws on any invariant violation.
  DesModel(std::vector<Component> components, std::vector<std::string> events, std::vector<EventId> observable,
           std::vector<EventId> faults);

  const std::vector<Component>& components() const { return components_; }
  const std::vector<std::string>& events() const { return events_; }
  const std::vector<EventId>& observable() const { return observable_; }
  const std::vector<EventId>& faults() const { return faults_; }

  std::optional<EventId> find_event(std::string_view name) const;
  const std::string& event_name(EventId e) const { return events_.at(e); }
  bool is_observable(EventId e) const { return observable_flag_.at(e); }
  bool is_fault(EventId e) const { return fault_index_.at(e) >= 0; }
  /// Position of e in the fault alphabet (FaultId), if e is a fault.
  std::optional<FaultId> fault_id(EventId e) const;
  EventId fault_event(FaultId f) const { return faults_.at(f.index); }

  /// Hypothesis space over this model's fault alphabet (declaration order).
  Space space(SpaceTag tag) const;

  /// Components that take part in e.
  const std::vector<std::uint32_t>& participants(EventId e) const { return participants_.at(e); }
  /// Local successors of state s of component c on event e.
  const std::vector<StateId>& successors(std::uint32_t c, StateId s, EventId e) const;

 private:
  std::vector<Component> components_;
  std::vector<std::string> events_;
  std::vector<EventId> observable_;
  std::vector<EventId> faults_;
  std::unordered_map<std::string, EventId> event_index_;
  std::vector<bool> observable_flag_;
  std::vector<int> fault_index_;
  std::vector<std::vector<std::uint32_t>> participants_;
  // succ_[c][s * |E| + e]
  std::vector<std::vector<std::vector<StateId>>> succ_;
};

DesModel parse_model(std::string_view text);
Observation parse_observation(std::string_view text, const DesModel& model);
Trace parse_trace(std::string_view text, const DesModel& model);  // whitespace/comma separated names

std::string render_model(const DesModel& model);
std::string render_observation(const Observation& o, const DesModel& model);
std::string render_trace(const Trace& t, const DesModel& model);
std::vector<std::string> trace_names(const Trace& t, const DesModel& model);
/// Canonical JSON export (same structure as the text format).
std::string model_to_json(const DesModel& model);

/// Interleaving semantics from some tuple of initial states.
bool trace_in_model(const Trace& t, const DesModel& m);
Hypothesis trace_hypothesis(const Trace& t, const DesModel& m, SpaceTag space);
bool trace_matches_observation(const Trace& t, const DesModel& m, const Observation& o);

std::string read_file(const std::string& path);

}  // namespace diagfp
