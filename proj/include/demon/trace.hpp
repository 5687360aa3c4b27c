#pragma once

#include <map>
#include <string>
#include <vector>

#include "demon/memory.hpp"

namespace demon {

using ApOwner = std::map<std::string, std::string>;

/// Per-round, per-component events. Rounds start at 1.
class DecentralizedTrace {
 public:
  DecentralizedTrace() = default;
  explicit DecentralizedTrace(std::vector<std::string> components, Round length = 0);

  Round length() const { return static_cast<Round>(rounds_.size()); }
  /// Sorted component names.
  const std::vector<std::string>& components() const { return components_; }

  /// Empty event for rounds outside 1..length or unknown components.
  const Event& event(Round t, const std::string& component) const;
  void set_event(Round t, const std::string& component, Event e);
  void observe(Round t, const std::string& component, const std::string& ap, bool value);
  void add_component(const std::string& component);
  void resize(Round length);

  DecentralizedTrace prefix(Round k) const;

  bool operator==(const DecentralizedTrace&) const = default;

 private:
  std::vector<std::string> components_;
  std::vector<std::map<std::string, Event>> rounds_;
};

/// Per-round union of the component events.
std::vector<Event> reconstruct_global(const DecentralizedTrace& tr);

/// Proposition to observing component; throws ConflictingObservation when
/// two components observe the same proposition.
ApOwner ap_owner(const DecentralizedTrace& tr);

/// Every trace of length 0..max_length where each component observes all of
/// its propositions each round.
std::vector<DecentralizedTrace> enumerate_traces(const std::map<std::string, std::vector<std::string>>& aps_by_component,
                                                 Round max_length);

}  // namespace demon
