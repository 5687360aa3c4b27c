#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>

#include "demon/spec.hpp"

namespace demon {

struct Graph {
  std::set<std::string> nodes;
  std::set<std::pair<std::string, std::string>> edges;

  void add_edge(const std::string& a, const std::string& b);
  std::set<std::string> successors(const std::string& n) const;
};

using ReachMap = std::map<std::string, std::set<std::string>>;
using Assignment = std::map<std::string, std::string>;

struct MonitorabilityResult {
  bool monitorable = false;
  /// States from which a state with a verdict in `finals` is reachable.
  std::set<StateId> marked;
};

/// Backward work-list from the final-verdict states. Transitions whose label
/// is unsatisfiable are ignored.
MonitorabilityResult ca_monitorable(const Specification& a,
                                    const std::set<Verdict>& finals = {Verdict::Top, Verdict::Bottom});

/// Monitors referenced by any label of `a`.
std::set<std::string> mds(const Specification& a);
Graph mdg(const DecentralizedSpec& d);
bool has_cycle(const Graph& g);
bool decentralized_monitorable(const DecentralizedSpec& d);

/// Reflexive-transitive closure.
ReachMap compute_reach(const Graph& g);

/// Every assigned monitor's assigned reachable monitors sit on components
/// reachable from its own component.
bool verify_compatible(const Assignment& s, const ReachMap& rm, const ReachMap& rs);

struct CompatibilityResult {
  bool compatible = false;
  Assignment assignment;
  /// Total compatible assignments extending the constraint; only filled in
  /// count mode.
  std::size_t solutions = 0;
};

/// Backtracking over unassigned monitors and components, both in ascending
/// name order. Returns the first solution, or counts all of them when
/// `count_all` is set (the returned assignment is still the first).
CompatibilityResult compatible(const Graph& net, const Graph& sys, const Assignment& constraint,
                               bool count_all = false);

}  // namespace demon
