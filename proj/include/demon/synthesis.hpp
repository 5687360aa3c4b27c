#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "demon/ltl.hpp"
#include "demon/spec.hpp"

namespace demon {

constexpr std::size_t kDefaultStateCap = 512;
/// Propositions per automaton state above which synthesis refuses to
/// enumerate assignments.
constexpr std::size_t kSynthesisVarLimit = 16;

/// Moore automaton whose states are the canonical progressions of phi.
/// Throws StateCapExceeded past `state_cap` states and ThresholdExceeded
/// when a state mentions more than kSynthesisVarLimit propositions.
Specification synthesize(const Ltl& phi, std::size_t state_cap = kDefaultStateCap);

/// Proposition leaves of phi owned by c, counted per occurrence.
std::size_t score(const Ltl& phi, const std::string& c, const ApOwner& owner);
/// Highest-scoring component, ties to the smallest name. Throws
/// NoAtomicPropositions when phi has no proposition leaves.
std::string choose(const Ltl& phi, const ApOwner& owner);
/// Hosts for the two operands of a binary node hosted on cb.
std::pair<std::string, std::string> split(const Ltl& phi, const Ltl& phi2, const std::string& cb,
                                          const ApOwner& owner);

struct MonitorData {
  std::string id;
  Ltl formula;
  std::string component;
};

struct MonitorTree {
  MonitorData root;
  std::vector<MonitorData> extra;
  /// (child, parent)
  std::set<std::pair<std::string, std::string>> edges;

  std::vector<MonitorData> all() const;
};

/// Splits phi into a tree of monitors. Ids are m0, m1, ... zero-padded to a
/// common width; placeholders are reference propositions named by id.
MonitorTree net_chor(const Ltl& phi, const ApOwner& owner);

struct ChorNetwork {
  DecentralizedSpec spec;
  /// Monitors notified of each monitor's verdict (its parent).
  std::map<std::string, std::set<std::string>> refs;
  /// Monitors whose verdicts each monitor receives (its children).
  std::map<std::string, std::set<std::string>> corefs;
};

/// Synthesizes one automaton per monitor of the tree.
ChorNetwork chor_network(const MonitorTree& tree, const ApOwner& owner, std::size_t state_cap = kDefaultStateCap);

}  // namespace demon
