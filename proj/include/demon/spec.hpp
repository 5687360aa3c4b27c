#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "demon/expr.hpp"
#include "demon/trace.hpp"

namespace demon {

using StateId = std::size_t;

struct Transition {
  StateId from = 0;
  StateId to = 0;
  Expr label;
};

/// Moore automaton: states carry verdicts, transitions carry Boolean labels.
class Specification {
 public:
  Specification(std::vector<std::string> states, std::vector<Verdict> verdicts, StateId initial,
                std::vector<Transition> transitions);

  std::size_t size() const { return states_.size(); }
  const std::string& name(StateId q) const { return states_.at(q); }
  const std::vector<std::string>& state_names() const { return states_; }
  Verdict verdict(StateId q) const { return verdicts_.at(q); }
  StateId initial() const { return initial_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  /// Indices into transitions() leaving q, in declaration order.
  const std::vector<std::size_t>& outgoing(StateId q) const { return outgoing_.at(q); }
  std::optional<StateId> find(std::string_view name) const;
  std::set<StateId> final_states() const;
  /// Atoms appearing in any label.
  std::set<Atom> label_atoms() const;

 private:
  std::vector<std::string> states_;
  std::vector<Verdict> verdicts_;
  StateId initial_;
  std::vector<Transition> transitions_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

struct ValidationReport {
  /// (state, transition index, transition index) whose labels can hold together.
  std::vector<std::tuple<StateId, std::size_t, std::size_t>> overlapping;
  /// States whose outgoing labels do not cover every assignment.
  std::vector<StateId> incomplete;

  bool ok() const { return overlapping.empty() && incomplete.empty(); }
};

/// Determinism and completeness check; throws ThresholdExceeded when a state's
/// labels mention more atoms than the exact-decision threshold.
ValidationReport validate(const Specification& a);

/// One transition per (source, target) pair, labels or-ed.
Specification normalize(const Specification& a);

/// Transition over an event. An empty event stays; so does an event that
/// satisfies no label, in which case `stuck` is set.
StateId step(const Specification& a, StateId q, const Event& e, bool* stuck = nullptr);
/// Same, with labels evaluated directly against `m`.
StateId step_memory(const Specification& a, StateId q, const Memory& m, bool* stuck = nullptr);
StateId run(const Specification& a, const std::vector<Event>& global);

struct DecentralizedSpec {
  std::map<std::string, Specification> monitors;
  std::map<std::string, std::string> attach;
  std::string root;
  ApOwner ap_owner;

  const Specification& monitor(const std::string& id) const;
  std::set<std::string> components() const;
};

/// Throws InvalidSpecification when labels use foreign propositions, unknown
/// or self references, or names shared by a monitor and a proposition.
void check(const DecentralizedSpec& d);

/// Wraps a centralized specification as a one-monitor decentralized one.
DecentralizedSpec single_monitor(const Specification& a, const std::string& component, const ApOwner& owner,
                                 const std::string& id = "m0");

/// Root verdict under the recursive decentralized semantics. Throws
/// RoundBudgetExceeded when the reference recursion does not terminate.
Verdict decentralized_run(const DecentralizedSpec& d, const DecentralizedTrace& tr);

/// Index of the first trace on which the two specifications disagree.
std::optional<std::size_t> find_disagreement(const DecentralizedSpec& a, const DecentralizedSpec& b,
                                             const std::vector<DecentralizedTrace>& traces);

}  // namespace demon
