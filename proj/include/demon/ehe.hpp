#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "demon/spec.hpp"

namespace demon {

struct EheKey {
  Round t = 0;
  StateId q = 0;
  auto operator<=>(const EheKey&) const = default;
  bool operator==(const EheKey&) const = default;
};

/// Execution history encoding: for each (round, state) the condition under
/// which the automaton is in that state at that round.
class EHE {
 public:
  explicit EHE(std::shared_ptr<const Specification> a);

  /// {(0, q0) -> true}
  static EHE init(std::shared_ptr<const Specification> a);

  const Specification& automaton() const { return *a_; }
  const std::shared_ptr<const Specification>& automaton_ptr() const { return a_; }

  const Expr* find(Round t, StateId q) const;
  void set(Round t, StateId q, Expr e);
  void erase(Round t, StateId q) { m_.erase({t, q}); }

  bool empty() const { return m_.empty(); }
  std::size_t size() const { return m_.size(); }
  std::set<Round> rounds() const;
  /// Requires a non-empty encoding.
  Round min_round() const;
  Round max_round() const;
  const std::map<EheKey, Expr>& entries() const { return m_; }

 private:
  std::shared_ptr<const Specification> a_;
  std::map<EheKey, Expr> m_;
};

/// States with an entry at round t.
std::set<StateId> next(const EHE& p, Round t);

/// Condition for reaching q2 at t+1 from the entries at t, labels encoded with `enc`.
Expr to(const EHE& p, Round t, StateId q2, const Encoder& enc);

/// Extends the encoding from round ts to te. Throws UndefinedRound when ts
/// has no entries.
EHE mov(const EHE& p, Round ts, Round te);

/// The state whose entry at t evaluates to true under m, if any.
std::optional<StateId> sreach(const EHE& p, const Memory& m, Round t, EvalStats* stats = nullptr);
/// Every state whose entry at t evaluates to true (at most one for encodings
/// built from a deterministic automaton).
std::vector<StateId> states_reached(const EHE& p, const Memory& m, Round t, EvalStats* stats = nullptr);
Verdict verdict_at(const EHE& p, const Memory& m, Round t, EvalStats* stats = nullptr);

/// Pointwise disjunction. Throws AutomatonMismatch for different automata.
EHE merge(const EHE& a, const EHE& b);

/// Rewrites every entry with m and simplifies it.
EHE inc(const EHE& p, const Memory& m, EvalStats* stats = nullptr);

struct Resolved {
  Round t;
  StateId q;
};

/// Latest round whose state is determined by m.
std::optional<Resolved> last_resolved(const EHE& p, const Memory& m, EvalStats* stats = nullptr);
/// Removes the history before r.t and keeps only {(r.t, r.q) -> true} at r.t.
EHE drop_resolved_at(const EHE& p, Resolved r);
/// Garbage collection up to the latest resolved round; unchanged if none.
EHE drop_resolved(const EHE& p, const Memory& m, EvalStats* stats = nullptr);

/// Tab-separated rows: round, state, expression.
std::string dump(const EHE& p);

}  // namespace demon
