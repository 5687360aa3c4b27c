#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "demon/memory.hpp"

namespace demon {

/// Immutable LTL formula. Proposition nodes flagged as references stand for
/// the verdict of another monitor.
class Ltl {
 public:
  enum class Kind : std::uint8_t { True, False, Ap, Not, And, Or, Next, Finally, Globally, Until };

  Ltl();  // false

  static Ltl top();
  static Ltl bottom();
  static Ltl constant(bool v) { return v ? top() : bottom(); }
  static Ltl ap(std::string name, bool ref = false);
  static Ltl unary(Kind k, Ltl a);
  static Ltl binary(Kind k, Ltl a, Ltl b);

  Kind kind() const;
  const std::string& name() const;
  bool is_ref() const;
  const Ltl& lhs() const;
  const Ltl& rhs() const;

  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  bool is_const() const { return is_true() || is_false(); }
  bool is_unary() const;
  bool is_binary() const;
  bool is_temporal() const;

 private:
  struct Node;
  explicit Ltl(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

Ltl lnot(Ltl a);
Ltl land(Ltl a, Ltl b);
Ltl lor(Ltl a, Ltl b);
Ltl next(Ltl a);
Ltl finally(Ltl a);
Ltl globally(Ltl a);
Ltl until(Ltl a, Ltl b);

/// Grammar: `true false ! && || X F G U ( )`, identifiers, `@name` for
/// references. Precedence from tightest: unary, &&, U (right associative), ||.
Ltl parse_ltl(std::string_view text);
std::string to_string(const Ltl& f);
bool operator==(const Ltl& a, const Ltl& b);

/// The atoms of f: plain for propositions, round-0 monitor references for refs.
std::set<Atom> ltl_atoms(const Ltl& f);
/// Plain proposition names (references excluded).
std::set<std::string> ltl_aps(const Ltl& f);
std::size_t ltl_size(const Ltl& f);

/// Constant and temporal folding, then a two-level form over the maximal
/// temporal subformulas and propositions. Equivalent Boolean combinations
/// of the same subformulas get the same form.
Ltl canonicalize(const Ltl& f);

/// One-step progression through an event, then canonicalize. Throws
/// IncompleteEvent when a proposition of f has no final verdict in m.
Ltl progress(const Ltl& f, const Memory& m);
Ltl progress(const Ltl& f, const std::function<bool(const Atom&)>& value);

/// Replaces reference names through `rename`.
Ltl rename_refs(const Ltl& f, const std::function<std::string(const std::string&)>& rename);

}  // namespace demon
