#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "demon/atom.hpp"
#include "demon/memory.hpp"

namespace demon {

/// Immutable Boolean expression over atoms. Nodes are shared, so an
/// expression is a DAG; copying an Expr is cheap.
class Expr {
 public:
  enum class Op : std::uint8_t { Const, Atom, Not, And, Or };

  Expr();  // false

  static Expr constant(bool v);
  static Expr top() { return constant(true); }
  static Expr bottom() { return constant(false); }
  static Expr atom(demon::Atom a);

  // Raw constructors: no folding, structure is kept as given.
  static Expr make_not(Expr a);
  static Expr make_and(Expr a, Expr b);
  static Expr make_or(Expr a, Expr b);

  Op op() const;
  bool value() const;
  const demon::Atom& atom() const;
  const Expr& lhs() const;
  const Expr& rhs() const;

  bool is_const() const { return op() == Op::Const; }
  bool is_top() const { return is_const() && value(); }
  bool is_bottom() const { return is_const() && !value(); }

  /// Node identity (shared subexpressions compare equal).
  const void* id() const { return node_.get(); }
  bool same(const Expr& o) const { return node_ == o.node_; }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// Folding constructors: constants, double negation, x op x and x op !x.
Expr neg(const Expr& a);
Expr conj(const Expr& a, const Expr& b);
Expr disj(const Expr& a, const Expr& b);
Expr conj_all(const std::vector<Expr>& xs);
Expr disj_all(const std::vector<Expr>& xs);

struct EvalStats {
  std::uint64_t evaluations = 0;
  /// Calls that reached the exact decision stage.
  std::uint64_t simplifications = 0;

  EvalStats& operator+=(const EvalStats& o) {
    evaluations += o.evaluations;
    simplifications += o.simplifications;
    return *this;
  }
};

/// Atom count up to which exact decisions use a truth table (default 16).
std::size_t exact_atom_threshold();
void set_exact_atom_threshold(std::size_t n);
/// Reads DEMON_EXACT_ATOMS if set; returns false if the value is malformed.
bool load_exact_atom_threshold_from_env();

Expr encode(const Expr& e, const Encoder& enc);
/// Replaces atoms with a final verdict in `m` by constants; structure is kept.
Expr rewrite(const Expr& e, const Memory& m);
/// Local constant folding over the whole DAG.
Expr fold(const Expr& e);
/// Fold, then decide constancy exactly and reduce small expressions to a
/// two-level form when that is smaller.
Expr simplify(const Expr& e, EvalStats* stats = nullptr);
Verdict eval(const Expr& e, const Memory& m, EvalStats* stats = nullptr);

std::set<Atom> atoms_of(const Expr& e);
/// Names of referenced monitors.
std::set<std::string> dep(const Expr& e);

/// true/false when `e` is a tautology/contradiction, nullopt otherwise.
std::optional<bool> constant_value(const Expr& e);
bool satisfiable(const Expr& e);
/// Exact equivalence; throws ThresholdExceeded above the exact threshold.
bool equivalent(const Expr& a, const Expr& b);
/// Value under a total assignment (missing atoms read as false).
bool eval_total(const Expr& e, const std::map<Atom, bool>& values);

/// Size as a tree: leaves plus operator nodes (shared nodes counted per use,
/// saturating).
std::uint64_t tree_size(const Expr& e);
/// Distinct nodes reachable from `e`.
std::uint64_t dag_size(const Expr& e);

std::string to_string(const Expr& e);

/// Grammar: `true false ! && || ( )`, identifiers, `<t,a>` for stamped
/// atoms and `@m`/`<t,@m>` for monitor references. Identifiers listed in
/// `monitors` become monitor references.
Expr parse_expr(std::string_view text, const std::set<std::string>& monitors = {});

/// Evaluates many expressions under one memory, sharing work between them.
class Evaluator {
 public:
  explicit Evaluator(const Memory& m, EvalStats* stats = nullptr) : m_(m), stats_(stats) {}

  /// rewrite followed by fold.
  Expr reduce(const Expr& e);
  Verdict eval(const Expr& e);
  Expr simplify(const Expr& e);

 private:
  const Memory& m_;
  EvalStats* stats_;
  std::unordered_map<const void*, Expr> memo_;
};

}  // namespace demon
