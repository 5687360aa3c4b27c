#include "demon/expr.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <limits>

#include "demon/error.hpp"
#include "demon/truth_table.hpp"
#include "sat.hpp"

namespace demon {

struct Expr::Node {
  Op op;
  bool value;
  demon::Atom atom;
  Expr a;
  Expr b;

  Node(Op o, bool v) : op(o), value(v), a(nullptr), b(nullptr) {}
  Node(Op o, Expr x, Expr y) : op(o), value(false), a(std::move(x)), b(std::move(y)) {}
  explicit Node(demon::Atom at) : op(Op::Atom), value(false), atom(std::move(at)), a(nullptr), b(nullptr) {}
};

Expr::Expr() : Expr(constant(false)) {}

Expr Expr::constant(bool v) {
  static const Expr t(std::make_shared<const Node>(Op::Const, true));
  static const Expr f(std::make_shared<const Node>(Op::Const, false));
  return v ? t : f;
}

Expr Expr::atom(demon::Atom a) { return Expr(std::make_shared<const Node>(std::move(a))); }

Expr Expr::make_not(Expr a) { return Expr(std::make_shared<const Node>(Op::Not, std::move(a), Expr(nullptr))); }

Expr Expr::make_and(Expr a, Expr b) {
  return Expr(std::make_shared<const Node>(Op::And, std::move(a), std::move(b)));
}

Expr Expr::make_or(Expr a, Expr b) {
  return Expr(std::make_shared<const Node>(Op::Or, std::move(a), std::move(b)));
}

Expr::Op Expr::op() const { return node_->op; }
bool Expr::value() const { return node_->value; }
const demon::Atom& Expr::atom() const { return node_->atom; }
const Expr& Expr::lhs() const { return node_->a; }
const Expr& Expr::rhs() const { return node_->b; }

// ---------------------------------------------------------------------------
// Folding constructors

namespace {

bool complementary(const Expr& a, const Expr& b) {
  return (a.op() == Expr::Op::Not && a.lhs().same(b)) || (b.op() == Expr::Op::Not && b.lhs().same(a));
}

}  // namespace

Expr neg(const Expr& a) {
  if (a.is_const()) return Expr::constant(!a.value());
  if (a.op() == Expr::Op::Not) return a.lhs();
  return Expr::make_not(a);
}

Expr conj(const Expr& a, const Expr& b) {
  if (a.is_bottom() || b.is_bottom()) return Expr::bottom();
  if (a.is_top()) return b;
  if (b.is_top()) return a;
  if (a.same(b)) return a;
  if (complementary(a, b)) return Expr::bottom();
  return Expr::make_and(a, b);
}

Expr disj(const Expr& a, const Expr& b) {
  if (a.is_top() || b.is_top()) return Expr::top();
  if (a.is_bottom()) return b;
  if (b.is_bottom()) return a;
  if (a.same(b)) return a;
  if (complementary(a, b)) return Expr::top();
  return Expr::make_or(a, b);
}

namespace {

// Balanced so that long operand lists do not produce deep chains.
Expr combine(const std::vector<Expr>& xs, std::size_t lo, std::size_t hi, bool is_and) {
  if (hi - lo == 1) return xs[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  Expr l = combine(xs, lo, mid, is_and);
  Expr r = combine(xs, mid, hi, is_and);
  return is_and ? conj(l, r) : disj(l, r);
}

}  // namespace

Expr conj_all(const std::vector<Expr>& xs) { return xs.empty() ? Expr::top() : combine(xs, 0, xs.size(), true); }

Expr disj_all(const std::vector<Expr>& xs) {
  return xs.empty() ? Expr::bottom() : combine(xs, 0, xs.size(), false);
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::atomic<std::size_t> g_threshold{16};

}  // namespace

std::size_t exact_atom_threshold() { return g_threshold.load(); }

void set_exact_atom_threshold(std::size_t n) {
  if (n > TruthTable::kMaxVars) throw InvalidParameters("exact threshold above " + std::to_string(TruthTable::kMaxVars));
  g_threshold.store(n);
}

bool load_exact_atom_threshold_from_env() {
  const char* v = std::getenv("DEMON_EXACT_ATOMS");
  if (!v || !*v) return true;
  char* end = nullptr;
  unsigned long n = std::strtoul(v, &end, 10);
  if (*end != '\0' || n > TruthTable::kMaxVars) return false;
  set_exact_atom_threshold(n);
  return true;
}

// ---------------------------------------------------------------------------
// Structural transforms

namespace {

using Memo = std::unordered_map<const void*, Expr>;

Expr encode_rec(const Expr& e, const Encoder& enc, Memo& memo) {
  auto it = memo.find(e.id());
  if (it != memo.end()) return it->second;
  Expr out;
  switch (e.op()) {
    case Expr::Op::Const:
      out = e;
      break;
    case Expr::Op::Atom:
      out = Expr::atom(enc(e.atom()));
      break;
    case Expr::Op::Not:
      out = Expr::make_not(encode_rec(e.lhs(), enc, memo));
      break;
    case Expr::Op::And:
      out = Expr::make_and(encode_rec(e.lhs(), enc, memo), encode_rec(e.rhs(), enc, memo));
      break;
    case Expr::Op::Or:
      out = Expr::make_or(encode_rec(e.lhs(), enc, memo), encode_rec(e.rhs(), enc, memo));
      break;
  }
  memo.emplace(e.id(), out);
  return out;
}

Expr rewrite_rec(const Expr& e, const Memory& m, Memo& memo) {
  auto it = memo.find(e.id());
  if (it != memo.end()) return it->second;
  Expr out = e;
  switch (e.op()) {
    case Expr::Op::Const:
      break;
    case Expr::Op::Atom: {
      Verdict v = m.query(e.atom());
      if (is_final(v)) out = Expr::constant(v == Verdict::Top);
      break;
    }
    case Expr::Op::Not: {
      Expr a = rewrite_rec(e.lhs(), m, memo);
      if (!a.same(e.lhs())) out = Expr::make_not(a);
      break;
    }
    case Expr::Op::And:
    case Expr::Op::Or: {
      Expr a = rewrite_rec(e.lhs(), m, memo);
      Expr b = rewrite_rec(e.rhs(), m, memo);
      if (!a.same(e.lhs()) || !b.same(e.rhs()))
        out = e.op() == Expr::Op::And ? Expr::make_and(a, b) : Expr::make_or(a, b);
      break;
    }
  }
  memo.emplace(e.id(), out);
  return out;
}

// Rewrite and fold in one pass; a null memory folds only.
Expr reduce_rec(const Expr& e, const Memory* m, Memo& memo) {
  auto it = memo.find(e.id());
  if (it != memo.end()) return it->second;
  Expr out = e;
  switch (e.op()) {
    case Expr::Op::Const:
      break;
    case Expr::Op::Atom:
      if (m) {
        Verdict v = m->query(e.atom());
        if (is_final(v)) out = Expr::constant(v == Verdict::Top);
      }
      break;
    case Expr::Op::Not: {
      Expr a = reduce_rec(e.lhs(), m, memo);
      out = (a.same(e.lhs()) && a.op() != Expr::Op::Not && !a.is_const()) ? e : neg(a);
      break;
    }
    case Expr::Op::And:
    case Expr::Op::Or: {
      Expr a = reduce_rec(e.lhs(), m, memo);
      Expr b = reduce_rec(e.rhs(), m, memo);
      bool is_and = e.op() == Expr::Op::And;
      Expr folded = is_and ? conj(a, b) : disj(a, b);
      // Keep the original node when nothing changed to preserve sharing.
      if (folded.op() == e.op() && folded.lhs().same(e.lhs()) && folded.rhs().same(e.rhs()))
        out = e;
      else
        out = folded;
      break;
    }
  }
  memo.emplace(e.id(), out);
  return out;
}

template <class F>
void visit_dag(const Expr& e, F&& f) {
  std::unordered_map<const void*, bool> seen;
  std::vector<Expr> stack{e};
  while (!stack.empty()) {
    Expr x = stack.back();
    stack.pop_back();
    if (!seen.emplace(x.id(), true).second) continue;
    f(x);
    if (x.op() == Expr::Op::Not) {
      stack.push_back(x.lhs());
    } else if (x.op() == Expr::Op::And || x.op() == Expr::Op::Or) {
      stack.push_back(x.lhs());
      stack.push_back(x.rhs());
    }
  }
}

// True when every atom occurs under one polarity only. Such an expression
// without constants is never constant.
bool is_unate(const Expr& e) {
  std::unordered_map<const void*, std::uint8_t> seen;  // bit 0: positive, bit 1: negative
  std::map<Atom, std::uint8_t> polarity;
  std::vector<std::pair<Expr, bool>> stack{{e, false}};
  while (!stack.empty()) {
    auto [x, negated] = stack.back();
    stack.pop_back();
    std::uint8_t bit = negated ? 2 : 1;
    auto& s = seen[x.id()];
    if (s & bit) continue;
    s |= bit;
    switch (x.op()) {
      case Expr::Op::Const:
        return false;
      case Expr::Op::Atom: {
        auto& p = polarity[x.atom()];
        p |= bit;
        if (p == 3) return false;
        break;
      }
      case Expr::Op::Not:
        stack.push_back({x.lhs(), !negated});
        break;
      default:
        stack.push_back({x.lhs(), negated});
        stack.push_back({x.rhs(), negated});
        break;
    }
  }
  return true;
}

constexpr std::size_t kSopVarLimit = 12;

std::optional<bool> decide(const Expr& f, const std::vector<Atom>& atoms, TruthTable* table) {
  if (atoms.size() <= exact_atom_threshold()) {
    TruthTable t = truth_table(f, atoms);
    if (t.is_zero()) return false;
    if (t.is_ones()) return true;
    if (table) *table = std::move(t);
    return std::nullopt;
  }
  if (!detail::dpll_satisfiable(f, false)) return false;
  if (!detail::dpll_satisfiable(f, true)) return true;
  return std::nullopt;
}

std::vector<Atom> atom_vector(const Expr& e) {
  std::set<Atom> s = atoms_of(e);
  return {s.begin(), s.end()};
}

// Exact stage on a folded, non-constant expression.
Expr exact_reduce(const Expr& f) {
  std::vector<Atom> atoms = atom_vector(f);
  TruthTable t;
  bool have_table = false;
  {
    TruthTable tmp;
    std::optional<bool> c = decide(f, atoms, &tmp);
    if (c) return Expr::constant(*c);
    have_table = tmp.vars() == atoms.size() && atoms.size() <= exact_atom_threshold();
    t = std::move(tmp);
  }
  if (!have_table) return f;

  std::vector<std::size_t> relevant;
  for (std::size_t i = 0; i < atoms.size(); ++i)
    if (t.depends_on(i)) relevant.push_back(i);

  Expr best = f;
  if (relevant.size() < atoms.size()) {
    Memory drop;
    for (std::size_t i = 0; i < atoms.size(); ++i)
      if (!std::binary_search(relevant.begin(), relevant.end(), i)) drop.set(atoms[i], Verdict::Bottom);
    Memo memo;
    best = reduce_rec(f, &drop, memo);
  }
  if (relevant.size() <= kSopVarLimit) {
    TruthTable proj(relevant.size());
    for (std::size_t r = 0; r < proj.rows(); ++r) {
      std::size_t full = 0;
      for (std::size_t j = 0; j < relevant.size(); ++j)
        if ((r >> j) & 1U) full |= std::size_t{1} << relevant[j];
      proj.set(r, t.get(full));
    }
    std::vector<Atom> order;
    for (std::size_t i : relevant) order.push_back(atoms[i]);
    Expr sop = sop_to_expr(isop(proj), order);
    if (tree_size(sop) <= tree_size(best)) best = sop;
  }
  return best;
}

}  // namespace

Expr encode(const Expr& e, const Encoder& enc) {
  Memo memo;
  return encode_rec(e, enc, memo);
}

Expr rewrite(const Expr& e, const Memory& m) {
  Memo memo;
  return rewrite_rec(e, m, memo);
}

Expr fold(const Expr& e) {
  Memo memo;
  return reduce_rec(e, nullptr, memo);
}

Expr Evaluator::reduce(const Expr& e) { return reduce_rec(e, &m_, memo_); }

Verdict Evaluator::eval(const Expr& e) {
  if (stats_) ++stats_->evaluations;
  Expr f = reduce(e);
  if (f.is_const()) return from_bool(f.value());
  if (is_unate(f)) return Verdict::Unknown;
  if (stats_) ++stats_->simplifications;
  std::optional<bool> c = decide(f, atom_vector(f), nullptr);
  return c ? from_bool(*c) : Verdict::Unknown;
}

Expr Evaluator::simplify(const Expr& e) {
  if (stats_) ++stats_->evaluations;
  Expr f = reduce(e);
  if (f.is_const() || is_unate(f)) return f;
  if (stats_) ++stats_->simplifications;
  return exact_reduce(f);
}

Expr simplify(const Expr& e, EvalStats* stats) {
  Memory none;
  Evaluator ev(none, stats);
  return ev.simplify(e);
}

Verdict eval(const Expr& e, const Memory& m, EvalStats* stats) {
  Evaluator ev(m, stats);
  return ev.eval(e);
}

std::set<Atom> atoms_of(const Expr& e) {
  std::set<Atom> out;
  visit_dag(e, [&](const Expr& x) {
    if (x.op() == Expr::Op::Atom) out.insert(x.atom());
  });
  return out;
}

std::set<std::string> dep(const Expr& e) {
  std::set<std::string> out;
  visit_dag(e, [&](const Expr& x) {
    if (x.op() == Expr::Op::Atom && x.atom().kind == AtomKind::MonRef) out.insert(x.atom().name);
  });
  return out;
}

std::optional<bool> constant_value(const Expr& e) {
  Expr f = fold(e);
  if (f.is_const()) return f.value();
  if (is_unate(f)) return std::nullopt;
  return decide(f, atom_vector(f), nullptr);
}

bool satisfiable(const Expr& e) {
  std::optional<bool> c = constant_value(e);
  return !c || *c;
}

bool equivalent(const Expr& a, const Expr& b) {
  std::set<Atom> s = atoms_of(a);
  std::set<Atom> sb = atoms_of(b);
  s.insert(sb.begin(), sb.end());
  if (s.size() > exact_atom_threshold())
    throw ThresholdExceeded("equivalence over " + std::to_string(s.size()) + " atoms");
  std::vector<Atom> order(s.begin(), s.end());
  return truth_table(a, order) == truth_table(b, order);
}

bool eval_total(const Expr& e, const std::map<Atom, bool>& values) {
  switch (e.op()) {
    case Expr::Op::Const:
      return e.value();
    case Expr::Op::Atom: {
      auto it = values.find(e.atom());
      return it != values.end() && it->second;
    }
    case Expr::Op::Not:
      return !eval_total(e.lhs(), values);
    case Expr::Op::And:
      return eval_total(e.lhs(), values) && eval_total(e.rhs(), values);
    case Expr::Op::Or:
      return eval_total(e.lhs(), values) || eval_total(e.rhs(), values);
  }
  return false;
}

namespace {

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = a + b;
  return r < a ? std::numeric_limits<std::uint64_t>::max() : r;
}

std::uint64_t tree_size_rec(const Expr& e, std::unordered_map<const void*, std::uint64_t>& memo) {
  auto it = memo.find(e.id());
  if (it != memo.end()) return it->second;
  std::uint64_t s = 1;
  if (e.op() == Expr::Op::Not) {
    s = sat_add(1, tree_size_rec(e.lhs(), memo));
  } else if (e.op() == Expr::Op::And || e.op() == Expr::Op::Or) {
    s = sat_add(1, sat_add(tree_size_rec(e.lhs(), memo), tree_size_rec(e.rhs(), memo)));
  }
  memo.emplace(e.id(), s);
  return s;
}

}  // namespace

std::uint64_t tree_size(const Expr& e) {
  std::unordered_map<const void*, std::uint64_t> memo;
  return tree_size_rec(e, memo);
}

std::uint64_t dag_size(const Expr& e) {
  std::uint64_t n = 0;
  visit_dag(e, [&](const Expr&) { ++n; });
  return n;
}

// ---------------------------------------------------------------------------
// Text form

namespace {

int precedence(const Expr& e) {
  switch (e.op()) {
    case Expr::Op::Or:
      return 1;
    case Expr::Op::And:
      return 2;
    case Expr::Op::Not:
      return 3;
    default:
      return 4;
  }
}

void print(const Expr& e, std::string& out) {
  auto child = [&](const Expr& c, int min_prec) {
    bool paren = precedence(c) < min_prec;
    if (paren) out += '(';
    print(c, out);
    if (paren) out += ')';
  };
  switch (e.op()) {
    case Expr::Op::Const:
      out += e.value() ? "true" : "false";
      break;
    case Expr::Op::Atom:
      out += to_string(e.atom());
      break;
    case Expr::Op::Not:
      out += '!';
      child(e.lhs(), 3);
      break;
    case Expr::Op::And:
      child(e.lhs(), 2);
      out += " && ";
      child(e.rhs(), 2);
      break;
    case Expr::Op::Or:
      child(e.lhs(), 1);
      out += " || ";
      child(e.rhs(), 1);
      break;
  }
}

class Parser {
 public:
  Parser(std::string_view s, const std::set<std::string>& monitors) : s_(s), monitors_(monitors) {}

  Expr parse() {
    Expr e = parse_or();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expression: " + msg + " at offset " + std::to_string(pos_));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  Expr parse_or() {
    Expr e = parse_and();
    while (accept("||")) e = Expr::make_or(e, parse_and());
    return e;
  }

  Expr parse_and() {
    Expr e = parse_unary();
    while (accept("&&")) e = Expr::make_and(e, parse_unary());
    return e;
  }

  Expr parse_unary() {
    if (accept("!")) return Expr::make_not(parse_unary());
    if (accept("(")) {
      Expr e = parse_or();
      if (!accept(")")) fail("expected ')'");
      return e;
    }
    if (accept("<")) {
      skip_ws();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected round number");
      Round t = static_cast<Round>(std::stoul(std::string(s_.substr(start, pos_ - start))));
      if (!accept(",")) fail("expected ','");
      bool ref = accept("@");
      std::string name = identifier();
      if (!accept(">")) fail("expected '>'");
      return Expr::atom(ref ? Atom::monref(t, name) : Atom::timed(t, name));
    }
    if (accept("@")) return Expr::atom(Atom::monref(0, identifier()));
    std::string name = identifier();
    if (name == "true") return Expr::top();
    if (name == "false") return Expr::bottom();
    if (monitors_.count(name)) return Expr::atom(Atom::monref(0, name));
    return Expr::atom(Atom::plain(name));
  }

  std::string identifier() {
    skip_ws();
    std::size_t start = pos_;
    auto ok = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; };
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      while (pos_ < s_.size() && ok(s_[pos_])) ++pos_;
    }
    if (start == pos_) fail(pos_ < s_.size() ? "unexpected '" + std::string(1, s_[pos_]) + "'" : "unexpected end");
    return std::string(s_.substr(start, pos_ - start));
  }

  std::string_view s_;
  const std::set<std::string>& monitors_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

Expr parse_expr(std::string_view text, const std::set<std::string>& monitors) {
  return Parser(text, monitors).parse();
}

}  // namespace demon
