#include "demon/ltl.hpp"

#include <cctype>
#include <map>
#include <vector>

#include "demon/error.hpp"
#include "demon/truth_table.hpp"

namespace demon {

struct Ltl::Node {
  Kind kind;
  std::string name;
  bool ref = false;
  Ltl a;
  Ltl b;

  explicit Node(Kind k) : kind(k), a(nullptr), b(nullptr) {}
  Node(Kind k, Ltl x, Ltl y) : kind(k), a(std::move(x)), b(std::move(y)) {}
};

Ltl::Ltl() : Ltl(bottom()) {}

Ltl Ltl::top() {
  static const Ltl t(std::make_shared<const Node>(Kind::True));
  return t;
}

Ltl Ltl::bottom() {
  static const Ltl f(std::make_shared<const Node>(Kind::False));
  return f;
}

Ltl Ltl::ap(std::string name, bool ref) {
  auto n = std::make_shared<Node>(Kind::Ap);
  n->name = std::move(name);
  n->ref = ref;
  return Ltl(std::move(n));
}

Ltl Ltl::unary(Kind k, Ltl a) { return Ltl(std::make_shared<const Node>(k, std::move(a), Ltl(nullptr))); }
Ltl Ltl::binary(Kind k, Ltl a, Ltl b) { return Ltl(std::make_shared<const Node>(k, std::move(a), std::move(b))); }

Ltl::Kind Ltl::kind() const { return node_->kind; }
const std::string& Ltl::name() const { return node_->name; }
bool Ltl::is_ref() const { return node_->ref; }
const Ltl& Ltl::lhs() const { return node_->a; }
const Ltl& Ltl::rhs() const { return node_->b; }

bool Ltl::is_unary() const {
  Kind k = kind();
  return k == Kind::Not || k == Kind::Next || k == Kind::Finally || k == Kind::Globally;
}

bool Ltl::is_binary() const {
  Kind k = kind();
  return k == Kind::And || k == Kind::Or || k == Kind::Until;
}

bool Ltl::is_temporal() const {
  Kind k = kind();
  return k == Kind::Next || k == Kind::Finally || k == Kind::Globally || k == Kind::Until;
}

Ltl lnot(Ltl a) { return Ltl::unary(Ltl::Kind::Not, std::move(a)); }
Ltl land(Ltl a, Ltl b) { return Ltl::binary(Ltl::Kind::And, std::move(a), std::move(b)); }
Ltl lor(Ltl a, Ltl b) { return Ltl::binary(Ltl::Kind::Or, std::move(a), std::move(b)); }
Ltl next(Ltl a) { return Ltl::unary(Ltl::Kind::Next, std::move(a)); }
Ltl finally(Ltl a) { return Ltl::unary(Ltl::Kind::Finally, std::move(a)); }
Ltl globally(Ltl a) { return Ltl::unary(Ltl::Kind::Globally, std::move(a)); }
Ltl until(Ltl a, Ltl b) { return Ltl::binary(Ltl::Kind::Until, std::move(a), std::move(b)); }

// ---------------------------------------------------------------------------
// Text

namespace {

using K = Ltl::Kind;

int prec(const Ltl& f) {
  switch (f.kind()) {
    case K::Or: return 1;
    case K::Until: return 2;
    case K::And: return 3;
    case K::Not:
    case K::Next:
    case K::Finally:
    case K::Globally: return 4;
    default: return 5;
  }
}

void print(const Ltl& f, std::string& out) {
  auto sub = [&](const Ltl& g, bool paren) {
    if (paren) out += '(';
    print(g, out);
    if (paren) out += ')';
  };
  switch (f.kind()) {
    case K::True: out += "true"; return;
    case K::False: out += "false"; return;
    case K::Ap:
      if (f.is_ref()) out += '@';
      out += f.name();
      return;
    case K::Not: out += '!'; sub(f.lhs(), prec(f.lhs()) < 4); return;
    case K::Next: out += "X "; sub(f.lhs(), prec(f.lhs()) < 4); return;
    case K::Finally: out += "F "; sub(f.lhs(), prec(f.lhs()) < 4); return;
    case K::Globally: out += "G "; sub(f.lhs(), prec(f.lhs()) < 4); return;
    case K::And:
      sub(f.lhs(), prec(f.lhs()) < 3);
      out += " && ";
      sub(f.rhs(), prec(f.rhs()) <= 3);
      return;
    case K::Or:
      sub(f.lhs(), prec(f.lhs()) < 1);
      out += " || ";
      sub(f.rhs(), prec(f.rhs()) <= 1);
      return;
    case K::Until:
      sub(f.lhs(), prec(f.lhs()) <= 2);
      out += " U ";
      sub(f.rhs(), prec(f.rhs()) < 2);
      return;
  }
}

class LtlParser {
 public:
  explicit LtlParser(std::string_view s) : s_(s) {}

  Ltl parse() {
    Ltl f = parse_or();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("LTL at column " + std::to_string(i_ + 1) + ": " + what);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(std::string_view tok) {
    skip();
    if (s_.substr(i_, tok.size()) != tok) return false;
    i_ += tok.size();
    return true;
  }

  static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

  // Keyword operators must not be a prefix of a longer identifier.
  bool eat_keyword(std::string_view kw) {
    skip();
    if (s_.substr(i_, kw.size()) != kw) return false;
    if (i_ + kw.size() < s_.size() && ident_char(s_[i_ + kw.size()])) return false;
    i_ += kw.size();
    return true;
  }

  Ltl parse_or() {
    Ltl f = parse_until();
    while (eat("||")) f = lor(f, parse_until());
    return f;
  }

  Ltl parse_until() {
    Ltl f = parse_and();
    if (eat_keyword("U")) return until(f, parse_until());
    return f;
  }

  Ltl parse_and() {
    Ltl f = parse_unary();
    while (eat("&&")) f = land(f, parse_unary());
    return f;
  }

  Ltl parse_unary() {
    if (eat("!")) return lnot(parse_unary());
    if (eat_keyword("X")) return next(parse_unary());
    if (eat_keyword("F")) return finally(parse_unary());
    if (eat_keyword("G")) return globally(parse_unary());
    return parse_atom();
  }

  std::string ident() {
    std::size_t start = i_;
    if (i_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) {
      while (i_ < s_.size() && ident_char(s_[i_])) ++i_;
    }
    if (start == i_) fail("expected a proposition");
    return std::string(s_.substr(start, i_ - start));
  }

  Ltl parse_atom() {
    if (eat("(")) {
      Ltl f = parse_or();
      if (!eat(")")) fail("expected ')'");
      return f;
    }
    skip();
    if (i_ < s_.size() && s_[i_] == '@') {
      ++i_;
      return Ltl::ap(ident(), true);
    }
    std::string id = ident();
    if (id == "true") return Ltl::top();
    if (id == "false") return Ltl::bottom();
    if (id == "U") fail("misplaced 'U'");
    return Ltl::ap(id);
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

}  // namespace

Ltl parse_ltl(std::string_view text) { return LtlParser(text).parse(); }

std::string to_string(const Ltl& f) {
  std::string out;
  print(f, out);
  return out;
}

bool operator==(const Ltl& a, const Ltl& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case K::True:
    case K::False: return true;
    case K::Ap: return a.name() == b.name() && a.is_ref() == b.is_ref();
    default:
      if (!(a.lhs() == b.lhs())) return false;
      return !a.is_binary() || a.rhs() == b.rhs();
  }
}

namespace {

void collect_atoms(const Ltl& f, std::set<Atom>& out) {
  if (f.kind() == K::Ap) {
    out.insert(f.is_ref() ? Atom::monref(0, f.name()) : Atom::plain(f.name()));
  } else if (f.is_unary()) {
    collect_atoms(f.lhs(), out);
  } else if (f.is_binary()) {
    collect_atoms(f.lhs(), out);
    collect_atoms(f.rhs(), out);
  }
}

Atom atom_of(const Ltl& f) { return f.is_ref() ? Atom::monref(0, f.name()) : Atom::plain(f.name()); }

}  // namespace

std::set<Atom> ltl_atoms(const Ltl& f) {
  std::set<Atom> out;
  collect_atoms(f, out);
  return out;
}

std::set<std::string> ltl_aps(const Ltl& f) {
  std::set<std::string> out;
  for (const Atom& a : ltl_atoms(f))
    if (a.kind == AtomKind::Plain) out.insert(a.name);
  return out;
}

std::size_t ltl_size(const Ltl& f) {
  if (f.is_unary()) return 1 + ltl_size(f.lhs());
  if (f.is_binary()) return 1 + ltl_size(f.lhs()) + ltl_size(f.rhs());
  return 1;
}

// ---------------------------------------------------------------------------
// Canonical form

namespace {

constexpr std::size_t kCanonVarLimit = 12;

Ltl fold_not(const Ltl& a) {
  if (a.is_true()) return Ltl::bottom();
  if (a.is_false()) return Ltl::top();
  if (a.kind() == K::Not) return a.lhs();
  return lnot(a);
}

Ltl fold_and(const Ltl& a, const Ltl& b) {
  if (a.is_false() || b.is_true()) return a;
  if (b.is_false() || a.is_true()) return b;
  return land(a, b);
}

Ltl fold_or(const Ltl& a, const Ltl& b) {
  if (a.is_true() || b.is_false()) return a;
  if (b.is_true() || a.is_false()) return b;
  return lor(a, b);
}

Ltl fold_temporal(K k, const Ltl& a, const Ltl& b) {
  switch (k) {
    case K::Next:
      return a.is_const() ? a : next(a);
    case K::Finally:
      if (a.is_const() || a.kind() == K::Finally) return a;
      return finally(a);
    case K::Globally:
      if (a.is_const() || a.kind() == K::Globally) return a;
      return globally(a);
    case K::Until:
      if (b.is_const()) return b;
      if (a.is_false()) return b;
      if (a.is_true()) return fold_temporal(K::Finally, b, Ltl());
      return until(a, b);
    default:
      throw std::logic_error("not a temporal operator");
  }
}

Ltl canon(const Ltl& f);

// Folds constants and canonicalizes temporal subformulas; Boolean structure
// above them is kept.
Ltl prepare(const Ltl& f) {
  switch (f.kind()) {
    case K::True:
    case K::False:
    case K::Ap: return f;
    case K::Not: return fold_not(prepare(f.lhs()));
    case K::And: return fold_and(prepare(f.lhs()), prepare(f.rhs()));
    case K::Or: return fold_or(prepare(f.lhs()), prepare(f.rhs()));
    case K::Until: return fold_temporal(K::Until, canon(f.lhs()), canon(f.rhs()));
    default: return fold_temporal(f.kind(), canon(f.lhs()), Ltl());
  }
}

void elementaries(const Ltl& f, std::map<std::string, Ltl>& out) {
  switch (f.kind()) {
    case K::True:
    case K::False: return;
    case K::Not: elementaries(f.lhs(), out); return;
    case K::And:
    case K::Or:
      elementaries(f.lhs(), out);
      elementaries(f.rhs(), out);
      return;
    default: out.emplace(to_string(f), f); return;
  }
}

TruthTable table_of(const Ltl& f, const std::map<std::string, std::size_t>& index, std::size_t n) {
  switch (f.kind()) {
    case K::True: return TruthTable(n, true);
    case K::False: return TruthTable(n, false);
    case K::Not: return ~table_of(f.lhs(), index, n);
    case K::And: return table_of(f.lhs(), index, n) & table_of(f.rhs(), index, n);
    case K::Or: return table_of(f.lhs(), index, n) | table_of(f.rhs(), index, n);
    default: return TruthTable::variable(n, index.at(to_string(f)));
  }
}

Ltl canon(const Ltl& f) {
  Ltl g = prepare(f);
  if (g.is_const()) return g;
  std::map<std::string, Ltl> elems;
  elementaries(g, elems);
  if (elems.size() > kCanonVarLimit) return g;
  std::map<std::string, std::size_t> index;
  std::vector<Ltl> vars;
  for (const auto& [key, e] : elems) {
    index.emplace(key, vars.size());
    vars.push_back(e);
  }
  TruthTable t = table_of(g, index, vars.size());
  if (t.is_zero()) return Ltl::bottom();
  if (t.is_ones()) return Ltl::top();
  Ltl out;
  bool first_cube = true;
  for (const Cube& c : isop(t)) {
    Ltl cube;
    bool first_lit = true;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (!((c.care >> i) & 1U)) continue;
      Ltl lit = ((c.value >> i) & 1U) ? vars[i] : lnot(vars[i]);
      cube = first_lit ? lit : land(cube, lit);
      first_lit = false;
    }
    if (first_lit) cube = Ltl::top();
    out = first_cube ? cube : lor(out, cube);
    first_cube = false;
  }
  return out;
}

Ltl prog(const Ltl& f, const std::function<bool(const Atom&)>& value) {
  switch (f.kind()) {
    case K::True:
    case K::False: return f;
    case K::Ap: return Ltl::constant(value(atom_of(f)));
    case K::Not: return fold_not(prog(f.lhs(), value));
    case K::And: return fold_and(prog(f.lhs(), value), prog(f.rhs(), value));
    case K::Or: return fold_or(prog(f.lhs(), value), prog(f.rhs(), value));
    case K::Next: return f.lhs();
    case K::Finally: return fold_or(prog(f.lhs(), value), f);
    case K::Globally: return fold_and(prog(f.lhs(), value), f);
    case K::Until: return fold_or(prog(f.rhs(), value), fold_and(prog(f.lhs(), value), f));
  }
  return f;
}

}  // namespace

Ltl canonicalize(const Ltl& f) { return canon(f); }

Ltl progress(const Ltl& f, const std::function<bool(const Atom&)>& value) { return canon(prog(f, value)); }

Ltl progress(const Ltl& f, const Memory& m) {
  return progress(f, [&](const Atom& a) {
    Verdict v = m.query(a);
    if (!is_final(v)) throw IncompleteEvent("no observation for '" + to_string(a) + "'");
    return v == Verdict::Top;
  });
}

Ltl rename_refs(const Ltl& f, const std::function<std::string(const std::string&)>& rename) {
  if (f.kind() == K::Ap) return f.is_ref() ? Ltl::ap(rename(f.name()), true) : f;
  if (f.is_unary()) return Ltl::unary(f.kind(), rename_refs(f.lhs(), rename));
  if (f.is_binary()) return Ltl::binary(f.kind(), rename_refs(f.lhs(), rename), rename_refs(f.rhs(), rename));
  return f;
}

}  // namespace demon
