#include "demon/truth_table.hpp"

#include <algorithm>
#include <unordered_map>

#include "demon/error.hpp"

namespace demon {

namespace {

constexpr std::uint64_t kVarMask[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

std::size_t word_count(std::size_t vars) { return vars <= 6 ? 1 : (std::size_t{1} << (vars - 6)); }

}  // namespace

TruthTable::TruthTable(std::size_t vars, bool value) : vars_(vars) {
  if (vars > kMaxVars) throw ThresholdExceeded("truth table over " + std::to_string(vars) + " variables");
  w_.assign(word_count(vars), value ? ~std::uint64_t{0} : 0);
  mask_tail();
}

TruthTable TruthTable::variable(std::size_t vars, std::size_t i) {
  TruthTable t(vars);
  for (std::size_t w = 0; w < t.w_.size(); ++w) {
    if (i < 6)
      t.w_[w] = kVarMask[i];
    else
      t.w_[w] = ((w >> (i - 6)) & 1U) ? ~std::uint64_t{0} : 0;
  }
  t.mask_tail();
  return t;
}

void TruthTable::mask_tail() {
  if (vars_ < 6) w_[0] &= (std::uint64_t{1} << (std::size_t{1} << vars_)) - 1;
}

void TruthTable::set(std::size_t row, bool v) {
  std::uint64_t bit = std::uint64_t{1} << (row & 63);
  if (v)
    w_[row >> 6] |= bit;
  else
    w_[row >> 6] &= ~bit;
}

bool TruthTable::is_zero() const {
  return std::all_of(w_.begin(), w_.end(), [](std::uint64_t w) { return w == 0; });
}

bool TruthTable::is_ones() const { return (~*this).is_zero(); }

bool TruthTable::depends_on(std::size_t i) const { return !(cofactor(i, false) == cofactor(i, true)); }

TruthTable TruthTable::cofactor(std::size_t i, bool v) const {
  TruthTable out(vars_);
  if (i < 6) {
    std::size_t s = std::size_t{1} << i;
    for (std::size_t w = 0; w < w_.size(); ++w) {
      std::uint64_t x = w_[w];
      if (v) {
        x &= kVarMask[i];
        out.w_[w] = x | (x >> s);
      } else {
        x &= ~kVarMask[i];
        out.w_[w] = x | (x << s);
      }
    }
  } else {
    std::size_t stride = std::size_t{1} << (i - 6);
    for (std::size_t w = 0; w < w_.size(); ++w) out.w_[w] = w_[v ? (w | stride) : (w & ~stride)];
  }
  out.mask_tail();
  return out;
}

TruthTable TruthTable::operator~() const {
  TruthTable out(vars_);
  for (std::size_t w = 0; w < w_.size(); ++w) out.w_[w] = ~w_[w];
  out.mask_tail();
  return out;
}

TruthTable TruthTable::operator&(const TruthTable& o) const {
  TruthTable out(vars_);
  for (std::size_t w = 0; w < w_.size(); ++w) out.w_[w] = w_[w] & o.w_[w];
  return out;
}

TruthTable TruthTable::operator|(const TruthTable& o) const {
  TruthTable out(vars_);
  for (std::size_t w = 0; w < w_.size(); ++w) out.w_[w] = w_[w] | o.w_[w];
  return out;
}

namespace {

void postorder(const Expr& e, std::unordered_map<const void*, std::size_t>& index,
               std::vector<Expr>& order) {
  if (index.count(e.id())) return;
  if (e.op() == Expr::Op::Not) {
    postorder(e.lhs(), index, order);
  } else if (e.op() == Expr::Op::And || e.op() == Expr::Op::Or) {
    postorder(e.lhs(), index, order);
    postorder(e.rhs(), index, order);
  }
  index.emplace(e.id(), order.size());
  order.push_back(e);
}

}  // namespace

TruthTable truth_table(const Expr& e, const std::vector<Atom>& order) {
  const std::size_t k = order.size();
  TruthTable out(k);
  std::unordered_map<const void*, std::size_t> index;
  std::vector<Expr> nodes;
  postorder(e, index, nodes);

  // Per node: variable index for atoms, child slots for operators.
  std::vector<int> var(nodes.size(), -1);
  std::vector<std::size_t> a(nodes.size()), b(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Expr& n = nodes[i];
    switch (n.op()) {
      case Expr::Op::Atom: {
        auto it = std::lower_bound(order.begin(), order.end(), n.atom());
        if (it != order.end() && *it == n.atom()) var[i] = static_cast<int>(it - order.begin());
        break;
      }
      case Expr::Op::Not:
        a[i] = index.at(n.lhs().id());
        break;
      case Expr::Op::And:
      case Expr::Op::Or:
        a[i] = index.at(n.lhs().id());
        b[i] = index.at(n.rhs().id());
        break;
      default:
        break;
    }
  }
  bool sorted = std::is_sorted(order.begin(), order.end());
  if (!sorted) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].op() != Expr::Op::Atom) continue;
      auto it = std::find(order.begin(), order.end(), nodes[i].atom());
      var[i] = it == order.end() ? -1 : static_cast<int>(it - order.begin());
    }
  }

  std::vector<std::uint64_t> val(nodes.size());
  const std::size_t chunks = out.words().size();
  std::vector<std::uint64_t> words(chunks);
  for (std::size_t c = 0; c < chunks; ++c) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const Expr& n = nodes[i];
      switch (n.op()) {
        case Expr::Op::Const:
          val[i] = n.value() ? ~std::uint64_t{0} : 0;
          break;
        case Expr::Op::Atom: {
          int v = var[i];
          if (v < 0)
            val[i] = 0;
          else if (v < 6)
            val[i] = kVarMask[v];
          else
            val[i] = ((c >> (v - 6)) & 1U) ? ~std::uint64_t{0} : 0;
          break;
        }
        case Expr::Op::Not:
          val[i] = ~val[a[i]];
          break;
        case Expr::Op::And:
          val[i] = val[a[i]] & val[b[i]];
          break;
        case Expr::Op::Or:
          val[i] = val[a[i]] | val[b[i]];
          break;
      }
    }
    words[c] = val.back();
  }
  for (std::size_t r = 0; r < out.rows(); ++r) out.set(r, (words[r >> 6] >> (r & 63)) & 1U);
  return out;
}

namespace {

struct IsopResult {
  TruthTable cover;
  std::vector<Cube> cubes;
};

IsopResult isop_rec(const TruthTable& lower, const TruthTable& upper, std::size_t top) {
  if (lower.is_zero()) return {TruthTable(lower.vars()), {}};
  if (upper.is_ones()) return {TruthTable(lower.vars(), true), {Cube{}}};
  std::size_t x = top;
  while (x > 0) {
    --x;
    if (lower.depends_on(x) || upper.depends_on(x)) break;
  }
  TruthTable l0 = lower.cofactor(x, false), l1 = lower.cofactor(x, true);
  TruthTable u0 = upper.cofactor(x, false), u1 = upper.cofactor(x, true);
  IsopResult r0 = isop_rec(l0 & ~u1, u0, x);
  IsopResult r1 = isop_rec(l1 & ~u0, u1, x);
  TruthTable lstar = (l0 & ~r0.cover) | (l1 & ~r1.cover);
  IsopResult rs = isop_rec(lstar, u0 & u1, x);

  TruthTable xv = TruthTable::variable(lower.vars(), x);
  IsopResult out{(~xv & r0.cover) | (xv & r1.cover) | rs.cover, {}};
  const std::uint32_t bit = std::uint32_t{1} << x;
  for (Cube c : r0.cubes) out.cubes.push_back({c.care | bit, c.value & ~bit});
  for (Cube c : r1.cubes) out.cubes.push_back({c.care | bit, c.value | bit});
  for (Cube c : rs.cubes) out.cubes.push_back(c);
  return out;
}

}  // namespace

std::vector<Cube> isop(const TruthTable& f) {
  if (f.vars() > 32) throw ThresholdExceeded("isop over more than 32 variables");
  return isop_rec(f, f, f.vars()).cubes;
}

Expr sop_to_expr(const std::vector<Cube>& cubes, const std::vector<Atom>& order) {
  std::vector<Expr> terms;
  terms.reserve(cubes.size());
  for (const Cube& c : cubes) {
    std::vector<Expr> lits;
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (!((c.care >> i) & 1U)) continue;
      Expr a = Expr::atom(order[i]);
      lits.push_back(((c.value >> i) & 1U) ? a : neg(a));
    }
    terms.push_back(conj_all(lits));
  }
  return disj_all(terms);
}

}  // namespace demon
