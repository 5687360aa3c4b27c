#include "sat.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

namespace demon::detail {

namespace {

using Lit = std::uint32_t;  // 2 * var + sign

Lit mk(std::uint32_t var, bool negative) { return 2 * var + (negative ? 1 : 0); }
Lit flip(Lit l) { return l ^ 1U; }

class Solver {
 public:
  explicit Solver(std::uint32_t vars) : assign_(vars, kFree), watches_(2 * vars), occurrences_(vars, 0) {}

  void add_clause(std::vector<Lit> c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 1; i < c.size(); ++i)
      if (c[i] == flip(c[i - 1])) return;
    for (Lit l : c) ++occurrences_[l >> 1];
    if (c.size() == 1) {
      units_.push_back(c[0]);
      return;
    }
    std::size_t idx = clauses_.size();
    watches_[c[0]].push_back(idx);
    watches_[c[1]].push_back(idx);
    clauses_.push_back(std::move(c));
  }

  bool solve() {
    for (Lit u : units_) {
      if (value(u) == kFalse) return false;
      if (value(u) == kFree) enqueue(u);
    }
    if (!propagate()) return false;
    std::vector<std::uint32_t> order(assign_.size());
    for (std::uint32_t v = 0; v < order.size(); ++v) order[v] = v;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return occurrences_[a] > occurrences_[b]; });

    struct Decision {
      std::size_t trail_size;
      Lit lit;
      bool flipped;
    };
    std::vector<Decision> stack;
    std::size_t cursor = 0;
    for (;;) {
      while (cursor < order.size() && assign_[order[cursor]] != kFree) ++cursor;
      if (cursor == order.size()) return true;
      Lit d = mk(order[cursor], true);
      stack.push_back({trail_.size(), d, false});
      enqueue(d);
      while (!propagate()) {
        for (;;) {
          if (stack.empty()) return false;
          Decision top = stack.back();
          stack.pop_back();
          undo(top.trail_size);
          if (!top.flipped) {
            stack.push_back({top.trail_size, flip(top.lit), true});
            enqueue(flip(top.lit));
            break;
          }
        }
      }
      cursor = 0;
    }
  }

 private:
  static constexpr std::int8_t kFree = -1, kFalse = 0, kTrue = 1;

  std::int8_t value(Lit l) const {
    std::int8_t a = assign_[l >> 1];
    if (a == kFree) return kFree;
    return (l & 1U) ? static_cast<std::int8_t>(1 - a) : a;
  }

  void enqueue(Lit l) {
    assign_[l >> 1] = (l & 1U) ? kFalse : kTrue;
    trail_.push_back(l);
  }

  void undo(std::size_t size) {
    while (trail_.size() > size) {
      assign_[trail_.back() >> 1] = kFree;
      trail_.pop_back();
    }
    head_ = std::min(head_, size);
  }

  bool propagate() {
    while (head_ < trail_.size()) {
      Lit falsified = flip(trail_[head_++]);
      auto& ws = watches_[falsified];
      std::size_t keep = 0;
      bool conflict = false;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        std::size_t ci = ws[i];
        if (conflict) {
          ws[keep++] = ci;
          continue;
        }
        auto& c = clauses_[ci];
        if (c[0] == falsified) std::swap(c[0], c[1]);
        if (value(c[0]) == kTrue) {
          ws[keep++] = ci;
          continue;
        }
        bool moved = false;
        for (std::size_t j = 2; j < c.size(); ++j) {
          if (value(c[j]) != kFalse) {
            std::swap(c[1], c[j]);
            watches_[c[1]].push_back(ci);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = ci;
        if (value(c[0]) == kFalse) {
          conflict = true;
        } else if (value(c[0]) == kFree) {
          enqueue(c[0]);
        }
      }
      ws.resize(keep);
      if (conflict) return false;
    }
    return true;
  }

  std::vector<std::int8_t> assign_;
  std::vector<std::vector<std::size_t>> watches_;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<Lit> units_;
  std::vector<Lit> trail_;
  std::vector<std::uint32_t> occurrences_;
  std::size_t head_ = 0;
};

struct Encoder {
  std::unordered_map<const void*, Lit> lit_of;
  std::vector<std::vector<Lit>> clauses;
  std::uint32_t vars = 0;
  Lit const_true = 0;
  bool has_const = false;

  Lit encode(const Expr& e) {
    auto it = lit_of.find(e.id());
    if (it != lit_of.end()) return it->second;
    Lit out = 0;
    switch (e.op()) {
      case Expr::Op::Const: {
        if (!has_const) {
          const_true = mk(vars++, false);
          clauses.push_back({const_true});
          has_const = true;
        }
        out = e.value() ? const_true : flip(const_true);
        break;
      }
      case Expr::Op::Atom:
        out = mk(vars++, false);
        break;
      case Expr::Op::Not:
        out = flip(encode(e.lhs()));
        break;
      case Expr::Op::And: {
        Lit a = encode(e.lhs()), b = encode(e.rhs());
        out = mk(vars++, false);
        clauses.push_back({flip(out), a});
        clauses.push_back({flip(out), b});
        clauses.push_back({out, flip(a), flip(b)});
        break;
      }
      case Expr::Op::Or: {
        Lit a = encode(e.lhs()), b = encode(e.rhs());
        out = mk(vars++, false);
        clauses.push_back({out, flip(a)});
        clauses.push_back({out, flip(b)});
        clauses.push_back({flip(out), a, b});
        break;
      }
    }
    lit_of.emplace(e.id(), out);
    return out;
  }
};

}  // namespace

bool dpll_satisfiable(const Expr& e, bool negate) {
  // Atoms reached through different nodes must share a variable.
  Encoder enc;
  std::map<Atom, Lit> atom_lit;
  std::vector<Expr> stack{e};
  std::unordered_map<const void*, bool> seen;
  while (!stack.empty()) {
    Expr x = stack.back();
    stack.pop_back();
    if (!seen.emplace(x.id(), true).second) continue;
    if (x.op() == Expr::Op::Atom) {
      auto [it, inserted] = atom_lit.emplace(x.atom(), 0);
      if (inserted) it->second = mk(enc.vars++, false);
      enc.lit_of.emplace(x.id(), it->second);
    } else if (x.op() == Expr::Op::Not) {
      stack.push_back(x.lhs());
    } else if (x.op() != Expr::Op::Const) {
      stack.push_back(x.lhs());
      stack.push_back(x.rhs());
    }
  }
  Lit root = enc.encode(e);
  enc.clauses.push_back({negate ? flip(root) : root});

  Solver s(enc.vars);
  for (auto& c : enc.clauses) s.add_clause(std::move(c));
  return s.solve();
}

}  // namespace demon::detail
