#pragma once

// Helpers for comparing execution history encodings.

#include <memory>

#include "demon/ehe.hpp"

namespace demon::testing {

inline std::shared_ptr<const Specification> shared(Specification a) {
  return std::make_shared<const Specification>(std::move(a));
}

inline Expr px(const std::string& s) { return parse_expr(s); }

inline bool entry_is(const EHE& p, Round t, StateId q, const std::string& text) {
  const Expr* e = p.find(t, q);
  return e && equivalent(*e, px(text));
}

inline Memory stamped(Round t, std::initializer_list<std::pair<const char*, bool>> xs) {
  Memory m;
  for (auto& [n, v] : xs) m.set(Atom::timed(t, n), from_bool(v));
  return m;
}

inline bool ehe_equivalent(const EHE& a, const EHE& b) {
  std::set<EheKey> keys;
  for (const auto& kv : a.entries()) keys.insert(kv.first);
  for (const auto& kv : b.entries()) keys.insert(kv.first);
  for (const EheKey& k : keys) {
    const Expr* x = a.find(k.t, k.q);
    const Expr* y = b.find(k.t, k.q);
    if (!equivalent(x ? *x : Expr::bottom(), y ? *y : Expr::bottom())) return false;
  }
  return true;
}

inline bool same_entries(const EHE& a, const EHE& b) {
  if (a.size() != b.size()) return false;
  for (const auto& [k, e] : a.entries()) {
    const Expr* o = b.find(k.t, k.q);
    if (!o || !o->same(e)) return false;
  }
  return true;
}

}  // namespace demon::testing
