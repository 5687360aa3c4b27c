#pragma once

#include "demon/expr.hpp"

namespace demon::detail {

/// Satisfiability of `e` (or of its negation) through a Tseitin encoding and
/// DPLL with two-watched-literal unit propagation.
bool dpll_satisfiable(const Expr& e, bool negate = false);

}  // namespace demon::detail
