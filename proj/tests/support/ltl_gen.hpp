#pragma once

// Random formula generator for tests.

#include "demon/ltl.hpp"
#include "support/gen.hpp"

namespace demon::testing {

inline Ltl random_ltl(Rng& rng, const std::vector<std::string>& aps, int depth) {
  if (depth == 0 || coin(rng, 0.25)) return Ltl::ap(aps[pick(rng, aps.size())]);
  switch (pick(rng, 7)) {
    case 0: return lnot(random_ltl(rng, aps, depth - 1));
    case 1: return land(random_ltl(rng, aps, depth - 1), random_ltl(rng, aps, depth - 1));
    case 2: return lor(random_ltl(rng, aps, depth - 1), random_ltl(rng, aps, depth - 1));
    case 3: return next(random_ltl(rng, aps, depth - 1));
    case 4: return finally(random_ltl(rng, aps, depth - 1));
    case 5: return globally(random_ltl(rng, aps, depth - 1));
    default: return until(random_ltl(rng, aps, depth - 1), random_ltl(rng, aps, depth - 1));
  }
}

}  // namespace demon::testing
