#pragma once

// Brute-force compatibility oracle and random graphs.

#include "demon/analysis.hpp"
#include "support/gen.hpp"

namespace demon::testing {

// Every total assignment extending the constraint, checked directly against
// the reachability definition.
inline std::size_t brute_count(const Graph& net, const Graph& sys, const Assignment& constraint, Assignment* first) {
  std::vector<std::string> free;
  for (const auto& m : net.nodes)
    if (!constraint.count(m)) free.push_back(m);
  std::vector<std::string> comps(sys.nodes.begin(), sys.nodes.end());
  auto reaches = [](const Graph& g, const std::string& a, const std::string& b) {
    std::set<std::string> seen{a};
    std::vector<std::string> st{a};
    while (!st.empty()) {
      std::string x = st.back();
      st.pop_back();
      if (x == b) return true;
      for (const auto& [u, v] : g.edges)
        if (u == x && seen.insert(v).second) st.push_back(v);
    }
    return false;
  };
  std::size_t total = 1;
  for (std::size_t i = 0; i < free.size(); ++i) total *= comps.size();
  std::size_t count = 0;
  for (std::size_t code = 0; code < total; ++code) {
    Assignment s = constraint;
    std::size_t x = code;
    // Most significant digit first so that the first hit is the lexicographic minimum.
    for (std::size_t i = free.size(); i-- > 0;) {
      s[free[i]] = comps[x % comps.size()];
      x /= comps.size();
    }
    bool ok = true;
    for (const auto& [m, c] : s)
      for (const auto& [m2, c2] : s)
        if (reaches(net, m, m2) && !reaches(sys, c, c2)) ok = false;
    if (ok) {
      if (count == 0 && first) *first = s;
      ++count;
    }
  }
  return count;
}

inline Graph random_graph(Rng& rng, const std::string& prefix, std::size_t n, double p) {
  Graph g;
  for (std::size_t i = 0; i < n; ++i) g.nodes.insert(prefix + std::to_string(i));
  for (const auto& a : g.nodes)
    for (const auto& b : g.nodes)
      if (a != b && coin(rng, p)) g.add_edge(a, b);
  return g;
}

}  // namespace demon::testing
