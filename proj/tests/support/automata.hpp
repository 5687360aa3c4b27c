#pragma once

// Small reference automata and random automaton generators for tests.

#include <memory>
#include <queue>

#include "demon/analysis.hpp"
#include "demon/spec.hpp"
#include "demon/truth_table.hpp"
#include "support/gen.hpp"

namespace demon::testing {

struct Edge {
  std::string from, to, label;
};

inline Specification make_spec(const std::vector<std::string>& states, const std::vector<Verdict>& verdicts,
                               const std::vector<Edge>& edges, const std::set<std::string>& monitors = {}) {
  std::vector<Transition> trs;
  Specification shape(states, verdicts, 0, {});
  for (const Edge& e : edges) trs.push_back({*shape.find(e.from), *shape.find(e.to), parse_expr(e.label, monitors)});
  return Specification(states, verdicts, 0, trs);
}

/// F(a || b)
inline Specification eventually_a_or_b() {
  return make_spec({"q0", "q1"}, {Verdict::Unknown, Verdict::Top},
                   {{"q0", "q0", "!a && !b"}, {"q0", "q1", "a || b"}, {"q1", "q1", "true"}});
}

/// F(a && b)
inline Specification eventually_a_and_b() {
  return make_spec({"q0", "q1"}, {Verdict::Unknown, Verdict::Top},
                   {{"q0", "q0", "!a || !b"}, {"q0", "q1", "a && b"}, {"q1", "q1", "true"}});
}

/// No state carries a final verdict.
inline Specification no_final_verdict() {
  return make_spec({"q0", "q1"}, {Verdict::Unknown, Verdict::Unknown},
                   {{"q0", "q1", "a"}, {"q0", "q0", "!a"}, {"q1", "q1", "true"}});
}

/// Decentralized F(a0 || b0): root m0 on c0 refers to m1 on c1 for b0.
inline DecentralizedSpec two_monitor_spec() {
  DecentralizedSpec d;
  d.monitors.emplace("m0", make_spec({"q0", "q1"}, {Verdict::Unknown, Verdict::Top},
                                     {{"q0", "q0", "!m1 && !a0"},
                                      {"q0", "q1", "m1 && !a0"},
                                      {"q0", "q1", "a0"},
                                      {"q1", "q1", "true"}},
                                     {"m1"}));
  d.monitors.emplace("m1", make_spec({"q0", "q1", "q2"}, {Verdict::Unknown, Verdict::Top, Verdict::Bottom},
                                     {{"q0", "q1", "b0"}, {"q0", "q2", "!b0"}, {"q1", "q1", "true"}, {"q2", "q2", "true"}}));
  d.attach = {{"m0", "c0"}, {"m1", "c1"}};
  d.root = "m0";
  d.ap_owner = {{"a0", "c0"}, {"b0", "c1"}};
  return d;
}

/// Component A observes a, component B observes b:
/// round 1 a=T b=T, round 2 a=T b=F.
inline DecentralizedTrace two_round_trace() {
  DecentralizedTrace tr({"A", "B"});
  tr.observe(1, "A", "a", true);
  tr.observe(1, "B", "b", true);
  tr.observe(2, "A", "a", true);
  tr.observe(2, "B", "b", false);
  return tr;
}

/// Monitor network m0 -> m1 <- m2.
inline Graph chain_network() {
  Graph g;
  g.add_edge("m0", "m1");
  g.add_edge("m2", "m1");
  return g;
}

/// System chain c0 -> c1 -> c2 -> c3.
inline Graph chain_system() {
  Graph g;
  g.add_edge("c0", "c1");
  g.add_edge("c1", "c2");
  g.add_edge("c2", "c3");
  return g;
}

inline Assignment chain_constraint() { return {{"m0", "c0"}, {"m2", "c2"}}; }

inline std::vector<std::string> state_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("q" + std::to_string(i));
  return out;
}

/// Labels for a random partition of the assignments over `aps` into targets.
inline std::vector<Transition> random_partition(Rng& rng, StateId from, const std::vector<StateId>& targets,
                                                const std::vector<Atom>& aps) {
  std::size_t rows = std::size_t{1} << aps.size();
  std::map<StateId, TruthTable> blocks;
  for (std::size_t r = 0; r < rows; ++r) {
    StateId to = targets[pick(rng, targets.size())];
    auto it = blocks.try_emplace(to, TruthTable(aps.size())).first;
    it->second.set(r, true);
  }
  std::vector<Transition> out;
  for (auto& [to, table] : blocks) out.push_back({from, to, sop_to_expr(isop(table), aps)});
  return out;
}

/// Deterministic, complete automaton with arbitrary verdicts.
inline Specification random_spec(Rng& rng, std::size_t n, const std::vector<Atom>& aps) {
  std::vector<Verdict> verdicts;
  for (std::size_t i = 0; i < n; ++i) verdicts.push_back(static_cast<Verdict>(pick(rng, 3)));
  std::vector<StateId> all;
  for (StateId q = 0; q < n; ++q) all.push_back(q);
  std::vector<Transition> trs;
  for (StateId q = 0; q < n; ++q) {
    auto part = random_partition(rng, q, all, aps);
    trs.insert(trs.end(), part.begin(), part.end());
  }
  return Specification(state_names(n), verdicts, 0, trs);
}

/// Brute-force co-reachability: states from which some final state is reachable.
inline std::set<StateId> coreach_final(const Specification& a) {
  std::set<StateId> out;
  for (StateId s = 0; s < a.size(); ++s) {
    std::vector<bool> seen(a.size(), false);
    std::vector<StateId> stack{s};
    seen[s] = true;
    bool found = false;
    while (!stack.empty() && !found) {
      StateId q = stack.back();
      stack.pop_back();
      if (is_final(a.verdict(q))) found = true;
      for (std::size_t i : a.outgoing(q)) {
        StateId to = a.transitions()[i].to;
        if (!seen[to] && satisfiable(a.transitions()[i].label)) {
          seen[to] = true;
          stack.push_back(to);
        }
      }
    }
    if (found) out.insert(s);
  }
  return out;
}

/// Random automaton whose final-verdict states are absorbing and reachable
/// from every state.
inline Specification random_monitorable_spec(Rng& rng, std::size_t n, const std::vector<Atom>& aps) {
  for (;;) {
    std::vector<Verdict> verdicts(n, Verdict::Unknown);
    std::size_t finals = 1 + pick(rng, std::max<std::size_t>(1, n / 2));
    for (std::size_t i = 0; i < finals; ++i) verdicts[n - 1 - i] = coin(rng) ? Verdict::Top : Verdict::Bottom;
    std::vector<StateId> all;
    for (StateId q = 0; q < n; ++q) all.push_back(q);
    std::vector<Transition> trs;
    for (StateId q = 0; q < n; ++q) {
      if (is_final(verdicts[q])) {
        trs.push_back({q, q, Expr::top()});
        continue;
      }
      auto part = random_partition(rng, q, all, aps);
      trs.insert(trs.end(), part.begin(), part.end());
    }
    Specification a(state_names(n), verdicts, 0, trs);
    if (coreach_final(a).size() == n) return a;
  }
}

/// Trace where component i observes the propositions in aps_by_component[i] every round.
inline DecentralizedTrace random_trace(Rng& rng, const std::map<std::string, std::vector<std::string>>& aps_by_component,
                                       Round length, double p_true = 0.5) {
  std::vector<std::string> comps;
  for (const auto& kv : aps_by_component) comps.push_back(kv.first);
  DecentralizedTrace tr(comps, length);
  for (Round t = 1; t <= length; ++t)
    for (const auto& [c, aps] : aps_by_component)
      for (const auto& ap : aps) tr.observe(t, c, ap, coin(rng, p_true));
  return tr;
}

}  // namespace demon::testing
