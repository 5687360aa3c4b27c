#include "demon/analysis.hpp"

#include <deque>
#include <vector>

namespace demon {

void Graph::add_edge(const std::string& a, const std::string& b) {
  nodes.insert(a);
  nodes.insert(b);
  edges.emplace(a, b);
}

std::set<std::string> Graph::successors(const std::string& n) const {
  std::set<std::string> out;
  for (auto it = edges.lower_bound({n, std::string()}); it != edges.end() && it->first == n; ++it)
    out.insert(it->second);
  return out;
}

MonitorabilityResult ca_monitorable(const Specification& a, const std::set<Verdict>& finals) {
  std::vector<std::vector<StateId>> pred(a.size());
  for (const auto& tr : a.transitions())
    if (satisfiable(tr.label)) pred[tr.to].push_back(tr.from);
  MonitorabilityResult r;
  std::deque<StateId> work;
  for (StateId q = 0; q < a.size(); ++q)
    if (finals.count(a.verdict(q)) && r.marked.insert(q).second) work.push_back(q);
  while (!work.empty()) {
    StateId q = work.front();
    work.pop_front();
    for (StateId p : pred[q])
      if (r.marked.insert(p).second) work.push_back(p);
  }
  r.monitorable = r.marked.size() == a.size();
  return r;
}

std::set<std::string> mds(const Specification& a) {
  std::set<std::string> out;
  for (const auto& tr : a.transitions()) {
    auto d = dep(tr.label);
    out.insert(d.begin(), d.end());
  }
  return out;
}

Graph mdg(const DecentralizedSpec& d) {
  Graph g;
  for (const auto& [id, a] : d.monitors) {
    g.nodes.insert(id);
    for (const auto& ref : mds(a)) g.add_edge(id, ref);
  }
  return g;
}

bool has_cycle(const Graph& g) {
  enum Color { White, Grey, Black };
  std::map<std::string, Color> color;
  for (const auto& n : g.nodes) color[n] = White;
  for (const auto& [a, b] : g.edges) {
    color.emplace(a, White);
    color.emplace(b, White);
  }
  for (const auto& [root, c0] : color) {
    if (color[root] != White) continue;
    // Iterative depth-first search; a grey successor is a back edge.
    std::vector<std::pair<std::string, std::vector<std::string>>> stack;
    auto push = [&](const std::string& n) {
      color[n] = Grey;
      auto s = g.successors(n);
      stack.emplace_back(n, std::vector<std::string>(s.rbegin(), s.rend()));
    };
    push(root);
    while (!stack.empty()) {
      auto& [n, todo] = stack.back();
      if (todo.empty()) {
        color[n] = Black;
        stack.pop_back();
        continue;
      }
      std::string m = todo.back();
      todo.pop_back();
      if (color[m] == Grey) return true;
      if (color[m] == White) push(m);
    }
  }
  return false;
}

bool decentralized_monitorable(const DecentralizedSpec& d) {
  if (has_cycle(mdg(d))) return false;
  for (const auto& [id, a] : d.monitors)
    if (!ca_monitorable(a).monitorable) return false;
  return true;
}

ReachMap compute_reach(const Graph& g) {
  ReachMap r;
  std::set<std::string> all = g.nodes;
  for (const auto& [a, b] : g.edges) {
    all.insert(a);
    all.insert(b);
  }
  for (const auto& n : all) {
    std::set<std::string>& seen = r[n];
    std::deque<std::string> work{n};
    seen.insert(n);
    while (!work.empty()) {
      std::string x = work.front();
      work.pop_front();
      for (const auto& y : g.successors(x))
        if (seen.insert(y).second) work.push_back(y);
    }
  }
  return r;
}

namespace {

const std::set<std::string>& reach_of(const ReachMap& r, const std::string& n) {
  static const std::set<std::string> none;
  auto it = r.find(n);
  return it == r.end() ? none : it->second;
}

}  // namespace

bool verify_compatible(const Assignment& s, const ReachMap& rm, const ReachMap& rs) {
  for (const auto& [m, c] : s) {
    const auto& comps = reach_of(rs, c);
    for (const auto& m2 : reach_of(rm, m)) {
      auto it = s.find(m2);
      if (it != s.end() && !comps.count(it->second)) return false;
    }
  }
  return true;
}

namespace {

struct Search {
  const ReachMap& rm;
  const ReachMap& rs;
  std::vector<std::string> free;
  std::vector<std::string> comps;
  bool count_all;
  CompatibilityResult result;

  // Returns true to stop the search.
  bool go(Assignment& s, std::size_t i) {
    if (i == free.size()) {
      if (!result.compatible) {
        result.compatible = true;
        result.assignment = s;
      }
      ++result.solutions;
      return !count_all;
    }
    for (const auto& c : comps) {
      s[free[i]] = c;
      if (verify_compatible(s, rm, rs) && go(s, i + 1)) return true;
    }
    s.erase(free[i]);
    return false;
  }
};

}  // namespace

CompatibilityResult compatible(const Graph& net, const Graph& sys, const Assignment& constraint, bool count_all) {
  ReachMap rm = compute_reach(net);
  ReachMap rs = compute_reach(sys);
  if (!verify_compatible(constraint, rm, rs)) return {};
  Search search{rm, rs, {}, {}, count_all, {}};
  for (const auto& m : rm)
    if (!constraint.count(m.first)) search.free.push_back(m.first);
  for (const auto& c : rs) search.comps.push_back(c.first);
  Assignment s = constraint;
  search.go(s, 0);
  return search.result;
}

}  // namespace demon
