#include "demon/spec_io.hpp"

#include <algorithm>
#include <fstream>

#include "demon/error.hpp"

namespace demon {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::string str(const json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

}  // namespace

Specification spec_from_json(const json& j, const std::set<std::string>& monitors) {
  std::vector<std::string> states;
  const json& js = field(j, "states");
  if (!js.is_array()) throw ParseError("'states' must be an array");
  for (const auto& s : js) states.push_back(str(s, "state name"));

  auto index = [&](const std::string& name) -> StateId {
    auto it = std::find(states.begin(), states.end(), name);
    if (it == states.end()) throw ParseError("unknown state '" + name + "'");
    return static_cast<StateId>(it - states.begin());
  };

  std::vector<Verdict> verdicts(states.size(), Verdict::Unknown);
  if (j.contains("verdicts")) {
    const json& jv = j.at("verdicts");
    if (!jv.is_object()) throw ParseError("'verdicts' must be an object");
    for (auto it = jv.begin(); it != jv.end(); ++it) {
      Verdict v;
      if (!parse_verdict(str(it.value(), "verdict"), v)) throw ParseError("bad verdict '" + it.value().dump() + "'");
      verdicts[index(it.key())] = v;
    }
  }

  std::vector<Transition> trs;
  const json& jt = field(j, "transitions");
  if (!jt.is_array()) throw ParseError("'transitions' must be an array");
  for (const auto& t : jt) {
    Transition tr;
    tr.from = index(str(field(t, "from"), "from"));
    tr.to = index(str(field(t, "to"), "to"));
    tr.label = parse_expr(str(field(t, "label"), "label"), monitors);
    trs.push_back(std::move(tr));
  }
  StateId initial = index(str(field(j, "initial"), "initial"));
  try {
    return Specification(states, verdicts, initial, trs);
  } catch (const InvalidSpecification& e) {
    throw ParseError(e.what());
  }
}

namespace {

std::string label_text(const Expr& e) {
  // Monitor references are written as bare names; the loader resolves them
  // against the declared monitors.
  std::string s = to_string(e);
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i] != '@') out += s[i];
  return out;
}

}  // namespace

json to_json(const Specification& a) {
  json j;
  j["states"] = a.state_names();
  j["initial"] = a.name(a.initial());
  json v = json::object();
  for (StateId q = 0; q < a.size(); ++q) v[a.name(q)] = to_string(a.verdict(q));
  j["verdicts"] = v;
  json trs = json::array();
  for (const auto& t : a.transitions())
    trs.push_back({{"from", a.name(t.from)}, {"to", a.name(t.to)}, {"label", label_text(t.label)}});
  j["transitions"] = trs;
  return j;
}

bool is_decentralized_json(const json& j) { return j.is_object() && j.contains("monitors"); }

DecentralizedSpec decentralized_from_json(const json& j) {
  DecentralizedSpec d;
  const json& jm = field(j, "monitors");
  if (!jm.is_object() || jm.empty()) throw ParseError("'monitors' must be a non-empty object");
  std::set<std::string> names;
  for (auto it = jm.begin(); it != jm.end(); ++it) names.insert(it.key());
  for (auto it = jm.begin(); it != jm.end(); ++it) d.monitors.emplace(it.key(), spec_from_json(it.value(), names));
  const json& ja = field(j, "attach");
  for (auto it = ja.begin(); it != ja.end(); ++it) d.attach[it.key()] = str(it.value(), "component");
  d.root = str(field(j, "root"), "root");
  const json& jo = field(j, "ap_owner");
  for (auto it = jo.begin(); it != jo.end(); ++it) d.ap_owner[it.key()] = str(it.value(), "component");
  try {
    check(d);
  } catch (const InvalidSpecification& e) {
    throw ParseError(e.what());
  }
  return d;
}

json to_json(const DecentralizedSpec& d) {
  json j;
  json m = json::object();
  for (const auto& [id, a] : d.monitors) m[id] = to_json(a);
  j["monitors"] = m;
  j["attach"] = d.attach;
  j["root"] = d.root;
  j["ap_owner"] = d.ap_owner;
  return j;
}

Graph graph_from_json(const json& j) {
  Graph g;
  if (!j.is_object()) throw ParseError("graph must be an object");
  if (j.contains("nodes")) {
    const json& jn = j.at("nodes");
    if (!jn.is_array()) throw ParseError("'nodes' must be an array");
    for (const auto& n : jn) g.nodes.insert(str(n, "node"));
  }
  if (j.contains("edges")) {
    const json& je = j.at("edges");
    if (!je.is_array()) throw ParseError("'edges' must be an array");
    for (const auto& e : je) {
      if (!e.is_array() || e.size() != 2) throw ParseError("edge must be a [from, to] pair");
      g.add_edge(str(e[0], "edge endpoint"), str(e[1], "edge endpoint"));
    }
  }
  return g;
}

json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  return {{"nodes", g.nodes}, {"edges", edges}};
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace demon
