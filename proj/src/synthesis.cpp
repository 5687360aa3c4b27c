#include "demon/synthesis.hpp"

#include <algorithm>
#include <deque>

#include "demon/error.hpp"
#include "demon/truth_table.hpp"

namespace demon {

Specification synthesize(const Ltl& phi, std::size_t state_cap) {
  using Row = std::map<StateId, TruthTable>;
  std::vector<Ltl> states;
  std::map<std::string, StateId> ids;
  std::vector<std::pair<std::vector<Atom>, Row>> rows;
  std::deque<StateId> work;

  auto intern = [&](const Ltl& f) {
    std::string key = to_string(f);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    if (states.size() >= state_cap)
      throw StateCapExceeded("more than " + std::to_string(state_cap) + " states for " + to_string(phi));
    StateId q = states.size();
    ids.emplace(key, q);
    states.push_back(f);
    work.push_back(q);
    return q;
  };

  intern(canonicalize(phi));
  std::vector<Transition> trs;
  while (!work.empty()) {
    StateId q = work.front();
    work.pop_front();
    Ltl f = states[q];
    if (f.is_const()) {
      trs.push_back({q, q, Expr::top()});
      continue;
    }
    std::set<Atom> atom_set = ltl_atoms(f);
    std::vector<Atom> atoms(atom_set.begin(), atom_set.end());
    if (atoms.size() > kSynthesisVarLimit)
      throw ThresholdExceeded("state " + to_string(f) + " has " + std::to_string(atoms.size()) + " propositions");
    std::map<StateId, TruthTable> targets;
    std::size_t n = std::size_t{1} << atoms.size();
    for (std::size_t r = 0; r < n; ++r) {
      Ltl g = progress(f, [&](const Atom& a) {
        for (std::size_t i = 0; i < atoms.size(); ++i)
          if (atoms[i] == a) return ((r >> i) & 1U) != 0;
        return false;
      });
      StateId to = intern(g);
      targets.try_emplace(to, TruthTable(atoms.size())).first->second.set(r, true);
    }
    for (const auto& [to, table] : targets) trs.push_back({q, to, sop_to_expr(isop(table), atoms)});
  }

  std::vector<std::string> names;
  std::vector<Verdict> verdicts;
  for (StateId q = 0; q < states.size(); ++q) {
    names.push_back("q" + std::to_string(q));
    verdicts.push_back(states[q].is_true() ? Verdict::Top : states[q].is_false() ? Verdict::Bottom : Verdict::Unknown);
  }
  return Specification(names, verdicts, 0, trs);
}

// ---------------------------------------------------------------------------
// Monitor tree

std::size_t score(const Ltl& phi, const std::string& c, const ApOwner& owner) {
  if (phi.kind() == Ltl::Kind::Ap) {
    if (phi.is_ref()) return 0;
    auto it = owner.find(phi.name());
    return it != owner.end() && it->second == c ? 1 : 0;
  }
  if (phi.is_unary()) return score(phi.lhs(), c, owner);
  if (phi.is_binary()) return score(phi.lhs(), c, owner) + score(phi.rhs(), c, owner);
  return 0;
}

namespace {

std::set<std::string> components_of(const ApOwner& owner) {
  std::set<std::string> out;
  for (const auto& kv : owner) out.insert(kv.second);
  return out;
}

bool has_aps(const Ltl& phi) { return !ltl_aps(phi).empty(); }

}  // namespace

std::string choose(const Ltl& phi, const ApOwner& owner) {
  for (const auto& ap : ltl_aps(phi))
    if (!owner.count(ap)) throw InvalidSpecification("proposition '" + ap + "' has no owner");
  std::string best;
  std::size_t best_score = 0;
  for (const auto& c : components_of(owner)) {
    std::size_t s = score(phi, c, owner);
    if (s > best_score) {
      best = c;
      best_score = s;
    }
  }
  if (best_score == 0) throw NoAtomicPropositions("no propositions in " + to_string(phi));
  return best;
}

std::pair<std::string, std::string> split(const Ltl& phi, const Ltl& phi2, const std::string& cb,
                                          const ApOwner& owner) {
  std::string c1 = choose(phi, owner);
  std::string c2 = choose(phi2, owner);
  std::size_t s1 = score(phi, cb, owner);
  std::size_t s2 = score(phi2, cb, owner);
  if (c1 == cb && c2 == cb) return {cb, cb};
  if (c1 != cb && (c2 == cb || s2 > s1)) return {c1, cb};
  return {cb, c2};
}

std::vector<MonitorData> MonitorTree::all() const {
  std::vector<MonitorData> out{root};
  out.insert(out.end(), extra.begin(), extra.end());
  return out;
}

namespace {

struct NetResult {
  Ltl f;
  std::vector<MonitorData> mons;
  std::set<std::pair<std::string, std::string>> edges;
};

class NetBuilder {
 public:
  explicit NetBuilder(const ApOwner& owner) : owner_(owner) {}

  std::string newid() { return std::to_string(next_++); }
  std::size_t count() const { return next_; }

  NetResult netx(const Ltl& phi, const std::string& id, const std::string& host) {
    if (phi.is_unary()) {
      NetResult o = netx(phi.lhs(), id, host);
      o.f = Ltl::unary(phi.kind(), o.f);
      return o;
    }
    if (!phi.is_binary()) return {phi, {}, {}};
    const Ltl& e = phi.lhs();
    const Ltl& e2 = phi.rhs();
    auto [c1, c2] = has_aps(e) && has_aps(e2) ? split(e, e2, host, owner_) : std::make_pair(host, host);
    if (c1 == host && c2 == host) {
      NetResult l = netx(e, id, host);
      NetResult r = netx(e2, id, host);
      Ltl f = Ltl::binary(phi.kind(), l.f, r.f);
      return join(std::move(f), std::move(l), std::move(r));
    }
    std::string fresh = newid();
    if (c1 == host) {
      NetResult l = netx(e, id, host);
      NetResult r = netx(e2, fresh, c2);
      r.mons.push_back({fresh, r.f, c2});
      r.edges.emplace(fresh, id);
      Ltl f = Ltl::binary(phi.kind(), l.f, Ltl::ap(fresh, true));
      return join(std::move(f), std::move(l), std::move(r));
    }
    NetResult l = netx(e, fresh, c1);
    NetResult r = netx(e2, id, host);
    l.mons.push_back({fresh, l.f, c1});
    l.edges.emplace(fresh, id);
    Ltl f = Ltl::binary(phi.kind(), Ltl::ap(fresh, true), r.f);
    return join(std::move(f), std::move(l), std::move(r));
  }

 private:
  static NetResult join(Ltl f, NetResult l, NetResult r) {
    NetResult out{std::move(f), std::move(l.mons), std::move(l.edges)};
    out.mons.insert(out.mons.end(), r.mons.begin(), r.mons.end());
    out.edges.insert(r.edges.begin(), r.edges.end());
    return out;
  }

  const ApOwner& owner_;
  std::size_t next_ = 1;
};

std::string padded(const std::string& raw, std::size_t width) {
  std::string digits = raw;
  if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
  return "m" + digits;
}

}  // namespace

MonitorTree net_chor(const Ltl& phi, const ApOwner& owner) {
  std::string host = choose(phi, owner);
  NetBuilder b(owner);
  NetResult res = b.netx(phi, "0", host);
  std::size_t width = std::max<std::size_t>(2, std::to_string(b.count() - 1).size());
  auto rename = [&](const std::string& raw) { return padded(raw, width); };
  MonitorTree t;
  t.root = {rename("0"), rename_refs(res.f, rename), host};
  for (const auto& m : res.mons) t.extra.push_back({rename(m.id), rename_refs(m.formula, rename), m.component});
  std::sort(t.extra.begin(), t.extra.end(), [](const MonitorData& a, const MonitorData& b) { return a.id < b.id; });
  for (const auto& [c, p] : res.edges) t.edges.emplace(rename(c), rename(p));
  return t;
}

ChorNetwork chor_network(const MonitorTree& tree, const ApOwner& owner, std::size_t state_cap) {
  ChorNetwork net;
  for (const auto& m : tree.all()) {
    net.spec.monitors.emplace(m.id, synthesize(m.formula, state_cap));
    net.spec.attach[m.id] = m.component;
    net.refs[m.id];
    net.corefs[m.id];
  }
  net.spec.root = tree.root.id;
  net.spec.ap_owner = owner;
  for (const auto& [child, parent] : tree.edges) {
    net.refs[child].insert(parent);
    net.corefs[parent].insert(child);
  }
  check(net.spec);
  return net;
}

}  // namespace demon
