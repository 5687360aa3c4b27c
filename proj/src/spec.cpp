#include "demon/spec.hpp"

#include <algorithm>

#include "demon/error.hpp"

namespace demon {

Specification::Specification(std::vector<std::string> states, std::vector<Verdict> verdicts, StateId initial,
                             std::vector<Transition> transitions)
    : states_(std::move(states)),
      verdicts_(std::move(verdicts)),
      initial_(initial),
      transitions_(std::move(transitions)),
      outgoing_(states_.size()) {
  if (states_.empty()) throw InvalidSpecification("specification has no states");
  if (verdicts_.size() != states_.size()) throw InvalidSpecification("one verdict per state required");
  if (initial_ >= states_.size()) throw InvalidSpecification("initial state out of range");
  std::vector<std::string> sorted = states_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidSpecification("duplicate state name");
  for (std::size_t i = 0; i < transitions_.size(); ++i) {
    const Transition& tr = transitions_[i];
    if (tr.from >= states_.size() || tr.to >= states_.size())
      throw InvalidSpecification("transition references an unknown state");
    outgoing_[tr.from].push_back(i);
  }
}

std::optional<StateId> Specification::find(std::string_view name) const {
  auto it = std::find(states_.begin(), states_.end(), name);
  if (it == states_.end()) return std::nullopt;
  return static_cast<StateId>(it - states_.begin());
}

std::set<StateId> Specification::final_states() const {
  std::set<StateId> out;
  for (StateId q = 0; q < size(); ++q)
    if (is_final(verdicts_[q])) out.insert(q);
  return out;
}

std::set<Atom> Specification::label_atoms() const {
  std::set<Atom> out;
  for (const auto& tr : transitions_) {
    auto a = atoms_of(tr.label);
    out.insert(a.begin(), a.end());
  }
  return out;
}

ValidationReport validate(const Specification& a) {
  ValidationReport rep;
  for (StateId q = 0; q < a.size(); ++q) {
    const auto& out = a.outgoing(q);
    std::set<Atom> atoms;
    for (std::size_t i : out) {
      auto s = atoms_of(a.transitions()[i].label);
      atoms.insert(s.begin(), s.end());
    }
    if (atoms.size() > exact_atom_threshold())
      throw ThresholdExceeded("state " + a.name(q) + " has labels over " + std::to_string(atoms.size()) + " atoms");
    std::vector<Expr> labels;
    for (std::size_t x = 0; x < out.size(); ++x) {
      const Transition& tx = a.transitions()[out[x]];
      labels.push_back(tx.label);
      for (std::size_t y = x + 1; y < out.size(); ++y) {
        const Transition& ty = a.transitions()[out[y]];
        if (tx.to == ty.to) continue;
        if (satisfiable(Expr::make_and(tx.label, ty.label))) rep.overlapping.emplace_back(q, out[x], out[y]);
      }
    }
    if (constant_value(disj_all(labels)) != std::optional<bool>(true)) rep.incomplete.push_back(q);
  }
  return rep;
}

Specification normalize(const Specification& a) {
  std::map<std::pair<StateId, StateId>, Expr> merged;
  std::vector<std::pair<StateId, StateId>> order;
  for (const auto& tr : a.transitions()) {
    auto key = std::make_pair(tr.from, tr.to);
    auto it = merged.find(key);
    if (it == merged.end()) {
      merged.emplace(key, tr.label);
      order.push_back(key);
    } else {
      it->second = Expr::make_or(it->second, tr.label);
    }
  }
  std::vector<Transition> trs;
  for (const auto& key : order) trs.push_back({key.first, key.second, merged.at(key)});
  std::vector<Verdict> verdicts;
  for (StateId q = 0; q < a.size(); ++q) verdicts.push_back(a.verdict(q));
  return Specification(a.state_names(), verdicts, a.initial(), trs);
}

StateId step_memory(const Specification& a, StateId q, const Memory& m, bool* stuck) {
  Evaluator ev(m);
  for (std::size_t i : a.outgoing(q)) {
    const Transition& tr = a.transitions()[i];
    if (ev.eval(tr.label) == Verdict::Top) {
      if (stuck) *stuck = false;
      return tr.to;
    }
  }
  if (stuck) *stuck = true;
  return q;
}

StateId step(const Specification& a, StateId q, const Event& e, bool* stuck) {
  if (e.empty()) {
    if (stuck) *stuck = false;
    return q;
  }
  return step_memory(a, q, mem_from_event(e, Encoder::identity()), stuck);
}

StateId run(const Specification& a, const std::vector<Event>& global) {
  StateId q = a.initial();
  for (const Event& e : global) q = step(a, q, e);
  return q;
}

// ---------------------------------------------------------------------------

const Specification& DecentralizedSpec::monitor(const std::string& id) const {
  auto it = monitors.find(id);
  if (it == monitors.end()) throw InvalidSpecification("unknown monitor '" + id + "'");
  return it->second;
}

std::set<std::string> DecentralizedSpec::components() const {
  std::set<std::string> out;
  for (const auto& kv : attach) out.insert(kv.second);
  for (const auto& kv : ap_owner) out.insert(kv.second);
  return out;
}

void check(const DecentralizedSpec& d) {
  if (!d.monitors.count(d.root)) throw InvalidSpecification("root monitor '" + d.root + "' is not declared");
  for (const auto& [id, spec] : d.monitors) {
    if (d.ap_owner.count(id)) throw InvalidSpecification("'" + id + "' names both a monitor and a proposition");
    auto at = d.attach.find(id);
    if (at == d.attach.end()) throw InvalidSpecification("monitor '" + id + "' is not attached");
    for (const Atom& a : spec.label_atoms()) {
      if (a.kind == AtomKind::Plain) {
        auto own = d.ap_owner.find(a.name);
        if (own == d.ap_owner.end())
          throw InvalidSpecification("proposition '" + a.name + "' of monitor '" + id + "' has no owner");
        if (own->second != at->second)
          throw InvalidSpecification("monitor '" + id + "' on " + at->second + " uses proposition '" + a.name +
                                     "' of " + own->second);
      } else if (a.kind == AtomKind::MonRef) {
        if (a.name == id) throw InvalidSpecification("monitor '" + id + "' references itself");
        if (!d.monitors.count(a.name))
          throw InvalidSpecification("monitor '" + id + "' references unknown monitor '" + a.name + "'");
      } else {
        throw InvalidSpecification("labels must not contain stamped atoms");
      }
    }
  }
  for (const auto& kv : d.attach)
    if (!d.monitors.count(kv.first)) throw InvalidSpecification("attachment for unknown monitor '" + kv.first + "'");
}

DecentralizedSpec single_monitor(const Specification& a, const std::string& component, const ApOwner& owner,
                                 const std::string& id) {
  DecentralizedSpec d;
  d.monitors.emplace(id, a);
  d.attach[id] = component;
  d.root = id;
  d.ap_owner = owner;
  return d;
}

namespace {

class DecentralizedRunner {
 public:
  DecentralizedRunner(const DecentralizedSpec& d, const DecentralizedTrace& tr) : d_(d), tr_(tr) {
    for (const auto& [id, spec] : d.monitors) {
      std::set<std::string> refs;
      for (const auto& t : spec.transitions()) {
        auto s = dep(t.label);
        refs.insert(s.begin(), s.end());
      }
      refs_[id] = std::vector<std::string>(refs.begin(), refs.end());
    }
  }

  // State of monitor `id` after running its automaton from round i to the end.
  StateId final_state(const std::string& id, Round i) {
    auto key = std::make_pair(id, i);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    if (!active_.insert(key).second)
      throw RoundBudgetExceeded("monitor references do not terminate at monitor '" + id + "' round " +
                                std::to_string(i));
    const Specification& a = d_.monitor(id);
    const std::string& comp = d_.attach.at(id);
    StateId q = a.initial();
    Round last = std::max<Round>(i, tr_.length());
    for (Round j = i; j <= last; ++j) {
      const Event& e = tr_.event(j, comp);
      if (e.empty()) continue;
      Memory m = mem_from_event(e, Encoder::identity());
      for (const std::string& ref : refs_.at(id)) {
        StateId qr = final_state(ref, j);
        m.set(Atom::monref(0, ref), d_.monitor(ref).verdict(qr));
      }
      q = step_memory(a, q, m);
    }
    active_.erase(key);
    memo_.emplace(key, q);
    return q;
  }

 private:
  const DecentralizedSpec& d_;
  const DecentralizedTrace& tr_;
  std::map<std::string, std::vector<std::string>> refs_;
  std::map<std::pair<std::string, Round>, StateId> memo_;
  std::set<std::pair<std::string, Round>> active_;
};

}  // namespace

Verdict decentralized_run(const DecentralizedSpec& d, const DecentralizedTrace& tr) {
  DecentralizedRunner r(d, tr);
  return d.monitor(d.root).verdict(r.final_state(d.root, 1));
}

std::optional<std::size_t> find_disagreement(const DecentralizedSpec& a, const DecentralizedSpec& b,
                                             const std::vector<DecentralizedTrace>& traces) {
  for (std::size_t i = 0; i < traces.size(); ++i)
    if (decentralized_run(a, traces[i]) != decentralized_run(b, traces[i])) return i;
  return std::nullopt;
}

}  // namespace demon
