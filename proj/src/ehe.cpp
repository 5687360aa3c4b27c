#include "demon/ehe.hpp"

#include "demon/error.hpp"

namespace demon {

EHE::EHE(std::shared_ptr<const Specification> a) : a_(std::move(a)) {
  if (!a_) throw InvalidParameters("encoding needs an automaton");
}

EHE EHE::init(std::shared_ptr<const Specification> a) {
  EHE p(std::move(a));
  p.set(0, p.automaton().initial(), Expr::top());
  return p;
}

const Expr* EHE::find(Round t, StateId q) const {
  auto it = m_.find({t, q});
  return it == m_.end() ? nullptr : &it->second;
}

void EHE::set(Round t, StateId q, Expr e) { m_.insert_or_assign({t, q}, std::move(e)); }

std::set<Round> EHE::rounds() const {
  std::set<Round> out;
  for (const auto& kv : m_) out.insert(kv.first.t);
  return out;
}

Round EHE::min_round() const {
  if (m_.empty()) throw UndefinedRound("empty encoding");
  return m_.begin()->first.t;
}

Round EHE::max_round() const {
  if (m_.empty()) throw UndefinedRound("empty encoding");
  return m_.rbegin()->first.t;
}

std::set<StateId> next(const EHE& p, Round t) {
  std::set<StateId> out;
  for (auto it = p.entries().lower_bound({t, 0}); it != p.entries().end() && it->first.t == t; ++it)
    out.insert(it->first.q);
  return out;
}

Expr to(const EHE& p, Round t, StateId q2, const Encoder& enc) {
  const Specification& a = p.automaton();
  std::vector<Expr> parts;
  for (auto it = p.entries().lower_bound({t, 0}); it != p.entries().end() && it->first.t == t; ++it) {
    for (std::size_t i : a.outgoing(it->first.q)) {
      const Transition& tr = a.transitions()[i];
      if (tr.to == q2) parts.push_back(conj(it->second, encode(tr.label, enc)));
    }
  }
  Expr out = Expr::bottom();
  for (const Expr& e : parts) out = disj(out, e);
  return out;
}

EHE mov(const EHE& p, Round ts, Round te) {
  if (next(p, ts).empty()) throw UndefinedRound("no entries at round " + std::to_string(ts));
  EHE out = p;
  const Specification& a = p.automaton();
  for (Round t = ts; t < te; ++t) {
    const Encoder enc = Encoder::timestamp(t + 1);
    std::map<StateId, Expr> fresh;
    for (auto it = out.entries().lower_bound({t, 0}); it != out.entries().end() && it->first.t == t; ++it) {
      for (std::size_t i : a.outgoing(it->first.q)) {
        const Transition& tr = a.transitions()[i];
        Expr e = conj(it->second, encode(tr.label, enc));
        auto [slot, inserted] = fresh.emplace(tr.to, e);
        if (!inserted) slot->second = disj(slot->second, e);
      }
    }
    for (auto& [q, e] : fresh) {
      if (e.is_bottom()) continue;
      const Expr* prev = out.find(t + 1, q);
      out.set(t + 1, q, prev ? disj(*prev, e) : e);
    }
  }
  return out;
}

std::vector<StateId> states_reached(const EHE& p, const Memory& m, Round t, EvalStats* stats) {
  Evaluator ev(m, stats);
  std::vector<StateId> out;
  for (auto it = p.entries().lower_bound({t, 0}); it != p.entries().end() && it->first.t == t; ++it)
    if (ev.eval(it->second) == Verdict::Top) out.push_back(it->first.q);
  return out;
}

std::optional<StateId> sreach(const EHE& p, const Memory& m, Round t, EvalStats* stats) {
  Evaluator ev(m, stats);
  for (auto it = p.entries().lower_bound({t, 0}); it != p.entries().end() && it->first.t == t; ++it)
    if (ev.eval(it->second) == Verdict::Top) return it->first.q;
  return std::nullopt;
}

Verdict verdict_at(const EHE& p, const Memory& m, Round t, EvalStats* stats) {
  auto q = sreach(p, m, t, stats);
  return q ? p.automaton().verdict(*q) : Verdict::Unknown;
}

EHE merge(const EHE& a, const EHE& b) {
  if (a.automaton_ptr() != b.automaton_ptr())
    throw AutomatonMismatch("merging encodings of different automata");
  EHE out = a;
  for (const auto& [k, e] : b.entries()) {
    const Expr* prev = out.find(k.t, k.q);
    out.set(k.t, k.q, prev ? disj(*prev, e) : e);
  }
  return out;
}

EHE inc(const EHE& p, const Memory& m, EvalStats* stats) {
  Evaluator ev(m, stats);
  EHE out(p.automaton_ptr());
  for (const auto& [k, e] : p.entries()) out.set(k.t, k.q, ev.simplify(e));
  return out;
}

std::optional<Resolved> last_resolved(const EHE& p, const Memory& m, EvalStats* stats) {
  if (p.empty()) return std::nullopt;
  Evaluator ev(m, stats);
  auto rounds = p.rounds();
  for (auto r = rounds.rbegin(); r != rounds.rend(); ++r) {
    for (auto it = p.entries().lower_bound({*r, 0}); it != p.entries().end() && it->first.t == *r; ++it)
      if (ev.eval(it->second) == Verdict::Top) return Resolved{*r, it->first.q};
  }
  return std::nullopt;
}

EHE drop_resolved_at(const EHE& p, Resolved r) {
  EHE out(p.automaton_ptr());
  for (const auto& [k, e] : p.entries())
    if (k.t > r.t) out.set(k.t, k.q, e);
  out.set(r.t, r.q, Expr::top());
  return out;
}

EHE drop_resolved(const EHE& p, const Memory& m, EvalStats* stats) {
  auto r = last_resolved(p, m, stats);
  return r ? drop_resolved_at(p, *r) : p;
}

std::string dump(const EHE& p) {
  std::string out = "t\tq\texpression\n";
  for (const auto& [k, e] : p.entries()) {
    out += std::to_string(k.t);
    out += '\t';
    out += p.automaton().name(k.q);
    out += '\t';
    out += to_string(e);
    out += '\n';
  }
  return out;
}

}  // namespace demon
