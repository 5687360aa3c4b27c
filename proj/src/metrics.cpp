#include "demon/metrics.hpp"

#include <algorithm>
#include <unordered_set>

namespace demon {

std::size_t size_of(const Atom& a, const SizeModel& sm) {
  return (a.has_round() ? sm.int_bytes : 0) + sm.char_bytes * a.name.size();
}

std::size_t size_of(const Expr& e, const SizeModel& sm) {
  std::unordered_set<const void*> seen;
  std::vector<const Expr*> stack{&e};
  std::size_t total = 0;
  while (!stack.empty()) {
    const Expr* x = stack.back();
    stack.pop_back();
    if (!seen.insert(x->id()).second) continue;
    switch (x->op()) {
      case Expr::Op::Const: total += sm.verdict_bytes; break;
      case Expr::Op::Atom: total += size_of(x->atom(), sm); break;
      case Expr::Op::Not:
        total += 1;
        stack.push_back(&x->lhs());
        break;
      case Expr::Op::And:
      case Expr::Op::Or:
        total += 1;
        stack.push_back(&x->lhs());
        stack.push_back(&x->rhs());
        break;
    }
  }
  return total;
}

std::size_t size_of(const Memory& m, const SizeModel& sm) {
  std::size_t total = 0;
  for (const auto& [a, v] : m) total += size_of(a, sm) + sm.verdict_bytes;
  return total;
}

std::size_t size_of(const EHE& p, const SizeModel& sm) {
  std::size_t total = 0;
  for (const auto& [k, e] : p.entries()) total += 2 * sm.int_bytes + size_of(e, sm);
  return total;
}

std::size_t verdict_message_size(const std::string& id, const SizeModel& sm) {
  return sm.char_bytes * id.size() + sm.int_bytes + sm.verdict_bytes;
}

std::size_t kill_message_size(const std::string& id, const SizeModel& sm) { return sm.char_bytes * id.size(); }

MonitorCounters& MetricsRecord::at(Round t, const std::string& monitor, const std::string& component) {
  if (rounds.size() < t) rounds.resize(t);
  auto& c = rounds[t - 1][monitor];
  c.component = component;
  return c;
}

double convergence(const MetricsRecord& rec, Counter counter) {
  if (rec.run_length == 0 || rec.components.empty()) return 0;
  double k = static_cast<double>(rec.components.size());
  double sum = 0;
  for (const auto& round : rec.rounds) {
    std::map<std::string, double> per_comp;
    for (const auto& c : rec.components) per_comp[c] = 0;
    double total = 0;
    for (const auto& [id, mc] : round) {
      double v = static_cast<double>(counter == Counter::Simplifications ? mc.simplifications : mc.evaluations);
      per_comp[mc.component] += v;
      total += v;
    }
    if (total == 0) continue;
    for (const auto& [c, v] : per_comp) {
      double d = v / total - 1.0 / k;
      sum += d * d;
    }
  }
  return sum / static_cast<double>(rec.run_length);
}

Summary summarize(const MetricsRecord& rec) {
  Summary s;
  s.run_length = rec.run_length;
  s.verdict = rec.verdict;
  if (!rec.delays.empty()) {
    double total = 0;
    for (Round d : rec.delays) total += d;
    s.delay = total / static_cast<double>(rec.delays.size());
  }
  double msgs = 0, data = 0, crit = 0;
  for (const auto& round : rec.rounds) {
    std::uint64_t peak = 0;
    for (const auto& [id, mc] : round) {
      msgs += static_cast<double>(mc.messages);
      data += static_cast<double>(mc.bytes);
      peak = std::max(peak, mc.simplifications);
    }
    crit += static_cast<double>(peak);
    s.s_max = std::max(s.s_max, peak);
  }
  if (rec.run_length > 0) {
    double n = static_cast<double>(rec.run_length);
    s.msgs = msgs / n;
    s.data = data / n;
    s.s_crit = crit / n;
  }
  s.conv = convergence(rec);
  return s;
}

nlohmann::json to_json(const Summary& s) {
  return {{"verdict", to_string(s.verdict)}, {"run_length", s.run_length}, {"delay", s.delay},
          {"msgs", s.msgs},                   {"data", s.data},             {"s_crit", s.s_crit},
          {"s_max", s.s_max},                 {"conv", s.conv}};
}

nlohmann::json to_json(const MetricsRecord& rec) {
  nlohmann::json rounds = nlohmann::json::array();
  for (std::size_t i = 0; i < rec.rounds.size(); ++i) {
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [id, mc] : rec.rounds[i])
      r[id] = {{"component", mc.component},
               {"simplifications", mc.simplifications},
               {"evaluations", mc.evaluations},
               {"messages", mc.messages},
               {"bytes", mc.bytes}};
    rounds.push_back({{"t", i + 1}, {"monitors", r}});
  }
  return {{"components", rec.components}, {"rounds", rounds}, {"delays", rec.delays},
          {"summary", to_json(summarize(rec))}};
}

}  // namespace demon
