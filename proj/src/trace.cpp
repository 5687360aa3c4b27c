#include "demon/trace.hpp"

#include <algorithm>

#include "demon/error.hpp"

namespace demon {

DecentralizedTrace::DecentralizedTrace(std::vector<std::string> components, Round length)
    : components_(std::move(components)), rounds_(length) {
  std::sort(components_.begin(), components_.end());
  components_.erase(std::unique(components_.begin(), components_.end()), components_.end());
}

const Event& DecentralizedTrace::event(Round t, const std::string& component) const {
  static const Event empty;
  if (t == 0 || t > rounds_.size()) return empty;
  const auto& r = rounds_[t - 1];
  auto it = r.find(component);
  return it == r.end() ? empty : it->second;
}

void DecentralizedTrace::add_component(const std::string& component) {
  auto it = std::lower_bound(components_.begin(), components_.end(), component);
  if (it == components_.end() || *it != component) components_.insert(it, component);
}

void DecentralizedTrace::resize(Round length) { rounds_.resize(length); }

void DecentralizedTrace::set_event(Round t, const std::string& component, Event e) {
  if (t == 0) throw InvalidParameters("rounds start at 1");
  add_component(component);
  if (t > rounds_.size()) rounds_.resize(t);
  if (e.empty())
    rounds_[t - 1].erase(component);
  else
    rounds_[t - 1][component] = std::move(e);
}

void DecentralizedTrace::observe(Round t, const std::string& component, const std::string& ap, bool value) {
  if (t == 0) throw InvalidParameters("rounds start at 1");
  add_component(component);
  if (t > rounds_.size()) rounds_.resize(t);
  rounds_[t - 1][component].obs[ap] = value;
}

DecentralizedTrace DecentralizedTrace::prefix(Round k) const {
  DecentralizedTrace out = *this;
  if (k < out.rounds_.size()) out.rounds_.resize(k);
  return out;
}

std::vector<Event> reconstruct_global(const DecentralizedTrace& tr) {
  std::vector<Event> out(tr.length());
  for (Round t = 1; t <= tr.length(); ++t) {
    Event& g = out[t - 1];
    for (const auto& c : tr.components()) {
      for (const auto& [ap, v] : tr.event(t, c).obs) {
        if (!g.obs.emplace(ap, v).second)
          throw ConflictingObservation("proposition '" + ap + "' observed by two components at round " +
                                       std::to_string(t));
      }
    }
  }
  return out;
}

ApOwner ap_owner(const DecentralizedTrace& tr) {
  ApOwner owner;
  for (Round t = 1; t <= tr.length(); ++t) {
    for (const auto& c : tr.components()) {
      for (const auto& kv : tr.event(t, c).obs) {
        auto [it, inserted] = owner.emplace(kv.first, c);
        if (!inserted && it->second != c)
          throw ConflictingObservation("proposition '" + kv.first + "' observed by " + it->second + " and " + c);
      }
    }
  }
  return owner;
}

std::vector<DecentralizedTrace> enumerate_traces(const std::map<std::string, std::vector<std::string>>& aps_by_component,
                                                 Round max_length) {
  std::vector<std::pair<std::string, std::string>> slots;  // (component, ap)
  std::vector<std::string> comps;
  for (const auto& [c, aps] : aps_by_component) {
    comps.push_back(c);
    for (const auto& ap : aps) slots.emplace_back(c, ap);
  }
  if (slots.size() > 20) throw ThresholdExceeded("too many propositions to enumerate");
  std::vector<DecentralizedTrace> out;
  std::vector<DecentralizedTrace> layer{DecentralizedTrace(comps, 0)};
  out.push_back(layer.front());
  const std::uint64_t per_round = std::uint64_t{1} << slots.size();
  for (Round len = 1; len <= max_length; ++len) {
    std::vector<DecentralizedTrace> next;
    next.reserve(layer.size() * per_round);
    for (const auto& base : layer) {
      for (std::uint64_t bits = 0; bits < per_round; ++bits) {
        DecentralizedTrace tr = base;
        tr.resize(len);
        for (std::size_t i = 0; i < slots.size(); ++i)
          tr.observe(len, slots[i].first, slots[i].second, (bits >> i) & 1U);
        next.push_back(std::move(tr));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

}  // namespace demon
