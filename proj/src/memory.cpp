#include "demon/memory.hpp"

#include <algorithm>

#include "demon/error.hpp"

namespace demon {

bool parse_verdict(std::string_view text, Verdict& out) {
  if (text == "top" || text == "T" || text == "1" || text == "true") {
    out = Verdict::Top;
  } else if (text == "bottom" || text == "F" || text == "0" || text == "false") {
    out = Verdict::Bottom;
  } else if (text == "unknown" || text == "?") {
    out = Verdict::Unknown;
  } else {
    return false;
  }
  return true;
}

std::string to_string(const Atom& a) {
  switch (a.kind) {
    case AtomKind::Plain:
      return a.name;
    case AtomKind::Timed:
      return "<" + std::to_string(a.t) + "," + a.name + ">";
    case AtomKind::MonRef:
      if (a.t == 0) return "@" + a.name;
      return "<" + std::to_string(a.t) + ",@" + a.name + ">";
  }
  return a.name;
}

Verdict merge_verdict(Verdict a, Verdict b, MergeMode mode) {
  if (mode == MergeMode::Strict && is_final(a) && is_final(b) && a != b)
    throw ConflictingObservation("conflicting final verdicts in memory merge");
  return std::max(a, b);
}

void Memory::merge(const Memory& other, MergeMode mode) {
  d_ = Dict<Atom, Verdict>::merge(d_, other.d_,
                                  [mode](Verdict a, Verdict b) { return merge_verdict(a, b, mode); });
}

Memory Memory::merged(const Memory& a, const Memory& b, MergeMode mode) {
  Memory out = a;
  out.merge(b, mode);
  return out;
}

std::size_t Memory::purge_before(Round t) {
  return d_.erase_if([t](const Atom& a, Verdict) { return a.has_round() && a.t < t; });
}

Memory mem_from_event(const Event& e, const Encoder& enc) {
  Memory m;
  for (const auto& [ap, v] : e.obs) m.set(enc(Atom::plain(ap)), from_bool(v));
  return m;
}

std::string to_string(const Memory& m) {
  std::string s = "[";
  bool first = true;
  for (const auto& [a, v] : m) {
    if (!first) s += ", ";
    first = false;
    s += to_string(a);
    s += " -> ";
    s += to_string(v);
  }
  return s + "]";
}

}  // namespace demon
