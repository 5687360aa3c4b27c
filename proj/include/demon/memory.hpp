#pragma once

#include <map>
#include <string>

#include "demon/atom.hpp"
#include "demon/dict.hpp"

namespace demon {

/// Observations of one component (or a whole round) at a single timestamp.
struct Event {
  std::map<std::string, bool> obs;

  bool empty() const { return obs.empty(); }
  bool operator==(const Event&) const = default;
};

enum class MergeMode { Lenient, Strict };

/// Partial map from atoms to verdicts. Merging keeps the more informative
/// value under ? < bottom < top.
class Memory {
 public:
  Memory() = default;

  Verdict query(const Atom& a) const {
    const Verdict* v = d_.find(a);
    return v ? *v : Verdict::Unknown;
  }
  bool contains(const Atom& a) const { return d_.contains(a); }
  void set(const Atom& a, Verdict v) { d_.set(a, v); }

  /// In-place merge. Strict mode throws ConflictingObservation on top/bottom clashes.
  void merge(const Memory& other, MergeMode mode = MergeMode::Lenient);
  static Memory merged(const Memory& a, const Memory& b, MergeMode mode = MergeMode::Lenient);

  /// Drops stamped atoms with round < t.
  std::size_t purge_before(Round t);

  bool empty() const { return d_.empty(); }
  std::size_t size() const { return d_.size(); }
  auto begin() const { return d_.begin(); }
  auto end() const { return d_.end(); }
  const Dict<Atom, Verdict>& dict() const { return d_; }

  bool operator==(const Memory&) const = default;

 private:
  Dict<Atom, Verdict> d_;
};

Verdict merge_verdict(Verdict a, Verdict b, MergeMode mode = MergeMode::Lenient);

Memory mem_from_event(const Event& e, const Encoder& enc);

std::string to_string(const Memory& m);

}  // namespace demon
