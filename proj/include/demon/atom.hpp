#pragma once

#include <compare>
#include <string>

#include "demon/verdict.hpp"

namespace demon {

enum class AtomKind : std::uint8_t { Plain = 0, Timed = 1, MonRef = 2 };

// Ordered by kind, then round, then name.
struct Atom {
  AtomKind kind = AtomKind::Plain;
  Round t = 0;
  std::string name;

  static Atom plain(std::string name) { return {AtomKind::Plain, 0, std::move(name)}; }
  static Atom timed(Round t, std::string name) { return {AtomKind::Timed, t, std::move(name)}; }
  static Atom monref(Round t, std::string id) { return {AtomKind::MonRef, t, std::move(id)}; }

  bool has_round() const { return kind != AtomKind::Plain; }

  auto operator<=>(const Atom&) const = default;
  bool operator==(const Atom&) const = default;
};

// "a", "<3,a>", "@m1", "<3,@m1>".
std::string to_string(const Atom& a);

class Encoder {
 public:
  static Encoder identity() { return Encoder(false, 0); }
  static Encoder timestamp(Round t) { return Encoder(true, t); }

  bool is_identity() const { return !stamped_; }
  Round round() const { return t_; }

  Atom operator()(const Atom& a) const {
    if (!stamped_) return a;
    if (a.kind == AtomKind::Plain) return Atom::timed(t_, a.name);
    if (a.kind == AtomKind::MonRef) return Atom::monref(t_, a.name);
    return a;
  }

 private:
  Encoder(bool stamped, Round t) : stamped_(stamped), t_(t) {}
  bool stamped_;
  Round t_;
};

}  // namespace demon
