#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace demon {

using Round = std::uint32_t;

// Enumerator order is the information order used by memory merge: ? < bottom < top.
enum class Verdict : std::uint8_t { Unknown = 0, Bottom = 1, Top = 2 };

inline bool is_final(Verdict v) { return v != Verdict::Unknown; }

inline Verdict from_bool(bool b) { return b ? Verdict::Top : Verdict::Bottom; }

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Top:
      return "top";
    case Verdict::Bottom:
      return "bottom";
    default:
      return "unknown";
  }
}

// Accepts "top"/"bottom"/"unknown" and the short forms T/F/?, 1/0.
bool parse_verdict(std::string_view text, Verdict& out);

}  // namespace demon
