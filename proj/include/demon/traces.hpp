#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "demon/trace.hpp"

namespace demon {

enum class Distribution { Normal, Binomial, Beta };

struct TraceGenConfig {
  std::size_t components = 3;
  std::size_t aps_per_component = 2;
  Round length = 60;
  Distribution distribution = Distribution::Binomial;
  /// Normal: mean, variance. Binomial: n, p. Beta: alpha, beta.
  double param1 = 100;
  double param2 = 0.3;
  std::uint64_t seed = 0;
};

/// Throws InvalidParameters for out-of-range fields.
void validate(const TraceGenConfig& cfg);

/// A, B, ..., Z, then C26, C27, ...
std::string component_name(std::size_t i);
/// Lower-cased component name followed by the index: a0, a1, b0, ...
std::string ap_name(std::size_t component, std::size_t i);

/// Each component observes each of its propositions every round. Normal and
/// beta draws map to true above 0.5; binomial maps to true with probability p.
DecentralizedTrace generate(const TraceGenConfig& cfg);

/// CSV with header `t,component,ap,value`, values 0|1, rounds from 1.
void store(const DecentralizedTrace& tr, std::ostream& out);
void store(const DecentralizedTrace& tr, const std::filesystem::path& path);
/// ParseError (with line number) on malformed input; ConflictingObservation
/// when two components observe the same proposition or a row contradicts an
/// earlier one.
DecentralizedTrace load(std::istream& in);
DecentralizedTrace load(const std::filesystem::path& path);

/// { components, aps_per_component, length, distribution:"normal|binomial|beta",
///   params:[p1,p2], seed }
TraceGenConfig trace_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const TraceGenConfig& cfg);

}  // namespace demon
