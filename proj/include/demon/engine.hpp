#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "demon/analysis.hpp"
#include "demon/ehe.hpp"
#include "demon/ltl.hpp"
#include "demon/metrics.hpp"
#include "demon/synthesis.hpp"

namespace demon {

enum class Algorithm { Orch, Migr, Migrr, Chor };

std::string to_string(Algorithm a);
/// Case-insensitive orch|migr|migrr|chor; throws ParseError otherwise.
Algorithm parse_algorithm(const std::string& s);

struct SimConfig {
  Algorithm algorithm = Algorithm::Orch;
  Round comm_delay = 1;
  std::size_t initial_active = 1;
  Round timeout_slack = 5;
  std::uint64_t seed = 0;
  SizeModel sizes;
};

/// Throws InvalidParameters.
void validate(const SimConfig& cfg);
/// { algorithm, comm_delay, initial_active, timeout_slack, seed }; missing
/// fields keep their defaults.
SimConfig sim_config_from_json(const nlohmann::json& j, SimConfig base = {});
nlohmann::json to_json(const SimConfig& cfg);

struct Message {
  enum class Kind { Mem, Ehe, Verdict, Kill };
  Kind kind = Kind::Mem;
  std::string from;
  std::string to;
  Round sent_at = 0;
  /// Mem: the observations of round `round`.
  Memory memory;
  std::shared_ptr<const EHE> ehe;
  /// Verdict: the verdict of the sender's instance anchored at `round`.
  Round round = 0;
  Verdict verdict = Verdict::Unknown;
};

std::string to_string(Message::Kind k);

/// A centralized automaton (orchestration, migration) or a formula (any
/// algorithm; synthesized when an automaton is needed).
struct SpecInput {
  std::shared_ptr<const Specification> automaton;
  std::optional<Ltl> formula;

  static SpecInput from_spec(Specification a);
  static SpecInput from_ltl(Ltl f);
};

struct MonitorInfo {
  std::string id;
  std::string component;
};

struct Network {
  Graph graph;
  Assignment placement;
  /// Sorted by id.
  std::vector<MonitorInfo> monitors;
  std::shared_ptr<const Specification> automaton;
  std::optional<ChorNetwork> chor;
};

/// Components of the run: system nodes, trace components and proposition
/// owners. An empty system graph stands for the complete digraph on them.
Network setup(const SimConfig& cfg, const SpecInput& input, const Graph& system,
              const std::vector<std::string>& components, const ApOwner& owner);

struct SimRun {
  Algorithm algorithm = Algorithm::Orch;
  Verdict verdict = Verdict::Unknown;
  Round stop_round = 0;
  bool timed_out = false;
  MetricsRecord metrics;
};

/// Runs rounds 1..length+timeout_slack, stopping at the first reported final
/// verdict. Messages sent at t are delivered at t + comm_delay, ordered by
/// sender name. `owner` defaults to the trace's proposition owners.
SimRun simulate(const SimConfig& cfg, const SpecInput& input, const Graph& system, const DecentralizedTrace& tr,
                const std::optional<ApOwner>& owner = std::nullopt);

nlohmann::json to_json(const SimRun& run);

}  // namespace demon
