#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "demon/engine.hpp"
#include "demon/traces.hpp"

namespace demon {

/// A formula (`.ltl` text file, or JSON `{ "ltl": ... }`) or a centralized
/// automaton JSON file.
SpecInput load_spec_input(const std::filesystem::path& path);

struct NamedSpec {
  std::string name;
  SpecInput input;
};

struct NamedTraceSource {
  std::string name;
  /// Either a CSV file or a generator configuration.
  std::optional<std::filesystem::path> file;
  std::optional<TraceGenConfig> generated;
};

/// Expands generator entries (a TraceGenConfig object plus optional `count`
/// and `name`, or an array of them) into named configurations. Copy i of an
/// entry uses seed + i.
std::vector<std::pair<std::string, TraceGenConfig>> expand_generators(const nlohmann::json& j);

struct ExperimentConfig {
  std::vector<NamedSpec> specs;
  std::vector<NamedTraceSource> traces;
  std::vector<Algorithm> algorithms;
  Graph system;
  nlohmann::json sim = nlohmann::json::object();
  std::optional<std::filesystem::path> output;
};

/// { specs:[path | {name, ltl} | {name, file}], traces:[csv paths],
///   trace_dir:dir, generate:[generator entries], algorithms:[names],
///   system:graph | path, sim:{SimConfig fields}, output:path }.
/// Relative paths resolve against `base`. Throws ParseError.
ExperimentConfig experiment_from_json(const nlohmann::json& j, const std::filesystem::path& base);

struct ExperimentRow {
  std::string spec;
  std::string trace;
  Algorithm algorithm = Algorithm::Orch;
  SimRun run;
};

/// Header plus one line per row: spec, trace, algorithm, verdict,
/// stop_round, timed_out and the summary metrics.
std::string rows_to_csv(const std::vector<ExperimentRow>& rows);
nlohmann::json rows_to_json(const std::vector<ExperimentRow>& rows);

/// Entry point of the `demon` tool. Returns the process exit code: 0 on
/// success (or when a check holds), 1 when a check fails, 2 on input errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace demon
