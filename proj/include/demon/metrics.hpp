#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "demon/ehe.hpp"

namespace demon {

struct SizeModel {
  std::size_t char_bytes = 1;
  std::size_t int_bytes = 4;
  std::size_t verdict_bytes = 1;
};

/// Round (if stamped) plus one character per name letter.
std::size_t size_of(const Atom& a, const SizeModel& sm = {});
/// Distinct nodes of the expression: atoms at atom size, constants at
/// verdict size, one byte per operator.
std::size_t size_of(const Expr& e, const SizeModel& sm = {});
/// Sum over entries of atom size plus verdict size.
std::size_t size_of(const Memory& m, const SizeModel& sm = {});
/// Sum over entries of two integers (round, state) plus the expression size.
std::size_t size_of(const EHE& p, const SizeModel& sm = {});
std::size_t verdict_message_size(const std::string& id, const SizeModel& sm = {});
std::size_t kill_message_size(const std::string& id, const SizeModel& sm = {});

struct MonitorCounters {
  std::string component;
  std::uint64_t simplifications = 0;
  std::uint64_t evaluations = 0;
  std::uint64_t messages = 0;
  std::uint64_t bytes = 0;
};

struct MessageSample {
  Round t = 0;
  std::string kind;
  std::string from;
  std::string to;
  std::size_t bytes = 0;
};

struct GcSample {
  Round t = 0;
  /// Round whose state was resolved before collecting.
  Round resolved = 0;
  std::size_t entries = 0;
  /// max_round - min_round + 1 of the encoding after collection.
  Round span = 0;
  std::size_t states = 0;
};

struct MetricsRecord {
  std::vector<std::string> components;
  /// Index t-1; keyed by monitor id.
  std::vector<std::map<std::string, MonitorCounters>> rounds;
  /// Rounds between an observation round and the round its state became known.
  std::vector<Round> delays;
  std::vector<MessageSample> messages;
  std::vector<GcSample> gc;
  /// Active migration monitors per round (migration only).
  std::vector<std::size_t> active;
  Round run_length = 0;
  Verdict verdict = Verdict::Unknown;

  MonitorCounters& at(Round t, const std::string& monitor, const std::string& component);
};

enum class Counter { Simplifications, Evaluations };

/// (1/n) sum_t sum_c (s_t_c / s_t - 1/|C|)^2 over the run's components; rounds
/// with s_t = 0 contribute 0.
double convergence(const MetricsRecord& rec, Counter counter = Counter::Simplifications);

struct Summary {
  double delay = 0;
  /// Messages and bytes per round.
  double msgs = 0;
  double data = 0;
  /// Per-round maximum over monitors, summed and divided by run length.
  double s_crit = 0;
  /// Maximum over monitors and rounds.
  std::uint64_t s_max = 0;
  double conv = 0;
  Round run_length = 0;
  Verdict verdict = Verdict::Unknown;
};

Summary summarize(const MetricsRecord& rec);
nlohmann::json to_json(const Summary& s);
nlohmann::json to_json(const MetricsRecord& rec);

}  // namespace demon
