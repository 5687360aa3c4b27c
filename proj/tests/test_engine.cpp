#include <doctest.h>

#include "demon/engine.hpp"
#include "demon/error.hpp"
#include "support/automata.hpp"
#include "support/ltl_gen.hpp"

using namespace demon;
using namespace demon::testing;

namespace {

SimConfig config(Algorithm a, Round delay = 1, std::size_t active = 1) {
  SimConfig cfg;
  cfg.algorithm = a;
  cfg.comm_delay = delay;
  cfg.initial_active = active;
  return cfg;
}

// First round at which the centralized run is in a final state (0 for the
// initial state), with its verdict.
std::pair<Round, Verdict> first_final(const Specification& a, const DecentralizedTrace& tr) {
  StateId q = a.initial();
  if (is_final(a.verdict(q))) return {0, a.verdict(q)};
  auto global = reconstruct_global(tr);
  for (std::size_t i = 0; i < global.size(); ++i) {
    q = step(a, q, global[i]);
    if (is_final(a.verdict(q))) return {static_cast<Round>(i + 1), a.verdict(q)};
  }
  return {0, Verdict::Unknown};
}

Verdict progression_verdict(Ltl f, const DecentralizedTrace& tr) {
  f = canonicalize(f);
  for (const Event& e : reconstruct_global(tr)) {
    f = progress(f, [&](const Atom& a) { return e.obs.at(a.name); });
  }
  return f.is_true() ? Verdict::Top : f.is_false() ? Verdict::Bottom : Verdict::Unknown;
}

std::size_t count_kind(const SimRun& r, const std::string& kind) {
  std::size_t n = 0;
  for (const auto& m : r.metrics.messages) n += m.kind == kind ? 1 : 0;
  return n;
}

const std::map<std::string, std::vector<std::string>> kAps = {{"A", {"a0", "a1"}}, {"B", {"b0"}}, {"C", {"c0"}}};

std::vector<Atom> plain_aps() {
  std::vector<Atom> out;
  for (const auto& [c, aps] : kAps)
    for (const auto& ap : aps) out.push_back(Atom::plain(ap));
  return out;
}

}  // namespace

TEST_CASE("algorithm names") {
  CHECK(parse_algorithm("ORCH") == Algorithm::Orch);
  CHECK(parse_algorithm("migrr") == Algorithm::Migrr);
  CHECK(to_string(Algorithm::Chor) == "chor");
  CHECK_THROWS_AS(parse_algorithm("gossip"), ParseError);
}

TEST_CASE("simulation configuration") {
  SimConfig cfg = sim_config_from_json({{"algorithm", "migr"}, {"comm_delay", 3}});
  CHECK(cfg.algorithm == Algorithm::Migr);
  CHECK(cfg.comm_delay == 3);
  CHECK(cfg.timeout_slack == 5);
  CHECK(sim_config_from_json(to_json(cfg)).comm_delay == 3);
  CHECK_THROWS_AS(sim_config_from_json({{"comm_delay", 0}}), ParseError);
  CHECK_THROWS_AS(sim_config_from_json({{"comm_delay", "x"}}), ParseError);
  SimConfig bad;
  bad.initial_active = 0;
  CHECK_THROWS_AS(validate(bad), InvalidParameters);
}

TEST_CASE("orchestration on F(a or b)") {
  SimRun r = simulate(config(Algorithm::Orch), SpecInput::from_spec(eventually_a_or_b()), {}, two_round_trace());
  CHECK(r.verdict == Verdict::Top);
  CHECK(r.stop_round == 2);
  CHECK_FALSE(r.timed_out);
  REQUIRE(r.metrics.messages.size() == 2);
  CHECK(r.metrics.messages[0].from == "B");
  CHECK(r.metrics.messages[0].to == "A");
  CHECK(r.metrics.messages[0].bytes == 6);
  CHECK(r.metrics.rounds.size() == 2);
  CHECK(r.metrics.delays == std::vector<Round>{1});
}

TEST_CASE("orchestration sends one memory per forwarder and round") {
  Rng rng(5);
  DecentralizedTrace tr = random_trace(rng, kAps, 6);
  SimRun r = simulate(config(Algorithm::Orch), SpecInput::from_spec(no_final_verdict()), {}, tr);
  CHECK(r.timed_out);
  CHECK(r.verdict == Verdict::Unknown);
  CHECK(r.stop_round == 11);
  CHECK(count_kind(r, "mem") == 2 * 11);
}

TEST_CASE("orchestration stops comm_delay rounds after the deciding round") {
  Rng rng(17);
  for (int i = 0; i < 150; ++i) {
    Specification a = random_monitorable_spec(rng, 2 + pick(rng, 4), plain_aps());
    DecentralizedTrace tr = random_trace(rng, kAps, 1 + pick(rng, 8));
    Round delay = 1 + pick(rng, 3);
    SimRun r = simulate(config(Algorithm::Orch, delay), SpecInput::from_spec(a), {}, tr);
    auto [k, v] = first_final(a, tr);
    CHECK(r.verdict == v);
    if (k == 0 && is_final(v)) {
      CHECK(r.stop_round == 1);
    } else if (is_final(v)) {
      CHECK(r.stop_round == k + delay);
    } else {
      CHECK(r.timed_out);
    }
  }
}

TEST_CASE("migration verdicts match the centralized run") {
  Rng rng(23);
  for (Algorithm alg : {Algorithm::Migr, Algorithm::Migrr}) {
    for (int i = 0; i < 120; ++i) {
      Specification a = random_monitorable_spec(rng, 2 + pick(rng, 4), plain_aps());
      DecentralizedTrace tr = random_trace(rng, kAps, 1 + pick(rng, 8));
      std::size_t active = 1 + pick(rng, 3);
      Round delay = 1 + pick(rng, 2);
      SimRun r = simulate(config(alg, delay, active), SpecInput::from_spec(a), {}, tr);
      auto [k, v] = first_final(a, tr);
      if (r.timed_out) {
        CHECK_MESSAGE(!is_final(v), to_string(alg) << " k=" << k << " n=" << tr.length() << " d=" << delay << " m=" << active << " i=" << i);
      } else {
        CHECK(r.verdict == v);
        CHECK(r.stop_round >= std::max<Round>(k, 1));
      }
      for (std::size_t n : r.metrics.active) CHECK(n <= active);
    }
  }
}

TEST_CASE("round-robin migration moves every round") {
  Rng rng(2);
  DecentralizedTrace tr = random_trace(rng, kAps, 5);
  SimRun r = simulate(config(Algorithm::Migrr), SpecInput::from_spec(no_final_verdict()), {}, tr);
  CHECK(r.timed_out);
  CHECK(count_kind(r, "ehe") == r.stop_round);
  for (std::size_t i = 0; i < r.metrics.active.size(); ++i) CHECK(r.metrics.active[i] == 0);
}

TEST_CASE("migration decides a trivially true property in round one") {
  Specification yes = make_spec({"q0", "q1"}, {Verdict::Unknown, Verdict::Top}, {{"q0", "q1", "true"}, {"q1", "q1", "true"}});
  SimRun r = simulate(config(Algorithm::Migr), SpecInput::from_spec(yes), {}, two_round_trace());
  CHECK(r.verdict == Verdict::Top);
  CHECK(r.stop_round == 1);
  Specification now = make_spec({"q0"}, {Verdict::Bottom}, {{"q0", "q0", "true"}});
  CHECK(simulate(config(Algorithm::Orch), SpecInput::from_spec(now), {}, two_round_trace()).stop_round == 1);
}

TEST_CASE("choreography on a single component") {
  DecentralizedTrace tr({"A"});
  tr.observe(1, "A", "a", false);
  tr.observe(2, "A", "a", true);
  SimRun r = simulate(config(Algorithm::Chor), SpecInput::from_ltl(parse_ltl("F a")), {}, tr);
  CHECK(r.verdict == Verdict::Top);
  CHECK(r.stop_round == 2);
  CHECK(r.metrics.messages.empty());
}

TEST_CASE("choreography with a child monitor") {
  DecentralizedTrace tr({"A", "B"});
  tr.observe(1, "A", "a0", false);
  tr.observe(1, "B", "b0", false);
  tr.observe(2, "A", "a0", false);
  tr.observe(2, "B", "b0", true);
  SimRun r = simulate(config(Algorithm::Chor), SpecInput::from_ltl(parse_ltl("F (a0 || b0)")), {}, tr);
  CHECK(r.verdict == Verdict::Top);
  CHECK(count_kind(r, "verdict") >= 1);
  CHECK_THROWS_AS(simulate(config(Algorithm::Chor), SpecInput::from_spec(eventually_a_or_b()), {}, tr), InvalidParameters);
}

TEST_CASE("choreography final verdicts agree with progression") {
  Rng rng(31);
  std::vector<std::string> aps = {"a0", "a1", "b0", "c0"};
  std::size_t decided = 0;
  for (int i = 0; i < 120; ++i) {
    Ltl f = random_ltl(rng, aps, 3);
    DecentralizedTrace tr = random_trace(rng, kAps, 1 + pick(rng, 6));
    SimRun r;
    try {
      r = simulate(config(Algorithm::Chor, 1 + pick(rng, 2)), SpecInput::from_ltl(f), {}, tr);
    } catch (const ThresholdExceeded&) {
      continue;
    }
    if (r.timed_out) continue;
    ++decided;
    CHECK_MESSAGE(r.verdict == progression_verdict(f, tr), to_string(f));
  }
  CHECK(decided > 20);
}

TEST_CASE("placement must fit the system graph") {
  Graph sys;
  sys.nodes = {"A", "B"};
  CHECK_THROWS_AS(simulate(config(Algorithm::Orch), SpecInput::from_spec(eventually_a_or_b()), sys, two_round_trace()),
                  IncompatiblePlacement);
  sys.add_edge("B", "A");
  CHECK(simulate(config(Algorithm::Orch), SpecInput::from_spec(eventually_a_or_b()), sys, two_round_trace()).verdict == Verdict::Top);
}

TEST_CASE("simulation is deterministic") {
  Rng rng(8);
  DecentralizedTrace tr = random_trace(rng, kAps, 8);
  Specification a = random_monitorable_spec(rng, 4, plain_aps());
  for (Algorithm alg : {Algorithm::Orch, Algorithm::Migr, Algorithm::Migrr}) {
    SimRun x = simulate(config(alg, 2, 2), SpecInput::from_spec(a), {}, tr);
    SimRun y = simulate(config(alg, 2, 2), SpecInput::from_spec(a), {}, tr);
    CHECK(to_json(x) == to_json(y));
    CHECK(to_json(x.metrics) == to_json(y.metrics));
  }
}

TEST_CASE("every monitor has counters for every round") {
  Rng rng(4);
  DecentralizedTrace tr = random_trace(rng, kAps, 4);
  SimRun r = simulate(config(Algorithm::Migr), SpecInput::from_spec(no_final_verdict()), {}, tr);
  REQUIRE(r.metrics.rounds.size() == r.stop_round);
  for (const auto& round : r.metrics.rounds) CHECK(round.size() == 3);
}
