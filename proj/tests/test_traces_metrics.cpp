#include <doctest.h>

#include <sstream>

#include "demon/error.hpp"
#include "demon/metrics.hpp"
#include "demon/traces.hpp"

using namespace demon;

namespace {

double true_rate(const DecentralizedTrace& tr) {
  std::size_t yes = 0, all = 0;
  for (Round t = 1; t <= tr.length(); ++t)
    for (const auto& c : tr.components())
      for (const auto& [ap, v] : tr.event(t, c).obs) {
        ++all;
        yes += v ? 1 : 0;
      }
  return all ? static_cast<double>(yes) / static_cast<double>(all) : 0;
}

MetricsRecord record(const std::vector<std::string>& comps, const std::vector<std::vector<std::uint64_t>>& counts) {
  MetricsRecord rec;
  rec.components = comps;
  for (std::size_t t = 0; t < counts.size(); ++t)
    for (std::size_t i = 0; i < comps.size(); ++i)
      rec.at(static_cast<Round>(t + 1), comps[i], comps[i]).simplifications = counts[t][i];
  rec.run_length = static_cast<Round>(counts.size());
  return rec;
}

}  // namespace

TEST_CASE("component and proposition names") {
  CHECK(component_name(0) == "A");
  CHECK(component_name(25) == "Z");
  CHECK(component_name(26) == "C26");
  CHECK(ap_name(1, 0) == "b0");
  CHECK(ap_name(26, 3) == "c263");
}

TEST_CASE("generated traces have the configured shape") {
  TraceGenConfig cfg;
  cfg.components = 4;
  cfg.aps_per_component = 3;
  cfg.length = 20;
  cfg.seed = 9;
  DecentralizedTrace tr = generate(cfg);
  CHECK(tr.length() == 20);
  CHECK(tr.components() == std::vector<std::string>{"A", "B", "C", "D"});
  for (Round t = 1; t <= 20; ++t)
    for (const auto& c : tr.components()) CHECK(tr.event(t, c).obs.size() == 3);
  CHECK(generate(cfg) == tr);
  cfg.seed = 10;
  CHECK_FALSE(generate(cfg) == tr);
}

TEST_CASE("distributions bias the proposition values") {
  TraceGenConfig cfg;
  cfg.length = 200;
  cfg.distribution = Distribution::Beta;
  cfg.param1 = 5;
  cfg.param2 = 1;
  CHECK(true_rate(generate(cfg)) > 0.9);
  cfg.param1 = 1;
  cfg.param2 = 5;
  CHECK(true_rate(generate(cfg)) < 0.1);
  cfg.distribution = Distribution::Binomial;
  cfg.param1 = 1;
  cfg.param2 = 0.3;
  double r = true_rate(generate(cfg));
  CHECK(r > 0.2);
  CHECK(r < 0.4);
  cfg.distribution = Distribution::Normal;
  cfg.param1 = 0.5;
  cfg.param2 = 0.04;
  r = true_rate(generate(cfg));
  CHECK(r > 0.4);
  CHECK(r < 0.6);
}

TEST_CASE("generator parameters are validated") {
  TraceGenConfig cfg;
  cfg.components = 0;
  CHECK_THROWS_AS(validate(cfg), InvalidParameters);
  cfg = {};
  cfg.distribution = Distribution::Binomial;
  cfg.param2 = 1.5;
  CHECK_THROWS_AS(generate(cfg), InvalidParameters);
  cfg = {};
  cfg.distribution = Distribution::Beta;
  cfg.param1 = 0;
  CHECK_THROWS_AS(validate(cfg), InvalidParameters);
  cfg = {};
  cfg.distribution = Distribution::Normal;
  cfg.param2 = -1;
  CHECK_THROWS_AS(validate(cfg), InvalidParameters);
}

TEST_CASE("generator configuration JSON") {
  TraceGenConfig cfg = trace_config_from_json(
      {{"components", 5}, {"length", 7}, {"distribution", "beta"}, {"params", {2, 3}}, {"seed", 4}});
  CHECK(cfg.components == 5);
  CHECK(cfg.distribution == Distribution::Beta);
  CHECK(cfg.param1 == 2);
  CHECK(cfg.seed == 4);
  TraceGenConfig back = trace_config_from_json(to_json(cfg));
  CHECK(generate(back) == generate(cfg));
  CHECK_THROWS_AS(trace_config_from_json({{"distribution", "poisson"}}), ParseError);
}

TEST_CASE("CSV round trip") {
  TraceGenConfig cfg;
  cfg.length = 15;
  cfg.seed = 3;
  DecentralizedTrace tr = generate(cfg);
  std::stringstream ss;
  store(tr, ss);
  CHECK(ss.str().rfind("t,component,ap,value\n", 0) == 0);
  CHECK(load(ss) == tr);
}

TEST_CASE("CSV errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return load(in);
  };
  CHECK_THROWS_AS(parse("time,component,ap,value\n"), ParseError);
  CHECK_THROWS_AS(parse("t,component,ap,value\n1,A,a0\n"), ParseError);
  CHECK_THROWS_AS(parse("t,component,ap,value\n0,A,a0,1\n"), ParseError);
  CHECK_THROWS_AS(parse("t,component,ap,value\nx,A,a0,1\n"), ParseError);
  CHECK_THROWS_AS(parse("t,component,ap,value\n1,A,a0,2\n"), ParseError);
  CHECK_THROWS_AS(parse("t,component,ap,value\n1,A,a0,1\n1,B,a0,1\n"), ConflictingObservation);
  CHECK_THROWS_AS(parse("t,component,ap,value\n1,A,a0,1\n1,A,a0,0\n"), ConflictingObservation);
  try {
    parse("t,component,ap,value\n1,A,a0,1\n2,A,a0\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
  DecentralizedTrace tr = parse("t,component,ap,value\n2,B,b0,1\n1,A,a0,0\n");
  CHECK(tr.length() == 2);
  CHECK(tr.event(2, "B").obs.at("b0"));
}

TEST_CASE("message size model") {
  Memory m;
  m.set(Atom::timed(1, "a"), Verdict::Top);
  CHECK(size_of(m) == 6);
  CHECK(size_of(Atom::plain("ab")) == 2);
  CHECK(size_of(Atom::monref(3, "m01")) == 7);
  CHECK(size_of(Expr::top()) == 1);
  Expr x = Expr::atom(Atom::timed(1, "a"));
  CHECK(size_of(conj(x, neg(x))) == 1);
  Expr y = Expr::atom(Atom::timed(1, "b"));
  // Operators count once each, atoms at their size.
  CHECK(size_of(conj(x, y)) == 1 + 5 + 5);
  CHECK(verdict_message_size("m01") == 3 + 4 + 1);
  CHECK(kill_message_size("m01") == 3);
  SizeModel wide{2, 8, 2};
  CHECK(size_of(m, wide) == 8 + 2 + 2);
}

TEST_CASE("convergence formula") {
  CHECK(convergence(record({"A", "B"}, {{3, 1}})) == doctest::Approx(0.125).epsilon(1e-12));
  for (std::size_t k = 1; k <= 6; ++k) {
    std::vector<std::string> comps;
    for (std::size_t i = 0; i < k; ++i) comps.push_back(component_name(i));
    std::vector<std::vector<std::uint64_t>> counts(5, std::vector<std::uint64_t>(k, 0));
    for (auto& row : counts) row[0] = 7;
    double expected = static_cast<double>(k - 1) / static_cast<double>(k);
    CHECK(std::abs(convergence(record(comps, counts)) - expected) < 1e-12);
  }
  // Rounds without work contribute 0 but still count in the run length.
  CHECK(std::abs(convergence(record({"A", "B"}, {{3, 1}, {0, 0}})) - 0.0625) < 1e-12);
  CHECK(convergence(record({"A", "B"}, {{2, 2}})) == 0);
}

TEST_CASE("summary aggregates") {
  MetricsRecord rec = record({"A", "B"}, {{3, 1}, {0, 4}});
  rec.delays = {1, 3};
  rec.at(1, "B", "B").messages = 1;
  rec.at(1, "B", "B").bytes = 6;
  rec.at(2, "B", "B").messages = 1;
  rec.at(2, "B", "B").bytes = 10;
  Summary s = summarize(rec);
  CHECK(s.delay == 2);
  CHECK(s.msgs == 1);
  CHECK(s.data == 8);
  CHECK(s.s_crit == 3.5);
  CHECK(s.s_max == 4);
  nlohmann::json j = to_json(s);
  CHECK(j.at("s_max") == 4);
}
