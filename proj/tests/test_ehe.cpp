#include <doctest.h>

#include "demon/ehe.hpp"
#include "demon/error.hpp"
#include "support/automata.hpp"
#include "support/ehe_util.hpp"

using namespace demon;
using namespace demon::testing;

TEST_CASE("init and next") {
  auto a = shared(eventually_a_or_b());
  EHE p = EHE::init(a);
  CHECK(p.size() == 1);
  CHECK(p.find(0, 0)->is_top());
  EHE p2 = mov(p, 0, 2);
  CHECK(next(p2, 0) == std::set<StateId>{0});
  CHECK(next(p2, 1) == std::set<StateId>{0, 1});
  CHECK_THROWS_AS(mov(p, 3, 4), UndefinedRound);
}

TEST_CASE("to on F(a or b)") {
  EHE p = EHE::init(shared(eventually_a_or_b()));
  CHECK(equivalent(to(p, 0, 1, Encoder::timestamp(1)), px("<1,a> || <1,b>")));
  CHECK(equivalent(to(p, 0, 0, Encoder::timestamp(1)), px("!<1,a> && !<1,b>")));
}

TEST_CASE("golden two-round history of F(a or b)") {
  EHE p = mov(EHE::init(shared(eventually_a_or_b())), 0, 2);
  CHECK(p.size() == 5);
  CHECK(entry_is(p, 0, 0, "true"));
  CHECK(entry_is(p, 1, 0, "!<1,a> && !<1,b>"));
  CHECK(entry_is(p, 1, 1, "<1,a> || <1,b>"));
  CHECK(entry_is(p, 2, 0, "!<1,a> && !<1,b> && !<2,a> && !<2,b>"));
  CHECK(entry_is(p, 2, 1, "<1,a> || <1,b> || (!<1,a> && !<1,b> && (<2,a> || <2,b>))"));
  CHECK(same_entries(mov(p, 2, 2), p));

  Memory m = stamped(1, {{"a", true}, {"b", false}});
  CHECK(sreach(p, m, 1) == std::optional<StateId>(1));
  CHECK(verdict_at(p, m, 1) == Verdict::Top);
  CHECK(sreach(p, Memory{}, 0) == std::optional<StateId>(0));
  CHECK(!sreach(p, Memory{}, 1));
  CHECK(verdict_at(p, Memory{}, 1) == Verdict::Unknown);
  CHECK(verdict_at(p, m, 0) == Verdict::Unknown);
}

TEST_CASE("golden reconciliation on F(a and b)") {
  EHE p = mov(EHE::init(shared(eventually_a_and_b())), 0, 1);
  CHECK(entry_is(p, 1, 0, "!<1,a> || !<1,b>"));
  CHECK(entry_is(p, 1, 1, "<1,a> && <1,b>"));
  EHE p0 = inc(p, stamped(1, {{"a", true}}));
  EHE p1 = inc(p, stamped(1, {{"b", false}}));
  CHECK(entry_is(p0, 0, 0, "true"));
  CHECK(entry_is(p0, 1, 0, "!<1,b>"));
  CHECK(entry_is(p0, 1, 1, "<1,b>"));
  CHECK(entry_is(p1, 0, 0, "true"));
  CHECK(entry_is(p1, 1, 0, "true"));
  CHECK(entry_is(p1, 1, 1, "false"));
  EHE u = merge(p0, p1);
  CHECK(entry_is(u, 0, 0, "true"));
  CHECK(entry_is(u, 1, 0, "true"));
  CHECK(entry_is(u, 1, 1, "<1,b>"));
  CHECK(sreach(u, Memory{}, 1) == std::optional<StateId>(0));
  CHECK(!sreach(p0, Memory{}, 1));
}

TEST_CASE("merge requires the same automaton") {
  EHE a = EHE::init(shared(eventually_a_or_b()));
  EHE b = EHE::init(shared(eventually_a_or_b()));
  CHECK_THROWS_AS(merge(a, b), AutomatonMismatch);
  EHE p = mov(a, 0, 2);
  CHECK(ehe_equivalent(merge(p, p), p));
  CHECK(ehe_equivalent(merge(p, a), p));
}

TEST_CASE("drop_resolved") {
  EHE p = mov(EHE::init(shared(eventually_a_or_b())), 0, 2);
  Memory m = stamped(1, {{"a", true}, {"b", false}});
  EHE g = drop_resolved_at(p, {1, 1});
  CHECK(g.rounds() == std::set<Round>{1, 2});
  CHECK(g.find(1, 1)->is_top());
  CHECK(!g.find(1, 0));
  // <1,a> already decides round 2 as well.
  EHE h = drop_resolved(p, m);
  CHECK(h.size() == 1);
  REQUIRE(h.find(2, 1));
  CHECK(h.find(2, 1)->is_top());
  CHECK(ehe_equivalent(drop_resolved(p, Memory{}), drop_resolved_at(p, {0, 0})));
  CHECK(drop_resolved(p, Memory{}).size() == p.size());

  EHE q = EHE(p.automaton_ptr());
  q.set(1, 0, px("<1,a>"));
  CHECK(same_entries(drop_resolved(q, Memory{}), q));
}

TEST_CASE("inc laws") {
  EHE p = mov(EHE::init(shared(eventually_a_and_b())), 0, 3);
  CHECK(ehe_equivalent(inc(p, Memory{}), p));
  Memory m = stamped(2, {{"a", true}, {"b", false}});
  EHE once = inc(p, m);
  CHECK(ehe_equivalent(inc(once, m), once));
}

TEST_CASE("soundness and determinism against run") {
  Rng rng(2024);
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 1 + pick(rng, 6);
    std::size_t k = 1 + pick(rng, 4);
    std::vector<Atom> aps;
    std::map<std::string, std::vector<std::string>> by_comp;
    for (std::size_t j = 0; j < k; ++j) {
      aps.push_back(Atom::plain("p" + std::to_string(j)));
      by_comp["c" + std::to_string(pick(rng, 3))].push_back(aps.back().name);
    }
    auto a = shared(random_spec(rng, n, aps));
    DecentralizedTrace tr = random_trace(rng, by_comp, static_cast<Round>(1 + pick(rng, 15)));
    auto global = reconstruct_global(tr);
    EHE p = EHE::init(a);
    Memory m;
    for (Round t = 1; t <= tr.length(); ++t) {
      p = mov(p, t - 1, t);
      for (const auto& c : tr.components()) m.merge(mem_from_event(tr.event(t, c), Encoder::timestamp(t)));
      std::vector<Event> prefix(global.begin(), global.begin() + t);
      CHECK(states_reached(p, m, t) == std::vector<StateId>{run(*a, prefix)});
    }
  }
}

TEST_CASE("dump format") {
  EHE p = mov(EHE::init(shared(eventually_a_or_b())), 0, 1);
  std::string d = dump(p);
  CHECK(d.rfind("t\tq\texpression\n0\tq0\ttrue\n", 0) == 0);
}
