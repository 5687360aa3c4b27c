#include <doctest.h>

#include "demon/error.hpp"
#include "demon/synthesis.hpp"
#include "support/automata.hpp"
#include "support/ltl_gen.hpp"

using namespace demon;
using namespace demon::testing;

namespace {

// Every global event sequence of length <= n over `aps`.
std::vector<std::vector<Event>> all_words(const std::vector<std::string>& aps, std::size_t n) {
  std::vector<std::vector<Event>> out{{}};
  std::vector<std::vector<Event>> layer{{}};
  for (std::size_t len = 1; len <= n; ++len) {
    std::vector<std::vector<Event>> grown;
    for (const auto& w : layer) {
      for (std::size_t r = 0; r < (std::size_t{1} << aps.size()); ++r) {
        Event e;
        for (std::size_t i = 0; i < aps.size(); ++i) e.obs[aps[i]] = (r >> i) & 1U;
        auto w2 = w;
        w2.push_back(e);
        grown.push_back(w2);
      }
    }
    out.insert(out.end(), grown.begin(), grown.end());
    layer = std::move(grown);
  }
  return out;
}

bool verdict_equivalent(const Specification& x, const Specification& y, const std::vector<std::string>& aps,
                        std::size_t n) {
  for (const auto& w : all_words(aps, n))
    if (x.verdict(run(x, w)) != y.verdict(run(y, w))) return false;
  return true;
}

// Verdict by repeated progression of the formula itself.
Verdict progression_verdict(Ltl f, const std::vector<Event>& w) {
  f = canonicalize(f);
  for (const Event& e : w) {
    f = progress(f, [&](const Atom& a) { return e.obs.at(a.name); });
  }
  return f.is_true() ? Verdict::Top : f.is_false() ? Verdict::Bottom : Verdict::Unknown;
}

}  // namespace

TEST_CASE("LTL parsing and printing") {
  CHECK(to_string(parse_ltl("F (a || b)")) == "F (a || b)");
  CHECK(to_string(parse_ltl("a && b U c || d")) == "a && b U c || d");
  CHECK(parse_ltl("a U b U c") == until(Ltl::ap("a"), until(Ltl::ap("b"), Ltl::ap("c"))));
  CHECK(parse_ltl("(a U b) U c") == until(until(Ltl::ap("a"), Ltl::ap("b")), Ltl::ap("c")));
  CHECK(parse_ltl("!X Fa") == lnot(next(Ltl::ap("Fa"))));
  CHECK(parse_ltl("G F a") == globally(finally(Ltl::ap("a"))));
  CHECK(parse_ltl("@m01 && x").lhs().is_ref());
  CHECK(parse_ltl("true || false") == lor(Ltl::top(), Ltl::bottom()));
  CHECK_THROWS_AS(parse_ltl("a &&"), ParseError);
  CHECK_THROWS_AS(parse_ltl("(a"), ParseError);
  CHECK_THROWS_AS(parse_ltl("a b"), ParseError);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    Ltl f = random_ltl(rng, {"a", "b", "c"}, 4);
    CHECK(parse_ltl(to_string(f)) == f);
  }
}

TEST_CASE("progression examples") {
  Ltl f = parse_ltl("F (a || b)");
  Memory m;
  m.set(Atom::plain("a"), Verdict::Top);
  m.set(Atom::plain("b"), Verdict::Bottom);
  CHECK(progress(f, m).is_true());
  m.set(Atom::plain("a"), Verdict::Bottom);
  CHECK(progress(f, m) == canonicalize(f));
  Memory ma;
  ma.set(Atom::plain("a"), Verdict::Top);
  CHECK(progress(parse_ltl("G a"), ma) == parse_ltl("G a"));
  CHECK_THROWS_AS(progress(f, ma), IncompleteEvent);
}

TEST_CASE("canonical forms") {
  CHECK(canonicalize(parse_ltl("a && !a")).is_false());
  CHECK(canonicalize(parse_ltl("F a || !F a")).is_true());
  CHECK(canonicalize(parse_ltl("b && a")) == canonicalize(parse_ltl("a && b")));
  CHECK(canonicalize(parse_ltl("F F a")) == canonicalize(parse_ltl("F a")));
  CHECK(canonicalize(parse_ltl("G G a")) == canonicalize(parse_ltl("G a")));
  CHECK(canonicalize(parse_ltl("true U a")) == canonicalize(parse_ltl("F a")));
  CHECK(canonicalize(parse_ltl("false U a")) == canonicalize(parse_ltl("a")));
  CHECK(canonicalize(parse_ltl("a U true")).is_true());
  CHECK(canonicalize(parse_ltl("a U false")).is_false());
  CHECK(canonicalize(parse_ltl("X true")).is_true());
  CHECK(canonicalize(parse_ltl("F (b || a)")) == canonicalize(parse_ltl("F (a || b)")));
}

TEST_CASE("synthesized automata match the reference automata") {
  Specification s1 = synthesize(parse_ltl("F (a || b)"));
  CHECK(s1.size() == 2);
  CHECK(validate(s1).ok());
  CHECK(verdict_equivalent(s1, eventually_a_or_b(), {"a", "b"}, 4));
  Specification s2 = synthesize(parse_ltl("F (a && b)"));
  CHECK(s2.size() == 2);
  CHECK(verdict_equivalent(s2, eventually_a_and_b(), {"a", "b"}, 4));
  Specification gf = synthesize(parse_ltl("G F a"));
  CHECK(gf.final_states().empty());
  CHECK(!ca_monitorable(gf).monitorable);
  Specification t = synthesize(parse_ltl("true"));
  CHECK(t.size() == 1);
  CHECK(t.verdict(0) == Verdict::Top);
}

TEST_CASE("synthesis is deterministic, complete and agrees with progression") {
  Rng rng(17);
  std::vector<std::string> aps{"a", "b", "c"};
  auto words = all_words(aps, 3);
  for (int i = 0; i < 60; ++i) {
    Ltl f = random_ltl(rng, aps, 3);
    Specification s = synthesize(f);
    CHECK(validate(s).ok());
    for (const auto& w : words) CHECK(s.verdict(run(s, w)) == progression_verdict(f, w));
  }
}

TEST_CASE("state cap") {
  CHECK_THROWS_AS(synthesize(parse_ltl("F (a && X X X X b)"), 3), StateCapExceeded);
}

TEST_CASE("score, choose and split") {
  ApOwner owner{{"a0", "c0"}, {"a1", "c0"}, {"b0", "c1"}, {"b1", "c1"}, {"d0", "c2"}};
  CHECK(score(parse_ltl("a0 || b0"), "c0", owner) == 1);
  CHECK(score(parse_ltl("true"), "c0", owner) == 0);
  CHECK(score(parse_ltl("a0 && a0"), "c0", owner) == 2);
  CHECK(choose(parse_ltl("a0 && a0 && b0"), owner) == "c0");
  CHECK(choose(parse_ltl("a0 && b0"), owner) == "c0");
  CHECK(choose(parse_ltl("b0 && a0"), owner) == "c0");
  CHECK(choose(parse_ltl("X d0"), owner) == "c2");
  CHECK_THROWS_AS(choose(parse_ltl("true U false"), owner), NoAtomicPropositions);
  using P = std::pair<std::string, std::string>;
  CHECK(split(parse_ltl("a0"), parse_ltl("a1"), "c0", owner) == P{"c0", "c0"});
  CHECK(split(parse_ltl("b0"), parse_ltl("a1"), "c0", owner) == P{"c1", "c0"});
  CHECK(split(parse_ltl("a0 && b0 && b1"), parse_ltl("d0"), "c0", owner) == P{"c0", "c2"});
  CHECK(split(parse_ltl("b0"), parse_ltl("d0 && d0 && a0"), "c0", owner) == P{"c1", "c0"});
}

TEST_CASE("monitor tree construction") {
  ApOwner owner{{"a0", "c0"}, {"b0", "c1"}, {"x", "cX"}, {"y", "cX"}, {"z", "cY"}, {"w", "cY"}};
  MonitorTree t = net_chor(parse_ltl("F (a0 || b0)"), owner);
  CHECK(t.root.id == "m00");
  CHECK(t.root.component == "c0");
  REQUIRE(t.extra.size() == 1);
  CHECK(t.extra[0].id == "m01");
  CHECK(t.extra[0].component == "c1");
  CHECK(to_string(t.extra[0].formula) == "b0");
  CHECK(to_string(t.root.formula) == "F (a0 || @m01)");
  CHECK(t.edges == std::set<std::pair<std::string, std::string>>{{"m01", "m00"}});

  MonitorTree one = net_chor(parse_ltl("G (x U y)"), owner);
  CHECK(one.extra.empty());
  CHECK(one.edges.empty());

  MonitorTree two = net_chor(parse_ltl("(x && y) || (z && w)"), owner);
  CHECK(two.extra.size() == 1);
  CHECK(two.edges.size() == 1);

  ChorNetwork net = chor_network(t, owner);
  CHECK(net.spec.monitors.size() == 2);
  CHECK(net.refs.at("m01") == std::set<std::string>{"m00"});
  CHECK(net.corefs.at("m00") == std::set<std::string>{"m01"});
  CHECK(decentralized_monitorable(net.spec));

  DecentralizedTrace tr({"c0", "c1"});
  tr.observe(1, "c0", "a0", false);
  tr.observe(1, "c1", "b0", false);
  tr.observe(2, "c0", "a0", false);
  tr.observe(2, "c1", "b0", true);
  CHECK(decentralized_run(net.spec, tr) == Verdict::Top);
}

TEST_CASE("random monitor trees are well formed") {
  Rng rng(23);
  ApOwner owner{{"a", "A"}, {"b", "B"}, {"c", "C"}, {"d", "A"}};
  std::vector<std::string> aps{"a", "b", "c", "d"};
  for (int i = 0; i < 150; ++i) {
    Ltl f = random_ltl(rng, aps, 4);
    MonitorTree t = net_chor(f, owner);
    auto mons = t.all();
    CHECK(t.edges.size() == mons.size() - 1);
    std::map<std::string, std::string> parent;
    for (const auto& [c, p] : t.edges) CHECK(parent.emplace(c, p).second);
    for (const auto& m : mons) {
      // Every hosted proposition is local.
      for (const auto& ap : ltl_aps(m.formula)) CHECK(owner.at(ap) == m.component);
      // No placeholder of an ancestor.
      std::set<std::string> ancestors;
      for (std::string x = m.id; parent.count(x);) ancestors.insert(x = parent.at(x));
      for (const Atom& a : ltl_atoms(m.formula))
        if (a.kind == AtomKind::MonRef) {
          CHECK(!ancestors.count(a.name));
          CHECK(parent.at(a.name) == m.id);
        }
    }
    ChorNetwork net = chor_network(t, owner);
    CHECK(!has_cycle(mdg(net.spec)));
  }
}
