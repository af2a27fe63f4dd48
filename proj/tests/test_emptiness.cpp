#include "ecna/emptiness.hpp"

#include "ecna/error.hpp"
#include "ecna/run_engine.hpp"
#include "helpers.hpp"

#include <doctest.h>

#include <random>

using namespace ecna;
using namespace ecna::testing;

namespace {

PushdownAlphabet tiny_alphabet() {
    PushdownAlphabet s;
    s.calls = {"c"};
    s.returns = {"r"};
    s.internals = {"a", "b"};
    return s;
}

TimedWord untimed(const std::vector<Symbol>& symbols) {
    TimedWord w;
    for (const auto& sym : symbols) w.letters.push_back({sym, Rational(0)});
    return w;
}

} // namespace

TEST_CASE("clock region successors for one clock, cap one") {
    std::set<ClockName> clocks{"x"};
    ClockLimits limits{{"x", 1}};
    auto chain = region_elapse_closure(initial_clock_region(clocks), limits);
    REQUIRE(chain.size() == 4); // [0,0], (0,1), [1,1], above
    CHECK(chain[0].zero_frac);
    CHECK_FALSE(chain[1].zero_frac);
    CHECK(chain[2].zero_frac);
    CHECK(chain[3].ipart.at("x") == ClockRegion::kAbove);

    ClockConstraint at_one;
    at_one.atoms.push_back({std_clock("x"), Interval::point(1)});
    CHECK_FALSE(region_satisfies(chain[0], at_one));
    CHECK_FALSE(region_satisfies(chain[1], at_one));
    CHECK(region_satisfies(chain[2], at_one));
    CHECK_FALSE(region_satisfies(chain[3], at_one));

    ClockConstraint unbounded;
    unbounded.atoms.push_back({std_clock("x"), Interval::at_least(1)});
    CHECK(region_satisfies(chain[3], unbounded));

    auto reset = region_reset(chain[3], {"x"});
    CHECK(reset == initial_clock_region(clocks));
}

TEST_CASE("fraction ordering distinguishes reset interleavings") {
    std::set<ClockName> clocks{"x", "y"};
    ClockLimits limits{{"x", 1}, {"y", 1}};
    auto r0 = initial_clock_region(clocks);
    auto drift = region_time_successor(r0, limits);
    REQUIRE(drift);
    auto after_reset = region_reset(*drift, {"y"}); // y = 0 < frac(x)
    CHECK(after_reset.zero_frac);
    REQUIRE(after_reset.fracs.size() == 2);
    CHECK(after_reset.fracs[0] == std::vector<ClockName>{"y"});
    CHECK(after_reset.fracs[1] == std::vector<ClockName>{"x"});
}

TEST_CASE("region abstraction of a one-clock automaton has four regions per state") {
    NestedVpta m;
    m.alphabet = tiny_alphabet();
    m.states = {"q0"};
    m.initial = {"q0"};
    m.standard_clocks = {"x"};
    m.buchi = {{"q0"}};
    m.finite_accepting = {"q0"};
    m.internals.push_back({"q0", "a", {}, {}, "q0"});
    ClockConstraint at_one;
    at_one.atoms.push_back({std_clock("x"), Interval::point(1)});
    m.internals.push_back({"q0", "b", at_one, {}, "q0"});

    auto region = region_abstraction(m);
    CHECK(validate(region).empty());
    CHECK(region.states.size() == 4);
    CHECK(region.standard_clocks.empty());
    CHECK(region.event_clocks.empty());
}

TEST_CASE("region abstraction of a clockless automaton is isomorphic") {
    auto m = trec_automaton();
    m.event_clocks.clear();
    // Scrub the one guard so the automaton is clockless.
    for (auto& t : m.internals) t.guard = {};
    auto region = region_abstraction(m);
    CHECK(region.states.size() == m.states.size());
    CHECK(region.internals.size() == m.internals.size());
    CHECK(region.pushes.size() == m.pushes.size());
    CHECK(region.pops.size() == m.pops.size());

    CHECK_THROWS_AS(region_abstraction(trec_automaton()), Error); // event clocks present
}

TEST_CASE("a guard stranded above the cap is unreachable") {
    NestedVpta m;
    m.alphabet = tiny_alphabet();
    m.states = {"q0", "q1", "q2"};
    m.initial = {"q0"};
    m.standard_clocks = {"x"};
    m.buchi = {{"q2"}};
    m.finite_accepting = {"q2"};
    ClockConstraint past_one;
    past_one.atoms.push_back({std_clock("x"), Interval::at_least(1, true)});
    m.internals.push_back({"q0", "a", past_one, {}, "q1"});
    ClockConstraint at_one;
    at_one.atoms.push_back({std_clock("x"), Interval::point(1)});
    m.internals.push_back({"q1", "b", at_one, {}, "q2"});

    auto region = region_abstraction(m);
    auto result = finite_emptiness(region);
    CHECK(result.empty);
    auto omega = buchi_vpa_emptiness(degeneralize(region_abstraction_divergent(m)));
    CHECK(omega.empty);
}

TEST_CASE("degeneralization") {
    NestedVpta m;
    m.alphabet = tiny_alphabet();
    m.states = {"x", "y"};
    m.initial = {"x"};
    m.buchi = {{"x"}, {"y"}};
    m.finite_accepting = {"x", "y"};
    m.internals.push_back({"x", "a", {}, {}, "y"});
    m.internals.push_back({"y", "a", {}, {}, "x"});

    auto single = degeneralize(m);
    CHECK(single.buchi.size() == 1);
    CHECK(single.states.size() <= m.states.size() * 2);
    auto verdict = buchi_vpa_emptiness(single);
    CHECK_FALSE(verdict.empty);
    REQUIRE(verdict.witness);
    CHECK(replay_lasso(single, *verdict.witness));

    // One empty component kills the language.
    auto dead = m;
    dead.buchi.push_back({});
    CHECK(buchi_vpa_emptiness(degeneralize(dead)).empty);

    // A single component is preserved modulo the unit counter.
    NestedVpta one = m;
    one.buchi = {{"y"}};
    auto same = degeneralize(one);
    CHECK(same.states.size() == one.states.size());
    CHECK_FALSE(buchi_vpa_emptiness(same).empty);
}

TEST_CASE("summarized emptiness on simple shapes") {
    // Accepting internal self-loop.
    NestedVpta loop;
    loop.alphabet = tiny_alphabet();
    loop.states = {"q"};
    loop.initial = {"q"};
    loop.buchi = {{"q"}};
    loop.finite_accepting = {"q"};
    loop.internals.push_back({"q", "a", {}, {}, "q"});
    auto r1 = buchi_vpa_emptiness(loop);
    CHECK_FALSE(r1.empty);
    REQUIRE(r1.witness);
    CHECK(r1.witness->cycle == std::vector<Symbol>{"a"});
    CHECK(replay_lasso(loop, *r1.witness));

    // The only pop wants a symbol nobody pushes.
    NestedVpta strand;
    strand.alphabet = tiny_alphabet();
    strand.states = {"q0", "qf"};
    strand.initial = {"q0"};
    strand.stack = {"g", "h"};
    strand.buchi = {{"qf"}};
    strand.finite_accepting = {"qf"};
    strand.pushes.push_back({"q0", "c", {}, {}, "q0", "g"});
    strand.pops.push_back({"q0", "r", {}, {}, "h", "qf"});
    strand.internals.push_back({"qf", "a", {}, {}, "qf"});
    CHECK(buchi_vpa_emptiness(strand).empty);

    // Accepting state only inside a well-matched block: the mask rides on
    // the summary edge.
    NestedVpta block;
    block.alphabet = tiny_alphabet();
    block.states = {"q0", "q1", "q2"};
    block.initial = {"q0"};
    block.stack = {"g"};
    block.buchi = {{"q1"}};
    block.finite_accepting = {"q1"};
    block.pushes.push_back({"q0", "c", {}, {}, "q1", "g"});
    block.internals.push_back({"q1", "a", {}, {}, "q2"});
    block.pops.push_back({"q2", "r", {}, {}, "g", "q0"});
    auto r3 = buchi_vpa_emptiness(block);
    CHECK_FALSE(r3.empty);
    REQUIRE(r3.witness);
    CHECK(replay_lasso(block, *r3.witness));

    // Pending calls forever are fine.
    NestedVpta climb;
    climb.alphabet = tiny_alphabet();
    climb.states = {"q"};
    climb.initial = {"q"};
    climb.stack = {"g"};
    climb.buchi = {{"q"}};
    climb.finite_accepting = {"q"};
    climb.pushes.push_back({"q", "c", {}, {}, "q", "g"});
    auto r4 = buchi_vpa_emptiness(climb);
    CHECK_FALSE(r4.empty);
    CHECK(replay_lasso(climb, *r4.witness));

    // Bottom reads loop forever at depth zero.
    NestedVpta drain;
    drain.alphabet = tiny_alphabet();
    drain.states = {"q"};
    drain.initial = {"q"};
    drain.buchi = {{"q"}};
    drain.finite_accepting = {"q"};
    drain.pops.push_back({"q", "r", {}, {}, kStackBottom, "q"});
    auto r5 = buchi_vpa_emptiness(drain);
    CHECK_FALSE(r5.empty);
    CHECK(replay_lasso(drain, *r5.witness));

    // A bottom read guarded behind a pending call never fires again.
    NestedVpta blocked;
    blocked.alphabet = tiny_alphabet();
    blocked.states = {"q0", "q1"};
    blocked.initial = {"q0"};
    blocked.stack = {"g"};
    blocked.buchi = {{"q1"}};
    blocked.finite_accepting = {"q1"};
    blocked.pushes.push_back({"q0", "c", {}, {}, "q0", "g"});
    blocked.pops.push_back({"q0", "r", {}, {}, kStackBottom, "q1"});
    blocked.internals.push_back({"q1", "a", {}, {}, "q1"});
    // Reachable: the bottom read happens before any call.
    CHECK_FALSE(buchi_vpa_emptiness(blocked).empty);
}

TEST_CASE("saturation verdict is independent of worklist order") {
    std::mt19937 rng(61);
    RandomAutomatonConfig cfg;
    cfg.clock_pool = {};
    for (int iter = 0; iter < 8; ++iter) {
        auto m = random_automaton(rng, cfg);
        auto base = buchi_vpa_emptiness(m, 0);
        for (unsigned seed = 1; seed <= 10; ++seed) {
            auto shuffled = buchi_vpa_emptiness(m, seed);
            CHECK(shuffled.empty == base.empty);
            if (!shuffled.empty) {
                REQUIRE(shuffled.witness);
                CHECK(replay_lasso(m, *shuffled.witness));
            }
        }
    }
}

TEST_CASE("zeno-only loops are empty under divergence tracking") {
    NestedVpta m;
    m.alphabet = tiny_alphabet();
    m.states = {"q"};
    m.initial = {"q"};
    m.standard_clocks = {"z"};
    m.buchi = {{"q"}};
    m.finite_accepting = {"q"};
    ClockConstraint frozen;
    frozen.atoms.push_back({std_clock("z"), Interval::point(0)});
    m.internals.push_back({"q", "a", frozen, {}, "q"});

    CHECK(buchi_vpa_emptiness(degeneralize(region_abstraction_divergent(m))).empty);
    // Without the divergence component the loop looks accepting.
    CHECK_FALSE(buchi_vpa_emptiness(degeneralize(region_abstraction(m))).empty);
    // Finite prefixes exist either way.
    CHECK_FALSE(finite_emptiness(region_abstraction(m)).empty);
}

TEST_CASE("region abstraction simulates timed prefixes") {
    std::mt19937 rng(67);
    for (int iter = 0; iter < 8; ++iter) {
        RandomAutomatonConfig cfg;
        cfg.clock_pool = {};
        auto m = random_automaton(rng, cfg);
        m.standard_clocks = {"x"};
        // Sprinkle standard-clock guards and resets over the transitions.
        ClockConstraint low;
        low.atoms.push_back({std_clock("x"), Interval::bounded(0, false, 1, false)});
        for (auto& t : m.internals)
            if (std::uniform_int_distribution<int>(0, 1)(rng)) {
                t.guard = low;
                t.resets = {"x"};
            }
        auto region = region_abstraction(m);
        for (int k = 0; k < 15; ++k) {
            auto w = random_word(rng, 5);
            if (accepts_finite(m, w))
                CHECK(accepts_finite(region, untimed(w.symbols())));
        }
    }
}

TEST_CASE("finite search produces realizable words") {
    NestedVpta m;
    m.alphabet = tiny_alphabet();
    m.states = {"q0", "q1", "q2"};
    m.initial = {"q0"};
    m.standard_clocks = {"x"};
    m.buchi = {{"q2"}};
    m.finite_accepting = {"q2"};
    ClockConstraint at_one;
    at_one.atoms.push_back({std_clock("x"), Interval::point(1)});
    ClockConstraint at_zero;
    at_zero.atoms.push_back({std_clock("x"), Interval::point(0)});
    m.internals.push_back({"q0", "a", at_one, {"x"}, "q1"});
    m.internals.push_back({"q1", "b", at_one, {}, "q2"});

    auto region = region_abstraction(m);
    auto search = finite_emptiness(region);
    REQUIRE_FALSE(search.empty);
    auto word = *search.word;
    auto timed = concretize_word(m, word);
    REQUIRE(timed);
    CHECK(accepts_finite(m, *timed));
    CHECK(timed->letters[0].time == Rational(1));
    CHECK(timed->letters[1].time == Rational(2));

    // An infeasible sequencing cannot be concretized.
    NestedVpta bad = m;
    bad.internals.clear();
    bad.internals.push_back({"q0", "a", at_one, {}, "q1"});
    bad.internals.push_back({"q1", "b", at_zero, {}, "q2"});
    CHECK_FALSE(concretize_word(bad, {"a", "b"}).has_value());
}

TEST_CASE("concretization handles fractional interleavings") {
    NestedVpta m;
    m.alphabet = tiny_alphabet();
    m.states = {"q0", "q1", "q2"};
    m.initial = {"q0"};
    m.standard_clocks = {"x", "y"};
    m.buchi = {{"q2"}};
    m.finite_accepting = {"q2"};
    ClockConstraint strict;
    strict.atoms.push_back({std_clock("x"), Interval::bounded(0, true, 1, true)});
    ClockConstraint cross;
    cross.atoms.push_back({std_clock("x"), Interval::at_least(1, true)});
    cross.atoms.push_back({std_clock("y"), Interval::bounded(0, true, 1, true)});
    m.internals.push_back({"q0", "a", strict, {"y"}, "q1"});
    m.internals.push_back({"q1", "b", cross, {}, "q2"});

    auto timed = concretize_word(m, {"a", "b"});
    REQUIRE(timed);
    CHECK(accepts_finite(m, *timed));
}
