#include "ecna/textio.hpp"

#include "ecna/error.hpp"
#include "helpers.hpp"

#include <doctest.h>

using namespace ecna;
using namespace ecna::testing;

TEST_CASE("rational parsing is exact") {
    CHECK(parse_rational("0.1") == Rational(1, 10));
    CHECK(parse_rational("2") == Rational(2));
    CHECK(parse_rational("7/2") == Rational(7, 2));
    CHECK(parse_rational("0.125") == Rational(1, 8));
    CHECK(parse_rational("3.") == Rational(3));
    CHECK(format_rational(Rational(1, 10)) == "1/10");
    CHECK(format_rational(Rational(4)) == "4");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("x"), Error);
    CHECK_THROWS_AS(parse_rational("1.2.3"), Error);
}

TEST_CASE("timed word round trip") {
    TimedWordFile f;
    f.alphabet = example_alphabet();
    f.word = v2_word();
    auto text = serialize_timed_word(f);
    auto back = parse_timed_word_text(text);
    CHECK(back == f);
}

TEST_CASE("timed word parse errors carry positions") {
    try {
        parse_timed_word_text("alphabet: calls=c returns=r internals=a\nq 0\n", "w.tw");
        FAIL("expected parse error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("w.tw:2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_timed_word_text("a 0\n"), Error); // missing header
    CHECK_THROWS_AS(
        parse_timed_word_text("alphabet: calls=c returns=r internals=a\na 1\na 0\n"),
        Error); // decreasing timestamps
}

TEST_CASE("automaton round trip is canonical") {
    for (auto m : {trec_automaton(), tpred_automaton(), tcaller_automaton()}) {
        auto text = serialize_automaton(m);
        auto back = parse_automaton_text(text);
        m.sort_transitions();
        CHECK(back == m);
        // Serialization is a fixed point.
        CHECK(serialize_automaton(back) == text);
    }
}

TEST_CASE("automaton with standard clocks and resets round trips") {
    NestedVpta m;
    m.alphabet = example_alphabet();
    m.states = {"q0", "q1"};
    m.initial = {"q0"};
    m.standard_clocks = {"t1", "t2"};
    m.event_clocks = {xg("a"), xc("b")};
    m.stack = {"g"};
    m.buchi = {{"q1"}, {"q0", "q1"}};
    m.finite_accepting = {"q1"};
    ClockConstraint g;
    g.atoms.push_back({std_clock("t1"), Interval::bounded(0, false, 1, true)});
    g.atoms.push_back({xc("b"), Interval::undef_singleton()});
    m.pushes.push_back({"q0", "c", g, {"t1", "t2"}, "q1", "g"});
    m.pops.push_back({"q1", "r", {}, {"t1"}, kStackBottom, "q0"});
    m.internals.push_back({"q1", "a", {}, {}, "q1"});
    auto back = parse_automaton_text(serialize_automaton(m));
    m.sort_transitions();
    CHECK(back == m);
    CHECK(back.buchi.size() == 2);
}

TEST_CASE("finite-accepting defaults to the union of the acceptance family") {
    auto text =
        "[alphabet]\ncalls = c\nreturns = r\ninternals = a\n"
        "[states] q0, q1\n[initial] q0\n"
        "[accepting]\nF1 = q0\nF2 = q1\n"
        "[stack] g\n"
        "[transitions]\nq0 --a--> q1\n";
    auto m = parse_automaton_text(text);
    CHECK(m.finite_accepting == std::set<State>{"q0", "q1"});
}

TEST_CASE("automaton parse errors carry file and line") {
    try {
        parse_automaton_text("[alphabet]\ncalls = c\nreturns = r\ninternals = a\n"
                             "[transitions]\nq0 ??\n",
                             "m.aut");
        FAIL("expected parse error");
    } catch (const Error& e) {
        std::string msg = e.what();
        CHECK(msg.find("m.aut:6") != std::string::npos);
    }
}

TEST_CASE("comma splitting respects brackets") {
    auto parts = split_commas("a@{xg(a):[0,0],xa(a):[bot,bot]},b");
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == "a@{xg(a):[0,0],xa(a):[bot,bot]}");
    CHECK(parts[1] == "b");
}
