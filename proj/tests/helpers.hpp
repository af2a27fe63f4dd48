#pragma once

#include "ecna/automaton.hpp"
#include "ecna/timed_word.hpp"

#include <random>
#include <string>
#include <vector>

namespace ecna::testing {

// Alphabet shared by the worked examples: one call, one return, internals
// a, b and the idle tail symbol i.
inline PushdownAlphabet example_alphabet() {
    PushdownAlphabet s;
    s.calls = {"c"};
    s.returns = {"r"};
    s.internals = {"a", "b", "i"};
    return s;
}

// Recognizes a.c+.a+.r+.b+ followed by idle steps, the whole block spanning
// exactly one time unit (checked with an abstract recorder on the last b).
inline NestedVpta trec_automaton() {
    NestedVpta m;
    m.alphabet = example_alphabet();
    m.states = {"q0", "q1", "q2", "q3", "q4", "q5"};
    m.initial = {"q0"};
    m.event_clocks = {xa("a")};
    m.stack = {"g"};
    m.buchi = {{"q5"}};
    m.finite_accepting = {"q5"};
    ClockConstraint unit;
    unit.atoms.push_back({xa("a"), Interval::point(1)});
    m.internals.push_back({"q0", "a", {}, {}, "q1"});
    m.pushes.push_back({"q1", "c", {}, {}, "q1", "g"});
    m.pushes.push_back({"q1", "c", {}, {}, "q2", "g"});
    m.internals.push_back({"q2", "a", {}, {}, "q2"});
    m.internals.push_back({"q2", "a", {}, {}, "q3"});
    m.pops.push_back({"q3", "r", {}, {}, "g", "q3"});
    m.pops.push_back({"q3", "r", {}, {}, "g", "q4"});
    m.internals.push_back({"q4", "b", {}, {}, "q4"});
    m.internals.push_back({"q4", "b", unit, {}, "q5"});
    m.internals.push_back({"q5", "i", {}, {}, "q5"});
    return m;
}

// Recognizes a+.c+.b+.r+.b, the block spanning one time unit (checked with
// an abstract predictor on the first a).
inline NestedVpta tpred_automaton() {
    NestedVpta m;
    m.alphabet = example_alphabet();
    m.states = {"q0", "q1", "q2", "q3", "q4", "q5"};
    m.initial = {"q0"};
    m.event_clocks = {ya("b")};
    m.stack = {"g"};
    m.buchi = {{"q5"}};
    m.finite_accepting = {"q5"};
    ClockConstraint unit;
    unit.atoms.push_back({ya("b"), Interval::point(1)});
    m.internals.push_back({"q0", "a", unit, {}, "q1"});
    m.internals.push_back({"q1", "a", {}, {}, "q1"});
    m.pushes.push_back({"q1", "c", {}, {}, "q2", "g"});
    m.pushes.push_back({"q2", "c", {}, {}, "q2", "g"});
    m.internals.push_back({"q2", "b", {}, {}, "q2"});
    m.internals.push_back({"q2", "b", {}, {}, "q3"});
    m.pops.push_back({"q3", "r", {}, {}, "g", "q3"});
    m.pops.push_back({"q3", "r", {}, {}, "g", "q4"});
    m.internals.push_back({"q4", "b", {}, {}, "q5"});
    m.internals.push_back({"q5", "i", {}, {}, "q5"});
    return m;
}

// A pending leading call followed by the trec body; the caller recorder ties
// the last b to the leading call, one time unit apart.
inline NestedVpta tcaller_automaton() {
    NestedVpta m;
    m.alphabet = example_alphabet();
    m.states = {"p0", "q0", "q1", "q2", "q3", "q4", "q5"};
    m.initial = {"p0"};
    m.event_clocks = {xc("c")};
    m.stack = {"g0", "g"};
    m.buchi = {{"q5"}};
    m.finite_accepting = {"q5"};
    ClockConstraint unit;
    unit.atoms.push_back({xc("c"), Interval::point(1)});
    m.pushes.push_back({"p0", "c", {}, {}, "q0", "g0"});
    m.internals.push_back({"q0", "a", {}, {}, "q1"});
    m.pushes.push_back({"q1", "c", {}, {}, "q1", "g"});
    m.pushes.push_back({"q1", "c", {}, {}, "q2", "g"});
    m.internals.push_back({"q2", "a", {}, {}, "q2"});
    m.internals.push_back({"q2", "a", {}, {}, "q3"});
    m.pops.push_back({"q3", "r", {}, {}, "g", "q3"});
    m.pops.push_back({"q3", "r", {}, {}, "g", "q4"});
    m.internals.push_back({"q4", "b", {}, {}, "q4"});
    m.internals.push_back({"q4", "b", unit, {}, "q5"});
    m.internals.push_back({"q5", "i", {}, {}, "q5"});
    return m;
}

inline TimedWord make_word(
    const std::vector<std::pair<std::string, std::string>>& letters) {
    TimedWord w;
    for (const auto& [sym, t] : letters) w.letters.push_back({sym, parse_rational(t)});
    return w;
}

// The four witness words for the recorder/predictor separation.
inline TimedWord v1_word() {
    return make_word({{"a", "0"}, {"c", "0.1"}, {"a", "0.1"},
                      {"r", "0.1"}, {"b", "0.1"}, {"b", "0.9"}});
}
inline TimedWord v2_word() {
    return make_word({{"a", "0"}, {"c", "0.1"}, {"a", "0.1"},
                      {"r", "0.1"}, {"b", "0.1"}, {"b", "1"}});
}
inline TimedWord u1_word() {
    return make_word({{"a", "0"}, {"a", "0.1"}, {"c", "0.1"},
                      {"b", "0.1"}, {"r", "0.1"}, {"b", "0.9"}});
}
inline TimedWord u2_word() {
    return make_word({{"a", "0"}, {"a", "0.1"}, {"c", "0.1"},
                      {"b", "0.1"}, {"r", "0.1"}, {"b", "1"}});
}

// The worked untimed word c c i c i r r c i r i.
inline std::vector<Symbol> sigma_p() {
    return {"c", "c", "i", "c", "i", "r", "r", "c", "i", "r", "i"};
}

// --- randomized instances -------------------------------------------------

struct RandomAutomatonConfig {
    size_t states = 3;
    size_t transitions_per_state = 2;
    std::vector<ClockId> clock_pool;   // event clocks to draw guards from
    std::vector<unsigned long> bounds = {1};
    bool allow_undef_atoms = true;
    double guard_probability = 0.5;
    size_t stack_symbols = 2;
};

NestedVpta random_automaton(std::mt19937& rng, const RandomAutomatonConfig& config);

// Random timed word over example_alphabet(); leans toward well-nested call
// structure, timestamps on a quarter grid.
TimedWord random_word(std::mt19937& rng, size_t max_len = 8);

} // namespace ecna::testing
