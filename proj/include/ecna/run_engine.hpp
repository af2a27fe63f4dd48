#pragma once

#include "ecna/automaton.hpp"

#include <cstdint>
#include <set>
#include <utility>

namespace ecna {

// Snapshot of a run: control state, stack above the bottom (back() is the
// top), and the standard-clock valuation.
struct Configuration {
    State state;
    std::vector<StackSymbol> stack;
    std::map<ClockName, Rational> sval;

    bool operator==(const Configuration&) const = default;
    bool operator<(const Configuration& o) const {
        if (state != o.state) return state < o.state;
        if (stack != o.stack) return stack < o.stack;
        return sval < o.sval;
    }
};

Configuration initial_configuration(const NestedVpta& a, const State& q);

// All successors of cfg on one letter: standard clocks advance by the time
// since the previous letter, the guard is tested on the combined valuation,
// resets apply afterwards. Pops on an empty stack read the bottom without
// removing it. An empty result means the configuration is stuck.
std::set<Configuration> step(const NestedVpta& a, const Configuration& cfg,
                             const TimedLetter& letter, const Rational& prev_time,
                             const ClockValuation& events);

// Exhaustive breadth-first closure over the whole word; the ground-truth
// oracle the constructions are tested against.
std::set<Configuration> run_prefixes(const NestedVpta& a, const TimedWord& w);

bool accepts_finite(const NestedVpta& a, const TimedWord& w);

// Reachable states annotated with which acceptance components some
// witnessing run visited (bit i = component i of the family).
using BuchiMask = std::uint64_t;
std::set<std::pair<State, BuchiMask>> feasible_states(const NestedVpta& a,
                                                      const TimedWord& w);

// Bare reachable states after the word.
std::set<State> feasible_state_set(const NestedVpta& a, const TimedWord& w);

} // namespace ecna
