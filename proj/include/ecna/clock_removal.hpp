#pragma once

#include "ecna/automaton.hpp"
#include "ecna/run_engine.hpp"

#include <map>
#include <set>
#include <vector>

namespace ecna {

// Outcome of eliminating one event clock (or all of them): the translated
// automaton plus the bookkeeping needed to compare it against the original.
//
// States and frames that still carry a guess about a future occurrence of
// the watched symbol are marked pending: a finite prefix ending there has
// asserted something no finite continuation has confirmed, so such states
// are discounted when projecting finite-word feasibility onto base states.
struct RemovalResult {
    NestedVpta automaton;
    std::map<State, State> base_of;              // translated state -> source state
    std::map<StackSymbol, StackSymbol> stack_base_of; // record -> wrapped symbol
    std::set<State> pending_states;
    std::set<StackSymbol> pending_stack;
    std::vector<ClockName> fresh_clocks;
};

// Replace a global recorder or predictor clock by fresh standard clocks.
// Recorders need one clock reset at every occurrence of the watched symbol
// plus a seen bit; predictors need one clock per atomic bound plus an
// obligation set discharged at the next occurrence.
RemovalResult remove_global(const NestedVpta& a, const ClockId& z);

// Replace a frame recorder: at each occurrence of the watched symbol the
// automaton guesses which bounds the rest of the current frame will use,
// resets their clocks, and carries the obligations through calls and
// returns in states and stack records.
RemovalResult remove_abstract_recorder(const NestedVpta& a, const Symbol& b);

// Replace a frame predictor: promises made by guards are recorded as
// obligations checked at the next occurrence of the watched symbol along
// the frame, with unmatched-call guesses marked by a dedicated frame symbol
// and discharged by an acceptance component.
RemovalResult remove_abstract_predictor(const NestedVpta& a, const Symbol& b);

// Replace a caller recorder: occurrences of the watched call symbol seed
// obligations for the frame they open; pending bounds propagate into nested
// frames as live obligations whose clocks must not be reset.
RemovalResult remove_caller(const NestedVpta& a, const Symbol& b);

// Run the four removals over every declared event clock: global clocks
// first, then frame recorders, frame predictors and caller clocks, each
// group in symbol order. The result has no event clocks and the same
// greatest constant.
RemovalResult remove_all_event_clocks(const NestedVpta& a);

// Base states reachable on the word through non-pending configurations;
// compares against feasible_state_set on the source automaton.
std::set<State> feasible_base_states(const RemovalResult& r, const TimedWord& w);

} // namespace ecna
