#pragma once

#include "ecna/automaton.hpp"
#include "ecna/regions.hpp"

namespace ecna {

// Disjoint sum: exactly |Q|+|Q'| states and |stack|+|stack'| symbols above
// the bottom. Both operands must share the pushdown alphabet.
NestedVpta union_automata(const NestedVpta& a, const NestedVpta& b);

// Synchronized product over the shared alphabet with paired stack symbols.
// Single-component operands get the alternation-bit construction (states
// Q x Q' x {0,1}); generalized operands get the plain product with both
// families lifted.
NestedVpta intersection(const NestedVpta& a, const NestedVpta& b);

// Region expansion of an automaton without standard clocks into a clockless
// automaton over the interval alphabet: each transition becomes one copy per
// region inside its guard.
struct UntimedResult {
    NestedVpta vpa;
    IntervalSymbolTable table;
};
UntimedResult untimed_hom(const NestedVpta& a);

// Inverse direction: each interval letter's region becomes the guard.
NestedVpta timed_hom(const NestedVpta& vpa, const IntervalSymbolTable& table);

// Deterministic, complete automaton with the same finite-word language.
// States pair a summary relation over the segment since the last pending
// call with the reachable state set. Input must be clockless.
NestedVpta determinize_vpa_finite(const NestedVpta& vpa);

// Finite-word complement of an automaton without standard clocks, via
// region expansion, determinization, final flip and the way back.
NestedVpta complement_finite(const NestedVpta& a);

} // namespace ecna
