#pragma once

#include "ecna/alphabet.hpp"
#include "ecna/interval.hpp"
#include "ecna/timed_word.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace ecna {

using State = std::string;
using StackSymbol = std::string;

// Reserved name of the stack-bottom symbol. It is read but never removed by
// pops and may not appear in the declared stack alphabet or be pushed.
inline const StackSymbol kStackBottom = "bot";

struct PushTransition {
    State from;
    Symbol symbol;
    ClockConstraint guard;
    std::set<ClockName> resets;
    State to;
    StackSymbol push;

    bool operator==(const PushTransition&) const = default;
};

struct PopTransition {
    State from;
    Symbol symbol;
    ClockConstraint guard;
    std::set<ClockName> resets;
    StackSymbol pop; // kStackBottom reads the bottom without removing it
    State to;

    bool operator==(const PopTransition&) const = default;
};

struct InternalTransition {
    State from;
    Symbol symbol;
    ClockConstraint guard;
    std::set<ClockName> resets;
    State to;

    bool operator==(const InternalTransition&) const = default;
};

// The one automaton type. Subclasses (VPA, VPTA, ECNA, ECVPA, ARCNA, APCNA,
// CECNA) are validated views of the same shape, reported by classify().
struct NestedVpta {
    PushdownAlphabet alphabet;
    std::set<State> states;
    std::set<State> initial;
    std::set<ClockId> event_clocks;      // subset of the alphabet's event clocks
    std::set<ClockName> standard_clocks;
    std::set<StackSymbol> stack;         // bottom excluded
    std::vector<PushTransition> pushes;
    std::vector<PopTransition> pops;
    std::vector<InternalTransition> internals;
    std::vector<std::set<State>> buchi;  // generalized acceptance, non-empty family
    std::set<State> finite_accepting;    // finite-word finals

    bool operator==(const NestedVpta&) const = default;

    void sort_transitions();
};

struct Violation {
    std::string code;
    std::string detail;
};

std::vector<Violation> validate(const NestedVpta& a);
void require_valid(const NestedVpta& a); // throws InvalidAutomaton

enum class ClassTag { Vpa, Vpta, Ecna, Ecvpa, Arcna, Apcna, Cecna, Nested };

std::set<ClassTag> classify(const NestedVpta& a);
std::string class_tag_name(ClassTag tag);

unsigned long greatest_constant(const NestedVpta& a);

// Satisfaction of a constraint by a combined valuation: standard clocks are
// always defined, event clocks may be bot. Throws UnknownClock when an atom
// mentions a clock absent from both parts.
bool constraint_sat(const std::map<ClockName, Rational>& standard,
                    const ClockValuation& events,
                    const ClockConstraint& constraint);

// Language-preserving rewrite giving every transition exactly one atom on z:
// transitions without one split into a bot copy and a defined copy, several
// atoms intersect into one, and transitions whose atoms conflict disappear.
NestedVpta normalize_single_atom(const NestedVpta& a, const ClockId& z);

// Distinct atoms on z appearing in guards of a (post-normalization view).
std::vector<Interval> atoms_on(const NestedVpta& a, const ClockId& z);

} // namespace ecna
