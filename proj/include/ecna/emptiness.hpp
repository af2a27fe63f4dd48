#pragma once

#include "ecna/automaton.hpp"

#include <optional>
#include <set>
#include <vector>

namespace ecna {

// Classical region of the standard clocks: integer part per clock (capped by
// that clock's largest guard constant) and the ordering of fractional parts.
struct ClockRegion {
    static constexpr long kAbove = -1;

    std::map<ClockName, long> ipart;               // kAbove once past the cap
    std::vector<std::vector<ClockName>> fracs;     // groups by increasing fraction
    bool zero_frac = false;                        // first group sits on an integer

    bool operator==(const ClockRegion&) const = default;
    bool operator<(const ClockRegion& o) const {
        if (ipart != o.ipart) return ipart < o.ipart;
        if (fracs != o.fracs) return fracs < o.fracs;
        return zero_frac < o.zero_frac;
    }

    std::string str() const;
};

using ClockLimits = std::map<ClockName, unsigned long>;

ClockRegion initial_clock_region(const std::set<ClockName>& clocks);

// Immediate time successor; nullopt once every clock is past its cap.
std::optional<ClockRegion> region_time_successor(const ClockRegion& region,
                                                 const ClockLimits& limits);

// The region itself plus all its time successors.
std::vector<ClockRegion> region_elapse_closure(const ClockRegion& region,
                                               const ClockLimits& limits);

ClockRegion region_reset(const ClockRegion& region, const std::set<ClockName>& resets);

// All valuations of the region satisfy the constraint (atoms over standard
// clocks only; guard bounds must not exceed the per-clock caps).
bool region_satisfies(const ClockRegion& region, const ClockConstraint& guard);

// Region abstraction of an automaton whose event clocks are already gone.
// The plain form preserves finite-word emptiness; the divergent form adds a
// virtual clock that must keep crossing one time unit, plus an acceptance
// component requiring that to happen forever, so lasso emptiness matches the
// timed semantics over diverging words. Throws HasEventClocks.
NestedVpta region_abstraction(const NestedVpta& a);
NestedVpta region_abstraction_divergent(const NestedVpta& a);

// Counter construction collapsing a generalized family into one set.
NestedVpta degeneralize(const NestedVpta& a);

// Drops duplicate and implied (superset) acceptance components; visiting a
// subset infinitely often visits every superset too.
NestedVpta simplify_acceptance(const NestedVpta& a);

// Removes states unreachable in the transition graph, ignoring stack
// feasibility (an over-approximation, so nothing live is lost).
NestedVpta prune_unreachable(const NestedVpta& a);

// Ultimately periodic symbolic witness.
struct Lasso {
    std::vector<Symbol> stem;
    std::vector<Symbol> cycle;
};

struct EmptinessResult {
    bool empty = true;
    std::optional<Lasso> witness;
};

// Emptiness of a clockless single-component automaton by saturating
// summaries of well-matched segments and searching the summarized graph for
// a reachable accepting cycle (same-level or with pending calls). The
// shuffle seed permutes worklist order; the verdict must not depend on it.
EmptinessResult buchi_vpa_emptiness(const NestedVpta& a, unsigned shuffle_seed = 0);

// Checks a lasso against the automaton: the stem must reach a state from
// which one cycle pass returns to the same state, never dips below its
// starting stack depth, and sees an accepting state.
bool replay_lasso(const NestedVpta& a, const Lasso& lasso);

// Finite-word reachability of a finite-accepting state in a clockless
// automaton. Unmatched calls may not push any of the forbidden symbols
// (frames that would leave an unresolved guess pending forever).
struct FiniteSearchResult {
    bool empty = true;
    std::optional<std::vector<Symbol>> word;
};
FiniteSearchResult finite_emptiness(const NestedVpta& a,
                                    const std::set<StackSymbol>& forbidden_pending = {});

// Builds exact rational timestamps realizing some accepting run of the
// clock-bearing automaton on the given untimed word; nullopt when no
// timestamps work. Delays are searched over region-boundary candidates,
// which is exhaustive up to region equivalence.
std::optional<TimedWord> concretize_word(const NestedVpta& a,
                                         const std::vector<Symbol>& word);

} // namespace ecna
