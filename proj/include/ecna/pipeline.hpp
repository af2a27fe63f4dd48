#pragma once

#include "ecna/boolean_ops.hpp"
#include "ecna/clock_removal.hpp"
#include "ecna/emptiness.hpp"

namespace ecna {

// Emptiness of the timed language over diverging infinite words: event
// clocks removed, standard clocks region-abstracted with divergence
// tracking, acceptance degeneralized, then the summarized cycle search.
// The witness replays on the automaton returned alongside it.
struct OmegaEmptiness {
    bool empty = true;
    std::optional<Lasso> witness;
    NestedVpta region_automaton; // degeneralized; empty witnesses replay here
};
OmegaEmptiness ecna_emptiness(const NestedVpta& a, unsigned shuffle_seed = 0);

// Finite-word emptiness of an automaton that may still carry event clocks;
// used by inclusion and model checking. The witness is an accepted timed
// word built by region-path concretization.
struct TimedFiniteEmptiness {
    bool empty = true;
    std::optional<TimedWord> witness;
};
TimedFiniteEmptiness finite_timed_emptiness(const NestedVpta& a);

// Finite-word language inclusion of automata without standard clocks; the
// counterexample comes both as a timed word and as its image over the
// interval alphabet of the two operands.
struct InclusionResult {
    bool included = true;
    std::optional<TimedWord> witness;
    std::optional<SymbolicWord> counterexample;
};
InclusionResult include_finite(const NestedVpta& a, const NestedVpta& b);

// Finite-word refinement check of a system (every state accepting) against
// a property automaton without standard clocks.
struct ModelCheckResult {
    bool holds = true;
    std::optional<TimedWord> counterexample;
};
ModelCheckResult visibly_model_check_finite(const NestedVpta& system,
                                            const NestedVpta& property);

} // namespace ecna
