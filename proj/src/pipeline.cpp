#include "ecna/pipeline.hpp"

#include "ecna/error.hpp"

namespace ecna {

OmegaEmptiness ecna_emptiness(const NestedVpta& a, unsigned shuffle_seed) {
    auto removed = remove_all_event_clocks(a);
    OmegaEmptiness out;
    out.region_automaton = prune_unreachable(degeneralize(
        simplify_acceptance(region_abstraction_divergent(removed.automaton))));
    auto verdict = buchi_vpa_emptiness(out.region_automaton, shuffle_seed);
    out.empty = verdict.empty;
    out.witness = verdict.witness;
    return out;
}

TimedFiniteEmptiness finite_timed_emptiness(const NestedVpta& a) {
    auto removed = remove_all_event_clocks(a);

    // Configurations still carrying an unconfirmed future-occurrence guess
    // cannot witness finite acceptance.
    NestedVpta searched = removed.automaton;
    std::set<State> accepting;
    for (const auto& q : searched.finite_accepting)
        if (!removed.pending_states.count(q)) accepting.insert(q);
    searched.finite_accepting = accepting;

    auto region = region_abstraction(searched);
    auto found = finite_emptiness(region, removed.pending_stack);
    TimedFiniteEmptiness out;
    out.empty = found.empty;
    if (found.empty) return out;

    auto timed = concretize_word(removed.automaton, *found.word);
    if (!timed)
        fail(ErrorCode::Internal, "region search produced an unrealizable word");
    out.witness = timed;
    return out;
}

InclusionResult include_finite(const NestedVpta& a, const NestedVpta& b) {
    if (!(a.alphabet == b.alphabet))
        fail(ErrorCode::AlphabetMismatch, "operands use different pushdown alphabets");
    if (!a.standard_clocks.empty() || !b.standard_clocks.empty())
        fail(ErrorCode::NotEcna, "inclusion works on automata without standard clocks");

    auto complement = complement_finite(b);
    auto product = intersection(a, complement);
    auto emptiness = finite_timed_emptiness(product);

    InclusionResult out;
    out.included = emptiness.empty;
    if (emptiness.empty) return out;
    out.witness = emptiness.witness;

    std::set<ClockId> clocks = a.event_clocks;
    clocks.insert(b.event_clocks.begin(), b.event_clocks.end());
    auto intervals = canonical_intervals(guard_constants(product));
    out.counterexample =
        symbolic_image(*emptiness.witness, a.alphabet, clocks, intervals);
    return out;
}

ModelCheckResult visibly_model_check_finite(const NestedVpta& system,
                                            const NestedVpta& property) {
    require_valid(system);
    if (system.finite_accepting != system.states)
        fail(ErrorCode::BadArgument,
             "the system must accept at every state");
    if (!(system.alphabet == property.alphabet))
        fail(ErrorCode::AlphabetMismatch, "system and property alphabets differ");

    auto complement = complement_finite(property);
    auto product = intersection(system, complement);
    auto emptiness = finite_timed_emptiness(product);

    ModelCheckResult out;
    out.holds = emptiness.empty;
    out.counterexample = emptiness.witness;
    return out;
}

} // namespace ecna
