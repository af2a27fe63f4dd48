#include "ecna/run_engine.hpp"

#include "ecna/error.hpp"

namespace ecna {

Configuration initial_configuration(const NestedVpta& a, const State& q) {
    Configuration cfg;
    cfg.state = q;
    for (const auto& c : a.standard_clocks) cfg.sval[c] = 0;
    return cfg;
}

namespace {

std::map<ClockName, Rational> advance(const std::map<ClockName, Rational>& sval,
                                      const Rational& t) {
    auto out = sval;
    for (auto& [name, v] : out) v += t;
    return out;
}

std::map<ClockName, Rational> apply_resets(std::map<ClockName, Rational> sval,
                                           const std::set<ClockName>& resets) {
    for (const auto& r : resets) sval[r] = 0;
    return sval;
}

} // namespace

std::set<Configuration> step(const NestedVpta& a, const Configuration& cfg,
                             const TimedLetter& letter, const Rational& prev_time,
                             const ClockValuation& events) {
    auto cls = a.alphabet.classify(letter.symbol);
    if (!cls)
        fail(ErrorCode::AlphabetMismatch, "symbol not in alphabet: " + letter.symbol);
    const Rational t = letter.time - prev_time;
    const auto advanced = advance(cfg.sval, t);

    std::set<Configuration> out;
    switch (*cls) {
        case SymbolClass::Call:
            for (const auto& tr : a.pushes) {
                if (tr.from != cfg.state || tr.symbol != letter.symbol) continue;
                if (!constraint_sat(advanced, events, tr.guard)) continue;
                Configuration next;
                next.state = tr.to;
                next.stack = cfg.stack;
                next.stack.push_back(tr.push);
                next.sval = apply_resets(advanced, tr.resets);
                out.insert(std::move(next));
            }
            break;
        case SymbolClass::Return:
            for (const auto& tr : a.pops) {
                if (tr.from != cfg.state || tr.symbol != letter.symbol) continue;
                const bool at_bottom = cfg.stack.empty();
                if (tr.pop == kStackBottom) {
                    if (!at_bottom) continue;
                } else {
                    if (at_bottom || cfg.stack.back() != tr.pop) continue;
                }
                if (!constraint_sat(advanced, events, tr.guard)) continue;
                Configuration next;
                next.state = tr.to;
                next.stack = cfg.stack;
                if (!at_bottom) next.stack.pop_back();
                next.sval = apply_resets(advanced, tr.resets);
                out.insert(std::move(next));
            }
            break;
        case SymbolClass::Internal:
            for (const auto& tr : a.internals) {
                if (tr.from != cfg.state || tr.symbol != letter.symbol) continue;
                if (!constraint_sat(advanced, events, tr.guard)) continue;
                Configuration next;
                next.state = tr.to;
                next.stack = cfg.stack;
                next.sval = apply_resets(advanced, tr.resets);
                out.insert(std::move(next));
            }
            break;
    }
    return out;
}

namespace {

void check_word(const NestedVpta& a, const TimedWord& w) {
    for (const auto& l : w.letters)
        if (!a.alphabet.contains(l.symbol))
            fail(ErrorCode::AlphabetMismatch,
                 "word symbol not in automaton alphabet: " + l.symbol);
    if (auto bad = w.check()) fail(ErrorCode::BadArgument, *bad);
}

} // namespace

std::set<Configuration> run_prefixes(const NestedVpta& a, const TimedWord& w) {
    check_word(a, w);
    std::set<Configuration> frontier;
    for (const auto& q : a.initial) frontier.insert(initial_configuration(a, q));
    Rational prev = 0;
    for (size_t i = 0; i < w.size(); ++i) {
        const auto events = clock_valuation(w, a.alphabet, i);
        std::set<Configuration> next;
        for (const auto& cfg : frontier) {
            auto succ = step(a, cfg, w.letters[i], prev, events);
            next.insert(succ.begin(), succ.end());
        }
        frontier = std::move(next);
        prev = w.letters[i].time;
    }
    return frontier;
}

bool accepts_finite(const NestedVpta& a, const TimedWord& w) {
    for (const auto& cfg : run_prefixes(a, w))
        if (a.finite_accepting.count(cfg.state)) return true;
    return false;
}

namespace {

BuchiMask state_mask(const NestedVpta& a, const State& q) {
    BuchiMask m = 0;
    for (size_t i = 0; i < a.buchi.size() && i < 64; ++i)
        if (a.buchi[i].count(q)) m |= BuchiMask{1} << i;
    return m;
}

} // namespace

std::set<std::pair<State, BuchiMask>> feasible_states(const NestedVpta& a,
                                                      const TimedWord& w) {
    check_word(a, w);
    std::set<std::pair<Configuration, BuchiMask>> frontier;
    for (const auto& q : a.initial) {
        auto cfg = initial_configuration(a, q);
        frontier.insert({cfg, state_mask(a, q)});
    }
    Rational prev = 0;
    for (size_t i = 0; i < w.size(); ++i) {
        const auto events = clock_valuation(w, a.alphabet, i);
        std::set<std::pair<Configuration, BuchiMask>> next;
        for (const auto& [cfg, mask] : frontier) {
            for (const auto& succ : step(a, cfg, w.letters[i], prev, events))
                next.insert({succ, mask | state_mask(a, succ.state)});
        }
        frontier = std::move(next);
        prev = w.letters[i].time;
    }
    std::set<std::pair<State, BuchiMask>> out;
    for (const auto& [cfg, mask] : frontier) out.insert({cfg.state, mask});
    return out;
}

std::set<State> feasible_state_set(const NestedVpta& a, const TimedWord& w) {
    std::set<State> out;
    for (const auto& cfg : run_prefixes(a, w)) out.insert(cfg.state);
    return out;
}

} // namespace ecna
