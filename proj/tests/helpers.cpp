#include "helpers.hpp"

namespace ecna::testing {

NestedVpta random_automaton(std::mt19937& rng, const RandomAutomatonConfig& config) {
    NestedVpta m;
    m.alphabet = example_alphabet();
    for (size_t i = 0; i < config.states; ++i) m.states.insert("s" + std::to_string(i));
    m.initial = {"s0"};
    for (size_t i = 0; i < config.stack_symbols; ++i)
        m.stack.insert("g" + std::to_string(i));
    m.event_clocks.insert(config.clock_pool.begin(), config.clock_pool.end());

    auto pick_state = [&] {
        return "s" + std::to_string(std::uniform_int_distribution<size_t>(
                         0, config.states - 1)(rng));
    };
    auto pick_stack = [&] {
        return "g" + std::to_string(std::uniform_int_distribution<size_t>(
                         0, config.stack_symbols - 1)(rng));
    };
    auto pick_guard = [&] {
        ClockConstraint g;
        if (config.clock_pool.empty()) return g;
        if (std::uniform_real_distribution<>(0, 1)(rng) >= config.guard_probability)
            return g;
        const auto& clock = config.clock_pool[std::uniform_int_distribution<size_t>(
            0, config.clock_pool.size() - 1)(rng)];
        int shape = std::uniform_int_distribution<int>(0, config.allow_undef_atoms ? 3 : 2)(rng);
        unsigned long bound = config.bounds[std::uniform_int_distribution<size_t>(
            0, config.bounds.size() - 1)(rng)];
        Interval iv;
        switch (shape) {
            case 0: iv = Interval::point(bound); break;
            case 1: iv = Interval::bounded(0, false, bound, false); break;
            case 2: iv = Interval::at_least(bound); break;
            default: iv = Interval::undef_singleton(); break;
        }
        g.atoms.push_back({clock, iv});
        return g;
    };

    const auto symbols = m.alphabet.all();
    for (const auto& q : m.states) {
        for (size_t k = 0; k < config.transitions_per_state; ++k) {
            const auto& sym = symbols[std::uniform_int_distribution<size_t>(
                0, symbols.size() - 1)(rng)];
            auto cls = *m.alphabet.classify(sym);
            switch (cls) {
                case SymbolClass::Call:
                    m.pushes.push_back({q, sym, pick_guard(), {}, pick_state(), pick_stack()});
                    break;
                case SymbolClass::Return:
                    if (std::uniform_int_distribution<int>(0, 3)(rng) == 0)
                        m.pops.push_back({q, sym, pick_guard(), {}, kStackBottom, pick_state()});
                    else
                        m.pops.push_back({q, sym, pick_guard(), {}, pick_stack(), pick_state()});
                    break;
                case SymbolClass::Internal:
                    m.internals.push_back({q, sym, pick_guard(), {}, pick_state()});
                    break;
            }
        }
    }

    std::set<State> finals;
    for (const auto& q : m.states)
        if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) finals.insert(q);
    if (finals.empty()) finals.insert(pick_state());
    m.buchi = {finals};
    m.finite_accepting = finals;
    m.sort_transitions();
    return m;
}

TimedWord random_word(std::mt19937& rng, size_t max_len) {
    const size_t len = std::uniform_int_distribution<size_t>(0, max_len)(rng);
    TimedWord w;
    Rational now = 0;
    long depth = 0;
    for (size_t i = 0; i < len; ++i) {
        int roll = std::uniform_int_distribution<int>(0, 5)(rng);
        Symbol sym;
        if (roll == 0) {
            sym = "c";
            ++depth;
        } else if (roll == 1 || (roll == 2 && depth > 0)) {
            sym = "r";
            if (depth > 0) --depth;
        } else {
            const char* internals[] = {"a", "b", "i"};
            sym = internals[std::uniform_int_distribution<int>(0, 2)(rng)];
        }
        if (std::uniform_int_distribution<int>(0, 2)(rng) != 0)
            now += Rational(std::uniform_int_distribution<int>(1, 4)(rng), 4);
        w.letters.push_back({sym, now});
    }
    return w;
}

} // namespace ecna::testing
