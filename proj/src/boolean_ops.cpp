#include "ecna/boolean_ops.hpp"

#include "ecna/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace ecna {

namespace {

void require_same_alphabet(const NestedVpta& a, const NestedVpta& b) {
    if (!(a.alphabet == b.alphabet))
        fail(ErrorCode::AlphabetMismatch, "operands use different pushdown alphabets");
}

State tag_state(int side, const State& q) { return std::to_string(side) + ":" + q; }

StackSymbol tag_stack(int side, const StackSymbol& g) {
    return g == kStackBottom ? g : std::to_string(side) + ":" + g;
}

} // namespace

NestedVpta union_automata(const NestedVpta& a, const NestedVpta& b) {
    require_same_alphabet(a, b);
    require_valid(a);
    require_valid(b);

    NestedVpta out;
    out.alphabet = a.alphabet;
    out.event_clocks = a.event_clocks;
    out.event_clocks.insert(b.event_clocks.begin(), b.event_clocks.end());
    out.standard_clocks = a.standard_clocks;
    out.standard_clocks.insert(b.standard_clocks.begin(), b.standard_clocks.end());

    auto copy_side = [&](const NestedVpta& src, int side) {
        for (const auto& q : src.states) out.states.insert(tag_state(side, q));
        for (const auto& q : src.initial) out.initial.insert(tag_state(side, q));
        for (const auto& g : src.stack) out.stack.insert(tag_stack(side, g));
        for (const auto& t : src.pushes)
            out.pushes.push_back({tag_state(side, t.from), t.symbol, t.guard, t.resets,
                                  tag_state(side, t.to), tag_stack(side, t.push)});
        for (const auto& t : src.pops)
            out.pops.push_back({tag_state(side, t.from), t.symbol, t.guard, t.resets,
                                tag_stack(side, t.pop), tag_state(side, t.to)});
        for (const auto& t : src.internals)
            out.internals.push_back({tag_state(side, t.from), t.symbol, t.guard,
                                     t.resets, tag_state(side, t.to)});
        for (const auto& q : src.finite_accepting)
            out.finite_accepting.insert(tag_state(side, q));
    };
    copy_side(a, 1);
    copy_side(b, 2);

    // Runs never cross sides, so components may be paired up; the shorter
    // family repeats its last component.
    const size_t k = std::max(a.buchi.size(), b.buchi.size());
    for (size_t h = 0; h < k; ++h) {
        std::set<State> component;
        const auto& fa = a.buchi[std::min(h, a.buchi.size() - 1)];
        const auto& fb = b.buchi[std::min(h, b.buchi.size() - 1)];
        for (const auto& q : fa) component.insert(tag_state(1, q));
        for (const auto& q : fb) component.insert(tag_state(2, q));
        out.buchi.push_back(std::move(component));
    }
    out.sort_transitions();
    return out;
}

namespace {

struct ProductNaming {
    bool flagged;

    State operator()(const State& q, const State& p, int f) const {
        std::string name = "(" + q + "|" + p;
        if (flagged) name += "|" + std::to_string(f);
        return name + ")";
    }
    StackSymbol pair_stack(const StackSymbol& g1, const StackSymbol& g2) const {
        return "(" + g1 + "|" + g2 + ")";
    }
};

ClockConstraint retag_standard(const ClockConstraint& g, int side) {
    ClockConstraint out = g;
    for (auto& atom : out.atoms)
        if (atom.clock.kind == ClockKind::Standard)
            atom.clock.name = std::to_string(side) + ":" + atom.clock.name;
    return out;
}

std::set<ClockName> retag_resets(const std::set<ClockName>& resets, int side) {
    std::set<ClockName> out;
    for (const auto& r : resets) out.insert(std::to_string(side) + ":" + r);
    return out;
}

} // namespace

NestedVpta intersection(const NestedVpta& a, const NestedVpta& b) {
    require_same_alphabet(a, b);
    require_valid(a);
    require_valid(b);

    const bool flagged = a.buchi.size() == 1 && b.buchi.size() == 1;
    ProductNaming name{flagged};
    const std::vector<int> flags = flagged ? std::vector<int>{0, 1} : std::vector<int>{0};

    NestedVpta out;
    out.alphabet = a.alphabet;
    out.event_clocks = a.event_clocks;
    out.event_clocks.insert(b.event_clocks.begin(), b.event_clocks.end());
    for (const auto& c : a.standard_clocks) out.standard_clocks.insert("1:" + c);
    for (const auto& c : b.standard_clocks) out.standard_clocks.insert("2:" + c);

    for (const auto& q : a.states)
        for (const auto& p : b.states)
            for (int f : flags) out.states.insert(name(q, p, f));
    for (const auto& q : a.initial)
        for (const auto& p : b.initial) out.initial.insert(name(q, p, 0));
    for (const auto& g1 : a.stack)
        for (const auto& g2 : b.stack) out.stack.insert(name.pair_stack(g1, g2));

    auto next_flag = [&](int f, const State& q, const State& p) {
        if (!flagged) return 0;
        if (f == 0) return a.buchi[0].count(q) ? 1 : 0;
        return b.buchi[0].count(p) ? 0 : 1;
    };

    for (const auto& t1 : a.pushes)
        for (const auto& t2 : b.pushes) {
            if (t1.symbol != t2.symbol) continue;
            auto guard = retag_standard(t1.guard, 1).conjoin(retag_standard(t2.guard, 2));
            auto resets = retag_resets(t1.resets, 1);
            auto resets2 = retag_resets(t2.resets, 2);
            resets.insert(resets2.begin(), resets2.end());
            for (int f : flags)
                out.pushes.push_back({name(t1.from, t2.from, f), t1.symbol, guard, resets,
                                      name(t1.to, t2.to, next_flag(f, t1.from, t2.from)),
                                      name.pair_stack(t1.push, t2.push)});
        }
    for (const auto& t1 : a.pops)
        for (const auto& t2 : b.pops) {
            if (t1.symbol != t2.symbol) continue;
            const bool bot1 = t1.pop == kStackBottom;
            const bool bot2 = t2.pop == kStackBottom;
            if (bot1 != bot2) continue; // depths stay synchronized
            auto guard = retag_standard(t1.guard, 1).conjoin(retag_standard(t2.guard, 2));
            auto resets = retag_resets(t1.resets, 1);
            auto resets2 = retag_resets(t2.resets, 2);
            resets.insert(resets2.begin(), resets2.end());
            StackSymbol popped = bot1 ? kStackBottom : name.pair_stack(t1.pop, t2.pop);
            for (int f : flags)
                out.pops.push_back({name(t1.from, t2.from, f), t1.symbol, guard, resets,
                                    popped,
                                    name(t1.to, t2.to, next_flag(f, t1.from, t2.from))});
        }
    for (const auto& t1 : a.internals)
        for (const auto& t2 : b.internals) {
            if (t1.symbol != t2.symbol) continue;
            auto guard = retag_standard(t1.guard, 1).conjoin(retag_standard(t2.guard, 2));
            auto resets = retag_resets(t1.resets, 1);
            auto resets2 = retag_resets(t2.resets, 2);
            resets.insert(resets2.begin(), resets2.end());
            for (int f : flags)
                out.internals.push_back({name(t1.from, t2.from, f), t1.symbol, guard,
                                         resets,
                                         name(t1.to, t2.to, next_flag(f, t1.from, t2.from))});
        }

    if (flagged) {
        std::set<State> accepting;
        for (const auto& q : a.states)
            for (const auto& p : b.buchi[0]) accepting.insert(name(q, p, 1));
        out.buchi.push_back(std::move(accepting));
    } else {
        for (const auto& fa : a.buchi) {
            std::set<State> component;
            for (const auto& q : fa)
                for (const auto& p : b.states) component.insert(name(q, p, 0));
            out.buchi.push_back(std::move(component));
        }
        for (const auto& fb : b.buchi) {
            std::set<State> component;
            for (const auto& q : a.states)
                for (const auto& p : fb) component.insert(name(q, p, 0));
            out.buchi.push_back(std::move(component));
        }
    }
    for (const auto& q : a.finite_accepting)
        for (const auto& p : b.finite_accepting)
            for (int f : flags) out.finite_accepting.insert(name(q, p, f));
    out.sort_transitions();
    return out;
}

UntimedResult untimed_hom(const NestedVpta& a) {
    require_valid(a);
    if (!a.standard_clocks.empty())
        fail(ErrorCode::NotEcna, "region expansion needs an automaton without standard clocks");

    UntimedResult out;
    out.table = make_interval_alphabet(
        a.alphabet, a.event_clocks, canonical_intervals(guard_constants(a)));
    const auto regions = all_regions(a.event_clocks, out.table.intervals);

    NestedVpta& vpa = out.vpa;
    vpa.alphabet = out.table.lambda;
    vpa.states = a.states;
    vpa.initial = a.initial;
    vpa.stack = a.stack;
    vpa.buchi = a.buchi;
    vpa.finite_accepting = a.finite_accepting;

    for (const auto& t : a.pushes)
        for (const auto& region : regions)
            if (region_inside(region, t.guard))
                vpa.pushes.push_back({t.from, out.table.encode({t.symbol, region}),
                                      {}, {}, t.to, t.push});
    for (const auto& t : a.pops)
        for (const auto& region : regions)
            if (region_inside(region, t.guard))
                vpa.pops.push_back({t.from, out.table.encode({t.symbol, region}),
                                    {}, {}, t.pop, t.to});
    for (const auto& t : a.internals)
        for (const auto& region : regions)
            if (region_inside(region, t.guard))
                vpa.internals.push_back({t.from, out.table.encode({t.symbol, region}),
                                         {}, {}, t.to});
    vpa.sort_transitions();
    return out;
}

NestedVpta timed_hom(const NestedVpta& vpa, const IntervalSymbolTable& table) {
    require_valid(vpa);
    auto decode = [&](const Symbol& composite) -> const IntervalLetter& {
        auto it = table.decode.find(composite);
        if (it == table.decode.end())
            fail(ErrorCode::RegionClockMismatch,
                 "letter not in the interval alphabet: " + composite);
        return it->second;
    };

    NestedVpta out;
    out.alphabet = table.sigma;
    out.states = vpa.states;
    out.initial = vpa.initial;
    out.stack = vpa.stack;
    out.buchi = vpa.buchi;
    out.finite_accepting = vpa.finite_accepting;
    out.event_clocks = table.clocks;

    for (const auto& t : vpa.pushes) {
        const auto& letter = decode(t.symbol);
        out.pushes.push_back({t.from, letter.base, letter.region.to_constraint(),
                              {}, t.to, t.push});
    }
    for (const auto& t : vpa.pops) {
        const auto& letter = decode(t.symbol);
        out.pops.push_back({t.from, letter.base, letter.region.to_constraint(),
                            {}, t.pop, t.to});
    }
    for (const auto& t : vpa.internals) {
        const auto& letter = decode(t.symbol);
        out.internals.push_back({t.from, letter.base, letter.region.to_constraint(),
                                 {}, t.to});
    }
    out.sort_transitions();
    return out;
}

namespace {

void require_clockless(const NestedVpta& a) {
    if (!a.event_clocks.empty() || !a.standard_clocks.empty())
        fail(ErrorCode::BadArgument, "expected a clockless automaton");
}

using StatePair = std::pair<State, State>;

struct DetState {
    std::set<StatePair> summary;
    std::set<State> reached;

    bool operator<(const DetState& o) const {
        if (summary != o.summary) return summary < o.summary;
        return reached < o.reached;
    }
    bool operator==(const DetState&) const = default;
};

std::string det_name(const DetState& s) {
    std::ostringstream os;
    os << "S{";
    bool first = true;
    for (const auto& [x, y] : s.summary) {
        if (!first) os << ',';
        os << '(' << x << '>' << y << ')';
        first = false;
    }
    os << "}R{";
    first = true;
    for (const auto& q : s.reached) {
        if (!first) os << ',';
        os << q;
        first = false;
    }
    os << '}';
    return os.str();
}

} // namespace

NestedVpta determinize_vpa_finite(const NestedVpta& input) {
    require_valid(input);
    require_clockless(input);

    // Index transitions by symbol.
    std::map<Symbol, std::vector<const InternalTransition*>> internals;
    std::map<Symbol, std::vector<const PushTransition*>> pushes;
    std::map<Symbol, std::vector<const PopTransition*>> pops;      // matched
    std::map<Symbol, std::vector<const PopTransition*>> bot_pops;  // at bottom
    for (const auto& t : input.internals) internals[t.symbol].push_back(&t);
    for (const auto& t : input.pushes) pushes[t.symbol].push_back(&t);
    for (const auto& t : input.pops)
        (t.pop == kStackBottom ? bot_pops : pops)[t.symbol].push_back(&t);

    DetState start;
    for (const auto& q : input.initial) {
        start.summary.insert({q, q});
        start.reached.insert(q);
    }

    struct DetStack {
        DetState state;
        Symbol call;

        bool operator<(const DetStack& o) const {
            if (!(state == o.state)) return state < o.state;
            return call < o.call;
        }
    };
    auto stack_name = [&](const DetStack& g) {
        return "<" + det_name(g.state) + "@" + g.call + ">";
    };

    std::map<DetState, State> state_names;
    std::map<DetStack, StackSymbol> stack_names;
    std::deque<DetState> state_work;
    std::deque<DetStack> stack_work;
    auto intern_state = [&](const DetState& s) {
        auto [it, inserted] = state_names.emplace(s, det_name(s));
        if (inserted) state_work.push_back(s);
        return it->second;
    };
    auto intern_stack = [&](const DetStack& g) {
        auto [it, inserted] = stack_names.emplace(g, stack_name(g));
        if (inserted) stack_work.push_back(g);
        return it->second;
    };

    NestedVpta out;
    out.alphabet = input.alphabet;
    out.initial = {intern_state(start)};

    auto step_internal = [&](const DetState& s, const Symbol& a) {
        DetState next;
        auto it = internals.find(a);
        if (it != internals.end())
            for (const auto* t : it->second) {
                for (const auto& [x, y] : s.summary)
                    if (y == t->from) next.summary.insert({x, t->to});
                if (s.reached.count(t->from)) next.reached.insert(t->to);
            }
        return next;
    };
    auto step_bot_pop = [&](const DetState& s, const Symbol& r) {
        DetState next;
        auto it = bot_pops.find(r);
        if (it != bot_pops.end())
            for (const auto* t : it->second) {
                for (const auto& [x, y] : s.summary)
                    if (y == t->from) next.summary.insert({x, t->to});
                if (s.reached.count(t->from)) next.reached.insert(t->to);
            }
        return next;
    };
    auto step_call = [&](const DetState& s, const Symbol& c) {
        DetState next;
        auto it = pushes.find(c);
        if (it != pushes.end())
            for (const auto* t : it->second)
                if (s.reached.count(t->from)) {
                    next.summary.insert({t->to, t->to});
                    next.reached.insert(t->to);
                }
        return next;
    };
    // Matched return: re-resolve the call transition from the frame below and
    // thread the inner summary through matching push/pop stack symbols.
    auto step_pop = [&](const DetState& s, const DetStack& frame, const Symbol& r) {
        DetState next;
        auto it = pops.find(r);
        if (it == pops.end()) return next;
        auto push_it = pushes.find(frame.call);
        if (push_it == pushes.end()) return next;
        for (const auto* call_t : push_it->second) {
            for (const auto* pop_t : it->second) {
                if (pop_t->pop != call_t->push) continue;
                if (!s.summary.count({call_t->to, pop_t->from})) continue;
                for (const auto& [x, y] : frame.state.summary)
                    if (y == call_t->from) next.summary.insert({x, pop_t->to});
                if (frame.state.reached.count(call_t->from))
                    next.reached.insert(pop_t->to);
            }
        }
        return next;
    };

    const auto symbols = input.alphabet.all();
    std::set<std::pair<DetState, DetStack>> paired;
    while (!state_work.empty() || !stack_work.empty()) {
        if (!state_work.empty()) {
            DetState s = state_work.front();
            state_work.pop_front();
            const State from = state_names.at(s);
            for (const auto& a : symbols) {
                switch (*input.alphabet.classify(a)) {
                    case SymbolClass::Internal:
                        out.internals.push_back({from, a, {}, {}, intern_state(step_internal(s, a))});
                        break;
                    case SymbolClass::Call: {
                        StackSymbol g = intern_stack({s, a});
                        out.pushes.push_back({from, a, {}, {}, intern_state(step_call(s, a)), g});
                        break;
                    }
                    case SymbolClass::Return:
                        out.pops.push_back({from, a, {}, {}, kStackBottom,
                                            intern_state(step_bot_pop(s, a))});
                        break;
                }
            }
            for (const auto& [frame, g] : stack_names)
                if (paired.insert({s, frame}).second)
                    for (const auto& r : input.alphabet.returns)
                        out.pops.push_back({state_names.at(s), r, {}, {}, g,
                                            intern_state(step_pop(s, frame, r))});
        } else {
            DetStack frame = stack_work.front();
            stack_work.pop_front();
            for (const auto& [s, nm] : state_names)
                if (paired.insert({s, frame}).second)
                    for (const auto& r : input.alphabet.returns)
                        out.pops.push_back({nm, r, {}, {}, stack_names.at(frame),
                                            intern_state(step_pop(s, frame, r))});
        }
    }

    for (const auto& [s, nm] : state_names) {
        out.states.insert(nm);
        bool final = false;
        for (const auto& q : s.reached)
            if (input.finite_accepting.count(q)) final = true;
        if (final) out.finite_accepting.insert(nm);
    }
    for (const auto& [frame, nm] : stack_names) out.stack.insert(nm);
    out.buchi = {out.finite_accepting};
    out.sort_transitions();
    return out;
}

NestedVpta complement_finite(const NestedVpta& a) {
    require_valid(a);
    if (!a.standard_clocks.empty())
        fail(ErrorCode::NotEcna, "finite complement needs an automaton without standard clocks");
    auto untimed = untimed_hom(a);
    auto det = determinize_vpa_finite(untimed.vpa);
    std::set<State> flipped;
    for (const auto& q : det.states)
        if (!det.finite_accepting.count(q)) flipped.insert(q);
    det.finite_accepting = flipped;
    det.buchi = {flipped};
    return timed_hom(det, untimed.table);
}

} // namespace ecna
