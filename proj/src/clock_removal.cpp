#include "ecna/clock_removal.hpp"

#include "ecna/error.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace ecna {

namespace {

// --- bound halves of an interval atom --------------------------------------

struct Lower {
    unsigned long value = 0;
    bool strict = false; // > vs >=

    auto operator<=>(const Lower&) const = default;
    bool trivial() const { return value == 0 && !strict; } // >= 0
    Interval check() const { return Interval::at_least(value, strict); }
    std::string str() const {
        return (strict ? ">" : ">=") + std::to_string(value);
    }
};

struct Upper {
    std::optional<unsigned long> value; // nullopt = unbounded
    bool strict = true;

    auto operator<=>(const Upper&) const = default;
    bool trivial() const { return !value.has_value(); }
    Interval check() const {
        return Interval::bounded(0, false, *value, strict);
    }
    std::string str() const {
        if (!value) return "<inf";
        return (strict ? "<" : "<=") + std::to_string(*value);
    }
};

struct AtomBounds {
    bool undef = true;
    Lower lo;
    Upper up;
};

AtomBounds atom_bounds(const Interval& interval) {
    AtomBounds out;
    if (interval.undef) return out;
    auto view = bound_view(interval);
    out.undef = false;
    out.lo = {view.lower, view.lower_strict};
    out.up = {view.upper, view.upper_strict};
    return out;
}

// --- obligation sets --------------------------------------------------------

enum class Freshness { First, Live };

struct Obligations {
    std::set<Lower> lowers;
    std::map<Upper, Freshness> uppers;

    auto operator<=>(const Obligations&) const = default;

    bool empty() const { return lowers.empty() && uppers.empty(); }
    bool live_only() const {
        if (!lowers.empty()) return false;
        for (const auto& [u, f] : uppers)
            if (f == Freshness::First) return false;
        return true;
    }
    Obligations live() const {
        Obligations out;
        for (const auto& [u, f] : uppers)
            if (f == Freshness::Live) out.uppers.emplace(u, f);
        return out;
    }
    Obligations live_all() const { // every upper demoted to live, lowers dropped
        Obligations out;
        for (const auto& [u, f] : uppers) out.uppers.emplace(u, Freshness::Live);
        return out;
    }
    std::string str() const {
        std::ostringstream os;
        os << "O{";
        bool first = true;
        for (const auto& l : lowers) {
            if (!first) os << ',';
            os << l.str();
            first = false;
        }
        for (const auto& [u, f] : uppers) {
            if (!first) os << ',';
            os << (f == Freshness::Live ? "live" : "first") << u.str();
            first = false;
        }
        os << '}';
        return os.str();
    }
};

// Every obligation set over the given bound universes.
std::vector<Obligations> all_obligations(const std::vector<Lower>& lowers,
                                         const std::vector<Upper>& uppers) {
    std::vector<Obligations> out{Obligations{}};
    for (const auto& l : lowers) {
        std::vector<Obligations> next;
        for (const auto& base : out) {
            next.push_back(base);
            auto with = base;
            with.lowers.insert(l);
            next.push_back(std::move(with));
        }
        out = std::move(next);
    }
    for (const auto& u : uppers) {
        std::vector<Obligations> next;
        for (const auto& base : out) {
            next.push_back(base);
            auto first = base;
            first.uppers.emplace(u, Freshness::First);
            next.push_back(std::move(first));
            auto live = base;
            live.uppers.emplace(u, Freshness::Live);
            next.push_back(std::move(live));
        }
        out = std::move(next);
    }
    return out;
}

// --- check sets -------------------------------------------------------------

struct Check {
    SymbolClass type = SymbolClass::Internal; // guessed class of the current symbol
    bool expects_b = false;                   // current symbol is the watched one
    bool p_inf = false;
    bool eventually_b = false;                // predictor bookkeeping
    int atom = -1;                            // recorder/caller: index of the used atom

    auto operator<=>(const Check&) const = default;

    std::string str() const {
        std::ostringstream os;
        os << "H{";
        switch (type) {
            case SymbolClass::Call: os << "call"; break;
            case SymbolClass::Return: os << "ret"; break;
            case SymbolClass::Internal: os << "int"; break;
        }
        if (expects_b) os << ",b";
        if (p_inf) os << ",pinf";
        if (eventually_b) os << ",evb";
        if (atom >= 0) os << ",g" << atom;
        os << '}';
        return os.str();
    }
};

// --- shared plumbing ---------------------------------------------------------

enum class TKind { Push, Pop, Internal };

struct TransView {
    TKind kind;
    State from;
    Symbol symbol;
    ClockConstraint rest; // guard minus the removed clock's atom
    AtomBounds atom;
    Interval atom_interval;
    std::set<ClockName> resets;
    State to;
    StackSymbol stack; // push/pop symbol, empty for internal
};

std::vector<TransView> split_transitions(const NestedVpta& a, const ClockId& z) {
    auto split = [&](const ClockConstraint& guard) {
        std::pair<ClockConstraint, Interval> out;
        bool seen = false;
        for (const auto& atom : guard.atoms) {
            if (atom.clock == z) {
                if (seen)
                    fail(ErrorCode::NotNormalized, "several atoms on the removed clock");
                out.second = atom.interval;
                seen = true;
            } else {
                out.first.atoms.push_back(atom);
            }
        }
        if (!seen) fail(ErrorCode::NotNormalized, "transition lacks an atom on the removed clock");
        return out;
    };
    std::vector<TransView> out;
    for (const auto& t : a.pushes) {
        auto [rest, iv] = split(t.guard);
        out.push_back({TKind::Push, t.from, t.symbol, rest, atom_bounds(iv), iv,
                       t.resets, t.to, t.push});
    }
    for (const auto& t : a.pops) {
        auto [rest, iv] = split(t.guard);
        out.push_back({TKind::Pop, t.from, t.symbol, rest, atom_bounds(iv), iv,
                       t.resets, t.to, t.pop});
    }
    for (const auto& t : a.internals) {
        auto [rest, iv] = split(t.guard);
        out.push_back({TKind::Internal, t.from, t.symbol, rest, atom_bounds(iv), iv,
                       t.resets, t.to, ""});
    }
    return out;
}

ClockName fresh_name(std::string base, const std::set<ClockName>& taken) {
    while (taken.count(base)) base += "#";
    return base;
}

StackSymbol fresh_stack_name(std::string base, const std::set<StackSymbol>& taken) {
    while (taken.count(base)) base += "#";
    return base;
}

// Worklist construction of the translated automaton; pops referencing a
// record that was never pushed are held back and flushed if it appears.
struct Builder {
    NestedVpta& out;
    std::map<StackSymbol, std::vector<PopTransition>> held_pops;
    std::set<StackSymbol> pushed_records;

    explicit Builder(NestedVpta& target) : out(target) {}

    void push_transition(const State& from, const Symbol& sym,
                         const ClockConstraint& guard, const std::set<ClockName>& resets,
                         const State& to, const StackSymbol& record) {
        out.pushes.push_back({from, sym, guard, resets, to, record});
        if (pushed_records.insert(record).second) {
            out.stack.insert(record);
            auto it = held_pops.find(record);
            if (it != held_pops.end()) {
                for (auto& t : it->second) out.pops.push_back(std::move(t));
                held_pops.erase(it);
            }
        }
    }
    void pop_transition(const State& from, const Symbol& sym,
                        const ClockConstraint& guard, const std::set<ClockName>& resets,
                        const StackSymbol& record, const State& to) {
        PopTransition t{from, sym, guard, resets, record, to};
        if (record == kStackBottom || pushed_records.count(record))
            out.pops.push_back(std::move(t));
        else
            held_pops[record].push_back(std::move(t));
    }
    void internal_transition(const State& from, const Symbol& sym,
                             const ClockConstraint& guard,
                             const std::set<ClockName>& resets, const State& to) {
        out.internals.push_back({from, sym, guard, resets, to});
    }
};

RemovalResult identity_removal(const NestedVpta& a, const ClockId& z) {
    RemovalResult r;
    r.automaton = a;
    r.automaton.event_clocks.erase(z);
    for (const auto& q : a.states) r.base_of[q] = q;
    for (const auto& g : a.stack) r.stack_base_of[g] = g;
    return r;
}

void require_event_clock(const NestedVpta& a, const ClockId& z) {
    require_valid(a);
    if (!a.event_clocks.count(z))
        fail(ErrorCode::ClockNotPresent,
             "clock not declared: " + clock_to_string(z));
}

// --- global recorder ---------------------------------------------------------

RemovalResult remove_global_recorder(const NestedVpta& a, const Symbol& b) {
    const ClockId z = xg(b);
    if (atoms_on(a, z).empty()) return identity_removal(a, z);
    const NestedVpta norm = normalize_single_atom(a, z);
    const auto views = split_transitions(norm, z);

    bool any_defined = false;
    for (const auto& v : views) any_defined |= !v.atom.undef;
    ClockName clock = fresh_name("zr{" + clock_to_string(z) + "}", a.standard_clocks);

    RemovalResult r;
    NestedVpta& out = r.automaton;
    out.alphabet = a.alphabet;
    out.event_clocks = a.event_clocks;
    out.event_clocks.erase(z);
    out.standard_clocks = a.standard_clocks;
    if (any_defined) {
        out.standard_clocks.insert(clock);
        r.fresh_clocks.push_back(clock);
    }
    out.stack = a.stack;
    for (const auto& g : a.stack) r.stack_base_of[g] = g;

    auto name = [](const State& q, bool seen) {
        return "(" + q + (seen ? ";s1)" : ";s0)");
    };
    for (const auto& q : a.states)
        for (bool seen : {false, true}) {
            out.states.insert(name(q, seen));
            r.base_of[name(q, seen)] = q;
        }
    for (const auto& q : a.initial) out.initial.insert(name(q, false));

    for (const auto& v : views) {
        for (bool seen : {false, true}) {
            // The bot atom needs the symbol unseen, a defined atom needs it seen.
            if (v.atom.undef == seen) continue;
            ClockConstraint guard = v.rest;
            if (!v.atom.undef) guard.atoms.push_back({std_clock(clock), v.atom_interval});
            auto resets = v.resets;
            const bool seen_next = seen || v.symbol == b;
            if (v.symbol == b && any_defined) resets.insert(clock);
            switch (v.kind) {
                case TKind::Push:
                    out.pushes.push_back({name(v.from, seen), v.symbol, guard, resets,
                                          name(v.to, seen_next), v.stack});
                    break;
                case TKind::Pop:
                    out.pops.push_back({name(v.from, seen), v.symbol, guard, resets,
                                        v.stack, name(v.to, seen_next)});
                    break;
                case TKind::Internal:
                    out.internals.push_back({name(v.from, seen), v.symbol, guard, resets,
                                             name(v.to, seen_next)});
                    break;
            }
        }
    }
    for (const auto& f : a.buchi) {
        std::set<State> lifted;
        for (const auto& q : f)
            for (bool seen : {false, true}) lifted.insert(name(q, seen));
        out.buchi.push_back(std::move(lifted));
    }
    for (const auto& q : a.finite_accepting)
        for (bool seen : {false, true}) out.finite_accepting.insert(name(q, seen));
    out.sort_transitions();
    return r;
}

// --- global predictor ----------------------------------------------------

RemovalResult remove_global_predictor(const NestedVpta& a, const Symbol& b) {
    const ClockId z = yg(b);
    if (atoms_on(a, z).empty()) return identity_removal(a, z);
    const NestedVpta norm = normalize_single_atom(a, z);
    const auto views = split_transitions(norm, z);

    std::map<Lower, ClockName> lower_clock;
    std::map<Upper, ClockName> upper_clock;
    RemovalResult r;
    std::set<ClockName> taken = a.standard_clocks;
    for (const auto& v : views) {
        if (v.atom.undef) continue;
        if (!v.atom.lo.trivial() && !lower_clock.count(v.atom.lo)) {
            auto n = fresh_name("zl{" + clock_to_string(z) + "}" + v.atom.lo.str(), taken);
            lower_clock[v.atom.lo] = n;
            taken.insert(n);
            r.fresh_clocks.push_back(n);
        }
        if (!v.atom.up.trivial() && !upper_clock.count(v.atom.up)) {
            auto n = fresh_name("zu{" + clock_to_string(z) + "}" + v.atom.up.str(), taken);
            upper_clock[v.atom.up] = n;
            taken.insert(n);
            r.fresh_clocks.push_back(n);
        }
    }

    // Promises awaiting the next occurrence: pending bounds, plus a flag for
    // promises whose bounds are all trivial. nb claims the symbol never
    // occurs again; jb records whether it was just read.
    struct SData {
        State q;
        std::set<Lower> lowers;
        std::set<Upper> uppers;
        bool pending = false;
        bool jb = false;
        bool nb = false;

        auto operator<=>(const SData&) const = default;
    };
    auto name = [](const SData& s) {
        std::ostringstream os;
        os << '(' << s.q << ";{";
        bool first = true;
        for (const auto& l : s.lowers) {
            if (!first) os << ',';
            os << l.str();
            first = false;
        }
        for (const auto& u : s.uppers) {
            if (!first) os << ',';
            os << u.str();
            first = false;
        }
        os << '}' << (s.pending ? ";p1" : ";p0") << (s.jb ? "j1" : "j0")
           << (s.nb ? "n1)" : "n0)");
        return os.str();
    };

    Builder builder(r.automaton);
    NestedVpta& out = builder.out;
    out.alphabet = a.alphabet;
    out.event_clocks = a.event_clocks;
    out.event_clocks.erase(z);
    out.standard_clocks = taken;
    out.stack = a.stack;
    for (const auto& g : a.stack) {
        builder.pushed_records.insert(g);
        r.stack_base_of[g] = g;
    }

    std::map<SData, State> names;
    std::deque<SData> work;
    auto intern = [&](const SData& s) {
        auto [it, inserted] = names.emplace(s, name(s));
        if (inserted) work.push_back(s);
        return it->second;
    };
    for (const auto& q : a.initial) out.initial.insert(intern({q, {}, {}, false, false, false}));

    while (!work.empty()) {
        SData s = work.front();
        work.pop_front();
        const State from = names.at(s);
        for (const auto& v : views) {
            if (v.from != s.q) continue;
            const bool is_b = v.symbol == b;
            if (is_b && s.nb) continue;
            ClockConstraint guard = v.rest;
            if (is_b) {
                for (const auto& l : s.lowers)
                    if (!l.trivial())
                        guard.atoms.push_back({std_clock(lower_clock.at(l)), l.check()});
                for (const auto& u : s.uppers)
                    if (!u.trivial())
                        guard.atoms.push_back({std_clock(upper_clock.at(u)), u.check()});
            }
            SData next;
            next.q = v.to;
            next.jb = is_b;
            auto resets = v.resets;
            const auto base_lowers = is_b ? std::set<Lower>{} : s.lowers;
            const auto base_uppers = is_b ? std::set<Upper>{} : s.uppers;
            const bool base_pending = is_b ? false : s.pending;
            if (v.atom.undef) {
                // No further occurrence: nothing may be pending.
                if (!base_lowers.empty() || !base_uppers.empty() || base_pending)
                    continue;
                next.nb = true;
            } else {
                if (s.nb) continue;
                next.nb = false;
                next.lowers = base_lowers;
                next.uppers = base_uppers;
                next.pending = true;
                if (!v.atom.lo.trivial()) {
                    next.lowers.insert(v.atom.lo);
                    resets.insert(lower_clock.at(v.atom.lo));
                }
                if (!v.atom.up.trivial()) {
                    if (!base_uppers.count(v.atom.up))
                        resets.insert(upper_clock.at(v.atom.up));
                    next.uppers.insert(v.atom.up);
                }
            }
            const State to = intern(next);
            switch (v.kind) {
                case TKind::Push:
                    builder.push_transition(from, v.symbol, guard, resets, to, v.stack);
                    break;
                case TKind::Pop:
                    builder.pop_transition(from, v.symbol, guard, resets, v.stack, to);
                    break;
                case TKind::Internal:
                    builder.internal_transition(from, v.symbol, guard, resets, to);
                    break;
            }
        }
    }

    for (const auto& [s, nm] : names) {
        out.states.insert(nm);
        r.base_of[nm] = s.q;
        if (s.pending) r.pending_states.insert(nm);
    }
    for (const auto& f : a.buchi) {
        std::set<State> lifted;
        for (const auto& [s, nm] : names)
            if (f.count(s.q)) lifted.insert(nm);
        out.buchi.push_back(std::move(lifted));
    }
    {
        // Every promise is eventually discharged: the symbol was just read,
        // or nothing is pending.
        std::set<State> live;
        for (const auto& [s, nm] : names)
            if (s.jb || !s.pending) live.insert(nm);
        out.buchi.push_back(std::move(live));
    }
    for (const auto& q : a.finite_accepting)
        for (const auto& [s, nm] : names)
            if (s.q == q) out.finite_accepting.insert(nm);
    out.sort_transitions();
    return r;
}

} // namespace

RemovalResult remove_global(const NestedVpta& a, const ClockId& z) {
    require_event_clock(a, z);
    if (z.kind == ClockKind::GlobalRecorder) return remove_global_recorder(a, z.name);
    if (z.kind == ClockKind::GlobalPredictor) return remove_global_predictor(a, z.name);
    fail(ErrorCode::BadArgument, "not a global clock: " + clock_to_string(z));
}

// --- frame predictor ----------------------------------------------------

namespace {

struct FrameCommon {
    std::vector<Lower> lowers;             // non-trivial bounds only
    std::vector<Upper> uppers;
    std::map<Lower, ClockName> lower_clock;
    std::map<Upper, ClockName> upper_clock;
    std::vector<Obligations> obligation_universe;
    StackSymbol bad;

    ClockConstraint check_guard(const Obligations& o) const {
        ClockConstraint g;
        for (const auto& l : o.lowers)
            g.atoms.push_back({std_clock(lower_clock.at(l)), l.check()});
        for (const auto& [u, f] : o.uppers)
            g.atoms.push_back({std_clock(upper_clock.at(u)), u.check()});
        return g;
    }
};

FrameCommon frame_common(const NestedVpta& a, const ClockId& z,
                         const std::vector<TransView>& views,
                         std::set<ClockName>& taken, RemovalResult& r) {
    FrameCommon c;
    for (const auto& v : views) {
        if (v.atom.undef) continue;
        if (!v.atom.lo.trivial() &&
            std::find(c.lowers.begin(), c.lowers.end(), v.atom.lo) == c.lowers.end())
            c.lowers.push_back(v.atom.lo);
        if (!v.atom.up.trivial() &&
            std::find(c.uppers.begin(), c.uppers.end(), v.atom.up) == c.uppers.end())
            c.uppers.push_back(v.atom.up);
    }
    std::sort(c.lowers.begin(), c.lowers.end());
    std::sort(c.uppers.begin(), c.uppers.end());
    for (const auto& l : c.lowers) {
        auto n = fresh_name("zl{" + clock_to_string(z) + "}" + l.str(), taken);
        c.lower_clock[l] = n;
        taken.insert(n);
        r.fresh_clocks.push_back(n);
    }
    for (const auto& u : c.uppers) {
        auto n = fresh_name("zu{" + clock_to_string(z) + "}" + u.str(), taken);
        c.upper_clock[u] = n;
        taken.insert(n);
        r.fresh_clocks.push_back(n);
    }
    c.obligation_universe = all_obligations(c.lowers, c.uppers);
    c.bad = fresh_stack_name("#bad", a.stack);
    return c;
}

struct FrameState {
    State q;
    Obligations o;
    Check h;

    auto operator<=>(const FrameState&) const = default;
};

std::string frame_state_name(const FrameState& s) {
    return "(" + s.q + ";" + s.o.str() + ";" + s.h.str() + ")";
}

std::string record_name(const StackSymbol& g, const Obligations& o, const Check& h) {
    return "<" + g + ";" + o.str() + ";" + h.str() + ">";
}

SymbolClass class_of_b(const PushdownAlphabet& alphabet, const Symbol& b) {
    auto cls = alphabet.classify(b);
    if (!cls) fail(ErrorCode::BadArgument, "watched symbol not in alphabet: " + b);
    return *cls;
}

} // namespace

RemovalResult remove_abstract_predictor(const NestedVpta& a, const Symbol& b) {
    const ClockId z = ya(b);
    require_event_clock(a, z);
    if (atoms_on(a, z).empty()) return identity_removal(a, z);
    const NestedVpta norm = normalize_single_atom(a, z);
    const auto views = split_transitions(norm, z);
    const SymbolClass b_class = class_of_b(a.alphabet, b);

    RemovalResult r;
    std::set<ClockName> taken = a.standard_clocks;
    FrameCommon c = frame_common(a, z, views, taken, r);

    // All check sets (atom component unused for the predictor).
    std::vector<Check> checks;
    for (SymbolClass type :
         {SymbolClass::Call, SymbolClass::Return, SymbolClass::Internal})
        for (bool eb : {false, true})
            for (bool pi : {false, true})
                for (bool xb : {false, true}) {
                    if (xb && type != b_class) continue;
                    checks.push_back({type, xb, pi, eb, -1});
                }
    auto checks_where = [&](auto pred) {
        std::vector<Check> out;
        for (const auto& h : checks)
            if (pred(h)) out.push_back(h);
        return out;
    };

    Builder builder(r.automaton);
    NestedVpta& out = builder.out;
    out.alphabet = a.alphabet;
    out.event_clocks = a.event_clocks;
    out.event_clocks.erase(z);
    out.standard_clocks = taken;

    std::map<FrameState, State> names;
    std::deque<FrameState> work;
    auto intern = [&](const FrameState& s) {
        auto [it, inserted] = names.emplace(s, frame_state_name(s));
        if (inserted) work.push_back(s);
        return it->second;
    };
    for (const auto& q : a.initial)
        for (const auto& h : checks) out.initial.insert(intern({q, {}, h}));

    // Flow of obligations to the next position of the current frame.
    struct Flow {
        std::set<ClockName> resets;
        Obligations o;
        bool eb; // whether a promise is outstanding there
    };
    auto flows = [&](const Obligations& o, const Check& h, const AtomBounds& at,
                     bool is_b) {
        std::vector<Flow> out_flows;
        if (at.undef) {
            if (h.eventually_b != is_b) return out_flows; // eb' is false here
            if (!is_b && !o.live_only()) return out_flows;
            out_flows.push_back({{}, o.live(), false});
            return out_flows;
        }
        if (h.eventually_b != true) return out_flows; // eb' is true: eb = is_b || true
        Obligations base = is_b ? o.live() : o;
        std::set<ClockName> resets;
        Obligations next = base;
        if (!at.lo.trivial()) {
            next.lowers.insert(at.lo);
            resets.insert(c.lower_clock.at(at.lo));
        }
        if (!at.up.trivial()) {
            auto it = base.uppers.find(at.up);
            const Freshness f =
                it != base.uppers.end() && it->second == Freshness::Live
                    ? Freshness::Live
                    : Freshness::First;
            next.uppers.erase(at.up);
            next.uppers.emplace(at.up, f);
            const auto prior = o.uppers.find(at.up);
            const bool reset = prior == o.uppers.end() ||
                               (is_b && prior->second == Freshness::First);
            if (reset) resets.insert(c.upper_clock.at(at.up));
        }
        out_flows.push_back({resets, next, true});
        return out_flows;
    };

    while (!work.empty()) {
        FrameState s = work.front();
        work.pop_front();
        const State from = names.at(s);
        for (const auto& v : views) {
            if (v.from != s.q) continue;
            if (*a.alphabet.classify(v.symbol) != s.h.type) continue;
            const bool is_b = v.symbol == b;
            if (is_b != s.h.expects_b) continue;
            ClockConstraint guard = v.rest;
            if (is_b) guard = guard.conjoin(c.check_guard(s.o));

            switch (v.kind) {
                case TKind::Internal: {
                    // The frame ends here: the next position is a return.
                    if (v.atom.undef && s.h.eventually_b == is_b &&
                        (is_b || s.o.live_only())) {
                        for (const auto& o2 : c.obligation_universe)
                            for (const auto& h2 : checks_where([](const Check& h) {
                                     return h.type == SymbolClass::Return;
                                 }))
                                builder.internal_transition(from, v.symbol, guard,
                                                            v.resets,
                                                            intern({v.to, o2, h2}));
                    }
                    // The frame continues at the next position.
                    for (const auto& flow : flows(s.o, s.h, v.atom, is_b)) {
                        auto resets = v.resets;
                        resets.insert(flow.resets.begin(), flow.resets.end());
                        for (const auto& h2 : checks_where([&](const Check& h) {
                                 return h.type != SymbolClass::Return &&
                                        h.p_inf == s.h.p_inf &&
                                        h.eventually_b == flow.eb;
                             }))
                            builder.internal_transition(from, v.symbol, guard, resets,
                                                        intern({v.to, flow.o, h2}));
                    }
                    break;
                }
                case TKind::Push: {
                    // Matched call: obligations for the matching return ride
                    // the stack record.
                    for (const auto& flow : flows(s.o, s.h, v.atom, is_b)) {
                        auto resets = v.resets;
                        resets.insert(flow.resets.begin(), flow.resets.end());
                        for (const auto& hret : checks_where([&](const Check& h) {
                                 return h.type == SymbolClass::Return &&
                                        h.p_inf == s.h.p_inf &&
                                        h.eventually_b == flow.eb;
                             })) {
                            const StackSymbol record =
                                record_name(v.stack, flow.o, hret);
                            r.stack_base_of[record] = v.stack;
                            if (hret.eventually_b) r.pending_stack.insert(record);
                            // The call body is empty: control continues at
                            // the matching return.
                            builder.push_transition(from, v.symbol, guard, resets,
                                                    intern({v.to, flow.o, hret}),
                                                    record);
                            // Nonempty body: a fresh inner frame, enclosed
                            // and matched, with the uppers kept alive.
                            for (const auto& hin : checks_where([](const Check& h) {
                                     return h.type != SymbolClass::Return && !h.p_inf;
                                 }))
                                builder.push_transition(
                                    from, v.symbol, guard, resets,
                                    intern({v.to, flow.o.live_all(), hin}), record);
                        }
                    }
                    // Unmatched call: the current frame ends for good.
                    if (v.atom.undef && s.h.p_inf && s.h.eventually_b == is_b &&
                        (is_b || s.o.empty())) {
                        for (const auto& hin : checks_where([](const Check& h) {
                                 return h.type != SymbolClass::Return && h.p_inf;
                             }))
                            builder.push_transition(from, v.symbol, guard, v.resets,
                                                    intern({v.to, {}, hin}), c.bad);
                    }
                    break;
                }
                case TKind::Pop: {
                    if (v.stack == kStackBottom) {
                        if (!s.o.empty() || !s.h.p_inf) break;
                        for (const auto& flow : flows(s.o, s.h, v.atom, is_b)) {
                            auto resets = v.resets;
                            resets.insert(flow.resets.begin(), flow.resets.end());
                            for (const auto& h2 : checks_where([&](const Check& h) {
                                     return h.type != SymbolClass::Return && h.p_inf &&
                                            h.eventually_b == flow.eb;
                                 }))
                                builder.pop_transition(from, v.symbol, guard, resets,
                                                       kStackBottom,
                                                       intern({v.to, flow.o, h2}));
                        }
                        if (v.atom.undef && s.h.eventually_b == is_b) {
                            for (const auto& h2 : checks_where([](const Check& h) {
                                     return h.type == SymbolClass::Return && h.p_inf;
                                 }))
                                builder.pop_transition(from, v.symbol, guard, v.resets,
                                                       kStackBottom,
                                                       intern({v.to, {}, h2}));
                        }
                        break;
                    }
                    // Matched return: the record guessed at the call must
                    // equal the state reached here.
                    const StackSymbol record = record_name(v.stack, s.o, s.h);
                    for (const auto& flow : flows(s.o, s.h, v.atom, is_b)) {
                        auto resets = v.resets;
                        resets.insert(flow.resets.begin(), flow.resets.end());
                        for (const auto& h2 : checks_where([&](const Check& h) {
                                 return h.type != SymbolClass::Return &&
                                        h.p_inf == s.h.p_inf &&
                                        h.eventually_b == flow.eb;
                             }))
                            builder.pop_transition(from, v.symbol, guard, resets,
                                                   record, intern({v.to, flow.o, h2}));
                    }
                    if (v.atom.undef && s.h.eventually_b == is_b &&
                        (is_b || s.o.live_only())) {
                        for (const auto& o2 : c.obligation_universe)
                            for (const auto& h2 : checks_where([](const Check& h) {
                                     return h.type == SymbolClass::Return;
                                 }))
                                builder.pop_transition(from, v.symbol, guard, v.resets,
                                                       record, intern({v.to, o2, h2}));
                    }
                    break;
                }
            }
        }
    }

    for (const auto& [s, nm] : names) {
        out.states.insert(nm);
        r.base_of[nm] = s.q;
        if (s.h.eventually_b) r.pending_states.insert(nm);
    }
    for (const auto& f : a.buchi) {
        std::set<State> lifted;
        for (const auto& [s, nm] : names)
            if (f.count(s.q)) lifted.insert(nm);
        out.buchi.push_back(std::move(lifted));
    }
    {
        // Guesses about unmatched calls are right and promises are honored:
        // visited when the frame is unenclosed and no promise is pending.
        std::set<State> live;
        for (const auto& [s, nm] : names)
            if (s.h.p_inf && (!s.h.eventually_b || s.h.expects_b)) live.insert(nm);
        out.buchi.push_back(std::move(live));
    }
    for (const auto& q : a.finite_accepting)
        for (const auto& [s, nm] : names)
            if (s.q == q) out.finite_accepting.insert(nm);
    out.sort_transitions();
    return r;
}

// --- frame recorder -----------------------------------------------------

RemovalResult remove_abstract_recorder(const NestedVpta& a, const Symbol& b) {
    const ClockId z = xa(b);
    require_event_clock(a, z);
    if (atoms_on(a, z).empty()) return identity_removal(a, z);
    const NestedVpta norm = normalize_single_atom(a, z);
    const auto views = split_transitions(norm, z);
    const SymbolClass b_class = class_of_b(a.alphabet, b);

    RemovalResult r;
    std::set<ClockName> taken = a.standard_clocks;
    FrameCommon c = frame_common(a, z, views, taken, r);
    {
        // Free-guess targets must be able to witness an occurrence, which
        // rides on the trivial lower bound.
        auto with_definedness = c.lowers;
        with_definedness.push_back(Lower{0, false});
        std::sort(with_definedness.begin(), with_definedness.end());
        with_definedness.erase(
            std::unique(with_definedness.begin(), with_definedness.end()),
            with_definedness.end());
        c.obligation_universe = all_obligations(with_definedness, c.uppers);
    }

    // The distinct atoms over the removed clock; check sets carry the index
    // of the one used at the current position.
    std::vector<Interval> phi = atoms_on(norm, z);
    std::vector<AtomBounds> phi_bounds;
    for (const auto& iv : phi) phi_bounds.push_back(atom_bounds(iv));
    auto consistent = [&](int atom, const Obligations& o) {
        const auto& at = phi_bounds[atom];
        if (at.undef) return o.live_only();
        if (!at.lo.trivial() && !o.lowers.count(at.lo)) return false;
        if (o.lowers.count(Lower{0, false}) == 0) return false; // definedness witness
        if (!at.up.trivial() && !o.uppers.count(at.up)) return false;
        return true;
    };
    // The obligations besides the ones the current atom may still discharge
    // are live: nothing else is owed to this frame.
    auto terminal = [&](const FrameState& s) {
        const auto& at = phi_bounds[s.h.atom];
        if (at.undef) return true;
        Obligations rest = s.o;
        rest.lowers.erase(at.lo);
        rest.lowers.erase(Lower{0, false});
        auto it = rest.uppers.find(at.up);
        if (it != rest.uppers.end() && it->second == Freshness::First)
            rest.uppers.erase(it);
        return rest.live_only();
    };

    std::vector<Check> checks;
    for (SymbolClass type :
         {SymbolClass::Call, SymbolClass::Return, SymbolClass::Internal})
        for (bool pi : {false, true})
            for (bool xb : {false, true}) {
                if (xb && type != b_class) continue;
                for (int atom = 0; atom < static_cast<int>(phi.size()); ++atom)
                    checks.push_back({type, xb, pi, false, atom});
            }
    auto checks_where = [&](auto pred) {
        std::vector<Check> out_checks;
        for (const auto& h : checks)
            if (pred(h)) out_checks.push_back(h);
        return out_checks;
    };

    // Witness for "the symbol occurred on this frame": the trivial lower
    // bound, always guessed at an occurrence.
    const Lower definedness{0, false};

    Builder builder(r.automaton);
    NestedVpta& out = builder.out;
    out.alphabet = a.alphabet;
    out.event_clocks = a.event_clocks;
    out.event_clocks.erase(z);
    out.standard_clocks = taken;

    std::map<FrameState, State> names;
    std::deque<FrameState> work;
    auto intern = [&](const FrameState& s) -> std::optional<State> {
        if (!consistent(s.h.atom, s.o)) return std::nullopt;
        auto [it, inserted] = names.emplace(s, frame_state_name(s));
        if (inserted) work.push_back(s);
        return it->second;
    };
    for (const auto& q : a.initial)
        for (const auto& h : checks)
            if (auto nm = intern({q, {}, h})) out.initial.insert(*nm);

    // Re-guess at an occurrence of the watched symbol: any subset of bounds
    // still to be used before the next occurrence on this frame.
    struct Guess {
        std::set<ClockName> resets;
        Obligations o;
    };
    auto occurrence_guesses = [&](const Obligations& o) {
        std::vector<Guess> out_guesses;
        for (const auto& candidate : c.obligation_universe) {
            // Fresh guesses only; live uppers survive from the frame above.
            bool ok = true;
            for (const auto& [u, f] : candidate.uppers)
                ok = ok && f == Freshness::First;
            if (!ok) continue;
            Guess guess;
            guess.o = o.live();
            guess.o.lowers = candidate.lowers;
            guess.o.lowers.insert(definedness);
            for (const auto& [u, f] : candidate.uppers) {
                if (guess.o.uppers.count(u)) continue; // kept live, no reset
                guess.o.uppers.emplace(u, Freshness::First);
                guess.resets.insert(c.upper_clock.at(u));
            }
            for (const auto& l : candidate.lowers)
                if (!l.trivial()) guess.resets.insert(c.lower_clock.at(l));
            out_guesses.push_back(std::move(guess));
        }
        return out_guesses;
    };
    // Flow past a position that is not an occurrence: optionally drop the
    // used bounds.
    auto pass_flows = [&](const Obligations& o, const AtomBounds& at) {
        std::vector<Obligations> out_flows;
        if (at.undef) {
            out_flows.push_back(o); // live-only by consistency
            return out_flows;
        }
        for (bool drop_lower : {false, true})
            for (bool drop_upper : {false, true}) {
                Obligations o2 = o;
                if (drop_lower && !at.lo.trivial()) o2.lowers.erase(at.lo);
                if (drop_upper && !at.up.trivial()) {
                    auto it = o2.uppers.find(at.up);
                    if (it != o2.uppers.end() && it->second == Freshness::First)
                        o2.uppers.erase(it);
                }
                out_flows.push_back(std::move(o2));
            }
        std::sort(out_flows.begin(), out_flows.end());
        out_flows.erase(std::unique(out_flows.begin(), out_flows.end()),
                        out_flows.end());
        return out_flows;
    };

    while (!work.empty()) {
        FrameState s = work.front();
        work.pop_front();
        const State from = names.at(s);
        const auto& at = phi_bounds[s.h.atom];
        for (const auto& v : views) {
            if (v.from != s.q) continue;
            if (*a.alphabet.classify(v.symbol) != s.h.type) continue;
            const bool is_b = v.symbol == b;
            if (is_b != s.h.expects_b) continue;
            if (!(v.atom_interval == phi[s.h.atom])) continue;
            ClockConstraint guard = v.rest;
            if (!at.undef) {
                if (!at.lo.trivial())
                    guard.atoms.push_back({std_clock(c.lower_clock.at(at.lo)), at.lo.check()});
                if (!at.up.trivial())
                    guard.atoms.push_back({std_clock(c.upper_clock.at(at.up)), at.up.check()});
            }

            // Successor states of the same frame, or free guesses when the
            // frame ends (validated at the later pop).
            auto along_frame = [&](auto emit) {
                if (is_b) {
                    for (const auto& guess : occurrence_guesses(s.o))
                        for (const auto& h2 : checks_where([&](const Check& h) {
                                 return h.type != SymbolClass::Return &&
                                        h.p_inf == s.h.p_inf &&
                                        !phi_bounds[h.atom].undef;
                             }))
                            emit(guess.resets, guess.o, h2);
                } else {
                    for (const auto& o2 : pass_flows(s.o, at))
                        for (const auto& h2 : checks_where([&](const Check& h) {
                                 return h.type != SymbolClass::Return &&
                                        h.p_inf == s.h.p_inf &&
                                        phi_bounds[h.atom].undef == at.undef;
                             }))
                            emit(std::set<ClockName>{}, o2, h2);
                }
            };
            auto frame_end_targets = [&](auto emit) {
                if (!terminal(s)) return;
                for (const auto& o2 : c.obligation_universe)
                    for (const auto& h2 : checks_where([](const Check& h) {
                             return h.type == SymbolClass::Return;
                         }))
                        emit(o2, h2);
            };

            switch (v.kind) {
                case TKind::Internal: {
                    frame_end_targets([&](const Obligations& o2, const Check& h2) {
                        if (auto to = intern({v.to, o2, h2}))
                            builder.internal_transition(from, v.symbol, guard, v.resets,
                                                        *to);
                    });
                    along_frame([&](const std::set<ClockName>& res,
                                    const Obligations& o2, const Check& h2) {
                        if (auto to = intern({v.to, o2, h2})) {
                            auto resets = v.resets;
                            resets.insert(res.begin(), res.end());
                            builder.internal_transition(from, v.symbol, guard, resets,
                                                        *to);
                        }
                    });
                    break;
                }
                case TKind::Push: {
                    // Matched call: obligations for the matching return ride
                    // the record; the inner frame starts with live uppers.
                    auto record_flows = [&](auto emit) {
                        if (is_b) {
                            for (const auto& guess : occurrence_guesses(s.o))
                                for (const auto& hret : checks_where([&](const Check& h) {
                                         return h.type == SymbolClass::Return &&
                                                h.p_inf == s.h.p_inf &&
                                                !phi_bounds[h.atom].undef;
                                     }))
                                    emit(guess.resets, guess.o, hret);
                        } else {
                            for (const auto& o2 : pass_flows(s.o, at))
                                for (const auto& hret : checks_where([&](const Check& h) {
                                         return h.type == SymbolClass::Return &&
                                                h.p_inf == s.h.p_inf &&
                                                phi_bounds[h.atom].undef == at.undef;
                                     }))
                                    emit(std::set<ClockName>{}, o2, hret);
                        }
                    };
                    record_flows([&](const std::set<ClockName>& res,
                                     const Obligations& oret, const Check& hret) {
                        if (!consistent(hret.atom, oret)) return;
                        const StackSymbol record = record_name(v.stack, oret, hret);
                        auto resets = v.resets;
                        resets.insert(res.begin(), res.end());
                        r.stack_base_of[record] = v.stack;
                        // Empty body: continue at the matching return.
                        builder.push_transition(from, v.symbol, guard, resets,
                                                *intern({v.to, oret, hret}), record);
                        // Nonempty body: fresh enclosed frame.
                        for (const auto& hin : checks_where([&](const Check& h) {
                                 return h.type != SymbolClass::Return && !h.p_inf &&
                                        phi_bounds[h.atom].undef;
                             }))
                            if (auto to = intern({v.to, oret.live_all(), hin}))
                                builder.push_transition(from, v.symbol, guard, resets,
                                                        *to, record);
                    });
                    // Unmatched call: frame ends, inner chain unenclosed.
                    if (terminal(s) && s.h.p_inf) {
                        for (const auto& hin : checks_where([&](const Check& h) {
                                 return h.type != SymbolClass::Return && h.p_inf &&
                                        phi_bounds[h.atom].undef;
                             }))
                            if (auto to = intern({v.to, {}, hin}))
                                builder.push_transition(from, v.symbol, guard, v.resets,
                                                        *to, c.bad);
                    }
                    break;
                }
                case TKind::Pop: {
                    if (v.stack == kStackBottom) {
                        if (!at.undef || !s.o.empty() || !s.h.p_inf) break;
                        along_frame([&](const std::set<ClockName>& res,
                                        const Obligations& o2, const Check& h2) {
                            if (auto to = intern({v.to, o2, h2})) {
                                auto resets = v.resets;
                                resets.insert(res.begin(), res.end());
                                builder.pop_transition(from, v.symbol, guard, resets,
                                                       kStackBottom, *to);
                            }
                        });
                        if (terminal(s)) {
                            for (const auto& h2 : checks_where([](const Check& h) {
                                     return h.type == SymbolClass::Return && h.p_inf;
                                 }))
                                if (auto to = intern({v.to, {}, h2}))
                                    builder.pop_transition(from, v.symbol, guard,
                                                           v.resets, kStackBottom, *to);
                        }
                        break;
                    }
                    const StackSymbol record = record_name(v.stack, s.o, s.h);
                    frame_end_targets([&](const Obligations& o2, const Check& h2) {
                        if (auto to = intern({v.to, o2, h2}))
                            builder.pop_transition(from, v.symbol, guard, v.resets,
                                                   record, *to);
                    });
                    along_frame([&](const std::set<ClockName>& res,
                                    const Obligations& o2, const Check& h2) {
                        if (auto to = intern({v.to, o2, h2})) {
                            auto resets = v.resets;
                            resets.insert(res.begin(), res.end());
                            builder.pop_transition(from, v.symbol, guard, resets,
                                                   record, *to);
                        }
                    });
                    break;
                }
            }
        }
    }

    for (const auto& [s, nm] : names) {
        out.states.insert(nm);
        r.base_of[nm] = s.q;
    }
    for (const auto& f : a.buchi) {
        std::set<State> lifted;
        for (const auto& [s, nm] : names)
            if (f.count(s.q)) lifted.insert(nm);
        out.buchi.push_back(std::move(lifted));
    }
    {
        std::set<State> unenclosed;
        for (const auto& [s, nm] : names)
            if (s.h.p_inf) unenclosed.insert(nm);
        out.buchi.push_back(std::move(unenclosed));
    }
    // Guessed uses materialize: per lower bound, cofinally the bound is used
    // here, or re-guessed at an occurrence, or not pending.
    auto add_liveness = [&](auto pending_here, auto used_here) {
        std::set<State> component;
        for (const auto& [s, nm] : names) {
            if (!s.h.p_inf) continue;
            if (s.h.expects_b || used_here(s) || !pending_here(s)) component.insert(nm);
        }
        out.buchi.push_back(std::move(component));
    };
    for (const auto& l : c.lowers)
        add_liveness(
            [&](const FrameState& s) { return s.o.lowers.count(l) != 0; },
            [&](const FrameState& s) {
                const auto& at = phi_bounds[s.h.atom];
                return !at.undef && at.lo == l;
            });
    for (const auto& u : c.uppers)
        add_liveness(
            [&](const FrameState& s) {
                auto it = s.o.uppers.find(u);
                return it != s.o.uppers.end() && it->second == Freshness::First;
            },
            [&](const FrameState& s) {
                const auto& at = phi_bounds[s.h.atom];
                return !at.undef && at.up == u;
            });
    for (const auto& q : a.finite_accepting)
        for (const auto& [s, nm] : names)
            if (s.q == q) out.finite_accepting.insert(nm);
    out.sort_transitions();
    return r;
}

RemovalResult remove_caller(const NestedVpta& a, const Symbol& b) {
    const ClockId z = xc(b);
    require_event_clock(a, z);
    if (atoms_on(a, z).empty()) return identity_removal(a, z);

    // Only pending calls sit strictly above a position on its caller path,
    // so a non-call symbol never defines the clock.
    if (a.alphabet.classify(b) != SymbolClass::Call) {
        NestedVpta norm = normalize_single_atom(a, z);
        RemovalResult r = identity_removal(norm, z);
        NestedVpta& out = r.automaton;
        auto strip = [&](auto& transitions) {
            std::erase_if(transitions, [&](const auto& t) {
                for (const auto& atom : t.guard.atoms)
                    if (atom.clock == z && !atom.interval.undef) return true;
                return false;
            });
            for (auto& t : transitions)
                std::erase_if(t.guard.atoms,
                              [&](const Atom& at) { return at.clock == z; });
        };
        strip(out.pushes);
        strip(out.pops);
        strip(out.internals);
        out.sort_transitions();
        return r;
    }

    const NestedVpta norm = normalize_single_atom(a, z);
    const auto views = split_transitions(norm, z);

    RemovalResult r;
    std::set<ClockName> taken = a.standard_clocks;
    FrameCommon c = frame_common(a, z, views, taken, r);
    {
        auto with_definedness = c.lowers;
        with_definedness.push_back(Lower{0, false});
        std::sort(with_definedness.begin(), with_definedness.end());
        with_definedness.erase(
            std::unique(with_definedness.begin(), with_definedness.end()),
            with_definedness.end());
        c.obligation_universe = all_obligations(with_definedness, c.uppers);
    }

    std::vector<Interval> phi = atoms_on(norm, z);
    std::vector<AtomBounds> phi_bounds;
    for (const auto& iv : phi) phi_bounds.push_back(atom_bounds(iv));

    // An undefined atom means no watched call is pending, hence no
    // obligations at all; a defined one needs its bounds pending.
    auto consistent = [&](int atom, const Obligations& o) {
        const auto& at = phi_bounds[atom];
        if (at.undef) return o.empty();
        if (!at.lo.trivial() && !o.lowers.count(at.lo)) return false;
        if (!o.lowers.count(Lower{0, false})) return false;
        if (!at.up.trivial() && !o.uppers.count(at.up)) return false;
        return true;
    };
    auto terminal = [&](const FrameState& s) {
        const auto& at = phi_bounds[s.h.atom];
        if (at.undef) return true;
        Obligations rest = s.o;
        rest.lowers.erase(at.lo);
        rest.lowers.erase(Lower{0, false});
        auto it = rest.uppers.find(at.up);
        if (it != rest.uppers.end() && it->second == Freshness::First)
            rest.uppers.erase(it);
        return rest.live_only();
    };

    std::vector<Check> checks;
    for (SymbolClass type :
         {SymbolClass::Call, SymbolClass::Return, SymbolClass::Internal})
        for (bool pi : {false, true})
            for (int atom = 0; atom < static_cast<int>(phi.size()); ++atom)
                checks.push_back({type, false, pi, false, atom});
    auto checks_where = [&](auto pred) {
        std::vector<Check> out_checks;
        for (const auto& h : checks)
            if (pred(h)) out_checks.push_back(h);
        return out_checks;
    };

    Builder builder(r.automaton);
    NestedVpta& out = builder.out;
    out.alphabet = a.alphabet;
    out.event_clocks = a.event_clocks;
    out.event_clocks.erase(z);
    out.standard_clocks = taken;

    std::map<FrameState, State> names;
    std::deque<FrameState> work;
    auto intern = [&](const FrameState& s) -> std::optional<State> {
        if (!consistent(s.h.atom, s.o)) return std::nullopt;
        auto [it, inserted] = names.emplace(s, frame_state_name(s));
        if (inserted) work.push_back(s);
        return it->second;
    };
    for (const auto& q : a.initial)
        for (const auto& h : checks)
            if (auto nm = intern({q, {}, h})) out.initial.insert(*nm);

    // Along-frame flow: the pending call chain is unchanged, the used bounds
    // may be dropped.
    auto pass_flows = [&](const Obligations& o, const AtomBounds& at) {
        std::vector<Obligations> out_flows;
        if (at.undef) {
            out_flows.push_back(o);
            return out_flows;
        }
        for (bool drop_lower : {false, true})
            for (bool drop_upper : {false, true}) {
                Obligations o2 = o;
                if (drop_lower && !at.lo.trivial()) o2.lowers.erase(at.lo);
                if (drop_upper && !at.up.trivial()) {
                    auto it = o2.uppers.find(at.up);
                    if (it != o2.uppers.end() && it->second == Freshness::First)
                        o2.uppers.erase(it);
                }
                out_flows.push_back(std::move(o2));
            }
        std::sort(out_flows.begin(), out_flows.end());
        out_flows.erase(std::unique(out_flows.begin(), out_flows.end()),
                        out_flows.end());
        return out_flows;
    };

    // Obligations for the frame a call opens. At an occurrence of the
    // watched call, bounds are guessed freely: clocks reset unless the bound
    // stays pending behind us (then the older reset is kept and the
    // obligation rides along live). At other calls only pending bounds may
    // be re-guessed, with no resets.
    struct InnerGuess {
        std::set<ClockName> resets;
        Obligations o;
    };
    auto inner_guesses = [&](bool is_b, const Obligations& outer) {
        std::vector<InnerGuess> out_guesses;
        if (is_b) {
            for (const auto& candidate : c.obligation_universe) {
                bool all_first = true;
                for (const auto& [u, f] : candidate.uppers)
                    all_first = all_first && f == Freshness::First;
                if (!all_first) continue;
                InnerGuess guess;
                guess.o.lowers = candidate.lowers;
                guess.o.lowers.insert(Lower{0, false});
                for (const auto& l : candidate.lowers)
                    if (!l.trivial()) guess.resets.insert(c.lower_clock.at(l));
                for (const auto& [u, f] : candidate.uppers) {
                    if (outer.uppers.count(u)) {
                        guess.o.uppers.emplace(u, Freshness::Live);
                    } else {
                        guess.o.uppers.emplace(u, Freshness::First);
                        guess.resets.insert(c.upper_clock.at(u));
                    }
                }
                out_guesses.push_back(std::move(guess));
            }
        } else if (!outer.empty()) {
            // Same watched call stays the reference; keep a chosen subset of
            // the pending lowers, all uppers turn live.
            std::vector<std::set<Lower>> lower_subsets{{}};
            for (const auto& l : outer.lowers) {
                std::vector<std::set<Lower>> next;
                for (const auto& base : lower_subsets) {
                    next.push_back(base);
                    auto with = base;
                    with.insert(l);
                    next.push_back(std::move(with));
                }
                lower_subsets = std::move(next);
            }
            for (const auto& lo : lower_subsets) {
                if (!lo.count(Lower{0, false})) continue; // definedness persists
                InnerGuess guess;
                guess.o.lowers = lo;
                guess.o.uppers = outer.live_all().uppers;
                out_guesses.push_back(std::move(guess));
            }
        } else {
            out_guesses.push_back({}); // no watched call pending below
        }
        return out_guesses;
    };

    while (!work.empty()) {
        FrameState s = work.front();
        work.pop_front();
        const State from = names.at(s);
        const auto& at = phi_bounds[s.h.atom];
        for (const auto& v : views) {
            if (v.from != s.q) continue;
            if (*a.alphabet.classify(v.symbol) != s.h.type) continue;
            const bool is_b = v.symbol == b;
            if (!(v.atom_interval == phi[s.h.atom])) continue;
            ClockConstraint guard = v.rest;
            if (!at.undef) {
                if (!at.lo.trivial())
                    guard.atoms.push_back({std_clock(c.lower_clock.at(at.lo)), at.lo.check()});
                if (!at.up.trivial())
                    guard.atoms.push_back({std_clock(c.upper_clock.at(at.up)), at.up.check()});
            }

            auto along_frame = [&](auto emit) {
                for (const auto& o2 : pass_flows(s.o, at))
                    for (const auto& h2 : checks_where([&](const Check& h) {
                             return h.type != SymbolClass::Return &&
                                    h.p_inf == s.h.p_inf &&
                                    phi_bounds[h.atom].undef == at.undef;
                         }))
                        emit(o2, h2);
            };
            auto frame_end_targets = [&](auto emit) {
                if (!terminal(s)) return;
                for (const auto& o2 : c.obligation_universe)
                    for (const auto& h2 : checks_where([](const Check& h) {
                             return h.type == SymbolClass::Return;
                         }))
                        emit(o2, h2);
            };

            switch (v.kind) {
                case TKind::Internal: {
                    frame_end_targets([&](const Obligations& o2, const Check& h2) {
                        if (auto to = intern({v.to, o2, h2}))
                            builder.internal_transition(from, v.symbol, guard, v.resets,
                                                        *to);
                    });
                    along_frame([&](const Obligations& o2, const Check& h2) {
                        if (auto to = intern({v.to, o2, h2}))
                            builder.internal_transition(from, v.symbol, guard, v.resets,
                                                        *to);
                    });
                    break;
                }
                case TKind::Push: {
                    // Matched call: the return resumes this frame.
                    for (const auto& oret : pass_flows(s.o, at)) {
                        for (const auto& hret : checks_where([&](const Check& h) {
                                 return h.type == SymbolClass::Return &&
                                        h.p_inf == s.h.p_inf &&
                                        phi_bounds[h.atom].undef == at.undef;
                             })) {
                            if (!consistent(hret.atom, oret)) continue;
                            const StackSymbol record = record_name(v.stack, oret, hret);
                            r.stack_base_of[record] = v.stack;
                            // Empty body.
                            builder.push_transition(from, v.symbol, guard, v.resets,
                                                    *intern({v.to, oret, hret}), record);
                            // Nonempty body: the opened frame references the
                            // deepest watched call below it.
                            for (const auto& guess : inner_guesses(is_b, oret)) {
                                auto resets = v.resets;
                                resets.insert(guess.resets.begin(), guess.resets.end());
                                for (const auto& hin : checks_where([&](const Check& h) {
                                         return h.type != SymbolClass::Return &&
                                                !h.p_inf &&
                                                phi_bounds[h.atom].undef ==
                                                    guess.o.empty();
                                     }))
                                    if (auto to = intern({v.to, guess.o, hin}))
                                        builder.push_transition(from, v.symbol, guard,
                                                                resets, *to, record);
                            }
                        }
                    }
                    // Unmatched call.
                    if (terminal(s) && s.h.p_inf) {
                        Obligations chained = s.o; // still-valid reset chain
                        for (const auto& guess : inner_guesses(is_b, chained)) {
                            auto resets = v.resets;
                            resets.insert(guess.resets.begin(), guess.resets.end());
                            for (const auto& hin : checks_where([&](const Check& h) {
                                     return h.type != SymbolClass::Return && h.p_inf &&
                                            phi_bounds[h.atom].undef == guess.o.empty();
                                 }))
                                if (auto to = intern({v.to, guess.o, hin}))
                                    builder.push_transition(from, v.symbol, guard,
                                                            resets, *to, c.bad);
                        }
                    }
                    break;
                }
                case TKind::Pop: {
                    if (v.stack == kStackBottom) {
                        // No pending call at all here.
                        if (!at.undef || !s.o.empty() || !s.h.p_inf) break;
                        along_frame([&](const Obligations& o2, const Check& h2) {
                            if (auto to = intern({v.to, o2, h2}))
                                builder.pop_transition(from, v.symbol, guard, v.resets,
                                                       kStackBottom, *to);
                        });
                        if (terminal(s)) {
                            for (const auto& h2 : checks_where([](const Check& h) {
                                     return h.type == SymbolClass::Return && h.p_inf;
                                 }))
                                if (auto to = intern({v.to, {}, h2}))
                                    builder.pop_transition(from, v.symbol, guard,
                                                           v.resets, kStackBottom, *to);
                        }
                        break;
                    }
                    const StackSymbol record = record_name(v.stack, s.o, s.h);
                    frame_end_targets([&](const Obligations& o2, const Check& h2) {
                        if (auto to = intern({v.to, o2, h2}))
                            builder.pop_transition(from, v.symbol, guard, v.resets,
                                                   record, *to);
                    });
                    along_frame([&](const Obligations& o2, const Check& h2) {
                        if (auto to = intern({v.to, o2, h2}))
                            builder.pop_transition(from, v.symbol, guard, v.resets,
                                                   record, *to);
                    });
                    break;
                }
            }
        }
    }

    for (const auto& [s, nm] : names) {
        out.states.insert(nm);
        r.base_of[nm] = s.q;
    }
    for (const auto& f : a.buchi) {
        std::set<State> lifted;
        for (const auto& [s, nm] : names)
            if (f.count(s.q)) lifted.insert(nm);
        out.buchi.push_back(std::move(lifted));
    }
    {
        std::set<State> unenclosed;
        for (const auto& [s, nm] : names)
            if (s.h.p_inf) unenclosed.insert(nm);
        out.buchi.push_back(std::move(unenclosed));
    }
    auto add_liveness = [&](auto pending_here, auto used_here) {
        std::set<State> component;
        for (const auto& [s, nm] : names) {
            if (!s.h.p_inf) continue;
            if (used_here(s) || !pending_here(s)) component.insert(nm);
        }
        out.buchi.push_back(std::move(component));
    };
    for (const auto& l : c.lowers)
        add_liveness(
            [&](const FrameState& s) { return s.o.lowers.count(l) != 0; },
            [&](const FrameState& s) {
                const auto& at = phi_bounds[s.h.atom];
                return !at.undef && at.lo == l;
            });
    for (const auto& u : c.uppers)
        add_liveness(
            [&](const FrameState& s) {
                auto it = s.o.uppers.find(u);
                return it != s.o.uppers.end() && it->second == Freshness::First;
            },
            [&](const FrameState& s) {
                const auto& at = phi_bounds[s.h.atom];
                return !at.undef && at.up == u;
            });
    for (const auto& q : a.finite_accepting)
        for (const auto& [s, nm] : names)
            if (s.q == q) out.finite_accepting.insert(nm);
    out.sort_transitions();
    return r;
}

namespace {

RemovalResult compose(RemovalResult first, const RemovalResult& second) {
    RemovalResult out;
    out.automaton = second.automaton;
    for (const auto& [s2, s1] : second.base_of) out.base_of[s2] = first.base_of.at(s1);
    for (const auto& [g2, g1] : second.stack_base_of) {
        auto it = first.stack_base_of.find(g1);
        if (it != first.stack_base_of.end()) out.stack_base_of[g2] = it->second;
    }
    out.pending_states = second.pending_states;
    for (const auto& [s2, s1] : second.base_of)
        if (first.pending_states.count(s1)) out.pending_states.insert(s2);
    out.pending_stack = second.pending_stack;
    for (const auto& [g2, g1] : second.stack_base_of)
        if (first.pending_stack.count(g1)) out.pending_stack.insert(g2);
    out.fresh_clocks = std::move(first.fresh_clocks);
    out.fresh_clocks.insert(out.fresh_clocks.end(), second.fresh_clocks.begin(),
                            second.fresh_clocks.end());
    return out;
}

} // namespace

RemovalResult remove_all_event_clocks(const NestedVpta& a) {
    require_valid(a);
    RemovalResult acc;
    acc.automaton = a;
    for (const auto& q : a.states) acc.base_of[q] = q;
    for (const auto& g : a.stack) acc.stack_base_of[g] = g;

    auto kind_rank = [](ClockKind k) {
        switch (k) {
            case ClockKind::GlobalRecorder: return 0;
            case ClockKind::GlobalPredictor: return 1;
            case ClockKind::AbstractRecorder: return 2;
            case ClockKind::AbstractPredictor: return 3;
            case ClockKind::CallerRecorder: return 4;
            case ClockKind::Standard: return 5;
        }
        return 5;
    };
    std::vector<ClockId> order(a.event_clocks.begin(), a.event_clocks.end());
    std::sort(order.begin(), order.end(), [&](const ClockId& x, const ClockId& y) {
        if (kind_rank(x.kind) != kind_rank(y.kind))
            return kind_rank(x.kind) < kind_rank(y.kind);
        return x.name < y.name;
    });
    for (const auto& z : order) {
        RemovalResult step;
        switch (z.kind) {
            case ClockKind::GlobalRecorder:
            case ClockKind::GlobalPredictor:
                step = remove_global(acc.automaton, z);
                break;
            case ClockKind::AbstractRecorder:
                step = remove_abstract_recorder(acc.automaton, z.name);
                break;
            case ClockKind::AbstractPredictor:
                step = remove_abstract_predictor(acc.automaton, z.name);
                break;
            case ClockKind::CallerRecorder:
                step = remove_caller(acc.automaton, z.name);
                break;
            case ClockKind::Standard:
                fail(ErrorCode::Internal, "standard clock among event clocks");
        }
        acc = compose(std::move(acc), step);
    }
    return acc;
}

std::set<State> feasible_base_states(const RemovalResult& r, const TimedWord& w) {
    std::set<State> out;
    for (const auto& cfg : run_prefixes(r.automaton, w)) {
        if (r.pending_states.count(cfg.state)) continue;
        bool pending = false;
        for (const auto& g : cfg.stack) pending = pending || r.pending_stack.count(g);
        if (!pending) out.insert(r.base_of.at(cfg.state));
    }
    return out;
}

} // namespace ecna
