#include "ecna/automaton.hpp"

#include "ecna/error.hpp"

#include <algorithm>
#include <sstream>

namespace ecna {

namespace {

std::string push_key(const PushTransition& t) {
    return t.from + "\x01" + t.symbol + "\x01" + t.to + "\x01" + t.push + "\x01" +
           t.guard.str();
}
std::string pop_key(const PopTransition& t) {
    return t.from + "\x01" + t.symbol + "\x01" + t.to + "\x01" + t.pop + "\x01" +
           t.guard.str();
}
std::string internal_key(const InternalTransition& t) {
    return t.from + "\x01" + t.symbol + "\x01" + t.to + "\x01" + t.guard.str();
}

template <typename T, typename KeyFn>
void sort_unique(std::vector<T>& v, KeyFn key) {
    std::sort(v.begin(), v.end(),
              [&](const T& a, const T& b) { return key(a) < key(b); });
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

void NestedVpta::sort_transitions() {
    sort_unique(pushes, push_key);
    sort_unique(pops, pop_key);
    sort_unique(internals, internal_key);
}

namespace {

void check_guard(const NestedVpta& a, const ClockConstraint& guard,
                 const std::string& where, std::vector<Violation>& out) {
    for (const auto& atom : guard.atoms) {
        if (atom.clock.kind == ClockKind::Standard) {
            if (!a.standard_clocks.count(atom.clock.name))
                out.push_back({"UnknownClock",
                               where + ": undeclared standard clock " + atom.clock.name});
        } else {
            if (!a.event_clocks.count(atom.clock))
                out.push_back({"UnknownClock", where + ": undeclared event clock " +
                                                   clock_to_string(atom.clock)});
            if (!a.alphabet.contains(atom.clock.name))
                out.push_back({"UnknownSymbol", where + ": event clock over foreign symbol " +
                                                    atom.clock.name});
        }
        if (!atom.interval.undef && atom.interval.empty())
            out.push_back({"EmptyInterval", where + ": " + atom.interval.str()});
    }
}

void check_resets(const NestedVpta& a, const std::set<ClockName>& resets,
                  const std::string& where, std::vector<Violation>& out) {
    for (const auto& r : resets)
        if (!a.standard_clocks.count(r))
            out.push_back({"UnknownClock", where + ": reset of undeclared clock " + r});
}

void check_endpoints(const NestedVpta& a, const State& from, const State& to,
                     const std::string& where, std::vector<Violation>& out) {
    if (!a.states.count(from))
        out.push_back({"UnknownState", where + ": source " + from});
    if (!a.states.count(to))
        out.push_back({"UnknownState", where + ": target " + to});
}

} // namespace

std::vector<Violation> validate(const NestedVpta& a) {
    std::vector<Violation> out;
    if (auto bad = a.alphabet.check())
        out.push_back({"BadAlphabet", *bad});
    for (const auto& q : a.initial)
        if (!a.states.count(q))
            out.push_back({"UnknownState", "initial state " + q});
    if (a.buchi.empty())
        out.push_back({"EmptyAcceptanceFamily", "no acceptance component declared"});
    for (const auto& f : a.buchi)
        for (const auto& q : f)
            if (!a.states.count(q))
                out.push_back({"UnknownState", "accepting state " + q});
    for (const auto& q : a.finite_accepting)
        if (!a.states.count(q))
            out.push_back({"UnknownState", "finite-accepting state " + q});
    if (a.stack.count(kStackBottom))
        out.push_back({"ReservedStackSymbol",
                       "stack alphabet declares the bottom symbol"});
    for (const auto& z : a.event_clocks) {
        if (z.kind == ClockKind::Standard)
            out.push_back({"BadClock", "standard clock declared as event clock: " + z.name});
        else if (!a.alphabet.contains(z.name))
            out.push_back({"UnknownSymbol",
                           "event clock over foreign symbol " + clock_to_string(z)});
    }
    for (const auto& c : a.standard_clocks)
        if (a.event_clocks.count(parse_clock(c)))
            out.push_back({"BadClock", "clock declared both standard and event: " + c});

    for (const auto& t : a.pushes) {
        std::string where = "push " + t.from + " --" + t.symbol + "--> " + t.to;
        check_endpoints(a, t.from, t.to, where, out);
        if (a.alphabet.classify(t.symbol) != SymbolClass::Call)
            out.push_back({"SymbolClassMismatch", where + ": symbol is not a call"});
        if (t.push == kStackBottom)
            out.push_back({"PushesBottom", where});
        else if (!a.stack.count(t.push))
            out.push_back({"UnknownStackSymbol", where + ": " + t.push});
        check_guard(a, t.guard, where, out);
        check_resets(a, t.resets, where, out);
    }
    for (const auto& t : a.pops) {
        std::string where = "pop " + t.from + " --" + t.symbol + "--> " + t.to;
        check_endpoints(a, t.from, t.to, where, out);
        if (a.alphabet.classify(t.symbol) != SymbolClass::Return)
            out.push_back({"SymbolClassMismatch", where + ": symbol is not a return"});
        if (t.pop != kStackBottom && !a.stack.count(t.pop))
            out.push_back({"UnknownStackSymbol", where + ": " + t.pop});
        check_guard(a, t.guard, where, out);
        check_resets(a, t.resets, where, out);
    }
    for (const auto& t : a.internals) {
        std::string where = "internal " + t.from + " --" + t.symbol + "--> " + t.to;
        check_endpoints(a, t.from, t.to, where, out);
        if (a.alphabet.classify(t.symbol) != SymbolClass::Internal)
            out.push_back({"SymbolClassMismatch", where + ": symbol is not internal"});
        check_guard(a, t.guard, where, out);
        check_resets(a, t.resets, where, out);
    }
    return out;
}

void require_valid(const NestedVpta& a) {
    auto violations = validate(a);
    if (violations.empty()) return;
    std::ostringstream os;
    os << "invalid automaton:";
    for (const auto& v : violations) os << " [" << v.code << "] " << v.detail << ";";
    fail(ErrorCode::InvalidAutomaton, os.str());
}

std::set<ClassTag> classify(const NestedVpta& a) {
    std::set<ClassTag> tags{ClassTag::Nested};
    const bool no_standard = a.standard_clocks.empty();
    const bool no_event = a.event_clocks.empty();
    bool has_abs_rec = false, has_abs_pred = false, has_caller = false;
    for (const auto& z : a.event_clocks) {
        if (z.kind == ClockKind::AbstractRecorder) has_abs_rec = true;
        if (z.kind == ClockKind::AbstractPredictor) has_abs_pred = true;
        if (z.kind == ClockKind::CallerRecorder) has_caller = true;
    }
    if (no_event) tags.insert(ClassTag::Vpta);
    if (no_standard) {
        tags.insert(ClassTag::Ecna);
        if (!has_abs_rec && !has_abs_pred && !has_caller) tags.insert(ClassTag::Ecvpa);
        if (!has_abs_pred && !has_caller) tags.insert(ClassTag::Arcna);
        if (!has_abs_rec && !has_caller) tags.insert(ClassTag::Apcna);
        if (!has_abs_rec && !has_abs_pred) tags.insert(ClassTag::Cecna);
    }
    if (no_event && no_standard) tags.insert(ClassTag::Vpa);
    return tags;
}

std::string class_tag_name(ClassTag tag) {
    switch (tag) {
        case ClassTag::Vpa: return "VPA";
        case ClassTag::Vpta: return "VPTA";
        case ClassTag::Ecna: return "ECNA";
        case ClassTag::Ecvpa: return "ECVPA";
        case ClassTag::Arcna: return "ARCNA";
        case ClassTag::Apcna: return "APCNA";
        case ClassTag::Cecna: return "CECNA";
        case ClassTag::Nested: return "NestedVPTA";
    }
    return "?";
}

namespace {

template <typename Fn>
void for_each_guard(const NestedVpta& a, Fn fn) {
    for (const auto& t : a.pushes) fn(t.guard);
    for (const auto& t : a.pops) fn(t.guard);
    for (const auto& t : a.internals) fn(t.guard);
}

} // namespace

unsigned long greatest_constant(const NestedVpta& a) {
    unsigned long k = 0;
    for_each_guard(a, [&](const ClockConstraint& g) {
        for (const auto& atom : g.atoms) {
            if (atom.interval.undef) continue;
            k = std::max(k, atom.interval.lower);
            if (atom.interval.upper) k = std::max(k, *atom.interval.upper);
        }
    });
    return k;
}

bool constraint_sat(const std::map<ClockName, Rational>& standard,
                    const ClockValuation& events,
                    const ClockConstraint& constraint) {
    for (const auto& atom : constraint.atoms) {
        std::optional<Rational> value;
        if (atom.clock.kind == ClockKind::Standard) {
            auto it = standard.find(atom.clock.name);
            if (it == standard.end())
                fail(ErrorCode::UnknownClock,
                     "no value for clock " + atom.clock.name);
            value = it->second;
        } else {
            value = events.at(atom.clock);
        }
        if (!atom.interval.contains(value)) return false;
    }
    return true;
}

namespace {

// One transition's guard, rewritten to carry exactly one atom on z.
// Returns the replacement guards (one or two), or none when the z-atoms
// conflict and the transition disappears.
std::vector<ClockConstraint> single_atom_guards(const ClockConstraint& guard,
                                                const ClockId& z) {
    ClockConstraint rest;
    std::optional<Interval> merged;
    bool conflict = false;
    for (const auto& atom : guard.atoms) {
        if (atom.clock != z) {
            rest.atoms.push_back(atom);
            continue;
        }
        if (!merged) {
            merged = atom.interval;
        } else {
            auto next = Interval::intersect(*merged, atom.interval);
            if (!next) conflict = true;
            else merged = *next;
        }
    }
    if (conflict) return {};
    std::vector<ClockConstraint> out;
    if (merged) {
        ClockConstraint g = rest;
        g.atoms.push_back({z, *merged});
        out.push_back(std::move(g));
    } else {
        ClockConstraint undef = rest;
        undef.atoms.push_back({z, Interval::undef_singleton()});
        ClockConstraint defined = rest;
        defined.atoms.push_back({z, Interval::any_defined()});
        out.push_back(std::move(undef));
        out.push_back(std::move(defined));
    }
    return out;
}

} // namespace

NestedVpta normalize_single_atom(const NestedVpta& a, const ClockId& z) {
    NestedVpta out = a;
    out.pushes.clear();
    out.pops.clear();
    out.internals.clear();
    for (const auto& t : a.pushes)
        for (auto& g : single_atom_guards(t.guard, z)) {
            PushTransition nt = t;
            nt.guard = std::move(g);
            out.pushes.push_back(std::move(nt));
        }
    for (const auto& t : a.pops)
        for (auto& g : single_atom_guards(t.guard, z)) {
            PopTransition nt = t;
            nt.guard = std::move(g);
            out.pops.push_back(std::move(nt));
        }
    for (const auto& t : a.internals)
        for (auto& g : single_atom_guards(t.guard, z)) {
            InternalTransition nt = t;
            nt.guard = std::move(g);
            out.internals.push_back(std::move(nt));
        }
    return out;
}

std::vector<Interval> atoms_on(const NestedVpta& a, const ClockId& z) {
    std::set<Interval> seen;
    for_each_guard(a, [&](const ClockConstraint& g) {
        for (const auto& atom : g.atoms)
            if (atom.clock == z) seen.insert(atom.interval);
    });
    return {seen.begin(), seen.end()};
}

} // namespace ecna
