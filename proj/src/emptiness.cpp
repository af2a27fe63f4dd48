#include "ecna/emptiness.hpp"

#include "ecna/error.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <sstream>

namespace ecna {

std::string ClockRegion::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [c, i] : ipart) {
        if (!first) os << ',';
        os << c << ':';
        if (i == kAbove) os << '^';
        else os << i;
        first = false;
    }
    os << '|';
    for (const auto& group : fracs) {
        os << '{';
        for (size_t k = 0; k < group.size(); ++k) {
            if (k) os << ',';
            os << group[k];
        }
        os << '}';
    }
    os << (zero_frac ? "0" : "+");
    return os.str();
}

ClockRegion initial_clock_region(const std::set<ClockName>& clocks) {
    ClockRegion r;
    if (clocks.empty()) return r;
    std::vector<ClockName> group;
    for (const auto& c : clocks) {
        r.ipart[c] = 0;
        group.push_back(c);
    }
    r.fracs.push_back(std::move(group));
    r.zero_frac = true;
    return r;
}

std::optional<ClockRegion> region_time_successor(const ClockRegion& region,
                                                 const ClockLimits& limits) {
    if (region.fracs.empty()) return std::nullopt; // every clock is past its cap
    auto cap_of = [&](const ClockName& c) -> unsigned long {
        auto it = limits.find(c);
        return it == limits.end() ? 0 : it->second;
    };
    ClockRegion next = region;
    if (region.zero_frac) {
        // Clocks sitting on an integer drift into the open interval above it;
        // those already at their cap pass it for good.
        next.zero_frac = false;
        auto& group = next.fracs.front();
        std::erase_if(group, [&](const ClockName& c) {
            if (static_cast<unsigned long>(next.ipart.at(c)) < cap_of(c)) return false;
            next.ipart[c] = ClockRegion::kAbove;
            return true;
        });
        if (group.empty()) next.fracs.erase(next.fracs.begin());
        return next;
    }
    // The highest-fraction group reaches the next integer.
    auto group = next.fracs.back();
    next.fracs.pop_back();
    std::vector<ClockName> landed;
    for (const auto& c : group) {
        next.ipart[c] = next.ipart.at(c) + 1;
        landed.push_back(c);
    }
    if (!landed.empty()) {
        std::sort(landed.begin(), landed.end());
        next.fracs.insert(next.fracs.begin(), std::move(landed));
        next.zero_frac = true;
    }
    return next;
}

std::vector<ClockRegion> region_elapse_closure(const ClockRegion& region,
                                               const ClockLimits& limits) {
    std::vector<ClockRegion> out{region};
    auto next = region_time_successor(region, limits);
    while (next) {
        out.push_back(*next);
        next = region_time_successor(*next, limits);
    }
    return out;
}

ClockRegion region_reset(const ClockRegion& region, const std::set<ClockName>& resets) {
    if (resets.empty()) return region;
    ClockRegion out = region;
    for (auto& group : out.fracs)
        std::erase_if(group, [&](const ClockName& c) { return resets.count(c) != 0; });
    std::erase_if(out.fracs, [](const auto& g) { return g.empty(); });
    if (out.fracs.empty()) out.zero_frac = false;

    std::vector<ClockName> zeroed(resets.begin(), resets.end());
    std::sort(zeroed.begin(), zeroed.end());
    for (const auto& c : zeroed) out.ipart[c] = 0;
    if (out.zero_frac) {
        auto& group = out.fracs.front();
        group.insert(group.end(), zeroed.begin(), zeroed.end());
        std::sort(group.begin(), group.end());
    } else {
        out.fracs.insert(out.fracs.begin(), std::move(zeroed));
        out.zero_frac = true;
    }
    return out;
}

bool region_satisfies(const ClockRegion& region, const ClockConstraint& guard) {
    for (const auto& atom : guard.atoms) {
        if (atom.clock.kind != ClockKind::Standard)
            fail(ErrorCode::HasEventClocks,
                 "region check over event clock " + clock_to_string(atom.clock));
        if (atom.interval.undef) return false; // standard clocks are never bot
        auto it = region.ipart.find(atom.clock.name);
        if (it == region.ipart.end())
            fail(ErrorCode::UnknownClock, "region lacks clock " + atom.clock.name);
        const long i = it->second;
        if (i == ClockRegion::kAbove) {
            // Past every guard constant on this clock.
            if (atom.interval.upper) return false;
            continue;
        }
        bool on_integer = false;
        if (region.zero_frac && !region.fracs.empty())
            for (const auto& c : region.fracs.front())
                if (c == atom.clock.name) on_integer = true;
        const Interval value_range =
            on_integer ? Interval::point(static_cast<unsigned long>(i))
                       : Interval::bounded(static_cast<unsigned long>(i), true,
                                           static_cast<unsigned long>(i) + 1, true);
        if (!value_range.subset_of(atom.interval)) return false;
    }
    return true;
}

namespace {

ClockLimits clock_limits(const NestedVpta& a) {
    ClockLimits limits;
    for (const auto& c : a.standard_clocks) limits[c] = 0;
    auto scan = [&](const ClockConstraint& g) {
        for (const auto& atom : g.atoms) {
            if (atom.clock.kind != ClockKind::Standard || atom.interval.undef) continue;
            auto& cap = limits[atom.clock.name];
            cap = std::max(cap, atom.interval.lower);
            if (atom.interval.upper) cap = std::max(cap, *atom.interval.upper);
        }
    };
    for (const auto& t : a.pushes) scan(t.guard);
    for (const auto& t : a.pops) scan(t.guard);
    for (const auto& t : a.internals) scan(t.guard);
    return limits;
}

NestedVpta region_abstract_impl(const NestedVpta& a, bool divergent) {
    require_valid(a);
    if (!a.event_clocks.empty())
        fail(ErrorCode::HasEventClocks,
             "region abstraction expects event clocks to be removed first");

    ClockName tick = "#div";
    while (a.standard_clocks.count(tick)) tick += "#";
    std::set<ClockName> clocks = a.standard_clocks;
    if (divergent) clocks.insert(tick);
    ClockLimits limits = clock_limits(a);
    if (divergent) limits[tick] = 1;

    // Regions are interned; state names embed the region index to keep the
    // generated automaton small.
    std::map<ClockRegion, size_t> region_ids;
    std::vector<ClockRegion> region_table;
    auto region_id = [&](const ClockRegion& r) {
        auto [it, inserted] = region_ids.emplace(r, region_table.size());
        if (inserted) region_table.push_back(r);
        return it->second;
    };

    struct RState {
        State base;
        size_t region;
        bool ticked;

        auto operator<=>(const RState&) const = default;
    };
    auto rstate_name = [&](const RState& s) {
        std::string n = "(" + s.base + "|r" + std::to_string(s.region);
        if (divergent) n += s.ticked ? "|t" : "|.";
        return n + ")";
    };

    std::map<State, std::vector<const PushTransition*>> pushes_from;
    std::map<State, std::vector<const PopTransition*>> pops_from;
    std::map<State, std::vector<const InternalTransition*>> internals_from;
    for (const auto& t : a.pushes) pushes_from[t.from].push_back(&t);
    for (const auto& t : a.pops) pops_from[t.from].push_back(&t);
    for (const auto& t : a.internals) internals_from[t.from].push_back(&t);

    NestedVpta out;
    out.alphabet = a.alphabet;
    out.stack = a.stack;

    std::map<RState, State> names;
    std::deque<RState> work;
    auto intern = [&](const RState& s) {
        auto [it, inserted] = names.emplace(s, rstate_name(s));
        if (inserted) work.push_back(s);
        return it->second;
    };

    const ClockRegion r0 = initial_clock_region(clocks);
    for (const auto& q : a.initial) out.initial.insert(intern({q, region_id(r0), false}));

    // Elapse chains are shared across the transitions of a state.
    std::map<size_t, std::vector<size_t>> elapse_cache;
    auto elapse_ids = [&](size_t rid) -> const std::vector<size_t>& {
        auto it = elapse_cache.find(rid);
        if (it != elapse_cache.end()) return it->second;
        std::vector<size_t> chain;
        for (const auto& r : region_elapse_closure(region_table[rid], limits))
            chain.push_back(region_id(r));
        return elapse_cache.emplace(rid, std::move(chain)).first->second;
    };

    // Delay region chosen first, guard tested there, resets applied after;
    // crossing one unit on the virtual clock marks the edge and rearms it.
    auto targets = [&](size_t rid, const ClockConstraint& guard,
                       const std::set<ClockName>& resets) {
        std::vector<std::pair<size_t, bool>> out_regions;
        for (size_t did : elapse_ids(rid)) {
            const ClockRegion& delayed = region_table[did];
            if (!region_satisfies(delayed, guard)) continue;
            bool ticked = false;
            auto applied = resets;
            if (divergent) {
                long ti = delayed.ipart.at(tick);
                ticked = ti == ClockRegion::kAbove || ti >= 1;
                if (ticked) applied.insert(tick);
            }
            out_regions.push_back({region_id(region_reset(delayed, applied)), ticked});
        }
        return out_regions;
    };

    while (!work.empty()) {
        RState s = work.front();
        work.pop_front();
        const State from = names.at(s);
        if (auto it = pushes_from.find(s.base); it != pushes_from.end())
            for (const auto* t : it->second)
                for (const auto& [region, ticked] : targets(s.region, t->guard, t->resets))
                    out.pushes.push_back({from, t->symbol, {}, {},
                                          intern({t->to, region, ticked}), t->push});
        if (auto it = pops_from.find(s.base); it != pops_from.end())
            for (const auto* t : it->second)
                for (const auto& [region, ticked] : targets(s.region, t->guard, t->resets))
                    out.pops.push_back({from, t->symbol, {}, {}, t->pop,
                                        intern({t->to, region, ticked})});
        if (auto it = internals_from.find(s.base); it != internals_from.end())
            for (const auto* t : it->second)
                for (const auto& [region, ticked] : targets(s.region, t->guard, t->resets))
                    out.internals.push_back({from, t->symbol, {}, {},
                                             intern({t->to, region, ticked})});
    }

    for (const auto& [s, name] : names) {
        out.states.insert(name);
        if (a.finite_accepting.count(s.base)) out.finite_accepting.insert(name);
    }
    for (const auto& f : a.buchi) {
        std::set<State> lifted;
        for (const auto& [s, name] : names)
            if (f.count(s.base)) lifted.insert(name);
        out.buchi.push_back(std::move(lifted));
    }
    if (divergent) {
        std::set<State> ticks;
        for (const auto& [s, name] : names)
            if (s.ticked) ticks.insert(name);
        out.buchi.push_back(std::move(ticks));
    }
    out.sort_transitions();
    return out;
}

} // namespace

NestedVpta region_abstraction(const NestedVpta& a) {
    return region_abstract_impl(a, false);
}

NestedVpta region_abstraction_divergent(const NestedVpta& a) {
    return region_abstract_impl(a, true);
}

NestedVpta simplify_acceptance(const NestedVpta& a) {
    NestedVpta out = a;
    std::vector<std::set<State>> kept;
    for (const auto& f : a.buchi) {
        bool implied = false;
        for (const auto& other : a.buchi)
            if (&other != &f && std::includes(f.begin(), f.end(), other.begin(),
                                              other.end()) &&
                !(other == f))
                implied = true;
        if (implied) continue;
        if (std::find(kept.begin(), kept.end(), f) == kept.end()) kept.push_back(f);
    }
    if (kept.empty() && !a.buchi.empty()) kept.push_back(a.buchi.front());
    out.buchi = std::move(kept);
    return out;
}

NestedVpta prune_unreachable(const NestedVpta& a) {
    std::map<State, std::vector<State>> adj;
    for (const auto& t : a.pushes) adj[t.from].push_back(t.to);
    for (const auto& t : a.pops) adj[t.from].push_back(t.to);
    for (const auto& t : a.internals) adj[t.from].push_back(t.to);
    std::set<State> alive;
    std::deque<State> queue(a.initial.begin(), a.initial.end());
    alive.insert(a.initial.begin(), a.initial.end());
    while (!queue.empty()) {
        State q = std::move(queue.front());
        queue.pop_front();
        for (const auto& next : adj[q])
            if (alive.insert(next).second) queue.push_back(next);
    }

    NestedVpta out;
    out.alphabet = a.alphabet;
    out.event_clocks = a.event_clocks;
    out.standard_clocks = a.standard_clocks;
    out.states = alive;
    out.initial = a.initial;
    for (const auto& t : a.pushes)
        if (alive.count(t.from)) {
            out.pushes.push_back(t);
            out.stack.insert(t.push);
        }
    for (const auto& t : a.pops)
        if (alive.count(t.from)) {
            out.pops.push_back(t);
            if (t.pop != kStackBottom) out.stack.insert(t.pop);
        }
    for (const auto& t : a.internals)
        if (alive.count(t.from)) out.internals.push_back(t);
    for (const auto& f : a.buchi) {
        std::set<State> kept;
        for (const auto& q : f)
            if (alive.count(q)) kept.insert(q);
        out.buchi.push_back(std::move(kept));
    }
    if (out.buchi.empty()) out.buchi.push_back({});
    for (const auto& q : a.finite_accepting)
        if (alive.count(q)) out.finite_accepting.insert(q);
    return out;
}

NestedVpta degeneralize(const NestedVpta& a) {
    require_valid(a);
    const size_t k = a.buchi.size();
    auto name = [](const State& q, size_t i) {
        return "(" + q + "#" + std::to_string(i) + ")";
    };
    // Leaving a state of the watched component advances the counter; wraps
    // witness one full round through the family.
    auto next_counter = [&](const State& from, size_t i) {
        return a.buchi[i].count(from) ? (i + 1) % k : i;
    };

    std::map<State, std::vector<const PushTransition*>> pushes_from;
    std::map<State, std::vector<const PopTransition*>> pops_from;
    std::map<State, std::vector<const InternalTransition*>> internals_from;
    for (const auto& t : a.pushes) pushes_from[t.from].push_back(&t);
    for (const auto& t : a.pops) pops_from[t.from].push_back(&t);
    for (const auto& t : a.internals) internals_from[t.from].push_back(&t);

    NestedVpta out;
    out.alphabet = a.alphabet;
    out.stack = a.stack;
    out.event_clocks = a.event_clocks;
    out.standard_clocks = a.standard_clocks;

    std::set<std::pair<State, size_t>> seen;
    std::deque<std::pair<State, size_t>> work;
    auto intern = [&](const State& q, size_t i) {
        if (seen.insert({q, i}).second) work.push_back({q, i});
        return name(q, i);
    };
    for (const auto& q : a.initial) out.initial.insert(intern(q, 0));
    while (!work.empty()) {
        auto [q, i] = work.front();
        work.pop_front();
        const State from = name(q, i);
        const size_t j = next_counter(q, i);
        if (auto it = pushes_from.find(q); it != pushes_from.end())
            for (const auto* t : it->second)
                out.pushes.push_back({from, t->symbol, t->guard, t->resets,
                                      intern(t->to, j), t->push});
        if (auto it = pops_from.find(q); it != pops_from.end())
            for (const auto* t : it->second)
                out.pops.push_back({from, t->symbol, t->guard, t->resets, t->pop,
                                    intern(t->to, j)});
        if (auto it = internals_from.find(q); it != internals_from.end())
            for (const auto* t : it->second)
                out.internals.push_back({from, t->symbol, t->guard, t->resets,
                                         intern(t->to, j)});
    }

    std::set<State> accepting;
    for (const auto& [q, i] : seen) {
        out.states.insert(name(q, i));
        if (i == k - 1 && a.buchi[k - 1].count(q)) accepting.insert(name(q, i));
        if (a.finite_accepting.count(q)) out.finite_accepting.insert(name(q, i));
    }
    out.buchi.push_back(std::move(accepting));
    out.sort_transitions();
    return out;
}

// --- summarized emptiness ---------------------------------------------------

namespace {

using Mask = unsigned;

// Saturated view of a clockless automaton. A pocket is the summary of one
// matched call/return: call edge, well-matched body, matching pop. Segments
// are well-matched walks starting at a call target, the only places pocket
// bodies can start, which keeps the closure far smaller than all-pairs
// summaries. Cycles and reachability run over internal, call, bottom-read
// and pocket edges; longer well-matched stretches are just paths there.
struct SummaryGraph {
    std::vector<State> state_of;
    std::map<State, int> id_of;
    std::vector<Mask> mark; // acceptance-set membership bits per state

    struct IntEdge { int from, to; Symbol sym; };
    struct CallEdge { int from, to; Symbol sym; StackSymbol g; };
    struct PopEdge { int from, to; Symbol sym; StackSymbol g; };
    std::vector<IntEdge> internals;
    std::vector<CallEdge> calls;
    std::vector<PopEdge> pops;     // g != bottom
    std::vector<IntEdge> bot_pops; // bottom reads

    using Key = std::tuple<int, int, Mask>;

    // Derivations reference only entries inserted earlier.
    struct SegDeriv {
        enum Kind { BaseInternal, BasePocket, ExtInternal, ExtPocket } kind;
        size_t edge = 0; // internal edge for Base/ExtInternal
        Key prev{};      // segment being extended
        Key pocket{};    // pocket consumed
    };
    struct PocketDeriv {
        size_t call = 0, pop = 0;
        bool has_inner = false;
        Key inner{}; // segment spanning the body
    };
    std::map<Key, SegDeriv> segments;   // source is a call target
    std::map<Key, PocketDeriv> pockets; // masks cover the body and its ends
    std::vector<std::vector<Key>> segments_by_target;
    std::vector<std::vector<Key>> pockets_by_source;
};

SummaryGraph build_summaries(const NestedVpta& a, unsigned shuffle_seed) {
    SummaryGraph g;
    for (const auto& q : a.states) {
        g.id_of.emplace(q, static_cast<int>(g.state_of.size()));
        g.state_of.push_back(q);
    }
    const size_t n = g.state_of.size();
    g.mark.assign(n, 0);
    for (size_t i = 0; i < a.buchi.size() && i < 8 * sizeof(Mask); ++i)
        for (const auto& q : a.buchi[i]) g.mark[g.id_of.at(q)] |= Mask{1} << i;
    g.by_source.assign(n, {});
    g.by_target.assign(n, {});

    for (const auto& t : a.internals)
        g.internals.push_back({g.id_of.at(t.from), g.id_of.at(t.to), t.symbol});
    for (const auto& t : a.pushes)
        g.calls.push_back({g.id_of.at(t.from), g.id_of.at(t.to), t.symbol, t.push});
    for (const auto& t : a.pops) {
        if (t.pop == kStackBottom)
            g.bot_pops.push_back({g.id_of.at(t.from), g.id_of.at(t.to), t.symbol});
        else
            g.pops.push_back({g.id_of.at(t.from), g.id_of.at(t.to), t.symbol, t.pop});
    }

    // Indexes for the closure rules.
    std::vector<std::vector<size_t>> calls_by_target(n);
    for (size_t c = 0; c < g.calls.size(); ++c)
        calls_by_target[g.calls[c].to].push_back(c);
    std::map<std::pair<int, StackSymbol>, std::vector<size_t>> pops_by_from_sym;
    for (size_t p = 0; p < g.pops.size(); ++p)
        pops_by_from_sym[{g.pops[p].from, g.pops[p].g}].push_back(p);

    std::mt19937 rng(shuffle_seed);
    std::vector<std::tuple<int, int, Mask>> work;
    auto add = [&](int u, int v, Mask m, SummaryGraph::Deriv deriv) {
        auto key = std::make_tuple(u, v, m);
        if (g.summaries.count(key)) return;
        g.summaries.emplace(key, deriv);
        g.by_source[u].push_back(key);
        g.by_target[v].push_back(key);
        work.push_back(key);
    };

    for (size_t e = 0; e < g.internals.size(); ++e)
        add(g.internals[e].from, g.internals[e].to, 0,
            {SummaryGraph::Deriv::FromInternal, e, 0, {}, {}});
    for (size_t c = 0; c < g.calls.size(); ++c) {
        auto it = pops_by_from_sym.find({g.calls[c].to, g.calls[c].g});
        if (it == pops_by_from_sym.end()) continue;
        for (size_t p : it->second)
            add(g.calls[c].from, g.pops[p].to, g.mark[g.calls[c].to],
                {SummaryGraph::Deriv::FromCallPop0, c, p, {}, {}});
    }

    while (!work.empty()) {
        size_t pick = work.size() - 1;
        if (shuffle_seed != 0)
            pick = std::uniform_int_distribution<size_t>(0, work.size() - 1)(rng);
        auto key = work[pick];
        work[pick] = work.back();
        work.pop_back();
        const auto [u, v, m] = key;

        // Extend to the right and to the left. Entries appended mid-loop are
        // processed on their own turn.
        for (size_t i = 0; i < g.by_source[v].size(); ++i) {
            auto right = g.by_source[v][i];
            add(u, std::get<1>(right), m | g.mark[v] | std::get<2>(right),
                {SummaryGraph::Deriv::FromConcat, 0, 0, key, right});
        }
        for (size_t i = 0; i < g.by_target[u].size(); ++i) {
            auto left = g.by_target[u][i];
            add(std::get<0>(left), v, std::get<2>(left) | g.mark[u] | m,
                {SummaryGraph::Deriv::FromConcat, 0, 0, left, key});
        }
        // Wrap in a matching call/pop pair.
        for (size_t c : calls_by_target[u]) {
            auto it = pops_by_from_sym.find({v, g.calls[c].g});
            if (it == pops_by_from_sym.end()) continue;
            for (size_t p : it->second)
                add(g.calls[c].from, g.pops[p].to, g.mark[u] | m | g.mark[v],
                    {SummaryGraph::Deriv::FromCallPop, c, p, key, {}});
        }
    }
    return g;
}

std::vector<Symbol> expand_summary(const SummaryGraph& g,
                                   const std::tuple<int, int, Mask>& key) {
    const auto& d = g.summaries.at(key);
    switch (d.kind) {
        case SummaryGraph::Deriv::FromInternal:
            return {g.internals[d.e1].sym};
        case SummaryGraph::Deriv::FromCallPop0:
            return {g.calls[d.e1].sym, g.pops[d.e2].sym};
        case SummaryGraph::Deriv::FromCallPop: {
            std::vector<Symbol> out{g.calls[d.e1].sym};
            auto inner = expand_summary(g, d.s1);
            out.insert(out.end(), inner.begin(), inner.end());
            out.push_back(g.pops[d.e2].sym);
            return out;
        }
        case SummaryGraph::Deriv::FromConcat: {
            auto out = expand_summary(g, d.s1);
            auto rest = expand_summary(g, d.s2);
            out.insert(out.end(), rest.begin(), rest.end());
            return out;
        }
    }
    return {};
}

// An edge of the summarized graph: a single transition or a whole summary.
struct GEdge {
    int from, to;
    Mask mask;  // acceptance bits of the target plus any summary interior
    enum Kind { Internal, Call, BotPop, Summary } kind;
    size_t index{};                   // for single transitions
    std::tuple<int, int, Mask> key{}; // for summaries
};

std::vector<Symbol> expand_edge(const SummaryGraph& g, const GEdge& e) {
    switch (e.kind) {
        case GEdge::Internal: return {g.internals[e.index].sym};
        case GEdge::Call: return {g.calls[e.index].sym};
        case GEdge::BotPop: return {g.bot_pops[e.index].sym};
        case GEdge::Summary: return expand_summary(g, e.key);
    }
    return {};
}

std::vector<GEdge> graph_edges(const SummaryGraph& g, bool with_calls,
                               bool with_bot_pops) {
    std::vector<GEdge> out;
    for (size_t i = 0; i < g.internals.size(); ++i)
        out.push_back({g.internals[i].from, g.internals[i].to,
                       g.mark[g.internals[i].to], GEdge::Internal, i, {}});
    if (with_calls)
        for (size_t i = 0; i < g.calls.size(); ++i)
            out.push_back({g.calls[i].from, g.calls[i].to, g.mark[g.calls[i].to],
                           GEdge::Call, i, {}});
    if (with_bot_pops)
        for (size_t i = 0; i < g.bot_pops.size(); ++i)
            out.push_back({g.bot_pops[i].from, g.bot_pops[i].to,
                           g.mark[g.bot_pops[i].to], GEdge::BotPop, i, {}});
    for (const auto& [key, deriv] : g.summaries) {
        (void)deriv;
        const auto [u, v, m] = key;
        out.push_back({u, v, m | g.mark[v], GEdge::Summary, 0, key});
    }
    return out;
}

std::vector<int> scc_ids(size_t n, const std::vector<GEdge>& edges,
                         const std::vector<char>& alive) {
    // Kosaraju over the alive subgraph.
    std::vector<std::vector<int>> fwd(n), rev(n);
    for (const auto& e : edges) {
        if (!alive[e.from] || !alive[e.to]) continue;
        fwd[e.from].push_back(e.to);
        rev[e.to].push_back(e.from);
    }
    std::vector<char> seen(n, 0);
    std::vector<int> order;
    for (size_t s = 0; s < n; ++s) {
        if (seen[s] || !alive[s]) continue;
        std::vector<std::pair<int, size_t>> stack{{static_cast<int>(s), 0}};
        seen[s] = 1;
        while (!stack.empty()) {
            auto& [u, next] = stack.back();
            if (next < fwd[u].size()) {
                int v = fwd[u][next++];
                if (!seen[v]) {
                    seen[v] = 1;
                    stack.push_back({v, 0});
                }
            } else {
                order.push_back(u);
                stack.pop_back();
            }
        }
    }
    std::vector<int> id(n, -1);
    int comp = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        if (id[*it] != -1) continue;
        std::vector<int> stack{*it};
        id[*it] = comp;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int v : rev[u])
                if (id[v] == -1 && alive[v]) {
                    id[v] = comp;
                    stack.push_back(v);
                }
        }
        ++comp;
    }
    return id;
}

// Shortest edge path in a subgraph, by BFS.
std::optional<std::vector<GEdge>> edge_path(size_t n, const std::vector<GEdge>& edges,
                                            const std::vector<char>& alive, int from,
                                            int to) {
    std::vector<std::vector<size_t>> adj(n);
    for (size_t i = 0; i < edges.size(); ++i)
        if (alive[edges[i].from] && alive[edges[i].to]) adj[edges[i].from].push_back(i);
    std::vector<long> parent_edge(n, -2);
    std::deque<int> queue{from};
    parent_edge[from] = -1;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (size_t i : adj[u]) {
            int v = edges[i].to;
            if (parent_edge[v] != -2) continue;
            parent_edge[v] = static_cast<long>(i);
            queue.push_back(v);
        }
    }
    if (parent_edge[to] == -2) return std::nullopt;
    std::vector<GEdge> path;
    for (int cur = to; parent_edge[cur] >= 0; cur = edges[parent_edge[cur]].from)
        path.push_back(edges[parent_edge[cur]]);
    std::reverse(path.begin(), path.end());
    return path;
}

void require_single_component_clockless(const NestedVpta& a) {
    require_valid(a);
    if (!a.event_clocks.empty() || !a.standard_clocks.empty())
        fail(ErrorCode::BadArgument, "expected a clockless automaton");
    if (a.buchi.size() != 1)
        fail(ErrorCode::BadArgument, "expected a single acceptance component");
}

} // namespace

EmptinessResult buchi_vpa_emptiness(const NestedVpta& a, unsigned shuffle_seed) {
    require_single_component_clockless(a);
    SummaryGraph g = build_summaries(a, shuffle_seed);
    const size_t n = g.state_of.size();

    // Phase 0 walks at empty stack (bottom reads allowed); a pending call
    // moves to phase 1 for good.
    auto ge_edges = graph_edges(g, false, true);
    auto ga_edges = graph_edges(g, true, false);
    std::vector<std::vector<size_t>> ge_adj(n), ga_adj(n);
    for (size_t i = 0; i < ge_edges.size(); ++i) ge_adj[ge_edges[i].from].push_back(i);
    for (size_t i = 0; i < ga_edges.size(); ++i) ga_adj[ga_edges[i].from].push_back(i);

    std::vector<char> reach_e(n, 0), reach_a(n, 0);
    {
        std::deque<int> queue;
        for (const auto& q : a.initial) {
            int u = g.id_of.at(q);
            if (!reach_e[u]) {
                reach_e[u] = 1;
                queue.push_back(u);
            }
        }
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (size_t i : ge_adj[u]) {
                int v = ge_edges[i].to;
                if (!reach_e[v]) {
                    reach_e[v] = 1;
                    queue.push_back(v);
                }
            }
        }
        reach_a = reach_e;
        queue.clear();
        for (size_t u = 0; u < n; ++u)
            if (reach_a[u]) queue.push_back(static_cast<int>(u));
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (size_t i : ga_adj[u]) {
                int v = ga_edges[i].to;
                if (!reach_a[v]) {
                    reach_a[v] = 1;
                    queue.push_back(v);
                }
            }
        }
    }

    struct Found {
        GEdge accepting;
        std::vector<GEdge> back_path;
        bool in_phase_e;
    };
    std::optional<Found> found;

    auto search = [&](const std::vector<GEdge>& edges, const std::vector<char>& alive,
                      bool phase_e) {
        if (found) return;
        auto id = scc_ids(n, edges, alive);
        for (const auto& e : edges) {
            if (!alive[e.from] || !alive[e.to]) continue;
            if (id[e.from] != id[e.to] || !(e.mask & 1)) continue;
            // Restrict the back path to the component.
            std::vector<char> in_comp(n, 0);
            for (size_t u = 0; u < n; ++u)
                in_comp[u] = alive[u] && id[u] == id[e.from];
            auto back = edge_path(n, edges, in_comp, e.to, e.from);
            if (back) {
                found = Found{e, *back, phase_e};
                return;
            }
        }
    };
    search(ge_edges, reach_e, true);
    search(ga_edges, reach_a, false);

    if (!found) return {true, std::nullopt};

    // Stem: phase-aware BFS to the accepting edge's source.
    const int target = found->accepting.from;
    struct Node {
        int state;
        int phase;
    };
    std::map<std::pair<int, int>, std::pair<std::pair<int, int>, GEdge>> parent;
    std::deque<Node> queue;
    auto push_node = [&](Node next, Node from, const GEdge& via) {
        auto key = std::make_pair(next.state, next.phase);
        if (parent.count(key)) return;
        parent.emplace(key,
                       std::make_pair(std::make_pair(from.state, from.phase), via));
        queue.push_back(next);
    };
    for (const auto& q : a.initial) push_node({g.id_of.at(q), 0}, {-1, -1}, {});
    std::optional<Node> hit;
    while (!queue.empty() && !hit) {
        Node u = queue.front();
        queue.pop_front();
        if (u.state == target && (found->in_phase_e ? u.phase == 0 : true)) {
            hit = u;
            break;
        }
        const auto& edges = u.phase == 0 ? ge_edges : ga_edges;
        const auto& adj = u.phase == 0 ? ge_adj : ga_adj;
        for (size_t i : adj[u.state]) push_node({edges[i].to, u.phase}, u, edges[i]);
        if (u.phase == 0)
            for (size_t i : ga_adj[u.state])
                if (ga_edges[i].kind == GEdge::Call)
                    push_node({ga_edges[i].to, 1}, u, ga_edges[i]);
    }
    if (!hit) fail(ErrorCode::Internal, "witness target unreachable");

    Lasso lasso;
    {
        std::vector<GEdge> stem_edges;
        auto cur = std::make_pair(hit->state, hit->phase);
        while (true) {
            auto it = parent.find(cur);
            if (it == parent.end() || it->second.first.first == -1) break;
            stem_edges.push_back(it->second.second);
            cur = it->second.first;
        }
        std::reverse(stem_edges.begin(), stem_edges.end());
        for (const auto& e : stem_edges) {
            auto word = expand_edge(g, e);
            lasso.stem.insert(lasso.stem.end(), word.begin(), word.end());
        }
        auto word = expand_edge(g, found->accepting);
        lasso.cycle.insert(lasso.cycle.end(), word.begin(), word.end());
        for (const auto& e : found->back_path) {
            auto rest = expand_edge(g, e);
            lasso.cycle.insert(lasso.cycle.end(), rest.begin(), rest.end());
        }
    }
    return {false, lasso};
}

bool replay_lasso(const NestedVpta& a, const Lasso& lasso) {
    require_single_component_clockless(a);
    if (lasso.cycle.empty()) return false;
    const auto& accepting = a.buchi[0];

    std::map<std::pair<State, Symbol>, std::vector<const PushTransition*>> pushes;
    std::map<std::pair<State, Symbol>, std::vector<const PopTransition*>> pops;
    std::map<std::pair<State, Symbol>, std::vector<const InternalTransition*>> internals;
    for (const auto& t : a.pushes) pushes[{t.from, t.symbol}].push_back(&t);
    for (const auto& t : a.pops) pops[{t.from, t.symbol}].push_back(&t);
    for (const auto& t : a.internals) internals[{t.from, t.symbol}].push_back(&t);

    struct Cfg {
        State q;
        std::vector<StackSymbol> stack;

        bool operator<(const Cfg& o) const {
            if (q != o.q) return q < o.q;
            return stack < o.stack;
        }
    };
    auto step_all = [&](const std::set<Cfg>& from, const Symbol& sym,
                        size_t floor) {
        std::set<Cfg> out;
        auto cls = a.alphabet.classify(sym);
        if (!cls) fail(ErrorCode::AlphabetMismatch, "witness symbol " + sym);
        for (const auto& cfg : from) {
            switch (*cls) {
                case SymbolClass::Call:
                    if (auto it = pushes.find({cfg.q, sym}); it != pushes.end())
                        for (const auto* t : it->second) {
                            Cfg next{t->to, cfg.stack};
                            next.stack.push_back(t->push);
                            out.insert(std::move(next));
                        }
                    break;
                case SymbolClass::Return:
                    if (auto it = pops.find({cfg.q, sym}); it != pops.end())
                        for (const auto* t : it->second) {
                            if (t->pop == kStackBottom) {
                                if (cfg.stack.empty()) out.insert({t->to, cfg.stack});
                            } else if (!cfg.stack.empty() &&
                                       cfg.stack.size() > floor &&
                                       cfg.stack.back() == t->pop) {
                                Cfg next{t->to, cfg.stack};
                                next.stack.pop_back();
                                out.insert(std::move(next));
                            }
                        }
                    break;
                case SymbolClass::Internal:
                    if (auto it = internals.find({cfg.q, sym}); it != internals.end())
                        for (const auto* t : it->second) out.insert({t->to, cfg.stack});
                    break;
            }
        }
        return out;
    };

    std::set<Cfg> after_stem;
    for (const auto& q : a.initial) after_stem.insert({q, {}});
    for (const auto& sym : lasso.stem) after_stem = step_all(after_stem, sym, 0);

    for (const auto& start : after_stem) {
        const size_t floor = start.stack.size();
        // Track whether an accepting state was seen during the pass.
        std::set<std::pair<Cfg, bool>> frontier{
            {start, accepting.count(start.q) != 0}};
        for (const auto& sym : lasso.cycle) {
            std::set<std::pair<Cfg, bool>> next;
            for (const auto& [cfg, saw] : frontier)
                for (const auto& succ : step_all({cfg}, sym, floor))
                    next.insert({succ, saw || accepting.count(succ.q) != 0});
            frontier = std::move(next);
        }
        for (const auto& [cfg, saw] : frontier)
            if (saw && cfg.q == start.q && cfg.stack.size() >= floor) {
                bool same_base = true;
                for (size_t i = 0; i < floor; ++i)
                    same_base = same_base && cfg.stack[i] == start.stack[i];
                if (same_base) return true;
            }
    }
    return false;
}

FiniteSearchResult finite_emptiness(const NestedVpta& a,
                                    const std::set<StackSymbol>& forbidden_pending) {
    require_valid(a);
    if (!a.event_clocks.empty() || !a.standard_clocks.empty())
        fail(ErrorCode::BadArgument, "expected a clockless automaton");
    NestedVpta probe = a;
    if (probe.buchi.size() != 1) probe.buchi = {probe.finite_accepting};
    SummaryGraph g = build_summaries(probe, 0);

    auto ge_edges = graph_edges(g, false, true);
    auto ga_edges = graph_edges(g, true, false);
    std::erase_if(ga_edges, [&](const GEdge& e) {
        return e.kind == GEdge::Call &&
               forbidden_pending.count(g.calls[e.index].g) != 0;
    });
    const size_t n = g.state_of.size();
    std::vector<std::vector<size_t>> ge_adj(n), ga_adj(n);
    for (size_t i = 0; i < ge_edges.size(); ++i) ge_adj[ge_edges[i].from].push_back(i);
    for (size_t i = 0; i < ga_edges.size(); ++i) ga_adj[ga_edges[i].from].push_back(i);

    std::map<std::pair<int, int>, std::pair<std::pair<int, int>, GEdge>> parent;
    std::deque<std::pair<int, int>> queue;
    auto push_node = [&](std::pair<int, int> next, std::pair<int, int> from,
                         const GEdge& via) {
        if (parent.count(next)) return;
        parent.emplace(next, std::make_pair(from, via));
        queue.push_back(next);
    };
    for (const auto& q : a.initial) push_node({g.id_of.at(q), 0}, {-1, -1}, {});

    std::optional<std::pair<int, int>> hit;
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        if (a.finite_accepting.count(g.state_of[u.first])) {
            hit = u;
            break;
        }
        const auto& edges = u.second == 0 ? ge_edges : ga_edges;
        const auto& adj = u.second == 0 ? ge_adj : ga_adj;
        for (size_t i : adj[u.first]) push_node({edges[i].to, u.second}, u, edges[i]);
        if (u.second == 0)
            for (size_t i : ga_adj[u.first])
                if (ga_edges[i].kind == GEdge::Call)
                    push_node({ga_edges[i].to, 1}, u, ga_edges[i]);
    }
    if (!hit) return {true, std::nullopt};

    std::vector<GEdge> path;
    auto cur = *hit;
    while (true) {
        auto it = parent.find(cur);
        if (it == parent.end() || it->second.first.first == -1) break;
        path.push_back(it->second.second);
        cur = it->second.first;
    }
    std::reverse(path.begin(), path.end());
    std::vector<Symbol> word;
    for (const auto& e : path) {
        auto part = expand_edge(g, e);
        word.insert(word.end(), part.begin(), part.end());
    }
    return {false, word};
}

std::optional<TimedWord> concretize_word(const NestedVpta& a,
                                         const std::vector<Symbol>& word) {
    require_valid(a);
    if (!a.event_clocks.empty())
        fail(ErrorCode::HasEventClocks, "concretization expects standard clocks only");

    const Rational cap = greatest_constant(a);

    struct Node {
        State q;
        std::vector<StackSymbol> stack;
        std::map<ClockName, Rational> sval;
        Rational now;

        auto key() const { return std::make_tuple(q, stack, sval); }
    };

    // Delays that visit every region reachable by waiting: boundary hits and
    // the open intervals between them.
    auto candidate_delays = [&](const std::map<ClockName, Rational>& sval) {
        std::vector<Rational> out{0};
        auto v = sval;
        Rational total = 0;
        while (true) {
            std::optional<Rational> dist;
            for (const auto& [c, x] : v) {
                if (x > cap) continue;
                Rational next = boost::multiprecision::numerator(x) /
                                boost::multiprecision::denominator(x);
                while (next <= x) next += 1;
                Rational d = next - x;
                if (!dist || d < *dist) dist = d;
            }
            if (!dist) break;
            out.push_back(total + *dist / 2);
            total += *dist;
            out.push_back(total);
            for (auto& [c, x] : v) x += *dist;
        }
        out.push_back(total + 1);
        return out;
    };

    std::vector<Node> nodes;
    std::vector<long> parents;
    std::map<std::tuple<State, std::vector<StackSymbol>, std::map<ClockName, Rational>>,
             size_t>
        dedupe;
    std::vector<size_t> frontier;
    for (const auto& q : a.initial) {
        Node init{q, {}, {}, 0};
        for (const auto& c : a.standard_clocks) init.sval[c] = 0;
        if (dedupe.emplace(init.key(), nodes.size()).second) {
            frontier.push_back(nodes.size());
            nodes.push_back(init);
            parents.push_back(-1);
        }
    }

    ClockValuation no_events;
    std::optional<size_t> accepted;
    for (size_t pos = 0; pos < word.size(); ++pos) {
        auto cls = a.alphabet.classify(word[pos]);
        if (!cls) fail(ErrorCode::AlphabetMismatch, "symbol " + word[pos]);
        std::vector<size_t> next_frontier;
        dedupe.clear();
        for (size_t idx : frontier) {
            const Node node = nodes[idx];
            for (const auto& t : candidate_delays(node.sval)) {
                auto advanced = node.sval;
                for (auto& [c, x] : advanced) x += t;
                auto try_add = [&](const State& to,
                                   const std::vector<StackSymbol>& stack,
                                   const std::set<ClockName>& resets) {
                    auto sval = advanced;
                    for (const auto& r : resets) sval[r] = 0;
                    Node succ{to, stack, sval, node.now + t};
                    if (!dedupe.emplace(succ.key(), nodes.size()).second) return;
                    next_frontier.push_back(nodes.size());
                    nodes.push_back(succ);
                    parents.push_back(static_cast<long>(idx));
                };
                switch (*cls) {
                    case SymbolClass::Call:
                        for (const auto& tr : a.pushes) {
                            if (tr.from != node.q || tr.symbol != word[pos]) continue;
                            if (!constraint_sat(advanced, no_events, tr.guard)) continue;
                            auto stack = node.stack;
                            stack.push_back(tr.push);
                            try_add(tr.to, stack, tr.resets);
                        }
                        break;
                    case SymbolClass::Return:
                        for (const auto& tr : a.pops) {
                            if (tr.from != node.q || tr.symbol != word[pos]) continue;
                            const bool at_bottom = node.stack.empty();
                            if (tr.pop == kStackBottom) {
                                if (!at_bottom) continue;
                            } else if (at_bottom || node.stack.back() != tr.pop) {
                                continue;
                            }
                            if (!constraint_sat(advanced, no_events, tr.guard)) continue;
                            auto stack = node.stack;
                            if (!at_bottom) stack.pop_back();
                            try_add(tr.to, stack, tr.resets);
                        }
                        break;
                    case SymbolClass::Internal:
                        for (const auto& tr : a.internals) {
                            if (tr.from != node.q || tr.symbol != word[pos]) continue;
                            if (!constraint_sat(advanced, no_events, tr.guard)) continue;
                            try_add(tr.to, node.stack, tr.resets);
                        }
                        break;
                }
            }
        }
        frontier = std::move(next_frontier);
        if (frontier.empty()) return std::nullopt;
    }
    for (size_t idx : frontier)
        if (a.finite_accepting.count(nodes[idx].q)) accepted = idx;
    if (!accepted) return std::nullopt;

    std::vector<Rational> times;
    for (long cur = static_cast<long>(*accepted); cur >= 0 && parents[cur] != -1;
         cur = parents[cur])
        times.push_back(nodes[cur].now);
    // Initial nodes have now == 0 and no letter.
    std::reverse(times.begin(), times.end());
    if (times.size() != word.size())
        fail(ErrorCode::Internal, "concretization lost track of the word");
    TimedWord out;
    for (size_t i = 0; i < word.size(); ++i) out.letters.push_back({word[i], times[i]});
    return out;
}

} // namespace ecna
