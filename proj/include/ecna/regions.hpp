#pragma once

#include "ecna/automaton.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace ecna {

// The canonical interval list for a sorted set of constants: {bot}, [0,0],
// then alternating points and open gaps up to (c_max, inf). With no
// constants it degenerates to {bot}, [0,0], (0,inf).
std::vector<Interval> canonical_intervals(const std::vector<unsigned long>& constants);

// Finite bounds appearing in the automaton's guards, sorted and distinct.
std::vector<unsigned long> guard_constants(const NestedVpta& a);

// One canonical interval per event clock; denotes the valuations whose every
// clock lies in its interval. Regions over a fixed clock set and interval
// list partition the valuation space.
struct Region {
    std::map<ClockId, Interval> entries;

    bool operator==(const Region&) const = default;
    bool operator<(const Region& o) const { return entries < o.entries; }

    ClockConstraint to_constraint() const;
    std::string str() const; // {xa(a):[1,1],xg(b):[bot,bot]}
};

Region parse_region(const std::string& text);

// All |intervals|^|clocks| regions, in a stable order.
std::vector<Region> all_regions(const std::set<ClockId>& clocks,
                                const std::vector<Interval>& intervals);

// The unique region containing the valuation.
Region region_of(const ClockValuation& valuation, const std::set<ClockId>& clocks,
                 const std::vector<Interval>& intervals);

// Denotation tests against a guard, decided symbolically.
bool region_inside(const Region& region, const ClockConstraint& guard);
bool region_disjoint(const Region& region, const ClockConstraint& guard);

// A letter of the interval alphabet: base symbol plus a region constraining
// the event clocks at its position.
struct IntervalLetter {
    Symbol base;
    Region region;

    bool operator==(const IntervalLetter&) const = default;
    bool operator<(const IntervalLetter& o) const {
        if (base != o.base) return base < o.base;
        return region < o.region;
    }
};

struct SymbolicWord {
    std::vector<IntervalLetter> letters;

    bool operator==(const SymbolicWord&) const = default;
    bool operator<(const SymbolicWord& o) const { return letters < o.letters; }

    std::string str() const;
};

// Does the timed word lie in the set of words the symbolic word denotes?
bool tw_contains(const SymbolicWord& symbolic, const TimedWord& word,
                 const PushdownAlphabet& alphabet);

// The unique symbolic image of a timed word over the given clocks/intervals.
SymbolicWord symbolic_image(const TimedWord& word, const PushdownAlphabet& alphabet,
                            const std::set<ClockId>& clocks,
                            const std::vector<Interval>& intervals);

// Bijection between interval letters and rendered composite symbols, so a
// clockless automaton over the interval alphabet reuses the ordinary
// automaton machinery and file format.
struct IntervalSymbolTable {
    PushdownAlphabet sigma; // base alphabet
    std::set<ClockId> clocks;
    std::vector<Interval> intervals;
    PushdownAlphabet lambda;
    std::map<Symbol, IntervalLetter> decode;

    Symbol encode(const IntervalLetter& letter) const; // "a@{...}"
};

IntervalSymbolTable make_interval_alphabet(const PushdownAlphabet& sigma,
                                           const std::set<ClockId>& clocks,
                                           const std::vector<Interval>& intervals);

} // namespace ecna
