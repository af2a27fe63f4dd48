#include "ecna/regions.hpp"

#include "ecna/error.hpp"
#include "ecna/textio.hpp"

#include <algorithm>
#include <sstream>

namespace ecna {

std::vector<Interval> canonical_intervals(const std::vector<unsigned long>& constants) {
    for (size_t i = 1; i < constants.size(); ++i)
        if (constants[i - 1] >= constants[i])
            fail(ErrorCode::UnsortedConstants, "constants must be sorted and distinct");

    std::vector<Interval> out;
    out.push_back(Interval::undef_singleton());
    out.push_back(Interval::point(0));
    if (constants.empty()) {
        out.push_back(Interval::at_least(0, true));
        return out;
    }
    unsigned long prev = 0;
    for (size_t i = 0; i < constants.size(); ++i) {
        unsigned long c = constants[i];
        if (c > prev || (i == 0 && c > 0))
            out.push_back(Interval::bounded(prev, true, c, true));
        if (c != 0) out.push_back(Interval::point(c));
        prev = c;
    }
    out.push_back(Interval::at_least(prev, true));
    // A leading constant 0 duplicates [0,0]; drop empties and duplicates.
    std::vector<Interval> dedup;
    for (const auto& iv : out) {
        if (iv.empty()) continue;
        if (std::find(dedup.begin(), dedup.end(), iv) == dedup.end())
            dedup.push_back(iv);
    }
    return dedup;
}

std::vector<unsigned long> guard_constants(const NestedVpta& a) {
    std::set<unsigned long> consts;
    auto scan = [&](const ClockConstraint& g) {
        for (const auto& atom : g.atoms) {
            if (atom.interval.undef) continue;
            consts.insert(atom.interval.lower);
            if (atom.interval.upper) consts.insert(*atom.interval.upper);
        }
    };
    for (const auto& t : a.pushes) scan(t.guard);
    for (const auto& t : a.pops) scan(t.guard);
    for (const auto& t : a.internals) scan(t.guard);
    consts.erase(0); // zero adds no boundary beyond the fixed [0,0]
    return {consts.begin(), consts.end()};
}

ClockConstraint Region::to_constraint() const {
    ClockConstraint out;
    for (const auto& [clock, interval] : entries) out.atoms.push_back({clock, interval});
    return out;
}

std::string Region::str() const {
    std::ostringstream os;
    os << '{';
    bool first = true;
    for (const auto& [clock, interval] : entries) {
        if (!first) os << ',';
        os << clock_to_string(clock) << ':' << interval.str();
        first = false;
    }
    os << '}';
    return os.str();
}

Region parse_region(const std::string& text) {
    if (text.size() < 2 || text.front() != '{' || text.back() != '}')
        fail(ErrorCode::Parse, "bad region: " + text);
    Region out;
    auto body = text.substr(1, text.size() - 2);
    if (body.empty()) return out;
    for (const auto& item : split_commas(body)) {
        auto colon = item.rfind(':');
        if (colon == std::string::npos) fail(ErrorCode::Parse, "bad region entry: " + item);
        auto clock = parse_clock(item.substr(0, colon));
        auto interval = parse_interval(item.substr(colon + 1));
        out.entries[clock] = interval;
    }
    return out;
}

std::vector<Region> all_regions(const std::set<ClockId>& clocks,
                                const std::vector<Interval>& intervals) {
    std::vector<Region> out{Region{}};
    for (const auto& clock : clocks) {
        std::vector<Region> next;
        next.reserve(out.size() * intervals.size());
        for (const auto& base : out)
            for (const auto& interval : intervals) {
                Region r = base;
                r.entries[clock] = interval;
                next.push_back(std::move(r));
            }
        out = std::move(next);
    }
    return out;
}

Region region_of(const ClockValuation& valuation, const std::set<ClockId>& clocks,
                 const std::vector<Interval>& intervals) {
    Region out;
    for (const auto& clock : clocks) {
        const auto& v = valuation.at(clock);
        bool placed = false;
        for (const auto& interval : intervals) {
            if (interval.contains(v)) {
                out.entries[clock] = interval;
                placed = true;
                break;
            }
        }
        if (!placed)
            fail(ErrorCode::Internal,
                 "no canonical interval for clock " + clock_to_string(clock));
    }
    return out;
}

bool region_inside(const Region& region, const ClockConstraint& guard) {
    for (const auto& atom : guard.atoms) {
        auto it = region.entries.find(atom.clock);
        if (it == region.entries.end())
            fail(ErrorCode::UnknownClock,
                 "region lacks clock " + clock_to_string(atom.clock));
        if (!it->second.subset_of(atom.interval)) return false;
    }
    return true;
}

bool region_disjoint(const Region& region, const ClockConstraint& guard) {
    for (const auto& atom : guard.atoms) {
        auto it = region.entries.find(atom.clock);
        if (it == region.entries.end())
            fail(ErrorCode::UnknownClock,
                 "region lacks clock " + clock_to_string(atom.clock));
        if (it->second.disjoint_from(atom.interval)) return true;
    }
    return false;
}

std::string SymbolicWord::str() const {
    std::ostringstream os;
    for (size_t i = 0; i < letters.size(); ++i) {
        if (i) os << ' ';
        os << letters[i].base << '@' << letters[i].region.str();
    }
    return os.str();
}

bool tw_contains(const SymbolicWord& symbolic, const TimedWord& word,
                 const PushdownAlphabet& alphabet) {
    if (symbolic.letters.size() != word.size()) return false;
    for (size_t i = 0; i < word.size(); ++i) {
        if (symbolic.letters[i].base != word.letters[i].symbol) return false;
        auto val = clock_valuation(word, alphabet, i);
        for (const auto& [clock, interval] : symbolic.letters[i].region.entries)
            if (!interval.contains(val.at(clock))) return false;
    }
    return true;
}

SymbolicWord symbolic_image(const TimedWord& word, const PushdownAlphabet& alphabet,
                            const std::set<ClockId>& clocks,
                            const std::vector<Interval>& intervals) {
    SymbolicWord out;
    for (size_t i = 0; i < word.size(); ++i) {
        auto val = clock_valuation(word, alphabet, i);
        out.letters.push_back(
            {word.letters[i].symbol, region_of(val, clocks, intervals)});
    }
    return out;
}

Symbol IntervalSymbolTable::encode(const IntervalLetter& letter) const {
    return letter.base + "@" + letter.region.str();
}

IntervalSymbolTable make_interval_alphabet(const PushdownAlphabet& sigma,
                                           const std::set<ClockId>& clocks,
                                           const std::vector<Interval>& intervals) {
    IntervalSymbolTable table;
    table.sigma = sigma;
    table.clocks = clocks;
    table.intervals = intervals;
    const auto regions = all_regions(clocks, intervals);
    auto add = [&](const Symbol& base, std::set<Symbol>& side) {
        for (const auto& region : regions) {
            IntervalLetter letter{base, region};
            auto name = table.encode(letter);
            side.insert(name);
            table.decode.emplace(name, letter);
        }
    };
    for (const auto& b : sigma.calls) add(b, table.lambda.calls);
    for (const auto& b : sigma.returns) add(b, table.lambda.returns);
    for (const auto& b : sigma.internals) add(b, table.lambda.internals);
    return table;
}

} // namespace ecna
