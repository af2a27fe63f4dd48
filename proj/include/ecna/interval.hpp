#pragma once

#include "ecna/clocks.hpp"
#include "ecna/rational.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace ecna {

// Interval over non-negative reals with natural bounds, or the one-point
// set {bot} holding only the undefined clock value.
struct Interval {
    bool undef = false;
    unsigned long lower = 0;
    bool lower_strict = false;
    std::optional<unsigned long> upper; // nullopt = unbounded
    bool upper_strict = false;          // unbounded implies strict

    auto operator<=>(const Interval&) const = default;

    static Interval undef_singleton() {
        Interval i;
        i.undef = true;
        return i;
    }
    static Interval point(unsigned long v) { return bounded(v, false, v, false); }
    static Interval bounded(unsigned long lo, bool lo_strict, unsigned long hi,
                            bool hi_strict) {
        Interval i;
        i.lower = lo;
        i.lower_strict = lo_strict;
        i.upper = hi;
        i.upper_strict = hi_strict;
        return i;
    }
    static Interval at_least(unsigned long lo, bool lo_strict = false) {
        Interval i;
        i.lower = lo;
        i.lower_strict = lo_strict;
        i.upper = std::nullopt;
        i.upper_strict = true;
        return i;
    }
    static Interval any_defined() { return at_least(0); }

    bool contains(const std::optional<Rational>& v) const;
    bool empty() const;
    bool subset_of(const Interval& other) const;
    bool disjoint_from(const Interval& other) const;
    static std::optional<Interval> intersect(const Interval& a, const Interval& b);

    std::string str() const; // "[0,1)", "(2,inf)", "[bot,bot]"
};

Interval parse_interval(const std::string& text);

// Conjunction of clock-in-interval atoms; empty list means true.
struct Atom {
    ClockId clock;
    Interval interval;

    auto operator<=>(const Atom&) const = default;
};

struct ClockConstraint {
    std::vector<Atom> atoms;

    bool operator==(const ClockConstraint&) const = default;

    bool is_true() const { return atoms.empty(); }
    ClockConstraint conjoin(const ClockConstraint& other) const;
    std::string str() const; // comma-joined atoms, "true" when empty
};

// View of a non-bot interval as a lower bound (rel in {>,>=}) and an upper
// bound (rel in {<,<=}, absent value = unbounded).
struct BoundView {
    unsigned long lower = 0;
    bool lower_strict = false;               // > vs >=
    std::optional<unsigned long> upper;      // nullopt = unbounded
    bool upper_strict = true;                // < vs <=

    auto operator<=>(const BoundView&) const = default;

    Interval lower_interval() const { return Interval::at_least(lower, lower_strict); }
    Interval upper_interval() const {
        if (!upper) return Interval::any_defined();
        return Interval::bounded(0, false, *upper, upper_strict);
    }
    // x >= 0 and x < unbounded constrain nothing beyond definedness.
    bool lower_trivial() const { return lower == 0 && !lower_strict; }
    bool upper_trivial() const { return !upper.has_value(); }
};

BoundView bound_view(const Interval& interval); // pre: !undef, !empty

} // namespace ecna
