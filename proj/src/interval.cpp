#include "ecna/interval.hpp"

#include "ecna/error.hpp"

#include <sstream>

namespace ecna {

bool Interval::contains(const std::optional<Rational>& v) const {
    if (undef) return !v.has_value();
    if (!v.has_value()) return false;
    const Rational& x = *v;
    if (lower_strict ? !(x > lower) : !(x >= lower)) return false;
    if (!upper) return true;
    return upper_strict ? x < *upper : x <= *upper;
}

bool Interval::empty() const {
    if (undef) return false;
    if (!upper) return false;
    if (lower < *upper) return false;
    if (lower > *upper) return true;
    return lower_strict || upper_strict;
}

namespace {

// a's lower bound is at least as strong as b's.
bool lower_implies(const Interval& a, const Interval& b) {
    if (b.lower < a.lower) return true;
    if (b.lower > a.lower) return false;
    return a.lower_strict || !b.lower_strict;
}

// a's upper bound is at least as strong as b's.
bool upper_implies(const Interval& a, const Interval& b) {
    if (!b.upper) return true;
    if (!a.upper) return false;
    if (*a.upper < *b.upper) return true;
    if (*a.upper > *b.upper) return false;
    return a.upper_strict || !b.upper_strict;
}

} // namespace

bool Interval::subset_of(const Interval& other) const {
    if (empty()) return true;
    if (undef) return other.undef;
    if (other.undef) return false;
    return lower_implies(*this, other) && upper_implies(*this, other);
}

bool Interval::disjoint_from(const Interval& other) const {
    auto both = intersect(*this, other);
    return !both.has_value();
}

std::optional<Interval> Interval::intersect(const Interval& a, const Interval& b) {
    if (a.undef && b.undef) return Interval::undef_singleton();
    if (a.undef || b.undef) return std::nullopt;
    Interval out;
    if (a.lower > b.lower) {
        out.lower = a.lower;
        out.lower_strict = a.lower_strict;
    } else if (b.lower > a.lower) {
        out.lower = b.lower;
        out.lower_strict = b.lower_strict;
    } else {
        out.lower = a.lower;
        out.lower_strict = a.lower_strict || b.lower_strict;
    }
    if (!a.upper) {
        out.upper = b.upper;
        out.upper_strict = b.upper_strict;
    } else if (!b.upper) {
        out.upper = a.upper;
        out.upper_strict = a.upper_strict;
    } else if (*a.upper < *b.upper) {
        out.upper = a.upper;
        out.upper_strict = a.upper_strict;
    } else if (*b.upper < *a.upper) {
        out.upper = b.upper;
        out.upper_strict = b.upper_strict;
    } else {
        out.upper = a.upper;
        out.upper_strict = a.upper_strict || b.upper_strict;
    }
    if (out.empty()) return std::nullopt;
    return out;
}

std::string Interval::str() const {
    if (undef) return "[bot,bot]";
    std::ostringstream os;
    os << (lower_strict ? '(' : '[') << lower << ',';
    if (upper)
        os << *upper << (upper_strict ? ')' : ']');
    else
        os << "inf)";
    return os.str();
}

Interval parse_interval(const std::string& text) {
    if (text == "[bot,bot]" || text == "{bot}") return Interval::undef_singleton();
    if (text.size() < 5) fail(ErrorCode::Parse, "bad interval: " + text);
    char open = text.front();
    char close = text.back();
    if ((open != '[' && open != '(') || (close != ']' && close != ')'))
        fail(ErrorCode::Parse, "bad interval: " + text);
    auto comma = text.find(',');
    if (comma == std::string::npos) fail(ErrorCode::Parse, "bad interval: " + text);
    std::string lo = text.substr(1, comma - 1);
    std::string hi = text.substr(comma + 1, text.size() - comma - 2);
    Interval out;
    out.lower_strict = open == '(';
    try {
        out.lower = std::stoul(lo);
    } catch (...) {
        fail(ErrorCode::Parse, "bad interval bound: " + lo);
    }
    if (hi == "inf" || hi == "oo") {
        out.upper = std::nullopt;
        out.upper_strict = true;
    } else {
        out.upper_strict = close == ')';
        try {
            out.upper = std::stoul(hi);
        } catch (...) {
            fail(ErrorCode::Parse, "bad interval bound: " + hi);
        }
    }
    if (out.empty()) fail(ErrorCode::Parse, "empty interval: " + text);
    return out;
}

ClockConstraint ClockConstraint::conjoin(const ClockConstraint& other) const {
    ClockConstraint out = *this;
    out.atoms.insert(out.atoms.end(), other.atoms.begin(), other.atoms.end());
    return out;
}

std::string ClockConstraint::str() const {
    if (atoms.empty()) return "true";
    std::ostringstream os;
    for (size_t i = 0; i < atoms.size(); ++i) {
        if (i) os << ", ";
        os << clock_to_string(atoms[i].clock) << " in " << atoms[i].interval.str();
    }
    return os.str();
}

BoundView bound_view(const Interval& interval) {
    if (interval.undef || interval.empty())
        fail(ErrorCode::BadArgument, "no bound view for " + interval.str());
    BoundView v;
    v.lower = interval.lower;
    v.lower_strict = interval.lower_strict;
    v.upper = interval.upper;
    v.upper_strict = interval.upper_strict;
    return v;
}

} // namespace ecna
