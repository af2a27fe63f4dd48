#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

namespace ecna {

// Exact arbitrary-precision rational. Timestamps and clock values never touch
// floating point; decimal literals in input files are parsed exactly.
using Rational = boost::multiprecision::cpp_rational;

// Accepts "3", "0.125", "7/2". Throws Error{Parse} on anything else.
Rational parse_rational(const std::string& text);

// Canonical form: integer when the denominator is 1, "p/q" otherwise.
std::string format_rational(const Rational& value);

} // namespace ecna
