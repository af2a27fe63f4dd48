#include "ecna/rational.hpp"

#include "ecna/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cctype>

namespace ecna {

namespace {

using BigInt = boost::multiprecision::cpp_int;

bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

} // namespace

Rational parse_rational(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
        negative = s[0] == '-';
        s = s.substr(1);
    }
    if (s.empty()) fail(ErrorCode::Parse, "empty rational literal");

    Rational result;
    auto slash = s.find('/');
    auto dot = s.find('.');
    if (slash != std::string::npos) {
        std::string num = s.substr(0, slash);
        std::string den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            fail(ErrorCode::Parse, "bad rational literal: " + text);
        BigInt d(den);
        if (d == 0) fail(ErrorCode::Parse, "zero denominator: " + text);
        result = Rational(BigInt(num), d);
    } else if (dot != std::string::npos) {
        std::string ip = s.substr(0, dot);
        std::string fp = s.substr(dot + 1);
        if (ip.empty()) ip = "0";
        if (fp.empty()) fp = "0";
        if (!all_digits(ip) || !all_digits(fp))
            fail(ErrorCode::Parse, "bad decimal literal: " + text);
        BigInt scale = 1;
        for (size_t i = 0; i < fp.size(); ++i) scale *= 10;
        result = Rational(BigInt(ip) * scale + BigInt(fp), scale);
    } else {
        if (!all_digits(s)) fail(ErrorCode::Parse, "bad number: " + text);
        result = Rational(BigInt(s));
    }
    if (negative) result = -result;
    return result;
}

std::string format_rational(const Rational& value) {
    const BigInt num = boost::multiprecision::numerator(value);
    const BigInt den = boost::multiprecision::denominator(value);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

} // namespace ecna
