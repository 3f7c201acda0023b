#pragma once

// Exact rationals used for every degree, threshold and slope in the library.

#include <boost/rational.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

// Boost 1.74 compares rational with an integer through a template that, under
// C++20 rewritten-candidate rules, can select its own reversed form and
// recurse. Exact non-template overloads are preferred by overload resolution.
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, int b) { return a.denominator() == 1 && a.numerator() == b; }
inline bool operator==(const rational<std::int64_t>& a, long long b)
{
    return a.denominator() == 1 && a.numerator() == static_cast<std::int64_t>(b);
}
inline bool operator==(const rational<std::int64_t>& a, long b) { return a.denominator() == 1 && a.numerator() == b; }
inline bool operator==(int b, const rational<std::int64_t>& a) { return a == b; }
inline bool operator==(long b, const rational<std::int64_t>& a) { return a == b; }
inline bool operator==(long long b, const rational<std::int64_t>& a) { return a == b; }
} // namespace boost

namespace hmfac {

using Rational = boost::rational<std::int64_t>;

/// Canonical fraction string: "0", "1", "-3/4", "31/125".
inline std::string to_string(const Rational& r)
{
    if (r.denominator() == 1)
        return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

inline Rational parse_rational(std::string_view text)
{
    auto parse_int = [&](std::string_view s) -> std::int64_t {
        if (s.empty())
            throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
        std::size_t used = 0;
        std::int64_t v = 0;
        try {
            v = std::stoll(std::string(s), &used);
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
        }
        if (used != s.size())
            throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
        return v;
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos)
        return Rational(parse_int(text));
    const auto den = parse_int(text.substr(slash + 1));
    if (den == 0)
        throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
}

inline std::int64_t ipow(std::int64_t base, int exp)
{
    std::int64_t r = 1;
    for (int i = 0; i < exp; ++i)
        r *= base;
    return r;
}

/// sum_{i=lo}^{hi} p^{-i}; zero when the range is empty.
inline Rational inverse_power_sum(int p, int lo, int hi)
{
    Rational s(0);
    for (int i = lo; i <= hi; ++i)
        s += Rational(1, ipow(p, i));
    return s;
}

inline bool in_unit_interval(const Rational& r) { return r >= 0 && r <= 1; }

} // namespace hmfac
