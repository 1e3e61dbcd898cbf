#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <concepts>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dioph {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Integer types the solver and analysis templates accept. BigInt is the
// production type; the built-in ones let enumeration-heavy oracles run on
// machine words when the inputs are known to fit.
template <typename T>
concept integer_like = std::signed_integral<T> || std::same_as<T, BigInt>;

template <integer_like Int>
BigInt to_big(const Int& x) {
    return BigInt(x);
}

template <integer_like Int>
Int abs_of(const Int& x) {
    return x < 0 ? Int(-x) : x;
}

// Least non-negative residue; m must be positive. Division truncates toward
// zero for both BigInt and the built-ins, so one fixup covers negative x.
template <integer_like Int>
Int floor_mod(const Int& x, const Int& m) {
    Int r(x % m);
    if (r < 0) r += m;
    return r;
}

template <integer_like Int>
bool divides(const Int& d, const Int& x) {
    return x % d == 0;
}

// Quotient of a division that must be exact.
template <integer_like Int>
Int exact_div(const Int& x, const Int& d) {
    if (x % d != 0) throw std::logic_error("exact_div: remainder is nonzero");
    return Int(x / d);
}

template <integer_like Int>
Int gcd_of(const Int& a, const Int& b) {
    if constexpr (std::same_as<Int, BigInt>)
        return boost::multiprecision::gcd(a, b);
    else
        return std::gcd(a, b);
}

inline BigInt lcm_of(const BigInt& a, const BigInt& b) { return boost::multiprecision::lcm(a, b); }

template <integer_like Int>
std::size_t bit_length(const Int& x) {
    if (x == 0) return 0;
    if constexpr (std::same_as<Int, BigInt>)
        return boost::multiprecision::msb(abs_of(x)) + 1;
    else
        return std::bit_width(static_cast<std::uint64_t>(abs_of(x)));
}

// Parses a decimal or 0x-prefixed hexadecimal integer of unbounded size.
// Leading zeros stay decimal; no octal surprises.
inline BigInt parse_integer(std::string_view text) {
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    bool hex = s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X');
    if (hex) s.remove_prefix(2);
    if (s.empty()) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    for (char ch : s) {
        bool ok = hex ? std::isxdigit(static_cast<unsigned char>(ch)) != 0
                      : std::isdigit(static_cast<unsigned char>(ch)) != 0;
        if (!ok) throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
    while (s.size() > 1 && s.front() == '0') s.remove_prefix(1);
    BigInt value(hex ? "0x" + std::string(s) : std::string(s));
    return negative ? BigInt(-value) : value;
}

}  // namespace dioph
