#pragma once

// Exact arithmetic used throughout: unbounded counts and rational positions/weights.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fuzzy_kernels {

using BigInt = boost::multiprecision::cpp_int;
// Always normalised: lowest terms, positive denominator.
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  return Rational(BigInt(num), BigInt(den));
}

inline std::string to_string(const BigInt& value) { return value.str(); }

/// Canonical text form `p/q` (denominator always written).
inline std::string to_string(const Rational& value) {
  return boost::multiprecision::numerator(value).str() + "/" +
         boost::multiprecision::denominator(value).str();
}

/// Accepts `p/q` or a bare integer `p`; rejects zero denominators and junk.
inline std::optional<Rational> parse_rational(std::string_view text) {
  auto parse_int = [](std::string_view s, bool allow_sign) -> std::optional<BigInt> {
    if (s.empty()) return std::nullopt;
    std::size_t i = 0;
    bool negative = false;
    if (allow_sign && (s[0] == '-' || s[0] == '+')) {
      negative = s[0] == '-';
      i = 1;
    }
    if (i == s.size()) return std::nullopt;
    BigInt value = 0;
    for (; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') return std::nullopt;
      value = value * 10 + (s[i] - '0');
    }
    return negative ? BigInt(-value) : value;
  };
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) {
    auto num = parse_int(text, true);
    if (!num) return std::nullopt;
    return Rational(*num);
  }
  auto num = parse_int(text.substr(0, slash), true);
  auto den = parse_int(text.substr(slash + 1), false);
  if (!num || !den || *den == 0) return std::nullopt;
  return Rational(*num, *den);
}

/// Reduces a circle coordinate into [0, 1).
inline Rational wrap_unit(Rational value) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  BigInt num = numerator(value);
  BigInt den = denominator(value);
  BigInt rem = num % den;
  if (rem < 0) rem += den;
  return Rational(rem, den);
}

}  // namespace fuzzy_kernels
