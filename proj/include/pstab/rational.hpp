#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>

#include "pstab/errors.hpp"

namespace pstab {

// Expression templates are disabled so that `auto` never captures a lazy
// expression referring to a temporary.
using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

inline Integer numerator_of(const Rational& q) {
  return boost::multiprecision::numerator(q);
}
inline Integer denominator_of(const Rational& q) {
  return boost::multiprecision::denominator(q);
}

inline int sign(const Rational& q) { return q.sign(); }

inline Rational abs(const Rational& q) { return q.sign() < 0 ? Rational(-q) : q; }

inline Rational pow(const Rational& base, unsigned exponent) {
  Rational result = 1;
  Rational b = base;
  while (exponent != 0) {
    if (exponent & 1U) result *= b;
    b *= b;
    exponent >>= 1U;
  }
  return result;
}

/// Exact power of two, 2^e for signed e.
inline Rational pow2(long e) {
  Integer one = 1;
  Integer p = one << static_cast<unsigned>(e < 0 ? -e : e);
  return e < 0 ? Rational(one, p) : Rational(p);
}

/// "p/q" with q >= 1, always carrying the denominator ("5491/1").
inline std::string to_fraction_string(const Rational& q) {
  return numerator_of(q).str() + "/" + denominator_of(q).str();
}

/// Shortest exact spelling: "7" for integers, "-93/5" otherwise.
inline std::string to_canonical_string(const Rational& q) {
  if (denominator_of(q) == 1) return numerator_of(q).str();
  return to_fraction_string(q);
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

// GMP's string parser reads a leading 0 as an octal prefix.
inline Integer parse_decimal_digits(std::string_view digits) {
  while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
  return Integer(std::string(digits));
}

}  // namespace detail

/// Parses an optionally signed integer, a fraction "p/q" (q != 0) or a finite
/// decimal such as "-0.25". Decimals convert exactly: "0.1" is 1/10.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&](const char* why) {
    throw ArgumentError("invalid number '" + std::string(text) + "': " + why);
  };
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '+' || body.front() == '-')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (body.empty()) fail("empty");

  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!detail::all_digits(num) || !detail::all_digits(den)) fail("malformed fraction");
    Integer d = detail::parse_decimal_digits(den);
    if (d == 0) fail("zero denominator");
    value = Rational(detail::parse_decimal_digits(num), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if (whole.empty() && frac.empty()) fail("malformed decimal");
    if ((!whole.empty() && !detail::all_digits(whole)) ||
        (!frac.empty() && !detail::all_digits(frac)))
      fail("malformed decimal");
    Integer scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    std::string digits = std::string(whole) + std::string(frac);
    value = Rational(detail::parse_decimal_digits(digits), scale);
  } else {
    if (!detail::all_digits(body)) fail("not a number");
    value = Rational(detail::parse_decimal_digits(body));
  }
  return negative ? Rational(-value) : value;
}

}  // namespace pstab
