#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ipfp {

// All payoffs, probabilities and averages are exact rationals. Decimal
// strings are renderings only and never feed back into computation.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Int numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Int denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

// Accepts "n" or "n/d" with optional leading minus.
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational string");
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Int(s));
    Int n(s.substr(0, slash));
    Int d(s.substr(slash + 1));
    if (d <= 0) throw std::invalid_argument("non-positive denominator");
    return Rational(n, d);
  } catch (const std::runtime_error&) {
    throw std::invalid_argument("bad rational string: '" + s + "'");
  }
}

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

// Rounded decimal rendering with `sig_digits` significant digits.
inline std::string to_decimal(const Rational& r, int sig_digits = 6) {
  if (sig_digits < 1) sig_digits = 1;
  if (r == 0) return "0";
  Rational a = r < 0 ? Rational(-r) : r;
  // Number of digits in the integer part (0 when |r| < 1).
  int int_digits = 0;
  Int ip = numerator(a) / denominator(a);
  while (ip > 0) {
    ++int_digits;
    ip /= 10;
  }
  int frac_digits = sig_digits - int_digits;
  if (frac_digits < 0) frac_digits = 0;
  Int scale = 1;
  for (int i = 0; i < frac_digits; ++i) scale *= 10;
  // Round half away from zero.
  Int scaled = (numerator(a) * scale * 2 + denominator(a)) / (denominator(a) * 2);
  std::string digits = scaled.str();
  std::string out;
  if (frac_digits == 0) {
    out = digits;
  } else {
    while ((int)digits.size() <= frac_digits) digits.insert(digits.begin(), '0');
    out = digits.substr(0, digits.size() - frac_digits) + "." +
          digits.substr(digits.size() - frac_digits);
  }
  if (r < 0) out.insert(out.begin(), '-');
  return out;
}

}  // namespace ipfp
