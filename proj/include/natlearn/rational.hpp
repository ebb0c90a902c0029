#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>

namespace natlearn {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt pow2(unsigned k) { return BigInt(1) << k; }

inline Rational make_rational(const BigInt& num, const BigInt& den) { return Rational(num, den); }

inline std::string numerator_string(const Rational& q) {
  return boost::multiprecision::numerator(q).str();
}
inline std::string denominator_string(const Rational& q) {
  return boost::multiprecision::denominator(q).str();
}
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Exact rational value of a finite double.
Rational rational_from_double(double v);

// "p/q" or "p".
std::string to_string(const Rational& q);

}  // namespace natlearn
