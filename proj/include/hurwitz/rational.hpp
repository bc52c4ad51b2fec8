#pragma once

// Exact rational values backed by GMP. Every class number, local factor and
// series coefficient in the library is a Rational.

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hcn {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational r{Integer{static_cast<long>(num)}, Integer{static_cast<long>(den)}};
  r.canonicalize();
  return r;
}

inline Rational to_rational(const Integer& z) { return Rational{z}; }

// Always "num/den", including integers ("3/1"). This is the wire format.
inline std::string to_wire(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// "3" or "1/3".
inline std::string to_pretty(const Rational& q) { return q.get_str(); }

// Accepts "a/b" or "a".
inline Rational parse_rational(const std::string& text) {
  Rational r;
  if (r.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: '" + text + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  r.canonicalize();
  return r;
}

}  // namespace hcn
