#pragma once

#include <gmpxx.h>

#include <string>

namespace cpa {

/// Unbounded integers and exact rationals. MiniC `int` is a mathematical
/// integer, and Fourier-Motzkin coefficients grow without bound.
using Integer = mpz_class;
using Rational = mpq_class;

inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer ceil_div(const Integer& a, const Integer& b) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Integer gcd(const Integer& a, const Integer& b) {
  Integer g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Integer floor(const Rational& r) {
  return floor_div(r.get_num(), r.get_den());
}

inline Integer ceil(const Rational& r) {
  return ceil_div(r.get_num(), r.get_den());
}

inline bool is_integral(const Rational& r) { return r.get_den() == 1; }

inline std::string to_string(const Integer& v) { return v.get_str(); }

inline std::string to_string(const Rational& v) { return v.get_str(); }

}  // namespace cpa
