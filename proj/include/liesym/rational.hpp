#pragma once

#include <gmpxx.h>

#include <string>

#include "liesym/error.hpp"

namespace liesym {

/// Exact rational scalar. All coefficients in the kernel are Rat; there is no
/// floating point anywhere in the library.
using Rat = mpq_class;

inline std::string rat_text(const Rat& r) { return r.get_str(); }

inline Rat rat_parse(const std::string& s) {
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw ValidationError("malformed rational: " + s);
  if (q.get_den() == 0) throw ValidationError("zero denominator: " + s);
  q.canonicalize();
  return q;
}

inline Rat rat_pow(const Rat& base, unsigned long e) {
  mpq_class out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return out;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

/// gcd on rationals: gcd of numerators over lcm of denominators. Dividing a
/// set of rationals by their rat_gcd yields coprime integers.
inline Rat rat_gcd(const Rat& a, const Rat& b) {
  mpz_class num, den;
  mpz_gcd(num.get_mpz_t(), a.get_num_mpz_t(), b.get_num_mpz_t());
  mpz_lcm(den.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
  Rat out(num, den);
  out.canonicalize();
  return out;
}

}  // namespace liesym
