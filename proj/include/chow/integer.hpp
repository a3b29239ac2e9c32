#ifndef CHOW_INTEGER_HPP
#define CHOW_INTEGER_HPP

#include <gmpxx.h>

#include <string>
#include <tuple>

namespace chow {

/// Arbitrary-precision integer used for every coefficient and matrix entry.
using Int = mpz_class;

inline std::string to_string(const Int& v) { return v.get_str(); }

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

/// Returns (g, s, t) with g = s*a + t*b, g >= 0.
inline std::tuple<Int, Int, Int> gcdext(const Int& a, const Int& b) {
  Int g, s, t;
  mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return {g, s, t};
}

/// Floor division; the remainder a - q*b has the sign of b.
inline Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

}  // namespace chow

#endif  // CHOW_INTEGER_HPP
