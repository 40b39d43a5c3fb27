#ifndef EISDEPTH_INTEGERS_HPP
#define EISDEPTH_INTEGERS_HPP

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace eis {

using Int = mpz_class;
using Rat = mpq_class;

struct ComputationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a theorem-level consistency check fails (exit code 3 in the CLI).
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int lcm(const Int& a, const Int& b) {
  Int g;
  mpz_lcm(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

// g = u*a + v*b
inline Int gcdext(const Int& a, const Int& b, Int& u, Int& v) {
  Int g;
  mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

inline Int divexact(const Int& a, const Int& b) {
  Int q;
  mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline bool divisible(const Int& a, const Int& b) {
  return mpz_divisible_p(a.get_mpz_t(), b.get_mpz_t()) != 0;
}

// floor division
inline Int fdiv(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

inline Int mod_floor(const Int& a, const Int& b) {
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

// nearest-integer division, for size-reducing row operations
inline Int rdiv(const Int& a, const Int& b) {
  if (b < 0) {
    Int nb = -b;
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), nb.get_mpz_t());
    if (2 * r > nb) q += 1;
    return -q;
  }
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  if (2 * r > b) q += 1;
  return q;
}

inline Int pow(const Int& a, unsigned long e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
  return r;
}

inline Int powmod(const Int& a, const Int& e, const Int& m) {
  Int r;
  mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

inline Int invmod(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw ComputationError("invmod: not invertible");
  return r;
}

inline bool is_prime(const Int& n) {
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

// v_p(n) for n != 0
inline long valuation(Int n, const Int& p) {
  if (n == 0) throw ComputationError("valuation of 0");
  long v = 0;
  while (divisible(n, p)) {
    n = divexact(n, p);
    ++v;
  }
  return v;
}

inline long valuation(const Rat& x, const Int& p) {
  return valuation(Int(x.get_num()), p) - valuation(Int(x.get_den()), p);
}

inline std::vector<long> prime_factors(long n) {
  std::vector<long> qs;
  for (long q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      qs.push_back(q);
      while (n % q == 0) n /= q;
    }
  if (n > 1) qs.push_back(n);
  return qs;
}

inline bool is_squarefree(long n) {
  if (n <= 0) return false;
  for (long q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      n /= q;
      if (n % q == 0) return false;
    }
  return true;
}

inline long euler_phi(long n) {
  long r = n;
  for (long q : prime_factors(n)) r = r / q * (q - 1);
  return r;
}

inline std::vector<long> divisors(long n) {
  std::vector<long> ds;
  for (long d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      ds.push_back(d);
      if (d * d != n) ds.push_back(n / d);
    }
  std::sort(ds.begin(), ds.end());
  return ds;
}

// primes in [2, bound] by sieve
inline std::vector<long> primes_up_to(long bound) {
  std::vector<long> ps;
  if (bound < 2) return ps;
  std::vector<bool> comp(bound + 1, false);
  for (long i = 2; i <= bound; ++i) {
    if (!comp[i]) {
      ps.push_back(i);
      for (long j = i * i; j <= bound && i <= bound / i; j += i) comp[j] = true;
    }
  }
  return ps;
}

inline std::string to_string(const Int& a) { return a.get_str(); }
inline std::string to_string(const Rat& a) { return a.get_str(); }

}  // namespace eis

#endif
