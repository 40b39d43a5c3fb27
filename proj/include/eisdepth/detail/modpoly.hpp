#ifndef EISDEPTH_DETAIL_MODPOLY_HPP
#define EISDEPTH_DETAIL_MODPOLY_HPP

// Polynomial arithmetic with coefficients mod m (m a prime or prime power),
// coefficients kept in [0, m). Used by the factorization engine and the
// residue-algebra computations.

#include "eisdepth/unipoly.hpp"

#include <vector>

namespace eis::modpoly {

using ZV = std::vector<Int>;

inline void trim(ZV& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline ZV reduce(const UniPoly& f, const Int& m) {
  ZV r(f.c.size());
  for (size_t i = 0; i < f.c.size(); ++i) r[i] = mod_floor(f.c[i], m);
  trim(r);
  return r;
}

inline ZV reduce(ZV f, const Int& m) {
  for (Int& x : f) x = mod_floor(x, m);
  trim(f);
  return f;
}

inline UniPoly lift_sym(const ZV& f, const Int& m) {
  Int half = m / 2;
  std::vector<Int> c(f.size());
  for (size_t i = 0; i < f.size(); ++i) c[i] = f[i] > half ? Int(f[i] - m) : f[i];
  return UniPoly(std::move(c));
}

inline ZV add(const ZV& a, const ZV& b, const Int& m) {
  ZV r(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = mod_floor(r[i] + b[i], m);
  trim(r);
  return r;
}

inline ZV sub(const ZV& a, const ZV& b, const Int& m) {
  ZV r(std::max(a.size(), b.size()), Int(0));
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = mod_floor(r[i] - b[i], m);
  trim(r);
  return r;
}

inline ZV mul(const ZV& a, const ZV& b, const Int& m) {
  if (a.empty() || b.empty()) return {};
  ZV r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  for (Int& x : r) x = mod_floor(x, m);
  trim(r);
  return r;
}

// divrem, lc(b) invertible mod m
inline std::pair<ZV, ZV> divrem(ZV a, const ZV& b, const Int& m) {
  if (b.empty()) throw ComputationError("modpoly divrem by zero");
  ZV q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Int(0));
  Int binv = invmod(b.back(), m);
  while (a.size() >= b.size()) {
    Int coef = mod_floor(a.back() * binv, m);
    long k = a.size() - b.size();
    q[k] = coef;
    if (coef != 0)
      for (size_t i = 0; i < b.size(); ++i) a[k + i] = mod_floor(a[k + i] - coef * b[i], m);
    a.pop_back();
    trim(a);
  }
  trim(q);
  return {std::move(q), std::move(a)};
}

inline ZV rem(ZV a, const ZV& b, const Int& m) { return divrem(std::move(a), b, m).second; }

inline ZV monic(ZV f, const Int& m) {
  if (f.empty()) return f;
  Int inv = invmod(f.back(), m);
  for (Int& x : f) x = mod_floor(x * inv, m);
  return f;
}

// gcd mod a prime p, monic result
inline ZV gcd(ZV a, ZV b, const Int& p) {
  while (!b.empty()) {
    ZV r = rem(std::move(a), b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(std::move(a), p);
}

// u*a + v*b = g (monic gcd), mod prime p
inline ZV gcdext(ZV a, ZV b, const Int& p, ZV& u, ZV& v) {
  ZV r0 = std::move(a), r1 = std::move(b);
  ZV s0 = {Int(1)}, s1 = {};
  ZV t0 = {}, t1 = {Int(1)};
  while (!r1.empty()) {
    auto [q, r] = divrem(std::move(r0), r1, p);
    r0 = std::move(r1);
    r1 = std::move(r);
    ZV s2 = sub(s0, mul(q, s1, p), p);
    s0 = std::move(s1);
    s1 = std::move(s2);
    ZV t2 = sub(t0, mul(q, t1, p), p);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.empty()) throw ComputationError("modpoly gcdext of zeros");
  Int inv = invmod(r0.back(), p);
  for (Int& x : r0) x = mod_floor(x * inv, p);
  for (Int& x : s0) x = mod_floor(x * inv, p);
  for (Int& x : t0) x = mod_floor(x * inv, p);
  u = std::move(s0);
  v = std::move(t0);
  return r0;
}

// base^e mod (f, m)
inline ZV powmod(ZV base, Int e, const ZV& f, const Int& m) {
  ZV r = {Int(1)};
  base = rem(std::move(base), f, m);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = rem(mul(r, base, m), f, m);
    e >>= 1;
    if (e > 0) base = rem(mul(base, base, m), f, m);
  }
  return r;
}

inline ZV x_poly() { return {Int(0), Int(1)}; }

}  // namespace eis::modpoly

#endif
