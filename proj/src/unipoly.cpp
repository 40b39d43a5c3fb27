#include "eisdepth/unipoly.hpp"

#include "eisdepth/matrix.hpp"

#include <sstream>

namespace eis {

Int UniPoly::content() const {
  Int g = 0;
  for (const Int& x : c) {
    g = gcd(g, x);
    if (g == 1) break;
  }
  return g;
}

UniPoly UniPoly::primitive_part() const {
  if (is_zero()) return UniPoly();
  Int g = content();
  if (lc() < 0) g = -g;
  UniPoly r;
  r.c.reserve(c.size());
  for (const Int& x : c) r.c.push_back(divexact(x, g));
  return r;
}

UniPoly UniPoly::derivative() const {
  UniPoly d;
  for (long i = 1; i < (long)c.size(); ++i) d.c.push_back(c[i] * i);
  d.normalize();
  return d;
}

Int UniPoly::eval(const Int& x) const {
  Int r = 0;
  for (long i = (long)c.size() - 1; i >= 0; --i) r = r * x + c[i];
  return r;
}

Rat UniPoly::eval(const Rat& x) const {
  Rat r = 0;
  for (long i = (long)c.size() - 1; i >= 0; --i) r = r * x + Rat(c[i]);
  return r;
}

std::string UniPoly::str(const std::string& var) const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (long i = degree(); i >= 0; --i) {
    const Int& a = c[i];
    if (a == 0) continue;
    if (!first) os << (a > 0 ? " + " : " - ");
    else if (a < 0) os << "-";
    Int aa = abs(Int(a));
    if (i == 0 || aa != 1) os << aa.get_str();
    if (i > 0) {
      if (aa != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  return os.str();
}

UniPoly add(const UniPoly& f, const UniPoly& g) {
  UniPoly r;
  r.c.resize(std::max(f.c.size(), g.c.size()));
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = f.coeff(i) + g.coeff(i);
  r.normalize();
  return r;
}

UniPoly sub(const UniPoly& f, const UniPoly& g) {
  UniPoly r;
  r.c.resize(std::max(f.c.size(), g.c.size()));
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = f.coeff(i) - g.coeff(i);
  r.normalize();
  return r;
}

UniPoly neg(const UniPoly& f) {
  UniPoly r = f;
  for (Int& x : r.c) x = -x;
  return r;
}

UniPoly mul(const UniPoly& f, const UniPoly& g) {
  if (f.is_zero() || g.is_zero()) return UniPoly();
  UniPoly r;
  r.c.assign(f.c.size() + g.c.size() - 1, Int(0));
  for (size_t i = 0; i < f.c.size(); ++i) {
    if (f.c[i] == 0) continue;
    for (size_t j = 0; j < g.c.size(); ++j) r.c[i + j] += f.c[i] * g.c[j];
  }
  r.normalize();
  return r;
}

UniPoly mul(const UniPoly& f, const Int& a) {
  if (a == 0) return UniPoly();
  UniPoly r = f;
  for (Int& x : r.c) x *= a;
  return r;
}

std::pair<UniPoly, UniPoly> divrem_monic(const UniPoly& f, const UniPoly& g) {
  if (!g.is_monic()) throw ComputationError("divrem_monic: divisor not monic");
  UniPoly r = f, q;
  long dg = g.degree();
  if (f.degree() >= dg) q.c.assign(f.degree() - dg + 1, Int(0));
  while (r.degree() >= dg) {
    long k = r.degree() - dg;
    Int coef = r.c.back();
    q.c[k] = coef;
    for (long i = 0; i <= dg; ++i) r.c[k + i] -= coef * g.c[i];
    r.normalize();
  }
  q.normalize();
  return {std::move(q), std::move(r)};
}

bool try_divide(const UniPoly& f, const UniPoly& g, UniPoly& q) {
  if (g.is_zero()) return false;
  if (f.is_zero()) {
    q = UniPoly();
    return true;
  }
  if (f.degree() < g.degree()) return false;
  // long division over Q, checking integrality on the fly
  UniPoly r = f;
  long dg = g.degree();
  q.c.assign(f.degree() - dg + 1, Int(0));
  while (r.degree() >= dg) {
    long k = r.degree() - dg;
    if (!divisible(r.c.back(), g.lc())) return false;
    Int coef = divexact(r.c.back(), g.lc());
    q.c[k] = coef;
    for (long i = 0; i <= dg; ++i) r.c[k + i] -= coef * g.c[i];
    r.normalize();
  }
  q.normalize();
  return r.is_zero();
}

// ---------------------------------------------------------------------------
// modular gcd

namespace {

std::vector<Int> mod_reduce(const UniPoly& f, const Int& p) {
  std::vector<Int> r(f.c.size());
  for (size_t i = 0; i < f.c.size(); ++i) r[i] = mod_floor(f.c[i], p);
  while (!r.empty() && r.back() == 0) r.pop_back();
  return r;
}

void ptrim(std::vector<Int>& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

std::vector<Int> pmulmod(const std::vector<Int>& a, const std::vector<Int>& b, const Int& p) {
  if (a.empty() || b.empty()) return {};
  std::vector<Int> r(a.size() + b.size() - 1, Int(0));
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  for (Int& x : r) x = mod_floor(x, p);
  ptrim(r);
  return r;
}

// remainder of a by b (lc(b) invertible mod p)
std::vector<Int> premmod(std::vector<Int> a, const std::vector<Int>& b, const Int& p) {
  Int binv = invmod(b.back(), p);
  while (a.size() >= b.size()) {
    Int coef = mod_floor(a.back() * binv, p);
    long k = a.size() - b.size();
    if (coef != 0)
      for (size_t i = 0; i < b.size(); ++i) a[k + i] = mod_floor(a[k + i] - coef * b[i], p);
    a.pop_back();
    ptrim(a);
    if (a.empty()) break;
  }
  return a;
}

std::vector<Int> pmonic(std::vector<Int> f, const Int& p) {
  if (f.empty()) return f;
  Int inv = invmod(f.back(), p);
  for (Int& x : f) x = mod_floor(x * inv, p);
  return f;
}

std::vector<Int> pgcdmod(std::vector<Int> a, std::vector<Int> b, const Int& p) {
  while (!b.empty()) {
    std::vector<Int> r = premmod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return pmonic(std::move(a), p);
}

}  // namespace

UniPoly gcd_poly(const UniPoly& f, const UniPoly& g) {
  if (f.is_zero()) return g.is_zero() ? UniPoly() : g.primitive_part();
  if (g.is_zero()) return f.primitive_part();
  UniPoly a = f.primitive_part(), b = g.primitive_part();
  Int lcg = gcd(a.lc(), b.lc());

  Int p = Int(1) << 62;
  long best_deg = std::min(a.degree(), b.degree()) + 1;
  std::vector<Int> acc;   // CRT accumulator (coefficients, scaled by lcg)
  Int modulus = 0;
  for (int tries = 0; tries < 200; ++tries) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    if (divisible(a.lc(), p) || divisible(b.lc(), p)) continue;
    std::vector<Int> h = pgcdmod(mod_reduce(a, p), mod_reduce(b, p), p);
    long dh = (long)h.size() - 1;
    if (dh == 0) {
      UniPoly one = UniPoly::constant(1);
      return one;
    }
    if (dh > best_deg) continue;  // unlucky prime
    if (dh < best_deg) {
      best_deg = dh;
      acc.clear();
      modulus = 0;
    }
    // scale to leading coefficient lcg mod p
    Int scale = mod_floor(lcg, p);
    for (Int& x : h) x = mod_floor(x * scale, p);
    if (modulus == 0) {
      acc = h;
      modulus = p;
    } else {
      Int minv = invmod(mod_floor(modulus, p), p);
      acc.resize(std::max(acc.size(), h.size()), Int(0));
      for (size_t i = 0; i < acc.size(); ++i) {
        Int hv = i < h.size() ? h[i] : Int(0);
        Int r = mod_floor(hv - acc[i], p);
        acc[i] += modulus * mod_floor(r * minv, p);
      }
      modulus *= p;
    }
    // symmetric lift and verify
    std::vector<Int> cand = acc;
    Int half = modulus / 2;
    for (Int& x : cand) {
      x = mod_floor(x, modulus);
      if (x > half) x -= modulus;
    }
    UniPoly H{std::vector<Int>(cand)};
    if (H.is_zero()) continue;
    H = H.primitive_part();
    UniPoly q;
    if (try_divide(a, H, q) && try_divide(b, H, q)) return H;
  }
  throw ComputationError("gcd_poly: no convergence");
}

std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& f) {
  if (f.is_zero()) throw ComputationError("squarefree_decomposition of 0");
  std::vector<std::pair<UniPoly, int>> out;
  UniPoly a = f.primitive_part();
  if (a.degree() == 0) return out;
  // Yun's algorithm
  UniPoly d = a.derivative();
  UniPoly g = gcd_poly(a, d);
  UniPoly c, w, q;
  if (!try_divide(a, g, c)) throw ComputationError("yun: division failed");
  if (!try_divide(d, g, w)) throw ComputationError("yun: division failed");
  w = sub(w, c.derivative());
  int i = 1;
  while (!(c.degree() == 0)) {
    UniPoly s = gcd_poly(c, w);
    if (s.degree() > 0) out.emplace_back(s, i);
    if (!try_divide(c, s, q)) throw ComputationError("yun: division failed");
    c = q;
    if (!try_divide(w, s, q)) throw ComputationError("yun: division failed");
    w = sub(q, c.derivative());
    ++i;
  }
  return out;
}

Int resultant(const UniPoly& f, const UniPoly& g) {
  if (f.is_zero() || g.is_zero()) return 0;
  long m = f.degree(), n = g.degree();
  if (m == 0) return pow(f.c[0], (unsigned long)n);
  if (n == 0) return pow(g.c[0], (unsigned long)m);
  IntMat S(m + n, m + n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j <= m; ++j) S.at(i, i + j) = f.c[m - j];
  for (long i = 0; i < m; ++i)
    for (long j = 0; j <= n; ++j) S.at(n + i, i + j) = g.c[n - j];
  return det_bareiss(std::move(S));
}

Int discriminant(const UniPoly& f) {
  long n = f.degree();
  if (n < 1) throw ComputationError("discriminant: degree < 1");
  Int r = resultant(f, f.derivative());
  r = divexact(r, f.lc());
  if (((n * (n - 1) / 2) % 2) != 0) r = -r;
  return r;
}

bool is_irreducible(const UniPoly& f) {
  auto fs = factor(f);
  return fs.size() == 1 && fs[0].second == 1 && fs[0].first.degree() == f.degree();
}

// ---------------------------------------------------------------------------
// rational helpers

void qtrim(QPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

QPoly qfrom(const UniPoly& f) {
  QPoly r(f.c.size());
  for (size_t i = 0; i < f.c.size(); ++i) r[i] = Rat(f.c[i]);
  return r;
}

QPoly qadd(const QPoly& f, const QPoly& g) {
  QPoly r(std::max(f.size(), g.size()), Rat(0));
  for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  for (size_t i = 0; i < g.size(); ++i) r[i] += g[i];
  qtrim(r);
  return r;
}

QPoly qsub(const QPoly& f, const QPoly& g) {
  QPoly r(std::max(f.size(), g.size()), Rat(0));
  for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
  for (size_t i = 0; i < g.size(); ++i) r[i] -= g[i];
  qtrim(r);
  return r;
}

QPoly qmul(const QPoly& f, const QPoly& g) {
  if (f.empty() || g.empty()) return {};
  QPoly r(f.size() + g.size() - 1, Rat(0));
  for (size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0) continue;
    for (size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
  }
  qtrim(r);
  return r;
}

std::pair<QPoly, QPoly> qdivrem(const QPoly& f, const QPoly& g) {
  if (g.empty()) throw ComputationError("qdivrem by zero");
  QPoly r = f, q;
  if (f.size() >= g.size()) q.assign(f.size() - g.size() + 1, Rat(0));
  while (r.size() >= g.size()) {
    Rat coef = r.back() / g.back();
    long k = r.size() - g.size();
    q[k] = coef;
    for (size_t i = 0; i < g.size(); ++i) r[k + i] -= coef * g[i];
    qtrim(r);
    if (r.empty()) break;
  }
  qtrim(q);
  return {std::move(q), std::move(r)};
}

QPoly qinvmod(const QPoly& g, const QPoly& f) {
  // extended Euclid: u*g + v*f = 1
  QPoly r0 = f, r1 = g;
  QPoly s0 = {}, s1 = {Rat(1)};  // coefficients of g
  while (!r1.empty()) {
    auto [q, r] = qdivrem(r0, r1);
    QPoly s2 = qsub(s0, qmul(q, s1));
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) throw ComputationError("qinvmod: not coprime");
  Rat inv = 1 / r0[0];
  for (Rat& x : s0) x *= inv;
  return s0;
}

}  // namespace eis
