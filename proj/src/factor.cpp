// Rational factorization: squarefree split (Yun), Cantor-Zassenhaus mod a
// good prime, multifactor Hensel lifting, Zassenhaus subset recombination.

#include "eisdepth/detail/modpoly.hpp"
#include "eisdepth/numberfield.hpp"
#include "eisdepth/unipoly.hpp"

#include <algorithm>
#include <random>

namespace eis {

namespace {

using modpoly::ZV;

// deterministic total order on polynomials
bool poly_less(const UniPoly& a, const UniPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (long i = 0; i < (long)a.c.size(); ++i) {
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  }
  return false;
}

bool zv_less(const ZV& a, const ZV& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return a[i] < b[i];
  return false;
}

// --- factorization mod p (Cantor-Zassenhaus), f squarefree monic mod p ---

void equal_degree_split(const ZV& f, long d, const Int& p, std::mt19937_64& rng,
                        std::vector<ZV>& out) {
  long n = (long)f.size() - 1;
  if (n == d) {
    out.push_back(f);
    return;
  }
  Int exponent = (pow(p, (unsigned long)d) - 1) / 2;
  for (int tries = 0; tries < 400; ++tries) {
    ZV a(n);
    for (long i = 0; i < n; ++i) {
      Int r = Int((unsigned long)(rng() >> 1));
      a[i] = mod_floor(r, p);
    }
    modpoly::trim(a);
    if (a.size() <= 1) continue;
    ZV h;
    if (p == 2) {
      // trace map: a + a^2 + a^4 + ... + a^(2^(d-1))
      ZV t = a, acc = a;
      for (long i = 1; i < d; ++i) {
        t = modpoly::rem(modpoly::mul(t, t, p), f, p);
        acc = modpoly::add(acc, t, p);
      }
      h = std::move(acc);
    } else {
      h = modpoly::powmod(a, exponent, f, p);
      if (h.empty()) continue;
      h = modpoly::sub(h, ZV{Int(1)}, p);
    }
    ZV g = modpoly::gcd(f, h, p);
    long dg = (long)g.size() - 1;
    if (dg > 0 && dg < n) {
      auto [q, r] = modpoly::divrem(f, g, p);
      if (!r.empty()) throw ComputationError("equal_degree_split: bad gcd");
      equal_degree_split(g, d, p, rng, out);
      equal_degree_split(q, d, p, rng, out);
      return;
    }
  }
  throw ComputationError("equal_degree_split: no split found");
}

std::vector<ZV> factor_mod_p(const ZV& f, const Int& p) {
  std::vector<ZV> out;
  ZV rem_part = f;
  ZV h = modpoly::x_poly();
  long d = 0;
  std::mt19937_64 rng(0x5eed0001u);
  while ((long)rem_part.size() - 1 > 0) {
    ++d;
    if (2 * d > (long)rem_part.size() - 1) {
      out.push_back(rem_part);
      break;
    }
    h = modpoly::powmod(h, p, rem_part, p);
    ZV g = modpoly::gcd(rem_part, modpoly::sub(h, modpoly::x_poly(), p), p);
    if ((long)g.size() - 1 > 0) {
      equal_degree_split(g, d, p, rng, out);
      auto [q, r] = modpoly::divrem(rem_part, g, p);
      if (!r.empty()) throw ComputationError("factor_mod_p: inexact block division");
      rem_part = q;
      h = modpoly::rem(std::move(h), rem_part, p);
    }
  }
  std::sort(out.begin(), out.end(), zv_less);
  return out;
}

// --- Hensel lifting ---

struct HenselPair {
  ZV g, h;
};

// f monic, f = g*h (mod p) with g,h monic coprime mod p; lift to mod p^K.
HenselPair hensel_pair(const UniPoly& f, ZV g, ZV h, const Int& p, unsigned long K) {
  ZV s, t;
  modpoly::gcdext(g, h, p, s, t);  // s*g + t*h = 1 mod p
  Int m = p;
  unsigned long k = 1;
  while (k < K) {
    Int m2 = m * m;
    ZV fm = modpoly::reduce(f, m2);
    ZV e = modpoly::sub(fm, modpoly::mul(g, h, m2), m2);
    auto [q, r] = modpoly::divrem(modpoly::mul(s, e, m2), h, m2);
    ZV gstar = modpoly::add(g, modpoly::add(modpoly::mul(t, e, m2), modpoly::mul(q, g, m2), m2), m2);
    ZV hstar = modpoly::add(h, r, m2);
    ZV b = modpoly::sub(
        modpoly::add(modpoly::mul(s, gstar, m2), modpoly::mul(t, hstar, m2), m2),
        ZV{Int(1)}, m2);
    auto [cq, cd] = modpoly::divrem(modpoly::mul(s, b, m2), hstar, m2);
    ZV sstar = modpoly::sub(s, cd, m2);
    ZV tstar = modpoly::sub(modpoly::sub(t, modpoly::mul(t, b, m2), m2),
                            modpoly::mul(cq, gstar, m2), m2);
    g = std::move(gstar);
    h = std::move(hstar);
    s = std::move(sstar);
    t = std::move(tstar);
    if (g.empty() || g.back() != 1 || h.empty() || h.back() != 1)
      throw ComputationError("hensel_pair: lost monicity");
    m = m2;
    k *= 2;
  }
  Int target = pow(p, K);
  return {modpoly::reduce(std::move(g), target), modpoly::reduce(std::move(h), target)};
}

void hensel_tree(const UniPoly& f, const std::vector<ZV>& facs, size_t lo, size_t hi,
                 const Int& p, unsigned long K, std::vector<ZV>& out) {
  if (hi - lo == 1) {
    out.push_back(modpoly::reduce(f, pow(p, K)));
    return;
  }
  size_t mid = lo + (hi - lo) / 2;
  ZV g = {Int(1)}, h = {Int(1)};
  for (size_t i = lo; i < mid; ++i) g = modpoly::mul(g, facs[i], p);
  for (size_t i = mid; i < hi; ++i) h = modpoly::mul(h, facs[i], p);
  HenselPair gh = hensel_pair(f, std::move(g), std::move(h), p, K);
  hensel_tree(modpoly::lift_sym(gh.g, pow(p, K)), facs, lo, mid, p, K, out);
  hensel_tree(modpoly::lift_sym(gh.h, pow(p, K)), facs, mid, hi, p, K, out);
}

// --- Zassenhaus recombination, f monic squarefree ---

std::vector<UniPoly> factor_squarefree_monic(const UniPoly& f) {
  long n = f.degree();
  if (n <= 1) return {f};

  // pick a prime keeping f squarefree
  Int p = Int(1) << 28;
  UniPoly fd = f.derivative();
  for (;;) {
    mpz_nextprime(p.get_mpz_t(), p.get_mpz_t());
    ZV fp = modpoly::reduce(f, p);
    if ((long)fp.size() - 1 != n) continue;  // cannot happen for monic f
    ZV g = modpoly::gcd(fp, modpoly::reduce(fd, p), p);
    if ((long)g.size() - 1 == 0) break;
  }

  std::vector<ZV> mod_factors = factor_mod_p(modpoly::reduce(f, p), p);
  if (mod_factors.size() == 1) return {f};

  // Mignotte-style bound: |coeff of any monic factor| <= 2^n * ||f||_2
  Int norm2 = 0;
  for (const Int& x : f.c) norm2 += x * x;
  Int norm = sqrt(norm2);
  if (norm * norm < norm2) norm += 1;
  Int bound = (pow(Int(2), (unsigned long)n) * norm + 1) * 2;
  unsigned long K = 1;
  Int pk = p;
  while (pk < bound) {
    pk *= p;
    ++K;
  }
  Int modulus = pow(p, K);

  std::vector<ZV> lifted;
  hensel_tree(f, mod_factors, 0, mod_factors.size(), p, K, lifted);

  std::vector<UniPoly> out;
  UniPoly frem = f;
  std::vector<size_t> live(lifted.size());
  for (size_t i = 0; i < live.size(); ++i) live[i] = i;

  size_t s = 1;
  while (2 * s <= live.size()) {
    bool found = false;
    std::vector<size_t> idx(s);
    for (size_t i = 0; i < s; ++i) idx[i] = i;
    for (;;) {
      // candidate product over live[idx]
      ZV prod = {Int(1)};
      for (size_t i : idx) prod = modpoly::mul(prod, lifted[live[i]], modulus);
      UniPoly cand = modpoly::lift_sym(prod, modulus);
      UniPoly q;
      bool ok = false;
      if (frem.c[0] != 0 && cand.c[0] != 0) {
        // cheap pretest on constant terms
        ok = divisible(frem.c[0], cand.c[0]);
      } else {
        ok = true;
      }
      if (ok && try_divide(frem, cand, q)) {
        out.push_back(cand);
        frem = q;
        std::vector<size_t> nlive;
        for (size_t i = 0; i < live.size(); ++i)
          if (std::find(idx.begin(), idx.end(), i) == idx.end()) nlive.push_back(live[i]);
        live = std::move(nlive);
        found = true;
        break;
      }
      // next combination
      long t = (long)s - 1;
      while (t >= 0 && idx[t] == live.size() - s + t) --t;
      if (t < 0) break;
      ++idx[t];
      for (long j = t + 1; j < (long)s; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (!found) ++s;
  }
  if (frem.degree() > 0) out.push_back(frem);
  return out;
}

std::vector<UniPoly> factor_squarefree(const UniPoly& f) {
  long n = f.degree();
  if (n <= 1) return {f};
  if (f.is_monic()) return factor_squarefree_monic(f);
  // monicize by x -> x/lc: F_i = f_i * lc^(n-1-i)
  const Int& l = f.lc();
  std::vector<Int> F(n + 1);
  for (long i = 0; i <= n; ++i) F[i] = f.c[i] * pow(l, (unsigned long)(n - 1 - i >= 0 ? n - 1 - i : 0));
  F[n] = 1;
  std::vector<UniPoly> gs = factor_squarefree_monic(UniPoly(std::move(F)));
  std::vector<UniPoly> out;
  for (const UniPoly& g : gs) {
    std::vector<Int> h(g.c.size());
    Int li = 1;
    for (size_t i = 0; i < g.c.size(); ++i) {
      h[i] = g.c[i] * li;
      li *= l;
    }
    out.push_back(UniPoly(std::move(h)).primitive_part());
  }
  return out;
}

}  // namespace

std::vector<std::vector<Int>> factor_mod_prime(const UniPoly& f, const Int& p) {
  ZV fp = modpoly::reduce(f, p);
  if (fp.empty()) throw ComputationError("factor_mod_prime: f vanishes mod p");
  fp = modpoly::monic(std::move(fp), p);
  // derivative mod p
  ZV fd(fp.size() > 1 ? fp.size() - 1 : 0);
  for (size_t i = 1; i < fp.size(); ++i) fd[i - 1] = mod_floor(fp[i] * Int((long)i), p);
  modpoly::trim(fd);
  ZV g = modpoly::gcd(fp, fd, p);
  if ((long)g.size() - 1 != 0)
    throw ComputationError("factor_mod_prime: polynomial not squarefree mod p");
  return factor_mod_p(fp, p);
}

std::vector<std::pair<UniPoly, int>> factor(const UniPoly& f) {
  if (f.is_zero()) throw ComputationError("factor of zero polynomial");
  std::vector<std::pair<UniPoly, int>> out;
  UniPoly a = f.primitive_part();
  if (a.degree() == 0) return out;
  for (auto& [part, mult] : squarefree_decomposition(a)) {
    for (UniPoly& g : factor_squarefree(part)) out.emplace_back(std::move(g), mult);
  }
  std::sort(out.begin(), out.end(),
            [](const auto& x, const auto& y) { return poly_less(x.first, y.first); });
  return out;
}

}  // namespace eis
