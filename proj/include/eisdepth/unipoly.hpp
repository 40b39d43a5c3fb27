#ifndef EISDEPTH_UNIPOLY_HPP
#define EISDEPTH_UNIPOLY_HPP

#include "eisdepth/integers.hpp"

#include <utility>
#include <vector>

namespace eis {

// Univariate polynomial over Z, coefficients ascending. Empty vector = 0.
struct UniPoly {
  std::vector<Int> c;

  UniPoly() = default;
  explicit UniPoly(std::vector<Int> coeffs) : c(std::move(coeffs)) { normalize(); }

  static UniPoly constant(Int a) { return a == 0 ? UniPoly() : UniPoly({std::move(a)}); }
  static UniPoly x() { return UniPoly({Int(0), Int(1)}); }

  long degree() const { return (long)c.size() - 1; }
  bool is_zero() const { return c.empty(); }
  const Int& lc() const { return c.back(); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }
  const Int& coeff(long i) const {
    static const Int zero(0);
    return (i >= 0 && i < (long)c.size()) ? c[i] : zero;
  }

  void normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }

  Int content() const;
  UniPoly primitive_part() const;  // sign chosen so lc > 0
  UniPoly derivative() const;
  Int eval(const Int& x) const;
  Rat eval(const Rat& x) const;

  bool operator==(const UniPoly& o) const { return c == o.c; }
  std::string str(const std::string& var = "x") const;
};

UniPoly add(const UniPoly& f, const UniPoly& g);
UniPoly sub(const UniPoly& f, const UniPoly& g);
UniPoly neg(const UniPoly& f);
UniPoly mul(const UniPoly& f, const UniPoly& g);
UniPoly mul(const UniPoly& f, const Int& a);

// f = q*g + r with deg r < deg g, g monic; exact over Z.
std::pair<UniPoly, UniPoly> divrem_monic(const UniPoly& f, const UniPoly& g);

// Exact division test over Z; quotient stored in q on success.
bool try_divide(const UniPoly& f, const UniPoly& g, UniPoly& q);

// Primitive gcd with positive leading coefficient (modular algorithm).
UniPoly gcd_poly(const UniPoly& f, const UniPoly& g);

// Yun: f = prod s_i^i with s_i squarefree and pairwise coprime.
std::vector<std::pair<UniPoly, int>> squarefree_decomposition(const UniPoly& f);

// Factorization over Q of a nonzero integer polynomial: primitive factors
// with positive leading coefficient (monic when f is monic), sorted by
// (degree, coefficients). Squarefree split + factorization mod a good prime
// + Hensel lifting + subset recombination.
std::vector<std::pair<UniPoly, int>> factor(const UniPoly& f);

bool is_irreducible(const UniPoly& f);

Int resultant(const UniPoly& f, const UniPoly& g);
Int discriminant(const UniPoly& f);

// --- small rational-coefficient helpers (field arithmetic mod g) ---

using QPoly = std::vector<Rat>;  // ascending, trailing zeros trimmed

void qtrim(QPoly& f);
QPoly qfrom(const UniPoly& f);
QPoly qadd(const QPoly& f, const QPoly& g);
QPoly qsub(const QPoly& f, const QPoly& g);
QPoly qmul(const QPoly& f, const QPoly& g);
std::pair<QPoly, QPoly> qdivrem(const QPoly& f, const QPoly& g);
// g*u = 1 mod f for gcd(f,g) = 1
QPoly qinvmod(const QPoly& g, const QPoly& f);

}  // namespace eis

#endif
