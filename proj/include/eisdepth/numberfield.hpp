#ifndef EISDEPTH_NUMBERFIELD_HPP
#define EISDEPTH_NUMBERFIELD_HPP

#include "eisdepth/matrix.hpp"
#include "eisdepth/unipoly.hpp"

#include <climits>
#include <vector>

namespace eis {

inline constexpr long kValInfinity = LONG_MAX;

// K = Q[x]/(g), g monic irreducible over Z.
struct NumberField {
  UniPoly g;
  long degree = 0;

  NumberField() = default;
  // check=true verifies monicity and irreducibility (factor_rational).
  explicit NumberField(UniPoly poly, bool check = true);
};

// Element of K in the power basis 1, theta, ..., theta^(d-1).
struct FieldElement {
  std::vector<Rat> c;

  bool is_zero() const {
    for (const Rat& x : c)
      if (x != 0) return false;
    return true;
  }
};

FieldElement fe_zero(const NumberField& K);
FieldElement fe_one(const NumberField& K);
FieldElement fe_from_rat(const NumberField& K, const Rat& a);
FieldElement fe_theta(const NumberField& K);
FieldElement fe_add(const NumberField& K, const FieldElement& a, const FieldElement& b);
FieldElement fe_sub(const NumberField& K, const FieldElement& a, const FieldElement& b);
FieldElement fe_mul(const NumberField& K, const FieldElement& a, const FieldElement& b);
FieldElement fe_inv(const NumberField& K, const FieldElement& a);
FieldElement fe_scale(const NumberField& K, const FieldElement& a, const Rat& s);
// trace of multiplication by a (integer for integral a)
Rat fe_trace(const NumberField& K, const FieldElement& a);
// minimal polynomial of a over Q, monic integral input assumed integral element
UniPoly fe_minpoly(const NumberField& K, const FieldElement& a);

// A p-maximal order O over Z[theta]: rows of `basis`/den are the order basis
// in the power basis. Closed under multiplication, contains 1 and theta.
struct POrderData {
  Int p;
  long degree = 0;
  IntMat basis;  // d x d, row HNF, full rank
  Int den = 1;
  long index_valuation = 0;  // val_p([O : Z[theta]])

  // derived: multiplication table in O-coords, row (i*d+j) = w_i * w_j
  IntMat mult_table;
  // power-basis -> O-coords: y = (x_pow * pow_to_ord) / pow_to_ord_den
  IntMat pow_to_ord;
  Int pow_to_ord_den = 1;
  std::vector<Int> one_coords;    // coords of 1
  std::vector<Int> theta_coords;  // coords of theta

  std::vector<Int> mul_coords(const std::vector<Int>& x, const std::vector<Int>& y) const;
  // exact conversion; throws if x is not in O's Q-span with the right scaling
  std::vector<Int> to_order_coords_int(const std::vector<Int>& power_coords) const;
  std::vector<Rat> to_order_coords(const FieldElement& x) const;
};

// Prime lambda above p: lattice in O-coords, two-element form (p, alpha),
// ramification e, residue degree f, anti-uniformizer beta = beta_num / p
// with v_lambda(beta) = -1 and v_mu(beta) >= 0 for the other primes above p.
struct PrimeIdealData {
  Int p;
  long e = 1;
  long f = 1;
  IntMat lambda_basis;       // d x d HNF in O-coords
  std::vector<Int> alpha;    // O-coords
  std::vector<Int> beta_num; // O-coords
};

POrderData p_maximal_order(const NumberField& K, const Int& p);
std::vector<PrimeIdealData> primes_above(const NumberField& K, const POrderData& O);

// v_lambda(x); x = 0 gives kValInfinity.
long valuation(const NumberField& K, const POrderData& O, const PrimeIdealData& lam,
               const FieldElement& x);
// Fast path for x given by integer power-basis coords (an element of Z[theta]).
long valuation_int(const POrderData& O, const PrimeIdealData& lam, const std::vector<Int>& power_coords);
// Valuation of an element already in integer O-coords.
long valuation_ord(const POrderData& O, const PrimeIdealData& lam, std::vector<Int> y);

// Irreducible factors of f mod p with multiplicity 1 each; precondition:
// f squarefree mod p. Used for splitting residue algebras and as the
// independent splitting oracle in tests.
std::vector<std::vector<Int>> factor_mod_prime(const UniPoly& f, const Int& p);

}  // namespace eis

#endif
