#ifndef EISDEPTH_HECKEALG_HPP
#define EISDEPTH_HECKEALG_HPP

#include "eisdepth/congruence.hpp"
#include "eisdepth/newform.hpp"

#include <string>
#include <vector>

namespace eis {

// The ring generated by Z[theta] and a set of integral elements, as a lattice
// basis/den over the power basis with a multiplication table in its own
// coordinates.
struct EigenOrder {
  long degree = 0;
  IntMat basis;
  Int den = 1;
  IntMat mult_table;
  IntMat pow_to_ord;
  Int pow_to_ord_den = 1;
  std::vector<Int> one_coords;

  std::vector<Int> mul_coords(const std::vector<Int>& x, const std::vector<Int>& y) const;
  // coords of an element of the order; throws if not integral over this order
  std::vector<Int> element_coords(const FieldElement& x) const;
};

EigenOrder eigen_order_closure(const NumberField& K, const std::vector<FieldElement>& gens);

// The Hecke algebra T as a full-rank subring of the product of the orbit
// eigenvalue orders, generated by 1 and the t_ell tuples for ell <= bound,
// ell coprime to N.
struct HeckeLattice {
  long N = 0;
  long bound = 0;
  struct Component {
    long level = 0;
    long orbit = 0;
    std::shared_ptr<NumberField> field;
    EigenOrder order;
    long offset = 0;  // ambient coordinate offset
  };
  std::vector<Component> comps;
  long rank = 0;
  IntMat basis;                      // rank x rank HNF, T-basis in ambient coords
  IntMat mult_table;                 // (rank*rank) x rank, products in T-coords
  std::vector<Int> one_coords;       // coords of (1,...,1) in the T-basis
  std::vector<std::vector<Int>> tgens;  // t_ell in T-coords, aligned with ells
  std::vector<long> ells;

  std::vector<Int> ambient_mul(const std::vector<Int>& x, const std::vector<Int>& y) const;
  std::vector<Int> t_mul(const std::vector<Int>& x, const std::vector<Int>& y) const;
};

HeckeLattice build_hecke_lattice(NewformEngine& engine, long N, long bound_override = 0);

struct EisensteinIdealData {
  IntMat basis;  // rank x rank HNF, in T-coords
  Int index_n0;  // #T/J
};

EisensteinIdealData eisenstein_ideal(const HeckeLattice& T);

// local data of the Eisenstein block of T (x) Z_p at precision p^kappa,
// kappa-stability checked internally
struct EisensteinLocalData {
  long p = 0;
  long kappa = 0;
  bool empty = false;      // p does not divide #T/J
  long index_val = 0;      // val_p(#T/J), computed locally and cross-checked
  long min_generators = 0; // nu = dim_Fp J/mJ
  long multiplicity = 0;   // Hilbert-Samuel multiplicity e(J, T_m)
};

EisensteinLocalData eisenstein_local_data(const HeckeLattice& T, const EisensteinIdealData& J,
                                          long p);

// fills index/multiplicity/verdict fields of a depth report and enforces the
// theorem-level consistency checks (for p >= 5)
void complete_report(NewformEngine& engine, DepthReport& rep, long bound_override = 0);

}  // namespace eis

#endif
