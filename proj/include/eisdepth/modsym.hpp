#ifndef EISDEPTH_MODSYM_HPP
#define EISDEPTH_MODSYM_HPP

#include "eisdepth/matrix.hpp"

#include <cstdint>
#include <memory>
#include <vector>

namespace eis {

// index, elliptic point counts, cusps and genus of X_0(M)
struct Gamma0Invariants {
  long mu = 0, nu2 = 0, nu3 = 0, nu_inf = 0, genus = 0;
};
Gamma0Invariants gamma0_invariants(long M);
inline long dim_cuspforms_weight2(long M) { return gamma0_invariants(M).genus; }

// P^1(Z/M): canonical representatives (c:d) and a full (c,d) -> index table.
struct P1 {
  long M = 1;
  std::vector<std::pair<long, long>> reps;
  std::vector<int32_t> table;

  long size() const { return (long)reps.size(); }
  long index_of(long c, long d) const {
    c %= M;
    if (c < 0) c += M;
    d %= M;
    if (d < 0) d += M;
    return table[c * M + d];
  }
  static P1 build(long M);
};

struct Mat22 {
  int64_t a, b, c, d;
};

// Determinant-ell families implementing T_ell on Manin symbols.
// Cremona's family (Algorithms ch. 2.4), size O(ell log ell): the production
// choice. Merel's set, enumerated directly: the small-ell oracle.
std::vector<Mat22> heilbronn_cremona(long ell);
std::vector<Mat22> heilbronn_merel(long n);

// Weight-2 modular symbols for Gamma_0(M), M squarefree, over Q, as the
// quotient of Manin symbols by the 2-term and 3-term relations (and the star
// identification when star_quotient). Coordinates are integral: the lattice
// generated by the Manin generators is Z^dim in the chosen basis.
class ManinPresentation {
 public:
  long M = 1;
  bool star_quotient = true;
  P1 p1;
  long dim = 0;

  // generator images, p1.size() x dim, integral
  std::vector<std::vector<Int>> gen_coords;
  // basis vectors as Z-combinations of generators (dim x p1.size())
  IntMat basis_from_gens;
  // boundary to star-classes of cusps; for squarefree M the cusp class of
  // a/c is gcd(c, M), so columns are indexed by divisors of M
  std::vector<long> cusp_divisors;
  IntMat boundary;  // dim x #cusps
  // saturated kernel of the boundary map (rows, HNF); rank = genus
  IntMat cuspidal_basis;

  static ManinPresentation build(long M, bool star_quotient = true);

  long cuspidal_dim() const { return cuspidal_basis.m; }

  // full Hecke matrix on the quotient (row i = image of basis vector i);
  // requires gcd(ell, M) = 1
  IntMat hecke_matrix(long ell) const;
  // image of a single Manin generator under T_ell, in quotient coords
  std::vector<Int> hecke_single(long gen_index, long ell) const;
  // star involution as a matrix (identity when star_quotient)
  IntMat star_matrix() const;
  // restriction of a quotient endomorphism to the cuspidal subspace
  IntMat restrict_to_cuspidal(const IntMat& A) const;
  IntMat hecke_on_cuspidal(long ell) const { return restrict_to_cuspidal(hecke_matrix(ell)); }

  // hit counts of (c:d)*h over a prebuilt family; fast int64 path
  void heilbronn_counts(const std::vector<Mat22>& H, long gen_index,
                        std::vector<int64_t>& counts) const;
  std::vector<Int> project_counts(const std::vector<int64_t>& counts) const;

  // matrix of any generator-wise action on the quotient
  IntMat matrix_from_gen_images(const std::vector<std::vector<Int>>& images) const;

  // independent slow T_ell via the coset definition and continued-fraction
  // conversion; test oracle
  std::vector<Int> hecke_coset_oracle(long gen_index, long ell) const;

  // modular symbol {a1/b1, a2/b2} in quotient coordinates (b=0 means infinity)
  std::vector<Int> path_symbol(const Int& a1, const Int& b1, const Int& a2, const Int& b2) const;

 private:
  std::vector<int64_t> gen_coords_i64_;  // flat fast copy; empty if overflow
  std::unique_ptr<HnfSolver> cuspidal_solver_;
};

}  // namespace eis

#endif
