#ifndef EISDEPTH_MATRIX_HPP
#define EISDEPTH_MATRIX_HPP

#include "eisdepth/integers.hpp"

#include <utility>
#include <vector>

namespace eis {

// Dense matrix over Z, row-major. Entries are exact; dimensions fixed at
// construction.
struct IntMat {
  long m = 0, n = 0;
  std::vector<Int> a;

  IntMat() = default;
  IntMat(long rows, long cols) : m(rows), n(cols), a(rows * cols) {}

  Int& at(long i, long j) { return a[i * n + j]; }
  const Int& at(long i, long j) const { return a[i * n + j]; }

  static IntMat identity(long k) {
    IntMat I(k, k);
    for (long i = 0; i < k; ++i) I.at(i, i) = 1;
    return I;
  }

  IntMat transpose() const {
    IntMat T(n, m);
    for (long i = 0; i < m; ++i)
      for (long j = 0; j < n; ++j) T.at(j, i) = at(i, j);
    return T;
  }

  bool is_zero() const {
    for (const Int& x : a)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const IntMat& o) const { return m == o.m && n == o.n && a == o.a; }

  std::vector<Int> row(long i) const {
    return std::vector<Int>(a.begin() + i * n, a.begin() + (i + 1) * n);
  }
};

IntMat mul(const IntMat& A, const IntMat& B);
std::vector<Int> mul_row(const std::vector<Int>& v, const IntMat& A);
IntMat add(const IntMat& A, const IntMat& B);
IntMat sub(const IntMat& A, const IntMat& B);
IntMat stack(const IntMat& A, const IntMat& B);

// Canonical row Hermite normal form of the row span: zero rows dropped,
// pivots positive, entries above each pivot reduced into [0, pivot).
IntMat hnf(IntMat M);

// H = U * M with U unimodular; H keeps all m rows (zero rows at the bottom).
std::pair<IntMat, IntMat> hnf_transform(IntMat M);

// Elementary divisors d1 | d2 | ...; length min(m,n), zeros for rank deficiency.
std::vector<Int> snf_divisors(IntMat M);

// Saturated lattice {v : v*M = 0}, rows in canonical HNF.
IntMat left_kernel(const IntMat& M);

// Exact determinant (Bareiss), square matrices.
Int det_bareiss(IntMat M);

// Characteristic polynomial det(x*I - A), coefficients ascending, monic.
// Multi-modular: Hessenberg charpoly mod word-size primes + CRT against a
// Hadamard-style coefficient bound.
std::vector<Int> charpoly(const IntMat& A);

// Back-substitution solver for x * B = v where B has full row rank.
// Precomputes the HNF once; solve() gives the rational solution in terms of
// the original rows of B.
class HnfSolver {
 public:
  explicit HnfSolver(const IntMat& B);

  long rank() const { return rank_; }
  const IntMat& hnf_basis() const { return H_; }

  // x * B = v over Q; false if v is outside the row span.
  bool solve(const std::vector<Int>& v, std::vector<Rat>& x) const;
  // x * H = v over Q, in terms of the HNF rows.
  bool solve_hnf(const std::vector<Int>& v, std::vector<Rat>& x) const;
  bool solve_hnf_int(const std::vector<Int>& v, std::vector<Int>& x) const;
  bool in_lattice(const std::vector<Int>& v) const;
  bool in_span(const std::vector<Int>& v) const;

 private:
  IntMat H_, U_;
  std::vector<long> pivcol_;
  long rank_ = 0;
};

// Full-rank lattice in Q^n: rowspan(basis) / den, basis in canonical HNF,
// den minimal positive.
struct Lattice {
  IntMat basis;
  Int den = 1;

  long rank() const { return basis.m; }
  long dim() const { return basis.n; }
  void normalize();
};

Lattice make_lattice(IntMat rows, Int den);
Lattice lattice_sum(const Lattice& A, const Lattice& B);
bool lattice_equal(const Lattice& A, const Lattice& B);

}  // namespace eis

#endif
