#include "eisdepth/matrix.hpp"

#include <algorithm>
#include <cstdint>

namespace eis {

IntMat mul(const IntMat& A, const IntMat& B) {
  if (A.n != B.m) throw ComputationError("mul: shape mismatch");
  IntMat C(A.m, B.n);
  Int t;
  for (long i = 0; i < A.m; ++i)
    for (long k = 0; k < A.n; ++k) {
      const Int& aik = A.at(i, k);
      if (aik == 0) continue;
      for (long j = 0; j < B.n; ++j) {
        t = aik * B.at(k, j);
        C.at(i, j) += t;
      }
    }
  return C;
}

std::vector<Int> mul_row(const std::vector<Int>& v, const IntMat& A) {
  if ((long)v.size() != A.m) throw ComputationError("mul_row: shape mismatch");
  std::vector<Int> w(A.n);
  for (long k = 0; k < A.m; ++k) {
    if (v[k] == 0) continue;
    for (long j = 0; j < A.n; ++j) w[j] += v[k] * A.at(k, j);
  }
  return w;
}

IntMat add(const IntMat& A, const IntMat& B) {
  IntMat C(A.m, A.n);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = A.a[i] + B.a[i];
  return C;
}

IntMat sub(const IntMat& A, const IntMat& B) {
  IntMat C(A.m, A.n);
  for (size_t i = 0; i < A.a.size(); ++i) C.a[i] = A.a[i] - B.a[i];
  return C;
}

IntMat stack(const IntMat& A, const IntMat& B) {
  if (A.m == 0) return B;
  if (B.m == 0) return A;
  if (A.n != B.n) throw ComputationError("stack: shape mismatch");
  IntMat C(A.m + B.m, A.n);
  std::copy(A.a.begin(), A.a.end(), C.a.begin());
  std::copy(B.a.begin(), B.a.end(), C.a.begin() + A.a.size());
  return C;
}

namespace {

// In-place row HNF; if U is non-null it receives the same row operations.
// Returns the rank; pivot columns in pivcol.
long hnf_inplace(IntMat& M, IntMat* U, std::vector<long>* pivcol) {
  long m = M.m, n = M.n;
  long r = 0;
  Int g, u, v, s, t, q, x, y;
  auto rowop2 = [&](IntMat& A, long i, long j, const Int& a11, const Int& a12,
                    const Int& a21, const Int& a22) {
    // (row_i, row_j) <- (a11*row_i + a12*row_j, a21*row_i + a22*row_j)
    for (long c = 0; c < A.n; ++c) {
      x = a11 * A.at(i, c) + a12 * A.at(j, c);
      y = a21 * A.at(i, c) + a22 * A.at(j, c);
      A.at(i, c) = x;
      A.at(j, c) = y;
    }
  };
  for (long col = 0; col < n && r < m; ++col) {
    long piv = -1;
    for (long i = r; i < m; ++i)
      if (M.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) {
      for (long c = 0; c < n; ++c) swap(M.at(piv, c), M.at(r, c));
      if (U)
        for (long c = 0; c < U->n; ++c) swap(U->at(piv, c), U->at(r, c));
    }
    for (long i = r + 1; i < m; ++i) {
      if (M.at(i, col) == 0) continue;
      const Int& A0 = M.at(r, col);
      const Int& B0 = M.at(i, col);
      if (divisible(B0, A0)) {
        q = divexact(B0, A0);
        for (long c = col; c < n; ++c) M.at(i, c) -= q * M.at(r, c);
        if (U)
          for (long c = 0; c < U->n; ++c) U->at(i, c) -= q * U->at(r, c);
      } else {
        g = gcdext(A0, B0, u, v);
        s = divexact(A0, g);
        t = divexact(B0, g);
        rowop2(M, r, i, u, v, -t, s);
        if (U) rowop2(*U, r, i, u, v, -t, s);
      }
    }
    if (M.at(r, col) < 0) {
      for (long c = col; c < n; ++c) M.at(r, c) = -M.at(r, c);
      if (U)
        for (long c = 0; c < U->n; ++c) U->at(r, c) = -U->at(r, c);
    }
    for (long i = 0; i < r; ++i) {
      if (M.at(i, col) == 0) continue;
      q = fdiv(M.at(i, col), M.at(r, col));
      if (q == 0) continue;
      for (long c = col; c < n; ++c) M.at(i, c) -= q * M.at(r, c);
      if (U)
        for (long c = 0; c < U->n; ++c) U->at(i, c) -= q * U->at(r, c);
    }
    if (pivcol) pivcol->push_back(col);
    ++r;
  }
  return r;
}

}  // namespace

IntMat hnf(IntMat M) {
  long r = hnf_inplace(M, nullptr, nullptr);
  IntMat H(r, M.n);
  std::copy(M.a.begin(), M.a.begin() + r * M.n, H.a.begin());
  return H;
}

std::pair<IntMat, IntMat> hnf_transform(IntMat M) {
  IntMat U = IntMat::identity(M.m);
  hnf_inplace(M, &U, nullptr);
  return {std::move(M), std::move(U)};
}

std::vector<Int> snf_divisors(IntMat M) {
  long k = std::min(M.m, M.n);
  std::vector<Int> d(k);
  // Alternate row/column HNF until diagonal (pivot products strictly
  // decrease, so this terminates).
  for (int iter = 0; iter < 200; ++iter) {
    M = hnf(std::move(M));
    bool diag = true;
    for (long i = 0; i < M.m && diag; ++i)
      for (long j = 0; j < M.n && diag; ++j) {
        if (i == j) continue;
        if (M.at(i, j) != 0) diag = false;
      }
    if (diag && M.m <= M.n) {
      long r = M.m;
      std::vector<Int> diagv(r);
      for (long i = 0; i < r; ++i) diagv[i] = M.at(i, i);
      // enforce the divisibility chain
      bool changed = true;
      while (changed) {
        changed = false;
        for (long i = 0; i + 1 < r; ++i)
          for (long j = i + 1; j < r; ++j) {
            if (diagv[i] == 0) std::swap(diagv[i], diagv[j]);
            if (diagv[j] == 0) continue;
            if (!divisible(diagv[j], diagv[i])) {
              Int g = gcd(diagv[i], diagv[j]);
              Int l = divexact(diagv[i] * diagv[j], g);
              diagv[i] = g;
              diagv[j] = l;
              changed = true;
            }
          }
      }
      for (long i = 0; i < r && i < k; ++i) d[i] = abs(diagv[i]);
      return d;
    }
    M = M.transpose();
  }
  throw ComputationError("snf: no convergence");
}

IntMat left_kernel(const IntMat& M) {
  auto [H, U] = hnf_transform(M);
  long r = 0;
  for (long i = 0; i < H.m; ++i) {
    bool zero = true;
    for (long j = 0; j < H.n; ++j)
      if (H.at(i, j) != 0) {
        zero = false;
        break;
      }
    if (!zero) ++r;
  }
  IntMat K(H.m - r, M.m);
  for (long i = r; i < H.m; ++i)
    for (long j = 0; j < M.m; ++j) K.at(i - r, j) = U.at(i, j);
  return hnf(std::move(K));
}

Int det_bareiss(IntMat M) {
  if (M.m != M.n) throw ComputationError("det: not square");
  long n = M.m;
  if (n == 0) return 1;
  Int prev = 1;
  int sign = 1;
  for (long k = 0; k < n - 1; ++k) {
    if (M.at(k, k) == 0) {
      long piv = -1;
      for (long i = k + 1; i < n; ++i)
        if (M.at(i, k) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      for (long c = 0; c < n; ++c) swap(M.at(k, c), M.at(piv, c));
      sign = -sign;
    }
    for (long i = k + 1; i < n; ++i)
      for (long j = k + 1; j < n; ++j) {
        Int t = M.at(i, j) * M.at(k, k) - M.at(i, k) * M.at(k, j);
        M.at(i, j) = divexact(t, prev);
      }
    prev = M.at(k, k);
  }
  return sign > 0 ? M.at(n - 1, n - 1) : Int(-M.at(n - 1, n - 1));
}

// ---------------------------------------------------------------------------
// Multi-modular characteristic polynomial.

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

inline u64 mulmod(u64 a, u64 b, u64 p) { return (u64)((u128)a * b % p); }
inline u64 addmod(u64 a, u64 b, u64 p) {
  u64 s = a + b;
  if (s >= p || s < a) s -= p;
  return s;
}
inline u64 submod(u64 a, u64 b, u64 p) { return a >= b ? a - b : a + (p - b); }

u64 invmod_u64(u64 a, u64 p) {
  // extended Euclid; p prime, a != 0 mod p
  int64_t t = 0, newt = 1;
  int64_t r = (int64_t)p, newr = (int64_t)(a % p);
  while (newr != 0) {
    int64_t q = r / newr;
    int64_t tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (t < 0) t += (int64_t)p;
  return (u64)t;
}

// charpoly of A mod p, coefficients ascending (degree n, monic)
std::vector<u64> charpoly_mod(std::vector<u64> h, long n, u64 p) {
  auto at = [&](long i, long j) -> u64& { return h[i * n + j]; };
  // Hessenberg reduction (similarity transforms)
  for (long k = 0; k + 2 < n; ++k) {
    long piv = -1;
    for (long i = k + 1; i < n; ++i)
      if (at(i, k) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != k + 1) {
      for (long j = 0; j < n; ++j) std::swap(at(piv, j), at(k + 1, j));
      for (long i = 0; i < n; ++i) std::swap(at(i, piv), at(i, k + 1));
    }
    u64 inv = invmod_u64(at(k + 1, k), p);
    for (long i = k + 2; i < n; ++i) {
      if (at(i, k) == 0) continue;
      u64 t = mulmod(at(i, k), inv, p);
      // row_i -= t * row_{k+1};  col_{k+1} += t * col_i
      for (long j = 0; j < n; ++j) at(i, j) = submod(at(i, j), mulmod(t, at(k + 1, j), p), p);
      for (long i2 = 0; i2 < n; ++i2)
        at(i2, k + 1) = addmod(at(i2, k + 1), mulmod(t, at(i2, i), p), p);
    }
  }
  // p_m = (x - h[m-1][m-1]) p_{m-1} - sum_k h[k-1][m-1] * prod(subdiag) * p_{k-1}
  std::vector<std::vector<u64>> P(n + 1);
  P[0] = {1};
  for (long m = 1; m <= n; ++m) {
    long r = m - 1;
    std::vector<u64> pm(m + 1, 0);
    const auto& prev = P[m - 1];
    for (long j = 0; j < m; ++j) {
      pm[j + 1] = addmod(pm[j + 1], prev[j], p);
      pm[j] = submod(pm[j], mulmod(at(r, r), prev[j], p), p);
    }
    u64 prod = 1;
    for (long k = m - 1; k >= 1; --k) {
      prod = mulmod(prod, at(k, k - 1), p);
      u64 coef = mulmod(at(k - 1, r), prod, p);
      if (coef == 0) continue;
      const auto& pk = P[k - 1];
      for (long j = 0; j < (long)pk.size(); ++j) pm[j] = submod(pm[j], mulmod(coef, pk[j], p), p);
    }
    P[m] = std::move(pm);
  }
  return P[n];
}

u64 next_prime_below(u64 start) {
  Int x = Int((unsigned long)start) - 1;
  while (!is_prime(x)) x -= 1;
  return (u64)x.get_ui();
}

}  // namespace

std::vector<Int> charpoly(const IntMat& A) {
  if (A.m != A.n) throw ComputationError("charpoly: not square");
  long n = A.m;
  if (n == 0) return {Int(1)};
  // coefficient bound: |c_k| <= 2^n * prod_i max(1, ||row_i||_2)
  Int bound = pow(Int(2), (unsigned long)n);
  for (long i = 0; i < n; ++i) {
    Int s = 0;
    for (long j = 0; j < n; ++j) s += A.at(i, j) * A.at(i, j);
    if (s > 1) {
      Int r = sqrt(s);
      if (r * r < s) r += 1;
      bound *= r;
    }
  }
  Int need = 2 * bound + 1;

  std::vector<Int> coeff(n + 1, Int(0));
  Int modulus = 1;
  u64 pstart = (u64)1 << 62;
  u64 p = pstart;
  while (modulus < need) {
    p = next_prime_below(p);
    // reduce entries
    std::vector<u64> hm(n * n);
    Int t;
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        t = mod_floor(A.at(i, j), Int((unsigned long)p));
        hm[i * n + j] = t.get_ui();
      }
    std::vector<u64> cp = charpoly_mod(std::move(hm), n, p);
    // CRT merge
    Int pz((unsigned long)p);
    if (modulus == 1) {
      for (long j = 0; j <= n; ++j) coeff[j] = Int((unsigned long)cp[j]);
      modulus = pz;
    } else {
      Int minv = invmod(mod_floor(modulus, pz), pz);
      for (long j = 0; j <= n; ++j) {
        Int r = mod_floor(Int((unsigned long)cp[j]) - coeff[j], pz);
        coeff[j] += modulus * mod_floor(r * minv, pz);
      }
      modulus *= pz;
    }
    --p;
  }
  // symmetric lift
  Int half = modulus / 2;
  for (long j = 0; j <= n; ++j) {
    coeff[j] = mod_floor(coeff[j], modulus);
    if (coeff[j] > half) coeff[j] -= modulus;
  }
  return coeff;
}

// ---------------------------------------------------------------------------

HnfSolver::HnfSolver(const IntMat& B) {
  IntMat M = B;
  U_ = IntMat::identity(M.m);
  rank_ = hnf_inplace(M, &U_, &pivcol_);
  H_ = IntMat(rank_, M.n);
  std::copy(M.a.begin(), M.a.begin() + rank_ * M.n, H_.a.begin());
}

bool HnfSolver::solve_hnf(const std::vector<Int>& v, std::vector<Rat>& x) const {
  std::vector<Rat> rem(v.size());
  for (size_t j = 0; j < v.size(); ++j) rem[j] = v[j];
  x.assign(rank_, Rat(0));
  for (long i = 0; i < rank_; ++i) {
    long c = pivcol_[i];
    if (rem[c] != 0) {
      Rat q = rem[c] / Rat(H_.at(i, c));
      x[i] = q;
      for (long j = c; j < H_.n; ++j)
        if (H_.at(i, j) != 0) rem[j] -= q * Rat(H_.at(i, j));
    }
  }
  for (const Rat& r : rem)
    if (r != 0) return false;
  return true;
}

bool HnfSolver::solve_hnf_int(const std::vector<Int>& v, std::vector<Int>& x) const {
  std::vector<Rat> xr;
  if (!solve_hnf(v, xr)) return false;
  x.assign(rank_, Int(0));
  for (long i = 0; i < rank_; ++i) {
    if (xr[i].get_den() != 1) return false;
    x[i] = xr[i].get_num();
  }
  return true;
}

bool HnfSolver::solve(const std::vector<Int>& v, std::vector<Rat>& x) const {
  std::vector<Rat> y;
  if (!solve_hnf(v, y)) return false;
  x.assign(U_.m, Rat(0));
  for (long i = 0; i < rank_; ++i) {
    if (y[i] == 0) continue;
    for (long j = 0; j < U_.n; ++j)
      if (U_.at(i, j) != 0) x[j] += y[i] * Rat(U_.at(i, j));
  }
  return true;
}

bool HnfSolver::in_lattice(const std::vector<Int>& v) const {
  std::vector<Int> x;
  return solve_hnf_int(v, x);
}

bool HnfSolver::in_span(const std::vector<Int>& v) const {
  std::vector<Rat> x;
  return solve_hnf(v, x);
}

// ---------------------------------------------------------------------------

void Lattice::normalize() {
  if (basis.m == 0) {
    den = 1;
    return;
  }
  Int g = den;
  for (const Int& x : basis.a) {
    g = gcd(g, x);
    if (g == 1) break;
  }
  if (g > 1) {
    for (Int& x : basis.a) x = divexact(x, g);
    den = divexact(den, g);
  }
  if (den < 0) throw ComputationError("lattice: negative denominator");
}

Lattice make_lattice(IntMat rows, Int den) {
  Lattice L;
  L.basis = hnf(std::move(rows));
  L.den = den;
  L.normalize();
  return L;
}

Lattice lattice_sum(const Lattice& A, const Lattice& B) {
  Int d = lcm(A.den, B.den);
  IntMat rows(A.basis.m + B.basis.m, A.basis.n);
  Int fa = divexact(d, A.den), fb = divexact(d, B.den);
  for (long i = 0; i < A.basis.m; ++i)
    for (long j = 0; j < A.basis.n; ++j) rows.at(i, j) = A.basis.at(i, j) * fa;
  for (long i = 0; i < B.basis.m; ++i)
    for (long j = 0; j < B.basis.n; ++j) rows.at(A.basis.m + i, j) = B.basis.at(i, j) * fb;
  return make_lattice(std::move(rows), d);
}

bool lattice_equal(const Lattice& A, const Lattice& B) {
  return A.den == B.den && A.basis == B.basis;
}

}  // namespace eis
