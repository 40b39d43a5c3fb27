#include "eisdepth/numberfield.hpp"

#include "eisdepth/detail/modpoly.hpp"

#include <algorithm>

namespace eis {

// ---------------------------------------------------------------------------
// field arithmetic in the power basis

NumberField::NumberField(UniPoly poly, bool check) : g(std::move(poly)) {
  degree = g.degree();
  if (degree < 1) throw ComputationError("NumberField: degree < 1");
  if (check) {
    if (!g.is_monic()) throw ComputationError("NumberField: polynomial not monic");
    auto fs = factor(g);
    if (fs.size() != 1 || fs[0].second != 1)
      throw ComputationError("NumberField: polynomial not irreducible");
  }
}

FieldElement fe_zero(const NumberField& K) { return {std::vector<Rat>(K.degree, Rat(0))}; }

FieldElement fe_one(const NumberField& K) {
  FieldElement a = fe_zero(K);
  a.c[0] = 1;
  return a;
}

FieldElement fe_from_rat(const NumberField& K, const Rat& v) {
  FieldElement a = fe_zero(K);
  a.c[0] = v;
  return a;
}

FieldElement fe_theta(const NumberField& K) {
  FieldElement a = fe_zero(K);
  if (K.degree == 1)
    a.c[0] = -Rat(K.g.c[0]);
  else
    a.c[1] = 1;
  return a;
}

FieldElement fe_add(const NumberField& K, const FieldElement& a, const FieldElement& b) {
  FieldElement r = fe_zero(K);
  for (long i = 0; i < K.degree; ++i) r.c[i] = a.c[i] + b.c[i];
  return r;
}

FieldElement fe_sub(const NumberField& K, const FieldElement& a, const FieldElement& b) {
  FieldElement r = fe_zero(K);
  for (long i = 0; i < K.degree; ++i) r.c[i] = a.c[i] - b.c[i];
  return r;
}

FieldElement fe_scale(const NumberField& K, const FieldElement& a, const Rat& s) {
  FieldElement r = fe_zero(K);
  for (long i = 0; i < K.degree; ++i) r.c[i] = a.c[i] * s;
  return r;
}

FieldElement fe_mul(const NumberField& K, const FieldElement& a, const FieldElement& b) {
  QPoly pa(a.c.begin(), a.c.end()), pb(b.c.begin(), b.c.end());
  qtrim(pa);
  qtrim(pb);
  QPoly prod = qmul(pa, pb);
  auto [q, r] = qdivrem(prod, qfrom(K.g));
  FieldElement out = fe_zero(K);
  for (size_t i = 0; i < r.size(); ++i) out.c[i] = r[i];
  return out;
}

FieldElement fe_inv(const NumberField& K, const FieldElement& a) {
  if (a.is_zero()) throw ComputationError("fe_inv of zero");
  QPoly pa(a.c.begin(), a.c.end());
  qtrim(pa);
  QPoly inv = qinvmod(pa, qfrom(K.g));
  FieldElement out = fe_zero(K);
  for (size_t i = 0; i < inv.size(); ++i) out.c[i] = inv[i];
  return out;
}

namespace {

// multiplication matrix of a on the power basis (row i = coords of a*theta^i)
std::vector<std::vector<Rat>> mult_matrix(const NumberField& K, const FieldElement& a) {
  long d = K.degree;
  std::vector<std::vector<Rat>> M(d);
  FieldElement cur = a;
  M[0] = a.c;
  for (long i = 1; i < d; ++i) {
    cur = fe_mul(K, cur, fe_theta(K));
    M[i] = cur.c;
  }
  return M;
}

}  // namespace

Rat fe_trace(const NumberField& K, const FieldElement& a) {
  auto M = mult_matrix(K, a);
  Rat t = 0;
  for (long i = 0; i < K.degree; ++i) t += M[i][i];
  return t;
}

UniPoly fe_minpoly(const NumberField& K, const FieldElement& a) {
  long d = K.degree;
  for (long k = 1; k <= d; ++k) {
    // solve c_0..c_{k-1}: a^k = sum c_i a^i
    std::vector<std::vector<Rat>> A(k, std::vector<Rat>(d));
    FieldElement pw = fe_one(K);
    for (long i = 0; i < k; ++i) {
      A[i] = pw.c;
      pw = fe_mul(K, pw, a);
    }
    std::vector<Rat> target = pw.c;  // a^k
    // least-squares-free exact solve: Gaussian elimination on A^T | target
    std::vector<std::vector<Rat>> M(d, std::vector<Rat>(k + 1, Rat(0)));
    for (long i = 0; i < k; ++i)
      for (long j = 0; j < d; ++j) M[j][i] = A[i][j];
    for (long j = 0; j < d; ++j) M[j][k] = target[j];
    // eliminate
    long row = 0;
    std::vector<long> pivot_of_col(k, -1);
    for (long col = 0; col < k && row < d; ++col) {
      long pr = -1;
      for (long i = row; i < d; ++i)
        if (M[i][col] != 0) {
          pr = i;
          break;
        }
      if (pr < 0) continue;
      std::swap(M[pr], M[row]);
      Rat inv = 1 / M[row][col];
      for (long j = col; j <= k; ++j) M[row][j] *= inv;
      for (long i = 0; i < d; ++i) {
        if (i == row || M[i][col] == 0) continue;
        Rat f = M[i][col];
        for (long j = col; j <= k; ++j) M[i][j] -= f * M[row][j];
      }
      pivot_of_col[col] = row;
      ++row;
    }
    // consistent iff rows beyond pivots have zero rhs
    bool ok = true;
    for (long i = row; i < d; ++i)
      if (M[i][k] != 0) {
        ok = false;
        break;
      }
    if (!ok) continue;
    // read solution
    std::vector<Rat> sol(k, Rat(0));
    for (long col = 0; col < k; ++col)
      if (pivot_of_col[col] >= 0) sol[col] = M[pivot_of_col[col]][k];
    // minpoly = x^k - sum sol_i x^i
    std::vector<Int> coeffs(k + 1);
    Int den = 1;
    for (long i = 0; i < k; ++i) den = lcm(den, Int(sol[i].get_den()));
    if (den != 1) throw ComputationError("fe_minpoly: element not integral");
    for (long i = 0; i < k; ++i) coeffs[i] = -sol[i].get_num();
    coeffs[k] = 1;
    return UniPoly(std::move(coeffs));
  }
  throw ComputationError("fe_minpoly: no dependence found");
}

// ---------------------------------------------------------------------------
// F_p linear algebra helpers (small dense, Int entries)

namespace {

struct FpMat {
  long m = 0, n = 0;
  std::vector<Int> a;
  FpMat() = default;
  FpMat(long m_, long n_) : m(m_), n(n_), a(m_ * n_) {}
  Int& at(long i, long j) { return a[i * n + j]; }
  const Int& at(long i, long j) const { return a[i * n + j]; }
};

FpMat fp_mul(const FpMat& A, const FpMat& B, const Int& p) {
  FpMat C(A.m, B.n);
  for (long i = 0; i < A.m; ++i)
    for (long k = 0; k < A.n; ++k) {
      if (A.at(i, k) == 0) continue;
      for (long j = 0; j < B.n; ++j) C.at(i, j) += A.at(i, k) * B.at(k, j);
    }
  for (Int& x : C.a) x = mod_floor(x, p);
  return C;
}

// basis of {x : x * A = 0} over F_p, rows reduced
std::vector<std::vector<Int>> fp_left_kernel(FpMat A, const Int& p) {
  long m = A.m, n = A.n;
  FpMat U(m, m);
  for (long i = 0; i < m; ++i) U.at(i, i) = 1;
  long r = 0;
  for (long col = 0; col < n && r < m; ++col) {
    long piv = -1;
    for (long i = r; i < m; ++i)
      if (A.at(i, col) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r) {
      for (long j = 0; j < n; ++j) std::swap(A.at(piv, j), A.at(r, j));
      for (long j = 0; j < m; ++j) std::swap(U.at(piv, j), U.at(r, j));
    }
    Int inv = invmod(A.at(r, col), p);
    for (long i = r + 1; i < m; ++i) {
      if (A.at(i, col) == 0) continue;
      Int f = mod_floor(A.at(i, col) * inv, p);
      for (long j = col; j < n; ++j) A.at(i, j) = mod_floor(A.at(i, j) - f * A.at(r, j), p);
      for (long j = 0; j < m; ++j) U.at(i, j) = mod_floor(U.at(i, j) - f * U.at(r, j), p);
    }
    ++r;
  }
  std::vector<std::vector<Int>> out;
  for (long i = r; i < m; ++i) {
    std::vector<Int> v(m);
    for (long j = 0; j < m; ++j) v[j] = U.at(i, j);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// POrderData internals

std::vector<Int> POrderData::mul_coords(const std::vector<Int>& x, const std::vector<Int>& y) const {
  long d = degree;
  std::vector<Int> out(d);
  for (long i = 0; i < d; ++i) {
    if (x[i] == 0) continue;
    for (long j = 0; j < d; ++j) {
      if (y[j] == 0) continue;
      Int f = x[i] * y[j];
      const Int* row = &mult_table.a[(i * d + j) * d];
      for (long k = 0; k < d; ++k)
        if (row[k] != 0) out[k] += f * row[k];
    }
  }
  return out;
}

std::vector<Int> POrderData::to_order_coords_int(const std::vector<Int>& power_coords) const {
  long d = degree;
  std::vector<Int> t(d);
  for (long i = 0; i < d; ++i) {
    if (power_coords[i] == 0) continue;
    for (long j = 0; j < d; ++j) t[j] += power_coords[i] * pow_to_ord.at(i, j);
  }
  for (long j = 0; j < d; ++j) {
    if (!divisible(t[j], pow_to_ord_den))
      throw ComputationError("to_order_coords_int: element not in order lattice span");
    t[j] = divexact(t[j], pow_to_ord_den);
  }
  return t;
}

std::vector<Rat> POrderData::to_order_coords(const FieldElement& x) const {
  long d = degree;
  std::vector<Rat> t(d, Rat(0));
  for (long i = 0; i < d; ++i) {
    if (x.c[i] == 0) continue;
    for (long j = 0; j < d; ++j) t[j] += x.c[i] * Rat(pow_to_ord.at(i, j));
  }
  Rat den(pow_to_ord_den);
  for (Rat& v : t) v /= den;
  return t;
}

namespace {

// product of two order-basis rows (power coords, scale 1/den each), reduced
// mod g; returns integer power coords of den^2 * (w_i * w_j)
std::vector<Int> row_product_mod_g(const UniPoly& g, const std::vector<Int>& a,
                                   const std::vector<Int>& b) {
  long d = g.degree();
  std::vector<Int> conv(2 * d - 1, Int(0));
  for (long i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    for (long j = 0; j < d; ++j)
      if (b[j] != 0) conv[i + j] += a[i] * b[j];
  }
  // reduce mod monic g
  for (long k = 2 * d - 2; k >= d; --k) {
    if (conv[k] == 0) continue;
    Int c = conv[k];
    conv[k] = 0;
    for (long i = 0; i < d; ++i) conv[k - d + i] -= c * g.c[i];
  }
  conv.resize(d);
  return conv;
}

struct OrderCore {
  IntMat basis;  // d x d HNF, rows/den = basis in power coords
  Int den = 1;
};

// derived data: mult table + power->order conversion; throws if not a ring
void finish_order(const NumberField& K, const Int& p, OrderCore core, POrderData& O) {
  long d = K.degree;
  O.p = p;
  O.degree = d;
  O.basis = core.basis;
  O.den = core.den;

  // inverse of the (upper triangular) HNF basis: solve basis * X = det * I by
  // back substitution, column by column
  Int det = 1;
  for (long i = 0; i < d; ++i) det *= O.basis.at(i, i);
  // adj = det * basis^{-1}, integer
  IntMat adj(d, d);
  for (long col = 0; col < d; ++col) {
    // solve x * basis = det * e_col; basis is upper triangular, so the
    // equation for coordinate i only involves x_k with k <= i
    std::vector<Rat> x(d, Rat(0));
    for (long i = 0; i < d; ++i) {
      Rat rhs = (i == col) ? Rat(det) : Rat(0);
      for (long j = 0; j < i; ++j) rhs -= x[j] * Rat(O.basis.at(j, i));
      x[i] = rhs / Rat(O.basis.at(i, i));
    }
    for (long i = 0; i < d; ++i) {
      if (x[i].get_den() != 1) throw ComputationError("finish_order: adjugate not integral");
      adj.at(col, i) = x[i].get_num();
    }
  }
  // wait: we want pow_to_ord with y = x_pow * den * basis^{-1}; basis^{-1} = adjT?/det
  // adj rows built as solutions of x*basis = det*e_col, i.e. adj[col] * basis = det*e_col,
  // so (det * basis^{-1})[i][col]... we need x_pow * basis^{-1}:
  // (x * basis^{-1})_j = sum_i x_i * (basis^{-1})[i][j] and adj[col][i] = det*(basis^{-1})...
  // adj[col] * basis = det e_col means adj[col] = det * e_col * basis^{-1} = det * (basis^{-1} row col).
  // So basis^{-1}[col][i] = adj[col][i] / det, and pow_to_ord[i][j] = den * adj... careful:
  // y = x * den * basis^{-1}: y_j = den * sum_i x_i * basis^{-1}[i][j] = den/det * sum_i x_i adj[i][j].
  IntMat p2o(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) p2o.at(i, j) = O.den * adj.at(i, j);
  O.pow_to_ord = std::move(p2o);
  O.pow_to_ord_den = det;
  // normalize the fraction
  Int gshare = det;
  for (const Int& v : O.pow_to_ord.a) {
    gshare = gcd(gshare, v);
    if (gshare == 1) break;
  }
  if (gshare > 1) {
    for (Int& v : O.pow_to_ord.a) v = divexact(v, gshare);
    O.pow_to_ord_den = divexact(O.pow_to_ord_den, gshare);
  }

  // multiplication table (also verifies ring closure). row_product is scaled
  // by den^2, so order coords come out as prod * pow_to_ord / (den^2 * ptod).
  O.mult_table = IntMat(d * d, d);
  Int scale = O.pow_to_ord_den * O.den * O.den;
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) {
      std::vector<Int> prod = row_product_mod_g(K.g, O.basis.row(i), O.basis.row(j));
      // order coords: prod * pow_to_ord / (pow_to_ord_den * den)
      for (long t = 0; t < d; ++t) {
        Int s = 0;
        for (long k = 0; k < d; ++k)
          if (prod[k] != 0) s += prod[k] * O.pow_to_ord.at(k, t);
        if (!divisible(s, scale)) throw ComputationError("order basis not multiplicatively closed");
        O.mult_table.at(i * d + j, t) = divexact(s, scale);
      }
    }

  // coords of 1 and theta
  std::vector<Int> one_pow(d, Int(0)), theta_pow(d, Int(0));
  one_pow[0] = 1;
  if (d == 1) {
    O.one_coords = O.to_order_coords_int(one_pow);
    O.theta_coords = O.one_coords;  // theta rational, handled via g at degree 1
    std::vector<Int> th(d, Int(0));
    th[0] = -K.g.c[0];
    O.theta_coords = O.to_order_coords_int(th);
  } else {
    theta_pow[1] = 1;
    O.one_coords = O.to_order_coords_int(one_pow);
    O.theta_coords = O.to_order_coords_int(theta_pow);
  }
  // index valuation
  Int index = pow(O.den, (unsigned long)d);
  if (!divisible(index, det)) throw ComputationError("order: index not integral");
  index = divexact(index, det);
  O.index_valuation = index == 1 ? 0 : valuation(index, p);
}

// Frobenius matrix of O/pO (row k = coords of w_k^p)
FpMat frobenius_matrix(const POrderData& O, const Int& p) {
  long d = O.degree;
  FpMat Phi(d, d);
  for (long k = 0; k < d; ++k) {
    // w_k^p by square and multiply in O/pO
    std::vector<Int> base(d, Int(0)), acc(d, Int(0));
    base[k] = 1;
    acc = O.one_coords;
    for (Int& x : acc) x = mod_floor(x, p);
    Int e = p;
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) {
        acc = O.mul_coords(acc, base);
        for (Int& x : acc) x = mod_floor(x, p);
      }
      e >>= 1;
      if (e > 0) {
        base = O.mul_coords(base, base);
        for (Int& x : base) x = mod_floor(x, p);
      }
    }
    for (long j = 0; j < d; ++j) Phi.at(k, j) = acc[j];
  }
  return Phi;
}

// radical of O/pO as an integer lattice in O-coords (contains p*O)
IntMat radical_lattice(const POrderData& O, const Int& p) {
  long d = O.degree;
  FpMat Phi = frobenius_matrix(O, p);
  FpMat Pj = Phi;
  Int pj = p;
  while (pj < d) {
    Pj = fp_mul(Pj, Phi, p);
    pj *= p;
  }
  auto ker = fp_left_kernel(Pj, p);
  IntMat rows((long)ker.size() + d, d);
  for (size_t i = 0; i < ker.size(); ++i)
    for (long j = 0; j < d; ++j) rows.at((long)i, j) = ker[i][j];
  for (long i = 0; i < d; ++i) rows.at((long)ker.size() + i, i) = p;
  return hnf(std::move(rows));
}

}  // namespace

POrderData p_maximal_order(const NumberField& K, const Int& p) {
  if (!is_prime(p)) throw ComputationError("p_maximal_order: p not prime");
  long d = K.degree;
  OrderCore core;
  core.basis = IntMat::identity(d);
  core.den = 1;

  for (int round = 0; round < 64 * (int)d + 8; ++round) {
    POrderData O;
    finish_order(K, p, core, O);
    IntMat Ip = radical_lattice(O, p);
    HnfSolver ip_solver(Ip);
    // action of each basis element on Ip/pIp
    FpMat big(d, d * d);
    for (long k = 0; k < d; ++k) {
      std::vector<Int> ek(d, Int(0));
      ek[k] = 1;
      for (long i = 0; i < d; ++i) {
        std::vector<Int> prod = O.mul_coords(ek, Ip.row(i));
        std::vector<Int> coords;
        if (!ip_solver.solve_hnf_int(prod, coords))
          throw ComputationError("radical not an ideal");
        for (long j = 0; j < d; ++j) big.at(k, i * d + j) = mod_floor(coords[j], p);
      }
    }
    auto ker = fp_left_kernel(big, p);
    // O' = O + (1/p) * U, U = lift of kernel (in O-coords)
    if (ker.empty()) return O;
    // check enlargement is proper
    IntMat rows((long)ker.size() + d, d);
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j) rows.at(i, j) = p * O.basis.at(i, j);
    for (size_t i = 0; i < ker.size(); ++i) {
      // power coords of the kernel element: ker * basis
      for (long j = 0; j < d; ++j) {
        Int s = 0;
        for (long t = 0; t < d; ++t)
          if (ker[i][t] != 0) s += ker[i][t] * O.basis.at(t, j);
        rows.at(d + (long)i, j) = s;
      }
    }
    OrderCore next;
    next.den = core.den * p;
    next.basis = hnf(std::move(rows));
    // normalize scale
    Int g = next.den;
    for (const Int& x : next.basis.a) {
      g = gcd(g, x);
      if (g == 1) break;
    }
    if (g > 1) {
      for (Int& x : next.basis.a) x = divexact(x, g);
      next.den = divexact(next.den, g);
    }
    if (next.basis == core.basis && next.den == core.den) return O;
    core = std::move(next);
  }
  throw ComputationError("p_maximal_order: did not stabilize");
}

// ---------------------------------------------------------------------------
// prime splitting

namespace {

// residue algebra R = O/pO with a designated subquotient S = R/rad described
// by the rows of a reduction: elements of S are R-coords reduced by rad rows.
struct ResidueQuotient {
  const POrderData* O;
  Int p;
  // echelonized radical basis (rows, mod p), pivot columns
  std::vector<std::vector<Int>> rad_rows;
  std::vector<long> rad_pivots;
  std::vector<long> free_cols;  // complement coordinates (basis of S)

  long dim() const { return (long)free_cols.size(); }

  // reduce an R-coord vector by the radical rows; result supported on free_cols
  std::vector<Int> reduce(std::vector<Int> x) const {
    for (Int& v : x) v = mod_floor(v, p);
    for (size_t i = 0; i < rad_rows.size(); ++i) {
      long pc = rad_pivots[i];
      if (x[pc] != 0) {
        Int f = x[pc];
        for (long j = 0; j < (long)x.size(); ++j)
          x[j] = mod_floor(x[j] - f * rad_rows[i][j], p);
      }
    }
    return x;
  }

  std::vector<Int> s_coords(const std::vector<Int>& x_reduced) const {
    std::vector<Int> s(free_cols.size());
    for (size_t i = 0; i < free_cols.size(); ++i) s[i] = x_reduced[free_cols[i]];
    return s;
  }

  std::vector<Int> r_coords(const std::vector<Int>& s) const {
    std::vector<Int> x(O->degree, Int(0));
    for (size_t i = 0; i < free_cols.size(); ++i) x[free_cols[i]] = s[i];
    return x;
  }

  std::vector<Int> s_mul(const std::vector<Int>& a, const std::vector<Int>& b) const {
    std::vector<Int> prod = O->mul_coords(r_coords(a), r_coords(b));
    return s_coords(reduce(std::move(prod)));
  }
};

ResidueQuotient make_quotient(const POrderData& O, const Int& p) {
  ResidueQuotient Q;
  Q.O = &O;
  Q.p = p;
  long d = O.degree;
  IntMat rad = radical_lattice(O, p);
  // rows of rad that are nonzero mod p form the radical of R after echelon
  std::vector<std::vector<Int>> rows;
  for (long i = 0; i < rad.m; ++i) {
    std::vector<Int> r(d);
    bool nz = false;
    for (long j = 0; j < d; ++j) {
      r[j] = mod_floor(rad.at(i, j), p);
      if (r[j] != 0) nz = true;
    }
    if (nz) rows.push_back(std::move(r));
  }
  // echelonize mod p
  std::vector<std::vector<Int>> ech;
  std::vector<long> pivots;
  for (auto& r : rows) {
    std::vector<Int> v = r;
    for (size_t i = 0; i < ech.size(); ++i) {
      if (v[pivots[i]] != 0) {
        Int f = v[pivots[i]];
        for (long j = 0; j < d; ++j) v[j] = mod_floor(v[j] - f * ech[i][j], p);
      }
    }
    long pc = -1;
    for (long j = 0; j < d; ++j)
      if (v[j] != 0) {
        pc = j;
        break;
      }
    if (pc < 0) continue;
    Int inv = invmod(v[pc], p);
    for (long j = 0; j < d; ++j) v[j] = mod_floor(v[j] * inv, p);
    // reduce previous rows by the new one
    for (size_t i = 0; i < ech.size(); ++i) {
      if (ech[i][pc] != 0) {
        Int f = ech[i][pc];
        for (long j = 0; j < d; ++j) ech[i][j] = mod_floor(ech[i][j] - f * v[j], p);
      }
    }
    ech.push_back(std::move(v));
    pivots.push_back(pc);
  }
  // sort by pivot
  std::vector<size_t> order(ech.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return pivots[a] < pivots[b]; });
  for (size_t i : order) {
    Q.rad_rows.push_back(ech[i]);
    Q.rad_pivots.push_back(pivots[i]);
  }
  std::vector<bool> is_piv(d, false);
  for (long pc : Q.rad_pivots) is_piv[pc] = true;
  for (long j = 0; j < d; ++j)
    if (!is_piv[j]) Q.free_cols.push_back(j);
  return Q;
}

// one field factor of the etale algebra S, as an S-ideal with identity
struct FieldBlock {
  std::vector<std::vector<Int>> basis;  // S-coords
  std::vector<Int> identity;            // S-coords
};

// minimal polynomial of v within the span of its powers (block algebra),
// as a mod-p polynomial (monic)
std::vector<Int> block_minpoly(const ResidueQuotient& S, const std::vector<Int>& e_blk,
                               const std::vector<Int>& v, const Int& p) {
  long n = (long)v.size();
  std::vector<std::vector<Int>> pows;
  std::vector<Int> cur = e_blk;  // v^0 within the block
  for (long k = 0; k <= n; ++k) {
    pows.push_back(cur);
    // try to solve cur_{k+1} in span of pows via echelon each round (small dims)
    cur = S.s_mul(cur, v);
    // dependence test: echelonize pows and reduce cur
    std::vector<std::vector<Int>> ech;
    std::vector<long> pivots;
    for (auto r : pows) {
      for (size_t i = 0; i < ech.size(); ++i)
        if (r[pivots[i]] != 0) {
          Int f = r[pivots[i]];
          for (long j = 0; j < n; ++j) r[j] = mod_floor(r[j] - f * ech[i][j], p);
        }
      long pc = -1;
      for (long j = 0; j < n; ++j)
        if (r[j] != 0) {
          pc = j;
          break;
        }
      if (pc < 0) continue;
      Int inv = invmod(r[pc], p);
      for (long j = 0; j < n; ++j) r[j] = mod_floor(r[j] * inv, p);
      ech.push_back(std::move(r));
      pivots.push_back(pc);
    }
    std::vector<Int> red = cur;
    std::vector<Rat> dummy;
    // reduce cur by ech; need coefficients: do a tracked elimination
    std::vector<Int> coeff(pows.size(), Int(0));
    // solve sum c_i pows[i] = cur by Gaussian elimination (augmented)
    long rows_n = (long)pows.size();
    std::vector<std::vector<Int>> M(n, std::vector<Int>(rows_n + 1, Int(0)));
    for (long i = 0; i < rows_n; ++i)
      for (long j = 0; j < n; ++j) M[j][i] = pows[i][j];
    for (long j = 0; j < n; ++j) M[j][rows_n] = cur[j];
    long row = 0;
    std::vector<long> pivot_of_col(rows_n, -1);
    for (long col = 0; col < rows_n && row < n; ++col) {
      long pr = -1;
      for (long i = row; i < n; ++i)
        if (M[i][col] != 0) {
          pr = i;
          break;
        }
      if (pr < 0) continue;
      std::swap(M[pr], M[row]);
      Int inv = invmod(M[row][col], p);
      for (long j = col; j <= rows_n; ++j) M[row][j] = mod_floor(M[row][j] * inv, p);
      for (long i = 0; i < n; ++i) {
        if (i == row || M[i][col] == 0) continue;
        Int f = M[i][col];
        for (long j = col; j <= rows_n; ++j) M[i][j] = mod_floor(M[i][j] - f * M[row][j], p);
      }
      pivot_of_col[col] = row;
      ++row;
    }
    bool consistent = true;
    for (long i = row; i < n; ++i)
      if (M[i][rows_n] != 0) {
        consistent = false;
        break;
      }
    if (consistent) {
      std::vector<Int> mp(pows.size() + 1, Int(0));
      for (long col = 0; col < rows_n; ++col)
        if (pivot_of_col[col] >= 0)
          mp[col] = mod_floor(-M[pivot_of_col[col]][rows_n], p);
      mp[pows.size()] = 1;
      return mp;
    }
  }
  throw ComputationError("block_minpoly: no dependence");
}

void split_block(const ResidueQuotient& S, FieldBlock blk, const Int& p,
                 std::vector<FieldBlock>& out) {
  long n = (long)blk.basis.size();
  long dim_s = S.dim();
  // Frobenius-fixed subspace of the block: solutions of x^p = x within blk
  // coordinates (relative to the block basis).
  // Build Frobenius on block coords.
  std::vector<std::vector<Int>> frob_rows;
  for (long i = 0; i < n; ++i) {
    // basis_i^p within S
    std::vector<Int> acc = blk.identity;
    std::vector<Int> base = blk.basis[i];
    Int e = p;
    while (e > 0) {
      if (mpz_odd_p(e.get_mpz_t())) acc = S.s_mul(acc, base);
      e >>= 1;
      if (e > 0) base = S.s_mul(base, base);
    }
    frob_rows.push_back(std::move(acc));
  }
  // express frob_rows in block-basis coords: solve against blk.basis
  // (the block basis is linearly independent in S-coords)
  // assemble matrix with columns = blk.basis
  auto solve_in_block = [&](const std::vector<Int>& target) {
    std::vector<std::vector<Int>> M(dim_s, std::vector<Int>(n + 1, Int(0)));
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < dim_s; ++j) M[j][i] = blk.basis[i][j];
    for (long j = 0; j < dim_s; ++j) M[j][n] = target[j];
    long row = 0;
    std::vector<long> pivot_of_col(n, -1);
    for (long col = 0; col < n && row < dim_s; ++col) {
      long pr = -1;
      for (long i = row; i < dim_s; ++i)
        if (M[i][col] != 0) {
          pr = i;
          break;
        }
      if (pr < 0) continue;
      std::swap(M[pr], M[row]);
      Int inv = invmod(M[row][col], p);
      for (long j = col; j <= n; ++j) M[row][j] = mod_floor(M[row][j] * inv, p);
      for (long i = 0; i < dim_s; ++i) {
        if (i == row || M[i][col] == 0) continue;
        Int f = M[i][col];
        for (long j = col; j <= n; ++j) M[i][j] = mod_floor(M[i][j] - f * M[row][j], p);
      }
      pivot_of_col[col] = row;
      ++row;
    }
    for (long i = row; i < dim_s; ++i)
      if (M[i][n] != 0) throw ComputationError("split_block: element outside block");
    std::vector<Int> c(n, Int(0));
    for (long col = 0; col < n; ++col)
      if (pivot_of_col[col] >= 0) c[col] = M[pivot_of_col[col]][n];
    return c;
  };

  FpMat Phi(n, n);
  for (long i = 0; i < n; ++i) {
    auto c = solve_in_block(frob_rows[i]);
    for (long j = 0; j < n; ++j) Phi.at(i, j) = c[j];
  }
  // fixed subspace: kernel of Phi - I
  FpMat PhiMinus = Phi;
  for (long i = 0; i < n; ++i) PhiMinus.at(i, i) = mod_floor(PhiMinus.at(i, i) - 1, p);
  auto fixed = fp_left_kernel(PhiMinus, p);
  if (fixed.size() <= 1) {
    out.push_back(std::move(blk));
    return;
  }
  // find a fixed vector not proportional to the identity
  std::vector<Int> id_blk = solve_in_block(blk.identity);
  std::vector<Int> vcoef;
  for (auto& w : fixed) {
    // w proportional to id_blk?
    bool prop = true;
    Int ratio_n = 0, ratio_d = 0;
    for (long j = 0; j < n; ++j) {
      if (id_blk[j] == 0 && w[j] == 0) continue;
      if (id_blk[j] == 0 || w[j] == 0) {
        prop = false;
        break;
      }
      if (ratio_d == 0) {
        ratio_n = w[j];
        ratio_d = id_blk[j];
      } else if (mod_floor(w[j] * ratio_d - ratio_n * id_blk[j], p) != 0) {
        prop = false;
        break;
      }
    }
    if (!prop) {
      vcoef = w;
      break;
    }
  }
  if (vcoef.empty()) throw ComputationError("split_block: no splitting element");
  // v in S-coords
  std::vector<Int> v(dim_s, Int(0));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < dim_s; ++j) v[j] = mod_floor(v[j] + vcoef[i] * blk.basis[i][j], p);

  std::vector<Int> mp = block_minpoly(S, blk.identity, v, p);
  // roots of mp over F_p (splits completely since v is Frobenius-fixed)
  UniPoly mpz_poly{std::vector<Int>(mp)};
  auto lin = factor_mod_prime(mpz_poly, p);
  for (auto& lf : lin) {
    if ((long)lf.size() - 1 != 1) throw ComputationError("split_block: nonlinear factor");
    Int root = mod_floor(-lf[0], p);
    // sub-block: kernel of (v - root) restricted to blk
    // compute matrix of multiplication by (v - root*1) on the block basis
    FpMat Mv(n, n);
    for (long i = 0; i < n; ++i) {
      std::vector<Int> prod = S.s_mul(blk.basis[i], v);
      // minus root * basis_i
      for (long j = 0; j < dim_s; ++j) prod[j] = mod_floor(prod[j] - root * blk.basis[i][j], p);
      auto c = solve_in_block(prod);
      for (long j = 0; j < n; ++j) Mv.at(i, j) = c[j];
    }
    auto ker = fp_left_kernel(Mv, p);
    if (ker.empty()) continue;
    FieldBlock sub;
    for (auto& kv : ker) {
      std::vector<Int> w(dim_s, Int(0));
      for (long i = 0; i < n; ++i)
        for (long j = 0; j < dim_s; ++j) w[j] = mod_floor(w[j] + kv[i] * blk.basis[i][j], p);
      sub.basis.push_back(std::move(w));
    }
    // identity of the sub-block: solve e in sub with e*b = b for all basis b
    long k = (long)sub.basis.size();
    // unknowns: coefficients of e in sub.basis; equations: e*b_j = b_j
    std::vector<std::vector<Int>> M(k * dim_s, std::vector<Int>(k + 1, Int(0)));
    for (long jb = 0; jb < k; ++jb) {
      for (long i = 0; i < k; ++i) {
        std::vector<Int> prod = S.s_mul(sub.basis[i], sub.basis[jb]);
        for (long t = 0; t < dim_s; ++t) M[jb * dim_s + t][i] = prod[t];
      }
      for (long t = 0; t < dim_s; ++t) M[jb * dim_s + t][k] = sub.basis[jb][t];
    }
    // gaussian solve
    long rows_n = k * dim_s;
    long row = 0;
    std::vector<long> pivot_of_col(k, -1);
    for (long col = 0; col < k && row < rows_n; ++col) {
      long pr = -1;
      for (long i = row; i < rows_n; ++i)
        if (M[i][col] != 0) {
          pr = i;
          break;
        }
      if (pr < 0) continue;
      std::swap(M[pr], M[row]);
      Int inv = invmod(M[row][col], p);
      for (long j = col; j <= k; ++j) M[row][j] = mod_floor(M[row][j] * inv, p);
      for (long i = 0; i < rows_n; ++i) {
        if (i == row || M[i][col] == 0) continue;
        Int f = M[i][col];
        for (long j = col; j <= k; ++j) M[i][j] = mod_floor(M[i][j] - f * M[row][j], p);
      }
      pivot_of_col[col] = row;
      ++row;
    }
    for (long i = row; i < rows_n; ++i)
      if (M[i][k] != 0) throw ComputationError("split_block: no identity in sub-block");
    std::vector<Int> ecoef(k, Int(0));
    for (long col = 0; col < k; ++col)
      if (pivot_of_col[col] >= 0) ecoef[col] = M[pivot_of_col[col]][k];
    sub.identity.assign(dim_s, Int(0));
    for (long i = 0; i < k; ++i)
      for (long j = 0; j < dim_s; ++j)
        sub.identity[j] = mod_floor(sub.identity[j] + ecoef[i] * sub.basis[i][j], p);
    split_block(S, std::move(sub), p, out);
  }
}

}  // namespace

std::vector<PrimeIdealData> primes_above(const NumberField& K, const POrderData& O) {
  const Int& p = O.p;
  long d = O.degree;
  ResidueQuotient S = make_quotient(O, p);

  FieldBlock top;
  for (long i = 0; i < S.dim(); ++i) {
    std::vector<Int> e(S.dim(), Int(0));
    e[i] = 1;
    top.basis.push_back(std::move(e));
  }
  top.identity = S.s_coords(S.reduce(std::vector<Int>(O.one_coords)));
  std::vector<FieldBlock> blocks;
  split_block(S, std::move(top), p, blocks);

  std::vector<PrimeIdealData> out;
  long sum_ef = 0;
  for (const FieldBlock& blk : blocks) {
    PrimeIdealData lam;
    lam.p = p;
    lam.f = (long)blk.basis.size();

    // lambda = kernel of O -> S -> S/other-blocks ~ F: an O-coord x maps into
    // the block iff x*e_blk = x in S; the field quotient is x -> x*e_blk
    // expressed in blk coords. lambda = {x : x*e_blk = 0 in S} + pO.
    // multiplication by e_blk on R-coords mod p:
    std::vector<Int> eblk_r = S.r_coords(blk.identity);
    FpMat Me(d, d);
    for (long i = 0; i < d; ++i) {
      std::vector<Int> ei(d, Int(0));
      ei[i] = 1;
      std::vector<Int> prod = S.reduce(O.mul_coords(ei, eblk_r));
      for (long j = 0; j < d; ++j) Me.at(i, j) = prod[j];
    }
    auto ker = fp_left_kernel(Me, p);
    IntMat rows((long)ker.size() + d, d);
    for (size_t i = 0; i < ker.size(); ++i)
      for (long j = 0; j < d; ++j) rows.at((long)i, j) = ker[i][j];
    for (long i = 0; i < d; ++i) rows.at((long)ker.size() + i, i) = p;
    lam.lambda_basis = hnf(std::move(rows));

    // sanity: index of lambda in O is p^f
    Int idx = 1;
    for (long i = 0; i < d; ++i) idx *= lam.lambda_basis.at(i, i);
    if (idx != pow(p, (unsigned long)lam.f))
      throw ComputationError("primes_above: wrong residue degree");

    // anti-uniformizer: L = {y in O : y * lambda <= p*O}
    FpMat big(d, d * d);
    for (long k = 0; k < d; ++k) {
      std::vector<Int> ek(d, Int(0));
      ek[k] = 1;
      for (long i = 0; i < d; ++i) {
        std::vector<Int> prod = O.mul_coords(ek, lam.lambda_basis.row(i));
        for (long j = 0; j < d; ++j) big.at(k, i * d + j) = mod_floor(prod[j], p);
      }
    }
    auto lker = fp_left_kernel(big, p);
    bool found = false;
    for (auto& y : lker) {
      bool nonzero_mod_p = false;
      for (const Int& v : y)
        if (mod_floor(v, p) != 0) {
          nonzero_mod_p = true;
          break;
        }
      if (nonzero_mod_p) {
        lam.beta_num.assign(y.begin(), y.end());
        found = true;
        break;
      }
    }
    if (!found) throw ComputationError("primes_above: no anti-uniformizer");

    // ramification index: largest e with p * beta^e in O_(p)
    {
      std::vector<Int> z(d);
      for (long j = 0; j < d; ++j) z[j] = p * O.one_coords[j];
      long e = 0;
      for (;;) {
        std::vector<Int> t = O.mul_coords(z, lam.beta_num);
        bool div = true;
        for (const Int& v : t)
          if (!divisible(v, p)) {
            div = false;
            break;
          }
        if (!div) break;
        for (long j = 0; j < d; ++j) z[j] = divexact(t[j], p);
        ++e;
        if (e > d) throw ComputationError("primes_above: runaway ramification");
      }
      lam.e = e;
    }
    sum_ef += lam.e * lam.f;

    // verified two-element representation (p, alpha)
    {
      bool ok = false;
      for (long attempt = 0; attempt < 4 * d && !ok; ++attempt) {
        std::vector<Int> alpha(d, Int(0));
        // deterministic candidates: single basis rows, then small sums
        if (attempt < lam.lambda_basis.m) {
          alpha = lam.lambda_basis.row(attempt);
        } else {
          long a1 = attempt % d, a2 = (attempt / d) % d;
          for (long j = 0; j < d; ++j)
            alpha[j] = lam.lambda_basis.at(a1, j) + lam.lambda_basis.at(a2, j);
        }
        // ideal (p, alpha) as a lattice: p*O + alpha*O
        IntMat gen(2 * d, d);
        for (long i = 0; i < d; ++i) {
          std::vector<Int> ei(d, Int(0));
          ei[i] = 1;
          std::vector<Int> prod = O.mul_coords(ei, alpha);
          for (long j = 0; j < d; ++j) {
            gen.at(i, j) = prod[j];
            gen.at(d + i, j) = (i == j) ? p : Int(0);
          }
        }
        IntMat two = hnf(std::move(gen));
        if (two == lam.lambda_basis) {
          lam.alpha = alpha;
          ok = true;
        }
      }
      if (!ok) throw ComputationError("primes_above: no two-element representation found");
    }
    out.push_back(std::move(lam));
  }
  if (sum_ef != d) throw ComputationError("primes_above: sum e*f != degree");
  std::sort(out.begin(), out.end(), [](const PrimeIdealData& a, const PrimeIdealData& b) {
    if (a.f != b.f) return a.f < b.f;
    if (a.e != b.e) return a.e < b.e;
    return a.lambda_basis.a < b.lambda_basis.a;
  });
  return out;
}

// ---------------------------------------------------------------------------
// valuations

long valuation_ord(const POrderData& O, const PrimeIdealData& lam, std::vector<Int> y) {
  bool zero = true;
  for (const Int& v : y)
    if (v != 0) {
      zero = false;
      break;
    }
  if (zero) return kValInfinity;
  long v = 0;
  const Int& p = O.p;
  for (;;) {
    std::vector<Int> t = O.mul_coords(y, lam.beta_num);
    bool div = true;
    for (const Int& x : t)
      if (!divisible(x, p)) {
        div = false;
        break;
      }
    if (!div) return v;
    for (size_t j = 0; j < y.size(); ++j) y[j] = divexact(t[j], p);
    ++v;
  }
}

long valuation_int(const POrderData& O, const PrimeIdealData& lam,
                   const std::vector<Int>& power_coords) {
  bool zero = true;
  for (const Int& v : power_coords)
    if (v != 0) {
      zero = false;
      break;
    }
  if (zero) return kValInfinity;
  return valuation_ord(O, lam, O.to_order_coords_int(power_coords));
}

long valuation(const NumberField& K, const POrderData& O, const PrimeIdealData& lam,
               const FieldElement& x) {
  if (x.is_zero()) return kValInfinity;
  std::vector<Rat> q = O.to_order_coords(x);
  Int den = 1;
  for (const Rat& v : q) den = lcm(den, Int(v.get_den()));
  long a = den == 1 ? 0 : valuation(den, O.p);
  std::vector<Int> y(q.size());
  for (size_t j = 0; j < q.size(); ++j) {
    Rat scaled = q[j] * Rat(den);
    y[j] = scaled.get_num();
  }
  // v(x) = v(y) - v(den) = v(y) - a*e  (the p-free part of den has valuation 0)
  long vy = valuation_ord(O, lam, std::move(y));
  if (vy == kValInfinity) return kValInfinity;
  return vy - a * lam.e;
}

}  // namespace eis
