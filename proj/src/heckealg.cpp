#include "eisdepth/heckealg.hpp"

#include <algorithm>

namespace eis {

// ---------------------------------------------------------------------------
// eigenvalue order closure

namespace {

// den^2-scaled power coords of the product of two basis rows, reduced mod g
std::vector<Int> row_product_reduced(const UniPoly& g, const std::vector<Int>& a,
                                     const std::vector<Int>& b) {
  long d = g.degree();
  std::vector<Int> conv(2 * d - 1, Int(0));
  for (long i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    for (long j = 0; j < d; ++j)
      if (b[j] != 0) conv[i + j] += a[i] * b[j];
  }
  for (long k = 2 * d - 2; k >= d; --k) {
    if (conv[k] == 0) continue;
    Int c = conv[k];
    conv[k] = 0;
    for (long i = 0; i < d; ++i) conv[k - d + i] -= c * g.c[i];
  }
  conv.resize(d);
  return conv;
}

// adjugate data of an upper-triangular HNF basis: adj with adj[i] * basis =
// det * e_i
void triangular_adjugate(const IntMat& basis, IntMat& adj, Int& det) {
  long d = basis.m;
  det = 1;
  for (long i = 0; i < d; ++i) det *= basis.at(i, i);
  adj = IntMat(d, d);
  for (long col = 0; col < d; ++col) {
    std::vector<Rat> x(d, Rat(0));
    for (long i = 0; i < d; ++i) {
      Rat rhs = (i == col) ? Rat(det) : Rat(0);
      for (long j = 0; j < i; ++j) rhs -= x[j] * Rat(basis.at(j, i));
      x[i] = rhs / Rat(basis.at(i, i));
    }
    for (long i = 0; i < d; ++i) {
      if (x[i].get_den() != 1) throw ComputationError("triangular_adjugate: not integral");
      adj.at(col, i) = x[i].get_num();
    }
  }
}

}  // namespace

std::vector<Int> EigenOrder::mul_coords(const std::vector<Int>& x, const std::vector<Int>& y) const {
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

std::vector<Int> EigenOrder::element_coords(const FieldElement& x) const {
  long d = degree;
  Int cden = 1;
  for (const Rat& v : x.c) cden = lcm(cden, Int(v.get_den()));
  std::vector<Int> xi(d);
  for (long i = 0; i < d; ++i) {
    Rat s = x.c[i] * Rat(cden);
    xi[i] = s.get_num();
  }
  // coords = x * den * adj / det; with the cden scaling: / (det * cden)
  std::vector<Int> t(d, Int(0));
  for (long i = 0; i < d; ++i) {
    if (xi[i] == 0) continue;
    for (long j = 0; j < d; ++j) t[j] += xi[i] * pow_to_ord.at(i, j);
  }
  Int scale = pow_to_ord_den * cden;
  for (long j = 0; j < d; ++j) {
    if (!divisible(t[j], scale)) throw ComputationError("element not in the eigenvalue order");
    t[j] = divexact(t[j], scale);
  }
  return t;
}

EigenOrder eigen_order_closure(const NumberField& K, const std::vector<FieldElement>& gens) {
  long d = K.degree;
  // initial lattice: Z[theta] + gens
  Int den = 1;
  for (const FieldElement& x : gens)
    for (const Rat& v : x.c) den = lcm(den, Int(v.get_den()));
  IntMat rows(d + (long)gens.size(), d);
  for (long i = 0; i < d; ++i) rows.at(i, i) = den;
  for (size_t k = 0; k < gens.size(); ++k)
    for (long j = 0; j < d; ++j) {
      Rat s = gens[k].c[j] * Rat(den);
      rows.at(d + (long)k, j) = s.get_num();
    }
  IntMat basis = hnf(std::move(rows));
  // normalize content
  auto normalize = [&](IntMat& B, Int& dn) {
    Int g = dn;
    for (const Int& x : B.a) {
      g = gcd(g, x);
      if (g == 1) break;
    }
    if (g > 1) {
      for (Int& x : B.a) x = divexact(x, g);
      dn = divexact(dn, g);
    }
  };
  normalize(basis, den);

  for (int round = 0; round < 256; ++round) {
    IntMat adj;
    Int det;
    triangular_adjugate(basis, adj, det);
    // collect products that fall outside the lattice
    std::vector<std::vector<Int>> extra;
    for (long i = 0; i < d; ++i)
      for (long j = i; j < d; ++j) {
        std::vector<Int> prod = row_product_reduced(K.g, basis.row(i), basis.row(j));
        // membership: prod/(den^2) in lattice <=> prod*adj divisible by den*det
        bool inside = true;
        for (long t = 0; t < d && inside; ++t) {
          Int s = 0;
          for (long k = 0; k < d; ++k)
            if (prod[k] != 0) s += prod[k] * adj.at(k, t);
          if (!divisible(s, den * det)) inside = false;
        }
        if (!inside) extra.push_back(std::move(prod));
      }
    if (extra.empty()) break;
    if (round == 255) throw ComputationError("eigen_order_closure: no stabilization");
    // enlarge: new denominator den^2
    IntMat rows2(d + (long)extra.size(), d);
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j) rows2.at(i, j) = basis.at(i, j) * den;
    for (size_t k = 0; k < extra.size(); ++k)
      for (long j = 0; j < d; ++j) rows2.at(d + (long)k, j) = extra[k][j];
    den = den * den;
    basis = hnf(std::move(rows2));
    normalize(basis, den);
  }

  EigenOrder O;
  O.degree = d;
  O.basis = basis;
  O.den = den;
  IntMat adj;
  Int det;
  triangular_adjugate(O.basis, adj, det);
  O.pow_to_ord = IntMat(d, d);
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) O.pow_to_ord.at(i, j) = O.den * adj.at(i, j);
  O.pow_to_ord_den = det;
  Int gshare = det;
  for (const Int& v : O.pow_to_ord.a) {
    gshare = gcd(gshare, v);
    if (gshare == 1) break;
  }
  if (gshare > 1) {
    for (Int& v : O.pow_to_ord.a) v = divexact(v, gshare);
    O.pow_to_ord_den = divexact(O.pow_to_ord_den, gshare);
  }
  // multiplication table; products are den^2-scaled
  O.mult_table = IntMat(d * d, d);
  Int scale = O.pow_to_ord_den * O.den * O.den;
  for (long i = 0; i < d; ++i)
    for (long j = 0; j < d; ++j) {
      std::vector<Int> prod = row_product_reduced(K.g, O.basis.row(i), O.basis.row(j));
      for (long t = 0; t < d; ++t) {
        Int s = 0;
        for (long k = 0; k < d; ++k)
          if (prod[k] != 0) s += prod[k] * O.pow_to_ord.at(k, t);
        if (!divisible(s, scale)) throw ComputationError("eigen order not closed");
        O.mult_table.at(i * d + j, t) = divexact(s, scale);
      }
    }
  std::vector<Int> one_pow(d, Int(0));
  one_pow[0] = 1;
  {
    std::vector<Int> t(d, Int(0));
    for (long j = 0; j < d; ++j) t[j] = O.pow_to_ord.at(0, j);
    for (long j = 0; j < d; ++j) {
      if (!divisible(t[j], O.pow_to_ord_den))
        throw ComputationError("eigen order does not contain 1");
      t[j] = divexact(t[j], O.pow_to_ord_den);
    }
    O.one_coords = std::move(t);
  }
  return O;
}

// ---------------------------------------------------------------------------
// Hecke lattice

std::vector<Int> HeckeLattice::ambient_mul(const std::vector<Int>& x,
                                           const std::vector<Int>& y) const {
  std::vector<Int> out(rank);
  for (const Component& c : comps) {
    long d = c.order.degree;
    std::vector<Int> xa(x.begin() + c.offset, x.begin() + c.offset + d);
    std::vector<Int> ya(y.begin() + c.offset, y.begin() + c.offset + d);
    std::vector<Int> pa = c.order.mul_coords(xa, ya);
    for (long j = 0; j < d; ++j) out[c.offset + j] = pa[j];
  }
  return out;
}

std::vector<Int> HeckeLattice::t_mul(const std::vector<Int>& x, const std::vector<Int>& y) const {
  long n = rank;
  std::vector<Int> out(n);
  for (long i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (long j = 0; j < n; ++j) {
      if (y[j] == 0) continue;
      Int f = x[i] * y[j];
      const Int* row = &mult_table.a[(i * n + j) * n];
      for (long k = 0; k < n; ++k)
        if (row[k] != 0) out[k] += f * row[k];
    }
  }
  return out;
}

HeckeLattice build_hecke_lattice(NewformEngine& engine, long N, long bound_override) {
  validate_level_prime(N, 0);
  HeckeLattice T;
  T.N = N;
  T.bound = bound_override > 0 ? bound_override : sturm_limit(N);

  // components: all orbits at levels dividing N, with eigenvalue orders
  for (long M : divisors(N)) {
    LevelData& L = engine.level(M);
    if (L.orbits.empty()) continue;
    engine.ensure_eigenvalues(M, T.bound);
    for (size_t o = 0; o < L.orbits.size(); ++o) {
      HeckeLattice::Component comp;
      comp.level = M;
      comp.orbit = (long)o;
      comp.field = L.orbits[o].field;
      std::vector<FieldElement> gens;
      for (long ell : L.ells) {
        if (ell > T.bound || N % ell == 0) continue;
        FieldElement a;
        a.c = L.eigenvalue((long)o, ell);
        gens.push_back(std::move(a));
      }
      comp.order = eigen_order_closure(*comp.field, gens);
      comp.offset = T.rank;
      T.rank += comp.field->degree;
      T.comps.push_back(std::move(comp));
    }
  }
  if (T.rank == 0) throw ComputationError("no newform orbits at any level dividing N");

  // ambient coords of 1 and of the t_ell tuples
  std::vector<Int> one(T.rank);
  for (const auto& c : T.comps)
    for (long j = 0; j < c.order.degree; ++j) one[c.offset + j] = c.order.one_coords[j];

  std::vector<long> ells;
  for (long ell : primes_up_to(T.bound))
    if (N % ell != 0) ells.push_back(ell);

  std::vector<std::vector<Int>> tvecs;
  tvecs.reserve(ells.size());
  for (long ell : ells) {
    std::vector<Int> t(T.rank);
    for (const auto& c : T.comps) {
      LevelData& L = engine.level(c.level);
      FieldElement a;
      a.c = L.eigenvalue(c.orbit, ell);
      std::vector<Int> coords = c.order.element_coords(a);
      for (long j = 0; j < c.order.degree; ++j) t[c.offset + j] = coords[j];
    }
    tvecs.push_back(std::move(t));
  }

  // module span of {1, t_ell}, then closure under multiplication
  {
    IntMat rows((long)tvecs.size() + 1, T.rank);
    for (long j = 0; j < T.rank; ++j) rows.at(0, j) = one[j];
    for (size_t i = 0; i < tvecs.size(); ++i)
      for (long j = 0; j < T.rank; ++j) rows.at(1 + (long)i, j) = tvecs[i][j];
    T.basis = hnf(std::move(rows));
  }
  for (int round = 0; round < 256; ++round) {
    if (T.basis.m != T.rank)
      throw InvariantViolation("Hecke lattice is rank deficient: eigenvalue tuples do not span");
    HnfSolver solver(T.basis);
    std::vector<std::vector<Int>> extra;
    for (long i = 0; i < T.rank; ++i)
      for (long j = i; j < T.rank; ++j) {
        std::vector<Int> prod = T.ambient_mul(T.basis.row(i), T.basis.row(j));
        if (!solver.in_lattice(prod)) extra.push_back(std::move(prod));
      }
    if (extra.empty()) break;
    if (round == 255) throw ComputationError("hecke lattice closure: no stabilization");
    IntMat rows(T.rank + (long)extra.size(), T.rank);
    for (long i = 0; i < T.rank; ++i)
      for (long j = 0; j < T.rank; ++j) rows.at(i, j) = T.basis.at(i, j);
    for (size_t k = 0; k < extra.size(); ++k)
      for (long j = 0; j < T.rank; ++j) rows.at(T.rank + (long)k, j) = extra[k][j];
    T.basis = hnf(std::move(rows));
  }

  // T-coordinates of 1, the generators, and the multiplication table
  HnfSolver solver(T.basis);
  auto to_T = [&](const std::vector<Int>& v) {
    std::vector<Int> x;
    if (!solver.solve_hnf_int(v, x)) throw ComputationError("vector outside the Hecke lattice");
    return x;
  };
  T.one_coords = to_T(one);
  T.ells = ells;
  for (auto& t : tvecs) T.tgens.push_back(to_T(t));
  T.mult_table = IntMat(T.rank * T.rank, T.rank);
  for (long i = 0; i < T.rank; ++i)
    for (long j = i; j < T.rank; ++j) {
      std::vector<Int> prod = T.ambient_mul(T.basis.row(i), T.basis.row(j));
      std::vector<Int> x = to_T(prod);
      for (long k = 0; k < T.rank; ++k) {
        T.mult_table.at(i * T.rank + j, k) = x[k];
        T.mult_table.at(j * T.rank + i, k) = x[k];
      }
    }
  return T;
}

EisensteinIdealData eisenstein_ideal(const HeckeLattice& T) {
  long n = T.rank;
  // J = span of (t_ell - (1+ell)) * b over the T-basis; process generators
  // incrementally, keeping the span T-stable so membership implies closure
  IntMat jb(0, n);
  std::unique_ptr<HnfSolver> solver;
  auto contains = [&](const std::vector<Int>& v) {
    if (jb.m == 0) return false;
    return solver->in_lattice(v);
  };
  for (size_t idx = 0; idx < T.ells.size(); ++idx) {
    long ell = T.ells[idx];
    std::vector<Int> g = T.tgens[idx];
    for (long k = 0; k < n; ++k) g[k] -= Int(1 + ell) * T.one_coords[k];
    if (contains(g)) continue;
    // add g * basis_k for all k (these span the T-module generated by g)
    std::vector<std::vector<Int>> rows;
    std::vector<Int> ek(n, Int(0));
    for (long k = 0; k < n; ++k) {
      std::fill(ek.begin(), ek.end(), Int(0));
      ek[k] = 1;
      rows.push_back(T.t_mul(g, ek));
    }
    IntMat stack(jb.m + (long)rows.size(), n);
    for (long i = 0; i < jb.m; ++i)
      for (long j = 0; j < n; ++j) stack.at(i, j) = jb.at(i, j);
    for (size_t i = 0; i < rows.size(); ++i)
      for (long j = 0; j < n; ++j) stack.at(jb.m + (long)i, j) = rows[i][j];
    jb = hnf(std::move(stack));
    solver = std::make_unique<HnfSolver>(jb);
  }
  if (jb.m != n) throw ComputationError("Eisenstein ideal does not have finite index");
  EisensteinIdealData J;
  J.basis = jb;
  J.index_n0 = 1;
  for (long i = 0; i < n; ++i) J.index_n0 *= jb.at(i, i);
  // cyclicity cross-check: the least k with k*1 in J must equal det
  {
    HnfSolver s(J.basis);
    std::vector<Rat> x;
    if (!s.solve(T.one_coords, x)) throw ComputationError("1 not in Q-span of J");
    Int k0 = 1;
    for (const Rat& v : x) k0 = lcm(k0, Int(v.get_den()));
    if (k0 != J.index_n0)
      throw InvariantViolation("T/J is not cyclic of the expected order");
  }
  return J;
}

// ---------------------------------------------------------------------------
// local algebra at the Eisenstein maximal ideal, precision p^kappa

namespace {

// echelon module over Z/p^kappa with minimal-valuation pivots and full
// column elimination; supports length computation
struct PkModule {
  Int p, pk;
  long kappa, n;
  std::vector<std::vector<Int>> rows;
  std::vector<long> pivcol;
  std::vector<long> pivval;

  PkModule(Int p_, long kappa_, long n_) : p(std::move(p_)), kappa(kappa_), n(n_) {
    pk = pow(p, (unsigned long)kappa);
  }

  static long vp(const Int& x, const Int& p, long cap) {
    if (x == 0) return cap;
    long v = 0;
    Int y = x;
    while (v < cap && divisible(y, p)) {
      y = divexact(y, p);
      ++v;
    }
    return v;
  }

  long pivot_at(long col) const {
    for (size_t i = 0; i < rows.size(); ++i)
      if (pivcol[i] == col) return (long)i;
    return -1;
  }

  // Invariants kept: pivot columns distinct; each stored row's pivot entry is
  // exactly p^v; every stored row vanishes at the other pivot columns. These
  // make #span = prod p^(kappa - v_i), which length() relies on.
  void add_row(std::vector<Int> r) {
    for (Int& x : r) x = mod_floor(x, pk);
    // reduce against every existing pivot, swapping in when strictly better
    for (long col = 0; col < n; ++col) {
      if (r[col] == 0) continue;
      long pi = pivot_at(col);
      if (pi < 0) continue;
      long vr = vp(r[col], p, kappa);
      if (vr >= pivval[pi]) {
        Int coef = divexact(r[col], pow(p, (unsigned long)pivval[pi]));
        for (long j = 0; j < n; ++j) r[j] = mod_floor(r[j] - coef * rows[pi][j], pk);
      } else {
        // the incoming row carries a better pivot for this column
        std::vector<Int> old = std::move(rows[pi]);
        rows.erase(rows.begin() + pi);
        pivcol.erase(pivcol.begin() + pi);
        pivval.erase(pivval.begin() + pi);
        add_row(std::move(r));
        add_row(std::move(old));
        return;
      }
    }
    long lead = -1;
    for (long j = 0; j < n; ++j)
      if (r[j] != 0) {
        lead = j;
        break;
      }
    if (lead < 0) return;
    long vr = vp(r[lead], p, kappa);
    Int unit = divexact(r[lead], pow(p, (unsigned long)vr));
    Int uinv = invmod(mod_floor(unit, pk), pk);
    for (Int& x : r) x = mod_floor(x * uinv, pk);
    for (size_t i = 0; i < rows.size(); ++i) {
      Int& e = rows[i][lead];
      if (e == 0) continue;
      long ve = vp(e, p, kappa);
      if (ve < vr) throw ComputationError("PkModule: pivot valuation violated");
      Int coef = divexact(e, pow(p, (unsigned long)vr));
      for (long j = 0; j < n; ++j) rows[i][j] = mod_floor(rows[i][j] - coef * r[j], pk);
    }
    rows.push_back(std::move(r));
    pivcol.push_back(lead);
    pivval.push_back(vr);
  }

  long length() const {
    long s = 0;
    for (size_t i = 0; i < rows.size(); ++i) s += kappa - pivval[i];
    return s;
  }
};

struct LocalComputation {
  bool empty = false;
  long index_val = 0, nu = 0, mult = 0;
  bool stabilized = true;
};

LocalComputation local_at_precision(const HeckeLattice& T, const EisensteinIdealData& J, long p,
                                    long kappa) {
  LocalComputation out;
  long n = T.rank;
  Int P(p);
  Int pk = pow(P, (unsigned long)kappa);

  auto tmul_mod = [&](const std::vector<Int>& x, const std::vector<Int>& y) {
    std::vector<Int> r = T.t_mul(x, y);
    for (Int& v : r) v = mod_floor(v, pk);
    return r;
  };

  // J-bar and its stable power mod p
  auto echelon_p = [&](const std::vector<std::vector<Int>>& gens) {
    PkModule Mod(P, 1, n);
    for (auto& g : gens) Mod.add_row(g);
    return Mod;
  };
  std::vector<std::vector<Int>> jrows;
  for (long i = 0; i < n; ++i) jrows.push_back(J.basis.row(i));
  PkModule jbar = echelon_p(jrows);
  std::vector<std::vector<Int>> power = jbar.rows;
  long dim_prev = (long)power.size();
  for (int it = 0; it < n + 2; ++it) {
    std::vector<std::vector<Int>> prods;
    for (auto& x : power)
      for (auto& g : jbar.rows) {
        std::vector<Int> pr = T.t_mul(x, g);
        for (Int& v : pr) v = mod_floor(v, P);
        prods.push_back(std::move(pr));
      }
    PkModule nxt = echelon_p(prods);
    if ((long)nxt.rows.size() == dim_prev) {
      power = nxt.rows;
      break;
    }
    dim_prev = (long)nxt.rows.size();
    power = nxt.rows;
  }

  // identity e' of the idempotent ideal I = Jbar^infty (mod p)
  long k = (long)power.size();
  std::vector<Int> eprime(n, Int(0));
  if (k > 0) {
    // solve sum c_i power_i with e' * power_j = power_j
    long rows_n = k * n;
    std::vector<std::vector<Int>> M(rows_n, std::vector<Int>(k + 1, Int(0)));
    for (long jb = 0; jb < k; ++jb) {
      for (long i = 0; i < k; ++i) {
        std::vector<Int> pr = T.t_mul(power[i], power[jb]);
        for (long t = 0; t < n; ++t) M[jb * n + t][i] = mod_floor(pr[t], P);
      }
      for (long t = 0; t < n; ++t) M[jb * n + t][k] = mod_floor(power[jb][t], P);
    }
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
      Int inv = invmod(M[row][col], P);
      for (long j2 = col; j2 <= k; ++j2) M[row][j2] = mod_floor(M[row][j2] * inv, P);
      for (long i = 0; i < rows_n; ++i) {
        if (i == row || M[i][col] == 0) continue;
        Int f = M[i][col];
        for (long j2 = col; j2 <= k; ++j2) M[i][j2] = mod_floor(M[i][j2] - f * M[row][j2], P);
      }
      pivot_of_col[col] = row;
      ++row;
    }
    for (long i = row; i < rows_n; ++i)
      if (M[i][k] != 0) throw ComputationError("idempotent ideal has no identity");
    std::vector<Int> coef(k, Int(0));
    for (long col = 0; col < k; ++col)
      if (pivot_of_col[col] >= 0) coef[col] = M[pivot_of_col[col]][k];
    for (long i = 0; i < k; ++i)
      for (long t = 0; t < n; ++t) eprime[t] = mod_floor(eprime[t] + coef[i] * power[i][t], P);
  }
  // Eisenstein idempotent mod p, then Hensel to mod p^kappa
  std::vector<Int> e(n);
  for (long t = 0; t < n; ++t) e[t] = mod_floor(T.one_coords[t] - eprime[t], P);
  bool zero = true;
  for (const Int& v : e)
    if (v != 0) zero = false;
  if (zero) {
    out.empty = true;
    return out;
  }
  for (int it = 0; it < 64; ++it) {
    // e <- 3e^2 - 2e^3 mod p^kappa
    std::vector<Int> e2 = tmul_mod(e, e);
    std::vector<Int> e3 = tmul_mod(e2, e);
    std::vector<Int> nxt(n);
    for (long t = 0; t < n; ++t) nxt[t] = mod_floor(3 * e2[t] - 2 * e3[t], pk);
    bool same = nxt == e;
    e = std::move(nxt);
    if (same) break;
    if (it == 63) throw ComputationError("idempotent lifting did not stabilize");
  }
  {
    std::vector<Int> e2 = tmul_mod(e, e);
    if (e2 != e) throw ComputationError("lifted idempotent is not idempotent");
  }

  // local factor L = e*(T/p^kappa) and J_L = e*J
  PkModule L(P, kappa, n), JL(P, kappa, n);
  {
    std::vector<Int> ek(n, Int(0));
    for (long t = 0; t < n; ++t) {
      std::fill(ek.begin(), ek.end(), Int(0));
      ek[t] = 1;
      L.add_row(tmul_mod(e, ek));
    }
    for (long i = 0; i < n; ++i) JL.add_row(tmul_mod(e, J.basis.row(i)));
  }
  out.index_val = L.length() - JL.length();

  // nu = length(J_L / m J_L), m = (p*e, J_L)
  {
    PkModule mJ(P, kappa, n);
    for (auto& r : JL.rows) {
      std::vector<Int> pr(n);
      for (long t = 0; t < n; ++t) pr[t] = mod_floor(P * r[t], pk);
      mJ.add_row(std::move(pr));
    }
    for (auto& a : JL.rows)
      for (auto& b : JL.rows) mJ.add_row(tmul_mod(a, b));
    out.nu = JL.length() - mJ.length();
  }

  // Hilbert-Samuel: lengths of J^i L / J^(i+1) L until constant
  {
    std::vector<long> lens;  // length(L / J^i) differences
    PkModule cur = L;
    PkModule nxt(P, kappa, n);
    for (auto& r : JL.rows) nxt.add_row(std::vector<Int>(r));
    long prevH = -1;
    bool found = false;
    for (long i = 0; i + 2 < kappa && !found; ++i) {
      long H = cur.length() - nxt.length();
      if (H == prevH && i >= 1) {
        out.mult = H;
        found = true;
        break;
      }
      prevH = H;
      // advance: cur = J^i -> J^(i+1), nxt -> J^(i+2)
      PkModule nn(P, kappa, n);
      for (auto& a : nxt.rows)
        for (auto& b : JL.rows) nn.add_row(tmul_mod(a, b));
      cur = std::move(nxt);
      nxt = std::move(nn);
    }
    (void)lens;
    if (!found) {
      out.stabilized = false;
    }
  }
  return out;
}

}  // namespace

EisensteinLocalData eisenstein_local_data(const HeckeLattice& T, const EisensteinIdealData& J,
                                          long p) {
  long base_val = divisible(J.index_n0, Int(p)) ? valuation(J.index_n0, Int(p)) : 0;
  long kappa = base_val + 6;
  for (int attempt = 0; attempt < 4; ++attempt) {
    LocalComputation a = local_at_precision(T, J, p, kappa);
    if (a.empty) {
      EisensteinLocalData out;
      out.p = p;
      out.kappa = kappa;
      out.empty = true;
      return out;
    }
    LocalComputation b = local_at_precision(T, J, p, kappa + 2);
    if (a.stabilized && b.stabilized && a.index_val == b.index_val && a.nu == b.nu &&
        a.mult == b.mult) {
      if (a.index_val != base_val)
        throw InvariantViolation("local Eisenstein index disagrees with val_p(#T/J)");
      EisensteinLocalData out;
      out.p = p;
      out.kappa = kappa;
      out.empty = false;
      out.index_val = a.index_val;
      out.min_generators = a.nu;
      out.multiplicity = a.mult;
      return out;
    }
    kappa += 4;
  }
  throw ComputationError("eisenstein_local_data: precision did not stabilize");
}

void complete_report(NewformEngine& engine, DepthReport& rep, long bound_override) {
  HeckeLattice T = build_hecke_lattice(engine, rep.N, bound_override);
  EisensteinIdealData J = eisenstein_ideal(T);
  EisensteinLocalData loc = eisenstein_local_data(T, J, rep.p);

  rep.index_computed = true;
  rep.index_n0 = J.index_n0;
  rep.index_val = loc.empty ? 0 : loc.index_val;
  rep.multiplicity = loc.empty ? 0 : loc.multiplicity;
  rep.min_generators = loc.empty ? 0 : loc.min_generators;

  if (loc.empty) {
    if (rep.depth != 0)
      throw InvariantViolation("congruences found but the local Eisenstein factor is empty");
    rep.verdict = "no Eisenstein congruence mod p (trivial local factor)";
    return;
  }
  if (rep.depth < rep.index_val) {
    if (rep.p >= 5)
      throw InvariantViolation("depth below val_p(#T/J): contradicts the index inequality");
    rep.verdict = "depth below index valuation (p = 3: inequality not guaranteed)";
    return;
  }
  bool principal = rep.depth == rep.index_val;
  rep.verdict = principal ? "locally principal" : "NOT locally principal";
  if (rep.p >= 5) {
    if (principal != (rep.min_generators == 1))
      throw InvariantViolation("principality verdict disagrees with Nakayama generator count");
    if (rep.multiplicity != rep.depth)
      throw InvariantViolation("Hilbert-Samuel multiplicity differs from the congruence depth");
  }
}

}  // namespace eis
