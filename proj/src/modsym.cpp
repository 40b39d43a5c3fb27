#include "eisdepth/modsym.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace eis {

// ---------------------------------------------------------------------------
// dimension formula for Gamma_0(M)

Gamma0Invariants gamma0Invariants_impl(long M) {
  Gamma0Invariants I;
  auto qs = prime_factors(M);
  I.mu = M;
  for (long q : qs) I.mu = I.mu / q * (q + 1);
  if (M % 4 == 0) {
    I.nu2 = 0;
  } else {
    I.nu2 = 1;
    for (long q : qs) {
      if (q == 2) continue;
      I.nu2 *= (q % 4 == 1) ? 2 : 0;
    }
  }
  if (M % 9 == 0) {
    I.nu3 = 0;
  } else {
    I.nu3 = 1;
    for (long q : qs) {
      if (q == 3) continue;
      I.nu3 *= (q % 3 == 1) ? 2 : 0;
    }
  }
  I.nu_inf = 0;
  for (long d : divisors(M)) I.nu_inf += euler_phi(std::gcd(d, M / d));
  // 12*g = 12 + mu - 3*nu2 - 4*nu3 - 6*nu_inf
  long twelve_g = 12 + I.mu - 3 * I.nu2 - 4 * I.nu3 - 6 * I.nu_inf;
  if (twelve_g % 12 != 0) throw ComputationError("genus formula: non-integral result");
  I.genus = twelve_g / 12;
  return I;
}

Gamma0Invariants gamma0_invariants(long M) {
  if (M < 1) throw ComputationError("gamma0_invariants: M < 1");
  return gamma0Invariants_impl(M);
}

// ---------------------------------------------------------------------------
// P^1(Z/M)

namespace {

// canonical representative of (c:d) in P^1(Z/M); assumes gcd(c,d,M) = 1
std::pair<long, long> p1_normalize(long c, long d, long M) {
  if (M == 1) return {0, 0};
  c %= M;
  if (c < 0) c += M;
  d %= M;
  if (d < 0) d += M;
  if (c == 0) return {0, 1};
  long g = std::gcd(c, M);
  long c1 = c / g;
  long Mg = M / g;
  // u = c1^{-1} mod M/g, lifted to a unit mod M
  long u = 1;
  {
    long t0 = 0, t1 = 1, r0 = Mg, r1 = c1 % Mg;
    while (r1 != 0) {
      long q = r0 / r1;
      long tmp = t0 - q * t1;
      t0 = t1;
      t1 = tmp;
      tmp = r0 - q * r1;
      r0 = r1;
      r1 = tmp;
    }
    u = ((t0 % Mg) + Mg) % Mg;
    if (u == 0) u = Mg;  // only when Mg == 1
    while (std::gcd(u, M) != 1) u += Mg;
  }
  long d1 = (long)((__int128)u * d % M);
  // minimize over the stabilizer v = 1 + s*(M/g), gcd(v, M) = 1
  long dmin = d1;
  for (long s = 1; s < g; ++s) {
    long v = 1 + s * Mg;
    if (std::gcd(v % M, M) != 1) continue;
    long d2 = (long)((__int128)v * d1 % M);
    if (d2 < dmin) dmin = d2;
  }
  return {g, dmin};
}

}  // namespace

P1 P1::build(long M) {
  P1 out;
  out.M = M;
  out.table.assign(M * M, -1);
  std::map<std::pair<long, long>, long> seen;
  for (long c = 0; c < M; ++c)
    for (long d = 0; d < M; ++d) {
      long g = std::gcd(std::gcd(c, d), M);
      if (M > 1 && g != 1) continue;
      auto nf = p1_normalize(c, d, M);
      auto it = seen.find(nf);
      long idx;
      if (it == seen.end()) {
        idx = (long)out.reps.size();
        out.reps.push_back(nf);
        seen.emplace(nf, idx);
      } else {
        idx = it->second;
      }
      out.table[c * M + d] = (int32_t)idx;
    }
  if (M == 1) {
    out.reps = {{0, 0}};
    out.table.assign(1, 0);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Heilbronn families

std::vector<Mat22> heilbronn_cremona(long p) {
  // Cremona, Algorithms for Modular Elliptic Curves, ch. 2.4
  std::vector<Mat22> out;
  out.push_back({1, 0, 0, p});
  if (p == 2) {
    out.push_back({2, 0, 0, 1});
    out.push_back({2, 1, 0, 1});
    out.push_back({1, 0, 1, 2});
    return out;
  }
  for (long r = -(p - 1) / 2; r <= (p - 1) / 2; ++r) {
    int64_t x1 = p, x2 = -r, y1 = 0, y2 = 1;
    int64_t a = -p, b = r;
    out.push_back({x1, x2, y1, y2});
    while (b != 0) {
      // nearest integer quotient
      int64_t q;
      {
        int64_t bb = b > 0 ? b : -b;
        int64_t fd = a >= 0 ? a / bb : -((-a + bb - 1) / bb);
        int64_t rem = a - fd * bb;
        q = fd + (2 * rem > bb ? 1 : 0);
        if (b < 0) q = -q;
      }
      int64_t c = a - b * q;
      a = -b;
      b = c;
      int64_t x3 = q * x2 - x1;
      x1 = x2;
      x2 = x3;
      int64_t y3 = q * y2 - y1;
      y1 = y2;
      y2 = y3;
      out.push_back({x1, x2, y1, y2});
    }
  }
  return out;
}

std::vector<Mat22> heilbronn_merel(long n) {
  // Merel's set {(a,b;c,d): det = n, a > b >= 0, d > c >= 0}
  std::vector<Mat22> out;
  for (long a = 1; a <= n; ++a) {
    long q = n / a;
    if (q * a == n) {
      long d = q;
      for (long b = 0; b < a; ++b) out.push_back({a, b, 0, d});
      for (long c = 1; c < d; ++c) out.push_back({a, 0, c, d});
    }
    for (long d = q + 1; d <= n; ++d) {
      long bc = a * d - n;
      for (long c = bc / a + 1; c < d; ++c) {
        if (bc % c == 0 && bc / c < a) out.push_back({a, bc / c, c, d});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// presentation

namespace {

struct SignedUF {
  std::vector<long> parent;
  std::vector<int> sign;  // gen_i = sign * gen_parent
  std::vector<bool> dead;

  explicit SignedUF(long n) : parent(n), sign(n, 1), dead(n, false) {
    std::iota(parent.begin(), parent.end(), 0);
  }

  std::pair<long, int> find(long i) {
    if (parent[i] == i) return {i, 1};
    auto [r, s] = find(parent[i]);
    parent[i] = r;
    sign[i] *= s;
    return {r, sign[i]};
  }

  // gen_i = s * gen_j
  void unite(long i, long j, int s) {
    auto [ri, si] = find(i);
    auto [rj, sj] = find(j);
    if (ri == rj) {
      if (si != s * sj) dead[ri] = true;
      return;
    }
    parent[ri] = rj;
    sign[ri] = si * s * sj;
    if (dead[ri]) dead[rj] = true;
  }
};

}  // namespace

ManinPresentation ManinPresentation::build(long M, bool star_quotient) {
  if (!is_squarefree(M)) throw ComputationError("ManinPresentation: level must be squarefree");
  ManinPresentation P;
  P.M = M;
  P.star_quotient = star_quotient;
  P.p1 = P1::build(M);
  long m = P.p1.size();

  auto act = [&](long i, long a, long b, long c, long d) {
    auto [x, y] = P.p1.reps[i];
    return P.p1.index_of(x * a + y * c, x * b + y * d);
  };

  SignedUF uf(m);
  for (long i = 0; i < m; ++i) {
    // sigma = [0,-1;1,0]: x + x*sigma = 0
    uf.unite(i, act(i, 0, -1, 1, 0), -1);
    if (star_quotient) {
      // eta = [-1,0;0,1]: x = x*eta in the star quotient
      uf.unite(i, act(i, -1, 0, 0, 1), 1);
    }
  }
  // live roots get column ids
  std::vector<long> root_col(m, -1);
  long ncols = 0;
  for (long i = 0; i < m; ++i) {
    auto [r, s] = uf.find(i);
    (void)s;
    if (!uf.dead[r] && root_col[r] < 0) root_col[r] = ncols++;
  }

  // 3-term relations on the surviving roots, eliminated over Q
  std::map<long, std::map<long, Rat>> pivots;  // pivot col -> row (col -> coeff)
  auto reduce_row = [&](std::map<long, Rat>& row) {
    for (;;) {
      if (row.empty()) return;
      auto it = row.begin();
      auto pit = pivots.find(it->first);
      if (pit == pivots.end()) return;
      Rat f = it->second;
      for (const auto& [col, coef] : pit->second) {
        auto r2 = row.find(col);
        if (r2 == row.end())
          row.emplace(col, -f * coef);
        else {
          r2->second -= f * coef;
          if (r2->second == 0) row.erase(r2);
        }
      }
      row.erase(it->first);
    }
  };

  for (long i = 0; i < m; ++i) {
    long it1 = act(i, 0, -1, 1, -1);   // tau = [0,-1;1,-1]
    long it2 = act(it1, 0, -1, 1, -1);
    std::map<long, Rat> row;
    for (long j : {i, it1, it2}) {
      auto [r, s] = uf.find(j);
      if (uf.dead[r]) continue;
      row[root_col[r]] += s;
      if (row[root_col[r]] == 0) row.erase(root_col[r]);
    }
    reduce_row(row);
    if (row.empty()) continue;
    // normalize on the smallest column and record as a pivot
    long pc = row.begin()->first;
    Rat inv = 1 / row.begin()->second;
    std::map<long, Rat> norm;
    for (auto& [col, coef] : row)
      if (col != pc) norm[col] = coef * inv;
    // eliminate pc from existing pivot rows
    for (auto& [opc, orow] : pivots) {
      auto hit = orow.find(pc);
      if (hit == orow.end()) continue;
      Rat f = hit->second;
      orow.erase(hit);
      for (auto& [col, coef] : norm) {
        orow[col] -= f * coef;
        if (orow[col] == 0) orow.erase(col);
      }
    }
    pivots.emplace(pc, std::move(norm));
  }

  // free columns = live roots that are not pivots
  std::vector<long> col_to_free(ncols, -1);
  long dim = 0;
  for (long c = 0; c < ncols; ++c)
    if (pivots.find(c) == pivots.end()) col_to_free[c] = dim++;

  // rational coordinates of each generator
  std::vector<std::map<long, Rat>> gen_q(m);
  for (long i = 0; i < m; ++i) {
    auto [r, s] = uf.find(i);
    if (uf.dead[r]) continue;
    long c = root_col[r];
    auto pit = pivots.find(c);
    if (pit == pivots.end()) {
      gen_q[i][col_to_free[c]] += s;
    } else {
      // root_c = -sum coef * col
      for (auto& [col, coef] : pit->second) {
        long fc = col_to_free[col];
        if (fc < 0) throw ComputationError("presentation: pivot row references pivot column");
        gen_q[i][fc] -= Rat(s) * coef;
      }
    }
  }

  // integral rebase: lattice generated by the generator images becomes Z^dim
  Int den = 1;
  for (auto& row : gen_q)
    for (auto& [c, v] : row) den = lcm(den, Int(v.get_den()));
  IntMat Qz(m, dim);
  for (long i = 0; i < m; ++i)
    for (auto& [c, v] : gen_q[i]) {
      Rat scaled = v * Rat(den);
      Qz.at(i, c) = scaled.get_num();
    }
  auto [H, U] = hnf_transform(Qz);
  long rank = 0;
  for (long i = 0; i < H.m; ++i) {
    bool nz = false;
    for (long j = 0; j < H.n; ++j)
      if (H.at(i, j) != 0) nz = true;
    if (nz) ++rank;
  }
  if (rank != dim) throw ComputationError("presentation: generators do not span");
  IntMat Hb(dim, dim);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < dim; ++j) Hb.at(i, j) = H.at(i, j);
  HnfSolver hb_solver(Hb);
  P.dim = dim;
  P.gen_coords.assign(m, {});
  for (long i = 0; i < m; ++i) {
    std::vector<Int> x;
    if (!hb_solver.solve_hnf_int(Qz.row(i), x))
      throw ComputationError("presentation: generator outside lattice");
    P.gen_coords[i] = std::move(x);
  }
  P.basis_from_gens = IntMat(dim, m);
  for (long i = 0; i < dim; ++i)
    for (long j = 0; j < m; ++j) P.basis_from_gens.at(i, j) = U.at(i, j);

  // int64 fast copy
  {
    bool fits = true;
    for (auto& row : P.gen_coords)
      for (auto& v : row)
        if (!v.fits_slong_p()) fits = false;
    if (fits) {
      P.gen_coords_i64_.assign((size_t)m * dim, 0);
      for (long i = 0; i < m; ++i)
        for (long j = 0; j < dim; ++j) P.gen_coords_i64_[i * dim + j] = P.gen_coords[i][j].get_si();
    }
  }

  // boundary: cusp class of a/c for squarefree M is gcd(c, M)
  P.cusp_divisors = divisors(M);
  long nc = (long)P.cusp_divisors.size();
  auto cusp_col = [&](long g) {
    auto it = std::lower_bound(P.cusp_divisors.begin(), P.cusp_divisors.end(), g);
    return (long)(it - P.cusp_divisors.begin());
  };
  IntMat Dg(m, nc);
  for (long i = 0; i < m; ++i) {
    auto [c, d] = P.p1.reps[i];
    Dg.at(i, cusp_col(std::gcd(c, M))) += 1;
    Dg.at(i, cusp_col(std::gcd(d, M))) -= 1;
  }
  P.boundary = mul(P.basis_from_gens, Dg);
  // well-definedness: every generator's coords must reproduce its boundary
  for (long i = 0; i < m; ++i) {
    std::vector<Int> chk = mul_row(P.gen_coords[i], P.boundary);
    for (long j = 0; j < nc; ++j)
      if (chk[j] != Dg.at(i, j)) throw ComputationError("presentation: boundary not well-defined");
  }

  P.cuspidal_basis = left_kernel(P.boundary);
  Gamma0Invariants inv = gamma0_invariants(M);
  long expect_dim = star_quotient ? inv.genus + inv.nu_inf - 1 : 2 * inv.genus + inv.nu_inf - 1;
  if (P.dim != expect_dim)
    throw InvariantViolation("modular symbol space dimension disagrees with the genus formula");
  long expect_cusp = star_quotient ? inv.genus : 2 * inv.genus;
  if (P.cuspidal_basis.m != expect_cusp)
    throw InvariantViolation("cuspidal dimension disagrees with the genus formula");
  P.cuspidal_solver_ = std::make_unique<HnfSolver>(P.cuspidal_basis);
  return P;
}

void ManinPresentation::heilbronn_counts(const std::vector<Mat22>& H, long gen_index,
                                         std::vector<int64_t>& counts) const {
  counts.assign(p1.size(), 0);
  auto [c, d] = p1.reps[gen_index];
  long Mv = M;
  if (Mv == 1) {
    counts[0] = (int64_t)H.size();
    return;
  }
  for (const Mat22& h : H) {
    long ha = (long)(((h.a % Mv) + Mv) % Mv), hb = (long)(((h.b % Mv) + Mv) % Mv);
    long hc = (long)(((h.c % Mv) + Mv) % Mv), hd = (long)(((h.d % Mv) + Mv) % Mv);
    long cc = (c * ha + d * hc) % Mv;
    long dd = (c * hb + d * hd) % Mv;
    int32_t idx = p1.table[cc * Mv + dd];
    if (idx >= 0) ++counts[idx];
  }
}

std::vector<Int> ManinPresentation::project_counts(const std::vector<int64_t>& counts) const {
  std::vector<Int> img(dim, Int(0));
  if (!gen_coords_i64_.empty()) {
    std::vector<__int128> acc(dim, 0);
    long m = p1.size();
    for (long i = 0; i < m; ++i) {
      int64_t cnt = counts[i];
      if (cnt == 0) continue;
      const int64_t* row = &gen_coords_i64_[i * dim];
      for (long j = 0; j < dim; ++j) acc[j] += (__int128)cnt * row[j];
    }
    for (long j = 0; j < dim; ++j) {
      __int128 v = acc[j];
      bool negv = v < 0;
      unsigned __int128 uv = negv ? (unsigned __int128)(-v) : (unsigned __int128)v;
      Int hi((unsigned long)(uv >> 64)), lo((unsigned long)(uv & 0xffffffffffffffffULL));
      Int r = (hi << 64) + lo;
      img[j] = negv ? Int(-r) : r;
    }
    return img;
  }
  for (long i = 0; i < p1.size(); ++i) {
    if (counts[i] == 0) continue;
    Int cnt((long)counts[i]);
    for (long j = 0; j < dim; ++j) img[j] += cnt * gen_coords[i][j];
  }
  return img;
}

std::vector<Int> ManinPresentation::hecke_single(long gen_index, long ell) const {
  if (M % ell == 0) throw ComputationError("hecke: ell divides the level");
  auto H = heilbronn_cremona(ell);
  std::vector<int64_t> counts;
  heilbronn_counts(H, gen_index, counts);
  return project_counts(counts);
}

IntMat ManinPresentation::matrix_from_gen_images(const std::vector<std::vector<Int>>& images) const {
  IntMat imgs(p1.size(), dim);
  for (long i = 0; i < p1.size(); ++i)
    for (long j = 0; j < dim; ++j) imgs.at(i, j) = images[i][j];
  return mul(basis_from_gens, imgs);
}

IntMat ManinPresentation::hecke_matrix(long ell) const {
  if (M % ell == 0) throw ComputationError("hecke: ell divides the level");
  auto H = heilbronn_cremona(ell);
  std::vector<std::vector<Int>> images(p1.size());
  std::vector<int64_t> counts;
  for (long i = 0; i < p1.size(); ++i) {
    heilbronn_counts(H, i, counts);
    images[i] = project_counts(counts);
  }
  return matrix_from_gen_images(images);
}

IntMat ManinPresentation::star_matrix() const {
  std::vector<std::vector<Int>> images(p1.size());
  for (long i = 0; i < p1.size(); ++i) {
    auto [c, d] = p1.reps[i];
    long j = p1.index_of(-c, d);
    images[i] = gen_coords[j];
  }
  return matrix_from_gen_images(images);
}

IntMat ManinPresentation::restrict_to_cuspidal(const IntMat& A) const {
  long g = cuspidal_basis.m;
  IntMat R(g, g);
  for (long i = 0; i < g; ++i) {
    std::vector<Int> v = mul_row(cuspidal_basis.row(i), A);
    std::vector<Int> x;
    if (!cuspidal_solver_->solve_hnf_int(v, x))
      throw ComputationError("restriction: image leaves the cuspidal lattice");
    for (long j = 0; j < g; ++j) R.at(i, j) = x[j];
  }
  return R;
}

// ---------------------------------------------------------------------------
// slow coset-definition Hecke operator (test oracle) and path symbols

namespace {

struct Cusp {
  Int num, den;  // den = 0 -> infinity
};

}  // namespace

std::vector<Int> ManinPresentation::path_symbol(const Int& a1, const Int& b1, const Int& a2,
                                                const Int& b2) const {
  // {a1/b1, a2/b2} = {inf, a2/b2} - {inf, a1/b1}
  auto cf_path = [&](const Int& pnum, const Int& pden) {
    std::vector<Int> acc(dim, Int(0));
    if (pden == 0) return acc;
    // convergents of pnum/pden via floor continued fractions
    Int p = pnum, q = pden;
    if (q < 0) {
      p = -p;
      q = -q;
    }
    Int pk1 = 1, qk1 = 0;  // p_{-1}/q_{-1} = infinity
    Int pk = 0, qk = 0;
    bool first = true;
    long k = 0;
    while (q != 0) {
      Int a = fdiv(p, q);
      Int r = p - a * q;
      Int pnew = first ? a : Int(a * pk + pk1);
      Int qnew = first ? Int(1) : Int(a * qk + qk1);
      if (!first) {
        pk1 = pk;
        qk1 = qk;
      }
      pk = pnew;
      qk = qnew;
      // step {p_{k-1}/q_{k-1} -> p_k/q_k}; det p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1)
      Int det = pk * qk1 - pk1 * qk;
      Int bb = pk1, dd = qk1;
      if (det == -1) {
        bb = -bb;
        dd = -dd;
      } else if (det != 1) {
        throw ComputationError("path_symbol: non-unimodular step");
      }
      // Manin symbol with bottom row (q_k, +-q_{k-1})
      long cmod = (long)mod_floor(qk, Int(M)).get_si();
      long dmod = (long)mod_floor(dd, Int(M)).get_si();
      long idx = p1.index_of(cmod, dmod);
      if (idx >= 0)
        for (long j = 0; j < dim; ++j) acc[j] += gen_coords[idx][j];
      p = q;
      q = r;
      first = false;
      ++k;
    }
    (void)k;
    return acc;
  };
  std::vector<Int> out = cf_path(a2, b2);
  std::vector<Int> sub = cf_path(a1, b1);
  for (long j = 0; j < dim; ++j) out[j] -= sub[j];
  return out;
}

std::vector<Int> ManinPresentation::hecke_coset_oracle(long gen_index, long ell) const {
  if (M % ell == 0) throw ComputationError("hecke: ell divides the level");
  // lift the generator to an SL2(Z) matrix [a,b;c,d]
  auto [c0, d0] = p1.reps[gen_index];
  long c = c0, d = d0;
  if (M == 1) {
    c = 0;
    d = 1;
  }
  if (c == 0 && d == 0) throw ComputationError("bad generator");
  long t = 0;
  while (std::gcd(c, d + t * M) != 1 && t < 4 * M + 4) ++t;
  d = d + t * M;
  if (std::gcd(c, d) != 1) throw ComputationError("lift failed");
  Int aI, bI;
  {
    Int u, v;
    Int g = gcdext(Int(d), Int(-c), u, v);
    if (g != 1) throw ComputationError("lift failed");
    aI = u;  // a*d - b*c = 1
    bI = v;
  }
  // modular symbol {b/d, a/c}
  Cusp alpha{bI, Int(d)}, beta{aI, Int(c)};
  std::vector<Int> out(dim, Int(0));
  auto add_path = [&](const Cusp& x, const Cusp& y) {
    std::vector<Int> part = path_symbol(x.num, x.den, y.num, y.den);
    for (long j = 0; j < dim; ++j) out[j] += part[j];
  };
  // T_ell {alpha,beta} = {ell*alpha, ell*beta} + sum_j {(alpha+j)/ell, (beta+j)/ell}
  add_path(Cusp{ell * alpha.num, alpha.den}, Cusp{ell * beta.num, beta.den});
  for (long j = 0; j < ell; ++j) {
    Cusp xa{alpha.num + j * alpha.den, ell * alpha.den};
    Cusp xb{beta.num + j * beta.den, ell * beta.den};
    add_path(xa, xb);
  }
  return out;
}

}  // namespace eis
