#include "eisdepth/newform.hpp"

#include <algorithm>
#include <random>
#include <thread>

namespace eis {

long LevelData::ell_index(long ell) const {
  auto it = std::lower_bound(ells.begin(), ells.end(), ell);
  if (it == ells.end() || *it != ell) return -1;
  return (long)(it - ells.begin());
}

const std::vector<Rat>& LevelData::eigenvalue(long orbit, long ell) const {
  long idx = ell_index(ell);
  if (idx < 0) throw ComputationError("eigenvalue not cached for this prime");
  return eigen[orbit][idx];
}

NewformEngine::NewformEngine(std::string cache_dir, unsigned long seed, int threads)
    : cache_dir_(std::move(cache_dir)), seed_(seed), threads_(threads) {
  if (threads_ <= 0) threads_ = (int)std::max(1u, std::thread::hardware_concurrency());
}

FieldElement NewformEngine::eigenvalue(const LevelData& L, long orbit, long ell) const {
  const auto& coords = L.eigenvalue(orbit, ell);
  FieldElement a;
  a.c = coords;
  return a;
}

namespace {

std::vector<long> first_valid_primes(long M, long count) {
  std::vector<long> out;
  long bound = 64;
  while ((long)out.size() < count) {
    out.clear();
    for (long p : primes_up_to(bound))
      if (M % p != 0) out.push_back(p);
    bound *= 2;
  }
  out.resize(count);
  return out;
}

// evaluate a monic polynomial at a matrix (Horner)
IntMat poly_at_matrix(const UniPoly& f, const IntMat& A) {
  long n = A.m;
  IntMat R(n, n);
  for (long k = f.degree(); k >= 0; --k) {
    R = mul(R, A);
    for (long i = 0; i < n; ++i) R.at(i, i) += f.c[k];
  }
  return R;
}

// K-vector: entries are residues mod g, stored as QPoly
using KVec = std::vector<QPoly>;

// left eigenvector of the integer matrix R (minpoly g, irreducible) for the
// eigenvalue theta, over K = Q[x]/(g): x = y * h(R) with h = g/(t - theta)
KVec left_eigenvector_over_K(const IntMat& R, const UniPoly& g) {
  long d = R.m;
  long deg = g.degree();
  // h coefficients in K: h_{deg-1} = 1; h_{j-1} = g_j + theta*h_j
  std::vector<QPoly> h(deg);
  h[deg - 1] = {Rat(1)};
  QPoly theta = {Rat(0), Rat(1)};
  QPoly gq = qfrom(g);
  for (long j = deg - 1; j >= 1; --j) {
    QPoly t = qmul(theta, h[j]);
    t = qdivrem(t, gq).second;
    QPoly gj = {Rat(g.c[j])};
    h[j - 1] = qadd(t, gj);
  }
  for (long ytry = 0; ytry < d; ++ytry) {
    // x = y * h(R) via Horner: x <- x*R + h_j*y
    KVec x(d);
    for (long j = deg - 1; j >= 0; --j) {
      if (j < deg - 1) {
        // x <- x * R
        KVec nx(d);
        for (long c = 0; c < d; ++c) {
          QPoly acc;
          for (long r = 0; r < d; ++r) {
            if (R.at(r, c) == 0 || x[r].empty()) continue;
            QPoly scaled = x[r];
            for (Rat& v : scaled) v *= Rat(R.at(r, c));
            acc = qadd(acc, scaled);
          }
          nx[c] = std::move(acc);
        }
        x = std::move(nx);
      }
      // x_ytry += h_j
      x[ytry] = qadd(x[ytry], h[j]);
    }
    bool nonzero = false;
    for (auto& e : x)
      if (!e.empty()) nonzero = true;
    if (nonzero) return x;
  }
  throw ComputationError("left_eigenvector_over_K: no nonzero eigenvector");
}

// integer matrix (rows x cols) from a K-vector of length rows: col t holds
// the theta^t coefficient, scaled to clear denominators
IntMat clear_denominators(const std::vector<QPoly>& v, long deg) {
  Int den = 1;
  for (const auto& e : v)
    for (const Rat& x : e) den = lcm(den, Int(x.get_den()));
  IntMat out((long)v.size(), deg);
  for (long i = 0; i < (long)v.size(); ++i)
    for (long t = 0; t < (long)v[i].size(); ++t) {
      Rat scaled = v[i][t] * Rat(den);
      out.at(i, t) = scaled.get_num();
    }
  return out;
}

// restriction of A^T to the saturated lattice spanned by the rows of B
// (each row of B maps into the row span under x -> x*A)
IntMat restrict_rows(const IntMat& B, const IntMat& A) {
  HnfSolver solver(B);
  IntMat R(B.m, B.m);
  for (long i = 0; i < B.m; ++i) {
    std::vector<Int> v = mul_row(B.row(i), A);
    std::vector<Rat> y;
    if (!solver.solve(v, y)) throw ComputationError("restrict_rows: not invariant");
    for (long j = 0; j < B.m; ++j) {
      if (y[j].get_den() != 1) throw ComputationError("restrict_rows: not integral");
      R.at(i, j) = y[j].get_num();
    }
  }
  return R;
}

struct OrbitBuildData {
  UniPoly g;
  IntMat dual_w;
  long pair_gen;
  std::vector<Int> pair_den;
  QPoly pair_den_inv;
  IntMat right_v;
};

// dual eigenvector data for one new factor g of the generic operator
OrbitBuildData build_orbit_vectors(const ManinPresentation& pres, const IntMat& AT,
                                   const IntMat& ST, const UniPoly& g) {
  OrbitBuildData out;
  out.g = g;
  long deg = g.degree();

  // dual side: {w : g(AT) w = 0} = left kernel of g(AT)^T
  IntMat N = poly_at_matrix(g, AT);
  IntMat W = left_kernel(N.transpose());
  if (W.m != deg) throw ComputationError("dual eigenspace has wrong dimension");
  // action of AT^T on W
  IntMat R = restrict_rows(W, AT.transpose());
  KVec x = left_eigenvector_over_K(R, g);
  // w = x * W, as a K-vector over quotient coords
  std::vector<QPoly> w(pres.dim);
  QPoly gq = qfrom(g);
  for (long col = 0; col < pres.dim; ++col) {
    QPoly acc;
    for (long t = 0; t < deg; ++t) {
      if (W.at(t, col) == 0 || x[t].empty()) continue;
      QPoly scaled = x[t];
      for (Rat& v : scaled) v *= Rat(W.at(t, col));
      acc = qadd(acc, scaled);
    }
    w[col] = std::move(acc);
  }
  out.dual_w = clear_denominators(w, deg);

  // pairing generator
  out.pair_gen = -1;
  for (long b = 0; b < pres.p1.size(); ++b) {
    std::vector<Int> D(deg, Int(0));
    const auto& gc = pres.gen_coords[b];
    bool nz = false;
    for (long t = 0; t < deg; ++t) {
      Int s = 0;
      for (long col = 0; col < pres.dim; ++col)
        if (gc[col] != 0 && out.dual_w.at(col, t) != 0) s += gc[col] * out.dual_w.at(col, t);
      D[t] = s;
      if (s != 0) nz = true;
    }
    if (nz) {
      out.pair_gen = b;
      out.pair_den = std::move(D);
      break;
    }
  }
  if (out.pair_gen < 0) throw ComputationError("no generator pairs with the dual eigenvector");
  {
    QPoly Dq(out.pair_den.size());
    for (size_t t = 0; t < out.pair_den.size(); ++t) Dq[t] = Rat(out.pair_den[t]);
    qtrim(Dq);
    out.pair_den_inv = qinvmod(Dq, gq);
  }

  // eigenvector over K in the cuspidal space: {v : v g(ST) = 0}
  IntMat Nv = poly_at_matrix(g, ST);
  IntMat V = left_kernel(Nv);
  if (V.m != deg) throw ComputationError("eigenspace has wrong dimension");
  IntMat Rv = restrict_rows(V, ST);
  KVec xv = left_eigenvector_over_K(Rv, g);
  // v = xv * V
  std::vector<QPoly> v(ST.m);
  for (long col = 0; col < ST.m; ++col) {
    QPoly acc;
    for (long t = 0; t < deg; ++t) {
      if (V.at(t, col) == 0 || xv[t].empty()) continue;
      QPoly scaled = xv[t];
      for (Rat& s : scaled) s *= Rat(V.at(t, col));
      acc = qadd(acc, scaled);
    }
    v[col] = std::move(acc);
  }
  out.right_v = clear_denominators(v, deg);
  return out;
}

}  // namespace

LevelData& NewformEngine::level(long M) {
  auto it = levels_.find(M);
  if (it != levels_.end()) return it->second;
  for (long d : divisors(M))
    if (d < M && levels_.find(d) == levels_.end()) level(d);
  decompose(M);
  return levels_.at(M);
}

void NewformEngine::decompose(long M) {
  LevelData L;
  L.level = M;
  if (!load_cache(M, L)) {
    L.pres = std::make_shared<ManinPresentation>(ManinPresentation::build(M));
    long genus = L.pres->cuspidal_dim();

    long old_dim = 0;
    for (long d : divisors(M)) {
      if (d == M) continue;
      old_dim += divisors(M / d).size() * levels_.at(d).new_dim;
    }
    L.new_dim = genus - old_dim;
    if (L.new_dim < 0) throw ComputationError("decompose: negative new dimension");

    if (L.new_dim > 0) {
      // generic operator: random small combination of the first 6 valid primes
      std::vector<long> comb_ells = first_valid_primes(M, 6);
      // lower-level eigenvalues at those primes
      long need = *std::max_element(comb_ells.begin(), comb_ells.end());
      for (long d : divisors(M))
        if (d < M && levels_.at(d).new_dim > 0) ensure_eigenvalues(d, need);

      std::vector<IntMat> hecke;
      for (long ell : comb_ells) hecke.push_back(L.pres->hecke_matrix(ell));

      std::mt19937_64 rng(seed_ * 0x9e3779b97f4a7c15ULL + (unsigned long)M * 0x100000001b3ULL + 17);
      bool done = false;
      for (int attempt = 0; attempt < 20 && !done; ++attempt) {
        std::vector<long> c(comb_ells.size());
        for (auto& ci : c) ci = (long)(rng() % 11) - 5;
        if (attempt == 0) {
          // first try the plain T_{ell_0}
          std::fill(c.begin(), c.end(), 0);
          c[0] = 1;
        }
        IntMat AT(L.pres->dim, L.pres->dim);
        for (size_t k = 0; k < c.size(); ++k)
          if (c[k] != 0) {
            for (size_t idx = 0; idx < AT.a.size(); ++idx)
              AT.a[idx] += Int(c[k]) * hecke[k].a[idx];
          }
        IntMat ST = L.pres->restrict_to_cuspidal(AT);
        UniPoly cpS{charpoly(ST)};

        // divide out the known lower-level systems
        UniPoly Q = cpS;
        std::vector<UniPoly> old_minpolys;
        bool ok = true;
        for (long d : divisors(M)) {
          if (d == M || !ok) continue;
          const LevelData& Ld = levels_.at(d);
          long mult0 = (long)divisors(M / d).size();
          for (size_t o = 0; o < Ld.orbits.size(); ++o) {
            const NumberField& K = *Ld.orbits[o].field;
            FieldElement val = fe_zero(K);
            for (size_t k = 0; k < c.size(); ++k) {
              if (c[k] == 0) continue;
              FieldElement a = eigenvalue(Ld, (long)o, comb_ells[k]);
              val = fe_add(K, val, fe_scale(K, a, Rat(c[k])));
            }
            UniPoly mp = fe_minpoly(K, val);
            old_minpolys.push_back(mp);
            long mult = mult0 * (K.degree / mp.degree());
            for (long rep = 0; rep < mult && ok; ++rep) {
              UniPoly q;
              if (!try_divide(Q, mp, q)) ok = false;
              else Q = q;
            }
          }
        }
        if (!ok || Q.degree() != L.new_dim) continue;

        auto factors = factor(Q);
        long degsum = 0;
        bool separated = true;
        for (auto& [gf, mult] : factors) {
          if (mult != 1) separated = false;
          degsum += gf.degree();
          for (auto& mp : old_minpolys)
            if (mp == gf) separated = false;
        }
        if (!separated || degsum != L.new_dim) continue;

        // each factor must appear with multiplicity exactly one in the full
        // quotient (needed for the dual fast path)
        UniPoly cpV{charpoly(AT)};
        for (auto& [gf, mult] : factors) {
          UniPoly q, q2;
          if (!try_divide(cpV, gf, q) || try_divide(q, gf, q2)) {
            separated = false;
            break;
          }
        }
        if (!separated) continue;

        std::vector<NewformOrbit> orbits;
        for (auto& [gf, mult] : factors) {
          OrbitBuildData ob = build_orbit_vectors(*L.pres, AT, ST, gf);
          NewformOrbit orb;
          orb.level = M;
          orb.g = ob.g;
          orb.field = std::make_shared<NumberField>(ob.g, /*check=*/false);
          orb.dual_w = std::move(ob.dual_w);
          orb.pair_gen = ob.pair_gen;
          orb.pair_den = std::move(ob.pair_den);
          orb.pair_den_inv = std::move(ob.pair_den_inv);
          orb.right_v = std::move(ob.right_v);
          orbits.push_back(std::move(orb));
        }
        L.orbits = std::move(orbits);
        done = true;
      }
      if (!done) throw ComputationError("decompose: no separating combination found");
    }

    // canonical ordering by (degree, trace sequence); fill fingerprints
    if (!L.orbits.empty()) {
      L.eigen.assign(L.orbits.size(), {});
      bool ordered = false;
      for (long order_primes : {12L, 30L, 60L}) {
        std::vector<long> ord_ells = first_valid_primes(M, order_primes);
        std::vector<long> missing;
        for (long ell : ord_ells)
          if (L.ell_index(ell) < 0) missing.push_back(ell);
        compute_eigen_range(L, missing);
        for (size_t o = 0; o < L.orbits.size(); ++o) {
          NewformOrbit& orb = L.orbits[o];
          const NumberField& K = *orb.field;
          orb.trace_seq.clear();
          for (long ell : ord_ells) {
            FieldElement a = eigenvalue(L, (long)o, ell);
            Rat tr = fe_trace(K, a);
            if (tr.get_den() != 1) throw ComputationError("eigenvalue trace not integral");
            orb.trace_seq.push_back(tr.get_num());
          }
        }
        bool tie = false;
        for (size_t a = 0; a < L.orbits.size() && !tie; ++a)
          for (size_t b = a + 1; b < L.orbits.size() && !tie; ++b)
            if (L.orbits[a].degree() == L.orbits[b].degree() &&
                L.orbits[a].trace_seq == L.orbits[b].trace_seq)
              tie = true;
        if (!tie) {
          ordered = true;
          break;
        }
      }
      if (!ordered) throw ComputationError("orbit ordering tie persists");
      for (auto& orb : L.orbits) {
        orb.fingerprint.clear();
        for (int k = 0; k < 5 && k < (long)orb.trace_seq.size(); ++k)
          orb.fingerprint.push_back((long)mod_floor(orb.trace_seq[k], Int(1000003)).get_si());
      }
      std::vector<size_t> order(L.orbits.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        const NewformOrbit& A = L.orbits[a];
        const NewformOrbit& B = L.orbits[b];
        if (A.degree() != B.degree()) return A.degree() < B.degree();
        return A.trace_seq < B.trace_seq;
      });
      std::vector<NewformOrbit> sorted_orbits;
      std::vector<std::vector<std::vector<Rat>>> sorted_eigen;
      for (size_t i = 0; i < order.size(); ++i) {
        sorted_orbits.push_back(std::move(L.orbits[order[i]]));
        sorted_orbits.back().orbit_index = (long)i;
        sorted_eigen.push_back(std::move(L.eigen[order[i]]));
      }
      L.orbits = std::move(sorted_orbits);
      L.eigen = std::move(sorted_eigen);
      L.bound = L.ells.back();
    } else {
      L.bound = 1000000000L;  // nothing to compute, any bound is covered
    }
    bool persist = L.pres->cuspidal_dim() > 0;
    levels_.emplace(M, std::move(L));
    if (persist) save_cache(levels_.at(M));
    return;
  }
  levels_.emplace(M, std::move(L));
}

// compute eigenvalues for the given primes (all not dividing the level, not
// yet present) and append them to L in ascending order
void NewformEngine::compute_eigen_range(LevelData& L, const std::vector<long>& new_ells) {
  if (L.orbits.empty() || new_ells.empty()) return;
  if (!L.pres)
    L.pres = std::make_shared<ManinPresentation>(ManinPresentation::build(L.level));
  const ManinPresentation& pres = *L.pres;
  long norb = (long)L.orbits.size();

  // distinct pairing generators
  std::vector<long> gens;
  for (auto& orb : L.orbits) gens.push_back(orb.pair_gen);
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

  std::vector<std::vector<std::vector<Rat>>> results(norb,
      std::vector<std::vector<Rat>>(new_ells.size()));

  auto worker = [&](size_t lo, size_t hi) {
    std::vector<int64_t> counts;
    std::map<long, std::vector<Int>> imgs;
    for (size_t i = lo; i < hi; ++i) {
      long ell = new_ells[i];
      auto H = heilbronn_cremona(ell);
      imgs.clear();
      for (long b : gens) {
        pres.heilbronn_counts(H, b, counts);
        imgs[b] = pres.project_counts(counts);
      }
      for (long o = 0; o < norb; ++o) {
        const NewformOrbit& orb = L.orbits[o];
        long deg = orb.degree();
        const std::vector<Int>& img = imgs[orb.pair_gen];
        QPoly u(deg, Rat(0));
        for (long t = 0; t < deg; ++t) {
          Int s = 0;
          for (long col = 0; col < pres.dim; ++col)
            if (img[col] != 0 && orb.dual_w.at(col, t) != 0) s += img[col] * orb.dual_w.at(col, t);
          u[t] = Rat(s);
        }
        qtrim(u);
        QPoly a = qmul(u, orb.pair_den_inv);
        a = qdivrem(a, qfrom(orb.g)).second;
        std::vector<Rat> coords(deg, Rat(0));
        for (size_t t = 0; t < a.size(); ++t) coords[t] = a[t];
        results[o][i] = std::move(coords);
      }
    }
  };

  long nt = std::min<long>(threads_, (long)new_ells.size());
  if (nt <= 1) {
    worker(0, new_ells.size());
  } else {
    std::vector<std::thread> pool;
    size_t chunk = (new_ells.size() + nt - 1) / nt;
    for (long t = 0; t < nt; ++t) {
      size_t lo = t * chunk, hi = std::min(new_ells.size(), (t + 1) * chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  // merge (new_ells assumed disjoint from L.ells)
  std::vector<long> merged;
  std::vector<std::vector<std::vector<Rat>>> eig(norb);
  size_t i = 0, j = 0;
  while (i < L.ells.size() || j < new_ells.size()) {
    bool take_old = j >= new_ells.size() || (i < L.ells.size() && L.ells[i] < new_ells[j]);
    if (take_old) {
      merged.push_back(L.ells[i]);
      for (long o = 0; o < norb; ++o) eig[o].push_back(std::move(L.eigen[o][i]));
      ++i;
    } else {
      merged.push_back(new_ells[j]);
      for (long o = 0; o < norb; ++o) eig[o].push_back(std::move(results[o][j]));
      ++j;
    }
  }
  L.ells = std::move(merged);
  L.eigen = std::move(eig);
}

void NewformEngine::ensure_eigenvalues(long M, long bound) {
  LevelData& L = level(M);
  if (L.orbits.empty()) {
    L.bound = std::max(L.bound, bound);
    return;
  }
  if (L.bound >= bound) return;
  std::vector<long> missing;
  for (long ell : primes_up_to(bound)) {
    if (M % ell == 0) continue;
    if (L.ell_index(ell) < 0) missing.push_back(ell);
  }
  if (!missing.empty()) compute_eigen_range(L, missing);
  L.bound = std::max(L.bound, bound);
  save_cache(L);
}

void NewformEngine::spot_check(long M, int count) {
  LevelData& L = level(M);
  if (L.orbits.empty() || L.ells.empty()) return;
  if (!L.pres)
    L.pres = std::make_shared<ManinPresentation>(ManinPresentation::build(L.level));
  for (int k = 0; k < count && k < (int)L.ells.size(); ++k) {
    long ell = L.ells[k];
    LevelData probe;
    probe.level = L.level;
    probe.pres = L.pres;
    probe.orbits = L.orbits;  // shares orbit data
    probe.eigen.assign(L.orbits.size(), {});
    compute_eigen_range(probe, {ell});
    for (size_t o = 0; o < L.orbits.size(); ++o) {
      if (probe.eigen[o][0] != L.eigenvalue((long)o, ell))
        throw InvariantViolation("cached eigenvalue disagrees with recomputation");
    }
  }
}

}  // namespace eis
