#include "eisdepth/congruence.hpp"

#include <algorithm>
#include <sstream>

namespace eis {

Rat sturm_bound_exact(long N) {
  Int num = N;
  for (long q : prime_factors(N)) num *= (q + 1);
  Rat b(num, Int(6));
  b.canonicalize();
  return b;
}

long sturm_limit(long N) {
  Int num = N;
  for (long q : prime_factors(N)) num *= (q + 1);
  return (long)Int(num / 6).get_si();
}

long eisenstein_coeff(long N, long ell) {
  if (N % ell == 0) throw ComputationError("eisenstein_coeff: ell divides N");
  if (!is_prime(Int(ell))) throw ComputationError("eisenstein_coeff: ell not prime");
  return 1 + ell;
}

Rat eisenstein_constant(long N) {
  long t = (long)prime_factors(N).size();
  Rat c(Int(euler_phi(N)), Int(24));
  c.canonicalize();
  if (t % 2 == 0) c = -c;  // sign (-1)^(t+1)
  return c;
}

std::vector<long> candidate_primes(long N) {
  validate_level_prime(N, 0);
  Int prod = 1;
  for (long q : prime_factors(N)) prod *= Int(q) * q - 1;
  std::vector<long> out;
  for (long p = 3; Int(p) * p <= prod * prod; p += 2) {
    if (!is_prime(Int(p))) continue;
    if (divisible(prod, Int(p))) {
      out.push_back(p);
      while (divisible(prod, Int(p))) prod = divexact(prod, Int(p));
    }
    if (prod == 1) break;
  }
  if (prod > 1 && mpz_odd_p(prod.get_mpz_t()) && is_prime(prod)) out.push_back((long)prod.get_si());
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<long> ohta_lower_bound(long N, long p) {
  if (N % p == 0) return std::nullopt;
  Int prod = 1;
  for (long q : prime_factors(N)) prod *= Int(q) * q - 1;
  return valuation(prod, Int(p));
}

void validate_level_prime(long N, long p) {
  if (N <= 6) throw ComputationError("level must be squarefree and > 6");
  if (!is_squarefree(N)) throw ComputationError("level must be squarefree");
  if (p != 0) {
    if (p == 2)
      throw ComputationError(
          "p = 2 is excluded: mod-2 Eisenstein congruences behave differently and are out of scope");
    if (p < 3 || !is_prime(Int(p))) throw ComputationError("p must be an odd prime");
  }
}

std::vector<CongruenceRecord> congruence_scan(NewformEngine& engine, long N, long p,
                                              long bound_override) {
  validate_level_prime(N, p);
  long B = bound_override > 0 ? bound_override : sturm_limit(N);

  struct Pair {
    long level, orbit, lambda_index;
    const NewformOrbit* orb;
    const LevelData* L;
    std::shared_ptr<POrderData> O;
    PrimeIdealData lam;
    long rmin;
    bool alive;
  };
  std::vector<Pair> pairs;

  for (long M : divisors(N)) {
    LevelData& L = engine.level(M);
    if (L.orbits.empty()) continue;
    engine.ensure_eigenvalues(M, B);
    for (size_t o = 0; o < L.orbits.size(); ++o) {
      const NewformOrbit& orb = L.orbits[o];
      auto O = std::make_shared<POrderData>(p_maximal_order(*orb.field, Int(p)));
      auto prims = primes_above(*orb.field, *O);
      for (size_t li = 0; li < prims.size(); ++li) {
        Pair pr;
        pr.level = M;
        pr.orbit = (long)o;
        pr.lambda_index = (long)li;
        pr.orb = &orb;
        pr.L = &L;
        pr.O = O;
        pr.lam = prims[li];
        pr.rmin = -1;  // unset
        pr.alive = true;
        pairs.push_back(std::move(pr));
      }
    }
  }

  for (long ell : primes_up_to(B)) {
    if (N % ell == 0) continue;
    bool any_alive = false;
    for (Pair& pr : pairs) {
      if (!pr.alive) continue;
      any_alive = true;
      FieldElement a = engine.eigenvalue(*pr.L, pr.orbit, ell);
      const NumberField& K = *pr.orb->field;
      FieldElement x = fe_sub(K, a, fe_from_rat(K, Rat(1 + ell)));
      long v = valuation(K, *pr.O, pr.lam, x);
      if (v == kValInfinity) continue;  // a_ell = 1 + ell exactly
      if (v < 0) throw InvariantViolation("eigenvalue with negative valuation (not integral)");
      if (pr.rmin < 0 || v < pr.rmin) pr.rmin = v;
      if (pr.rmin == 0) pr.alive = false;  // early abandon: the min is final
    }
    if (!any_alive) break;
  }

  std::vector<CongruenceRecord> out;
  for (Pair& pr : pairs) {
    if (pr.rmin <= 0) continue;  // no congruence (or min reached 0)
    CongruenceRecord rec;
    rec.level = pr.level;
    rec.orbit = pr.orbit;
    rec.lambda_index = pr.lambda_index;
    rec.e = pr.lam.e;
    rec.f = pr.lam.f;
    rec.r = pr.rmin;
    out.push_back(rec);
  }
  std::sort(out.begin(), out.end(), [](const CongruenceRecord& a, const CongruenceRecord& b) {
    if (a.level != b.level) return a.level < b.level;
    if (a.orbit != b.orbit) return a.orbit < b.orbit;
    return a.lambda_index < b.lambda_index;
  });
  return out;
}

long depth_total(const std::vector<CongruenceRecord>& records) {
  long D = 0;
  for (const auto& r : records) D += r.f * r.r;
  return D;
}

TheoremPredicates strictness_predicates(long N, long p) {
  TheoremPredicates out;
  auto qs = prime_factors(N);
  long t = (long)qs.size();
  long phi = euler_phi(N);
  std::ostringstream desc;
  if (p < 5) {
    out.applicable = false;
    desc << "p = " << p << " < 5: the strictness results do not apply";
    out.description = desc.str();
    return out;
  }
  if (t >= 3 && phi % p == 0) {
    out.applicable = true;
    out.predicts_strict = true;
    desc << "N has " << t << " >= 3 prime factors and p | phi(N): depth strictly exceeds val_p(phi(N))";
    out.description = desc.str();
    return out;
  }
  if (t == 2 && N % p != 0) {
    // N = q*r with q = 1 mod p for some labeling
    bool applies = false, strict = false;
    for (int side = 0; side < 2; ++side) {
      long q = qs[side], r = qs[1 - side];
      if ((q - 1) % p != 0) continue;
      applies = true;
      bool cond = (r % p == 1) || (r % p == p - 1);
      if (!cond) {
        // r a p-th power mod q <=> r^((q-1)/p) = 1 mod q
        Int pw = powmod(Int(r), Int((q - 1) / p), Int(q));
        cond = (pw == 1);
      }
      if (cond) strict = true;
    }
    if (applies) {
      out.applicable = true;
      out.predicts_strict = strict;
      desc << "N = q*r with q = 1 mod p: depth strict iff r = +-1 mod p or r is a p-th power mod q; "
           << (strict ? "condition holds" : "condition fails");
      out.description = desc.str();
      return out;
    }
  }
  out.applicable = false;
  desc << "no strictness criterion applies (t = " << t << ", p " << (N % p == 0 ? "divides" : "prime to")
       << " N, val_p(phi) = " << valuation(Int(phi), Int(p)) << ")";
  out.description = desc.str();
  return out;
}

DepthReport build_depth_report(NewformEngine& engine, long N, long p, long bound_override) {
  validate_level_prime(N, p);
  DepthReport rep;
  rep.N = N;
  rep.p = p;
  rep.t = (long)prime_factors(N).size();
  rep.sturm_exact = sturm_bound_exact(N);
  rep.sturm_limit = sturm_limit(N);
  rep.scan_bound = bound_override > 0 ? bound_override : rep.sturm_limit;
  rep.records = congruence_scan(engine, N, p, bound_override);
  rep.depth = depth_total(rep.records);
  rep.val_phi = valuation(Int(euler_phi(N)), Int(p));
  Rat phi24(Int(euler_phi(N)), Int(24));
  phi24.canonicalize();
  rep.val_num_phi24 = valuation(Int(phi24.get_num()), Int(p));
  auto ohta = ohta_lower_bound(N, p);
  rep.ohta_applicable = ohta.has_value();
  rep.ohta_bound = ohta.value_or(0);
  rep.strict_observed = rep.depth > rep.val_phi;
  rep.predicates = strictness_predicates(N, p);
  // theorem-level invariants that hold unconditionally for p >= 5
  if (p >= 5 && rep.depth < rep.val_phi)
    throw InvariantViolation("depth below val_p(phi(N)) for p >= 5");
  if (p >= 5 && rep.ohta_applicable && rep.depth < rep.ohta_bound)
    throw InvariantViolation("depth below the q^2-1 lower bound for p >= 5, p coprime to N");
  if (rep.predicates.applicable && rep.predicates.predicts_strict && !rep.strict_observed)
    throw InvariantViolation("predicted strictness not observed");
  if (rep.predicates.applicable && !rep.predicates.predicts_strict && rep.strict_observed)
    throw InvariantViolation("observed strictness contradicts the two-prime criterion");
  return rep;
}

}  // namespace eis
