#ifndef EISDEPTH_CONGRUENCE_HPP
#define EISDEPTH_CONGRUENCE_HPP

#include "eisdepth/newform.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eis {

// One congruence row: orbit of level M | N, prime lambda above p with
// ramification e and residue degree f, congruence exponent r >= 1.
struct CongruenceRecord {
  long level = 0;
  long orbit = 0;
  long lambda_index = 0;
  long e = 1;
  long f = 1;
  long r = 0;
};

struct TheoremPredicates {
  bool applicable = false;      // p >= 5 and one of the two criteria applies
  bool predicts_strict = false;
  std::string description;
};

struct DepthReport {
  long N = 0, p = 0, t = 0;
  Rat sturm_exact;
  long sturm_limit = 0;
  long scan_bound = 0;  // actual bound used (override or sturm_limit)
  std::vector<CongruenceRecord> records;
  long depth = 0;           // D = sum of f*r
  long val_phi = 0;         // val_p(phi(N))
  long val_num_phi24 = 0;   // val_p(numerator(phi(N)/24))
  bool ohta_applicable = false;
  long ohta_bound = 0;
  bool strict_observed = false;  // D > val_phi
  TheoremPredicates predicates;

  // Hecke-algebra results (filled by complete_report)
  bool index_computed = false;
  Int index_n0;
  long index_val = 0;
  long multiplicity = 0;
  long min_generators = 0;
  std::string verdict;
};

// exact bound N * prod_{q | N} (q + 1) / 6; primes ell <= floor are scanned
Rat sturm_bound_exact(long N);
long sturm_limit(long N);

long eisenstein_coeff(long N, long ell);  // 1 + ell for prime ell not dividing N
Rat eisenstein_constant(long N);          // (-1)^(t+1) * phi(N) / 24

// odd primes dividing prod_{q|N} (q^2 - 1); covers every p admitting a
// congruence, including p | N and the p with p not dividing phi(N)
std::vector<long> candidate_primes(long N);

// val_p(prod (q^2-1)); only meaningful for p not dividing N
std::optional<long> ohta_lower_bound(long N, long p);

void validate_level_prime(long N, long p);

std::vector<CongruenceRecord> congruence_scan(NewformEngine& engine, long N, long p,
                                              long bound_override = 0);
long depth_total(const std::vector<CongruenceRecord>& records);
TheoremPredicates strictness_predicates(long N, long p);

// scan + arithmetic summary (no Hecke-lattice data)
DepthReport build_depth_report(NewformEngine& engine, long N, long p, long bound_override = 0);

}  // namespace eis

#endif
