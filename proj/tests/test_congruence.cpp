#include "doctest.h"
#include "eisdepth/congruence.hpp"

#include <filesystem>

using namespace eis;

namespace {
std::string fresh_dir(const char* name) {
  std::string d = std::string("/tmp/eisdepth-test-") + name + "-" + std::to_string(::getpid());
  std::filesystem::remove_all(d);
  std::filesystem::create_directories(d);
  return d;
}
}  // namespace

TEST_CASE("sturm bounds") {
  CHECK(sturm_limit(66) == 1584);
  CHECK(sturm_limit(11) == 22);
  CHECK(sturm_limit(418) == 50160);
  CHECK(sturm_limit(55) == 660);
  // non-integral case: 91 * 112 / 6
  CHECK(sturm_bound_exact(91) == Rat(Int(5096), Int(3)));
  CHECK(sturm_limit(91) == 1698);
}

TEST_CASE("eisenstein coefficients and constant term") {
  CHECK(eisenstein_coeff(66, 5) == 6);
  CHECK_THROWS(eisenstein_coeff(66, 11));
  CHECK(eisenstein_constant(11) == Rat(Int(5), Int(12)));
  // t = 3: sign (-1)^4 = +1
  CHECK(eisenstein_constant(66) == Rat(Int(5), Int(6)));
  // t = 2: sign -1
  CHECK(eisenstein_constant(55) == -Rat(Int(5), Int(3)));
  // t = 4
  CHECK(eisenstein_constant(330) == Rat(Int(-10), Int(3)));
}

TEST_CASE("candidate primes") {
  auto c165 = candidate_primes(165);
  CHECK(std::count(c165.begin(), c165.end(), 5) == 1);
  auto c203 = candidate_primes(203);
  CHECK(c203 == std::vector<long>{3, 5, 7});
  auto c55 = candidate_primes(55);
  CHECK(c55 == std::vector<long>{3, 5});
  CHECK_THROWS(candidate_primes(6));
  CHECK_THROWS(candidate_primes(12));
}

TEST_CASE("ohta lower bound") {
  CHECK(ohta_lower_bound(341, 5).value() == 2);
  CHECK(ohta_lower_bound(203, 5).value() == 1);
  CHECK(ohta_lower_bound(66, 5).value() == 1);
  CHECK_FALSE(ohta_lower_bound(55, 5).has_value());
}

TEST_CASE("validation") {
  NewformEngine E(fresh_dir("cgv"));
  CHECK_THROWS(congruence_scan(E, 12, 5));
  CHECK_THROWS(congruence_scan(E, 55, 2));
  CHECK_THROWS(congruence_scan(E, 4, 5));
}

TEST_CASE("scan N=55, p=5: single row at level 11") {
  NewformEngine E(fresh_dir("cg55"));
  DepthReport rep = build_depth_report(E, 55, 5);
  REQUIRE(rep.records.size() == 1);
  CHECK(rep.records[0].level == 11);
  CHECK(rep.records[0].e == 1);
  CHECK(rep.records[0].f == 1);
  CHECK(rep.records[0].r == 1);
  CHECK(rep.depth == 1);
  CHECK(rep.val_phi == 1);
  CHECK_FALSE(rep.strict_observed);
  CHECK_FALSE(rep.predicates.applicable);  // p | N
  CHECK_FALSE(rep.ohta_applicable);
}

TEST_CASE("scan N=57, p=3: single row at level 19") {
  NewformEngine E(fresh_dir("cg57"));
  DepthReport rep = build_depth_report(E, 57, 3);
  REQUIRE(rep.records.size() == 1);
  CHECK(rep.records[0].level == 19);
  CHECK(rep.records[0].e == 1);
  CHECK(rep.records[0].f == 1);
  CHECK(rep.records[0].r == 1);
  CHECK(rep.depth == 1);
  CHECK(rep.val_phi == 2);  // depth below val_p(phi): allowed at p = 3
}

TEST_CASE("scan N=66, p=5: rows at levels 11 and 66, strict") {
  NewformEngine E(fresh_dir("cg66"));
  DepthReport rep = build_depth_report(E, 66, 5);
  REQUIRE(rep.records.size() == 2);
  CHECK(rep.records[0].level == 11);
  CHECK(rep.records[1].level == 66);
  for (auto& r : rep.records) {
    CHECK(r.e == 1);
    CHECK(r.f == 1);
    CHECK(r.r == 1);
  }
  CHECK(rep.depth == 2);
  CHECK(rep.val_phi == 1);
  CHECK(rep.strict_observed);
  CHECK(rep.predicates.applicable);
  CHECK(rep.predicates.predicts_strict);
  CHECK(rep.ohta_bound == 1);
}

TEST_CASE("scan monotonicity: doubling the bound changes nothing") {
  NewformEngine E(fresh_dir("cgmono"));
  for (auto [N, p] : std::initializer_list<std::pair<long, long>>{{55, 5}, {57, 3}, {66, 5}}) {
    auto base = congruence_scan(E, N, p);
    auto twice = congruence_scan(E, N, p, 2 * sturm_limit(N));
    REQUIRE(base.size() == twice.size());
    for (size_t i = 0; i < base.size(); ++i) {
      CHECK(base[i].level == twice[i].level);
      CHECK(base[i].orbit == twice[i].orbit);
      CHECK(base[i].r == twice[i].r);
      CHECK(base[i].e == twice[i].e);
      CHECK(base[i].f == twice[i].f);
    }
  }
}

TEST_CASE("two-prime predicate cases") {
  // 319 = 11*29, p=5: q=11 = 1 mod 5, r=29 = -1 mod 5 -> strict
  TheoremPredicates t1 = strictness_predicates(319, 5);
  CHECK(t1.applicable);
  CHECK(t1.predicts_strict);
  // 217 = 7*31, p=5: q=31 = 1 mod 5, r=7: 7^6 mod 31 = 4 != 1 -> not strict
  TheoremPredicates t2 = strictness_predicates(217, 5);
  CHECK(t2.applicable);
  CHECK_FALSE(t2.predicts_strict);
  // 319, p=7: q=29 = 1 mod 7, r=11: 11^4 mod 29 = 25 != 1 -> not strict
  TheoremPredicates t3 = strictness_predicates(319, 7);
  CHECK(t3.applicable);
  CHECK_FALSE(t3.predicts_strict);
  // 341 = 11*31, p=5: both = 1 mod 5 -> strict
  TheoremPredicates t4 = strictness_predicates(341, 5);
  CHECK(t4.applicable);
  CHECK(t4.predicts_strict);
  // t >= 3
  TheoremPredicates t5 = strictness_predicates(330, 5);
  CHECK(t5.applicable);
  CHECK(t5.predicts_strict);
  // p = 3 never applicable
  CHECK_FALSE(strictness_predicates(399, 3).applicable);
}

TEST_CASE("eigenvalue integrality at every prime above p") {
  NewformEngine E(fresh_dir("cgint"));
  LevelData& L = E.level(33);
  E.ensure_eigenvalues(33, 60);
  for (long p : {3L, 5L}) {
    for (size_t o = 0; o < L.orbits.size(); ++o) {
      const NumberField& K = *L.orbits[o].field;
      POrderData O = p_maximal_order(K, Int(p));
      auto prims = primes_above(K, O);
      for (long ell : {2L, 5L, 7L, 13L, 37L}) {
        if (33 % ell == 0 || ell == p) continue;
        FieldElement a = E.eigenvalue(L, (long)o, ell);
        for (auto& lam : prims) {
          long v = valuation(K, O, lam, a);
          CHECK((v == kValInfinity || v >= 0));
        }
      }
    }
  }
}
