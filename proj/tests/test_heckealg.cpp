#include "doctest.h"
#include "eisdepth/heckealg.hpp"
#include "eisdepth/toyverify.hpp"

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

TEST_CASE("level 11: T = Z, index 5, principal, multiplicity 1") {
  NewformEngine E(fresh_dir("ha11"));
  HeckeLattice T = build_hecke_lattice(E, 11);
  CHECK(T.rank == 1);
  EisensteinIdealData J = eisenstein_ideal(T);
  CHECK(J.index_n0 == 5);
  EisensteinLocalData loc = eisenstein_local_data(T, J, 5);
  CHECK_FALSE(loc.empty);
  CHECK(loc.index_val == 1);
  CHECK(loc.min_generators == 1);
  CHECK(loc.multiplicity == 1);
}

TEST_CASE("prime level Mazur oracle: N=23 at p=11") {
  NewformEngine E(fresh_dir("ha23"));
  HeckeLattice T = build_hecke_lattice(E, 23);
  CHECK(T.rank == 2);
  EisensteinIdealData J = eisenstein_ideal(T);
  // numerator of (23-1)/12 is 11
  CHECK(J.index_n0 == 11);
  EisensteinLocalData loc = eisenstein_local_data(T, J, 11);
  CHECK(loc.index_val == 1);
  CHECK(loc.min_generators == 1);
  CHECK(loc.multiplicity == 1);
}

TEST_CASE("closure idempotence and generator-bound stability at small N") {
  NewformEngine E(fresh_dir("hastab"));
  for (long N : {11L, 55L, 66L}) {
    HeckeLattice T1 = build_hecke_lattice(E, N);
    HeckeLattice T2 = build_hecke_lattice(E, N, 2 * sturm_limit(N));
    CHECK(T1.basis == T2.basis);
  }
}

TEST_CASE("complete report: N=66, p=5") {
  NewformEngine E(fresh_dir("ha66"));
  DepthReport rep = build_depth_report(E, 66, 5);
  complete_report(E, rep);
  CHECK(rep.depth == 2);
  CHECK(rep.index_computed);
  CHECK(rep.index_val >= 1);
  CHECK(rep.index_val <= rep.depth);
  CHECK(rep.multiplicity == rep.depth);
  bool principal = rep.depth == rep.index_val;
  CHECK(principal == (rep.min_generators == 1));
  CHECK((rep.verdict == "locally principal" || rep.verdict == "NOT locally principal"));
}

TEST_CASE("complete report: N=55, p=5 (p divides N)") {
  NewformEngine E(fresh_dir("ha55"));
  DepthReport rep = build_depth_report(E, 55, 5);
  complete_report(E, rep);
  CHECK(rep.depth == 1);
  CHECK(rep.multiplicity == 1);
  CHECK(rep.index_val == 1);
  CHECK(rep.verdict == "locally principal");
  CHECK(rep.min_generators == 1);
}

TEST_CASE("empty Eisenstein factor when p does not divide the index") {
  NewformEngine E(fresh_dir("haempty"));
  // N = 55: index is a power of 5 times small primes; p = 13 gives no congruence
  DepthReport rep = build_depth_report(E, 55, 13);
  complete_report(E, rep);
  CHECK(rep.depth == 0);
  CHECK(rep.index_val == 0);
  CHECK(rep.verdict == "no Eisenstein congruence mod p (trivial local factor)");
}

TEST_CASE("toy verifier: hand-checked instances") {
  SUBCASE("non-principal: #T/J = 5 < 25, nu = 2") {
    ToyReport r = toy_verify(toy_hand_instance(0));
    CHECK(r.t_local);
    CHECK(r.len_t_over_j == 1);
    CHECK(r.len_i == std::vector<long>{1, 1});
    CHECK(r.nu == 2);
    CHECK(r.hs_mult == 2);
    CHECK(r.all_pass);
  }
  SUBCASE("principal: #T/J = 25 = 25, nu = 1") {
    ToyReport r = toy_verify(toy_hand_instance(1));
    CHECK(r.t_local);
    CHECK(r.len_t_over_j == 2);
    CHECK(r.len_i == std::vector<long>{1, 1});
    CHECK(r.nu == 1);
    CHECK(r.hs_mult == 2);
    CHECK(r.all_pass);
  }
  SUBCASE("split case: T = Z^2, J = (5): trivially equal, e = 2") {
    ToyReport r = toy_verify(toy_hand_instance(2));
    CHECK_FALSE(r.t_local);
    CHECK(r.len_t_over_j == 2);
    CHECK(r.len_i == std::vector<long>{1, 1});
    CHECK(r.hs_mult == 2);
    CHECK(r.all_pass);  // non-applicable checks are skipped, the rest hold
  }
}

TEST_CASE("toy verifier: 100 seeded random instances") {
  int count = 0;
  for (long p : {5L, 7L}) {
    for (unsigned long seed = 1; seed <= 50; ++seed) {
      ToyInstance inst = toy_random_instance(p, seed * 7919 + p);
      ToyReport r = toy_verify(inst);
      ++count;
      if (!r.all_pass) {
        CAPTURE(p);
        CAPTURE(seed);
        for (auto& c : r.checks) {
          CAPTURE(c.name);
          CAPTURE(c.applicable);
          CAPTURE(c.pass);
        }
      }
      REQUIRE(r.all_pass);
    }
  }
  CHECK(count == 100);
}
