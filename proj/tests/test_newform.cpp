#include "doctest.h"
#include "eisdepth/newform.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace eis;
namespace fs = std::filesystem;

namespace {

std::string fresh_dir(const char* name) {
  std::string d = std::string("/tmp/eisdepth-test-") + name + "-" + std::to_string(::getpid());
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

// v * A = a * v over K, where v is (rows x deg) integral and a is a power
// basis element
bool is_eigenvector(const NumberField& K, const IntMat& v, const IntMat& A,
                    const std::vector<Rat>& a) {
  long n = A.m, deg = K.degree;
  // lhs[col] = sum_r v[r] * A(r, col) as K elements
  for (long col = 0; col < n; ++col) {
    QPoly lhs;
    for (long r = 0; r < n; ++r) {
      if (A.at(r, col) == 0) continue;
      QPoly term(deg);
      for (long t = 0; t < deg; ++t) term[t] = Rat(v.at(r, t)) * Rat(A.at(r, col));
      qtrim(term);
      lhs = qadd(lhs, term);
    }
    QPoly vc(deg);
    for (long t = 0; t < deg; ++t) vc[t] = Rat(v.at(col, t));
    qtrim(vc);
    QPoly ac(a.begin(), a.end());
    qtrim(ac);
    QPoly rhs = qdivrem(qmul(ac, vc), qfrom(K.g)).second;
    if (qsub(lhs, rhs) != QPoly{}) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("decompose level 11: one rational orbit with known eigenvalues") {
  NewformEngine E(fresh_dir("nf11"));
  LevelData& L = E.level(11);
  REQUIRE(L.orbits.size() == 1);
  CHECK(L.orbits[0].degree() == 1);
  E.ensure_eigenvalues(11, 100);
  struct Ev {
    long ell, a;
  };
  for (Ev e : std::initializer_list<Ev>{{2, -2}, {3, -1}, {5, 1}, {7, -2}, {13, 4},
                                        {17, -2}, {19, 0}, {23, -1}, {29, 0}, {31, 7},
                                        {37, 3}, {41, -8}, {43, -6}, {47, 8}, {97, -7}}) {
    FieldElement a = E.eigenvalue(L, 0, e.ell);
    // degree-1 orbit: a_ell = rational; theta is a rational root, value a - ?
    // the coefficient field is Q, so the coordinate is the eigenvalue itself
    CHECK(a.c[0] == Rat(e.a));
  }
}

TEST_CASE("decompose: orbit counts and dimension bookkeeping") {
  NewformEngine E(fresh_dir("nfsmall"));
  CHECK(E.level(6).orbits.size() == 0);
  CHECK(E.level(22).new_dim == 0);
  CHECK(E.level(33).new_dim == 1);
  LevelData& L66 = E.level(66);
  REQUIRE(L66.orbits.size() == 3);
  for (auto& orb : L66.orbits) CHECK(orb.degree() == 1);
  // 9 = 3 (new at 66) + sigma0(6)*1 (from 11) + sigma0(2)*1 (from 33)
  CHECK(L66.new_dim == 3);
  // level 23: one orbit of degree 2 with trace(a_2) = -1
  LevelData& L23 = E.level(23);
  REQUIRE(L23.orbits.size() == 1);
  CHECK(L23.orbits[0].degree() == 2);
  CHECK(L23.orbits[0].trace_seq[0] == -1);
}

TEST_CASE("orbit eigenvector: T_ell v = a_ell v over K") {
  NewformEngine E(fresh_dir("nfeig"));
  for (long M : {11L, 23L, 33L, 66L}) {
    LevelData& L = E.level(M);
    E.ensure_eigenvalues(M, 50);
    std::mt19937_64 rng(2718);
    std::vector<long> ells;
    for (long ell : primes_up_to(50))
      if (M % ell != 0) ells.push_back(ell);
    for (size_t o = 0; o < L.orbits.size(); ++o) {
      const NewformOrbit& orb = L.orbits[o];
      for (int t = 0; t < 5; ++t) {
        long ell = ells[rng() % ells.size()];
        IntMat T = L.pres->hecke_on_cuspidal(ell);
        CHECK(is_eigenvector(*orb.field, orb.right_v, T, L.eigenvalue(o, ell)));
      }
    }
  }
}

TEST_CASE("galois stability: minpoly of a_ell divides charpoly of T_ell") {
  NewformEngine E(fresh_dir("nfgal"));
  LevelData& L = E.level(23);
  E.ensure_eigenvalues(23, 20);
  for (long ell : {2L, 3L, 5L, 7L}) {
    FieldElement a = E.eigenvalue(L, 0, ell);
    UniPoly mp = fe_minpoly(*L.orbits[0].field, a);
    UniPoly cp{charpoly(L.pres->hecke_on_cuspidal(ell))};
    UniPoly q;
    CHECK(try_divide(cp, mp, q));
  }
}

TEST_CASE("cache round trip, extension, corruption") {
  std::string dir = fresh_dir("nfcache");
  std::string file = dir + "/level_11.ecache";
  {
    NewformEngine E(dir);
    E.level(11);
    E.ensure_eigenvalues(11, 100);
  }
  REQUIRE(fs::exists(file));
  std::string before;
  {
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    before = ss.str();
  }
  SUBCASE("reload gives identical data; warm save leaves bytes unchanged") {
    NewformEngine E(dir);
    LevelData& L = E.level(11);
    CHECK(L.orbits.size() == 1);
    CHECK(L.bound >= 100);
    FieldElement a = E.eigenvalue(L, 0, 97);
    CHECK(a.c[0] == -7);
    E.ensure_eigenvalues(11, 90);  // below cached bound: no-op
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == before);
  }
  SUBCASE("extension appends; orbit block bytes unchanged") {
    NewformEngine E(dir);
    E.level(11);
    E.ensure_eigenvalues(11, 200);
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    std::string after = ss.str();
    CHECK(after.size() > before.size());
    // everything before the old footer is a prefix of the new file
    size_t endpos = before.rfind("\nend ");
    REQUIRE(endpos != std::string::npos);
    std::string payload = before.substr(0, endpos + 1);
    CHECK(after.compare(0, payload.size(), payload) == 0);
    // extension is idempotent
    {
      NewformEngine E2(dir);
      E2.level(11);
      E2.ensure_eigenvalues(11, 200);
    }
    std::ifstream in2(file, std::ios::binary);
    std::stringstream ss2;
    ss2 << in2.rdbuf();
    CHECK(ss2.str() == after);
  }
  SUBCASE("spot check accepts intact cache") {
    NewformEngine E(dir);
    E.level(11);
    E.spot_check(11, 3);
  }
  SUBCASE("truncated cache is rejected and recomputed") {
    {
      std::ofstream out(file, std::ios::binary | std::ios::trunc);
      out << before.substr(0, before.size() / 2);
    }
    NewformEngine E(dir);
    LevelData& L = E.level(11);  // must recompute, with a warning on stderr
    CHECK(L.orbits.size() == 1);
    E.ensure_eigenvalues(11, 100);
    CHECK(E.eigenvalue(L, 0, 97).c[0] == -7);
  }
}

TEST_CASE("determinism: different seeds give identical orbit invariants") {
  NewformEngine E1(fresh_dir("nfseed1"), 0);
  NewformEngine E2(fresh_dir("nfseed2"), 987654321UL);
  for (long M : {11L, 33L, 66L, 23L}) {
    LevelData& A = E1.level(M);
    LevelData& B = E2.level(M);
    REQUIRE(A.orbits.size() == B.orbits.size());
    for (size_t o = 0; o < A.orbits.size(); ++o) {
      CHECK(A.orbits[o].degree() == B.orbits[o].degree());
      CHECK(A.orbits[o].trace_seq == B.orbits[o].trace_seq);
    }
  }
}
