#include "doctest.h"
#include "eisdepth/modsym.hpp"
#include "eisdepth/unipoly.hpp"

#include <random>

using namespace eis;

TEST_CASE("gamma0 invariants / genus oracle") {
  struct Row {
    long M, genus;
  };
  for (Row r : std::initializer_list<Row>{{1, 0},  {2, 0},  {6, 0},   {11, 1},  {14, 1},  {15, 1},
                                          {22, 2}, {26, 2}, {30, 3},  {31, 2},  {33, 3},  {38, 4},
                                          {55, 5}, {57, 5}, {66, 9},  {91, 7},  {110, 15}, {133, 11},
                                          {155, 15}, {165, 21}, {182, 25}, {203, 19}, {209, 19},
                                          {217, 19}, {319, 29}, {330, 65}, {341, 31}, {399, 49},
                                          {418, 57}}) {
    CHECK(dim_cuspforms_weight2(r.M) == r.genus);
  }
}

TEST_CASE("p1 sizes") {
  CHECK(P1::build(11).size() == 12);
  CHECK(P1::build(1).size() == 1);
  CHECK(P1::build(6).size() == 12);
  CHECK(P1::build(66).size() == 144);
}

TEST_CASE("p1 table consistency") {
  P1 p = P1::build(30);
  // every coprime pair maps to a representative that maps to itself
  for (long c = 0; c < 30; ++c)
    for (long d = 0; d < 30; ++d) {
      long g = std::gcd(std::gcd(c, d), 30L);
      if (g != 1) {
        CHECK(p.table[c * 30 + d] == -1);
        continue;
      }
      long idx = p.index_of(c, d);
      REQUIRE(idx >= 0);
      auto [rc, rd] = p.reps[idx];
      CHECK(p.index_of(rc, rd) == idx);
      // scaling by a unit fixes the class
      CHECK(p.index_of(7 * c, 7 * d) == idx);
    }
}

TEST_CASE("presentation dimensions match the genus formula") {
  // build() itself cross-checks against the formula and throws on mismatch
  for (long M : {1L, 2L, 6L, 11L, 14L, 15L, 26L, 33L, 38L, 55L, 57L, 66L, 91L}) {
    ManinPresentation P = ManinPresentation::build(M);
    CHECK(P.cuspidal_dim() == dim_cuspforms_weight2(M));
    Gamma0Invariants inv = gamma0_invariants(M);
    CHECK(P.dim == inv.genus + inv.nu_inf - 1);
  }
}

TEST_CASE("level 11 Hecke eigenvalues on the cuspidal plus space") {
  ManinPresentation P = ManinPresentation::build(11);
  REQUIRE(P.cuspidal_dim() == 1);
  struct Ev {
    long ell, a;
  };
  for (Ev e : std::initializer_list<Ev>{{2, -2}, {3, -1}, {5, 1}, {7, -2}, {13, 4}}) {
    IntMat T = P.hecke_on_cuspidal(e.ell);
    CHECK(T.at(0, 0) == e.a);
  }
}

TEST_CASE("heilbronn: cremona and merel families induce the same action") {
  for (long M : {11L, 14L, 15L}) {
    ManinPresentation P = ManinPresentation::build(M);
    for (long ell : {2L, 3L, 5L, 7L}) {
      if (M % ell == 0) continue;
      auto Hc = heilbronn_cremona(ell);
      auto Hm = heilbronn_merel(ell);
      std::vector<int64_t> counts;
      for (long g = 0; g < P.p1.size(); g += 3) {
        P.heilbronn_counts(Hc, g, counts);
        std::vector<Int> ic = P.project_counts(counts);
        P.heilbronn_counts(Hm, g, counts);
        std::vector<Int> im = P.project_counts(counts);
        CHECK(ic == im);
      }
    }
  }
}

TEST_CASE("heilbronn action agrees with the coset-definition oracle") {
  for (long M : {11L, 14L, 15L, 33L}) {
    ManinPresentation P = ManinPresentation::build(M);
    for (long ell : {2L, 3L, 5L}) {
      if (M % ell == 0) continue;
      for (long g = 0; g < P.p1.size(); g += 5) {
        CHECK(P.hecke_single(g, ell) == P.hecke_coset_oracle(g, ell));
      }
    }
  }
}

TEST_CASE("hecke matrices commute") {
  for (long M : {33L, 66L}) {
    ManinPresentation P = ManinPresentation::build(M);
    std::vector<long> ells;
    for (long ell : {2L, 5L, 7L, 13L})
      if (M % ell != 0) ells.push_back(ell);
    std::vector<IntMat> mats;
    for (long ell : ells) mats.push_back(P.hecke_on_cuspidal(ell));
    for (size_t i = 0; i < mats.size(); ++i)
      for (size_t j = i + 1; j < mats.size(); ++j)
        CHECK(mul(mats[i], mats[j]) == mul(mats[j], mats[i]));
  }
}

TEST_CASE("star involution squares to the identity on the full relation quotient") {
  for (long M : {11L, 15L, 26L}) {
    ManinPresentation P = ManinPresentation::build(M, /*star_quotient=*/false);
    Gamma0Invariants inv = gamma0_invariants(M);
    CHECK(P.dim == 2 * inv.genus + inv.nu_inf - 1);
    IntMat S = P.star_matrix();
    CHECK(mul(S, S) == IntMat::identity(P.dim));
  }
  // on the star quotient the involution is the identity
  ManinPresentation Q = ManinPresentation::build(15, true);
  CHECK(Q.star_matrix() == IntMat::identity(Q.dim));
}

TEST_CASE("boundary vanishes on the cuspidal space; Eisenstein part has eigenvalue 1+ell") {
  for (long M : {11L, 14L, 66L}) {
    ManinPresentation P = ManinPresentation::build(M);
    IntMat Z = mul(P.cuspidal_basis, P.boundary);
    CHECK(Z.is_zero());
    for (long ell : {5L, 7L}) {
      if (M % ell == 0) continue;
      IntMat A = P.hecke_matrix(ell);
      UniPoly cpV{charpoly(A)};
      UniPoly cpS{charpoly(P.restrict_to_cuspidal(A))};
      // quotient part: (x - (1+ell))^(nu_inf - 1)
      UniPoly lin({Int(-(1 + ell)), Int(1)});
      UniPoly expect = cpS;
      for (long k = 0; k < P.dim - P.cuspidal_dim(); ++k) expect = mul(expect, lin);
      CHECK(cpV == expect);
    }
  }
}

TEST_CASE("hecke_single agrees with rows of the full matrix") {
  std::mt19937_64 rng(4711);
  for (long M : {33L, 55L}) {
    ManinPresentation P = ManinPresentation::build(M);
    for (long ell : {2L, 7L, 13L}) {
      if (M % ell == 0) continue;
      IntMat A = P.hecke_matrix(ell);
      for (int t = 0; t < 20; ++t) {
        long g = (long)(rng() % P.p1.size());
        std::vector<Int> img = P.hecke_single(g, ell);
        std::vector<Int> expect = mul_row(P.gen_coords[g], A);
        CHECK(img == expect);
      }
    }
  }
}
