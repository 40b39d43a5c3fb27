#include "doctest.h"
#include "eisdepth/matrix.hpp"
#include "eisdepth/unipoly.hpp"

#include <random>

using namespace eis;

namespace {

IntMat from_rows(std::vector<std::vector<long>> rows) {
  IntMat M(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j) M.at(i, j) = rows[i][j];
  return M;
}

IntMat random_mat(long m, long n, long range, std::mt19937_64& rng) {
  IntMat M(m, n);
  for (long i = 0; i < m; ++i)
    for (long j = 0; j < n; ++j) M.at(i, j) = (long)(rng() % (2 * range + 1)) - range;
  return M;
}

}  // namespace

TEST_CASE("hnf canonical examples") {
  CHECK(hnf(from_rows({{2, 0}, {0, 3}})) == from_rows({{2, 0}, {0, 3}}));
  CHECK(hnf(from_rows({{1, 2}, {3, 4}})) == from_rows({{1, 0}, {0, 2}}));
  CHECK(hnf(IntMat::identity(4)) == IntMat::identity(4));
  // zero matrix: empty-row H
  CHECK(hnf(IntMat(3, 3)).m == 0);
}

TEST_CASE("hnf idempotent and transform-consistent") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 30; ++t) {
    IntMat M = random_mat(5, 4, 20, rng);
    IntMat H = hnf(M);
    CHECK(hnf(H) == H);
    auto [H2, U] = hnf_transform(M);
    CHECK(mul(U, M) == H2);
    // same nonzero rows
    IntMat H2top(H.m, H.n);
    for (long i = 0; i < H.m; ++i)
      for (long j = 0; j < H.n; ++j) H2top.at(i, j) = H2.at(i, j);
    CHECK(H2top == H);
    // U unimodular
    Int d = det_bareiss(U);
    CHECK((d == 1 || d == -1));
  }
}

TEST_CASE("snf divisors") {
  SUBCASE("diag(4,6) -> (2,12)") {
    auto d = snf_divisors(from_rows({{4, 0}, {0, 6}}));
    REQUIRE(d.size() == 2);
    CHECK(d[0] == 2);
    CHECK(d[1] == 12);
  }
  SUBCASE("identity") {
    auto d = snf_divisors(IntMat::identity(5));
    for (auto& x : d) CHECK(x == 1);
  }
  SUBCASE("[[p,p],[0,p^2]] for p=5 -> (5,25)") {
    auto d = snf_divisors(from_rows({{5, 5}, {0, 25}}));
    REQUIRE(d.size() == 2);
    CHECK(d[0] == 5);
    CHECK(d[1] == 25);
  }
  SUBCASE("divisibility chain and |det| preservation") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 25; ++t) {
      IntMat M = random_mat(4, 4, 12, rng);
      Int det = det_bareiss(M);
      auto d = snf_divisors(M);
      Int prod = 1;
      for (size_t i = 0; i + 1 < d.size(); ++i)
        if (d[i] != 0 && d[i + 1] != 0) CHECK(divisible(d[i + 1], d[i]));
      for (auto& x : d) prod *= x;
      CHECK(prod == abs(det));
    }
  }
}

TEST_CASE("left kernel saturated") {
  SUBCASE("identity -> zero lattice") { CHECK(left_kernel(IntMat::identity(3)).m == 0); }
  SUBCASE("[[1,1],[1,1]] -> span{(1,-1)}") {
    IntMat K = left_kernel(from_rows({{1, 1}, {1, 1}}));
    REQUIRE(K.m == 1);
    CHECK(K.at(0, 0) * K.at(0, 1) == -1);
  }
  SUBCASE("random 5x3: v*M = 0 and saturation") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 20; ++t) {
      IntMat M = random_mat(5, 3, 9, rng);
      IntMat K = left_kernel(M);
      for (long i = 0; i < K.m; ++i) {
        auto v = mul_row(K.row(i), M);
        for (auto& x : v) CHECK(x == 0);
      }
      if (K.m > 0) {
        // saturation: elementary divisors of the kernel basis are all 1
        auto d = snf_divisors(K);
        for (auto& x : d) CHECK(x == 1);
      }
    }
  }
}

TEST_CASE("charpoly") {
  SUBCASE("[[2,1],[1,2]] -> x^2-4x+3") {
    auto c = charpoly(from_rows({{2, 1}, {1, 2}}));
    CHECK(UniPoly(c) == UniPoly({Int(3), Int(-4), Int(1)}));
  }
  SUBCASE("zero 3x3 -> x^3") {
    auto c = charpoly(IntMat(3, 3));
    CHECK(UniPoly(c) == UniPoly({Int(0), Int(0), Int(0), Int(1)}));
  }
  SUBCASE("companion matrix of x^3-x-1") {
    IntMat C(3, 3);
    C.at(0, 1) = 1;
    C.at(1, 2) = 1;
    C.at(2, 0) = 1;  // companion of x^3 - x - 1: last row = (1, 1, 0)
    C.at(2, 1) = 1;
    auto c = charpoly(C);
    CHECK(UniPoly(c) == UniPoly({Int(-1), Int(-1), Int(0), Int(1)}));
  }
  SUBCASE("Cayley-Hamilton up to dim 12") {
    std::mt19937_64 rng(1234);
    for (long n : {1L, 3L, 6L, 9L, 12L}) {
      IntMat A = random_mat(n, n, 5, rng);
      auto c = charpoly(A);
      // evaluate at A by Horner
      IntMat R(n, n);
      for (long k = n; k >= 0; --k) {
        R = mul(R, A);
        for (long i = 0; i < n; ++i) R.at(i, i) += c[k];
      }
      CHECK(R.is_zero());
    }
  }
}

TEST_CASE("hnf solver") {
  std::mt19937_64 rng(5);
  IntMat B = from_rows({{2, 1, 0}, {0, 3, 1}});
  HnfSolver S(B);
  SUBCASE("lattice membership") {
    std::vector<Int> v = {Int(2), Int(4), Int(1)};  // row0 + row1
    CHECK(S.in_lattice(v));
    std::vector<Rat> x;
    CHECK(S.solve(v, x));
    CHECK(x[0] == 1);
    CHECK(x[1] == 1);
    std::vector<Int> w = {Int(1), Int(2), Int(0)};
    CHECK_FALSE(S.in_lattice(w));
  }
  SUBCASE("rational solve") {
    std::vector<Int> v = {Int(1), Int(2), Int(1)};
    std::vector<Rat> x;
    bool insp = S.solve(v, x);
    if (insp) {
      std::vector<Rat> check(3, Rat(0));
      for (long i = 0; i < B.m; ++i)
        for (long j = 0; j < B.n; ++j) check[j] += x[i] * Rat(B.at(i, j));
      for (long j = 0; j < 3; ++j) CHECK(check[j] == Rat(v[j]));
    }
  }
}
