#include "doctest.h"
#include "eisdepth/unipoly.hpp"

#include <random>

using namespace eis;

namespace {

UniPoly P(std::vector<long> coeffs) {
  std::vector<Int> c(coeffs.size());
  for (size_t i = 0; i < coeffs.size(); ++i) c[i] = coeffs[i];
  return UniPoly(std::move(c));
}

UniPoly product(const std::vector<std::pair<UniPoly, int>>& fs) {
  UniPoly r = UniPoly::constant(1);
  for (const auto& [g, m] : fs)
    for (int i = 0; i < m; ++i) r = mul(r, g);
  return r;
}

}  // namespace

TEST_CASE("basic arithmetic") {
  UniPoly f = P({-1, 0, 1});  // x^2 - 1
  UniPoly g = P({1, 1});      // x + 1
  CHECK(mul(g, P({-1, 1})) == f);
  auto [q, r] = divrem_monic(f, g);
  CHECK(q == P({-1, 1}));
  CHECK(r.is_zero());
  CHECK(f.eval(Int(3)) == 8);
  UniPoly qq;
  CHECK(try_divide(f, g, qq));
  CHECK(qq == P({-1, 1}));
  CHECK_FALSE(try_divide(f, P({1, 3}), qq));
}

TEST_CASE("gcd_poly") {
  UniPoly f = mul(P({-1, 1}), P({1, 0, 1}));
  UniPoly g = mul(P({-1, 1}), P({3, 1}));
  CHECK(gcd_poly(f, g) == P({-1, 1}));
  CHECK(gcd_poly(P({2, 2}), P({4})).degree() == 0);
  std::mt19937_64 rng(17);
  for (int t = 0; t < 15; ++t) {
    auto rnd = [&](int d) {
      std::vector<Int> c(d + 1);
      for (auto& x : c) x = (long)(rng() % 11) - 5;
      c[d] = 1 + (long)(rng() % 3);
      return UniPoly(std::move(c));
    };
    UniPoly h = rnd(2), a = rnd(3), b = rnd(2);
    UniPoly gg = gcd_poly(mul(h, a), mul(h, b));
    UniPoly q;
    CHECK(try_divide(gg, h.primitive_part(), q));  // h | gcd
  }
}

TEST_CASE("squarefree decomposition") {
  // (x-1)^2 (x^2+1)
  UniPoly f = mul(mul(P({-1, 1}), P({-1, 1})), P({1, 0, 1}));
  auto parts = squarefree_decomposition(f);
  UniPoly rebuilt = UniPoly::constant(1);
  for (auto& [s, i] : parts)
    for (int k = 0; k < i; ++k) rebuilt = mul(rebuilt, s);
  CHECK(rebuilt == f);
  bool saw2 = false;
  for (auto& [s, i] : parts)
    if (i == 2) {
      saw2 = true;
      CHECK(s == P({-1, 1}));
    }
  CHECK(saw2);
}

TEST_CASE("factor: fixed examples") {
  SUBCASE("x^4 - 1") {
    auto fs = factor(P({-1, 0, 0, 0, 1}));
    REQUIRE(fs.size() == 3);
    CHECK(product(fs) == P({-1, 0, 0, 0, 1}));
    for (auto& [g, m] : fs) CHECK(m == 1);
    CHECK(fs[0].first == P({-1, 1}));
    CHECK(fs[1].first == P({1, 1}));
    CHECK(fs[2].first == P({1, 0, 1}));
  }
  SUBCASE("x^2 - x - 1 irreducible") {
    CHECK(is_irreducible(P({-1, -1, 1})));
  }
  SUBCASE("(x-1)^2 (x^2+1) multiplicities") {
    UniPoly f = mul(mul(P({-1, 1}), P({-1, 1})), P({1, 0, 1}));
    auto fs = factor(f);
    REQUIRE(fs.size() == 2);
    CHECK(product(fs) == f);
    CHECK(fs[0] == std::make_pair(P({-1, 1}), 2));
    CHECK(fs[1] == std::make_pair(P({1, 0, 1}), 1));
  }
}

TEST_CASE("factor: reconstruction property") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 12; ++t) {
    auto rnd = [&](int d) {
      std::vector<Int> c(d + 1);
      for (auto& x : c) x = (long)(rng() % 21) - 10;
      c[d] = 1;
      return UniPoly(std::move(c));
    };
    UniPoly f = mul(rnd(3), rnd(4));
    if (f.is_zero()) continue;
    auto fs = factor(f);
    CHECK(product(fs) == f.primitive_part());
    // factoring a factor returns itself
    for (auto& [g, m] : fs) {
      auto gs = factor(g);
      REQUIRE(gs.size() == 1);
      CHECK(gs[0].first == g);
      CHECK(gs[0].second == 1);
    }
  }
}

TEST_CASE("factor: non-monic input") {
  UniPoly f = mul(P({1, 2}), P({-3, 0, 2}));  // (2x+1)(2x^2-3)
  auto fs = factor(f);
  REQUIRE(fs.size() == 2);
  CHECK(product(fs) == f.primitive_part());
}

TEST_CASE("resultant and discriminant") {
  // disc(x^2 - x - 1) = 5
  CHECK(discriminant(P({-1, -1, 1})) == 5);
  // disc(x^2 - 5) = 20
  CHECK(discriminant(P({-5, 0, 1})) == 20);
  // disc(x^3 - x - 1) = -23
  CHECK(discriminant(P({-1, -1, 0, 1})) == -23);
}

TEST_CASE("qpoly inverse") {
  // inverse of x mod x^2 - x - 1 is x - 1
  QPoly g = {Rat(0), Rat(1)};
  QPoly f = {Rat(-1), Rat(-1), Rat(1)};
  QPoly inv = qinvmod(g, f);
  QPoly prod = qmul(g, inv);
  auto [q, r] = qdivrem(prod, f);
  REQUIRE(r.size() == 1);
  CHECK(r[0] == 1);
}
