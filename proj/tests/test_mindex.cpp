#include <doctest.h>

#include <set>

#include "generators.hpp"
#include "mvop/errors.hpp"
#include "mvop/mindex.hpp"
#include "oracles.hpp"

using mvop::MultiIndex;
using mvop::MultiIndexSet;

TEST_CASE("space dimensions of the experiment degrees") {
  CHECK(mvop::dims(2, 39).R == 820);
  CHECK(mvop::dims(3, 15).R == 816);
  for (int n = 0; n <= 60; ++n) CHECK(mvop::dims(2, n).delta_r == 1);
}

TEST_CASE("univariate dimensions") {
  const auto s = mvop::dims(1, 7);
  CHECK(s.r == 1);
  CHECK(s.R == 8);
}

TEST_CASE("dims rejects bad arguments and overflow") {
  CHECK_THROWS_AS(mvop::dims(0, 3), mvop::DomainError);
  CHECK_THROWS_AS(mvop::dims(2, -1), mvop::DomainError);
  CHECK_THROWS_AS(mvop::binomial(200, 100), mvop::OverflowError);
  CHECK_THROWS_AS(mvop::dims(1000, 1000), mvop::OverflowError);
  CHECK(mvop::binomial(66, 33) == 7219428434016265740ULL);
}

TEST_CASE("small levels in graded lexicographic order") {
  const MultiIndexSet s(2, 2);
  REQUIRE(s.level(0).size() == 1);
  CHECK(s.level(0)[0].entries() == std::vector<int>{0, 0});
  REQUIRE(s.level(1).size() == 2);
  CHECK(s.level(1)[0].entries() == std::vector<int>{1, 0});
  CHECK(s.level(1)[1].entries() == std::vector<int>{0, 1});
  CHECK(s.level(2).size() == 3);

  const MultiIndexSet t(3, 0);
  REQUIRE(t.level(0).size() == 1);
  CHECK(t.level(0)[0].entries() == std::vector<int>{0, 0, 0});
}

TEST_CASE("successor positions") {
  const MultiIndexSet s(2, 2);
  // J_1 = [(1,0), (0,1)], J_2 = [(2,0), (1,1), (0,2)]
  CHECK(s.successor(0, 0, 0) == 0);
  CHECK(s.successor(1, 0, 1) == 1);
  CHECK(s.successor(1, 1, 1) == 2);

  const MultiIndexSet u(1, 6);
  for (int n = 0; n < 6; ++n) CHECK(u.successor(n, 0, 0) == 0);

  CHECK_THROWS_AS(s.successor(2, 0, 0), mvop::DomainError);
  CHECK_THROWS_AS(s.successor(1, 2, 0), mvop::DomainError);
  CHECK_THROWS_AS(s.successor(1, 0, 2), mvop::DomainError);
  CHECK_THROWS_AS(s.successor(-1, 0, 0), mvop::DomainError);
}

TEST_CASE("multi-index basics") {
  const MultiIndex a({2, 0, 3});
  CHECK(a.degree() == 5);
  CHECK(a.incremented(1).entries() == std::vector<int>{2, 1, 3});
  CHECK_THROWS_AS(MultiIndex({1, -1}), mvop::DomainError);
  CHECK_THROWS_AS(a.incremented(3), mvop::DomainError);
}

TEST_CASE("property: levels match brute-force enumeration") {
  gen::for_seeds(40, [](std::uint64_t seed) {
    CAPTURE(seed);
    gen::Gen g(seed);
    const int d = g.integer(1, 5);
    const int N = g.integer(0, d >= 4 ? 6 : 9);
    const MultiIndexSet s(d, N);
    std::size_t total = 0;
    for (int n = 0; n <= N; ++n) {
      const auto expected = oracle::enumerate_level(d, n);
      const auto& level = s.level(n);
      REQUIRE(level.size() == expected.size());
      for (std::size_t k = 0; k < level.size(); ++k) {
        CHECK(level[k].entries() == expected[k]);
        CHECK(level[k].degree() == n);
        for (int e : level[k].entries()) CHECK(e >= 0);
        const auto [pn, pk] = s.position(level[k]);
        CHECK(pn == n);
        CHECK(pk == k);
      }
      const auto dm = mvop::dims(d, n);
      CHECK(dm.r == oracle::choose(n + d - 1, n));
      CHECK(dm.R == oracle::choose(n + d, n));
      CHECK(dm.delta_r == dm.r - (n ? oracle::choose(n + d - 2, n - 1) : 0));
      total += level.size();
      CHECK(s.total_size(n) == total);
      CHECK(dm.R == total);
      CHECK(s.offset(n) == total - level.size());
    }
    const auto flat = s.flattened(N);
    REQUIRE(flat.size() == total);
    for (std::size_t j = 0; j < flat.size(); ++j) CHECK(s.degree_of(j) == flat[j].degree());
  });
}

TEST_CASE("property: successor is injective per coordinate and covers the next level") {
  gen::for_seeds(40, [](std::uint64_t seed) {
    CAPTURE(seed);
    gen::Gen g(seed);
    const int d = g.integer(1, 5);
    const int N = g.integer(1, d >= 4 ? 6 : 9);
    const MultiIndexSet s(d, N);
    for (int n = 0; n < N; ++n) {
      std::set<std::size_t> covered;
      for (int i = 0; i < d; ++i) {
        std::set<std::size_t> image;
        for (std::size_t k = 0; k < s.level_size(n); ++k) {
          const std::size_t q = s.successor(n, k, i);
          CHECK(s.level(n + 1)[q] == s.level(n)[k].incremented(i));
          image.insert(q);
          covered.insert(q);
        }
        CHECK(image.size() == s.level_size(n));
      }
      CHECK(covered.size() == s.level_size(n + 1));
    }
  });
}
