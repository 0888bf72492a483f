#include "alsc/adaptive_graph.hpp"
#include "alsc/error.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

namespace alsc {
namespace {

TEST(Simplex, TwoNeighbors) {
  const std::vector<double> d{0, 1, 2, 3};
  const NeighborGraph g = solve_simplex(d, 2);
  EXPECT_EQ(g.ranked_index, (std::vector<std::size_t>{0, 1}));
  EXPECT_NEAR(g.weights[0], 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(g.weights[1], 1.0 / 3.0, 1e-15);
  EXPECT_FALSE(g.uniform_fallback);
  EXPECT_DOUBLE_EQ(gamma_of_k(d, 2), 1.5);
}

TEST(Simplex, AllEqualFallsBackToUniform) {
  const std::vector<double> d(6, 0.7);
  const NeighborGraph g = solve_simplex(d, 3);
  EXPECT_TRUE(g.uniform_fallback);
  EXPECT_EQ(g.ranked_index, (std::vector<std::size_t>{0, 1, 2}));
  for (double w : g.weights) EXPECT_DOUBLE_EQ(w, 1.0 / 3.0);
  EXPECT_EQ(gamma_of_k(d, 3), 0.0);
}

TEST(Simplex, TiedHeadFallsBackToLowestIndex) {
  const std::vector<double> d{0.5, 0.5, 2.0};
  const NeighborGraph g = solve_simplex(d, 1);
  EXPECT_TRUE(g.uniform_fallback);
  EXPECT_EQ(g.ranked_index, (std::vector<std::size_t>{0}));
  EXPECT_EQ(g.weights[0], 1.0);
}

TEST(Simplex, RankingUsesIndexOnTies) {
  const std::vector<double> d{3, 1, 2, 1, 5};
  const NeighborGraph g = solve_simplex(d, 3);
  EXPECT_EQ(g.ranked_index, (std::vector<std::size_t>{1, 3, 2}));
}

TEST(Simplex, RejectsBadInput) {
  const std::vector<double> d{1, 2};
  EXPECT_THROW(solve_simplex(d, 2), Error);
  EXPECT_THROW(solve_simplex(d, 0), Error);
  const std::vector<double> neg{1, -2, 3};
  EXPECT_THROW(solve_simplex(neg, 1), Error);
  const std::vector<double> nan{1, std::nan(""), 3};
  EXPECT_THROW(solve_simplex(nan, 1), Error);
}

TEST(Simplex, FeasibleSparseAndMonotone) {
  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int t = 0; t < 500; ++t) {
    const std::size_t n = 2 + gen() % 40;
    const std::size_t k = 1 + gen() % (n - 1);
    std::vector<double> d(n);
    for (double& x : d) x = u(gen);
    const NeighborGraph g = solve_simplex(d, k);
    ASSERT_EQ(g.size(), k);
    const double sum = std::accumulate(g.weights.begin(), g.weights.end(), 0.0);
    EXPECT_NEAR(sum, 1.0, 1e-10);
    for (std::size_t h = 0; h < k; ++h) {
      EXPECT_GE(g.weights[h], -1e-10);
      EXPECT_LE(g.weights[h], 1.0 + 1e-10);
      if (h > 0) EXPECT_LE(g.weights[h], g.weights[h - 1]);
    }
    const auto dense = to_dense(g, n);
    EXPECT_EQ(std::count_if(dense.begin(), dense.end(), [](double w) { return w != 0.0; }) <=
                  static_cast<long>(k),
              true);
    EXPECT_GE(gamma_of_k(d, k), 0.0);
    EXPECT_NEAR(gamma_of_k(d, k), oracle::gamma_reference(d, k), 1e-12);
  }
}

TEST(Simplex, MatchesProjectionOracle) {
  std::mt19937_64 gen(22);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + gen() % 11;
    const std::size_t k = 1 + gen() % (n - 1);
    std::vector<double> d(n);
    for (double& x : d) x = u(gen);
    const double gamma = gamma_of_k(d, k);
    const auto expected = oracle::qp_minimizer(d, gamma);
    const auto got = to_dense(solve_simplex(d, k), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(got[i], expected[i], 1e-8);
  }
}

TEST(Simplex, PermutationEquivariant) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 10;
    std::vector<double> d(n);
    for (double& x : d) x = u(gen);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<double> pd(n);
    for (std::size_t i = 0; i < n; ++i) pd[i] = d[perm[i]];
    const auto a = to_dense(solve_simplex(d, 4), n);
    const auto b = to_dense(solve_simplex(pd, 4), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(b[i], a[perm[i]], 1e-14);
  }
}

TEST(Simplex, InvariantToShiftAndScaleOfDistances) {
  const std::vector<double> d{0.3, 0.1, 0.9, 0.4, 0.2};
  std::vector<double> e(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) e[i] = 3.0 * d[i] + 7.0;
  const auto a = solve_simplex(d, 3), b = solve_simplex(e, 3);
  EXPECT_EQ(a.ranked_index, b.ranked_index);
  for (std::size_t h = 0; h < 3; ++h) EXPECT_NEAR(a.weights[h], b.weights[h], 1e-12);
}

}  // namespace
}  // namespace alsc
