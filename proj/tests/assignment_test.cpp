// Copyright 2026 The orderrank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <orderrank/assignment.hpp>

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace orderrank {
namespace {

using testing::random_matrix;

Matrix integer_matrix(std::mt19937_64& rng, int n, int lo, int hi) {
  std::uniform_int_distribution<int> u(lo, hi);
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  return m;
}

double total_of(const Matrix& s, const Permutation& p) {
  double t = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) t += s(static_cast<Eigen::Index>(i), p[i]);
  return t;
}

TEST(LsapExactTest, Singleton) {
  Matrix s(1, 1);
  s << -3.5;
  const auto a = solve_lsap_exact(s);
  EXPECT_EQ(a.item_to_position, Permutation::identity(1));
  EXPECT_EQ(a.total, -3.5);
}

TEST(LsapExactTest, TwoByTwoPicksSwap) {
  Matrix s(2, 2);
  s << 1, 2, 4, 3;
  const auto a = solve_lsap_exact(s);
  EXPECT_EQ(a.item_to_position.one_based(), (std::vector<int>{2, 1}));
  EXPECT_EQ(a.total, 6.0);
}

TEST(LsapExactTest, DiagonallyDominantIsIdentity) {
  std::mt19937_64 rng(1);
  for (int n = 2; n <= 9; ++n) {
    Matrix s = random_matrix(rng, n, n, 0.0, 1.0);
    s.diagonal().array() += 10.0;
    EXPECT_EQ(solve_lsap_exact(s).item_to_position, Permutation::identity(n));
  }
}

TEST(LsapExactTest, RejectsBadInput) {
  EXPECT_THROW(solve_lsap_exact(Matrix::Ones(2, 3)), DimensionError);
  Matrix s = Matrix::Ones(2, 2);
  s(0, 1) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(solve_lsap_exact(s), InvalidArgument);
}

TEST(LsapExactTest, TotalMatchesSelectedEntries) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 50; ++t) {
    const Matrix s = random_matrix(rng, 6, 6, -5.0, 5.0);
    const auto a = solve_lsap_exact(s);
    EXPECT_EQ(a.total, total_of(s, a.item_to_position));
  }
}

TEST(LsapExactTest, EqualsBruteForceOnRandomMatrices) {
  std::mt19937_64 rng(3);
  for (int n = 2; n <= 7; ++n) {
    for (int t = 0; t < 100; ++t) {
      const Matrix real = random_matrix(rng, n, n, -10.0, 10.0);
      EXPECT_EQ(solve_lsap_exact(real).total, brute_force_assign(real).total) << "n = " << n;
      const Matrix ints = integer_matrix(rng, n, -20, 20);
      EXPECT_EQ(solve_lsap_exact(ints).total, brute_force_assign(ints).total) << "n = " << n;
    }
  }
}

TEST(LsapExactTest, InvariantUnderRowAndColumnShifts) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 6;
    const Matrix s = integer_matrix(rng, n, 0, 30);
    const auto base = solve_lsap_exact(s);
    Matrix row = s;
    row.row(t % n).array() += 7.0;
    Matrix col = s;
    col.col((t + 1) % n).array() -= 5.0;
    const auto r = solve_lsap_exact(row);
    const auto c = solve_lsap_exact(col);
    EXPECT_EQ(r.total, base.total + 7.0);
    EXPECT_EQ(c.total, base.total - 5.0);
    // Each solution is still optimal for the unshifted matrix.
    EXPECT_EQ(total_of(s, r.item_to_position), base.total);
    EXPECT_EQ(total_of(s, c.item_to_position), base.total);
  }
}

TEST(LsapExactTest, LargerInstanceIsAPermutationAndBeatsGreedy) {
  std::mt19937_64 rng(5);
  const Matrix s = random_matrix(rng, 60, 60, 0.0, 1.0);
  const auto exact = solve_lsap_exact(s);
  EXPECT_EQ(exact.item_to_position.size(), 60u);
  EXPECT_GE(exact.total, solve_lsap_greedy(s).total);
}

TEST(LsapGreedyTest, Singleton) {
  Matrix s(1, 1);
  s << 2.0;
  EXPECT_EQ(solve_lsap_greedy(s).total, 2.0);
}

TEST(LsapGreedyTest, RejectsNegativeEntries) {
  Matrix s = Matrix::Ones(2, 2);
  s(1, 0) = -0.1;
  EXPECT_THROW(solve_lsap_greedy(s), InvalidArgument);
}

TEST(LsapGreedyTest, AtLeastHalfOfOptimal) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 200; ++t) {
    const Matrix s = random_matrix(rng, 8, 8, 0.0, 1.0);
    EXPECT_GE(solve_lsap_greedy(s).total, 0.5 * solve_lsap_exact(s).total);
  }
}

TEST(LsapGreedyTest, HalfBoundIsTight) {
  // Greedy takes the 1 + eps corner and is forced into the zero entry.
  Matrix s(2, 2);
  s << 1.01, 1.0, 1.0, 0.0;
  EXPECT_DOUBLE_EQ(solve_lsap_greedy(s).total, 1.01);
  EXPECT_DOUBLE_EQ(solve_lsap_exact(s).total, 2.0);
}

TEST(LsapGreedyTest, ExactOnRankOne) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 8;
    const Vector payoff = testing::random_vector(rng, n, 0.0, 3.0);
    const Vector gain = testing::random_vector(rng, n, 0.0, 1.0);
    const Matrix s = payoff * gain.transpose();
    EXPECT_DOUBLE_EQ(solve_lsap_greedy(s).total, solve_lsap_exact(s).total);
  }
}

TEST(BruteForceTest, SingletonAndTies) {
  Matrix one(1, 1);
  one << 4.0;
  EXPECT_EQ(brute_force_assign(one).total, 4.0);
  EXPECT_EQ(brute_force_assign(Matrix::Constant(5, 5, 2.0)).item_to_position, Permutation::identity(5));
}

TEST(BruteForceTest, LexicographicTieBreak) {
  // Both swaps of a 2x2 all-ones block tie; the smaller one wins.
  Matrix s = Matrix::Zero(3, 3);
  s(0, 1) = s(1, 0) = s(0, 0) = s(1, 1) = 1.0;
  s(2, 2) = 1.0;
  EXPECT_EQ(brute_force_assign(s).item_to_position.positions(), (std::vector<int>{0, 1, 2}));
}

TEST(BruteForceTest, RejectsLargeN) {
  EXPECT_THROW(brute_force_assign(Matrix::Ones(9, 9)), InvalidArgument);
}

}  // namespace
}  // namespace orderrank
