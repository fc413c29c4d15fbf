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

#include <orderrank/core.hpp>

#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

namespace orderrank {
namespace {

using testing::random_matrix;
using testing::random_positions;

TEST(PermutationTest, RejectsNonBijection) {
  EXPECT_THROW(Permutation::from_positions({0, 0}), InvalidArgument);
  EXPECT_THROW(Permutation::from_positions({0, 2}), InvalidArgument);
  EXPECT_THROW(Permutation::from_positions({-1, 0}), InvalidArgument);
  EXPECT_NO_THROW(Permutation::from_positions({1, 0}));
}

TEST(PermutationTest, OneBasedRoundTrip) {
  const std::vector<int> one = {2, 3, 1};
  const auto p = Permutation::from_one_based(one);
  EXPECT_EQ(p.positions(), (std::vector<int>{1, 2, 0}));
  EXPECT_EQ(p.one_based(), one);
  EXPECT_THROW(Permutation::from_one_based(std::vector<int>{0, 1}), InvalidArgument);
}

TEST(InvertTest, Identity) {
  EXPECT_EQ(invert(Permutation::identity(4)), Permutation::identity(4));
}

TEST(InvertTest, ThreeCycle) {
  const auto p = Permutation::from_one_based(std::vector<int>{2, 3, 1});
  const auto inv = invert(p);
  EXPECT_EQ(inv.one_based(), (std::vector<int>{3, 1, 2}));
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(inv[p[i]], static_cast<int>(i));
}

TEST(InvertTest, Involution) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const auto p = Permutation::from_positions(random_positions(rng, 1 + t % 7));
    EXPECT_EQ(invert(invert(p)), p);
  }
}

TEST(ApplyPermutationTest, IdentityLeavesItems) {
  std::mt19937_64 rng(1);
  const ItemList x(random_matrix(rng, 3, 4));
  EXPECT_EQ(apply_permutation(x, Permutation::identity(4)), x);
}

TEST(ApplyPermutationTest, Swap) {
  Matrix m(1, 2);
  m << 10.0, 20.0;
  const auto out = apply_permutation(ItemList(m), Permutation::from_one_based(std::vector<int>{2, 1}));
  EXPECT_EQ(out.features()(0, 0), 20.0);
  EXPECT_EQ(out.features()(0, 1), 10.0);
}

TEST(ApplyPermutationTest, InverseRecoversOriginal) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 6;
    const ItemList x(random_matrix(rng, 3, n));
    const auto p = Permutation::from_positions(random_positions(rng, n));
    const auto y = apply_permutation(x, p);
    for (int i = 0; i < n; ++i) EXPECT_EQ(y.item(p[i]), x.item(i));
    EXPECT_EQ(apply_permutation(y, invert(p)), x);
  }
}

TEST(ApplyPermutationTest, DimensionMismatch) {
  std::mt19937_64 rng(3);
  const ItemList x(random_matrix(rng, 2, 3));
  EXPECT_THROW(apply_permutation(x, Permutation::identity(2)), DimensionError);
}

TEST(SortDescendingTest, HandExamples) {
  EXPECT_EQ(sort_descending(std::vector<double>{3.0, 1.0, 2.0}).one_based(), (std::vector<int>{1, 3, 2}));
  EXPECT_EQ(sort_descending(std::vector<double>{5.0}).one_based(), (std::vector<int>{1}));
  EXPECT_EQ(sort_descending(std::vector<double>{2.0, 2.0}).one_based(), (std::vector<int>{1, 2}));
}

TEST(SortDescendingTest, EmptyRejected) {
  EXPECT_THROW(sort_descending(std::vector<double>{}), InvalidArgument);
}

TEST(SortDescendingTest, RandomWithDuplicatesIsValidAndOrdered) {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> small(0, 3);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> v(1 + t % 9);
    for (auto& x : v) x = small(rng);
    const auto p = sort_descending(v);  // from_positions validates the bijection
    const auto at = p.items_by_position();
    for (std::size_t j = 1; j < at.size(); ++j) {
      ASSERT_GE(v[at[j - 1]], v[at[j]]);
      if (v[at[j - 1]] == v[at[j]]) ASSERT_LT(at[j - 1], at[j]);
    }
  }
}

TEST(ItemListTest, RejectsNonFiniteAndEmpty) {
  Matrix m = Matrix::Zero(2, 2);
  m(1, 1) = std::nan("");
  EXPECT_THROW(ItemList{m}, InvalidArgument);
  EXPECT_THROW(ItemList{Matrix(0, 3)}, InvalidArgument);
}

TEST(SessionTest, InvariantsEnforced) {
  const ItemList x(Matrix::Ones(2, 3));
  EXPECT_THROW(Session(x, Permutation::identity(2), 1.0), DimensionError);
  EXPECT_THROW(Session(x, Permutation::identity(3), -1.0), InvalidArgument);
  EXPECT_THROW(Session(x, Permutation::identity(3), std::nan("")), InvalidArgument);
  EXPECT_NO_THROW(Session(x, Permutation::identity(3), 0.0));
}

TEST(DatasetTest, InvariantsEnforced) {
  EXPECT_THROW(Dataset({}), InvalidArgument);
  std::vector<Session> mixed{Session(ItemList(Matrix::Ones(2, 3)), Permutation::identity(3), 1.0),
                             Session(ItemList(Matrix::Ones(2, 2)), Permutation::identity(2), 1.0)};
  EXPECT_THROW(Dataset(std::move(mixed)), DimensionError);
}

}  // namespace
}  // namespace orderrank
