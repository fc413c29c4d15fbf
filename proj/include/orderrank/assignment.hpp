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

// Score-maximizing assignment of items (rows) to positions (columns).

#pragma once

#include <orderrank/core.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <tuple>
#include <vector>

namespace orderrank {

struct Assignment {
  Permutation item_to_position;
  double total = 0.0;  // sum_i S(i, item_to_position[i])
};

namespace detail {

inline void check_square_finite(const Matrix& s, const char* who) {
  if (s.rows() != s.cols() || s.rows() < 1) {
    throw DimensionError(std::string(who) + ": matrix must be square and non-empty");
  }
  if (!s.allFinite()) throw InvalidArgument(std::string(who) + ": matrix has non-finite entries");
}

inline Assignment make_assignment(const Matrix& s, std::vector<int> positions) {
  double total = 0.0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    total += s(static_cast<Eigen::Index>(i), positions[i]);
  }
  return Assignment{Permutation::from_positions(std::move(positions)), total};
}

}  // namespace detail

/// Exact maximum-weight assignment by successive shortest augmenting paths
/// with row/column potentials (Hungarian method), O(n^3).
inline Assignment solve_lsap_exact(const Matrix& s) {
  detail::check_square_finite(s, "solve_lsap_exact");
  const int n = static_cast<int>(s.rows());
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Minimize cost = -S. Index 0 is a sentinel column; rows/cols are 1-based.
  std::vector<double> row_pot(n + 1, 0.0), col_pot(n + 1, 0.0);
  std::vector<int> row_of_col(n + 1, 0), prev_col(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    row_of_col[0] = i;
    int col = 0;
    std::vector<double> min_slack(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col] = 1;
      const int row = row_of_col[col];
      double delta = kInf;
      int next = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = -s(row - 1, j - 1) - row_pot[row] - col_pot[j];
        if (reduced < min_slack[j]) {
          min_slack[j] = reduced;
          prev_col[j] = col;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          next = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          row_pot[row_of_col[j]] += delta;
          col_pot[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      col = next;
    } while (row_of_col[col] != 0);
    do {
      const int p = prev_col[col];
      row_of_col[col] = row_of_col[p];
      col = p;
    } while (col != 0);
  }
  std::vector<int> positions(n);
  for (int j = 1; j <= n; ++j) positions[row_of_col[j] - 1] = j - 1;
  return detail::make_assignment(s, std::move(positions));
}

/// Greedy: take the largest remaining entry whose row and column are both
/// free. Guarantees at least half the optimal total on non-negative input.
/// Equal entries are taken in row-major order.
inline Assignment solve_lsap_greedy(const Matrix& s) {
  detail::check_square_finite(s, "solve_lsap_greedy");
  if ((s.array() < 0.0).any()) {
    throw InvalidArgument("solve_lsap_greedy: entries must be non-negative");
  }
  const auto n = static_cast<int>(s.rows());
  std::vector<std::pair<int, int>> cells;
  cells.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cells.emplace_back(i, j);
  std::stable_sort(cells.begin(), cells.end(), [&](const auto& a, const auto& b) {
    return s(a.first, a.second) > s(b.first, b.second);
  });
  std::vector<int> positions(n, -1);
  std::vector<char> col_taken(n, 0);
  int assigned = 0;
  for (const auto& [i, j] : cells) {
    if (positions[i] >= 0 || col_taken[j]) continue;
    positions[i] = j;
    col_taken[j] = 1;
    if (++assigned == n) break;
  }
  return detail::make_assignment(s, std::move(positions));
}

inline constexpr int kBruteForceMaxN = 8;

/// Exhaustive search over all n! assignments (n <= 8). Among equal totals
/// the lexicographically smallest item_to_position wins.
inline Assignment brute_force_assign(const Matrix& s) {
  detail::check_square_finite(s, "brute_force_assign");
  const auto n = static_cast<int>(s.rows());
  if (n > kBruteForceMaxN) throw InvalidArgument("brute_force_assign: n > 8");
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::vector<int> best = p;
  double best_total = -std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += s(i, p[i]);
    if (total > best_total) {
      best_total = total;
      best = p;
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return detail::make_assignment(s, std::move(best));
}

}  // namespace orderrank
