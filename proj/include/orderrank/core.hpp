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

// Lists of items, display orders and scored sessions.
//
// A Permutation is stored as "position of item i" (zero-based internally).
// Anything that walks a list in display order goes through invert() to get
// "item at position j". External formats use one-based positions; the
// conversion lives in io.hpp.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace orderrank {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes of two arguments do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A value violates a type invariant (non-finite entry, negative score, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// An optimizer produced a non-finite objective.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// How an iterative trainer stopped.
enum class TrainStatus {
  kConverged,      // objective decrease fell below tolerance
  kMaxIterations,  // iteration budget exhausted first
  kStalled,        // a full backtracking sweep found no non-increasing step
};

inline const char* to_string(TrainStatus s) {
  switch (s) {
    case TrainStatus::kConverged: return "converged";
    case TrainStatus::kMaxIterations: return "max_iterations";
    case TrainStatus::kStalled: return "stalled";
  }
  return "unknown";
}

namespace detail {

inline bool all_finite(const Eigen::Ref<const Matrix>& m) {
  return m.allFinite();
}

inline void require_dims(bool ok, const char* what) {
  if (!ok) throw DimensionError(what);
}

}  // namespace detail

/// A bijection of {0..n-1}; positions()[i] is the display position of item i.
class Permutation {
 public:
  Permutation() = default;

  static Permutation identity(std::size_t n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return Permutation(std::move(p));
  }

  /// Throws InvalidArgument unless `positions` is a bijection onto {0..n-1}.
  static Permutation from_positions(std::vector<int> positions) {
    std::vector<char> seen(positions.size(), 0);
    for (int p : positions) {
      if (p < 0 || static_cast<std::size_t>(p) >= positions.size() || seen[p]) {
        throw InvalidArgument("permutation is not a bijection onto its index set");
      }
      seen[p] = 1;
    }
    return Permutation(std::move(positions));
  }

  static Permutation from_one_based(std::span<const int> positions) {
    std::vector<int> p(positions.begin(), positions.end());
    for (int& x : p) --x;
    return from_positions(std::move(p));
  }

  std::size_t size() const { return positions_.size(); }
  int operator[](std::size_t item) const { return positions_[item]; }
  const std::vector<int>& positions() const { return positions_; }

  std::vector<int> one_based() const {
    std::vector<int> p(positions_);
    for (int& x : p) ++x;
    return p;
  }

  /// Item index shown at each display position.
  std::vector<int> items_by_position() const {
    std::vector<int> out(positions_.size());
    for (std::size_t i = 0; i < positions_.size(); ++i) {
      out[positions_[i]] = static_cast<int>(i);
    }
    return out;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  explicit Permutation(std::vector<int> positions)
      : positions_(std::move(positions)) {}

  std::vector<int> positions_;
};

inline Permutation invert(const Permutation& perm) {
  return Permutation::from_positions(perm.items_by_position());
}

/// Positions that would place `values` in descending order; equal values keep
/// their original relative order.
inline Permutation sort_descending(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("sort_descending: empty input");
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  std::vector<int> positions(values.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    positions[order[r]] = static_cast<int>(r);
  }
  return Permutation::from_positions(std::move(positions));
}

inline Permutation sort_descending(const Vector& values) {
  return sort_descending(std::span<const double>(values.data(), values.size()));
}

/// d x n feature matrix, one column per item.
class ItemList {
 public:
  ItemList() = default;

  explicit ItemList(Matrix features) : features_(std::move(features)) {
    if (features_.rows() < 1 || features_.cols() < 1) {
      throw InvalidArgument("item list needs d >= 1 and n >= 1");
    }
    if (!detail::all_finite(features_)) {
      throw InvalidArgument("item list has non-finite features");
    }
  }

  const Matrix& features() const { return features_; }
  std::size_t d() const { return static_cast<std::size_t>(features_.rows()); }
  std::size_t n() const { return static_cast<std::size_t>(features_.cols()); }
  auto item(std::size_t i) const { return features_.col(static_cast<Eigen::Index>(i)); }

  friend bool operator==(const ItemList& a, const ItemList& b) {
    return a.features_.rows() == b.features_.rows() &&
           a.features_.cols() == b.features_.cols() &&
           a.features_ == b.features_;
  }

 private:
  Matrix features_;
};

/// Column at display position perm[i] is input column i.
inline ItemList apply_permutation(const ItemList& items, const Permutation& perm) {
  detail::require_dims(perm.size() == items.n(),
                       "apply_permutation: permutation length differs from n");
  Matrix out(items.features().rows(), items.features().cols());
  for (std::size_t i = 0; i < items.n(); ++i) {
    out.col(perm[i]) = items.item(i);
  }
  return ItemList(std::move(out));
}

/// One observed example: a list, the order it was shown in, and its score.
struct Session {
  Session(ItemList items_in, Permutation shown, double score_in)
      : items(std::move(items_in)), shown_order(std::move(shown)), score(score_in) {
    detail::require_dims(shown_order.size() == items.n(),
                         "session: shown order length differs from n");
    if (!std::isfinite(score) || score < 0.0) {
      throw InvalidArgument("session: score must be finite and non-negative");
    }
  }

  ItemList items;
  Permutation shown_order;
  double score;
};

/// Non-empty collection of sessions sharing n and d.
class Dataset {
 public:
  explicit Dataset(std::vector<Session> sessions) : sessions_(std::move(sessions)) {
    if (sessions_.empty()) throw InvalidArgument("dataset must be non-empty");
    const auto n = sessions_.front().items.n();
    const auto d = sessions_.front().items.d();
    for (const auto& s : sessions_) {
      if (s.items.n() != n || s.items.d() != d) {
        throw DimensionError("dataset: sessions disagree on n or d");
      }
    }
  }

  std::size_t size() const { return sessions_.size(); }
  std::size_t n() const { return sessions_.front().items.n(); }
  std::size_t d() const { return sessions_.front().items.d(); }
  const Session& operator[](std::size_t i) const { return sessions_[i]; }
  auto begin() const { return sessions_.begin(); }
  auto end() const { return sessions_.end(); }
  const std::vector<Session>& sessions() const { return sessions_; }

  std::vector<double> scores() const {
    std::vector<double> s;
    s.reserve(sessions_.size());
    for (const auto& x : sessions_) s.push_back(x.score);
    return s;
  }

 private:
  std::vector<Session> sessions_;
};

}  // namespace orderrank
