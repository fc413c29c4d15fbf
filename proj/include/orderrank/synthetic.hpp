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

// Synthetic ground truth and data generation.
//
// Items are Gaussian around fixed per-slot means, lists are shown in
// uniformly random orders, and each session is scored by the gain vector
// weighted with the softmax of the true item relevances in display order.
// Also hosts the mean-score benchmark comparing ListMLE, weighted ListMLE
// and the payoff-gain model, and a dwell-time session generator with
// repeated lists for order-ranking evaluation.

#pragma once

#include <orderrank/core.hpp>
#include <orderrank/payoff_gain.hpp>
#include <orderrank/plackett_luce.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace orderrank {

using Rng = std::mt19937_64;

/// Mixes a base seed and a stream id into an independent generator seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct GroundTruth {
  Matrix mus;       // d x n, column i is the mean of the item in slot i
  Vector v_star;    // true relevance weights
  Vector g_star;    // true positional gains, non-negative
  double cov_scale;  // isotropic feature variance

  GroundTruth(Matrix mus_in, Vector v_in, Vector g_in, double cov)
      : mus(std::move(mus_in)), v_star(std::move(v_in)), g_star(std::move(g_in)), cov_scale(cov) {
    if (mus.rows() < 1 || mus.cols() < 1) throw InvalidArgument("GroundTruth: empty means");
    if (v_star.size() != mus.rows() || g_star.size() != mus.cols()) {
      throw DimensionError("GroundTruth: v_star must have d entries and g_star n entries");
    }
    if (!mus.allFinite() || !v_star.allFinite() || !g_star.allFinite() || !std::isfinite(cov_scale)) {
      throw InvalidArgument("GroundTruth: non-finite parameters");
    }
    if ((g_star.array() < 0.0).any()) throw InvalidArgument("GroundTruth: negative gain");
    if (cov_scale < 0.0) throw InvalidArgument("GroundTruth: negative covariance scale");
  }

  std::size_t n() const { return static_cast<std::size_t>(mus.cols()); }
  std::size_t d() const { return static_cast<std::size_t>(mus.rows()); }

  GroundTruth with_gains(Vector gains) const {
    return GroundTruth(mus, v_star, std::move(gains), cov_scale);
  }
};

inline constexpr double kDefaultCovScale = 0.1;

/// Means and v_star drawn i.i.d. Uniform[0,1]; gains start uniform (1/n each).
inline GroundTruth make_ground_truth(std::size_t n, std::size_t d, std::uint64_t seed,
                                     double cov_scale = kDefaultCovScale) {
  if (n < 1 || d < 1) throw InvalidArgument("make_ground_truth: n and d must be >= 1");
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix mus(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < mus.cols(); ++i)
    for (Eigen::Index k = 0; k < mus.rows(); ++k) mus(k, i) = unif(rng);
  Vector v(static_cast<Eigen::Index>(d));
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = unif(rng);
  Vector g = Vector::Constant(static_cast<Eigen::Index>(n), 1.0 / static_cast<double>(n));
  return GroundTruth(std::move(mus), std::move(v), std::move(g), cov_scale);
}

inline ItemList sample_list(const GroundTruth& gt, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double sd = std::sqrt(gt.cov_scale);
  Matrix x = gt.mus;
  for (Eigen::Index i = 0; i < x.cols(); ++i)
    for (Eigen::Index k = 0; k < x.rows(); ++k) x(k, i) += sd * normal(rng);
  return ItemList(std::move(x));
}

inline ItemList sample_list(const GroundTruth& gt, std::uint64_t seed) {
  Rng rng(seed);
  return sample_list(gt, rng);
}

/// Fisher-Yates shuffle of the identity.
inline Permutation random_permutation(std::size_t n, Rng& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(p[i - 1], p[pick(rng)]);
  }
  return Permutation::from_positions(std::move(p));
}

/// g_star . softmax(relevance of the item at each position).
inline double true_score(const GroundTruth& gt, const ItemList& items, const Permutation& perm) {
  detail::require_dims(items.d() == gt.d() && items.n() == gt.n() && perm.size() == gt.n(),
                       "true_score: list or permutation does not match ground truth");
  const Vector y = items.features().transpose() * gt.v_star;
  const double top = y.maxCoeff();
  double z = 0.0, acc = 0.0;
  for (std::size_t i = 0; i < items.n(); ++i) {
    const double w = std::exp(y[i] - top);
    z += w;
    acc += gt.g_star[perm[i]] * w;
  }
  return acc / z;
}

/// The order a relevance-sorting ranker would show: descending X^T v_star.
inline Permutation relevance_order(const GroundTruth& gt, const ItemList& items) {
  detail::require_dims(items.d() == gt.d(), "relevance_order: dimension mismatch");
  const Vector y = items.features().transpose() * gt.v_star;
  return sort_descending(y);
}

/// n sessions of fresh lists in uniformly random orders, scored by true_score.
inline Dataset generate_dataset(const GroundTruth& gt, std::size_t count, std::uint64_t seed) {
  if (count < 1) throw InvalidArgument("generate_dataset: need at least one session");
  Rng rng(seed);
  std::vector<Session> sessions;
  sessions.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    ItemList x = sample_list(gt, rng);
    Permutation p = random_permutation(gt.n(), rng);
    const double s = true_score(gt, x, p);
    sessions.emplace_back(std::move(x), std::move(p), s);
  }
  return Dataset(std::move(sessions));
}

/// Same lists, shown in their relevance order, each with score 1.
inline Dataset with_relevance_orders(const GroundTruth& gt, const Dataset& data) {
  std::vector<Session> sessions;
  sessions.reserve(data.size());
  for (const auto& s : data) sessions.emplace_back(s.items, relevance_order(gt, s.items), 1.0);
  return Dataset(std::move(sessions));
}

// ---------------------------------------------------------------------------
// Mean-score benchmark

struct BenchConfig {
  std::size_t n = 5;
  std::size_t d = 10;
  std::size_t n_train = 1000;
  std::size_t n_test = 500;
  double cov_scale = kDefaultCovScale;
  std::vector<std::vector<double>> gain_vectors = {
      {0.2, 0.2, 0.2, 0.2, 0.2},
      {0.00493, 0.00493, 0.493, 0.493, 0.00493},
      {0.1667, 0.04167, 0.25, 0.4167, 0.1250},
  };
  std::uint64_t seed = 1;
  GDConfig pl;
  AltMinConfig altmin;
  double lambda = kDefaultLambda;

  void validate() const {
    if (n < 1 || d < 1 || n_train < 1 || n_test < 1) {
      throw InvalidArgument("BenchConfig: sizes must be positive");
    }
    if (gain_vectors.empty()) throw InvalidArgument("BenchConfig: no gain vectors");
    for (const auto& g : gain_vectors) {
      if (g.size() != n) throw DimensionError("BenchConfig: gain vector length differs from n");
    }
    pl.validate();
    altmin.validate();
  }
};

struct BenchRow {
  std::vector<double> gain_vector;
  double listmle_mean;
  double weighted_listmle_mean;
  double payoff_gain_mean;
  // How each trainer stopped.
  TrainStatus listmle_status;
  TrainStatus weighted_listmle_status;
  TrainStatus payoff_gain_status;
};

struct BenchTable {
  std::uint64_t seed;
  std::vector<BenchRow> rows;
};

/// For each gain vector: train the three approaches on the same random-order
/// training lists and report each one's mean true score on fresh test lists
/// shown in its inferred order. The means and v_star are shared across rows.
inline BenchTable run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  const GroundTruth base = make_ground_truth(cfg.n, cfg.d, derive_seed(cfg.seed, 0), cfg.cov_scale);
  const std::uint64_t train_seed = derive_seed(cfg.seed, 1);
  const std::uint64_t test_seed = derive_seed(cfg.seed, 2);

  std::vector<ItemList> test_lists;
  {
    Rng rng(test_seed);
    test_lists.reserve(cfg.n_test);
    for (std::size_t i = 0; i < cfg.n_test; ++i) test_lists.push_back(sample_list(base, rng));
  }

  BenchTable table{cfg.seed, {}};
  for (const auto& gains : cfg.gain_vectors) {
    const GroundTruth gt =
        base.with_gains(Eigen::Map<const Vector>(gains.data(), static_cast<Eigen::Index>(gains.size())));
    const Dataset train = generate_dataset(gt, cfg.n_train, train_seed);
    const Dataset relevance = with_relevance_orders(gt, train);

    const auto listmle = train_pl(relevance, cfg.pl, false);
    const auto weighted = train_pl(train, cfg.pl, true);
    const auto pg = train_alternating(train, cfg.lambda, cfg.altmin);

    double sum_l = 0.0, sum_w = 0.0, sum_pg = 0.0;
    for (const auto& x : test_lists) {
      sum_l += true_score(gt, x, infer_pl(listmle.model, x));
      sum_w += true_score(gt, x, infer_pl(weighted.model, x));
      sum_pg += true_score(gt, x, infer_order(pg.model, x));
    }
    const double m = static_cast<double>(test_lists.size());
    table.rows.push_back(BenchRow{gains, sum_l / m, sum_w / m, sum_pg / m, listmle.status,
                                  weighted.status, pg.status});
  }
  return table;
}

// ---------------------------------------------------------------------------
// Dwell-time sessions

/// Repeated lists shown by a logging ranker that mostly uses the relevance
/// order and otherwise a uniformly random order. Dwell time in seconds is
/// dwell_seconds * true_score * lognormal noise.
struct DwellConfig {
  std::size_t n = 3;
  std::size_t d = 10;
  std::size_t num_lists = 200;
  std::size_t sessions_per_list = 12;
  double explore_prob = 0.8;
  double dwell_seconds = 600.0;
  double noise_sigma = 0.1;
  double cov_scale = kDefaultCovScale;
  std::vector<double> gains = {0.1, 0.3, 0.6};
  std::uint64_t seed = 1;

  void validate() const {
    if (n < 1 || d < 1 || num_lists < 1 || sessions_per_list < 1) {
      throw InvalidArgument("DwellConfig: sizes must be positive");
    }
    if (!(explore_prob >= 0.0 && explore_prob <= 1.0)) {
      throw InvalidArgument("DwellConfig: explore_prob must lie in [0, 1]");
    }
    if (!(dwell_seconds > 0.0) || !(noise_sigma >= 0.0)) {
      throw InvalidArgument("DwellConfig: dwell_seconds > 0 and noise_sigma >= 0 required");
    }
    if (gains.size() != n) throw DimensionError("DwellConfig: gains length differs from n");
  }
};

struct DwellData {
  GroundTruth truth;
  Dataset sessions;
};

inline DwellData generate_dwell_sessions(const DwellConfig& cfg) {
  cfg.validate();
  const GroundTruth gt =
      make_ground_truth(cfg.n, cfg.d, derive_seed(cfg.seed, 0), cfg.cov_scale)
          .with_gains(Eigen::Map<const Vector>(cfg.gains.data(), static_cast<Eigen::Index>(cfg.n)));
  Rng rng(derive_seed(cfg.seed, 1));
  std::bernoulli_distribution explore(cfg.explore_prob);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<Session> sessions;
  sessions.reserve(cfg.num_lists * cfg.sessions_per_list);
  for (std::size_t l = 0; l < cfg.num_lists; ++l) {
    const ItemList x = sample_list(gt, rng);
    const Permutation logged = relevance_order(gt, x);
    for (std::size_t k = 0; k < cfg.sessions_per_list; ++k) {
      Permutation p = explore(rng) ? random_permutation(cfg.n, rng) : logged;
      const double dwell =
          cfg.dwell_seconds * true_score(gt, x, p) * std::exp(cfg.noise_sigma * noise(rng));
      sessions.emplace_back(x, std::move(p), dwell);
    }
  }
  return DwellData{gt, Dataset(std::move(sessions))};
}

}  // namespace orderrank
