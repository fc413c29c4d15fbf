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

// Plackett-Luce likelihood over display orders with a linear item scorer,
// (weighted) ListMLE training and sort-based inference.

#pragma once

#include <orderrank/core.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace orderrank {

/// Linear scorer: an item x scores u.dot(x).
struct PLModel {
  Vector u;

  explicit PLModel(Vector weights) : u(std::move(weights)) {
    if (u.size() < 1 || !u.allFinite()) {
      throw InvalidArgument("PLModel: weights must be non-empty and finite");
    }
  }

  std::size_t d() const { return static_cast<std::size_t>(u.size()); }
};

struct GDConfig {
  double step_size = 1.0;
  int max_iters = 2000;
  double tol = 1e-10;  // stop once one accepted step lowers the loss by less

  void validate() const {
    if (!(step_size > 0.0) || max_iters < 1 || !(tol > 0.0)) {
      throw InvalidArgument("GDConfig: step_size, max_iters and tol must be positive");
    }
  }
};

struct PLTrainResult {
  PLModel model;
  std::vector<double> loss_history;  // loss at u = 0, then after each accepted step
  TrainStatus status;
  int iterations;
};

namespace detail {

inline void require_pl_dims(const PLModel& m, const ItemList& items) {
  require_dims(m.d() == items.d(), "Plackett-Luce: model dimension differs from item dimension");
}

// Item scores laid out in display order.
inline std::vector<double> display_scores(const PLModel& m, const ItemList& items,
                                          const std::vector<int>& item_at) {
  std::vector<double> z(item_at.size());
  for (std::size_t j = 0; j < item_at.size(); ++j) {
    z[j] = m.u.dot(items.item(item_at[j]));
  }
  return z;
}

// suffix[j] = log sum_{k >= j} exp(z[k]), accumulated with max-subtraction.
inline std::vector<double> suffix_logsumexp(const std::vector<double>& z) {
  std::vector<double> out(z.size());
  double acc = -std::numeric_limits<double>::infinity();
  for (std::size_t j = z.size(); j-- > 0;) {
    const double hi = std::max(acc, z[j]);
    const double lo = std::min(acc, z[j]);
    acc = hi + std::log1p(std::exp(lo - hi));
    out[j] = acc;
  }
  return out;
}

inline void check_weights(const Dataset& data, std::span<const double> weights) {
  require_dims(weights.size() == data.size(), "ListMLE: one weight per session required");
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw InvalidArgument("ListMLE: weights must be finite and non-negative");
    }
  }
}

}  // namespace detail

/// log P(perm | items) under the Plackett-Luce model. Always <= 0.
inline double pl_log_prob(const PLModel& model, const ItemList& items, const Permutation& perm) {
  detail::require_pl_dims(model, items);
  detail::require_dims(perm.size() == items.n(), "pl_log_prob: permutation length differs from n");
  const auto z = detail::display_scores(model, items, perm.items_by_position());
  const auto lse = detail::suffix_logsumexp(z);
  double lp = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) lp += z[j] - lse[j];
  return std::min(lp, 0.0);
}

inline std::vector<double> unit_weights(const Dataset& data) {
  return std::vector<double>(data.size(), 1.0);
}

/// Sum over sessions of -weights[i] * log P(shown order | list).
inline double listmle_loss(const PLModel& model, const Dataset& data,
                           std::span<const double> weights) {
  detail::check_weights(data, weights);
  double loss = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (weights[i] == 0.0) continue;
    loss -= weights[i] * pl_log_prob(model, data[i].items, data[i].shown_order);
  }
  return loss;
}

/// Gradient of listmle_loss with respect to u.
inline Vector listmle_grad(const PLModel& model, const Dataset& data,
                           std::span<const double> weights) {
  detail::check_weights(data, weights);
  Vector grad = Vector::Zero(static_cast<Eigen::Index>(model.d()));
  Vector expected(grad.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const auto& items = data[i].items;
    detail::require_pl_dims(model, items);
    const auto item_at = data[i].shown_order.items_by_position();
    const auto z = detail::display_scores(model, items, item_at);
    const auto lse = detail::suffix_logsumexp(z);
    // d(-log P)/du = sum_j (E_{k>=j}[x_k] - x_j)
    for (std::size_t j = 0; j < z.size(); ++j) {
      expected.setZero();
      for (std::size_t k = j; k < z.size(); ++k) {
        expected += std::exp(z[k] - lse[j]) * items.item(item_at[k]);
      }
      grad += weights[i] * (expected - items.item(item_at[j]));
    }
  }
  return grad;
}

/// Gradient descent from u = 0 with backtracking. The step starts each
/// iteration at min(2 * last accepted step, cfg.step_size) and is halved
/// until the loss does not increase.
inline PLTrainResult train_pl(const Dataset& data, const GDConfig& cfg,
                              std::span<const double> weights) {
  cfg.validate();
  detail::check_weights(data, weights);
  constexpr int kMaxHalvings = 60;

  PLModel model(Vector::Zero(static_cast<Eigen::Index>(data.d())));
  double loss = listmle_loss(model, data, weights);
  std::vector<double> history{loss};
  double step = cfg.step_size;
  TrainStatus status = TrainStatus::kMaxIterations;
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const Vector grad = listmle_grad(model, data, weights);
    if (!grad.allFinite() || !std::isfinite(loss)) {
      throw DivergenceError("train_pl: non-finite loss or gradient");
    }
    double trial = std::min(2.0 * step, cfg.step_size);
    bool accepted = false;
    Vector cand;
    double cand_loss = 0.0;
    for (int h = 0; h <= kMaxHalvings; ++h, trial *= 0.5) {
      cand = model.u - trial * grad;
      cand_loss = listmle_loss(PLModel(cand), data, weights);
      if (std::isfinite(cand_loss) && cand_loss <= loss) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      status = TrainStatus::kStalled;
      break;
    }
    const double decrease = loss - cand_loss;
    model.u = std::move(cand);
    loss = cand_loss;
    history.push_back(loss);
    step = trial;
    if (decrease < cfg.tol) {
      status = TrainStatus::kConverged;
      ++it;
      break;
    }
  }
  return PLTrainResult{std::move(model), std::move(history), status, it};
}

/// weighted = true weighs each session by its score, false by 1.
inline PLTrainResult train_pl(const Dataset& data, const GDConfig& cfg, bool weighted) {
  const std::vector<double> w = weighted ? data.scores() : unit_weights(data);
  return train_pl(data, cfg, std::span<const double>(w));
}

/// Most probable display order: items sorted by descending score.
inline Permutation infer_pl(const PLModel& model, const ItemList& items) {
  detail::require_pl_dims(model, items);
  const Vector scores = items.features().transpose() * model.u;
  return sort_descending(scores);
}

}  // namespace orderrank
