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

// Item-payoff / positional-gain model.
//
// The predicted score of showing list X in order P is
//   sum_j g[j] * exp(v . x_(item at position j)),
// i.e. each item contributes its payoff exp(v . x) scaled by the gain of the
// position it lands in. Training alternates a closed-form ridge solve for g
// with projected gradient descent for v on the unit ball.

#pragma once

#include <orderrank/core.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace orderrank {

class SingularSystemError : public Error {
 public:
  using Error::Error;
};

inline constexpr double kUnitBallSlack = 1e-12;

struct PayoffGainModel {
  Vector v;       // payoff weights, ||v|| <= 1
  Vector g;       // one gain per display position
  double lambda;  // ridge penalty on g used in training

  PayoffGainModel(Vector v_in, Vector g_in, double lambda_in)
      : v(std::move(v_in)), g(std::move(g_in)), lambda(lambda_in) {
    if (v.size() < 1 || g.size() < 1) throw InvalidArgument("PayoffGainModel: empty v or g");
    if (!v.allFinite() || !g.allFinite() || !std::isfinite(lambda)) {
      throw InvalidArgument("PayoffGainModel: non-finite parameters");
    }
    if (v.norm() > 1.0 + kUnitBallSlack) throw InvalidArgument("PayoffGainModel: ||v|| > 1");
    if (lambda < 0.0) throw InvalidArgument("PayoffGainModel: negative lambda");
  }

  std::size_t d() const { return static_cast<std::size_t>(v.size()); }
  std::size_t n() const { return static_cast<std::size_t>(g.size()); }
};

struct AltMinConfig {
  double eps = 1e-4;        // outer stop: objective decrease <= eps
  double eta = 1e-2;        // largest inner step size
  double inner_tol = 1e-9;  // inner stop: ||v_next - v|| <= inner_tol
  int max_outer = 100;
  int max_inner = 100;

  void validate() const {
    if (!(eps > 0.0) || !(eta > 0.0) || !(inner_tol > 0.0) || max_outer < 1 || max_inner < 1) {
      throw InvalidArgument("AltMinConfig: all fields must be positive");
    }
  }
};

inline constexpr double kDefaultLambda = 1e-3;

struct AltMinResult {
  PayoffGainModel model;
  // sum of squared residuals + lambda * ||g||^2; entry 0 is the value at
  // initialization, sum of squared scores.
  std::vector<double> objective_history;
  TrainStatus status;
  int outer_iterations;
};

namespace detail {

// exp(v . x_i) for every item, in item order.
inline Vector payoffs(const Vector& v, const ItemList& items) {
  require_dims(static_cast<std::size_t>(v.size()) == items.d(),
               "payoff-gain: v dimension differs from item dimension");
  Vector p(static_cast<Eigen::Index>(items.n()));
  for (std::size_t i = 0; i < items.n(); ++i) p[i] = std::exp(v.dot(items.item(i)));
  return p;
}

// Row of the design matrix: payoff of the item shown at each position.
inline Vector design_row(const Vector& v, const Session& s) {
  const Vector p = payoffs(v, s.items);
  Vector row(p.size());
  for (std::size_t i = 0; i < s.items.n(); ++i) row[s.shown_order[i]] = p[i];
  return row;
}

inline Matrix design_matrix(const Dataset& data, const Vector& v) {
  Matrix a(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(data.n()));
  for (std::size_t i = 0; i < data.size(); ++i) a.row(i) = design_row(v, data[i]).transpose();
  return a;
}

inline Vector score_vector(const Dataset& data) {
  Vector s(static_cast<Eigen::Index>(data.size()));
  for (std::size_t i = 0; i < data.size(); ++i) s[i] = data[i].score;
  return s;
}

inline void require_gain_dims(const Dataset& data, const Vector& g) {
  require_dims(static_cast<std::size_t>(g.size()) == data.n(),
               "payoff-gain: gain length differs from list length");
}

}  // namespace detail

/// Sum of squared residuals s_i - (predicted score of session i).
inline double fit_objective(const Dataset& data, const Vector& v, const Vector& g) {
  detail::require_gain_dims(data, g);
  double total = 0.0;
  for (const auto& s : data) {
    const double r = s.score - detail::design_row(v, s).dot(g);
    total += r * r;
  }
  return total;
}

inline Vector project_unit_ball(Vector v) {
  const double norm = v.norm();
  if (norm > 1.0) v /= norm;
  return v;
}

inline double predict_score(const PayoffGainModel& model, const ItemList& items,
                            const Permutation& perm) {
  detail::require_dims(model.n() == items.n() && perm.size() == items.n(),
                       "predict_score: gain, list and permutation lengths must agree");
  const Vector p = detail::payoffs(model.v, items);
  double total = 0.0;
  for (std::size_t i = 0; i < items.n(); ++i) total += model.g[perm[i]] * p[i];
  return total;
}

/// Entry (i, j) is the score contribution of item i placed at position j.
inline Matrix scoring_matrix(const PayoffGainModel& model, const ItemList& items) {
  detail::require_dims(model.n() == items.n(), "scoring_matrix: gain length differs from n");
  const Vector p = detail::payoffs(model.v, items);
  Matrix s(p.size(), p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i)
    for (Eigen::Index j = 0; j < p.size(); ++j) s(i, j) = model.g[j] * p[i];
  return s;
}

/// Ridge solution of min_g sum_i (s_i - A_i g)^2 + lambda ||g||^2, where A_i
/// holds the payoffs of session i in display order. lambda = 0 requires A to
/// have full column rank.
inline Vector g_update(const Dataset& data, const Vector& v, double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) throw InvalidArgument("g_update: lambda must be >= 0");
  const Matrix a = detail::design_matrix(data, v);
  const Vector s = detail::score_vector(data);
  if (lambda == 0.0) {
    Eigen::ColPivHouseholderQR<Matrix> qr(a);
    if (qr.rank() < a.cols()) {
      throw SingularSystemError("g_update: design matrix is rank deficient and lambda = 0");
    }
  }
  Matrix normal = a.transpose() * a;
  normal.diagonal().array() += lambda;
  const Vector rhs = a.transpose() * s;
  Eigen::LDLT<Matrix> ldlt(normal);
  if (ldlt.info() != Eigen::Success) throw SingularSystemError("g_update: factorization failed");
  Vector g = ldlt.solve(rhs);
  g += ldlt.solve(rhs - normal * g);  // one step of iterative refinement
  if (!g.allFinite()) throw SingularSystemError("g_update: non-finite solution");
  return g;
}

/// Gradient of fit_objective with respect to v.
inline Vector v_gradient(const Dataset& data, const Vector& v, const Vector& g) {
  detail::require_gain_dims(data, g);
  Vector grad = Vector::Zero(v.size());
  for (const auto& s : data) {
    const Vector p = detail::payoffs(v, s.items);
    double pred = 0.0;
    for (std::size_t i = 0; i < s.items.n(); ++i) pred += g[s.shown_order[i]] * p[i];
    const double e = pred - s.score;
    if (e == 0.0) continue;
    for (std::size_t i = 0; i < s.items.n(); ++i) {
      grad += (2.0 * e * g[s.shown_order[i]] * p[i]) * s.items.item(i);
    }
  }
  return grad;
}

/// Projected gradient descent on v for fixed gains, started at v_init. A step
/// of cfg.eta that would raise the objective is halved until it does not.
inline Vector v_update(const Dataset& data, const Vector& g, const AltMinConfig& cfg,
                       const Vector& v_init) {
  cfg.validate();
  detail::require_dims(static_cast<std::size_t>(v_init.size()) == data.d(),
                       "v_update: v dimension differs from item dimension");
  if (v_init.norm() > 1.0 + kUnitBallSlack) throw InvalidArgument("v_update: ||v_init|| > 1");
  constexpr int kMaxHalvings = 60;

  Vector v = v_init;
  double obj = fit_objective(data, v, g);
  double step = cfg.eta;
  for (int k = 0; k < cfg.max_inner; ++k) {
    const Vector d = v_gradient(data, v, g);
    if (!d.allFinite()) throw DivergenceError("v_update: non-finite gradient");
    double trial = std::min(2.0 * step, cfg.eta);
    bool accepted = false;
    Vector cand;
    double cand_obj = 0.0;
    for (int h = 0; h <= kMaxHalvings; ++h, trial *= 0.5) {
      cand = project_unit_ball(v - trial * d);
      cand_obj = fit_objective(data, cand, g);
      if (std::isfinite(cand_obj) && cand_obj <= obj) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    const double moved = (cand - v).norm();
    v = std::move(cand);
    obj = cand_obj;
    step = trial;
    if (moved <= cfg.inner_tol) break;
  }
  return v;
}

/// Alternating minimization: ridge step on g, projected gradient on v, until
/// the tracked objective drops by at most cfg.eps. Starts at v = 1/sqrt(d).
inline AltMinResult train_alternating(const Dataset& data, double lambda, const AltMinConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw InvalidArgument("train_alternating: lambda must be >= 0");
  }
  const auto d = static_cast<Eigen::Index>(data.d());
  Vector v = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
  v = project_unit_ball(std::move(v));
  Vector g = Vector::Zero(static_cast<Eigen::Index>(data.n()));

  auto objective = [&](const Vector& vv, const Vector& gg) {
    return fit_objective(data, vv, gg) + lambda * gg.squaredNorm();
  };
  std::vector<double> history{objective(v, g)};
  TrainStatus status = TrainStatus::kMaxIterations;
  int k = 0;
  for (; k < cfg.max_outer; ++k) {
    Vector g_next = g_update(data, v, lambda);
    // The ridge solve is exact up to rounding; never accept a worse g.
    if (objective(v, g_next) <= objective(v, g)) g = std::move(g_next);
    v = v_update(data, g, cfg, v);
    const double obj = objective(v, g);
    if (!std::isfinite(obj)) throw DivergenceError("train_alternating: non-finite objective");
    const double decrease = history.back() - obj;
    history.push_back(obj);
    if (decrease <= cfg.eps) {
      status = TrainStatus::kConverged;
      ++k;
      break;
    }
  }
  return AltMinResult{PayoffGainModel(std::move(v), std::move(g), lambda), std::move(history),
                      status, k};
}

/// Score-maximizing order: the item with the r-th largest payoff goes to the
/// position with the r-th largest gain. Within a run of equal gains, items
/// are laid out in ascending item index.
inline Permutation infer_order(const PayoffGainModel& model, const ItemList& items) {
  detail::require_dims(model.n() == items.n(), "infer_order: gain length differs from n");
  const Vector p = detail::payoffs(model.v, items);
  const auto n = items.n();
  std::vector<int> items_ranked(n), positions_ranked(n);
  std::iota(items_ranked.begin(), items_ranked.end(), 0);
  std::iota(positions_ranked.begin(), positions_ranked.end(), 0);
  std::stable_sort(items_ranked.begin(), items_ranked.end(),
                   [&](int a, int b) { return p[a] > p[b]; });
  std::stable_sort(positions_ranked.begin(), positions_ranked.end(),
                   [&](int a, int b) { return model.g[a] > model.g[b]; });
  std::vector<int> positions(n);
  for (std::size_t r = 0; r < n;) {
    std::size_t end = r + 1;
    while (end < n && model.g[positions_ranked[end]] == model.g[positions_ranked[r]]) ++end;
    std::vector<int> group_items(items_ranked.begin() + r, items_ranked.begin() + end);
    std::vector<int> group_positions(positions_ranked.begin() + r, positions_ranked.begin() + end);
    std::sort(group_items.begin(), group_items.end());
    std::sort(group_positions.begin(), group_positions.end());
    for (std::size_t k = 0; k < group_items.size(); ++k) positions[group_items[k]] = group_positions[k];
    r = end;
  }
  return Permutation::from_positions(std::move(positions));
}

}  // namespace orderrank
