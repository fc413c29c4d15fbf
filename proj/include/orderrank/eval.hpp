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

// Ranking the observed orders of a list by model score and comparing that
// ranking with the ranking by observed score (NDCG, top-1 average score).

#pragma once

#include <orderrank/core.hpp>
#include <orderrank/payoff_gain.hpp>
#include <orderrank/plackett_luce.hpp>
#include <orderrank/synthetic.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace orderrank {

/// One list together with the distinct orders it was shown in.
struct OrderGroup {
  ItemList items;
  std::vector<std::pair<Permutation, double>> observed;

  OrderGroup(ItemList items_in, std::vector<std::pair<Permutation, double>> obs)
      : items(std::move(items_in)), observed(std::move(obs)) {
    if (observed.empty()) throw InvalidArgument("OrderGroup: no observed orders");
    for (std::size_t a = 0; a < observed.size(); ++a) {
      detail::require_dims(observed[a].first.size() == items.n(),
                           "OrderGroup: order length differs from n");
      if (!std::isfinite(observed[a].second) || observed[a].second < 0.0) {
        throw InvalidArgument("OrderGroup: scores must be finite and non-negative");
      }
      for (std::size_t b = 0; b < a; ++b) {
        if (observed[a].first == observed[b].first) {
          throw InvalidArgument("OrderGroup: observed orders must be distinct");
        }
      }
    }
  }
};

struct SplitConfig {
  double train_fraction = 0.8;
  int num_repeats = 10;
  std::uint64_t seed = 1;
};

enum class NdcgGain { kLinear, kExponential };

/// NDCG of relevances listed in predicted rank order, discount 1/log2(r+1).
/// Throws if every relevance is zero.
inline double ndcg(std::span<const double> relevances, NdcgGain gain = NdcgGain::kLinear) {
  if (relevances.empty()) throw InvalidArgument("ndcg: empty ranking");
  std::vector<double> g(relevances.size());
  for (std::size_t r = 0; r < relevances.size(); ++r) {
    const double rel = relevances[r];
    if (!std::isfinite(rel) || rel < 0.0) throw InvalidArgument("ndcg: relevances must be >= 0");
    g[r] = gain == NdcgGain::kLinear ? rel : std::exp2(rel) - 1.0;
  }
  auto dcg = [](const std::vector<double>& v) {
    double total = 0.0;
    for (std::size_t r = 0; r < v.size(); ++r) total += v[r] / std::log2(static_cast<double>(r) + 2.0);
    return total;
  };
  std::vector<double> ideal(g);
  std::sort(ideal.begin(), ideal.end(), std::greater<>());
  const double idcg = dcg(ideal);
  if (!(idcg > 0.0)) throw InvalidArgument("ndcg: all relevances are zero");
  return std::clamp(dcg(g) / idcg, 0.0, 1.0);
}

/// Scores one (list, order) pair; higher means the model prefers the order.
using OrderScorer = std::function<double(const ItemList&, const Permutation&)>;

inline OrderScorer pl_scorer(PLModel model) {
  return [m = std::move(model)](const ItemList& x, const Permutation& p) {
    return pl_log_prob(m, x, p);
  };
}

inline OrderScorer payoff_gain_scorer(PayoffGainModel model) {
  return [m = std::move(model)](const ItemList& x, const Permutation& p) {
    return predict_score(m, x, p);
  };
}

/// Indices into group.observed, best model score first; ties keep input order.
inline std::vector<std::size_t> rank_orders_by_model(const OrderScorer& scorer,
                                                     const OrderGroup& group) {
  std::vector<double> score(group.observed.size());
  for (std::size_t k = 0; k < score.size(); ++k) score[k] = scorer(group.items, group.observed[k].first);
  std::vector<std::size_t> idx(score.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  return idx;
}

/// Groups sessions by exactly equal feature matrices, in order of first
/// appearance. Repeated (list, order) pairs are merged by averaging scores.
inline std::vector<OrderGroup> group_sessions(const Dataset& data) {
  struct Acc {
    const ItemList* items;
    std::vector<Permutation> orders;
    std::vector<double> sums;
    std::vector<int> counts;
  };
  std::map<std::vector<double>, std::size_t> index;
  std::vector<Acc> accs;
  for (const auto& s : data) {
    const auto& f = s.items.features();
    std::vector<double> key(f.data(), f.data() + f.size());
    auto [it, inserted] = index.try_emplace(std::move(key), accs.size());
    if (inserted) accs.push_back(Acc{&s.items, {}, {}, {}});
    Acc& a = accs[it->second];
    const auto found = std::find(a.orders.begin(), a.orders.end(), s.shown_order);
    if (found == a.orders.end()) {
      a.orders.push_back(s.shown_order);
      a.sums.push_back(s.score);
      a.counts.push_back(1);
    } else {
      const auto k = static_cast<std::size_t>(found - a.orders.begin());
      a.sums[k] += s.score;
      ++a.counts[k];
    }
  }
  std::vector<OrderGroup> groups;
  groups.reserve(accs.size());
  for (auto& a : accs) {
    std::vector<std::pair<Permutation, double>> obs;
    for (std::size_t k = 0; k < a.orders.size(); ++k) {
      obs.emplace_back(std::move(a.orders[k]), a.sums[k] / a.counts[k]);
    }
    groups.emplace_back(*a.items, std::move(obs));
  }
  return groups;
}

struct NamedScorer {
  std::string name;
  OrderScorer scorer;
};

struct EvalRow {
  std::string model_name;
  double avg_ndcg = 0.0;
  double top1_avg_score = 0.0;
  std::size_t num_groups = 0;   // groups that contributed
  std::size_t num_skipped = 0;  // groups whose scores were all zero
};

struct EvalReport {
  std::vector<EvalRow> rows;
  // Contributing groups with one observed order (NDCG 1 for every model).
  std::size_t num_single_order_groups = 0;
};

inline EvalReport evaluate_groups(const std::vector<NamedScorer>& models,
                                  const std::vector<OrderGroup>& groups,
                                  NdcgGain gain = NdcgGain::kLinear) {
  if (groups.empty()) throw InvalidArgument("evaluate_groups: no groups");
  EvalReport report;
  for (const auto& g : groups) {
    const bool any_positive = std::any_of(g.observed.begin(), g.observed.end(),
                                          [](const auto& o) { return o.second > 0.0; });
    if (any_positive && g.observed.size() == 1) ++report.num_single_order_groups;
  }
  for (const auto& m : models) {
    EvalRow row{m.name};
    double ndcg_sum = 0.0, top1_sum = 0.0;
    for (const auto& g : groups) {
      std::vector<double> rel;
      rel.reserve(g.observed.size());
      for (const auto k : rank_orders_by_model(m.scorer, g)) rel.push_back(g.observed[k].second);
      if (std::all_of(rel.begin(), rel.end(), [](double r) { return r == 0.0; })) {
        ++row.num_skipped;
        continue;
      }
      ndcg_sum += ndcg(rel, gain);
      top1_sum += rel.front();
      ++row.num_groups;
    }
    if (row.num_groups > 0) {
      row.avg_ndcg = ndcg_sum / static_cast<double>(row.num_groups);
      row.top1_avg_score = top1_sum / static_cast<double>(row.num_groups);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Shuffled index splits, one per repeat, each from its own seeded stream.
inline std::vector<SplitIndices> split_indices(std::size_t size, const SplitConfig& cfg) {
  if (size < 2) throw InvalidArgument("split: need at least two sessions");
  if (!(cfg.train_fraction > 0.0 && cfg.train_fraction < 1.0) || cfg.num_repeats < 1) {
    throw InvalidArgument("split: train_fraction must lie in (0, 1) and num_repeats >= 1");
  }
  const auto n_train = static_cast<std::size_t>(std::llround(cfg.train_fraction * static_cast<double>(size)));
  if (n_train == 0 || n_train == size) throw InvalidArgument("split: fraction leaves one side empty");
  std::vector<SplitIndices> out;
  for (int r = 0; r < cfg.num_repeats; ++r) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    std::vector<std::size_t> idx(size);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = size; i > 1; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      std::swap(idx[i - 1], idx[pick(rng)]);
    }
    SplitIndices s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
    s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    out.push_back(std::move(s));
  }
  return out;
}

inline Dataset subset(const Dataset& data, const std::vector<std::size_t>& idx) {
  std::vector<Session> sessions;
  sessions.reserve(idx.size());
  for (auto i : idx) sessions.push_back(data[i]);
  return Dataset(std::move(sessions));
}

inline std::vector<std::pair<Dataset, Dataset>> split(const Dataset& data, const SplitConfig& cfg) {
  std::vector<std::pair<Dataset, Dataset>> out;
  for (const auto& s : split_indices(data.size(), cfg)) {
    out.emplace_back(subset(data, s.train), subset(data, s.test));
  }
  return out;
}

struct TrainerSettings {
  GDConfig pl;
  AltMinConfig altmin;
  double lambda = kDefaultLambda;
};

/// Trains ListMLE (shown orders, unit weights), weighted ListMLE and the
/// payoff-gain model on each training split, evaluates on the grouped test
/// split and averages avg_ndcg and top1_avg_score over the repeats. Group
/// counts are summed over repeats.
inline EvalReport evaluate_with_splits(const Dataset& data, const SplitConfig& split_cfg,
                                       const TrainerSettings& trainers,
                                       NdcgGain gain = NdcgGain::kLinear) {
  const auto splits = split(data, split_cfg);
  EvalReport total;
  for (const auto& [train, test] : splits) {
    const auto listmle = train_pl(train, trainers.pl, false);
    const auto weighted = train_pl(train, trainers.pl, true);
    const auto pg = train_alternating(train, trainers.lambda, trainers.altmin);
    const std::vector<NamedScorer> models{
        {"listmle", pl_scorer(listmle.model)},
        {"weighted_listmle", pl_scorer(weighted.model)},
        {"payoff_gain", payoff_gain_scorer(pg.model)},
    };
    const auto rep = evaluate_groups(models, group_sessions(test), gain);
    if (total.rows.empty()) {
      for (const auto& r : rep.rows) total.rows.push_back(EvalRow{r.model_name});
    }
    for (std::size_t k = 0; k < rep.rows.size(); ++k) {
      total.rows[k].avg_ndcg += rep.rows[k].avg_ndcg;
      total.rows[k].top1_avg_score += rep.rows[k].top1_avg_score;
      total.rows[k].num_groups += rep.rows[k].num_groups;
      total.rows[k].num_skipped += rep.rows[k].num_skipped;
    }
    total.num_single_order_groups += rep.num_single_order_groups;
  }
  const double m = static_cast<double>(splits.size());
  for (auto& r : total.rows) {
    r.avg_ndcg /= m;
    r.top1_avg_score /= m;
  }
  return total;
}

}  // namespace orderrank
