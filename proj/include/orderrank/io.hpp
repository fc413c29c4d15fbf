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

// File formats.
//
// Sessions: one JSON object per line,
//   {"features": [[x_11, ..., x_1d], ..., [x_n1, ..., x_nd]],
//    "order": [p_1, ..., p_n], "score": s}
// with item-major features and one-based display positions. Models are a
// single JSON object discriminated by "kind". Result tables are
// tab-separated with one header row.

#pragma once

#include <orderrank/core.hpp>
#include <orderrank/eval.hpp>
#include <orderrank/payoff_gain.hpp>
#include <orderrank/plackett_luce.hpp>
#include <orderrank/synthetic.hpp>

#include <nlohmann/json.hpp>

#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

namespace orderrank::io {

using json = nlohmann::json;

/// Malformed input; line() is 1-based, 0 when not tied to a line.
class DataError : public Error {
 public:
  DataError(const std::string& what, std::size_t line = 0)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal that reads back to the same double.
inline std::string format_double(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Sessions

inline json features_to_json(const ItemList& items) {
  json rows = json::array();
  for (std::size_t i = 0; i < items.n(); ++i) {
    json col = json::array();
    for (std::size_t k = 0; k < items.d(); ++k) col.push_back(items.item(i)[k]);
    rows.push_back(std::move(col));
  }
  return rows;
}

inline json session_to_json(const Session& s) {
  return json{{"features", features_to_json(s.items)},
              {"order", s.shown_order.one_based()},
              {"score", s.score}};
}

inline ItemList items_from_json(const json& rows) {
  if (!rows.is_array() || rows.empty()) throw InvalidArgument("\"features\" must be a non-empty array");
  const std::size_t n = rows.size();
  if (!rows[0].is_array() || rows[0].empty()) throw InvalidArgument("each item must be a non-empty array");
  const std::size_t d = rows[0].size();
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!rows[i].is_array() || rows[i].size() != d) throw InvalidArgument("items differ in dimension");
    for (std::size_t k = 0; k < d; ++k) {
      if (!rows[i][k].is_number()) throw InvalidArgument("feature values must be numbers");
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = rows[i][k].get<double>();
    }
  }
  return ItemList(std::move(m));
}

inline Permutation order_from_json(const json& order) {
  if (!order.is_array()) throw InvalidArgument("\"order\" must be an array");
  std::vector<int> p;
  for (const auto& x : order) {
    if (!x.is_number_integer()) throw InvalidArgument("\"order\" entries must be integers");
    p.push_back(x.get<int>());
  }
  return Permutation::from_one_based(p);
}

/// A parsed line of a sessions or lists file.
struct Record {
  ItemList items;
  std::optional<Permutation> order;
  std::optional<double> score;
  std::size_t line;
};

/// Reads one record per non-blank line. With require_scored, "order" and
/// "score" are mandatory. All records must share n and d.
inline std::vector<Record> read_records(std::istream& in, bool require_scored) {
  std::vector<Record> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(text);
      if (!j.is_object() || !j.contains("features")) throw InvalidArgument("record needs \"features\"");
      Record r{items_from_json(j["features"]), std::nullopt, std::nullopt, line};
      if (j.contains("order")) r.order = order_from_json(j["order"]);
      if (j.contains("score")) {
        if (!j["score"].is_number()) throw InvalidArgument("\"score\" must be a number");
        r.score = j["score"].get<double>();
      }
      if (require_scored && (!r.order || !r.score)) throw InvalidArgument("record needs \"order\" and \"score\"");
      if (r.order && r.order->size() != r.items.n()) throw InvalidArgument("\"order\" length differs from item count");
      if (r.score && (!std::isfinite(*r.score) || *r.score < 0.0)) {
        throw InvalidArgument("\"score\" must be finite and non-negative");
      }
      if (!out.empty() && (out.front().items.n() != r.items.n() || out.front().items.d() != r.items.d())) {
        throw InvalidArgument("record dimensions differ from the first record");
      }
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw DataError(std::string("malformed JSON: ") + e.what(), line);
    } catch (const Error& e) {
      throw DataError(e.what(), line);
    }
  }
  if (out.empty()) throw DataError("no records");
  return out;
}

inline Dataset read_sessions(std::istream& in) {
  auto records = read_records(in, true);
  std::vector<Session> sessions;
  sessions.reserve(records.size());
  for (auto& r : records) sessions.emplace_back(std::move(r.items), std::move(*r.order), *r.score);
  return Dataset(std::move(sessions));
}

inline void write_sessions(std::ostream& out, const Dataset& data) {
  for (const auto& s : data) out << session_to_json(s).dump() << '\n';
}

// ---------------------------------------------------------------------------
// Models

using Model = std::variant<PLModel, PayoffGainModel>;

inline std::vector<double> to_std(const Vector& v) { return {v.data(), v.data() + v.size()}; }

inline Vector vector_from_json(const json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array()) {
    throw DataError(std::string("model needs array field \"") + field + "\"");
  }
  const auto values = j[field].get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

inline json model_to_json(const Model& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PLModel>) {
          return json{{"kind", "pl"}, {"u", to_std(m.u)}};
        } else {
          return json{{"kind", "payoff_gain"}, {"v", to_std(m.v)}, {"g", to_std(m.g)}, {"lambda", m.lambda}};
        }
      },
      model);
}

inline Model model_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw DataError("model needs a string \"kind\"");
  }
  const auto kind = j["kind"].get<std::string>();
  try {
    if (kind == "pl") return PLModel(vector_from_json(j, "u"));
    if (kind == "payoff_gain") {
      if (!j.contains("lambda") || !j["lambda"].is_number()) throw DataError("model needs \"lambda\"");
      return PayoffGainModel(vector_from_json(j, "v"), vector_from_json(j, "g"), j["lambda"].get<double>());
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  }
  throw DataError("unknown model kind \"" + kind + "\"");
}

inline Model read_model(std::istream& in) {
  try {
    return model_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed model: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Ground truth

inline json ground_truth_to_json(const GroundTruth& gt) {
  json mus = json::array();
  for (Eigen::Index i = 0; i < gt.mus.cols(); ++i) mus.push_back(to_std(gt.mus.col(i)));
  return json{{"mus", mus}, {"v_star", to_std(gt.v_star)}, {"g_star", to_std(gt.g_star)},
              {"cov_scale", gt.cov_scale}};
}

inline GroundTruth ground_truth_from_json(const json& j) {
  try {
    const ItemList mus = items_from_json(j.at("mus"));
    return GroundTruth(mus.features(), vector_from_json(j, "v_star"), vector_from_json(j, "g_star"),
                       j.at("cov_scale").get<double>());
  } catch (const json::exception& e) {
    throw DataError(std::string("malformed ground truth: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(e.what());
  } catch (const DimensionError& e) {
    throw DataError(e.what());
  }
}

// ---------------------------------------------------------------------------
// Tables

inline std::string join_doubles(const std::vector<double>& v, char sep = ' ') {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += format_double(v[i]);
  }
  return s;
}

inline void write_bench_table(std::ostream& out, const BenchTable& table) {
  out << "gain_vector\tlistmle_mean\tweighted_listmle_mean\tpayoff_gain_mean\tseed\n";
  for (const auto& r : table.rows) {
    out << join_doubles(r.gain_vector) << '\t' << format_double(r.listmle_mean) << '\t'
        << format_double(r.weighted_listmle_mean) << '\t' << format_double(r.payoff_gain_mean) << '\t'
        << table.seed << '\n';
  }
}

inline void write_eval_report(std::ostream& out, const EvalReport& report) {
  out << "model_name\tavg_ndcg\ttop1_avg_score\tnum_groups\tnum_skipped\n";
  for (const auto& r : report.rows) {
    out << r.model_name << '\t' << format_double(r.avg_ndcg) << '\t' << format_double(r.top1_avg_score)
        << '\t' << r.num_groups << '\t' << r.num_skipped << '\n';
  }
}

/// Splits a tab-separated table into header and rows.
inline std::vector<std::vector<std::string>> read_tsv(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, '\t')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace orderrank::io
