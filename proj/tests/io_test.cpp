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

#include <orderrank/io.hpp>

#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"

namespace orderrank {
namespace {

using testing::random_matrix;
using testing::random_positions;
using testing::random_vector;

TEST(FormatDoubleTest, RoundTrips) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int t = 0; t < 1000; ++t) {
    const double x = u(rng) / 7.0;
    EXPECT_EQ(std::stod(io::format_double(x)), x);
  }
  EXPECT_EQ(io::format_double(0.5), "0.5");
}

TEST(SessionsIoTest, RoundTripIsExact) {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    const int n = 1 + t % 6, d = 1 + t % 4;
    std::vector<Session> s;
    for (int i = 0; i < 15; ++i) {
      s.emplace_back(ItemList(random_matrix(rng, d, n, -100.0, 100.0)),
                     Permutation::from_positions(random_positions(rng, n)),
                     std::uniform_real_distribution<double>(0.0, 50.0)(rng));
    }
    const Dataset data(std::move(s));
    std::stringstream buf;
    io::write_sessions(buf, data);
    const std::string first = buf.str();
    const Dataset back = io::read_sessions(buf);
    ASSERT_EQ(back.size(), data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
      EXPECT_EQ(back[i].items, data[i].items);
      EXPECT_EQ(back[i].shown_order, data[i].shown_order);
      EXPECT_EQ(back[i].score, data[i].score);
    }
    std::stringstream again;
    io::write_sessions(again, back);
    EXPECT_EQ(again.str(), first);
  }
}

TEST(SessionsIoTest, LayoutIsItemMajorAndOneBased) {
  Matrix x(2, 3);
  x << 1, 2, 3, 4, 5, 6;
  const Dataset data({Session(ItemList(x), Permutation::from_positions({2, 0, 1}), 1.5)});
  std::stringstream buf;
  io::write_sessions(buf, data);
  EXPECT_EQ(buf.str(), "{\"features\":[[1.0,4.0],[2.0,5.0],[3.0,6.0]],\"order\":[3,1,2],\"score\":1.5}\n");
}

std::size_t error_line(const std::string& text, bool scored = true) {
  std::istringstream in(text);
  try {
    io::read_records(in, scored);
  } catch (const io::DataError& e) {
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

TEST(SessionsIoTest, ErrorsCarryLineNumbers) {
  const std::string good = "{\"features\":[[1,2],[3,4]],\"order\":[1,2],\"score\":1}\n";
  EXPECT_EQ(error_line(good + "not json\n"), 2u);
  EXPECT_EQ(error_line(good + "\n" + "{\"features\":[[1,2],[3,4]],\"order\":[1,1],\"score\":1}\n"), 3u);
  EXPECT_EQ(error_line(good + "{\"features\":[[1,2],[3,4]],\"order\":[1,2],\"score\":-1}\n"), 2u);
  EXPECT_EQ(error_line(good + "{\"features\":[[1,2],[3,4]],\"score\":1}\n"), 2u);
  EXPECT_EQ(error_line(good + "{\"features\":[[1,2,3],[3,4,5]],\"order\":[1,2],\"score\":1}\n"), 2u);
  EXPECT_EQ(error_line("{\"features\":[[1,2],[3]],\"order\":[1,2],\"score\":1}\n"), 1u);
  EXPECT_EQ(error_line("{\"features\":[[1,2],[3,4]],\"order\":[1,2,3],\"score\":1}\n"), 1u);
  EXPECT_EQ(error_line(""), 0u);
  EXPECT_EQ(error_line("{\"features\":[[1,2],[3,4]]}\n", false), static_cast<std::size_t>(-1));
}

template <class T>
T reload(const io::Model& m) {
  std::stringstream buf(io::model_to_json(m).dump());
  return std::get<T>(io::read_model(buf));
}

TEST(ModelIoTest, ReloadReproducesPredictions) {
  std::mt19937_64 rng(3);
  const PLModel pl(random_vector(rng, 4));
  const PayoffGainModel pg(random_vector(rng, 4).normalized() * 0.9, random_vector(rng, 5), 1e-3);
  const auto pl2 = reload<PLModel>(pl);
  const auto pg2 = reload<PayoffGainModel>(pg);
  EXPECT_EQ(pg2.lambda, pg.lambda);
  for (int t = 0; t < 50; ++t) {
    const ItemList x(random_matrix(rng, 4, 5));
    const auto p = Permutation::from_positions(random_positions(rng, 5));
    EXPECT_NEAR(pl_log_prob(pl2, x, p), pl_log_prob(pl, x, p), 1e-12);
    EXPECT_NEAR(predict_score(pg2, x, p), predict_score(pg, x, p), 1e-12);
    EXPECT_EQ(infer_pl(pl2, x), infer_pl(pl, x));
    EXPECT_EQ(infer_order(pg2, x), infer_order(pg, x));
  }
}

TEST(ModelIoTest, RejectsMalformedModels) {
  for (const char* text : {"{}", "{\"kind\":\"tree\"}", "{\"kind\":\"pl\"}", "{\"kind\":\"pl\",\"u\":[\"a\"]}",
                           "{\"kind\":\"payoff_gain\",\"v\":[2.0],\"g\":[1],\"lambda\":0}",
                           "{\"kind\":\"payoff_gain\",\"v\":[0.1],\"g\":[1]}", "[1,2", ""}) {
    std::istringstream in(text);
    EXPECT_THROW(io::read_model(in), io::DataError) << text;
  }
}

TEST(GroundTruthIoTest, RoundTrip) {
  Vector g(3);
  g << 0.1, 0.3, 0.6;
  const auto gt = make_ground_truth(3, 4, 5).with_gains(g);
  const auto back = io::ground_truth_from_json(io::json::parse(io::ground_truth_to_json(gt).dump()));
  EXPECT_EQ(back.mus, gt.mus);
  EXPECT_EQ(back.v_star, gt.v_star);
  EXPECT_EQ(back.g_star, gt.g_star);
  EXPECT_EQ(back.cov_scale, gt.cov_scale);
  EXPECT_THROW(io::ground_truth_from_json(io::json::parse("{\"mus\":[[1]]}")), io::DataError);
}

TEST(TablesTest, EvalReportColumns) {
  EvalReport rep;
  rep.rows.push_back(EvalRow{"payoff_gain", 0.75, 12.5, 40, 2});
  std::stringstream buf;
  io::write_eval_report(buf, rep);
  const auto rows = io::read_tsv(buf);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"model_name", "avg_ndcg", "top1_avg_score", "num_groups",
                                               "num_skipped"}));
  EXPECT_EQ(rows[1], (std::vector<std::string>{"payoff_gain", "0.75", "12.5", "40", "2"}));
}

TEST(TablesTest, BenchTableColumns) {
  BenchTable t{7, {BenchRow{{0.5, 0.25}, 0.1, 0.2, 0.3, TrainStatus::kConverged, TrainStatus::kConverged,
                            TrainStatus::kConverged}}};
  std::stringstream buf;
  io::write_bench_table(buf, t);
  EXPECT_EQ(buf.str(),
            "gain_vector\tlistmle_mean\tweighted_listmle_mean\tpayoff_gain_mean\tseed\n"
            "0.5 0.25\t0.1\t0.2\t0.3\t7\n");
}

}  // namespace
}  // namespace orderrank
