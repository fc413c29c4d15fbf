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

// orderrank: generate synthetic sessions, train, infer, benchmark, evaluate.
//
// Exit codes: 0 success (or converged), 2 trainer hit its iteration budget,
// 64 usage or configuration error, 65 malformed data, 74 file I/O failure.

#include <orderrank/assignment.hpp>
#include <orderrank/eval.hpp>
#include <orderrank/io.hpp>
#include <orderrank/payoff_gain.hpp>
#include <orderrank/plackett_luce.hpp>
#include <orderrank/synthetic.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using orderrank::io::json;
namespace io = orderrank::io;

enum ExitCode : int {
  kOk = 0,
  kMaxIterations = 2,
  kUsage = 64,
  kData = 65,
  kIo = 74,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::optional<std::uint64_t> seed;
  std::string config;
  std::string method;
  std::optional<double> lambda, eta, eps;
  std::optional<double> step_size, tol, inner_tol;
  std::optional<int> max_iters, max_outer, max_inner;
  std::string out;
  std::string in;
  std::string truth;
  std::string truth_out;
  std::string solver = "sort";
  std::string gain = "linear";
  std::vector<std::string> models;
  std::vector<std::string> names;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path + " for reading");
  return f;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  if (!f) throw IoError("write to " + path + " failed");
}

json read_config(const std::string& path) {
  if (path.empty()) return json::object();
  auto f = open_in(path);
  try {
    json j = json::parse(f);
    if (!j.is_object()) throw UsageError("config " + path + " must hold a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw UsageError("config " + path + ": " + e.what());
  }
}

template <typename T>
T config_value(const json& cfg, const char* key, T fallback) {
  if (!cfg.contains(key)) return fallback;
  try {
    return cfg.at(key).get<T>();
  } catch (const json::exception& e) {
    throw UsageError(std::string("config key \"") + key + "\": " + e.what());
  }
}

orderrank::GDConfig pl_config(const json& cfg, const Options& opt) {
  orderrank::GDConfig c;
  c.step_size = opt.step_size.value_or(config_value(cfg, "step_size", c.step_size));
  c.max_iters = opt.max_iters.value_or(config_value(cfg, "max_iters", c.max_iters));
  c.tol = opt.tol.value_or(config_value(cfg, "tol", c.tol));
  return c;
}

orderrank::AltMinConfig altmin_config(const json& cfg, const Options& opt) {
  orderrank::AltMinConfig c;
  c.eps = opt.eps.value_or(config_value(cfg, "eps", c.eps));
  c.eta = opt.eta.value_or(config_value(cfg, "eta", c.eta));
  c.inner_tol = opt.inner_tol.value_or(config_value(cfg, "inner_tol", c.inner_tol));
  c.max_outer = opt.max_outer.value_or(config_value(cfg, "max_outer", c.max_outer));
  c.max_inner = opt.max_inner.value_or(config_value(cfg, "max_inner", c.max_inner));
  return c;
}

json pl_config_json(const orderrank::GDConfig& c) {
  return json{{"step_size", c.step_size}, {"max_iters", c.max_iters}, {"tol", c.tol}};
}

json altmin_config_json(const orderrank::AltMinConfig& c) {
  return json{{"eps", c.eps}, {"eta", c.eta}, {"inner_tol", c.inner_tol},
              {"max_outer", c.max_outer}, {"max_inner", c.max_inner}};
}

/// Everything needed to re-run one command. Written next to its main output.
struct Manifest {
  std::string command;
  std::vector<std::string> argv;
  json body = json::object();
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void write(const std::string& out_path, int exit_code) {
    json j = body;
    j["command"] = command;
    j["argv"] = argv;
    j["exit_code"] = exit_code;
    j["duration_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    write_file(out_path + ".manifest.json", j.dump(2) + "\n");
  }
};

void require_out(const Options& opt) {
  if (opt.out.empty()) throw UsageError("--out is required");
}

// --- generate --------------------------------------------------------------

int cmd_generate(const Options& opt, Manifest& manifest) {
  require_out(opt);
  const json cfg = read_config(opt.config);
  const auto mode = config_value<std::string>(cfg, "mode", "random_orders");
  const std::uint64_t seed = opt.seed.value_or(config_value<std::uint64_t>(cfg, "seed", 1));
  const std::string truth_path = opt.truth_out.empty() ? opt.out + ".truth.json" : opt.truth_out;

  std::optional<orderrank::GroundTruth> truth;
  std::optional<orderrank::Dataset> data;
  json resolved;
  if (mode == "random_orders") {
    const auto n = config_value<std::size_t>(cfg, "n", 5);
    const auto d = config_value<std::size_t>(cfg, "d", 10);
    const auto count = config_value<std::size_t>(cfg, "N", 1000);
    const auto cov = config_value(cfg, "cov_scale", orderrank::kDefaultCovScale);
    if (n < 1 || d < 1 || count < 1) throw UsageError("n, d and N must be positive");
    const auto gain = config_value(cfg, "gain", std::vector<double>(n, 1.0 / static_cast<double>(n)));
    if (gain.size() != n) throw UsageError("gain must have n entries");
    try {
      truth = orderrank::make_ground_truth(n, d, orderrank::derive_seed(seed, 0), cov)
                  .with_gains(Eigen::Map<const orderrank::Vector>(gain.data(), static_cast<Eigen::Index>(n)));
    } catch (const orderrank::Error& e) {
      throw UsageError(e.what());
    }
    data = orderrank::generate_dataset(*truth, count, orderrank::derive_seed(seed, 1));
    resolved = json{{"mode", mode}, {"n", n}, {"d", d}, {"N", count}, {"gain", gain}, {"cov_scale", cov}};
  } else if (mode == "dwell") {
    orderrank::DwellConfig c;
    c.n = config_value(cfg, "n", c.n);
    c.d = config_value(cfg, "d", c.d);
    c.num_lists = config_value(cfg, "num_lists", c.num_lists);
    c.sessions_per_list = config_value(cfg, "sessions_per_list", c.sessions_per_list);
    c.explore_prob = config_value(cfg, "explore_prob", c.explore_prob);
    c.dwell_seconds = config_value(cfg, "dwell_seconds", c.dwell_seconds);
    c.noise_sigma = config_value(cfg, "noise_sigma", c.noise_sigma);
    c.cov_scale = config_value(cfg, "cov_scale", c.cov_scale);
    c.gains = config_value(cfg, "gain", c.gains);
    c.seed = seed;
    try {
      c.validate();
    } catch (const orderrank::Error& e) {
      throw UsageError(e.what());
    }
    auto dd = orderrank::generate_dwell_sessions(c);
    truth = std::move(dd.truth);
    data = std::move(dd.sessions);
    resolved = json{{"mode", mode}, {"n", c.n}, {"d", c.d}, {"num_lists", c.num_lists},
                    {"sessions_per_list", c.sessions_per_list}, {"explore_prob", c.explore_prob},
                    {"dwell_seconds", c.dwell_seconds}, {"noise_sigma", c.noise_sigma},
                    {"cov_scale", c.cov_scale}, {"gain", c.gains}};
  } else {
    throw UsageError("unknown generate mode \"" + mode + "\"");
  }

  std::ostringstream sessions;
  io::write_sessions(sessions, *data);
  write_file(opt.out, sessions.str());
  write_file(truth_path, io::ground_truth_to_json(*truth).dump(2) + "\n");
  manifest.body = json{{"seed", seed}, {"config", resolved}, {"inputs", {opt.config}},
                       {"outputs", {opt.out, truth_path}}, {"num_sessions", data->size()}};
  return kOk;
}

// --- train -----------------------------------------------------------------

int status_exit(orderrank::TrainStatus s) {
  switch (s) {
    case orderrank::TrainStatus::kConverged: return kOk;
    case orderrank::TrainStatus::kMaxIterations: return kMaxIterations;
    case orderrank::TrainStatus::kStalled:
      std::cerr << "warning: no descent step found; stopped at the last accepted iterate\n";
      return kOk;
  }
  return kOk;
}

int cmd_train(const Options& opt, Manifest& manifest) {
  require_out(opt);
  if (opt.in.empty()) throw UsageError("--in is required");
  const json cfg = read_config(opt.config);
  const auto method = opt.method.empty() ? config_value<std::string>(cfg, "method", "") : opt.method;
  if (method != "listmle" && method != "weighted-listmle" && method != "payoff-gain") {
    throw UsageError("--method must be listmle, weighted-listmle or payoff-gain");
  }
  auto in = open_in(opt.in);
  const orderrank::Dataset data = io::read_sessions(in);

  json settings;
  io::Model model = orderrank::PLModel(orderrank::Vector::Zero(1));
  orderrank::TrainStatus status;
  std::vector<double> history;
  if (method == "payoff-gain") {
    const auto c = altmin_config(cfg, opt);
    const double lambda = opt.lambda.value_or(config_value(cfg, "lambda", orderrank::kDefaultLambda));
    auto r = orderrank::train_alternating(data, lambda, c);
    model = std::move(r.model);
    status = r.status;
    history = std::move(r.objective_history);
    settings = altmin_config_json(c);
    settings["lambda"] = lambda;
  } else {
    const auto c = pl_config(cfg, opt);
    settings = pl_config_json(c);
    orderrank::PLTrainResult r = [&] {
      if (method == "weighted-listmle") return orderrank::train_pl(data, c, true);
      if (opt.truth.empty()) return orderrank::train_pl(data, c, false);
      auto tf = open_in(opt.truth);
      const auto gt = io::ground_truth_from_json(json::parse(tf));
      return orderrank::train_pl(orderrank::with_relevance_orders(gt, data), c, false);
    }();
    model = std::move(r.model);
    status = r.status;
    history = std::move(r.loss_history);
  }
  write_file(opt.out, io::model_to_json(model).dump() + "\n");
  manifest.body = json{{"method", method}, {"config", settings}, {"inputs", {opt.in}},
                       {"outputs", {opt.out}}, {"status", orderrank::to_string(status)},
                       {"final_objective", history.back()}, {"objective_evaluations", history.size()}};
  if (!opt.truth.empty()) manifest.body["truth"] = opt.truth;
  return status_exit(status);
}

// --- infer -----------------------------------------------------------------

io::Model load_model(const std::string& path) {
  auto f = open_in(path);
  return io::read_model(f);
}

orderrank::Permutation infer_one(const io::Model& model, const orderrank::ItemList& items,
                                 const std::string& solver) {
  if (const auto* pl = std::get_if<orderrank::PLModel>(&model)) return orderrank::infer_pl(*pl, items);
  const auto& pg = std::get<orderrank::PayoffGainModel>(model);
  if (solver == "sort") return orderrank::infer_order(pg, items);
  const auto s = orderrank::scoring_matrix(pg, items);
  if (solver == "lsap") return orderrank::solve_lsap_exact(s).item_to_position;
  return orderrank::solve_lsap_greedy(s).item_to_position;
}

int cmd_infer(const Options& opt, Manifest& manifest) {
  require_out(opt);
  if (opt.in.empty() || opt.models.size() != 1) throw UsageError("infer needs --in and one --model");
  if (opt.solver != "sort" && opt.solver != "lsap" && opt.solver != "greedy") {
    throw UsageError("--solver must be sort, lsap or greedy");
  }
  const auto model = load_model(opt.models.front());
  auto in = open_in(opt.in);
  const auto records = io::read_records(in, false);
  std::ostringstream out;
  for (const auto& r : records) {
    try {
      out << json{{"order", infer_one(model, r.items, opt.solver).one_based()}}.dump() << '\n';
    } catch (const orderrank::Error& e) {
      throw io::DataError(e.what(), r.line);
    }
  }
  write_file(opt.out, out.str());
  manifest.body = json{{"solver", opt.solver}, {"inputs", {opt.models.front(), opt.in}},
                       {"outputs", {opt.out}}, {"num_lists", records.size()}};
  return kOk;
}

// --- benchmark -------------------------------------------------------------

int cmd_benchmark(const Options& opt, Manifest& manifest) {
  require_out(opt);
  const json cfg = read_config(opt.config);
  orderrank::BenchConfig c;
  c.n = config_value(cfg, "n", c.n);
  c.d = config_value(cfg, "d", c.d);
  c.n_train = config_value(cfg, "n_train", c.n_train);
  c.n_test = config_value(cfg, "n_test", c.n_test);
  c.cov_scale = config_value(cfg, "cov_scale", c.cov_scale);
  c.gain_vectors = config_value(cfg, "gain_vectors", c.gain_vectors);
  c.seed = opt.seed.value_or(config_value<std::uint64_t>(cfg, "seed", c.seed));
  c.lambda = opt.lambda.value_or(config_value(cfg, "lambda", c.lambda));
  c.pl = pl_config(cfg.value("pl", json::object()), opt);
  c.altmin = altmin_config(cfg.value("altmin", json::object()), opt);
  try {
    c.validate();
  } catch (const orderrank::Error& e) {
    throw UsageError(e.what());
  }
  const auto table = orderrank::run_benchmark(c);
  std::ostringstream out;
  io::write_bench_table(out, table);
  write_file(opt.out, out.str());
  json statuses = json::array();
  for (const auto& r : table.rows) {
    statuses.push_back({{"listmle", orderrank::to_string(r.listmle_status)},
                        {"weighted_listmle", orderrank::to_string(r.weighted_listmle_status)},
                        {"payoff_gain", orderrank::to_string(r.payoff_gain_status)}});
  }
  manifest.body = json{{"seed", c.seed},
                       {"config", {{"n", c.n}, {"d", c.d}, {"n_train", c.n_train}, {"n_test", c.n_test},
                                   {"cov_scale", c.cov_scale}, {"gain_vectors", c.gain_vectors},
                                   {"lambda", c.lambda}, {"pl", pl_config_json(c.pl)},
                                   {"altmin", altmin_config_json(c.altmin)}}},
                       {"inputs", {opt.config}}, {"outputs", {opt.out}}, {"trainer_status", statuses}};
  return kOk;
}

// --- evaluate --------------------------------------------------------------

int cmd_evaluate(const Options& opt, Manifest& manifest) {
  require_out(opt);
  if (opt.in.empty() || opt.models.empty()) throw UsageError("evaluate needs --in and at least one --model");
  if (!opt.names.empty() && opt.names.size() != opt.models.size()) {
    throw UsageError("give one --name per --model or none");
  }
  if (opt.gain != "linear" && opt.gain != "exponential") throw UsageError("--gain must be linear or exponential");
  std::vector<orderrank::NamedScorer> scorers;
  for (std::size_t k = 0; k < opt.models.size(); ++k) {
    const auto model = load_model(opt.models[k]);
    std::string name = opt.names.empty() ? std::filesystem::path(opt.models[k]).stem().string() : opt.names[k];
    if (const auto* pl = std::get_if<orderrank::PLModel>(&model)) {
      scorers.push_back({name, orderrank::pl_scorer(*pl)});
    } else {
      scorers.push_back({name, orderrank::payoff_gain_scorer(std::get<orderrank::PayoffGainModel>(model))});
    }
  }
  auto in = open_in(opt.in);
  const auto data = io::read_sessions(in);
  const auto groups = orderrank::group_sessions(data);
  const auto gain = opt.gain == "linear" ? orderrank::NdcgGain::kLinear : orderrank::NdcgGain::kExponential;
  orderrank::EvalReport report;
  try {
    report = orderrank::evaluate_groups(scorers, groups, gain);
  } catch (const orderrank::DimensionError& e) {
    throw io::DataError(e.what());
  }
  for (const auto& r : report.rows) {
    if (r.num_skipped > 0) {
      std::cerr << "warning: " << r.model_name << ": skipped " << r.num_skipped << " all-zero groups\n";
    }
  }
  std::ostringstream out;
  io::write_eval_report(out, report);
  write_file(opt.out, out.str());
  json inputs = opt.models;
  inputs.push_back(opt.in);
  manifest.body = json{{"inputs", inputs}, {"outputs", {opt.out}}, {"ndcg_gain", opt.gain},
                       {"num_groups_total", groups.size()},
                       {"num_single_order_groups", report.num_single_order_groups}};
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Order-aware learning to rank from (list, shown order, score) sessions"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", opt.out, "Output file");
    sub->add_option("--config", opt.config, "JSON configuration file");
  };
  auto add_trainer = [&](CLI::App* sub) {
    sub->add_option("--lambda", opt.lambda, "Ridge penalty on positional gains");
    sub->add_option("--eta", opt.eta, "Largest projected-gradient step for v");
    sub->add_option("--eps", opt.eps, "Alternating minimization stopping threshold");
    sub->add_option("--step-size", opt.step_size, "Initial ListMLE gradient step");
    sub->add_option("--max-iters", opt.max_iters, "ListMLE iteration budget");
    sub->add_option("--tol", opt.tol, "ListMLE loss-decrease tolerance");
    sub->add_option("--inner-tol", opt.inner_tol, "Projected-gradient stopping tolerance");
    sub->add_option("--max-outer", opt.max_outer, "Alternating minimization iteration budget");
    sub->add_option("--max-inner", opt.max_inner, "Projected-gradient iteration budget");
  };

  auto* gen = app.add_subcommand("generate", "Write synthetic sessions and their ground truth");
  add_common(gen);
  gen->add_option("--seed", opt.seed, "Overrides the config seed");
  gen->add_option("--truth-out", opt.truth_out, "Ground-truth file (default: <out>.truth.json)");

  auto* train = app.add_subcommand("train", "Fit a model to a sessions file");
  add_common(train);
  add_trainer(train);
  train->add_option("--in", opt.in, "Sessions file")->required();
  train->add_option("--method", opt.method, "listmle | weighted-listmle | payoff-gain");
  train->add_option("--truth", opt.truth, "listmle only: train on relevance orders from this ground truth");
  train->add_option("--seed", opt.seed, "Recorded in the manifest; training is deterministic");

  auto* infer = app.add_subcommand("infer", "Predict a display order for each list");
  add_common(infer);
  infer->add_option("--model", opt.models, "Model file")->required();
  infer->add_option("--in", opt.in, "Lists file (order and score optional)")->required();
  infer->add_option("--solver", opt.solver, "payoff-gain only: sort | lsap | greedy");

  auto* bench = app.add_subcommand("benchmark", "Mean true score of each approach per gain vector");
  add_common(bench);
  add_trainer(bench);
  bench->add_option("--seed", opt.seed, "Overrides the config seed");

  auto* eval = app.add_subcommand("evaluate", "NDCG and top-1 score of models over grouped sessions");
  add_common(eval);
  eval->add_option("--model", opt.models, "Model file (repeatable)")->required();
  eval->add_option("--name", opt.names, "Report name per model (default: file stem)");
  eval->add_option("--in", opt.in, "Sessions file")->required();
  eval->add_option("--gain", opt.gain, "NDCG gain: linear | exponential");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kUsage;
  }

  Manifest manifest;
  manifest.argv.assign(argv, argv + argc);
  try {
    int rc = kOk;
    if (gen->parsed()) {
      manifest.command = "generate";
      rc = cmd_generate(opt, manifest);
    } else if (train->parsed()) {
      manifest.command = "train";
      rc = cmd_train(opt, manifest);
    } else if (infer->parsed()) {
      manifest.command = "infer";
      rc = cmd_infer(opt, manifest);
    } else if (bench->parsed()) {
      manifest.command = "benchmark";
      rc = cmd_benchmark(opt, manifest);
    } else {
      manifest.command = "evaluate";
      rc = cmd_evaluate(opt, manifest);
    }
    if (opt.seed) manifest.body["seed"] = *opt.seed;
    manifest.write(opt.out, rc);
    return rc;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const io::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const orderrank::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const json::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  }
}
