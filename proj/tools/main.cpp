// Copyright 2026 The lapshot Authors
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

// Command-line front end. Talks to the library exclusively through the C
// API in lapshot.h; every run-time option is funneled through
// lapshot_config_set so the CLI, the config file and the C API share one
// strict key set.
//
// Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 numerical
// failure.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lapshot.h"

namespace {

int exit_code_for(lapshot_status status) {
  switch (status) {
    case LAPSHOT_OK:
      return 0;
    case LAPSHOT_ERR_INVALID_ARGUMENT:
      return 1;
    case LAPSHOT_ERR_IO:
    case LAPSHOT_ERR_PARSE:
    case LAPSHOT_ERR_INVALID_TASK:
      return 2;
    case LAPSHOT_ERR_NUMERIC:
      return 3;
  }
  return 1;
}

// Exits the process on failure so call sites stay linear.
void check(lapshot_status status, const char* what) {
  if (status == LAPSHOT_OK) return;
  std::cerr << "error (" << what << "): " << lapshot_last_error() << "\n";
  std::exit(exit_code_for(status));
}

struct ConfigHandle {
  lapshot_config* ptr = nullptr;
  ~ConfigHandle() { lapshot_config_free(ptr); }
};

struct FeaturesHandle {
  lapshot_features* ptr = nullptr;
  ~FeaturesHandle() { lapshot_features_free(ptr); }
};

struct OwnedString {
  char* ptr = nullptr;
  ~OwnedString() { lapshot_string_free(ptr); }
  std::string str() const { return ptr == nullptr ? "" : ptr; }
};

// Options mirror the config keys verbatim; values are kept as strings and
// applied in declaration order only when the user supplied them.
class ConfigOptions {
 public:
  void add(CLI::App* cmd, const std::string& key,
           const std::string& description) {
    values_[key] = "";
    cmd->add_option("--" + key, values_[key], description);
  }

  void add_inference(CLI::App* cmd) {
    add(cmd, "lambda", "Laplacian regularization weight (>= 0)");
    add(cmd, "knn", "neighbor count for the affinity graph");
    add(cmd, "distance",
        "euclidean, squared_euclidean or cosine_distance");
    add(cmd, "normalization", "none, l2 or cl2");
    add(cmd, "rectify_prototypes", "true/false");
    add(cmd, "shift_correction", "true/false");
    add(cmd, "symmetrize_affinity", "true/false");
    add(cmd, "max_iterations", "iteration cap for the solver");
    add(cmd, "rel_tolerance", "relative convergence tolerance");
  }

  void add_episode(CLI::App* cmd) {
    add(cmd, "ways", "classes per episode");
    add(cmd, "shots", "support count per class, or a comma list");
    add(cmd, "queries_per_class", "query count per class");
    add(cmd, "num_episodes", "episode count");
    add(cmd, "seed", "root seed (per-episode seeds derive from it)");
    add(cmd, "threads", "worker threads for episodes");
  }

  void apply(CLI::App* cmd, lapshot_config* config) const {
    for (const auto& [key, value] : values_) {
      if (cmd->count("--" + key) > 0) {
        check(lapshot_config_set(config, key.c_str(), value.c_str()),
              "config");
      }
    }
  }

  const std::string& value(const std::string& key) const {
    return values_.at(key);
  }

 private:
  std::map<std::string, std::string> values_;
};

lapshot_config* make_config(const std::string& config_path, CLI::App* cmd,
                            const ConfigOptions& options) {
  lapshot_config* config = nullptr;
  if (!config_path.empty()) {
    check(lapshot_config_load(config_path.c_str(), &config), "config file");
  } else {
    check(lapshot_config_create(&config), "config");
  }
  options.apply(cmd, config);
  return config;
}

lapshot_features* read_features_or_exit(const std::string& path) {
  lapshot_features* f = nullptr;
  check(lapshot_features_read(path.c_str(), &f), path.c_str());
  return f;
}

void write_text_or_exit(const std::string& text, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write '" << path << "'\n";
    std::exit(2);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lapshot: Laplacian-regularized transductive few-shot "
               "inference"};
  app.require_subcommand(1);

  std::string config_path;

  // ---- infer ----
  auto* infer = app.add_subcommand(
      "infer", "classify one task from support/query feature files");
  std::string infer_support, infer_query, infer_output, infer_report;
  infer->add_option("--support", infer_support, "labeled support features")
      ->required();
  infer->add_option("--query", infer_query, "query features")->required();
  infer->add_option("--config", config_path, "run-config file");
  infer->add_option("--output", infer_output, "predicted labels CSV path");
  infer->add_option("--report", infer_report, "report text path");
  ConfigOptions infer_options;
  infer_options.add_inference(infer);

  // ---- bench ----
  auto* bench = app.add_subcommand(
      "bench", "episode benchmark over a labeled feature pool");
  std::string bench_pool, bench_report, bench_episodes_csv;
  bool bench_per_episode = false, bench_time = false, bench_ablation = false;
  bench->add_option("--pool", bench_pool, "labeled pool features")->required();
  bench->add_option("--config", config_path, "run-config file");
  bench->add_option("--report", bench_report, "report text path");
  bench->add_option("--episodes_csv", bench_episodes_csv,
                    "machine-readable per-episode CSV path");
  bench->add_flag("--per_episode", bench_per_episode,
                  "append the per-episode table to the report");
  bench->add_flag("--time", bench_time,
                  "also time inference against the nearest-prototype "
                  "baseline");
  bench->add_flag("--ablation", bench_ablation,
                  "run the 4-way ablation (unary/Laplacian x plain/"
                  "rectified prototypes)");
  ConfigOptions bench_options;
  bench_options.add_inference(bench);
  bench_options.add_episode(bench);

  // ---- tune ----
  auto* tune = app.add_subcommand(
      "tune", "grid search for lambda (and optionally knn) on a pool");
  std::string tune_pool, tune_report;
  tune->add_option("--pool", tune_pool, "labeled pool features")->required();
  tune->add_option("--config", config_path, "run-config file");
  tune->add_option("--report", tune_report, "report text path");
  ConfigOptions tune_options;
  tune_options.add_inference(tune);
  tune_options.add_episode(tune);
  tune_options.add(tune, "lambda_grid", "comma list of lambda values");
  tune_options.add(tune, "knn_grid", "comma list of knn values");

  // ---- synth ----
  auto* synth = app.add_subcommand(
      "synth", "generate a synthetic Gaussian-blob feature pool");
  std::uint32_t synth_classes = 10, synth_dim = 16, synth_points = 30;
  double synth_std = 1.0, synth_scale = 5.0;
  std::uint64_t synth_seed = 0;
  std::string synth_output;
  synth->add_option("--num_classes", synth_classes, "class count");
  synth->add_option("--dim", synth_dim, "feature dimension");
  synth->add_option("--cluster_std", synth_std, "per-class Gaussian sigma");
  synth->add_option("--center_scale", synth_scale,
                    "centers uniform in [-scale, scale]^dim");
  synth->add_option("--points_per_class", synth_points, "rows per class");
  synth->add_option("--seed", synth_seed, "generator seed");
  synth->add_option("--output", synth_output, "output feature file")
      ->required();

  // ---- convert ----
  auto* convert = app.add_subcommand(
      "convert", "convert between CSV and binary feature files");
  std::string convert_input, convert_output;
  convert->add_option("--input", convert_input, "input feature file")
      ->required();
  convert->add_option("--output", convert_output, "output feature file")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (infer->parsed()) {
    ConfigHandle config{make_config(config_path, infer, infer_options)};
    FeaturesHandle support{read_features_or_exit(infer_support)};
    FeaturesHandle query{read_features_or_exit(infer_query)};

    lapshot_infer_result* result = nullptr;
    check(lapshot_infer(support.ptr, query.ptr, config.ptr, &result),
          "infer");
    OwnedString report;
    check(lapshot_infer_result_render(result, &report.ptr), "render");
    std::cout << report.str();
    if (!infer_report.empty()) write_text_or_exit(report.str(), infer_report);
    if (!infer_output.empty()) {
      OwnedString labels;
      check(lapshot_infer_result_labels_csv(result, &labels.ptr), "labels");
      write_text_or_exit(labels.str(), infer_output);
    }
    lapshot_infer_result_free(result);
    return 0;
  }

  if (bench->parsed()) {
    ConfigHandle config{make_config(config_path, bench, bench_options)};
    FeaturesHandle pool{read_features_or_exit(bench_pool)};

    if (bench_ablation) {
      const char* names[4] = {"unary", "unary+laplacian", "unary+rectified",
                              "unary+laplacian+rectified"};
      const char* rectify[4] = {"false", "false", "true", "true"};
      const int method[4] = {1, 0, 1, 0};
      std::cout << "# lapshot ablation\n";
      for (int i = 0; i < 4; ++i) {
        check(lapshot_config_set(config.ptr, "rectify_prototypes", rectify[i]),
              "config");
        lapshot_bench_report* report = nullptr;
        check(lapshot_bench(pool.ptr, config.ptr, method[i], &report),
              "bench");
        std::printf("%s: %.2f  (ci95 %.2f)\n", names[i],
                    100.0 * lapshot_bench_report_accuracy(report),
                    100.0 * lapshot_bench_report_ci95(report));
        lapshot_bench_report_free(report);
      }
      return 0;
    }

    lapshot_bench_report* report = nullptr;
    check(lapshot_bench(pool.ptr, config.ptr, 0, &report), "bench");
    OwnedString text;
    check(lapshot_bench_report_render(report, bench_per_episode ? 1 : 0,
                                      &text.ptr),
          "render");
    std::cout << text.str();
    if (!bench_report.empty()) write_text_or_exit(text.str(), bench_report);
    if (!bench_episodes_csv.empty()) {
      OwnedString csv;
      check(lapshot_bench_report_render_csv(report, &csv.ptr), "render");
      write_text_or_exit(csv.str(), bench_episodes_csv);
    }
    lapshot_bench_report_free(report);

    if (bench_time) {
      double lap = 0.0, nearest = 0.0;
      check(lapshot_time(pool.ptr, config.ptr, &lap, &nearest), "time");
      std::printf("wall_seconds_laplacian_mean: %g\n", lap);
      std::printf("wall_seconds_nearest_prototype_mean: %g\n", nearest);
    }
    return 0;
  }

  if (tune->parsed()) {
    ConfigHandle config{make_config(config_path, tune, tune_options)};
    FeaturesHandle pool{read_features_or_exit(tune_pool)};

    std::vector<int> knn_grid;
    if (tune->count("--knn_grid") > 0) {
      std::string item;
      for (char ch : tune_options.value("knn_grid") + ",") {
        if (ch == ',') {
          if (!item.empty()) knn_grid.push_back(std::stoi(item));
          item.clear();
        } else {
          item.push_back(ch);
        }
      }
    }

    std::string text = "# lapshot tune report\n";
    double best_accuracy = -1.0, best_lambda = 0.0;
    int best_knn = 0;
    bool have_knn_grid = !knn_grid.empty();
    if (!have_knn_grid) knn_grid.push_back(-1);  // single pass, config knn

    for (int k : knn_grid) {
      if (k > 0) {
        check(lapshot_config_set(config.ptr, "knn", std::to_string(k).c_str()),
              "config");
      }
      lapshot_tune_result* result = nullptr;
      check(lapshot_tune(pool.ptr, config.ptr, nullptr, 0, &result), "tune");
      if (have_knn_grid) text += "knn: " + std::to_string(k) + "\n";
      OwnedString table;
      check(lapshot_tune_result_render(result, &table.ptr), "render");
      std::string body = table.str();
      // Drop the per-call header line; one header is enough.
      body.erase(0, body.find('\n') + 1);
      text += body;
      for (std::size_t i = 0; i < lapshot_tune_size(result); ++i) {
        const double acc = lapshot_tune_accuracy_at(result, i);
        if (acc > best_accuracy) {
          best_accuracy = acc;
          best_lambda = lapshot_tune_lambda_at(result, i);
          best_knn = k;
        }
      }
      lapshot_tune_result_free(result);
    }
    if (have_knn_grid) {
      text += "best_knn: " + std::to_string(best_knn) + "\n";
    }
    std::printf("%s", text.c_str());
    std::printf("selected_lambda: %g\n", best_lambda);
    if (!tune_report.empty()) write_text_or_exit(text, tune_report);
    return 0;
  }

  if (synth->parsed()) {
    lapshot_features* features = nullptr;
    check(lapshot_features_synth(synth_classes, synth_dim, synth_std,
                                 synth_scale, synth_points, synth_seed,
                                 &features),
          "synth");
    check(lapshot_features_write(features, synth_output.c_str()),
          synth_output.c_str());
    std::printf("wrote %u rows (dim %u) to %s\n",
                lapshot_features_rows(features),
                lapshot_features_dim(features), synth_output.c_str());
    lapshot_features_free(features);
    return 0;
  }

  if (convert->parsed()) {
    FeaturesHandle features{read_features_or_exit(convert_input)};
    check(lapshot_features_write(features.ptr, convert_output.c_str()),
          convert_output.c_str());
    std::printf("wrote %u rows (dim %u) to %s\n",
                lapshot_features_rows(features.ptr),
                lapshot_features_dim(features.ptr), convert_output.c_str());
    return 0;
  }

  return 1;
}
