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

#include "lapshot/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace lapshot {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Pool rows grouped by label value, labels ascending.
std::vector<std::pair<std::int32_t, std::vector<std::size_t>>> group_by_label(
    const FeatureMatrix& pool) {
  if (!pool.has_labels()) {
    throw InvalidArgumentError("episode sampling needs a labeled pool");
  }
  std::map<std::int32_t, std::vector<std::size_t>> groups;
  const auto& labels = *pool.labels;
  for (std::size_t q = 0; q < labels.size(); ++q) {
    groups[labels[q]].push_back(q);
  }
  return {groups.begin(), groups.end()};
}

FeatureMatrix gather_rows(const FeatureMatrix& pool,
                          const std::vector<std::size_t>& rows,
                          const std::vector<std::int32_t>& row_labels) {
  FeatureMatrix out;
  out.data = Matrix(rows.size(), pool.dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto src = pool.row(rows[i]);
    auto dst = out.data.row(i);
    std::copy(src.begin(), src.end(), dst.begin());
  }
  out.labels = row_labels;
  out.base_mean = pool.base_mean;
  return out;
}

double sample_stddev(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(n - 1));
}

double mean_of(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

void aggregate(EpisodeReport& report) {
  const std::size_t t = report.per_episode.size();
  std::vector<double> acc(t), per_class(t), iters(t), wall(t);
  for (std::size_t i = 0; i < t; ++i) {
    const EpisodeResult& e = report.per_episode[i];
    acc[i] = e.accuracy;
    per_class[i] = e.per_class_accuracy;
    iters[i] = static_cast<double>(e.iterations);
    wall[i] = e.wall_seconds;
    report.converged_episodes += e.converged ? 1 : 0;
    report.monotone_episodes += e.monotone ? 1 : 0;
    report.knn_clamped_episodes += e.knn_clamped ? 1 : 0;
    report.total_wall_seconds += e.wall_seconds;
  }
  const double sqrt_t = std::sqrt(static_cast<double>(std::max<std::size_t>(t, 1)));
  report.mean_accuracy = mean_of(acc);
  report.ci95_half_width = 1.96 * sample_stddev(acc) / sqrt_t;
  report.mean_per_class_accuracy = mean_of(per_class);
  report.per_class_ci95_half_width = 1.96 * sample_stddev(per_class) / sqrt_t;
  report.mean_iterations = mean_of(iters);
  report.mean_wall_seconds = mean_of(wall);

  if (!iters.empty()) {
    std::sort(iters.begin(), iters.end());
    const std::size_t mid = t / 2;
    report.median_iterations =
        (t % 2 == 1) ? iters[mid] : 0.5 * (iters[mid - 1] + iters[mid]);
  }
}

}  // namespace

void EpisodeSpec::validate() const {
  if (ways < 2) throw InvalidArgumentError("ways must be >= 2");
  if (shots.empty()) throw InvalidArgumentError("shots must not be empty");
  if (shots.size() != 1 && shots.size() != static_cast<std::size_t>(ways)) {
    throw InvalidArgumentError(
        "shots must hold one value or exactly `ways` values");
  }
  for (int s : shots) {
    if (s < 1) throw InvalidArgumentError("every shot count must be >= 1");
  }
  if (queries_per_class < 1) {
    throw InvalidArgumentError("queries_per_class must be >= 1");
  }
  if (num_episodes < 1) {
    throw InvalidArgumentError("num_episodes must be >= 1");
  }
}

int EpisodeSpec::shots_for(std::size_t class_index) const {
  return balanced() ? shots[0] : shots[class_index];
}

void SyntheticSpec::validate() const {
  if (num_classes < 1) throw InvalidArgumentError("num_classes must be >= 1");
  if (dim < 1) throw InvalidArgumentError("dim must be >= 1");
  if (!(cluster_std > 0.0)) {
    throw InvalidArgumentError("cluster_std must be > 0");
  }
  if (center_scale < 0.0) {
    throw InvalidArgumentError("center_scale must be >= 0");
  }
  if (points_per_class < 1) {
    throw InvalidArgumentError("points_per_class must be >= 1");
  }
}

FewShotTask sample_episode(const FeatureMatrix& pool, const EpisodeSpec& spec,
                           Rng& rng) {
  spec.validate();
  const auto groups = group_by_label(pool);
  if (groups.size() < static_cast<std::size_t>(spec.ways)) {
    throw SamplingError("pool has " + std::to_string(groups.size()) +
                        " classes but the episode needs " +
                        std::to_string(spec.ways));
  }

  std::vector<std::size_t> chosen = rng.sample_without_replacement(
      groups.size(), static_cast<std::size_t>(spec.ways));
  // Ascending label order so per-class shot counts attach deterministically.
  std::sort(chosen.begin(), chosen.end());

  std::vector<std::size_t> support_rows, query_rows;
  std::vector<std::int32_t> support_labels, query_labels;
  for (std::size_t c = 0; c < chosen.size(); ++c) {
    const auto& [label, rows] = groups[chosen[c]];
    const int shots = spec.shots_for(c);
    const std::size_t needed =
        static_cast<std::size_t>(shots) +
        static_cast<std::size_t>(spec.queries_per_class);
    if (rows.size() < needed) {
      throw SamplingError("class " + std::to_string(label) + " has " +
                          std::to_string(rows.size()) + " rows but needs " +
                          std::to_string(needed));
    }
    std::vector<std::size_t> picked =
        rng.sample_without_replacement(rows.size(), needed);
    for (std::size_t i = 0; i < static_cast<std::size_t>(shots); ++i) {
      support_rows.push_back(rows[picked[i]]);
      support_labels.push_back(label);
    }
    for (std::size_t i = static_cast<std::size_t>(shots); i < needed; ++i) {
      query_rows.push_back(rows[picked[i]]);
      query_labels.push_back(label);
    }
  }

  FewShotTask task;
  task.support = gather_rows(pool, support_rows, support_labels);
  task.query = gather_rows(pool, query_rows, query_labels);
  return remap_labels(std::move(task));
}

EpisodeReport run_benchmark(const FeatureMatrix& pool, const EpisodeSpec& spec,
                            const InferenceConfig& config, Method method,
                            int threads) {
  spec.validate();
  config.validate();
  pool.validate("pool");

  EpisodeReport report;
  report.config = config;
  report.spec = spec;
  report.method = method;
  report.per_episode.resize(static_cast<std::size_t>(spec.num_episodes));

  const auto run_episode = [&](std::size_t index) {
    const std::uint64_t seed = Rng::derive_seed(spec.seed, index);
    try {
      Rng rng(seed);
      const FewShotTask task = sample_episode(pool, spec, rng);
      const auto start = Clock::now();
      const PipelineResult result = run_pipeline(task, config, method);
      EpisodeResult& out = report.per_episode[index];
      out.wall_seconds = seconds_since(start);
      out.seed = seed;
      out.accuracy = result.accuracy;
      out.per_class_accuracy = result.per_class_accuracy;
      out.iterations = result.result.trace.iterations;
      out.converged = result.result.trace.converged;
      out.monotone = result.result.trace.monotone;
      out.knn_clamped = result.knn_clamped;
      out.label_map = result.label_map;
    } catch (const Error& e) {
      throw Error(e.code(), "episode " + std::to_string(index) + " (seed " +
                                std::to_string(seed) + "): " + e.what());
    }
  };

  const std::size_t total = report.per_episode.size();
  const int workers = std::max(1, threads);
  if (workers == 1) {
    for (std::size_t i = 0; i < total; ++i) run_episode(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool_threads;
    pool_threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool_threads.emplace_back([&] {
        while (!failed.load(std::memory_order_relaxed)) {
          const std::size_t i = next.fetch_add(1);
          if (i >= total) break;
          try {
            run_episode(i);
          } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            failed.store(true);
          }
        }
      });
    }
    for (auto& t : pool_threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  aggregate(report);
  return report;
}

TuneResult tune_lambda(const FeatureMatrix& pool, const EpisodeSpec& spec,
                       const InferenceConfig& config,
                       std::span<const double> grid, int threads) {
  if (grid.empty()) {
    throw InvalidArgumentError("lambda grid must not be empty");
  }
  TuneResult result;
  result.table.reserve(grid.size());
  for (double lambda : grid) {
    InferenceConfig candidate = config;
    candidate.lambda = lambda;
    const EpisodeReport report =
        run_benchmark(pool, spec, candidate, Method::kLaplacian, threads);
    result.table.push_back(
        {lambda, report.mean_accuracy, report.ci95_half_width});
  }
  const TuneEntry* best = &result.table.front();
  for (const TuneEntry& entry : result.table) {
    if (entry.mean_accuracy > best->mean_accuracy ||
        (entry.mean_accuracy == best->mean_accuracy &&
         entry.lambda < best->lambda)) {
      best = &entry;
    }
  }
  result.best_lambda = best->lambda;
  return result;
}

FeatureMatrix generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);

  const auto classes = static_cast<std::size_t>(spec.num_classes);
  const auto dim = static_cast<std::size_t>(spec.dim);
  const auto per_class = static_cast<std::size_t>(spec.points_per_class);

  // All centers are drawn before any points so the layout is a pure
  // function of (seed, num_classes, dim).
  Matrix centers(classes, dim);
  for (std::size_t c = 0; c < classes; ++c) {
    auto row = centers.row(c);
    for (std::size_t i = 0; i < dim; ++i) {
      row[i] = rng.next_uniform(-spec.center_scale, spec.center_scale);
    }
  }

  FeatureMatrix pool;
  pool.data = Matrix(classes * per_class, dim);
  std::vector<std::int32_t> labels(classes * per_class);
  for (std::size_t c = 0; c < classes; ++c) {
    const auto center = centers.row(c);
    for (std::size_t p = 0; p < per_class; ++p) {
      auto row = pool.data.row(c * per_class + p);
      for (std::size_t i = 0; i < dim; ++i) {
        row[i] = center[i] + spec.cluster_std * rng.next_gaussian();
      }
      labels[c * per_class + p] = static_cast<std::int32_t>(c);
    }
  }
  pool.labels = std::move(labels);
  return pool;
}

TimingResult time_inference(const FeatureMatrix& pool, const EpisodeSpec& spec,
                            const InferenceConfig& config) {
  spec.validate();
  config.validate();

  TimingResult timing;
  for (int i = 0; i < spec.num_episodes; ++i) {
    Rng rng(Rng::derive_seed(spec.seed, static_cast<std::uint64_t>(i)));
    const FewShotTask task = sample_episode(pool, spec, rng);

    auto start = Clock::now();
    (void)run_pipeline(task, config, Method::kLaplacian);
    timing.mean_seconds_laplacian += seconds_since(start);

    start = Clock::now();
    (void)run_pipeline(task, config, Method::kNearestPrototype);
    timing.mean_seconds_nearest_prototype += seconds_since(start);
  }
  timing.mean_seconds_laplacian /= spec.num_episodes;
  timing.mean_seconds_nearest_prototype /= spec.num_episodes;
  return timing;
}

std::array<EpisodeReport, 4> run_ablation(const FeatureMatrix& pool,
                                          const EpisodeSpec& spec,
                                          const InferenceConfig& config,
                                          int threads) {
  InferenceConfig plain = config;
  plain.rectify_prototypes = false;
  InferenceConfig rectified = config;
  rectified.rectify_prototypes = true;
  return {
      run_benchmark(pool, spec, plain, Method::kNearestPrototype, threads),
      run_benchmark(pool, spec, plain, Method::kLaplacian, threads),
      run_benchmark(pool, spec, rectified, Method::kNearestPrototype, threads),
      run_benchmark(pool, spec, rectified, Method::kLaplacian, threads),
  };
}

}  // namespace lapshot
