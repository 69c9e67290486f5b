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

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "lapshot/core.hpp"
#include "lapshot/pipeline.hpp"

namespace lapshot {

// N-way K-shot episode protocol. `shots` holds one entry for the balanced
// case or exactly `ways` entries for per-class counts (imbalanced regime);
// per-class counts attach to the sampled classes in ascending label order.
struct EpisodeSpec {
  int ways = 5;
  std::vector<int> shots{1};
  int queries_per_class = 15;
  int num_episodes = 1000;
  std::uint64_t seed = 42;

  void validate() const;
  int shots_for(std::size_t class_index) const;
  bool balanced() const noexcept { return shots.size() == 1; }
};

struct EpisodeResult {
  std::uint64_t seed = 0;
  double accuracy = 0.0;
  double per_class_accuracy = 0.0;
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
  bool knn_clamped = false;
  double wall_seconds = 0.0;
  std::vector<std::int32_t> label_map;
};

struct EpisodeReport {
  InferenceConfig config;
  EpisodeSpec spec;
  Method method = Method::kLaplacian;
  std::vector<EpisodeResult> per_episode;

  double mean_accuracy = 0.0;
  double ci95_half_width = 0.0;  // 1.96 * sample stddev / sqrt(T)
  double mean_per_class_accuracy = 0.0;
  double per_class_ci95_half_width = 0.0;
  double mean_iterations = 0.0;
  double median_iterations = 0.0;
  std::size_t converged_episodes = 0;
  std::size_t monotone_episodes = 0;
  std::size_t knn_clamped_episodes = 0;
  double mean_wall_seconds = 0.0;
  double total_wall_seconds = 0.0;
};

// Isotropic Gaussian blobs: per-class centers drawn uniformly from
// [-center_scale, center_scale]^dim, rows = center + N(0, sigma^2 I).
struct SyntheticSpec {
  int num_classes = 10;
  int dim = 16;
  double cluster_std = 1.0;
  double center_scale = 5.0;
  int points_per_class = 30;
  std::uint64_t seed = 0;

  void validate() const;
};

// The lambda grid used for tuning when none is given.
inline constexpr std::array<double, 8> kDefaultLambdaGrid = {
    0.1, 0.3, 0.5, 0.7, 0.8, 1.0, 1.2, 1.5};

// Samples one episode: `ways` distinct classes uniformly from the pool's
// label set, then per class `shots` support rows plus `queries_per_class`
// query rows without replacement. Query ground truth is kept for scoring.
// Throws SamplingError naming the class when a class is too small.
FewShotTask sample_episode(const FeatureMatrix& pool, const EpisodeSpec& spec,
                           Rng& rng);

// Runs the full pipeline over `spec.num_episodes` episodes with per-episode
// seeds derived from the root seed (Rng::derive_seed). Episodes are
// independent; `threads` > 1 distributes them over a worker pool with
// results folded in episode order, so the report content is identical for
// any thread count. Any episode failure is rethrown with the episode index
// and seed attached for replay.
EpisodeReport run_benchmark(const FeatureMatrix& pool, const EpisodeSpec& spec,
                            const InferenceConfig& config,
                            Method method = Method::kLaplacian,
                            int threads = 1);

struct TuneEntry {
  double lambda = 0.0;
  double mean_accuracy = 0.0;
  double ci95_half_width = 0.0;
};

struct TuneResult {
  double best_lambda = 0.0;
  std::vector<TuneEntry> table;
};

// Paired grid search: every lambda is evaluated on identical episodes
// (same root seed). Ties resolve to the smaller lambda.
TuneResult tune_lambda(const FeatureMatrix& pool, const EpisodeSpec& spec,
                       const InferenceConfig& config,
                       std::span<const double> grid, int threads = 1);

FeatureMatrix generate_synthetic(const SyntheticSpec& spec);

struct TimingResult {
  double mean_seconds_laplacian = 0.0;
  double mean_seconds_nearest_prototype = 0.0;
};

// Mean single-threaded wall time per episode for the Laplacian solve and
// the nearest-prototype baseline on identical episodes. Sampling and file
// I/O are excluded; the timed region is the inference pipeline itself.
TimingResult time_inference(const FeatureMatrix& pool, const EpisodeSpec& spec,
                            const InferenceConfig& config);

// Four paired runs ablating the coupling term and prototype rectification:
// unary only; unary + Laplacian; unary + rectified prototypes; all three.
std::array<EpisodeReport, 4> run_ablation(const FeatureMatrix& pool,
                                          const EpisodeSpec& spec,
                                          const InferenceConfig& config,
                                          int threads = 1);

}  // namespace lapshot
