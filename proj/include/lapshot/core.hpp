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

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace lapshot {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorCode {
  kInvalidArgument,
  kInvalidTask,
  kDimMismatch,
  kGraphTooSmall,
  kMissingBaseMean,
  kSampling,
  kParse,
  kIo,
  kNumeric,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct InvalidArgumentError : Error {
  explicit InvalidArgumentError(const std::string& m)
      : Error(ErrorCode::kInvalidArgument, m) {}
};
struct InvalidTaskError : Error {
  explicit InvalidTaskError(const std::string& m)
      : Error(ErrorCode::kInvalidTask, m) {}
};
struct DimMismatchError : Error {
  explicit DimMismatchError(const std::string& m)
      : Error(ErrorCode::kDimMismatch, m) {}
};
struct GraphTooSmallError : Error {
  explicit GraphTooSmallError(const std::string& m)
      : Error(ErrorCode::kGraphTooSmall, m) {}
};
struct MissingBaseMeanError : Error {
  explicit MissingBaseMeanError(const std::string& m)
      : Error(ErrorCode::kMissingBaseMean, m) {}
};
struct SamplingError : Error {
  explicit SamplingError(const std::string& m)
      : Error(ErrorCode::kSampling, m) {}
};
struct ParseError : Error {
  explicit ParseError(const std::string& m) : Error(ErrorCode::kParse, m) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m) : Error(ErrorCode::kIo, m) {}
};

// Raised when the solver encounters a non-finite objective. Carries the
// objective values monitored up to the failure point.
struct NumericError : Error {
  explicit NumericError(const std::string& m,
                        std::vector<double> objective_trace = {})
      : Error(ErrorCode::kNumeric, m), objective_trace(std::move(objective_trace)) {}
  std::vector<double> objective_trace;
};

// ---------------------------------------------------------------------------
// Dense row-major matrix
// ---------------------------------------------------------------------------

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) {
    return values_[r * cols_ + c];
  }
  double operator()(std::size_t r, std::size_t c) const {
    return values_[r * cols_ + c];
  }

  std::span<double> row(std::size_t r) {
    return {values_.data() + r * cols_, cols_};
  }
  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols_, cols_};
  }

  std::vector<double>& values() noexcept { return values_; }
  const std::vector<double>& values() const noexcept { return values_; }

  bool all_finite() const;

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// ---------------------------------------------------------------------------
// Feature matrices and tasks
// ---------------------------------------------------------------------------

// Dense embedding matrix with optional per-row labels/ids. The base_mean
// vector, when present, is the centering vector used by CL2 normalization;
// it is bundled with the features because it comes from the same file.
struct FeatureMatrix {
  Matrix data;
  std::optional<std::vector<std::int32_t>> labels;
  std::vector<std::string> ids;
  std::optional<std::vector<double>> base_mean;

  std::size_t rows() const noexcept { return data.rows(); }
  std::size_t dim() const noexcept { return data.cols(); }
  std::span<const double> row(std::size_t q) const { return data.row(q); }
  bool has_labels() const noexcept { return labels.has_value(); }

  // Enforces ingestion invariants: finite values, label/id lengths match.
  void validate(const std::string& context) const;
};

// One few-shot task: labeled support set plus a query set whose labels,
// when present, are ground truth held out for scoring only.
struct FewShotTask {
  FeatureMatrix support;
  FeatureMatrix query;
  std::size_t num_classes = 0;
  std::vector<std::size_t> shots_per_class;
  // class id c -> original label value, filled by remap_labels.
  std::vector<std::int32_t> label_map;
};

// Remaps support labels bijectively onto 0..C-1, ascending by original
// value. Query ground-truth labels, when present, are remapped through the
// same table. Idempotent: a second application keeps labels and the
// recorded mapping unchanged.
FewShotTask remap_labels(FewShotTask task);

// ---------------------------------------------------------------------------
// Soft assignments
// ---------------------------------------------------------------------------

// N x C row-stochastic matrix of relaxed label assignments.
struct SoftAssignment {
  Matrix probabilities;
  int iteration = 0;

  std::size_t rows() const noexcept { return probabilities.rows(); }
  std::size_t classes() const noexcept { return probabilities.cols(); }
};

// ---------------------------------------------------------------------------
// Inference configuration
// ---------------------------------------------------------------------------

enum class Distance { kEuclidean, kSquaredEuclidean, kCosineDistance };
enum class Normalization { kNone, kL2, kCl2 };

const char* to_string(Distance d);
const char* to_string(Normalization n);
Distance distance_from_string(const std::string& s);
Normalization normalization_from_string(const std::string& s);

struct InferenceConfig {
  double lambda = 1.0;
  int knn = 3;
  Distance distance = Distance::kEuclidean;
  Normalization normalization = Normalization::kNone;
  bool rectify_prototypes = false;
  bool shift_correction = false;
  bool symmetrize_affinity = false;
  int max_iterations = 1000;
  double rel_tolerance = 1e-6;

  void validate() const;
};

// Distance between two vectors of equal length under the given metric.
// Cosine similarity against a zero-norm vector is taken as 0 (distance 1);
// when `zero_norm` is non-null it is set if that case was hit.
double point_distance(std::span<const double> a, std::span<const double> b,
                      Distance metric, bool* zero_norm = nullptr);

double cosine_similarity(std::span<const double> a, std::span<const double> b,
                         bool* zero_norm = nullptr);

// ---------------------------------------------------------------------------
// Deterministic randomness
// ---------------------------------------------------------------------------

// Deterministic generator: a std::mt19937_64 engine (whose raw stream is
// fixed by the standard) with hand-rolled distributions on top, so the
// produced values do not depend on the standard-library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Uniform in [0, bound) by rejection; bound must be positive.
  std::size_t next_index(std::size_t bound);

  // Standard normal via Box-Muller; generates pairs and caches one.
  double next_gaussian();

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_index(i)]);
    }
  }

  // First k entries of a partial Fisher-Yates over 0..n-1, in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k);

  // Per-episode seed scheme: splitmix64 finalizer applied to
  // root + (index + 1) * 0x9E3779B97F4A7C15. Replaying one episode only
  // needs its root seed and index.
  static std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

 private:
  std::mt19937_64 engine_;
  bool has_cached_gaussian_ = false;
  double cached_gaussian_ = 0.0;
};

}  // namespace lapshot
