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

#include <cmath>
#include <set>

#include "doctest.h"
#include "lapshot/core.hpp"

using namespace lapshot;

namespace {

FewShotTask task_with_labels(std::vector<std::int32_t> support_labels,
                             std::size_t dim = 2) {
  FewShotTask task;
  task.support.data = Matrix(support_labels.size(), dim, 0.5);
  task.support.labels = std::move(support_labels);
  task.query.data = Matrix(3, dim, 0.25);
  return task;
}

}  // namespace

TEST_CASE("remap_labels maps ascending original values") {
  FewShotTask task = task_with_labels({7, 3, 3, 9});
  const FewShotTask remapped = remap_labels(task);
  CHECK(*remapped.support.labels == std::vector<std::int32_t>{1, 0, 0, 2});
  CHECK(remapped.label_map == std::vector<std::int32_t>{3, 7, 9});
  CHECK(remapped.num_classes == 3);
  CHECK(remapped.shots_per_class == std::vector<std::size_t>{2, 1, 1});
}

TEST_CASE("remap_labels identity case") {
  const FewShotTask remapped = remap_labels(task_with_labels({0, 1}));
  CHECK(*remapped.support.labels == std::vector<std::int32_t>{0, 1});
  CHECK(remapped.label_map == std::vector<std::int32_t>{0, 1});
}

TEST_CASE("remap_labels rejects a single class") {
  CHECK_THROWS_AS(remap_labels(task_with_labels({5})), InvalidTaskError);
  CHECK_THROWS_AS(remap_labels(task_with_labels({5, 5, 5})),
                  InvalidTaskError);
}

TEST_CASE("remap_labels is idempotent including the recorded mapping") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::int32_t> labels;
    const std::size_t n = 2 + rng.next_index(10);
    for (std::size_t i = 0; i < n; ++i) {
      labels.push_back(static_cast<std::int32_t>(rng.next_index(40)) - 20);
    }
    if (std::set<std::int32_t>(labels.begin(), labels.end()).size() < 2) {
      continue;
    }
    const FewShotTask once = remap_labels(task_with_labels(labels));
    const FewShotTask twice = remap_labels(once);
    CHECK(*twice.support.labels == *once.support.labels);
    CHECK(twice.label_map == once.label_map);
  }
}

TEST_CASE("remap_labels remaps query ground truth and rejects strangers") {
  FewShotTask task = task_with_labels({10, 20});
  task.query.labels = std::vector<std::int32_t>{20, 10, 20};
  const FewShotTask remapped = remap_labels(task);
  CHECK(*remapped.query.labels == std::vector<std::int32_t>{1, 0, 1});

  FewShotTask bad = task_with_labels({10, 20});
  bad.query.labels = std::vector<std::int32_t>{30, 10, 20};
  CHECK_THROWS_AS(remap_labels(bad), InvalidTaskError);
}

TEST_CASE("rng reproducibility: identical seed, identical stream") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  Rng c(12345), d(12345);
  for (int i = 0; i < 100; ++i) {
    CHECK(c.next_gaussian() == d.next_gaussian());
    CHECK(c.next_index(97) == d.next_index(97));
  }
}

TEST_CASE("rng produces distinct streams for distinct seeds") {
  Rng a(1), b(2);
  int same = 0;
  for (int i = 0; i < 64; ++i) {
    if (a.next_u64() == b.next_u64()) ++same;
  }
  CHECK(same == 0);
}

TEST_CASE("rng gaussian moments are sane") {
  Rng rng(99);
  const int n = 200000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sq += g * g;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::abs(mean) < 0.01);
  CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("rng next_index stays in bounds and covers the range") {
  Rng rng(5);
  std::set<std::size_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t v = rng.next_index(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
}

TEST_CASE("rng sample_without_replacement yields distinct items") {
  Rng rng(11);
  const auto sample = rng.sample_without_replacement(10, 10);
  CHECK(std::set<std::size_t>(sample.begin(), sample.end()).size() == 10);
  CHECK_THROWS_AS(rng.sample_without_replacement(3, 4), InvalidArgumentError);
}

TEST_CASE("derive_seed is stable and spreads indices") {
  const std::uint64_t root = 42;
  CHECK(Rng::derive_seed(root, 0) == Rng::derive_seed(root, 0));
  std::set<std::uint64_t> seeds;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    seeds.insert(Rng::derive_seed(root, i));
  }
  CHECK(seeds.size() == 1000);
}

TEST_CASE("inference config validation") {
  InferenceConfig config;
  CHECK_NOTHROW(config.validate());
  config.lambda = -0.5;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
  config.lambda = 1.0;
  config.knn = 0;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
  config.knn = 3;
  config.rel_tolerance = 0.0;
  CHECK_THROWS_AS(config.validate(), InvalidArgumentError);
}

TEST_CASE("distance and normalization string round-trips") {
  for (Distance d : {Distance::kEuclidean, Distance::kSquaredEuclidean,
                     Distance::kCosineDistance}) {
    CHECK(distance_from_string(to_string(d)) == d);
  }
  for (Normalization n :
       {Normalization::kNone, Normalization::kL2, Normalization::kCl2}) {
    CHECK(normalization_from_string(to_string(n)) == n);
  }
  CHECK_THROWS_AS(distance_from_string("manhattan"), ParseError);
  CHECK_THROWS_AS(normalization_from_string("zscore"), ParseError);
}

TEST_CASE("point_distance basics") {
  const std::vector<double> origin{0.0, 0.0};
  const std::vector<double> p{3.0, 4.0};
  CHECK(point_distance(origin, p, Distance::kEuclidean) == doctest::Approx(5.0));
  CHECK(point_distance(origin, p, Distance::kSquaredEuclidean) ==
        doctest::Approx(25.0));
  bool zero = false;
  CHECK(point_distance(origin, p, Distance::kCosineDistance, &zero) ==
        doctest::Approx(1.0));
  CHECK(zero);

  const std::vector<double> q{6.0, 8.0};
  CHECK(point_distance(p, q, Distance::kCosineDistance) ==
        doctest::Approx(0.0));
  CHECK_THROWS_AS(
      point_distance(origin, std::vector<double>{1.0}, Distance::kEuclidean),
      DimMismatchError);
}

TEST_CASE("feature matrix validation rejects non-finite values") {
  FeatureMatrix f;
  f.data = Matrix(2, 2, 1.0);
  CHECK_NOTHROW(f.validate("test"));
  f.data(1, 1) = std::nan("");
  CHECK_THROWS_AS(f.validate("test"), InvalidArgumentError);
  f.data(1, 1) = 1.0;
  f.labels = std::vector<std::int32_t>{1};
  CHECK_THROWS_AS(f.validate("test"), InvalidArgumentError);
}
