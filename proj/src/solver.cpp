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

#include "lapshot/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lapshot {

namespace {

constexpr double kLogFloor = 1e-300;
constexpr double kMonotoneSlack = 1e-9;

// In-place softmax of a row of scores, stabilized by subtracting the row
// maximum so the largest exponent is exactly 1.
void softmax_row(std::span<double> scores) {
  double max_score = scores[0];
  for (double s : scores) max_score = std::max(max_score, s);
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - max_score);
    sum += s;
  }
  const double inv = 1.0 / sum;
  for (double& s : scores) s *= inv;
}

double entropy_plus_unary(const SoftAssignment& y, const UnaryPotentials& a) {
  double total = 0.0;
  for (std::size_t q = 0; q < y.rows(); ++q) {
    const auto yq = y.probabilities.row(q);
    const auto aq = a.a.row(q);
    for (std::size_t c = 0; c < y.classes(); ++c) {
      const double p = yq[c];
      if (p > 0.0) {
        total += p * std::log(std::max(p, kLogFloor));
      }
      total += p * aq[c];
    }
  }
  return total;
}

}  // namespace

UnaryPotentials unary_potentials(const FeatureMatrix& query,
                                 const PrototypeSet& protos, Distance metric) {
  if (query.dim() != protos.dim()) {
    throw DimMismatchError("query dimension " + std::to_string(query.dim()) +
                           " does not match prototype dimension " +
                           std::to_string(protos.dim()));
  }
  const std::size_t n = query.rows();
  const std::size_t c_count = protos.classes();
  UnaryPotentials result;
  result.a = Matrix(n, c_count);
  for (std::size_t q = 0; q < n; ++q) {
    const auto row = query.row(q);
    for (std::size_t c = 0; c < c_count; ++c) {
      result.a(q, c) = point_distance(row, protos.vectors.row(c), metric);
    }
  }
  return result;
}

SoftAssignment initialize_assignment(const UnaryPotentials& a) {
  SoftAssignment y;
  y.iteration = 0;
  y.probabilities = Matrix(a.a.rows(), a.a.cols());
  for (std::size_t q = 0; q < a.a.rows(); ++q) {
    const auto aq = a.a.row(q);
    auto yq = y.probabilities.row(q);
    for (std::size_t c = 0; c < aq.size(); ++c) yq[c] = -aq[c];
    softmax_row(yq);
  }
  return y;
}

PairwisePotentials pairwise_potentials(const AffinityGraph& graph,
                                       const SoftAssignment& y) {
  if (graph.n != y.rows()) {
    throw DimMismatchError("graph has " + std::to_string(graph.n) +
                           " nodes but assignment has " +
                           std::to_string(y.rows()) + " rows");
  }
  const std::size_t c_count = y.classes();
  PairwisePotentials result;
  result.b = Matrix(graph.n, c_count, 0.0);
  for (std::size_t q = 0; q < graph.n; ++q) {
    auto bq = result.b.row(q);
    for (std::uint32_t p : graph.neighbors_of(q)) {
      const auto yp = y.probabilities.row(p);
      for (std::size_t c = 0; c < c_count; ++c) bq[c] += yp[c];
    }
  }
  return result;
}

SoftAssignment mm_update(const UnaryPotentials& a, const PairwisePotentials& b,
                         double lambda) {
  if (a.a.rows() != b.b.rows() || a.a.cols() != b.b.cols()) {
    throw DimMismatchError("unary and pairwise potential shapes differ");
  }
  if (lambda < 0.0) {
    throw InvalidArgumentError("lambda must be >= 0");
  }
  SoftAssignment y;
  y.probabilities = Matrix(a.a.rows(), a.a.cols());
  for (std::size_t q = 0; q < a.a.rows(); ++q) {
    const auto aq = a.a.row(q);
    const auto bq = b.b.row(q);
    auto yq = y.probabilities.row(q);
    for (std::size_t c = 0; c < aq.size(); ++c) {
      yq[c] = lambda * bq[c] - aq[c];
    }
    softmax_row(yq);
  }
  return y;
}

double relaxed_objective(const SoftAssignment& y, const UnaryPotentials& a,
                         const AffinityGraph& graph, double lambda) {
  if (y.rows() != a.a.rows() || y.classes() != a.a.cols()) {
    throw DimMismatchError("assignment and unary potential shapes differ");
  }
  return entropy_plus_unary(y, a) + 0.5 * lambda * pairwise_term(graph, y);
}

double surrogate_value(const SoftAssignment& y, const UnaryPotentials& a,
                       const PairwisePotentials& b_prev, double lambda) {
  if (y.rows() != a.a.rows() || y.classes() != a.a.cols() ||
      y.rows() != b_prev.b.rows() || y.classes() != b_prev.b.cols()) {
    throw DimMismatchError("surrogate input shapes differ");
  }
  double total = entropy_plus_unary(y, a);
  for (std::size_t q = 0; q < y.rows(); ++q) {
    const auto yq = y.probabilities.row(q);
    const auto bq = b_prev.b.row(q);
    double dot = 0.0;
    for (std::size_t c = 0; c < y.classes(); ++c) dot += yq[c] * bq[c];
    total -= lambda * dot;
  }
  return total;
}

std::vector<std::int32_t> nearest_prototype_labels(const UnaryPotentials& a) {
  std::vector<std::int32_t> labels(a.a.rows());
  for (std::size_t q = 0; q < a.a.rows(); ++q) {
    const auto aq = a.a.row(q);
    std::size_t best = 0;
    for (std::size_t c = 1; c < aq.size(); ++c) {
      if (aq[c] < aq[best]) best = c;
    }
    labels[q] = static_cast<std::int32_t>(best);
  }
  return labels;
}

SolveResult solve(const FewShotTask& task, const PrototypeSet& protos,
                  const AffinityGraph& graph, const InferenceConfig& config) {
  config.validate();
  if (graph.n != task.query.rows()) {
    throw DimMismatchError("graph node count does not match query count");
  }

  const UnaryPotentials a =
      unary_potentials(task.query, protos, config.distance);

  SolveResult result;
  result.assignment = initialize_assignment(a);
  SolverTrace& trace = result.trace;

  double objective =
      relaxed_objective(result.assignment, a, graph, config.lambda);
  trace.objective_values.push_back(objective);
  if (!std::isfinite(objective)) {
    throw NumericError("non-finite objective at initialization",
                       trace.objective_values);
  }

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    const PairwisePotentials b =
        pairwise_potentials(graph, result.assignment);
    result.assignment = mm_update(a, b, config.lambda);
    result.assignment.iteration = iter;

    const double next =
        relaxed_objective(result.assignment, a, graph, config.lambda);
    trace.objective_values.push_back(next);
    trace.iterations = iter;
    if (!std::isfinite(next)) {
      throw NumericError("non-finite objective at iteration " +
                             std::to_string(iter),
                         trace.objective_values);
    }
    if (next > objective + kMonotoneSlack) {
      trace.monotone = false;
    }
    if (std::abs(next - objective) <=
        config.rel_tolerance * (std::abs(objective) + 1.0)) {
      trace.converged = true;
      objective = next;
      break;
    }
    objective = next;
  }

  result.labels.resize(result.assignment.rows());
  for (std::size_t q = 0; q < result.assignment.rows(); ++q) {
    const auto yq = result.assignment.probabilities.row(q);
    std::size_t best = 0;
    for (std::size_t c = 1; c < yq.size(); ++c) {
      if (yq[c] > yq[best]) best = c;
    }
    result.labels[q] = static_cast<std::int32_t>(best);
  }
  return result;
}

}  // namespace lapshot
