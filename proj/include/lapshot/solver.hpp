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

#include <cstdint>
#include <vector>

#include "lapshot/core.hpp"
#include "lapshot/graph.hpp"
#include "lapshot/prototype.hpp"

namespace lapshot {

// a[q][c]: distance from query q to prototype c under the configured metric.
struct UnaryPotentials {
  Matrix a;  // N x C
};

// b[q][c]: class mass aggregated from q's graph neighbors at the previous
// iterate, sum_{p in neighbors(q)} y[p][c].
struct PairwisePotentials {
  Matrix b;  // N x C
};

// Record of one solve: the monitored relaxed objective per iteration
// (including the initialization value, so its length is iterations + 1),
// whether the stopping rule fired before the iteration cap, and whether
// the sequence ever increased beyond 1e-9 absolute slack. Non-monotone
// steps are possible with the directed (non-PSD) affinity and are
// surfaced here rather than treated as errors.
struct SolverTrace {
  std::vector<double> objective_values;
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
};

struct SolveResult {
  std::vector<std::int32_t> labels;  // class ids 0..C-1, argmax of final Y
  SoftAssignment assignment;
  SolverTrace trace;
};

UnaryPotentials unary_potentials(const FeatureMatrix& query,
                                 const PrototypeSet& protos, Distance metric);

// Row q = softmax(-a[q]), max-shift stabilized.
SoftAssignment initialize_assignment(const UnaryPotentials& a);

// Synchronous (Jacobi) aggregation: every row of b is computed from the
// same previous iterate before any row is updated.
PairwisePotentials pairwise_potentials(const AffinityGraph& graph,
                                       const SoftAssignment& y);

// Row q = softmax(-a[q] + lambda * b[q]). Rows are mutually independent:
// any evaluation order yields bitwise-identical output.
SoftAssignment mm_update(const UnaryPotentials& a, const PairwisePotentials& b,
                         double lambda);

// Monitored relaxed objective:
//   sum_q y_q . log(y_q) + sum_q y_q . a_q + (lambda/2) * pairwise_term,
// with 0 log 0 := 0 and probabilities floored at 1e-300 inside the log.
double relaxed_objective(const SoftAssignment& y, const UnaryPotentials& a,
                         const AffinityGraph& graph, double lambda);

// Iteration-i surrogate, up to its additive constant:
//   sum_q y_q . (log(y_q) + a_q - lambda * b_prev[q]).
double surrogate_value(const SoftAssignment& y, const UnaryPotentials& a,
                       const PairwisePotentials& b_prev, double lambda);

// Per-row argmin of the unary potentials, ties to the lowest class id.
// This is the nearest-prototype decision rule, equal to a lambda = 0 solve.
std::vector<std::int32_t> nearest_prototype_labels(const UnaryPotentials& a);

// Full bound-optimization loop: initialize from the unary potentials, then
// alternate pairwise aggregation and the closed-form row update until the
// monitored objective changes by at most rel_tolerance * (|previous| + 1)
// or max_iterations is hit. Labels are the per-row argmax of the final
// assignment. Throws NumericError (with the trace collected so far) if the
// objective turns non-finite.
SolveResult solve(const FewShotTask& task, const PrototypeSet& protos,
                  const AffinityGraph& graph, const InferenceConfig& config);

}  // namespace lapshot
