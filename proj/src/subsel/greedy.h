// Copyright 2026 The subsel Authors.
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

#ifndef SUBSEL_GREEDY_H_
#define SUBSEL_GREEDY_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subsel/matroid.h"
#include "subsel/objective.h"

namespace subsel {

enum class Termination {
  kCompleted,  // |S| reached the budget
  kExhausted,  // no feasible candidate remained
};

const char* TerminationName(Termination t);

struct CellUsage {
  std::string label;
  std::int64_t selected = 0;
  std::int64_t capacity = 0;
};

struct MatroidUsage {
  std::string name;
  std::vector<CellUsage> cells;
  std::int64_t unconstrained_selected = 0;
};

// Ties between equal gains always resolve to the lowest index.
struct SelectionConfig {
  Index budget = 1;
};

struct SelectionResult {
  std::vector<Index> selected;  // in selection order
  std::vector<double> gains;    // marginal gain at commit time
  double objective_value = 0.0;
  Termination termination = Termination::kCompleted;
  std::vector<MatroidUsage> constraint_report;
};

std::vector<MatroidUsage> ConstraintReport(const MatroidIntersection& matroids,
                                           std::span<const Index> selected);

// Reference greedy: every step scans all unselected candidates and takes the
// feasible one with the largest closed-form gain.
SelectionResult GreedyExact(const ObjectiveContext& ctx,
                            const MatroidIntersection& matroids,
                            const SelectionConfig& config);

// Priority-queue greedy. Keys are kept exact: committing c recomputes the
// gain of every unselected neighbour of c, which covers both the pairwise
// penalty and thin triangles completed by c. Popped candidates that fail the
// matroid check are discarded for good; a saturated cell never reopens.
// Produces the same selection sequence as GreedyExact.
SelectionResult GreedyPriorityQueue(const ObjectiveContext& ctx,
                                    const MatroidIntersection& matroids,
                                    const SelectionConfig& config);

inline constexpr Index kBruteForceMaxN = 20;
inline constexpr double kBruteForceMaxSubsets = 1e6;

// Exhaustive maximiser over feasible subsets of size <= budget. Throws
// Error(kTooLarge) when n > 20 or C(n, budget) > 1e6.
SelectionResult BruteForceOptimum(const ObjectiveContext& ctx,
                                  const MatroidIntersection& matroids,
                                  const SelectionConfig& config);

}  // namespace subsel

#endif  // SUBSEL_GREEDY_H_
