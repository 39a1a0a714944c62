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

#ifndef SUBSEL_PIPELINE_H_
#define SUBSEL_PIPELINE_H_

#include <string>

#include "subsel/dataset.h"
#include "subsel/graph.h"
#include "subsel/greedy.h"
#include "subsel/matroid.h"
#include "subsel/objective.h"

namespace subsel {

struct GraphArtifacts {
  NeighborGraph graph;
  CliqueSet cliques;
  double knn_seconds = 0.0;
  double clique_seconds = 0.0;
  bool from_cache = false;
};

GraphArtifacts BuildGraphArtifacts(const DatasetInputs& dataset,
                                   const KnnOptions& knn,
                                   const ThresholdSpec& threshold);

// Loads `cache_path` when it matches the dataset and parameters, otherwise
// builds and (if cache_path is non-empty) writes it.
GraphArtifacts BuildOrLoadGraph(const DatasetInputs& dataset,
                                const KnnOptions& knn,
                                const ThresholdSpec& threshold,
                                const std::string& cache_path);

enum class Solver { kPriorityQueue, kExact };

struct SelectOptions {
  ObjectiveWeights weights;
  double tau = kDefaultTau;
  // Absolute budget; when <= 0 the budget is round(budget_fraction * n).
  Index budget = 0;
  double budget_fraction = 0.3;
  bool class_balance = true;
  bool boundary_balance = true;
  Solver solver = Solver::kPriorityQueue;
};

// Resolves the budget and the subset fraction used by the matroid caps.
struct ResolvedBudget {
  Index budget = 1;
  double fraction = 1.0;
};
ResolvedBudget ResolveBudget(Index n, Index budget, double fraction);

MatroidIntersection MakeMatroids(const SampleAnnotations& annotations,
                                 std::size_t num_classes, double fraction,
                                 bool class_balance, bool boundary_balance);

struct SelectionRun {
  SampleAnnotations annotations;
  SelectionResult result;
  ResolvedBudget budget;
  double selection_seconds = 0.0;
};

// Annotates, builds the objective and matroids, runs the chosen solver and
// re-verifies feasibility and gain bookkeeping; a failed self-check throws
// Error(kInternal).
SelectionRun RunSelection(const DatasetInputs& dataset,
                          const NeighborGraph& graph, const CliqueSet& cliques,
                          const SelectOptions& options);

}  // namespace subsel

#endif  // SUBSEL_PIPELINE_H_
