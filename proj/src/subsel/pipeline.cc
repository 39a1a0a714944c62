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

#include "subsel/pipeline.h"

#include <chrono>
#include <cmath>

#include "subsel/graph_cache.h"

namespace subsel {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

GraphArtifacts BuildGraphArtifacts(const DatasetInputs& dataset,
                                   const KnnOptions& knn,
                                   const ThresholdSpec& threshold) {
  GraphArtifacts out;
  auto start = Clock::now();
  out.graph = BuildKnnGraph(dataset, knn);
  out.knn_seconds = SecondsSince(start);
  start = Clock::now();
  out.cliques = BuildCliqueSet(dataset, out.graph, threshold);
  out.clique_seconds = SecondsSince(start);
  return out;
}

GraphArtifacts BuildOrLoadGraph(const DatasetInputs& dataset,
                                const KnnOptions& knn,
                                const ThresholdSpec& threshold,
                                const std::string& cache_path) {
  GraphCacheKey key{dataset.metadata().embeddings_sha256, knn, threshold};
  if (!cache_path.empty() && !key.embeddings_sha256.empty()) {
    const auto start = Clock::now();
    if (auto cached = LoadGraphCache(cache_path, key)) {
      if (cached->graph.size() == dataset.size()) {
        GraphArtifacts out;
        out.graph = std::move(cached->graph);
        out.cliques = std::move(cached->cliques);
        out.knn_seconds = SecondsSince(start);
        out.from_cache = true;
        return out;
      }
    }
  }
  GraphArtifacts out = BuildGraphArtifacts(dataset, knn, threshold);
  if (!cache_path.empty() && !key.embeddings_sha256.empty()) {
    SaveGraphCache(cache_path, key, out.graph, out.cliques);
  }
  return out;
}

ResolvedBudget ResolveBudget(Index n, Index budget, double fraction) {
  ResolvedBudget r;
  if (budget > 0) {
    if (budget > n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "budget " + std::to_string(budget) + " exceeds n = " +
                      std::to_string(n));
    }
    r.budget = budget;
    r.fraction = static_cast<double>(budget) / static_cast<double>(n);
    return r;
  }
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "budget fraction must lie in (0, 1]");
  }
  r.fraction = fraction;
  r.budget = static_cast<Index>(
      std::max<std::int64_t>(1, RoundTolerant(fraction * static_cast<double>(n))));
  return r;
}

MatroidIntersection MakeMatroids(const SampleAnnotations& annotations,
                                 std::size_t num_classes, double fraction,
                                 bool class_balance, bool boundary_balance) {
  const Index n = annotations.size();
  MatroidIntersection m(n);
  if (class_balance) m.Add(ClassMatroid(annotations, num_classes, fraction, n));
  if (boundary_balance) m.Add(BoundaryMatroid(annotations, fraction));
  return m;
}

SelectionRun RunSelection(const DatasetInputs& dataset,
                          const NeighborGraph& graph, const CliqueSet& cliques,
                          const SelectOptions& options) {
  if (graph.size() != dataset.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "graph was built for a different dataset size");
  }
  SelectionRun run;
  run.annotations = Annotate(dataset, options.tau);
  run.budget = ResolveBudget(dataset.size(), options.budget,
                             options.budget_fraction);
  const auto start = Clock::now();
  const ObjectiveContext ctx(run.annotations.margin_utility, graph, cliques,
                             options.weights);
  const MatroidIntersection matroids =
      MakeMatroids(run.annotations, dataset.num_classes(), run.budget.fraction,
                   options.class_balance, options.boundary_balance);
  const SelectionConfig config{run.budget.budget};
  run.result = options.solver == Solver::kExact
                   ? GreedyExact(ctx, matroids, config)
                   : GreedyPriorityQueue(ctx, matroids, config);
  run.selection_seconds = SecondsSince(start);

  if (!matroids.IsIndependent(run.result.selected)) {
    throw Error(ErrorCode::kInternal, "self-check: selection violates a matroid");
  }
  double total = 0.0;
  for (double g : run.result.gains) total += g;
  const double scale = std::max(1.0, std::abs(run.result.objective_value));
  if (std::abs(total - run.result.objective_value) > 1e-9 * scale) {
    throw Error(ErrorCode::kInternal,
                "self-check: gains do not sum to the objective value");
  }
  return run;
}

}  // namespace subsel
