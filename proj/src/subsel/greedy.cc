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

#include "subsel/greedy.h"

#include <cmath>

#include "subsel/indexed_heap.h"

namespace subsel {
namespace {

void CheckInputs(const ObjectiveContext& ctx, const MatroidIntersection& m,
                 const SelectionConfig& config) {
  if (config.budget < 1 || config.budget > ctx.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "budget " + std::to_string(config.budget) +
                    " must lie in [1, n = " + std::to_string(ctx.size()) + "]");
  }
  if (m.size() > 0 && m.ground_size() != ctx.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "matroids and objective disagree on n");
  }
}

SelectionResult Finish(const ObjectiveContext& ctx,
                       const MatroidIntersection& m, const SelectionConfig& cfg,
                       std::vector<Index> selected, std::vector<double> gains) {
  SelectionResult r;
  r.termination = static_cast<Index>(selected.size()) == cfg.budget
                      ? Termination::kCompleted
                      : Termination::kExhausted;
  r.objective_value = ctx.Unified(selected);
  r.constraint_report = ConstraintReport(m, selected);
  r.selected = std::move(selected);
  r.gains = std::move(gains);
  return r;
}

double Binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

}  // namespace

const char* TerminationName(Termination t) {
  return t == Termination::kCompleted ? "COMPLETED" : "EXHAUSTED";
}

std::vector<MatroidUsage> ConstraintReport(const MatroidIntersection& matroids,
                                           std::span<const Index> selected) {
  std::vector<MatroidUsage> report;
  for (const auto& m : matroids.matroids()) {
    MatroidUsage usage;
    usage.name = m.name();
    usage.cells.resize(m.num_cells());
    for (std::size_t c = 0; c < m.num_cells(); ++c) {
      usage.cells[c].label = m.label(c);
      usage.cells[c].capacity = m.capacity(c);
    }
    for (Index e : selected) {
      const std::int32_t cell = m.cell_of(e);
      if (cell == kUnconstrained) {
        ++usage.unconstrained_selected;
      } else {
        ++usage.cells[cell].selected;
      }
    }
    report.push_back(std::move(usage));
  }
  return report;
}

SelectionResult GreedyExact(const ObjectiveContext& ctx,
                            const MatroidIntersection& matroids,
                            const SelectionConfig& config) {
  CheckInputs(ctx, matroids, config);
  const Index n = ctx.size();
  SelectionMask mask(n, 0);
  IntersectionCursor cursor(matroids);
  std::vector<Index> selected;
  std::vector<double> gains;
  while (static_cast<Index>(selected.size()) < config.budget) {
    Index best = -1;
    double best_gain = 0.0;
    for (Index e = 0; e < n; ++e) {
      if (mask[e] || !cursor.IsIndependentWith(e)) continue;
      const double g = ctx.MarginalGain(mask, e);
      if (best < 0 || g > best_gain) {
        best = e;
        best_gain = g;
      }
    }
    if (best < 0) break;
    cursor.Commit(best);
    mask[best] = 1;
    selected.push_back(best);
    gains.push_back(best_gain);
  }
  return Finish(ctx, matroids, config, std::move(selected), std::move(gains));
}

SelectionResult GreedyPriorityQueue(const ObjectiveContext& ctx,
                                    const MatroidIntersection& matroids,
                                    const SelectionConfig& config) {
  CheckInputs(ctx, matroids, config);
  const Index n = ctx.size();
  SelectionMask mask(n, 0);
  std::vector<double> initial(n);
  for (Index v = 0; v < n; ++v) initial[v] = ctx.MarginalGain(mask, v);
  IndexedMaxHeap queue(initial);
  IntersectionCursor cursor(matroids);
  std::vector<Index> selected;
  std::vector<double> gains;
  while (static_cast<Index>(selected.size()) < config.budget && !queue.empty()) {
    const double gain = queue.key(queue.top());
    const Index c = queue.Pop();
    if (!cursor.IsIndependentWith(c)) continue;
    cursor.Commit(c);
    mask[c] = 1;
    selected.push_back(c);
    gains.push_back(gain);
    for (const auto& nb : ctx.graph().neighbors(c)) {
      if (queue.contains(nb.node)) {
        queue.Update(nb.node, ctx.MarginalGain(mask, nb.node));
      }
    }
  }
  return Finish(ctx, matroids, config, std::move(selected), std::move(gains));
}

SelectionResult BruteForceOptimum(const ObjectiveContext& ctx,
                                  const MatroidIntersection& matroids,
                                  const SelectionConfig& config) {
  CheckInputs(ctx, matroids, config);
  const Index n = ctx.size();
  if (n > kBruteForceMaxN ||
      Binomial(n, config.budget) > kBruteForceMaxSubsets) {
    throw Error(ErrorCode::kTooLarge,
                "brute force limited to n <= 20 and C(n, k) <= 1e6");
  }
  std::vector<Index> best_set;
  double best_value = 0.0;  // f(empty) = 0
  std::vector<Index> current;
  // Lexicographic DFS over subsets of size <= budget; infeasible prefixes
  // are pruned since supersets of dependent sets are dependent.
  auto dfs = [&](auto&& self, Index start) -> void {
    const double value = ctx.Unified(current);
    if (value > best_value) {
      best_value = value;
      best_set = current;
    }
    if (static_cast<Index>(current.size()) == config.budget) return;
    for (Index e = start; e < n; ++e) {
      current.push_back(e);
      if (matroids.IsIndependent(current)) self(self, e + 1);
      current.pop_back();
    }
  };
  dfs(dfs, 0);

  std::vector<double> gains;
  std::vector<Index> prefix;
  for (Index e : best_set) {
    gains.push_back(ctx.MarginalGain(prefix, e));
    prefix.push_back(e);
  }
  return Finish(ctx, matroids, config, std::move(best_set), std::move(gains));
}

}  // namespace subsel
