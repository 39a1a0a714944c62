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

#ifndef SUBSEL_OBJECTIVE_H_
#define SUBSEL_OBJECTIVE_H_

#include <array>
#include <span>
#include <vector>

#include "subsel/common.h"
#include "subsel/graph.h"

namespace subsel {

struct ObjectiveWeights {
  double lambda_uncertainty = 0.7;
  double lambda_diversity = 0.30;
  double lambda_triple = 1.0;
  // Pairwise similarity penalty inside the diversity term.
  double gamma = 1.0;
  // Thin-triangle penalty inside the triple term; <= 1 keeps it monotone.
  double eta = 1.0;

  // Throws Error(kInvalidArgument) unless all weights are finite and
  // non-negative and eta <= 1.
  void Validate() const;
};

enum class Component { kUncertainty, kDiversity, kTriple, kUnified };

// Everything the objective needs: utilities, the graph, its triangles and
// the weights. Immutable; evaluation is pure and thread-safe.
class ObjectiveContext {
 public:
  ObjectiveContext(std::vector<double> utility, NeighborGraph graph,
                   CliqueSet cliques, ObjectiveWeights weights);

  Index size() const { return static_cast<Index>(utility_.size()); }
  const std::vector<double>& utility() const { return utility_; }
  const NeighborGraph& graph() const { return graph_; }
  const CliqueSet& cliques() const { return cliques_; }
  const ObjectiveWeights& weights() const { return weights_; }
  // max over nodes of the weighted degree; the constant unary term.
  double unary_constant() const { return unary_constant_; }

  // Set evaluations. Throw on out-of-range indices; duplicates are ignored.
  double Evaluate(Component c, std::span<const Index> set) const;
  double Uncertainty(std::span<const Index> set) const {
    return Evaluate(Component::kUncertainty, set);
  }
  double Diversity(std::span<const Index> set) const {
    return Evaluate(Component::kDiversity, set);
  }
  double Triple(std::span<const Index> set) const {
    return Evaluate(Component::kTriple, set);
  }
  double Unified(std::span<const Index> set) const {
    return Evaluate(Component::kUnified, set);
  }

  // Closed-form gain f(S + e) - f(S) for e not in S, with S given by mask.
  // Touches only e's adjacency and e's thin triangles.
  double Gain(Component c, const SelectionMask& mask, Index e) const;
  double MarginalGain(const SelectionMask& mask, Index e) const {
    return Gain(Component::kUnified, mask, e);
  }
  // Same, with S as an index list; throws if e is in S.
  double MarginalGain(std::span<const Index> set, Index e) const;

  // Thin triangles through e, as the other two vertices.
  std::span<const std::array<Index, 2>> thin_partners(Index e) const {
    return {thin_partners_.data() + thin_offsets_[e],
            thin_offsets_[e + 1] - thin_offsets_[e]};
  }

 private:
  double SimilarityToSet(const SelectionMask& mask, Index e) const;
  std::int64_t ThinCompleted(const SelectionMask& mask, Index e) const;

  std::vector<double> utility_;
  NeighborGraph graph_;
  CliqueSet cliques_;
  ObjectiveWeights weights_;
  double unary_constant_ = 0.0;
  std::vector<std::size_t> thin_offsets_;
  std::vector<std::array<Index, 2>> thin_partners_;
};

}  // namespace subsel

#endif  // SUBSEL_OBJECTIVE_H_
