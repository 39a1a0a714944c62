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

#include "subsel/objective.h"

#include <cmath>

namespace subsel {

void ObjectiveWeights::Validate() const {
  const std::array<double, 5> all = {lambda_uncertainty, lambda_diversity,
                                     lambda_triple, gamma, eta};
  for (double w : all) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "objective weights must be finite and non-negative");
    }
  }
  if (eta > 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "eta must be <= 1 for the triple term to stay monotone");
  }
}

ObjectiveContext::ObjectiveContext(std::vector<double> utility,
                                   NeighborGraph graph, CliqueSet cliques,
                                   ObjectiveWeights weights)
    : utility_(std::move(utility)),
      graph_(std::move(graph)),
      cliques_(std::move(cliques)),
      weights_(weights) {
  weights_.Validate();
  const Index n = size();
  if (graph_.size() != n || cliques_.size() != n) {
    throw Error(ErrorCode::kInvalidArgument,
                "utility, graph and clique set disagree on n");
  }
  for (Index i = 0; i < n; ++i) {
    unary_constant_ = std::max(unary_constant_, graph_.weighted_degree(i));
  }

  thin_offsets_.assign(n + 1, 0);
  const auto& triples = cliques_.triples();
  const auto& thin = cliques_.thin_flags();
  for (std::size_t t = 0; t < triples.size(); ++t) {
    if (!thin[t]) continue;
    for (Index v : triples[t]) ++thin_offsets_[v + 1];
  }
  for (Index i = 0; i < n; ++i) thin_offsets_[i + 1] += thin_offsets_[i];
  thin_partners_.resize(thin_offsets_[n]);
  std::vector<std::size_t> fill(thin_offsets_.begin(), thin_offsets_.end() - 1);
  for (std::size_t t = 0; t < triples.size(); ++t) {
    if (!thin[t]) continue;
    const auto& [a, b, c] = triples[t];
    thin_partners_[fill[a]++] = {b, c};
    thin_partners_[fill[b]++] = {a, c};
    thin_partners_[fill[c]++] = {a, b};
  }
}

double ObjectiveContext::Evaluate(Component c, std::span<const Index> set) const {
  const SelectionMask mask = MaskOf(set, utility_.size());
  double uncertainty = 0.0, unary = 0.0, pairwise = 0.0;
  double alpha = 0.0, thin = 0.0;
  for (Index i = 0; i < size(); ++i) {
    if (!mask[i]) continue;
    uncertainty += utility_[i];
    unary += unary_constant_;
    alpha += static_cast<double>(cliques_.alpha(i));
    for (const auto& nb : graph_.neighbors(i)) {
      if (nb.node > i && mask[nb.node]) pairwise += nb.weight;
    }
  }
  const auto& triples = cliques_.triples();
  const auto& flags = cliques_.thin_flags();
  for (std::size_t t = 0; t < triples.size(); ++t) {
    if (flags[t] && mask[triples[t][0]] && mask[triples[t][1]] &&
        mask[triples[t][2]]) {
      thin += 1.0;
    }
  }
  const double f_u = uncertainty;
  const double f_d = unary - weights_.gamma * pairwise;
  const double f_t = alpha - weights_.eta * thin;
  switch (c) {
    case Component::kUncertainty:
      return f_u;
    case Component::kDiversity:
      return f_d;
    case Component::kTriple:
      return f_t;
    case Component::kUnified:
      return weights_.lambda_uncertainty * f_u +
             weights_.lambda_diversity * f_d + weights_.lambda_triple * f_t;
  }
  return 0.0;
}

double ObjectiveContext::SimilarityToSet(const SelectionMask& mask,
                                         Index e) const {
  double s = 0.0;
  for (const auto& nb : graph_.neighbors(e)) {
    if (mask[nb.node]) s += nb.weight;
  }
  return s;
}

std::int64_t ObjectiveContext::ThinCompleted(const SelectionMask& mask,
                                             Index e) const {
  std::int64_t count = 0;
  for (const auto& [a, b] : thin_partners(e)) {
    if (mask[a] && mask[b]) ++count;
  }
  return count;
}

double ObjectiveContext::Gain(Component c, const SelectionMask& mask,
                              Index e) const {
  const double g_u = utility_[e];
  const double g_d = unary_constant_ - weights_.gamma * SimilarityToSet(mask, e);
  const double g_t =
      static_cast<double>(cliques_.alpha(e)) -
      weights_.eta * static_cast<double>(ThinCompleted(mask, e));
  switch (c) {
    case Component::kUncertainty:
      return g_u;
    case Component::kDiversity:
      return g_d;
    case Component::kTriple:
      return g_t;
    case Component::kUnified:
      return weights_.lambda_uncertainty * g_u +
             weights_.lambda_diversity * g_d + weights_.lambda_triple * g_t;
  }
  return 0.0;
}

double ObjectiveContext::MarginalGain(std::span<const Index> set,
                                      Index e) const {
  const SelectionMask mask = MaskOf(set, utility_.size());
  if (e < 0 || e >= size()) {
    throw Error(ErrorCode::kInvalidArgument, "candidate index out of range");
  }
  if (mask[e]) {
    throw Error(ErrorCode::kInvalidArgument,
                "candidate " + std::to_string(e) + " is already in the set");
  }
  return MarginalGain(mask, e);
}

}  // namespace subsel
