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

#ifndef SUBSEL_TESTKIT_H_
#define SUBSEL_TESTKIT_H_

// Verification machinery: synthetic instance generators, exhaustive property
// checkers and brute-force oracles. The oracles here deliberately avoid the
// production code paths they are used to check.

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "subsel/dataset.h"
#include "subsel/graph.h"
#include "subsel/matroid.h"
#include "subsel/objective.h"

namespace subsel::testkit {

enum class Proportions { kUniform, kLongTail };

struct SyntheticSpec {
  Index n = 100;
  std::size_t dim = 8;
  std::size_t num_classes = 4;
  // Standard deviation of the per-coordinate Gaussian noise around the class
  // centre, before normalisation.
  double cluster_spread = 0.3;
  double temperature = 1.0;  // softmax temperature over -distance to centres
  Proportions proportions = Proportions::kUniform;
  // Head-to-tail frequency ratio for kLongTail; class c has weight
  // ratio^(-c / (L - 1)).
  double imbalance_ratio = 1.0;
  std::uint64_t seed = 1;

  void Validate() const;
};

// Per-class sample counts (largest-remainder rounding of the proportions).
std::vector<Index> ClassCounts(const SyntheticSpec& spec);

struct SyntheticInstance {
  DatasetInputs dataset;
  std::vector<std::int32_t> generating_class;
};

// Class-clustered unit embeddings; probabilities are a softmax over negative
// distances to the class centres (temperature 1). Deterministic in the seed.
SyntheticInstance GenerateInstance(const SyntheticSpec& spec);

// ---- Exhaustive checkers ------------------------------------------------

using SetFunction = std::function<double(std::span<const Index>)>;
using IndependenceOracle = std::function<bool(std::span<const Index>)>;

struct CheckReport {
  bool passed = true;
  // Largest violation margin found (0 when none); for the matroid checker,
  // the number of violated axiom instances.
  double worst_violation = 0.0;
  std::size_t cases = 0;
  std::string witness;
};

inline constexpr Index kMaxSubmodularN = 8;
inline constexpr Index kMaxMonotoneN = 10;
inline constexpr Index kMaxMatroidN = 10;

// f(A + e) - f(A) <= f(B + e) - f(B) + tol for all B ⊆ A, e ∉ A.
CheckReport CheckSubmodular(const SetFunction& f, Index n, double tol = 1e-9);
// f(S + e) >= f(S) - tol for all S, e ∉ S.
CheckReport CheckMonotone(const SetFunction& f, Index n, double tol = 1e-9);

struct MatroidAxiomReport {
  bool empty_set_independent = true;
  bool downward_closed = true;
  bool exchange = true;
  std::size_t violations = 0;
  bool passed() const { return empty_set_independent && downward_closed && exchange; }
};
MatroidAxiomReport CheckMatroidAxioms(const IndependenceOracle& independent,
                                      Index n);
MatroidAxiomReport CheckMatroidAxioms(const PartitionMatroid& m);

// ---- Naive oracles ------------------------------------------------------

double NaiveUncertainty(std::span<const double> utility,
                        std::span<const Index> set);
// |S| * max weighted degree - gamma * (edge weights inside S), pairs scanned
// in O(|S|^2). A negative gamma turns the penalty into a reward, which is
// the supermodular negative control.
double NaiveDiversity(const NeighborGraph& graph, double gamma,
                      std::span<const Index> set);
double NaiveTriple(const CliqueSet& cliques, double eta,
                   std::span<const Index> set);
double NaiveUnified(std::span<const double> utility, const NeighborGraph& graph,
                    const CliqueSet& cliques, const ObjectiveWeights& w,
                    std::span<const Index> set);

// O(n^2) all-pairs similarity sort with (similarity desc, index asc).
std::vector<std::vector<Index>> BruteForceKnn(const DatasetInputs& dataset,
                                              Index k);
// O(n^3) scan of index triples.
std::vector<Triple> BruteForceTriangles(const NeighborGraph& graph);
// Half the square root of the Gram determinant of (b - a, c - a).
double GramTriangleArea(std::span<const double> a, std::span<const double> b,
                        std::span<const double> c);
// Independent per-cell recount of every matroid.
bool RecountFeasible(const MatroidIntersection& matroids,
                     std::span<const Index> selected);

// ---- Random small instances -------------------------------------------

struct RandomInstance {
  SyntheticInstance synthetic;
  SampleAnnotations annotations;
  NeighborGraph graph;
  CliqueSet cliques;

  const DatasetInputs& dataset() const { return synthetic.dataset; }
  ObjectiveContext Context(const ObjectiveWeights& w) const {
    return ObjectiveContext(annotations.margin_utility, graph, cliques, w);
  }
};

// Draws sizes, class count, neighbourhood size, tau and the thin-area
// percentile from `seed`, with n uniform in [n_min, n_max].
RandomInstance MakeRandomInstance(std::uint64_t seed, Index n_min, Index n_max);

// Corner 0..3: (1,0,0), (0,1,0), (0,0,1), (0.7,0.3,1) with gamma = eta = 1;
// corner 4: all weights uniform in [0, 1].
ObjectiveWeights WeightCorner(int corner, std::mt19937_64& rng);
inline constexpr int kNumWeightCorners = 5;

}  // namespace subsel::testkit

#endif  // SUBSEL_TESTKIT_H_
