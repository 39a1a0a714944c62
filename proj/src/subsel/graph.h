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

#ifndef SUBSEL_GRAPH_H_
#define SUBSEL_GRAPH_H_

#include <array>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "subsel/common.h"
#include "subsel/dataset.h"

namespace subsel {

struct Neighbor {
  Index node = 0;
  double weight = 0.0;

  bool operator==(const Neighbor&) const = default;
};

struct WeightedEdge {
  Index a = 0;
  Index b = 0;
  double weight = 0.0;
};

// Symmetric weighted graph in CSR form. Adjacency lists are sorted by
// neighbour index, free of self-loops and duplicates, and every edge carries
// the same weight in both directions.
class NeighborGraph {
 public:
  NeighborGraph() = default;

  // Builds from undirected edges; duplicates (in either orientation) must
  // agree on weight and are merged. Weights must lie in [0, 1].
  static NeighborGraph FromEdges(Index n, std::span<const WeightedEdge> edges,
                                 Index k_requested = 0);

  Index size() const { return n_; }
  Index k_requested() const { return k_requested_; }
  std::size_t num_edges() const { return neighbors_.size() / 2; }

  std::span<const Neighbor> neighbors(Index i) const {
    return {neighbors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  std::size_t degree(Index i) const { return offsets_[i + 1] - offsets_[i]; }
  double weighted_degree(Index i) const;

  // Binary search on the sorted adjacency of `i`.
  bool has_edge(Index i, Index j) const;
  // Weight of edge (i, j); 0 when absent.
  double weight(Index i, Index j) const;

  const std::vector<std::size_t>& offsets() const { return offsets_; }
  const std::vector<Neighbor>& adjacency() const { return neighbors_; }

  static NeighborGraph FromCsr(Index n, Index k_requested,
                               std::vector<std::size_t> offsets,
                               std::vector<Neighbor> adjacency);

 private:
  Index n_ = 0;
  Index k_requested_ = 0;
  std::vector<std::size_t> offsets_{0};
  std::vector<Neighbor> neighbors_;
};

enum class KnnMethod : std::uint8_t {
  kExact = 0,
  // Random-projection forest plus one neighbour-of-neighbour refinement pass.
  kRandomProjection = 1,
};

struct KnnOptions {
  Index k = 10;
  KnnMethod method = KnnMethod::kExact;
  // 0 selects std::thread::hardware_concurrency().
  int num_threads = 0;
  int num_trees = 8;
  std::size_t leaf_size = 64;
  std::uint64_t seed = 0x5eed;
};

// Per-node k most similar other nodes by cosine similarity, most similar
// first; similarity ties go to the lower index. No symmetrisation.
std::vector<std::vector<Index>> ComputeKnnLists(const DatasetInputs& dataset,
                                                const KnnOptions& options);

// k-NN lists symmetrised by union, weights clamp(cos, 0, 1).
NeighborGraph BuildKnnGraph(const DatasetInputs& dataset,
                            const KnnOptions& options);
NeighborGraph GraphFromKnnLists(const DatasetInputs& dataset,
                                const std::vector<std::vector<Index>>& lists,
                                Index k);

using Triple = std::array<Index, 3>;

// Every triangle exactly once as (i, j, k) with i < j < k, in lexicographic
// order.
std::vector<Triple> EnumerateTriples(const NeighborGraph& graph);

// Heron's formula on Euclidean side lengths, radicand clamped at 0.
double TriangleArea(std::span<const double> a, std::span<const double> b,
                    std::span<const double> c);
double TriangleArea(const DatasetInputs& dataset, Index i, Index j, Index k);

struct ThresholdSpec {
  enum class Kind : std::uint8_t { kAbsolute = 0, kPercentile = 1 };
  Kind kind = Kind::kPercentile;
  double value = 10.0;

  static ThresholdSpec Absolute(double area) { return {Kind::kAbsolute, area}; }
  static ThresholdSpec Percentile(double p) { return {Kind::kPercentile, p}; }
};

// Linear-interpolation percentile (p in [0, 100]) of unsorted values.
double Percentile(std::vector<double> values, double p);

// Triangles of the graph with their thin-triangle flags t(i,j,k) and the
// per-vertex counts alpha(i).
class CliqueSet {
 public:
  CliqueSet() = default;
  CliqueSet(Index n, std::vector<Triple> triples, std::vector<std::uint8_t> thin,
            double area_threshold);

  Index size() const { return static_cast<Index>(clique_count_.size()); }
  const std::vector<Triple>& triples() const { return triples_; }
  const std::vector<std::uint8_t>& thin_flags() const { return thin_; }
  const std::vector<std::int64_t>& clique_count() const { return clique_count_; }
  std::int64_t alpha(Index i) const { return clique_count_[i]; }
  double area_threshold() const { return area_threshold_; }
  std::size_t num_thin() const;

 private:
  std::vector<Triple> triples_;
  std::vector<std::uint8_t> thin_;
  std::vector<std::int64_t> clique_count_;
  double area_threshold_ = 0.0;
};

CliqueSet BuildCliqueSet(const DatasetInputs& dataset, const NeighborGraph& graph,
                         const ThresholdSpec& threshold);

}  // namespace subsel

#endif  // SUBSEL_GRAPH_H_
