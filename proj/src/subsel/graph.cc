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

#include "subsel/graph.h"

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

namespace subsel {
namespace {

using RowMajorMap =
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>;

constexpr Index kQueryBlock = 256;
constexpr Index kCandidateTile = 4096;

double Dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
  return s;
}

double Distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double d = a[t] - b[t];
    s += d * d;
  }
  return std::sqrt(s);
}

int ResolveThreads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs body(task) for task in [0, num_tasks) on a small worker pool. Tasks
// write disjoint outputs, so results do not depend on the thread count.
template <typename Body>
void ParallelFor(Index num_tasks, int num_threads, Body&& body) {
  const int workers = std::min<int>(ResolveThreads(num_threads),
                                    std::max<Index>(num_tasks, 1));
  if (workers <= 1) {
    for (Index t = 0; t < num_tasks; ++t) body(t);
    return;
  }
  std::atomic<Index> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (Index t = next++; t < num_tasks; t = next++) body(t);
    });
  }
  for (auto& th : pool) th.join();
}

// Bounded best-k list ordered by (similarity desc, index asc).
class TopK {
 public:
  explicit TopK(Index k) : k_(k) { items_.reserve(k + 1); }

  static bool Better(double s1, Index i1, double s2, Index i2) {
    return s1 > s2 || (s1 == s2 && i1 < i2);
  }

  bool full() const { return static_cast<Index>(items_.size()) == k_; }
  double worst_similarity() const { return items_.back().first; }

  void Offer(double sim, Index idx) {
    if (full() && !Better(sim, idx, items_.back().first, items_.back().second)) {
      return;
    }
    std::size_t pos = items_.size();
    items_.emplace_back(sim, idx);
    while (pos > 0 &&
           Better(sim, idx, items_[pos - 1].first, items_[pos - 1].second)) {
      items_[pos] = items_[pos - 1];
      --pos;
    }
    items_[pos] = {sim, idx};
    if (static_cast<Index>(items_.size()) > k_) items_.pop_back();
  }

  bool Contains(Index idx) const {
    for (const auto& it : items_) {
      if (it.second == idx) return true;
    }
    return false;
  }

  std::vector<Index> Indices() const {
    std::vector<Index> out;
    out.reserve(items_.size());
    for (const auto& it : items_) out.push_back(it.second);
    return out;
  }

 private:
  Index k_;
  std::vector<std::pair<double, Index>> items_;
};

std::vector<std::vector<Index>> ExactKnn(const DatasetInputs& d,
                                         const KnnOptions& opt) {
  const Index n = d.size();
  const auto dim = static_cast<Eigen::Index>(d.dim());
  RowMajorMap x(d.embeddings().data.data(), n, dim);
  std::vector<std::vector<Index>> lists(n);
  const Index num_blocks = (n + kQueryBlock - 1) / kQueryBlock;
  ParallelFor(num_blocks, opt.num_threads, [&](Index block) {
    const Index begin = block * kQueryBlock;
    const Index rows = std::min(kQueryBlock, n - begin);
    std::vector<TopK> tops(rows, TopK(opt.k));
    Eigen::MatrixXd sims;
    for (Index c0 = 0; c0 < n; c0 += kCandidateTile) {
      const Index cols = std::min(kCandidateTile, n - c0);
      sims.noalias() = x.middleRows(begin, rows) * x.middleRows(c0, cols).transpose();
      for (Index r = 0; r < rows; ++r) {
        const Index i = begin + r;
        TopK& top = tops[r];
        for (Index c = 0; c < cols; ++c) {
          const Index j = c0 + c;
          if (j == i) continue;
          const double s = sims(r, c);
          // Candidates arrive in increasing index order, so an equal
          // similarity never displaces the incumbent.
          if (top.full() && !(s > top.worst_similarity())) continue;
          top.Offer(s, j);
        }
      }
    }
    for (Index r = 0; r < rows; ++r) lists[begin + r] = tops[r].Indices();
  });
  return lists;
}

void SplitRecursive(const DatasetInputs& d, std::vector<Index> members,
                    std::size_t leaf_size, std::mt19937_64& rng,
                    std::vector<std::vector<Index>>& leaves) {
  if (members.size() <= leaf_size) {
    leaves.push_back(std::move(members));
    return;
  }
  std::uniform_int_distribution<std::size_t> pick(0, members.size() - 1);
  const Index a = members[pick(rng)];
  Index b = members[pick(rng)];
  for (int tries = 0; tries < 8 && b == a; ++tries) b = members[pick(rng)];
  auto xa = d.embedding(a);
  auto xb = d.embedding(b);
  std::vector<double> normal(d.dim());
  double offset = 0.0;
  for (std::size_t t = 0; t < d.dim(); ++t) {
    normal[t] = xa[t] - xb[t];
    offset += normal[t] * 0.5 * (xa[t] + xb[t]);
  }
  std::vector<Index> left, right;
  for (Index m : members) {
    const double side = Dot(normal, d.embedding(m)) - offset;
    (side > 0.0 ? left : right).push_back(m);
  }
  if (left.empty() || right.empty()) {
    // Degenerate hyperplane (duplicate points); fall back to a random halving.
    std::shuffle(members.begin(), members.end(), rng);
    const auto half = static_cast<std::ptrdiff_t>(members.size() / 2);
    left.assign(members.begin(), members.begin() + half);
    right.assign(members.begin() + half, members.end());
  }
  members.clear();
  members.shrink_to_fit();
  SplitRecursive(d, std::move(left), leaf_size, rng, leaves);
  SplitRecursive(d, std::move(right), leaf_size, rng, leaves);
}

std::vector<std::vector<Index>> RandomProjectionKnn(const DatasetInputs& d,
                                                    const KnnOptions& opt) {
  const Index n = d.size();
  std::vector<TopK> best(n, TopK(opt.k));
  std::mt19937_64 rng(opt.seed);
  const std::size_t leaf_size =
      std::max<std::size_t>(opt.leaf_size, static_cast<std::size_t>(opt.k) + 1);
  for (int t = 0; t < std::max(opt.num_trees, 1); ++t) {
    std::vector<Index> all(n);
    std::iota(all.begin(), all.end(), 0);
    std::vector<std::vector<Index>> leaves;
    SplitRecursive(d, std::move(all), leaf_size, rng, leaves);
    for (const auto& leaf : leaves) {
      for (std::size_t p = 0; p < leaf.size(); ++p) {
        for (std::size_t q = p + 1; q < leaf.size(); ++q) {
          const Index i = leaf[p], j = leaf[q];
          const double s = Dot(d.embedding(i), d.embedding(j));
          if (!best[i].Contains(j)) best[i].Offer(s, j);
          if (!best[j].Contains(i)) best[j].Offer(s, i);
        }
      }
    }
  }
  std::vector<std::vector<Index>> lists(n);
  for (Index i = 0; i < n; ++i) lists[i] = best[i].Indices();

  // One neighbour-of-neighbour pass over a frozen snapshot of the lists.
  std::vector<std::vector<Index>> refined(n);
  ParallelFor(n, opt.num_threads, [&](Index i) {
    TopK top(opt.k);
    std::vector<Index> seen;
    auto offer = [&](Index j) {
      if (j == i || std::find(seen.begin(), seen.end(), j) != seen.end()) return;
      seen.push_back(j);
      top.Offer(Dot(d.embedding(i), d.embedding(j)), j);
    };
    for (Index j : lists[i]) {
      offer(j);
      for (Index m : lists[j]) offer(m);
    }
    refined[i] = top.Indices();
  });
  return refined;
}

}  // namespace

NeighborGraph NeighborGraph::FromEdges(Index n,
                                       std::span<const WeightedEdge> edges,
                                       Index k_requested) {
  std::vector<std::vector<Neighbor>> adj(n);
  for (const auto& e : edges) {
    if (e.a < 0 || e.b < 0 || e.a >= n || e.b >= n) {
      throw Error(ErrorCode::kInvalidArgument, "edge endpoint out of range");
    }
    if (e.a == e.b) {
      throw Error(ErrorCode::kInvalidArgument, "self-loop at node " +
                                                   std::to_string(e.a));
    }
    if (!(e.weight >= 0.0 && e.weight <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument, "edge weight outside [0, 1]");
    }
    adj[e.a].push_back({e.b, e.weight});
    adj[e.b].push_back({e.a, e.weight});
  }
  std::vector<std::size_t> offsets(n + 1, 0);
  std::vector<Neighbor> flat;
  for (Index i = 0; i < n; ++i) {
    auto& list = adj[i];
    std::sort(list.begin(), list.end(), [](const Neighbor& x, const Neighbor& y) {
      return x.node < y.node;
    });
    for (std::size_t p = 0; p < list.size(); ++p) {
      if (p > 0 && list[p].node == list[p - 1].node) {
        if (list[p].weight != list[p - 1].weight) {
          throw Error(ErrorCode::kInvalidArgument,
                      "conflicting weights for edge (" + std::to_string(i) +
                          ", " + std::to_string(list[p].node) + ")");
        }
        continue;
      }
      flat.push_back(list[p]);
    }
    offsets[i + 1] = flat.size();
  }
  return FromCsr(n, k_requested, std::move(offsets), std::move(flat));
}

NeighborGraph NeighborGraph::FromCsr(Index n, Index k_requested,
                                     std::vector<std::size_t> offsets,
                                     std::vector<Neighbor> adjacency) {
  if (offsets.size() != static_cast<std::size_t>(n) + 1 ||
      offsets.back() != adjacency.size()) {
    throw Error(ErrorCode::kFormat, "inconsistent CSR graph");
  }
  NeighborGraph g;
  g.n_ = n;
  g.k_requested_ = k_requested;
  g.offsets_ = std::move(offsets);
  g.neighbors_ = std::move(adjacency);
  return g;
}

double NeighborGraph::weighted_degree(Index i) const {
  double s = 0.0;
  for (const auto& nb : neighbors(i)) s += nb.weight;
  return s;
}

bool NeighborGraph::has_edge(Index i, Index j) const {
  auto nbs = neighbors(i);
  auto it = std::lower_bound(
      nbs.begin(), nbs.end(), j,
      [](const Neighbor& nb, Index target) { return nb.node < target; });
  return it != nbs.end() && it->node == j;
}

double NeighborGraph::weight(Index i, Index j) const {
  auto nbs = neighbors(i);
  auto it = std::lower_bound(
      nbs.begin(), nbs.end(), j,
      [](const Neighbor& nb, Index target) { return nb.node < target; });
  return (it != nbs.end() && it->node == j) ? it->weight : 0.0;
}

std::vector<std::vector<Index>> ComputeKnnLists(const DatasetInputs& dataset,
                                                const KnnOptions& options) {
  if (options.k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  }
  if (options.k >= dataset.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "k = " + std::to_string(options.k) + " must be < n = " +
                    std::to_string(dataset.size()));
  }
  switch (options.method) {
    case KnnMethod::kExact:
      return ExactKnn(dataset, options);
    case KnnMethod::kRandomProjection:
      return RandomProjectionKnn(dataset, options);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown k-NN method");
}

NeighborGraph GraphFromKnnLists(const DatasetInputs& dataset,
                                const std::vector<std::vector<Index>>& lists,
                                Index k) {
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < static_cast<Index>(lists.size()); ++i) {
    for (Index j : lists[i]) pairs.emplace_back(std::min(i, j), std::max(i, j));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  std::vector<WeightedEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    // One evaluation per undirected edge keeps both directions bit-identical.
    const double cosine = Dot(dataset.embedding(a), dataset.embedding(b));
    edges.push_back({a, b, std::clamp(cosine, 0.0, 1.0)});
  }
  return NeighborGraph::FromEdges(dataset.size(), edges, k);
}

NeighborGraph BuildKnnGraph(const DatasetInputs& dataset,
                            const KnnOptions& options) {
  return GraphFromKnnLists(dataset, ComputeKnnLists(dataset, options), options.k);
}

std::vector<Triple> EnumerateTriples(const NeighborGraph& graph) {
  const Index n = graph.size();
  std::vector<Triple> out;
  std::vector<Index> mark(n, -1);
  for (Index i = 0; i < n; ++i) {
    for (const auto& nb : graph.neighbors(i)) mark[nb.node] = i;
    for (const auto& nj : graph.neighbors(i)) {
      const Index j = nj.node;
      if (j <= i) continue;
      for (const auto& nk : graph.neighbors(j)) {
        const Index k = nk.node;
        if (k > j && mark[k] == i) out.push_back({i, j, k});
      }
    }
  }
  return out;
}

double TriangleArea(std::span<const double> a, std::span<const double> b,
                    std::span<const double> c) {
  std::array<double, 3> s = {Distance(a, b), Distance(b, c), Distance(a, c)};
  std::sort(s.begin(), s.end(), std::greater<>());
  const double x = s[0], y = s[1], z = s[2];
  // Heron's formula, factored for sides sorted x >= y >= z.
  const double radicand =
      (x + (y + z)) * (z - (x - y)) * (z + (x - y)) * (x + (y - z));
  return 0.25 * std::sqrt(std::max(radicand, 0.0));
}

double TriangleArea(const DatasetInputs& dataset, Index i, Index j, Index k) {
  return TriangleArea(dataset.embedding(i), dataset.embedding(j),
                      dataset.embedding(k));
}

double Percentile(std::vector<double> values, double p) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = p / 100.0 * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

CliqueSet::CliqueSet(Index n, std::vector<Triple> triples,
                     std::vector<std::uint8_t> thin, double area_threshold)
    : triples_(std::move(triples)),
      thin_(std::move(thin)),
      clique_count_(n, 0),
      area_threshold_(area_threshold) {
  if (thin_.size() != triples_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "thin flags / triples size mismatch");
  }
  for (const auto& t : triples_) {
    for (Index v : t) {
      if (v < 0 || v >= n) {
        throw Error(ErrorCode::kInvalidArgument, "triple vertex out of range");
      }
      ++clique_count_[v];
    }
  }
}

std::size_t CliqueSet::num_thin() const {
  return static_cast<std::size_t>(std::count(thin_.begin(), thin_.end(), 1));
}

CliqueSet BuildCliqueSet(const DatasetInputs& dataset, const NeighborGraph& graph,
                         const ThresholdSpec& threshold) {
  if (threshold.kind == ThresholdSpec::Kind::kPercentile &&
      !(threshold.value > 0.0 && threshold.value <= 100.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "area percentile must lie in (0, 100]");
  }
  if (threshold.kind == ThresholdSpec::Kind::kAbsolute &&
      !(threshold.value >= 0.0 && std::isfinite(threshold.value))) {
    throw Error(ErrorCode::kInvalidArgument,
                "absolute area threshold must be finite and >= 0");
  }
  std::vector<Triple> triples = EnumerateTriples(graph);
  std::vector<double> areas(triples.size());
  for (std::size_t t = 0; t < triples.size(); ++t) {
    areas[t] = TriangleArea(dataset, triples[t][0], triples[t][1], triples[t][2]);
  }
  const double cutoff = threshold.kind == ThresholdSpec::Kind::kPercentile
                            ? Percentile(areas, threshold.value)
                            : threshold.value;
  std::vector<std::uint8_t> thin(triples.size());
  for (std::size_t t = 0; t < triples.size(); ++t) {
    thin[t] = areas[t] < cutoff ? 1 : 0;
  }
  return CliqueSet(graph.size(), std::move(triples), std::move(thin), cutoff);
}

}  // namespace subsel
