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

#include "subsel/testkit.h"

#include <algorithm>
#include <bit>
#include <map>
#include <cmath>
#include <numeric>
#include <sstream>

#include "subsel/hash.h"

namespace subsel::testkit {
namespace {

std::vector<Index> MaskToSet(std::uint32_t mask) {
  std::vector<Index> s;
  for (Index i = 0; mask >> i; ++i) {
    if (mask & (1u << i)) s.push_back(i);
  }
  return s;
}

std::string SetToString(std::uint32_t mask) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (Index i : MaskToSet(mask)) {
    os << (first ? "" : ",") << i;
    first = false;
  }
  os << '}';
  return os.str();
}

std::vector<double> Tabulate(const SetFunction& f, Index n) {
  std::vector<double> table(std::size_t{1} << n);
  for (std::uint32_t m = 0; m < table.size(); ++m) table[m] = f(MaskToSet(m));
  return table;
}

}  // namespace

void SyntheticSpec::Validate() const {
  if (n < 1 || dim < 1 || num_classes < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic spec needs n >= 1, dim >= 1, num_classes >= 2");
  }
  if (!(cluster_spread > 0.0) || !std::isfinite(cluster_spread)) {
    throw Error(ErrorCode::kInvalidArgument, "cluster_spread must be > 0");
  }
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    throw Error(ErrorCode::kInvalidArgument, "temperature must be > 0");
  }
  if (proportions == Proportions::kLongTail && !(imbalance_ratio >= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "imbalance_ratio must be >= 1");
  }
}

std::vector<Index> ClassCounts(const SyntheticSpec& spec) {
  spec.Validate();
  const std::size_t L = spec.num_classes;
  std::vector<double> weight(L, 1.0);
  if (spec.proportions == Proportions::kLongTail) {
    for (std::size_t c = 0; c < L; ++c) {
      weight[c] = std::pow(spec.imbalance_ratio,
                           -static_cast<double>(c) / static_cast<double>(L - 1));
    }
  }
  const double total = std::accumulate(weight.begin(), weight.end(), 0.0);
  std::vector<Index> counts(L);
  std::vector<std::pair<double, std::size_t>> remainders;
  Index assigned = 0;
  for (std::size_t c = 0; c < L; ++c) {
    const double exact = static_cast<double>(spec.n) * weight[c] / total;
    counts[c] = static_cast<Index>(std::floor(exact));
    assigned += counts[c];
    remainders.emplace_back(exact - std::floor(exact), c);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (Index r = 0; r < spec.n - assigned; ++r) ++counts[remainders[r].second];
  return counts;
}

SyntheticInstance GenerateInstance(const SyntheticSpec& spec) {
  const std::vector<Index> counts = ClassCounts(spec);
  const std::size_t L = spec.num_classes, D = spec.dim;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  RowMatrix centres(L, D);
  for (std::size_t c = 0; c < L; ++c) {
    double sq = 0.0;
    for (double& v : centres.row(c)) {
      v = normal(rng);
      sq += v * v;
    }
    for (double& v : centres.row(c)) v /= std::sqrt(sq);
  }

  std::vector<std::int32_t> labels;
  labels.reserve(spec.n);
  for (std::size_t c = 0; c < L; ++c) {
    labels.insert(labels.end(), counts[c], static_cast<std::int32_t>(c));
  }
  std::shuffle(labels.begin(), labels.end(), rng);

  RowMatrix emb(spec.n, D), prob(spec.n, L);
  for (Index i = 0; i < spec.n; ++i) {
    auto x = emb.row(i);
    const auto centre = centres.row(labels[i]);
    double sq = 0.0;
    for (std::size_t t = 0; t < D; ++t) {
      x[t] = centre[t] + spec.cluster_spread * normal(rng);
      sq += x[t] * x[t];
    }
    if (sq == 0.0) {
      x[0] = 1.0;
      sq = 1.0;
    }
    for (double& v : x) v /= std::sqrt(sq);
    auto p = prob.row(i);
    double max_logit = -1e300;
    for (std::size_t c = 0; c < L; ++c) {
      double d2 = 0.0;
      const auto cc = centres.row(c);
      for (std::size_t t = 0; t < D; ++t) d2 += (x[t] - cc[t]) * (x[t] - cc[t]);
      p[c] = -std::sqrt(d2) / spec.temperature;
      max_logit = std::max(max_logit, p[c]);
    }
    double z = 0.0;
    for (double& v : p) {
      v = std::exp(v - max_logit);
      z += v;
    }
    for (double& v : p) v /= z;
  }
  SyntheticInstance out{DatasetInputs::Create(std::move(emb), std::move(prob)),
                        std::move(labels)};
  out.dataset.mutable_metadata().embeddings_sha256 = Sha256Hex(
      EncodeBinaryMatrix(MatrixKind::kEmbeddings, out.dataset.embeddings()));
  out.dataset.mutable_metadata().probabilities_sha256 = Sha256Hex(
      EncodeBinaryMatrix(MatrixKind::kProbabilities,
                         out.dataset.probability_matrix()));
  return out;
}

CheckReport CheckSubmodular(const SetFunction& f, Index n, double tol) {
  if (n < 0 || n > kMaxSubmodularN) {
    throw Error(ErrorCode::kTooLarge, "submodularity check limited to n <= 8");
  }
  const auto table = Tabulate(f, n);
  const std::uint32_t full = (1u << n) - 1;
  CheckReport r;
  for (std::uint32_t a = 0; a <= full; ++a) {
    // Every submask b of a, including a itself and the empty set.
    for (std::uint32_t b = a;; b = (b - 1) & a) {
      for (Index e = 0; e < n; ++e) {
        const std::uint32_t bit = 1u << e;
        if (a & bit) continue;
        ++r.cases;
        const double gain_a = table[a | bit] - table[a];
        const double gain_b = table[b | bit] - table[b];
        const double violation = gain_a - gain_b;
        if (violation > r.worst_violation) {
          r.worst_violation = violation;
          r.witness = "A=" + SetToString(a) + " B=" + SetToString(b) +
                      " e=" + std::to_string(e);
        }
      }
      if (b == 0) break;
    }
  }
  r.passed = r.worst_violation <= tol;
  return r;
}

CheckReport CheckMonotone(const SetFunction& f, Index n, double tol) {
  if (n < 0 || n > kMaxMonotoneN) {
    throw Error(ErrorCode::kTooLarge, "monotonicity check limited to n <= 10");
  }
  const auto table = Tabulate(f, n);
  CheckReport r;
  for (std::uint32_t s = 0; s < table.size(); ++s) {
    for (Index e = 0; e < n; ++e) {
      const std::uint32_t bit = 1u << e;
      if (s & bit) continue;
      ++r.cases;
      const double violation = table[s] - table[s | bit];
      if (violation > r.worst_violation) {
        r.worst_violation = violation;
        r.witness = "S=" + SetToString(s) + " e=" + std::to_string(e);
      }
    }
  }
  r.passed = r.worst_violation <= tol;
  return r;
}

MatroidAxiomReport CheckMatroidAxioms(const IndependenceOracle& independent,
                                      Index n) {
  if (n < 0 || n > kMaxMatroidN) {
    throw Error(ErrorCode::kTooLarge, "matroid axiom check limited to n <= 10");
  }
  const std::uint32_t count = 1u << n;
  std::vector<std::uint8_t> ind(count);
  for (std::uint32_t m = 0; m < count; ++m) ind[m] = independent(MaskToSet(m));

  MatroidAxiomReport r;
  if (!ind[0]) {
    r.empty_set_independent = false;
    ++r.violations;
  }
  for (std::uint32_t m = 0; m < count; ++m) {
    if (!ind[m]) continue;
    for (Index e = 0; e < n; ++e) {
      const std::uint32_t bit = 1u << e;
      if ((m & bit) && !ind[m & ~bit]) {
        r.downward_closed = false;
        ++r.violations;
      }
    }
  }
  for (std::uint32_t i1 = 0; i1 < count; ++i1) {
    if (!ind[i1]) continue;
    for (std::uint32_t i2 = 0; i2 < count; ++i2) {
      if (!ind[i2] || std::popcount(i1) >= std::popcount(i2)) continue;
      bool found = false;
      for (std::uint32_t rest = i2 & ~i1; rest; rest &= rest - 1) {
        if (ind[i1 | (rest & -rest)]) {
          found = true;
          break;
        }
      }
      if (!found) {
        r.exchange = false;
        ++r.violations;
      }
    }
  }
  return r;
}

MatroidAxiomReport CheckMatroidAxioms(const PartitionMatroid& m) {
  return CheckMatroidAxioms(
      [&m](std::span<const Index> s) { return m.IsIndependent(s); },
      m.ground_size());
}

double NaiveUncertainty(std::span<const double> utility,
                        std::span<const Index> set) {
  double s = 0.0;
  for (Index i : set) s += utility[i];
  return s;
}

double NaiveDiversity(const NeighborGraph& graph, double gamma,
                      std::span<const Index> set) {
  double unary = 0.0;
  for (Index l = 0; l < graph.size(); ++l) {
    double deg = 0.0;
    for (const auto& nb : graph.neighbors(l)) deg += nb.weight;
    unary = std::max(unary, deg);
  }
  double pairwise = 0.0;
  for (std::size_t a = 0; a < set.size(); ++a) {
    for (std::size_t b = a + 1; b < set.size(); ++b) {
      for (const auto& nb : graph.neighbors(set[a])) {
        if (nb.node == set[b]) pairwise += nb.weight;
      }
    }
  }
  return static_cast<double>(set.size()) * unary - gamma * pairwise;
}

double NaiveTriple(const CliqueSet& cliques, double eta,
                   std::span<const Index> set) {
  auto in_set = [&](Index v) {
    return std::find(set.begin(), set.end(), v) != set.end();
  };
  double value = 0.0;
  const auto& triples = cliques.triples();
  for (std::size_t t = 0; t < triples.size(); ++t) {
    int inside = 0;
    for (Index v : triples[t]) inside += in_set(v) ? 1 : 0;
    value += inside;  // contributes to alpha(v) for each member v in S
    if (inside == 3 && cliques.thin_flags()[t]) value -= eta;
  }
  return value;
}

double NaiveUnified(std::span<const double> utility, const NeighborGraph& graph,
                    const CliqueSet& cliques, const ObjectiveWeights& w,
                    std::span<const Index> set) {
  return w.lambda_uncertainty * NaiveUncertainty(utility, set) +
         w.lambda_diversity * NaiveDiversity(graph, w.gamma, set) +
         w.lambda_triple * NaiveTriple(cliques, w.eta, set);
}

std::vector<std::vector<Index>> BruteForceKnn(const DatasetInputs& dataset,
                                              Index k) {
  const Index n = dataset.size();
  std::vector<std::vector<Index>> lists(n);
  for (Index i = 0; i < n; ++i) {
    std::vector<std::pair<double, Index>> all;
    for (Index j = 0; j < n; ++j) {
      if (j == i) continue;
      double s = 0.0;
      const auto a = dataset.embedding(i), b = dataset.embedding(j);
      for (std::size_t t = 0; t < a.size(); ++t) s += a[t] * b[t];
      all.emplace_back(s, j);
    }
    std::sort(all.begin(), all.end(), [](const auto& x, const auto& y) {
      return x.first > y.first || (x.first == y.first && x.second < y.second);
    });
    for (Index r = 0; r < k && r < static_cast<Index>(all.size()); ++r) {
      lists[i].push_back(all[r].second);
    }
  }
  return lists;
}

std::vector<Triple> BruteForceTriangles(const NeighborGraph& graph) {
  const Index n = graph.size();
  std::vector<Triple> out;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (!graph.has_edge(i, j)) continue;
      for (Index k = j + 1; k < n; ++k) {
        if (graph.has_edge(i, k) && graph.has_edge(j, k)) out.push_back({i, j, k});
      }
    }
  }
  return out;
}

double GramTriangleArea(std::span<const double> a, std::span<const double> b,
                        std::span<const double> c) {
  double uu = 0.0, vv = 0.0, uv = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t) {
    const double u = b[t] - a[t];
    const double v = c[t] - a[t];
    uu += u * u;
    vv += v * v;
    uv += u * v;
  }
  return 0.5 * std::sqrt(std::max(0.0, uu * vv - uv * uv));
}

bool RecountFeasible(const MatroidIntersection& matroids,
                     std::span<const Index> selected) {
  std::vector<Index> sorted(selected.begin(), selected.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return false;
  }
  for (const auto& m : matroids.matroids()) {
    std::map<std::int32_t, std::int64_t> tally;
    for (Index e : selected) {
      if (e < 0 || e >= m.ground_size()) return false;
      if (m.cell_of(e) != kUnconstrained) ++tally[m.cell_of(e)];
    }
    for (const auto& [cell, count] : tally) {
      if (count > m.capacity(cell)) return false;
    }
  }
  return true;
}

RandomInstance MakeRandomInstance(std::uint64_t seed, Index n_min, Index n_max) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<Index> n_dist(n_min, n_max);
  const Index n = n_dist(rng);
  SyntheticSpec spec;
  spec.n = n;
  spec.dim = std::uniform_int_distribution<std::size_t>(3, 8)(rng);
  spec.num_classes = std::uniform_int_distribution<std::size_t>(2, 4)(rng);
  spec.cluster_spread = std::uniform_real_distribution<double>(0.1, 0.8)(rng);
  if (rng() % 2) {
    spec.proportions = Proportions::kLongTail;
    spec.imbalance_ratio = std::uniform_real_distribution<double>(1.0, 10.0)(rng);
  }
  spec.seed = rng();
  static constexpr double kTaus[] = {0.05, 0.5, 0.9, 0.97};
  const double tau = kTaus[rng() % 4];
  const Index max_k = std::max<Index>(1, std::min<Index>(n - 1, 4));
  const Index k = std::uniform_int_distribution<Index>(1, max_k)(rng);
  const double percentile =
      std::uniform_real_distribution<double>(20.0, 100.0)(rng);

  RandomInstance inst{GenerateInstance(spec), {}, {}, {}};
  inst.annotations = Annotate(inst.dataset(), tau);
  KnnOptions knn;
  knn.k = k;
  knn.num_threads = 1;
  inst.graph = BuildKnnGraph(inst.dataset(), knn);
  inst.cliques = BuildCliqueSet(inst.dataset(), inst.graph,
                                ThresholdSpec::Percentile(percentile));
  return inst;
}

ObjectiveWeights WeightCorner(int corner, std::mt19937_64& rng) {
  ObjectiveWeights w;
  switch (corner) {
    case 0:
      w.lambda_uncertainty = 1.0, w.lambda_diversity = 0.0, w.lambda_triple = 0.0;
      break;
    case 1:
      w.lambda_uncertainty = 0.0, w.lambda_diversity = 1.0, w.lambda_triple = 0.0;
      break;
    case 2:
      w.lambda_uncertainty = 0.0, w.lambda_diversity = 0.0, w.lambda_triple = 1.0;
      break;
    case 3:
      break;
    default: {
      std::uniform_real_distribution<double> u(0.0, 1.0);
      w.lambda_uncertainty = u(rng);
      w.lambda_diversity = u(rng);
      w.lambda_triple = u(rng);
      w.gamma = u(rng);
      w.eta = u(rng);
    }
  }
  return w;
}

}  // namespace subsel::testkit
