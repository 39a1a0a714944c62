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

#include "subsel/suites.h"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>

#include "subsel/greedy.h"
#include "subsel/pipeline.h"
#include "subsel/report.h"
#include "subsel/testkit.h"

namespace subsel::testkit {
namespace {

using Clock = std::chrono::steady_clock;

struct CaseOutcome {
  bool passed = true;
  double worst = 0.0;
  std::string detail;
};

// Mixes a case seed so neighbouring seeds do not share RNG prefixes.
std::uint64_t Mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

void Merge(CaseOutcome& into, const CaseOutcome& other) {
  into.worst = std::max(into.worst, other.worst);
  if (!other.passed) {
    into.passed = false;
    if (into.detail.empty()) into.detail = other.detail;
  }
}

CaseOutcome FromReport(const CheckReport& r, const std::string& what) {
  CaseOutcome c;
  c.passed = r.passed;
  c.worst = r.worst_violation;
  if (!r.passed) {
    std::ostringstream os;
    os << what << " violation " << r.worst_violation << " at " << r.witness;
    c.detail = os.str();
  }
  return c;
}

bool HasPositiveEdge(const NeighborGraph& g) {
  for (const auto& nb : g.adjacency()) {
    if (nb.weight > 1e-6) return true;
  }
  return false;
}

void Tally(FeasibilityTally* tally, const MatroidIntersection& m,
           const SelectionResult& r) {
  if (!tally) return;
  ++tally->checked;
  if (!RecountFeasible(m, r.selected)) ++tally->failures;
}

// ---- Individual cases --------------------------------------------------

CaseOutcome SubmodularityCase(std::uint64_t seed, bool inject_fault) {
  const RandomInstance inst = MakeRandomInstance(Mix(seed), 3, kMaxSubmodularN);
  std::mt19937_64 rng(Mix(seed + 1));
  const ObjectiveWeights defaults;
  const ObjectiveWeights random = WeightCorner(4, rng);
  const ObjectiveContext ctx = inst.Context(defaults);
  const ObjectiveContext ctx_random = inst.Context(random);
  const Index n = ctx.size();

  CaseOutcome out;
  Merge(out, FromReport(CheckSubmodular([&](auto s) { return ctx.Uncertainty(s); }, n),
                        "f_uncertainty"));
  if (inject_fault) {
    Merge(out, FromReport(CheckSubmodular(
                              [&](auto s) {
                                return NaiveDiversity(inst.graph, -defaults.gamma, s);
                              },
                              n),
                          "f_diversity(+gamma)"));
  } else {
    Merge(out, FromReport(CheckSubmodular([&](auto s) { return ctx.Diversity(s); }, n),
                          "f_diversity"));
  }
  Merge(out, FromReport(CheckSubmodular([&](auto s) { return ctx.Triple(s); }, n),
                        "f_triple"));
  Merge(out, FromReport(CheckSubmodular([&](auto s) { return ctx.Unified(s); }, n),
                        "f_unified"));
  Merge(out, FromReport(
                 CheckSubmodular([&](auto s) { return ctx_random.Unified(s); }, n),
                 "f_unified(random weights)"));

  if (!inject_fault && HasPositiveEdge(inst.graph)) {
    const CheckReport control = CheckSubmodular(
        [&](auto s) { return NaiveDiversity(inst.graph, -1.0, s); }, n);
    if (control.passed) {
      out.passed = false;
      if (out.detail.empty()) out.detail = "+gamma negative control not detected";
    }
  }
  return out;
}

CaseOutcome MonotonicityCase(std::uint64_t seed) {
  const RandomInstance inst = MakeRandomInstance(Mix(seed), 3, kMaxMonotoneN);
  std::mt19937_64 rng(Mix(seed + 1));
  const ObjectiveContext ctx = inst.Context(ObjectiveWeights{});
  const ObjectiveContext ctx_random = inst.Context(WeightCorner(4, rng));
  const Index n = ctx.size();

  CaseOutcome out;
  for (const auto* c : {&ctx, &ctx_random}) {
    for (Component comp : {Component::kUncertainty, Component::kDiversity,
                           Component::kTriple, Component::kUnified}) {
      Merge(out, FromReport(
                     CheckMonotone([&](auto s) { return c->Evaluate(comp, s); }, n),
                     "monotonicity component " +
                         std::to_string(static_cast<int>(comp))));
    }
  }
  // Closed-form gain against two full evaluations, every (S, e).
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    std::vector<Index> set;
    for (Index i = 0; i < n; ++i) {
      if (m & (1u << i)) set.push_back(i);
    }
    const double base = ctx_random.Unified(set);
    for (Index e = 0; e < n; ++e) {
      if (m & (1u << e)) continue;
      std::vector<Index> plus = set;
      plus.push_back(e);
      const double diff = ctx_random.Unified(plus) - base;
      const double closed = ctx_random.MarginalGain(set, e);
      const double err = std::abs(diff - closed);
      out.worst = std::max(out.worst, err);
      if (err > 1e-9) {
        out.passed = false;
        if (out.detail.empty()) {
          out.detail = "closed-form gain mismatch for e=" + std::to_string(e);
        }
      }
    }
  }
  return out;
}

int ApproximationMode(std::uint64_t seed) { return static_cast<int>(seed % 3); }

CaseOutcome ApproximationCase(std::uint64_t seed, FeasibilityTally* tally) {
  const RandomInstance inst = MakeRandomInstance(Mix(seed), 5, 12);
  std::mt19937_64 rng(Mix(seed + 1));
  const Index n = inst.dataset().size();
  const Index k = std::uniform_int_distribution<Index>(1, std::min<Index>(4, n))(rng);
  const ObjectiveWeights w = WeightCorner(static_cast<int>(rng() % kNumWeightCorners), rng);
  const ObjectiveContext ctx = inst.Context(w);
  const double fraction = static_cast<double>(k) / static_cast<double>(n);
  const std::size_t L = inst.dataset().num_classes();

  const int mode = ApproximationMode(seed);  // 0: two matroids, 1: one, 2: none
  bool use_class = mode == 0, use_boundary = mode == 0;
  if (mode == 1) (rng() % 2 ? use_class : use_boundary) = true;
  const MatroidIntersection m =
      MakeMatroids(inst.annotations, L, fraction, use_class, use_boundary);
  const double ratio = mode == 0   ? 1.0 / 3.0
                       : mode == 1 ? 1.0 / 2.0
                                   : 1.0 - std::exp(-1.0);
  const SelectionConfig cfg{k};
  const SelectionResult pq = GreedyPriorityQueue(ctx, m, cfg);
  const SelectionResult exact = GreedyExact(ctx, m, cfg);
  const SelectionResult opt = BruteForceOptimum(ctx, m, cfg);
  Tally(tally, m, pq);
  Tally(tally, m, exact);
  Tally(tally, m, opt);

  CaseOutcome out;
  for (const auto* r : {&pq, &exact}) {
    const double shortfall = ratio * opt.objective_value - r->objective_value;
    out.worst = std::max(out.worst, shortfall);
    if (shortfall > 1e-9) {
      out.passed = false;
      std::ostringstream os;
      os << "greedy " << r->objective_value << " < " << ratio << " * OPT "
         << opt.objective_value << " (matroids=" << m.size() << ")";
      out.detail = os.str();
    }
  }
  if (pq.objective_value > opt.objective_value + 1e-9) {
    out.passed = false;
    out.detail = "greedy exceeded the brute-force optimum";
  }
  return out;
}

CaseOutcome EquivalenceCase(std::uint64_t seed, FeasibilityTally* tally) {
  const RandomInstance inst = MakeRandomInstance(Mix(seed), 5, 60);
  std::mt19937_64 rng(Mix(seed + 1));
  const Index n = inst.dataset().size();
  const Index k = std::uniform_int_distribution<Index>(1, n)(rng);
  const int corner = static_cast<int>(seed % kNumWeightCorners);
  const int combo = static_cast<int>((seed / kNumWeightCorners) % 4);
  const ObjectiveContext ctx = inst.Context(WeightCorner(corner, rng));
  const MatroidIntersection m = MakeMatroids(
      inst.annotations, inst.dataset().num_classes(),
      static_cast<double>(k) / static_cast<double>(n), combo & 1, combo & 2);
  const SelectionConfig cfg{k};
  const SelectionResult exact = GreedyExact(ctx, m, cfg);
  const SelectionResult pq = GreedyPriorityQueue(ctx, m, cfg);
  Tally(tally, m, exact);
  Tally(tally, m, pq);

  CaseOutcome out;
  if (exact.selected != pq.selected) {
    out.passed = false;
    out.detail = "pq and exact selections differ (n=" + std::to_string(n) +
                 ", k=" + std::to_string(k) + ")";
    return out;
  }
  double cumulative = 0.0;
  std::vector<Index> prefix;
  for (std::size_t s = 0; s < pq.selected.size(); ++s) {
    cumulative += pq.gains[s];
    prefix.push_back(pq.selected[s]);
    const double value = ctx.Unified(prefix);
    const double err = std::abs(cumulative - value) / std::max(1.0, std::abs(value));
    out.worst = std::max(out.worst, err);
    if (err > 1e-9) {
      out.passed = false;
      out.detail = "gain prefix sum disagrees with the objective";
    }
    if (m.size() == 0 && s > 0 && pq.gains[s] > pq.gains[s - 1] + 1e-9) {
      out.passed = false;
      out.detail = "gains increased without matroids";
    }
  }
  return out;
}

CaseOutcome MatroidAxiomCase(std::uint64_t seed) {
  const RandomInstance inst = MakeRandomInstance(Mix(seed), 3, kMaxMatroidN);
  std::mt19937_64 rng(Mix(seed + 1));
  const double fraction = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
  const Index n = inst.dataset().size();
  CaseOutcome out;
  for (const auto& m :
       {ClassMatroid(inst.annotations, inst.dataset().num_classes(), fraction, n),
        BoundaryMatroid(inst.annotations, fraction)}) {
    const MatroidAxiomReport r = CheckMatroidAxioms(m);
    if (!r.passed()) {
      out.passed = false;
      out.worst = std::max(out.worst, static_cast<double>(r.violations));
      out.detail = m.name() + " matroid violates an axiom";
    }
  }
  return out;
}

// Cell layout for which the intersection of two partition matroids breaks
// the exchange axiom: {1} and {0, 2} are independent but neither 0 nor 2
// extends {1}.
CaseOutcome MatroidNegativeControl() {
  const PartitionMatroid a("a", {0, 0, 1}, {1, 1});
  const PartitionMatroid b("b", {0, 1, 1}, {1, 1});
  const MatroidIntersection both(3, {a, b});
  const MatroidAxiomReport r = CheckMatroidAxioms(
      [&](std::span<const Index> s) { return both.IsIndependent(s); }, 3);
  CaseOutcome out;
  if (r.passed()) {
    out.passed = false;
    out.detail = "axiom checker accepted a non-matroid";
  }
  return out;
}

CaseOutcome UniformMatroidCase() {
  CaseOutcome out;
  const Index n = 7;
  for (std::int64_t r = 1; r <= n; ++r) {
    const PartitionMatroid u("uniform", std::vector<std::int32_t>(n, 0), {r});
    if (!CheckMatroidAxioms(u).passed()) out.passed = false;
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
      std::vector<Index> s;
      for (Index i = 0; i < n; ++i) {
        if (m & (1u << i)) s.push_back(i);
      }
      if (u.IsIndependent(s) != (static_cast<std::int64_t>(s.size()) <= r)) {
        out.passed = false;
      }
    }
  }
  if (!out.passed) out.detail = "uniform matroid characterisation failed";
  return out;
}

CaseOutcome GeometryCase(std::uint64_t seed) {
  std::mt19937_64 rng(Mix(seed));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr std::size_t kDim = 16;
  std::vector<double> a(kDim), b(kDim), c(kDim);
  for (std::size_t t = 0; t < kDim; ++t) {
    a[t] = normal(rng);
    b[t] = normal(rng);
  }
  const int kind = static_cast<int>(seed % 10);
  if (kind < 6) {
    for (auto& v : c) v = normal(rng);
  } else if (kind < 9) {
    // Nearly collinear: c on line ab plus a small transverse offset.
    const double along = -0.5 + 2.0 * unit(rng);
    const double delta = std::pow(10.0, -4.0 + 2.0 * unit(rng));
    double len = 0.0;
    for (std::size_t t = 0; t < kDim; ++t) len += (b[t] - a[t]) * (b[t] - a[t]);
    len = std::sqrt(len);
    for (std::size_t t = 0; t < kDim; ++t) {
      c[t] = a[t] + along * (b[t] - a[t]) + delta * len * normal(rng) / 4.0;
    }
  } else {
    std::copy(a.begin(), a.end(), c.begin());
  }
  const double heron = TriangleArea(a, b, c);
  const double gram = GramTriangleArea(a, b, c);
  CaseOutcome out;
  if (!std::isfinite(heron) || heron < 0.0) {
    out.passed = false;
    out.detail = "non-finite or negative area";
    return out;
  }
  const double rel = gram > 0.0 ? std::abs(heron - gram) / gram
                                 : (heron == 0.0 ? 0.0 : 1.0);
  out.worst = rel;
  if (rel > 1e-6) {
    out.passed = false;
    std::ostringstream os;
    os.precision(17);
    os << "heron " << heron << " vs gram " << gram;
    out.detail = os.str();
  }
  return out;
}

CaseOutcome KnnCase(std::uint64_t seed, int max_n) {
  std::mt19937_64 rng(Mix(seed));
  SyntheticSpec spec;
  spec.n = std::uniform_int_distribution<Index>(50, std::max(50, max_n))(rng);
  spec.dim = std::uniform_int_distribution<std::size_t>(4, 32)(rng);
  spec.num_classes = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
  spec.cluster_spread = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
  spec.seed = rng();
  const DatasetInputs d = GenerateInstance(spec).dataset;
  KnnOptions opt;
  opt.k = std::uniform_int_distribution<Index>(1, std::min<Index>(15, spec.n - 1))(rng);
  const auto lists = ComputeKnnLists(d, opt);
  const auto oracle = BruteForceKnn(d, opt.k);
  CaseOutcome out;
  if (lists != oracle) {
    out.passed = false;
    out.detail = "k-NN lists differ from brute force (n=" +
                 std::to_string(spec.n) + ", k=" + std::to_string(opt.k) + ")";
    return out;
  }
  const NeighborGraph g = GraphFromKnnLists(d, lists, opt.k);
  for (Index i = 0; i < d.size(); ++i) {
    for (Index j : lists[i]) {
      if (!g.has_edge(i, j) || !g.has_edge(j, i) || g.weight(i, j) != g.weight(j, i)) {
        out.passed = false;
        out.detail = "graph lost or desymmetrised a k-NN edge";
      }
    }
    for (const auto& nb : g.neighbors(i)) {
      if (nb.node == i || nb.weight < 0.0 || nb.weight > 1.0) {
        out.passed = false;
        out.detail = "graph has a self-loop or out-of-range weight";
      }
    }
  }
  return out;
}

double MaxMinClassRatio(const SampleAnnotations& a, std::size_t num_classes,
                        const std::vector<Index>& selected) {
  std::vector<std::size_t> present(num_classes, 0), chosen(num_classes, 0);
  for (std::int32_t label : a.pseudo_label) ++present[label];
  for (Index i : selected) ++chosen[a.pseudo_label[i]];
  std::size_t hi = 0, lo = std::numeric_limits<std::size_t>::max();
  for (std::size_t c = 0; c < num_classes; ++c) {
    if (!present[c]) continue;
    hi = std::max(hi, chosen[c]);
    lo = std::min(lo, chosen[c]);
  }
  if (lo == 0) return std::numeric_limits<double>::infinity();
  return static_cast<double>(hi) / static_cast<double>(lo);
}

CaseOutcome LongTailCase(std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n = 1000;
  spec.dim = 16;
  spec.num_classes = 10;
  spec.cluster_spread = 0.35;
  spec.proportions = Proportions::kLongTail;
  spec.imbalance_ratio = 100.0;
  spec.seed = Mix(seed);
  const DatasetInputs d = GenerateInstance(spec).dataset;
  KnnOptions knn;
  knn.k = 10;
  const GraphArtifacts g =
      BuildGraphArtifacts(d, knn, ThresholdSpec::Percentile(10.0));
  SelectOptions opts;
  opts.budget_fraction = 0.4;
  opts.boundary_balance = false;
  opts.class_balance = true;
  const SelectionRun with = RunSelection(d, g.graph, g.cliques, opts);
  opts.class_balance = false;
  const SelectionRun without = RunSelection(d, g.graph, g.cliques, opts);
  const double r_with =
      MaxMinClassRatio(with.annotations, d.num_classes(), with.result.selected);
  const double r_without = MaxMinClassRatio(without.annotations, d.num_classes(),
                                            without.result.selected);
  CaseOutcome out;
  out.worst = r_with;
  std::ostringstream os;
  os << "ratio with balancing " << r_with << ", without " << r_without;
  if (!(r_with < r_without)) {
    out.passed = false;
    out.detail = os.str();
  }
  return out;
}

// ---- Suite driver --------------------------------------------------------

SuiteResult RunCases(const std::string& name, int count, std::uint64_t seed,
                     const std::function<CaseOutcome(std::uint64_t)>& run,
                     const nlohmann::json& extra_witness = nlohmann::json::object()) {
  SuiteResult r;
  r.name = name;
  const auto start = Clock::now();
  for (int i = 0; i < count; ++i) {
    const std::uint64_t case_seed = seed + static_cast<std::uint64_t>(i);
    const CaseOutcome c = run(case_seed);
    ++r.cases;
    r.worst = std::max(r.worst, c.worst);
    if (!c.passed) {
      ++r.failures;
      if (r.witness.is_null()) {
        r.witness = extra_witness;
        r.witness["suite"] = name;
        r.witness["seed"] = case_seed;
        r.detail = c.detail;
      }
    }
  }
  r.passed = r.failures == 0;
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

}  // namespace

nlohmann::json ToJson(const SuiteResult& r) {
  return {{"name", r.name},       {"passed", r.passed},   {"cases", r.cases},
          {"failures", r.failures}, {"worst", r.worst},   {"seconds", r.seconds},
          {"detail", r.detail},   {"witness", r.witness}};
}

SuiteResult RunSubmodularitySuite(int instances, bool inject_fault,
                                  std::uint64_t seed) {
  return RunCases(
      "submodularity", instances, seed,
      [&](std::uint64_t s) { return SubmodularityCase(s, inject_fault); },
      {{"inject_fault", inject_fault}});
}

SuiteResult RunMonotonicitySuite(int instances, bool inject_fault,
                                 std::uint64_t seed) {
  (void)inject_fault;  // the sign flip keeps every component monotone
  return RunCases("monotonicity", instances, seed, MonotonicityCase);
}

SuiteResult RunApproximationSuite(int instances, FeasibilityTally* tally,
                                  std::uint64_t seed) {
  return RunCases("approximation", instances, seed, [&](std::uint64_t s) {
    return ApproximationCase(s, tally);
  });
}

SuiteResult RunEquivalenceSuite(int configs, FeasibilityTally* tally,
                                std::uint64_t seed) {
  return RunCases("equivalence", configs, seed, [&](std::uint64_t s) {
    return EquivalenceCase(s, tally);
  });
}

SuiteResult RunMatroidAxiomSuite(int instances, std::uint64_t seed) {
  SuiteResult r = RunCases("matroid_axioms", instances, seed, MatroidAxiomCase);
  for (const auto& [label, c] :
       {std::pair{"negative control", MatroidNegativeControl()},
        std::pair{"uniform matroid", UniformMatroidCase()}}) {
    ++r.cases;
    if (!c.passed) {
      ++r.failures;
      r.passed = false;
      if (r.detail.empty()) r.detail = std::string(label) + ": " + c.detail;
    }
  }
  return r;
}

SuiteResult RunGeometrySuite(int triples, std::uint64_t seed) {
  return RunCases("geometry", triples, seed, GeometryCase);
}

SuiteResult RunKnnSuite(int instances, int max_n, std::uint64_t seed) {
  return RunCases(
      "knn", instances, seed,
      [&](std::uint64_t s) { return KnnCase(s, max_n); }, {{"max_n", max_n}});
}

SuiteResult RunLongTailSuite(int seeds, std::uint64_t seed) {
  return RunCases("long_tail", seeds, seed, LongTailCase);
}

SuiteResult RunCoverageSuite(const std::string& work_dir) {
  SuiteResult r;
  r.name = "boundary_coverage";
  const auto start = Clock::now();

  // 16 classes -> 120 pairs; boundary samples on 18 of them (15%), plus
  // confident samples whose margin utility stays below tau.
  constexpr std::size_t kClasses = 16;
  constexpr std::size_t kCoveredPairs = 18;
  constexpr std::size_t kPerPair = 3;
  constexpr std::size_t kConfident = 20;
  std::vector<ClassPair> pairs;
  for (std::int32_t a = 0; a < static_cast<std::int32_t>(kClasses); ++a) {
    for (std::int32_t b = a + 1; b < static_cast<std::int32_t>(kClasses); ++b) {
      pairs.push_back({a, b});
    }
  }
  std::mt19937_64 rng(Mix(kDefaultSuiteSeed));
  std::shuffle(pairs.begin(), pairs.end(), rng);
  pairs.resize(kCoveredPairs);

  const std::size_t n = kCoveredPairs * kPerPair + kConfident;
  RowMatrix emb(n, 8), prob(n, kClasses);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (double& v : emb.data) v = normal(rng);
  std::size_t row = 0;
  for (const auto& p : pairs) {
    for (std::size_t s = 0; s < kPerPair; ++s, ++row) {
      for (std::size_t c = 0; c < kClasses; ++c) prob(row, c) = 0.1 / (kClasses - 2);
      prob(row, p.first) = 0.45;
      prob(row, p.second) = 0.45;
    }
  }
  for (std::size_t s = 0; s < kConfident; ++s, ++row) {
    for (std::size_t c = 0; c < kClasses; ++c) prob(row, c) = 0.01 / (kClasses - 1);
    prob(row, s % kClasses) = 0.99;
  }
  const DatasetInputs d = DatasetInputs::Create(std::move(emb), std::move(prob));

  KnnOptions knn;
  knn.k = 5;
  const GraphArtifacts g = BuildGraphArtifacts(d, knn, ThresholdSpec::Percentile(10.0));
  SelectOptions opts;
  opts.tau = kDefaultTau;
  const SelectionRun run = RunSelection(d, g.graph, g.cliques, opts);
  std::filesystem::create_directories(work_dir);
  WriteAnnotations(work_dir, run.annotations, d.num_classes());
  WriteSelectionArtifacts(work_dir, run.result);
  const ReportSummary summary = WriteReport(work_dir);

  r.cases = 1;
  r.worst = summary.boundary_coverage;
  if (summary.boundary_coverage != 0.15 ||
      summary.samples_on_boundaries != kCoveredPairs * kPerPair) {
    r.passed = false;
    r.failures = 1;
    std::ostringstream os;
    os << "coverage " << summary.boundary_coverage << " (expected 0.15), "
       << summary.samples_on_boundaries << " boundary samples";
    r.detail = os.str();
  }
  r.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

SuiteResult RunReplay(const nlohmann::json& witness) {
  const std::string suite = witness.at("suite").get<std::string>();
  const std::uint64_t seed = witness.at("seed").get<std::uint64_t>();
  if (suite == "submodularity") {
    return RunSubmodularitySuite(1, witness.value("inject_fault", false), seed);
  }
  if (suite == "monotonicity") return RunMonotonicitySuite(1, false, seed);
  if (suite == "approximation") return RunApproximationSuite(1, nullptr, seed);
  if (suite == "equivalence") return RunEquivalenceSuite(1, nullptr, seed);
  if (suite == "matroid_axioms") return RunMatroidAxiomSuite(1, seed);
  if (suite == "geometry") return RunGeometrySuite(1, seed);
  if (suite == "knn") return RunKnnSuite(1, witness.value("max_n", 500), seed);
  if (suite == "long_tail") return RunLongTailSuite(1, seed);
  throw Error(ErrorCode::kInvalidArgument, "cannot replay suite '" + suite + "'");
}

nlohmann::json RunVerify(const VerifyOptions& options) {
  FeasibilityTally tally;
  std::vector<SuiteResult> results;
  results.push_back(RunSubmodularitySuite(50, options.inject_fault, options.seed));
  results.push_back(RunMonotonicitySuite(50, options.inject_fault, options.seed));
  results.push_back(RunApproximationSuite(200, &tally, options.seed));
  results.push_back(RunEquivalenceSuite(500, &tally, options.seed));
  results.push_back(RunMatroidAxiomSuite(50, options.seed));
  results.push_back(RunGeometrySuite(10000, options.seed));
  results.push_back(RunKnnSuite(20, 500, options.seed));
  results.push_back(RunLongTailSuite(20, options.seed));
  const std::string work =
      options.work_dir.empty()
          ? (std::filesystem::temp_directory_path() / "subsel-verify").string()
          : options.work_dir;
  results.push_back(RunCoverageSuite(work));

  SuiteResult feasibility;
  feasibility.name = "feasibility";
  feasibility.cases = tally.checked;
  feasibility.failures = tally.failures;
  feasibility.passed = tally.failures == 0 && tally.checked > 0;
  results.push_back(feasibility);

  nlohmann::json j;
  bool all = true;
  j["suites"] = nlohmann::json::array();
  for (const auto& r : results) {
    all = all && r.passed;
    j["suites"].push_back(ToJson(r));
  }
  j["passed"] = all;
  return j;
}

}  // namespace subsel::testkit
