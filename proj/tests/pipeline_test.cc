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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "subsel/graph_cache.h"
#include "subsel/hash.h"
#include "subsel/pipeline.h"
#include "subsel/report.h"
#include "subsel/testkit.h"
#include "test_util.h"

namespace subsel {
namespace {

using test::TempDir;

DatasetInputs Synthetic(Index n, std::size_t L, std::uint64_t seed,
                        double temperature = 0.1) {
  testkit::SyntheticSpec spec;
  spec.n = n;
  spec.num_classes = L;
  spec.seed = seed;
  spec.temperature = temperature;
  return testkit::GenerateInstance(spec).dataset;
}

std::vector<std::vector<std::string>> ReadCsv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(ReadTextFile(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

TEST(HashTest, KnownDigest) {
  EXPECT_EQ(Sha256Hex(std::string_view("abc")),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  TempDir dir;
  std::ofstream(dir.file("f")) << "abc";
  EXPECT_EQ(Sha256File(dir.file("f")), Sha256Hex(std::string_view("abc")));
  EXPECT_THROW(Sha256File(dir.file("missing")), Error);
}

TEST(GraphCacheTest, RoundTripAndKeying) {
  TempDir dir;
  const DatasetInputs d = Synthetic(80, 4, 1);
  KnnOptions knn;
  knn.k = 6;
  const ThresholdSpec thr = ThresholdSpec::Percentile(10);
  const GraphArtifacts built = BuildGraphArtifacts(d, knn, thr);
  const GraphCacheKey key{d.metadata().embeddings_sha256, knn, thr};
  const std::string path = dir.file("g.bin");
  EXPECT_FALSE(LoadGraphCache(path, key).has_value());
  SaveGraphCache(path, key, built.graph, built.cliques);

  const auto loaded = LoadGraphCache(path, key);
  ASSERT_TRUE(loaded.has_value());
  EXPECT_EQ(loaded->graph.offsets(), built.graph.offsets());
  EXPECT_EQ(loaded->graph.adjacency(), built.graph.adjacency());
  EXPECT_EQ(loaded->graph.k_requested(), 6);
  EXPECT_EQ(loaded->cliques.triples(), built.cliques.triples());
  EXPECT_EQ(loaded->cliques.thin_flags(), built.cliques.thin_flags());
  EXPECT_EQ(loaded->cliques.area_threshold(), built.cliques.area_threshold());

  GraphCacheKey other = key;
  other.knn.k = 7;
  EXPECT_FALSE(LoadGraphCache(path, other).has_value());
  other = key;
  other.threshold = ThresholdSpec::Percentile(20);
  EXPECT_FALSE(LoadGraphCache(path, other).has_value());
  other = key;
  other.embeddings_sha256 = std::string(64, '0');
  EXPECT_FALSE(LoadGraphCache(path, other).has_value());
}

TEST(GraphCacheTest, CorruptFilesAreFormatErrors) {
  TempDir dir;
  const DatasetInputs d = Synthetic(40, 3, 2);
  KnnOptions knn;
  knn.k = 4;
  const ThresholdSpec thr;
  const GraphArtifacts built = BuildGraphArtifacts(d, knn, thr);
  const GraphCacheKey key{d.metadata().embeddings_sha256, knn, thr};
  SaveGraphCache(dir.file("g.bin"), key, built.graph, built.cliques);
  std::string bytes = ReadTextFile(dir.file("g.bin"));
  WriteTextFile(dir.file("trunc.bin"), bytes.substr(0, bytes.size() - 5));
  WriteTextFile(dir.file("magic.bin"), "NOT-A-GRAPH-FILE" + bytes.substr(16));
  for (const char* name : {"trunc.bin", "magic.bin"}) {
    try {
      LoadGraphCache(dir.file(name), key);
      ADD_FAILURE() << name;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kFormat) << name;
    }
  }
}

TEST(PipelineTest, BuildOrLoadUsesCache) {
  TempDir dir;
  const DatasetInputs d = Synthetic(60, 3, 3);
  KnnOptions knn;
  knn.k = 5;
  const auto first = BuildOrLoadGraph(d, knn, ThresholdSpec{}, dir.file("c.bin"));
  EXPECT_FALSE(first.from_cache);
  const auto second = BuildOrLoadGraph(d, knn, ThresholdSpec{}, dir.file("c.bin"));
  EXPECT_TRUE(second.from_cache);
  EXPECT_EQ(second.graph.adjacency(), first.graph.adjacency());
  EXPECT_EQ(second.cliques.triples(), first.cliques.triples());
}

TEST(PipelineTest, ResolveBudget) {
  EXPECT_EQ(ResolveBudget(100, 0, 0.3).budget, 30);
  EXPECT_EQ(ResolveBudget(10, 0, 0.25).budget, 3);  // round(2.5)
  EXPECT_EQ(ResolveBudget(10, 0, 0.01).budget, 1);
  const ResolvedBudget abs = ResolveBudget(50, 10, 0.9);
  EXPECT_EQ(abs.budget, 10);
  EXPECT_DOUBLE_EQ(abs.fraction, 0.2);
  EXPECT_THROW(ResolveBudget(5, 6, 0.3), Error);
  EXPECT_THROW(ResolveBudget(5, 0, 0.0), Error);
  EXPECT_THROW(ResolveBudget(5, 0, 1.5), Error);
}

TEST(PipelineTest, LongTailBalancingCapsEveryClass) {
  testkit::SyntheticSpec spec;
  spec.n = 1000;
  spec.num_classes = 10;
  spec.dim = 16;
  spec.proportions = testkit::Proportions::kLongTail;
  spec.imbalance_ratio = 100;
  const DatasetInputs d = testkit::GenerateInstance(spec).dataset;
  KnnOptions knn;
  const GraphArtifacts g = BuildGraphArtifacts(d, knn, ThresholdSpec{});
  SelectOptions opts;
  opts.budget_fraction = 0.4;
  const SelectionRun run = RunSelection(d, g.graph, g.cliques, opts);
  std::map<std::int32_t, std::int64_t> per_class;
  for (Index i : run.result.selected) ++per_class[run.annotations.pseudo_label[i]];
  for (const auto& [c, count] : per_class) EXPECT_LE(count, 40) << "class " << c;
}

TEST(PipelineTest, SolversAgreeEndToEnd) {
  const DatasetInputs d = Synthetic(150, 5, 4);
  const GraphArtifacts g = BuildGraphArtifacts(d, KnnOptions{}, ThresholdSpec{});
  SelectOptions opts;
  const auto pq = RunSelection(d, g.graph, g.cliques, opts);
  opts.solver = Solver::kExact;
  const auto exact = RunSelection(d, g.graph, g.cliques, opts);
  EXPECT_EQ(pq.result.selected, exact.result.selected);
  EXPECT_EQ(pq.budget.budget, 45);
}

TEST(ReportTest, SelectionJsonRoundTrip) {
  SelectionResult r;
  r.selected = {4, 1, 7};
  r.gains = {1.5, 1.25, 0.125};
  r.objective_value = 2.875;
  r.termination = Termination::kExhausted;
  r.constraint_report = {{"class", {{"0", 2, 3}, {"1", 1, 3}}, 0}};
  const std::string text = SelectionToJson(r);
  const auto j = nlohmann::json::parse(text);
  for (const char* key : {"selected", "gains", "objective", "termination", "constraints"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  const StoredSelection s = SelectionFromJson(text);
  EXPECT_EQ(s.selected, r.selected);
  EXPECT_EQ(s.gains, r.gains);
  EXPECT_EQ(s.objective, 2.875);
  EXPECT_EQ(s.termination, "EXHAUSTED");
  EXPECT_THROW(SelectionFromJson("[1,2"), Error);
}

SelectionRun RunAndWrite(const DatasetInputs& d, const SelectOptions& opts,
                         const std::string& dir) {
  const GraphArtifacts g = BuildGraphArtifacts(d, KnnOptions{}, ThresholdSpec{});
  SelectionRun run = RunSelection(d, g.graph, g.cliques, opts);
  WriteSelectionArtifacts(dir, run.result);
  WriteAnnotations(dir, run.annotations, d.num_classes());
  return run;
}

TEST(ReportTest, WholeSetMatchesFullDistribution) {
  TempDir dir;
  const DatasetInputs d = Synthetic(60, 4, 5);
  SelectOptions opts;
  opts.budget = 60;
  opts.class_balance = false;
  opts.boundary_balance = false;
  RunAndWrite(d, opts, dir.path().string());
  const ReportSummary s = WriteReport(dir.path().string());
  EXPECT_EQ(s.selected, 60u);
  const auto rows = ReadCsv((dir.path() / "report" / "class_distribution.csv").string());
  ASSERT_EQ(rows.size(), 5u);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    EXPECT_EQ(rows[r][1], rows[r][2]);
    EXPECT_EQ(rows[r][3], rows[r][4]);
  }
  const auto gains = ReadCsv((dir.path() / "report" / "gain_curve.csv").string());
  EXPECT_EQ(gains.size(), 61u);
  EXPECT_EQ(gains[0], (std::vector<std::string>{"step", "index", "gain",
                                                "cumulative_objective"}));
}

TEST(ReportTest, EmptyBoundarySetGivesHeaderOnly) {
  TempDir dir;
  SelectOptions opts;
  opts.tau = 1.0;  // u > 1 never holds
  RunAndWrite(Synthetic(40, 3, 6), opts, dir.path().string());
  const ReportSummary s = WriteReport(dir.path().string());
  EXPECT_EQ(s.boundary_coverage, 0.0);
  EXPECT_EQ(ReadTextFile((dir.path() / "report" / "boundary_histogram.csv").string()),
            "class_a,class_b,count\n");
}

TEST(ReportTest, HistogramRowsSumToBoundarySamples) {
  TempDir dir;
  const DatasetInputs d = Synthetic(200, 6, 7);
  const SelectionRun run = RunAndWrite(d, SelectOptions{}, dir.path().string());
  const ReportSummary s = WriteReport(dir.path().string());
  const auto rows = ReadCsv((dir.path() / "report" / "boundary_histogram.csv").string());
  std::size_t sum = 0, expected = 0;
  for (std::size_t r = 1; r < rows.size(); ++r) sum += std::stoul(rows[r][2]);
  for (double u : run.annotations.margin_utility) expected += u > kDefaultTau;
  EXPECT_EQ(sum, expected);
  EXPECT_EQ(s.samples_on_boundaries, expected);
  EXPECT_EQ(s.covered_pairs, rows.size() - 1);
  const auto summary = nlohmann::json::parse(
      ReadTextFile((dir.path() / "report" / "summary.json").string()));
  EXPECT_EQ(summary["covered_pairs"], s.covered_pairs);
}

TEST(ReportTest, MissingArtifactsAreIoErrors) {
  TempDir dir;
  try {
    WriteReport(dir.path().string());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIo);
  }
}

}  // namespace
}  // namespace subsel
