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

#include "subsel/subsel.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "json.hpp"
#include "temp_dir.h"

namespace {

using subsel::test::TempDir;

subsel_dataset_t* Generate(int64_t n, uint64_t seed) {
  subsel_synthetic_spec spec;
  subsel_synthetic_spec_init(&spec);
  spec.n = n;
  spec.seed = seed;
  spec.temperature = 0.1;
  subsel_dataset_t* d = nullptr;
  EXPECT_EQ(subsel_dataset_generate(&spec, &d), SUBSEL_OK) << subsel_last_error();
  return d;
}

TEST(CApiTest, EndToEnd) {
  TempDir dir;
  subsel_dataset_t* d = Generate(120, 3);
  ASSERT_NE(d, nullptr);
  const std::string emb = dir.file("e.bin"), prb = dir.file("p.bin");
  ASSERT_EQ(subsel_dataset_save(d, emb.c_str(), prb.c_str()), SUBSEL_OK);
  subsel_dataset_free(d);

  subsel_dataset_t* loaded = nullptr;
  ASSERT_EQ(subsel_dataset_load(emb.c_str(), prb.c_str(), &loaded), SUBSEL_OK);
  subsel_dataset_info di;
  ASSERT_EQ(subsel_dataset_info_get(loaded, &di), SUBSEL_OK);
  EXPECT_EQ(di.size, 120);
  EXPECT_EQ(di.num_classes, 4);
  char hex[65];
  ASSERT_EQ(subsel_file_sha256(emb.c_str(), hex), SUBSEL_OK);
  EXPECT_STREQ(hex, di.embeddings_sha256);

  subsel_graph_options go;
  subsel_graph_options_init(&go);
  EXPECT_EQ(go.k, 10);
  const std::string cache = dir.file("g.cache");
  go.cache_path = cache.c_str();
  subsel_graph_t* g = nullptr;
  ASSERT_EQ(subsel_graph_build(loaded, &go, &g), SUBSEL_OK) << subsel_last_error();
  subsel_graph_info gi;
  ASSERT_EQ(subsel_graph_info_get(g, &gi), SUBSEL_OK);
  EXPECT_EQ(gi.from_cache, 0);
  EXPECT_GT(gi.num_edges, 0);
  subsel_graph_t* cached = nullptr;
  ASSERT_EQ(subsel_graph_build(loaded, &go, &cached), SUBSEL_OK);
  ASSERT_EQ(subsel_graph_info_get(cached, &gi), SUBSEL_OK);
  EXPECT_EQ(gi.from_cache, 1);
  subsel_graph_free(cached);

  subsel_select_options so;
  subsel_select_options_init(&so);
  EXPECT_DOUBLE_EQ(so.lambda_uncertainty, 0.7);
  EXPECT_DOUBLE_EQ(so.lambda_diversity, 0.30);
  EXPECT_DOUBLE_EQ(so.lambda_triple, 1.0);
  EXPECT_DOUBLE_EQ(so.tau, 0.05);
  subsel_selection_t* sel = nullptr;
  ASSERT_EQ(subsel_select(loaded, g, &so, &sel), SUBSEL_OK) << subsel_last_error();
  subsel_selection_info si;
  ASSERT_EQ(subsel_selection_info_get(sel, &si), SUBSEL_OK);
  EXPECT_EQ(si.budget, 36);
  std::vector<int64_t> idx(si.num_selected);
  std::vector<double> gains(si.num_selected);
  ASSERT_EQ(subsel_selection_copy(sel, idx.data(), gains.data(), idx.size()), SUBSEL_OK);
  double total = 0;
  for (double x : gains) total += x;
  EXPECT_NEAR(total, si.objective, 1e-9 * std::abs(si.objective));

  char* constraints = nullptr;
  ASSERT_EQ(subsel_selection_constraints_json(sel, &constraints), SUBSEL_OK);
  EXPECT_TRUE(nlohmann::json::parse(constraints).contains("class"));
  subsel_string_free(constraints);

  const std::string run = dir.file("run");
  std::filesystem::create_directories(run);
  ASSERT_EQ(subsel_selection_write(sel, run.c_str()), SUBSEL_OK);
  double coverage = -1;
  ASSERT_EQ(subsel_report(run.c_str(), &coverage), SUBSEL_OK) << subsel_last_error();
  EXPECT_GE(coverage, 0.0);
  EXPECT_LE(coverage, 1.0);

  subsel_selection_free(sel);
  subsel_graph_free(g);
  subsel_dataset_free(loaded);
}

TEST(CApiTest, ErrorsCarryStatusAndMessage) {
  subsel_dataset_t* d = nullptr;
  EXPECT_EQ(subsel_dataset_load("/nonexistent/e.bin", "/nonexistent/p.bin", &d),
            SUBSEL_ERR_IO);
  EXPECT_EQ(d, nullptr);
  EXPECT_NE(std::strlen(subsel_last_error()), 0u);
  EXPECT_EQ(subsel_dataset_load(nullptr, nullptr, &d), SUBSEL_ERR_INVALID_ARGUMENT);
  EXPECT_STREQ(subsel_status_name(SUBSEL_ERR_VALIDATION), "VALIDATION");

  subsel_dataset_t* small = Generate(5, 1);
  subsel_graph_options go;
  subsel_graph_options_init(&go);
  subsel_graph_t* g = nullptr;
  EXPECT_EQ(subsel_graph_build(small, &go, &g), SUBSEL_ERR_INVALID_ARGUMENT);  // k >= n
  go.k = 2;
  ASSERT_EQ(subsel_graph_build(small, &go, &g), SUBSEL_OK);
  subsel_select_options so;
  subsel_select_options_init(&so);
  so.eta = 2.0;
  subsel_selection_t* sel = nullptr;
  EXPECT_EQ(subsel_select(small, g, &so, &sel), SUBSEL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(sel, nullptr);
  so.eta = 1.0;
  so.budget = 9;
  EXPECT_EQ(subsel_select(small, g, &so, &sel), SUBSEL_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(subsel_report("/nonexistent/run", nullptr), SUBSEL_ERR_IO);
  subsel_graph_free(g);
  subsel_dataset_free(small);
  subsel_dataset_free(nullptr);
}

TEST(CApiTest, VerifyReplay) {
  subsel_verify_options vo;
  subsel_verify_options_init(&vo);
  vo.replay_json = R"({"suite": "submodularity", "seed": 5, "inject_fault": true})";
  char* report = nullptr;
  int passed = -1;
  ASSERT_EQ(subsel_verify(&vo, &report, &passed), SUBSEL_OK) << subsel_last_error();
  EXPECT_EQ(passed, 0);
  const auto j = nlohmann::json::parse(report);
  EXPECT_EQ(j["suites"].size(), 1u);
  subsel_string_free(report);
  vo.replay_json = "{broken";
  EXPECT_EQ(subsel_verify(&vo, &report, &passed), SUBSEL_ERR_FORMAT);
}

}  // namespace
