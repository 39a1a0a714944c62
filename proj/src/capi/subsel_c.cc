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
#include <exception>
#include <new>
#include <string>
#include <utility>

#include "json.hpp"
#include "subsel/dataset.h"
#include "subsel/hash.h"
#include "subsel/pipeline.h"
#include "subsel/report.h"
#include "subsel/suites.h"
#include "subsel/testkit.h"

struct subsel_dataset {
  subsel::DatasetInputs dataset;
};

struct subsel_graph {
  subsel::GraphArtifacts artifacts;
};

struct subsel_selection {
  subsel::SelectionRun run;
  std::size_t num_classes = 0;
};

namespace {

thread_local std::string g_last_error;

subsel_status ToStatus(subsel::ErrorCode code) {
  switch (code) {
    case subsel::ErrorCode::kInvalidArgument: return SUBSEL_ERR_INVALID_ARGUMENT;
    case subsel::ErrorCode::kIo: return SUBSEL_ERR_IO;
    case subsel::ErrorCode::kFormat: return SUBSEL_ERR_FORMAT;
    case subsel::ErrorCode::kValidation: return SUBSEL_ERR_VALIDATION;
    case subsel::ErrorCode::kTooLarge: return SUBSEL_ERR_TOO_LARGE;
    case subsel::ErrorCode::kCacheMiss: return SUBSEL_ERR_CACHE_MISS;
    case subsel::ErrorCode::kInternal: return SUBSEL_ERR_INTERNAL;
  }
  return SUBSEL_ERR_INTERNAL;
}

subsel_status Fail(subsel_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, translating exceptions into status codes. Nothing may escape
// across the C boundary.
template <typename Fn>
subsel_status Guard(Fn&& fn) {
  try {
    g_last_error.clear();
    fn();
    return SUBSEL_OK;
  } catch (const subsel::Error& e) {
    return Fail(ToStatus(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return Fail(SUBSEL_ERR_FORMAT, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(SUBSEL_ERR_TOO_LARGE, "out of memory");
  } catch (const std::exception& e) {
    return Fail(SUBSEL_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(SUBSEL_ERR_INTERNAL, "unknown error");
  }
}

void Require(bool ok, const char* what) {
  if (!ok) {
    throw subsel::Error(subsel::ErrorCode::kInvalidArgument,
                        std::string(what) + " must not be null");
  }
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void CopyHash(const std::string& hex, char out[65]) {
  std::memset(out, 0, 65);
  std::memcpy(out, hex.data(), std::min<std::size_t>(hex.size(), 64));
}

}  // namespace

extern "C" {

const char* subsel_version(void) { return "1.0.0"; }

const char* subsel_last_error(void) { return g_last_error.c_str(); }

const char* subsel_status_name(subsel_status status) {
  switch (status) {
    case SUBSEL_OK: return "OK";
    case SUBSEL_ERR_INVALID_ARGUMENT: return "INVALID_ARGUMENT";
    case SUBSEL_ERR_IO: return "IO";
    case SUBSEL_ERR_FORMAT: return "FORMAT";
    case SUBSEL_ERR_VALIDATION: return "VALIDATION";
    case SUBSEL_ERR_TOO_LARGE: return "TOO_LARGE";
    case SUBSEL_ERR_CACHE_MISS: return "CACHE_MISS";
    case SUBSEL_ERR_INTERNAL: return "INTERNAL";
  }
  return "UNKNOWN";
}

void subsel_string_free(char* s) { std::free(s); }

subsel_status subsel_dataset_load(const char* embeddings_path,
                                  const char* probabilities_path,
                                  subsel_dataset_t** out) {
  return Guard([&] {
    Require(embeddings_path && probabilities_path, "dataset path");
    Require(out != nullptr, "out");
    *out = nullptr;
    *out = new subsel_dataset{
        subsel::LoadDataset(embeddings_path, probabilities_path)};
  });
}

void subsel_synthetic_spec_init(subsel_synthetic_spec* spec) {
  if (!spec) return;
  const subsel::testkit::SyntheticSpec d;
  spec->n = d.n;
  spec->dim = static_cast<int64_t>(d.dim);
  spec->num_classes = static_cast<int64_t>(d.num_classes);
  spec->cluster_spread = d.cluster_spread;
  spec->temperature = d.temperature;
  spec->long_tail = 0;
  spec->imbalance_ratio = d.imbalance_ratio;
  spec->seed = d.seed;
}

subsel_status subsel_dataset_generate(const subsel_synthetic_spec* spec,
                                      subsel_dataset_t** out) {
  return Guard([&] {
    Require(spec && out, "argument");
    *out = nullptr;
    if (spec->n <= 0 || spec->n > INT32_MAX || spec->dim <= 0 ||
        spec->num_classes <= 0) {
      throw subsel::Error(subsel::ErrorCode::kInvalidArgument,
                          "n, dim and num_classes must be positive");
    }
    subsel::testkit::SyntheticSpec s;
    s.n = static_cast<subsel::Index>(spec->n);
    s.dim = static_cast<std::size_t>(spec->dim);
    s.num_classes = static_cast<std::size_t>(spec->num_classes);
    s.cluster_spread = spec->cluster_spread;
    s.temperature = spec->temperature;
    s.proportions = spec->long_tail ? subsel::testkit::Proportions::kLongTail
                                    : subsel::testkit::Proportions::kUniform;
    s.imbalance_ratio = spec->imbalance_ratio;
    s.seed = spec->seed;
    *out = new subsel_dataset{subsel::testkit::GenerateInstance(s).dataset};
  });
}

subsel_status subsel_dataset_save(const subsel_dataset_t* dataset,
                                  const char* embeddings_path,
                                  const char* probabilities_path) {
  return Guard([&] {
    Require(dataset && embeddings_path && probabilities_path, "argument");
    subsel::WriteMatrixFile(embeddings_path, subsel::MatrixKind::kEmbeddings,
                            dataset->dataset.embeddings());
    subsel::WriteMatrixFile(probabilities_path, subsel::MatrixKind::kProbabilities,
                            dataset->dataset.probability_matrix());
  });
}

subsel_status subsel_dataset_info_get(const subsel_dataset_t* dataset,
                                      subsel_dataset_info* info) {
  return Guard([&] {
    Require(dataset && info, "argument");
    const auto& d = dataset->dataset;
    info->size = d.size();
    info->dim = static_cast<int64_t>(d.dim());
    info->num_classes = static_cast<int64_t>(d.num_classes());
    info->embeddings_normalized = d.metadata().embeddings_normalized ? 1 : 0;
    info->renormalized_rows = static_cast<int64_t>(d.metadata().renormalized_rows);
    CopyHash(d.metadata().embeddings_sha256, info->embeddings_sha256);
    CopyHash(d.metadata().probabilities_sha256, info->probabilities_sha256);
  });
}

void subsel_dataset_free(subsel_dataset_t* dataset) { delete dataset; }

void subsel_graph_options_init(subsel_graph_options* options) {
  if (!options) return;
  const subsel::KnnOptions knn;
  const subsel::ThresholdSpec thr;
  options->k = knn.k;
  options->method = SUBSEL_KNN_EXACT;
  options->num_threads = knn.num_threads;
  options->num_trees = knn.num_trees;
  options->leaf_size = static_cast<int64_t>(knn.leaf_size);
  options->seed = knn.seed;
  options->threshold_kind = SUBSEL_THRESHOLD_PERCENTILE;
  options->threshold_value = thr.value;
  options->cache_path = nullptr;
}

subsel_status subsel_graph_build(const subsel_dataset_t* dataset,
                                 const subsel_graph_options* options,
                                 subsel_graph_t** out) {
  return Guard([&] {
    Require(dataset && options && out, "argument");
    *out = nullptr;
    if (options->k < 1 || options->k > INT32_MAX || options->leaf_size < 1) {
      throw subsel::Error(subsel::ErrorCode::kInvalidArgument,
                          "k and leaf_size must be positive");
    }
    subsel::KnnOptions knn;
    knn.k = static_cast<subsel::Index>(options->k);
    knn.method = options->method == SUBSEL_KNN_RANDOM_PROJECTION
                     ? subsel::KnnMethod::kRandomProjection
                     : subsel::KnnMethod::kExact;
    knn.num_threads = options->num_threads;
    knn.num_trees = options->num_trees;
    knn.leaf_size = static_cast<std::size_t>(options->leaf_size);
    knn.seed = options->seed;
    const subsel::ThresholdSpec thr =
        options->threshold_kind == SUBSEL_THRESHOLD_ABSOLUTE
            ? subsel::ThresholdSpec::Absolute(options->threshold_value)
            : subsel::ThresholdSpec::Percentile(options->threshold_value);
    const std::string cache = options->cache_path ? options->cache_path : "";
    *out = new subsel_graph{
        cache.empty() ? subsel::BuildGraphArtifacts(dataset->dataset, knn, thr)
                      : subsel::BuildOrLoadGraph(dataset->dataset, knn, thr, cache)};
  });
}

subsel_status subsel_graph_info_get(const subsel_graph_t* graph,
                                    subsel_graph_info* info) {
  return Guard([&] {
    Require(graph && info, "argument");
    const auto& a = graph->artifacts;
    info->size = a.graph.size();
    info->num_edges = static_cast<int64_t>(a.graph.num_edges());
    info->num_triangles = static_cast<int64_t>(a.cliques.triples().size());
    info->num_thin = static_cast<int64_t>(a.cliques.num_thin());
    info->area_threshold = a.cliques.area_threshold();
    info->knn_seconds = a.knn_seconds;
    info->clique_seconds = a.clique_seconds;
    info->from_cache = a.from_cache ? 1 : 0;
  });
}

void subsel_graph_free(subsel_graph_t* graph) { delete graph; }

void subsel_select_options_init(subsel_select_options* options) {
  if (!options) return;
  const subsel::SelectOptions d;
  options->lambda_uncertainty = d.weights.lambda_uncertainty;
  options->lambda_diversity = d.weights.lambda_diversity;
  options->lambda_triple = d.weights.lambda_triple;
  options->gamma = d.weights.gamma;
  options->eta = d.weights.eta;
  options->tau = d.tau;
  options->budget = d.budget;
  options->budget_fraction = d.budget_fraction;
  options->class_balance = d.class_balance ? 1 : 0;
  options->boundary_balance = d.boundary_balance ? 1 : 0;
  options->solver = SUBSEL_SOLVER_PRIORITY_QUEUE;
}

subsel_status subsel_select(const subsel_dataset_t* dataset,
                            const subsel_graph_t* graph,
                            const subsel_select_options* options,
                            subsel_selection_t** out) {
  return Guard([&] {
    Require(dataset && graph && options && out, "argument");
    *out = nullptr;
    if (graph->artifacts.graph.size() != dataset->dataset.size()) {
      throw subsel::Error(subsel::ErrorCode::kInvalidArgument,
                          "graph and dataset sizes differ");
    }
    if (options->budget < 0 || options->budget > INT32_MAX) {
      throw subsel::Error(subsel::ErrorCode::kInvalidArgument,
                          "budget out of range");
    }
    subsel::SelectOptions o;
    o.weights.lambda_uncertainty = options->lambda_uncertainty;
    o.weights.lambda_diversity = options->lambda_diversity;
    o.weights.lambda_triple = options->lambda_triple;
    o.weights.gamma = options->gamma;
    o.weights.eta = options->eta;
    o.tau = options->tau;
    o.budget = static_cast<subsel::Index>(options->budget);
    o.budget_fraction = options->budget_fraction;
    o.class_balance = options->class_balance != 0;
    o.boundary_balance = options->boundary_balance != 0;
    o.solver = options->solver == SUBSEL_SOLVER_EXACT
                   ? subsel::Solver::kExact
                   : subsel::Solver::kPriorityQueue;
    *out = new subsel_selection{
        subsel::RunSelection(dataset->dataset, graph->artifacts.graph,
                             graph->artifacts.cliques, o),
        dataset->dataset.num_classes()};
  });
}

subsel_status subsel_selection_info_get(const subsel_selection_t* selection,
                                        subsel_selection_info* info) {
  return Guard([&] {
    Require(selection && info, "argument");
    const auto& run = selection->run;
    info->budget = run.budget.budget;
    info->budget_fraction = run.budget.fraction;
    info->num_selected = static_cast<int64_t>(run.result.selected.size());
    info->objective = run.result.objective_value;
    info->termination = run.result.termination == subsel::Termination::kExhausted
                            ? SUBSEL_TERMINATION_EXHAUSTED
                            : SUBSEL_TERMINATION_COMPLETED;
    info->selection_seconds = run.selection_seconds;
  });
}

subsel_status subsel_selection_copy(const subsel_selection_t* selection,
                                    int64_t* indices, double* gains,
                                    size_t capacity) {
  return Guard([&] {
    Require(selection != nullptr, "selection");
    const auto& r = selection->run.result;
    const std::size_t m = std::min(capacity, r.selected.size());
    for (std::size_t i = 0; i < m; ++i) {
      if (indices) indices[i] = r.selected[i];
      if (gains) gains[i] = r.gains[i];
    }
  });
}

subsel_status subsel_selection_write(const subsel_selection_t* selection,
                                     const char* run_dir) {
  return Guard([&] {
    Require(selection && run_dir, "argument");
    subsel::WriteSelectionArtifacts(run_dir, selection->run.result);
    subsel::WriteAnnotations(run_dir, selection->run.annotations,
                             selection->num_classes);
  });
}

subsel_status subsel_selection_constraints_json(const subsel_selection_t* selection,
                                                char** json) {
  return Guard([&] {
    Require(selection && json, "argument");
    *json = nullptr;
    const auto doc =
        nlohmann::json::parse(subsel::SelectionToJson(selection->run.result));
    *json = CopyString(doc.at("constraints").dump(2));
  });
}

void subsel_selection_free(subsel_selection_t* selection) { delete selection; }

subsel_status subsel_report(const char* run_dir, double* boundary_coverage) {
  return Guard([&] {
    Require(run_dir != nullptr, "run_dir");
    const subsel::ReportSummary s = subsel::WriteReport(run_dir);
    if (boundary_coverage) *boundary_coverage = s.boundary_coverage;
  });
}

void subsel_verify_options_init(subsel_verify_options* options) {
  if (!options) return;
  options->inject_fault = 0;
  options->seed = subsel::testkit::kDefaultSuiteSeed;
  options->work_dir = nullptr;
  options->replay_json = nullptr;
}

subsel_status subsel_verify(const subsel_verify_options* options, char** report,
                            int* passed) {
  return Guard([&] {
    Require(options && report && passed, "argument");
    *report = nullptr;
    *passed = 0;
    nlohmann::json doc;
    if (options->replay_json) {
      nlohmann::json witness = nlohmann::json::parse(options->replay_json);
      if (options->inject_fault) witness["inject_fault"] = true;
      const auto r = subsel::testkit::RunReplay(witness);
      doc["suites"] = nlohmann::json::array({subsel::testkit::ToJson(r)});
      doc["passed"] = r.passed;
    } else {
      subsel::testkit::VerifyOptions v;
      v.inject_fault = options->inject_fault != 0;
      v.seed = options->seed;
      if (options->work_dir) v.work_dir = options->work_dir;
      doc = subsel::testkit::RunVerify(v);
    }
    *passed = doc.at("passed").get<bool>() ? 1 : 0;
    *report = CopyString(doc.dump(2));
  });
}

subsel_status subsel_file_sha256(const char* path, char out[65]) {
  return Guard([&] {
    Require(path && out, "argument");
    CopyHash(subsel::Sha256File(path), out);
  });
}

subsel_status subsel_sha256(const void* data, size_t size, char out[65]) {
  return Guard([&] {
    Require(out != nullptr && (data != nullptr || size == 0), "argument");
    CopyHash(subsel::Sha256Hex(std::span<const std::uint8_t>(
                 static_cast<const std::uint8_t*>(data), size)),
             out);
  });
}

}  // extern "C"
