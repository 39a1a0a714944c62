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

/* C interface to the subsel selection library.
 *
 * Every function returns a subsel_status; on failure a description is
 * available from subsel_last_error() on the calling thread until the next
 * call on that thread. Handles are opaque and released with the matching
 * *_free function; passing NULL to a *_free function is a no-op. */
#ifndef SUBSEL_SUBSEL_H_
#define SUBSEL_SUBSEL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SUBSEL_EXPORT
#elif defined(SUBSEL_BUILDING_LIBRARY)
#define SUBSEL_EXPORT __attribute__((visibility("default")))
#else
#define SUBSEL_EXPORT
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum subsel_status {
  SUBSEL_OK = 0,
  SUBSEL_ERR_INVALID_ARGUMENT = 1,
  SUBSEL_ERR_IO = 2,
  SUBSEL_ERR_FORMAT = 3,
  SUBSEL_ERR_VALIDATION = 4,
  SUBSEL_ERR_TOO_LARGE = 5,
  SUBSEL_ERR_CACHE_MISS = 6,
  SUBSEL_ERR_INTERNAL = 7,
} subsel_status;

typedef struct subsel_dataset subsel_dataset_t;
typedef struct subsel_graph subsel_graph_t;
typedef struct subsel_selection subsel_selection_t;

SUBSEL_EXPORT const char* subsel_version(void);
SUBSEL_EXPORT const char* subsel_last_error(void);
SUBSEL_EXPORT const char* subsel_status_name(subsel_status status);
/* Releases strings returned through char** out-parameters. */
SUBSEL_EXPORT void subsel_string_free(char* s);

/* ---- Datasets ---------------------------------------------------------- */

typedef struct subsel_dataset_info {
  int64_t size;
  int64_t dim;
  int64_t num_classes;
  int embeddings_normalized;  /* 1 once rows have been scaled to unit length */
  int64_t renormalized_rows;
  char embeddings_sha256[65];
  char probabilities_sha256[65];
} subsel_dataset_info;

/* Paths ending in ".csv" are read as CSV, anything else as the binary
 * matrix format. */
SUBSEL_EXPORT subsel_status subsel_dataset_load(const char* embeddings_path,
                                                const char* probabilities_path,
                                                subsel_dataset_t** out);

typedef struct subsel_synthetic_spec {
  int64_t n;
  int64_t dim;
  int64_t num_classes;
  double cluster_spread;
  double temperature;      /* softmax temperature of the probabilities */
  int long_tail;           /* 0: uniform class sizes, 1: geometric decay */
  double imbalance_ratio;  /* largest / smallest class size when long_tail */
  uint64_t seed;
} subsel_synthetic_spec;

SUBSEL_EXPORT void subsel_synthetic_spec_init(subsel_synthetic_spec* spec);
SUBSEL_EXPORT subsel_status subsel_dataset_generate(
    const subsel_synthetic_spec* spec, subsel_dataset_t** out);
SUBSEL_EXPORT subsel_status subsel_dataset_save(const subsel_dataset_t* dataset,
                                                const char* embeddings_path,
                                                const char* probabilities_path);
SUBSEL_EXPORT subsel_status subsel_dataset_info_get(
    const subsel_dataset_t* dataset, subsel_dataset_info* info);
SUBSEL_EXPORT void subsel_dataset_free(subsel_dataset_t* dataset);

/* ---- Graphs ------------------------------------------------------------- */

typedef enum subsel_knn_method {
  SUBSEL_KNN_EXACT = 0,
  SUBSEL_KNN_RANDOM_PROJECTION = 1,
} subsel_knn_method;

typedef enum subsel_threshold_kind {
  SUBSEL_THRESHOLD_ABSOLUTE = 0,
  SUBSEL_THRESHOLD_PERCENTILE = 1,
} subsel_threshold_kind;

typedef struct subsel_graph_options {
  int64_t k;
  subsel_knn_method method;
  int num_threads;  /* 0: hardware concurrency */
  int num_trees;
  int64_t leaf_size;
  uint64_t seed;
  subsel_threshold_kind threshold_kind;
  double threshold_value;
  const char* cache_path;  /* NULL or "" disables the cache */
} subsel_graph_options;

typedef struct subsel_graph_info {
  int64_t size;
  int64_t num_edges;
  int64_t num_triangles;
  int64_t num_thin;
  double area_threshold;
  double knn_seconds;
  double clique_seconds;
  int from_cache;
} subsel_graph_info;

SUBSEL_EXPORT void subsel_graph_options_init(subsel_graph_options* options);
SUBSEL_EXPORT subsel_status subsel_graph_build(const subsel_dataset_t* dataset,
                                               const subsel_graph_options* options,
                                               subsel_graph_t** out);
SUBSEL_EXPORT subsel_status subsel_graph_info_get(const subsel_graph_t* graph,
                                                  subsel_graph_info* info);
SUBSEL_EXPORT void subsel_graph_free(subsel_graph_t* graph);

/* ---- Selection ---------------------------------------------------------- */

typedef enum subsel_solver {
  SUBSEL_SOLVER_PRIORITY_QUEUE = 0,
  SUBSEL_SOLVER_EXACT = 1,
} subsel_solver;

typedef struct subsel_select_options {
  double lambda_uncertainty;
  double lambda_diversity;
  double lambda_triple;
  double gamma;
  double eta;
  double tau;
  int64_t budget;          /* absolute k; 0 means use budget_fraction */
  double budget_fraction;
  int class_balance;
  int boundary_balance;
  subsel_solver solver;
} subsel_select_options;

typedef enum subsel_termination {
  SUBSEL_TERMINATION_COMPLETED = 0,
  SUBSEL_TERMINATION_EXHAUSTED = 1,
} subsel_termination;

typedef struct subsel_selection_info {
  int64_t budget;
  double budget_fraction;
  int64_t num_selected;
  double objective;
  subsel_termination termination;
  double selection_seconds;
} subsel_selection_info;

SUBSEL_EXPORT void subsel_select_options_init(subsel_select_options* options);
SUBSEL_EXPORT subsel_status subsel_select(const subsel_dataset_t* dataset,
                                          const subsel_graph_t* graph,
                                          const subsel_select_options* options,
                                          subsel_selection_t** out);
SUBSEL_EXPORT subsel_status subsel_selection_info_get(
    const subsel_selection_t* selection, subsel_selection_info* info);
/* Copies up to capacity indices (in selection order) and gains into the
 * caller's buffers; either buffer may be NULL. */
SUBSEL_EXPORT subsel_status subsel_selection_copy(
    const subsel_selection_t* selection, int64_t* indices, double* gains,
    size_t capacity);
/* Writes selection.json, selected.txt and annotations.json into run_dir. */
SUBSEL_EXPORT subsel_status subsel_selection_write(
    const subsel_selection_t* selection, const char* run_dir);
/* Constraint usage as a JSON document; free with subsel_string_free. */
SUBSEL_EXPORT subsel_status subsel_selection_constraints_json(
    const subsel_selection_t* selection, char** json);
SUBSEL_EXPORT void subsel_selection_free(subsel_selection_t* selection);

/* ---- Reports and verification -------------------------------------------- */

/* Reads the artifacts in run_dir and writes run_dir/report/. */
SUBSEL_EXPORT subsel_status subsel_report(const char* run_dir,
                                          double* boundary_coverage);

typedef struct subsel_verify_options {
  int inject_fault;
  uint64_t seed;
  const char* work_dir;     /* NULL: system temporary directory */
  const char* replay_json;  /* non-NULL: re-run a single recorded witness */
} subsel_verify_options;

SUBSEL_EXPORT void subsel_verify_options_init(subsel_verify_options* options);
/* Runs the property suites. *report receives a JSON document (free with
 * subsel_string_free) and *passed is 1 when every suite passed. */
SUBSEL_EXPORT subsel_status subsel_verify(const subsel_verify_options* options,
                                          char** report, int* passed);

/* Hex SHA-256 digests, NUL-terminated in a 65-byte buffer. */
SUBSEL_EXPORT subsel_status subsel_file_sha256(const char* path, char out[65]);
SUBSEL_EXPORT subsel_status subsel_sha256(const void* data, size_t size,
                                          char out[65]);

#ifdef __cplusplus
}  /* extern "C" */
#endif

#endif  /* SUBSEL_SUBSEL_H_ */
