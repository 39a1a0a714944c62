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

#ifndef SUBSEL_DATASET_H_
#define SUBSEL_DATASET_H_

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "subsel/common.h"

namespace subsel {

inline constexpr double kProbabilitySumTolerance = 1e-4;
inline constexpr double kNegativeProbabilityTolerance = 1e-9;
inline constexpr double kDefaultTau = 0.05;

struct DatasetMetadata {
  bool embeddings_normalized = false;
  // Number of probability rows divided by their sum during validation.
  std::size_t renormalized_rows = 0;
  // Content hashes of the sources, when they came from files or were
  // serialised. Used as graph-cache keys and in run manifests.
  std::string embeddings_sha256;
  std::string probabilities_sha256;
};

// Validated per-sample embeddings (L2-normalised rows) and class
// distributions. Immutable after construction.
class DatasetInputs {
 public:
  // Validates shapes and values, renormalises probability rows that sum to
  // 1 within tolerance, and L2-normalises every embedding row. Throws
  // Error(kValidation) naming the offending row.
  static DatasetInputs Create(RowMatrix embeddings, RowMatrix probabilities);

  Index size() const { return static_cast<Index>(embeddings_.rows); }
  std::size_t dim() const { return embeddings_.cols; }
  std::size_t num_classes() const { return probabilities_.cols; }

  std::span<const double> embedding(Index i) const { return embeddings_.row(i); }
  std::span<const double> probabilities(Index i) const {
    return probabilities_.row(i);
  }
  const RowMatrix& embeddings() const { return embeddings_; }
  const RowMatrix& probability_matrix() const { return probabilities_; }

  const DatasetMetadata& metadata() const { return metadata_; }
  DatasetMetadata& mutable_metadata() { return metadata_; }

 private:
  DatasetInputs() = default;

  RowMatrix embeddings_;
  RowMatrix probabilities_;
  DatasetMetadata metadata_;
};

// Unordered class pair, stored with first < second.
struct ClassPair {
  std::int32_t first = 0;
  std::int32_t second = 0;

  static ClassPair Of(std::int32_t a, std::int32_t b) {
    return a < b ? ClassPair{a, b} : ClassPair{b, a};
  }
  auto operator<=>(const ClassPair&) const = default;
};

struct SampleAnnotations {
  // Margin utility u(i) = 1 - (p_best - p_second), in [0, 1].
  std::vector<double> margin_utility;
  std::vector<std::int32_t> pseudo_label;
  // Decision boundary {best, second} when u(i) > tau, otherwise nullopt.
  std::vector<std::optional<ClassPair>> boundary;
  double tau = kDefaultTau;

  Index size() const { return static_cast<Index>(margin_utility.size()); }
};

// Margin utility, pseudo-label and boundary of every sample. Argmax ties go
// to the lower class index.
SampleAnnotations Annotate(const DatasetInputs& dataset, double tau);

struct BoundaryHistogram {
  std::map<ClassPair, std::size_t> counts;
  // |pairs with count > 0| / C(L, 2).
  double coverage = 0.0;
};

BoundaryHistogram ComputeBoundaryHistogram(const SampleAnnotations& annotations,
                                           std::size_t num_classes);

// File formats. Paths ending in ".csv" are read and written as CSV, anything
// else as the little-endian binary container.
enum class MatrixKind { kEmbeddings, kProbabilities };

RowMatrix ReadMatrixFile(const std::string& path, MatrixKind kind);
void WriteMatrixFile(const std::string& path, MatrixKind kind,
                     const RowMatrix& matrix);
// Binary container bytes (header + float32 payload).
std::vector<std::uint8_t> EncodeBinaryMatrix(MatrixKind kind,
                                             const RowMatrix& matrix);
RowMatrix DecodeBinaryMatrix(std::span<const std::uint8_t> bytes,
                             MatrixKind kind, const std::string& origin);

// Loads and validates both files; errors name the offending row.
DatasetInputs LoadDataset(const std::string& embeddings_path,
                          const std::string& probabilities_path);

// annotations.json: arrays `u`, `pseudo_label`, `boundary` (pairs or null).
std::string AnnotationsToJson(const SampleAnnotations& annotations,
                              std::size_t num_classes);
SampleAnnotations AnnotationsFromJson(const std::string& text,
                                      std::size_t* num_classes);

}  // namespace subsel

#endif  // SUBSEL_DATASET_H_
