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

#include "subsel/matroid.h"

#include <cmath>
#include <map>

namespace subsel {

PartitionMatroid::PartitionMatroid(std::string name,
                                   std::vector<std::int32_t> cell_of,
                                   std::vector<std::int64_t> capacity,
                                   std::vector<std::string> cell_labels)
    : name_(std::move(name)),
      cell_of_(std::move(cell_of)),
      capacity_(std::move(capacity)),
      labels_(std::move(cell_labels)) {
  for (std::size_t c = 0; c < capacity_.size(); ++c) {
    if (capacity_[c] < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  name_ + ": cell " + std::to_string(c) + " has capacity " +
                      std::to_string(capacity_[c]) + " < 1");
    }
  }
  for (std::int32_t c : cell_of_) {
    if (c != kUnconstrained &&
        (c < 0 || static_cast<std::size_t>(c) >= capacity_.size())) {
      throw Error(ErrorCode::kInvalidArgument,
                  name_ + ": cell id " + std::to_string(c) + " out of range");
    }
  }
  if (labels_.empty()) {
    for (std::size_t c = 0; c < capacity_.size(); ++c) {
      labels_.push_back(std::to_string(c));
    }
  } else if (labels_.size() != capacity_.size()) {
    throw Error(ErrorCode::kInvalidArgument, name_ + ": label count mismatch");
  }
}

bool PartitionMatroid::IsIndependent(std::span<const Index> set) const {
  const SelectionMask mask = MaskOf(set, cell_of_.size());
  std::vector<std::int64_t> tally(capacity_.size(), 0);
  for (Index e = 0; e < ground_size(); ++e) {
    if (!mask[e] || cell_of_[e] == kUnconstrained) continue;
    if (++tally[cell_of_[e]] > capacity_[cell_of_[e]]) return false;
  }
  return true;
}

std::int64_t CeilTolerant(double x) {
  return static_cast<std::int64_t>(std::ceil(x - 1e-9));
}

std::int64_t RoundTolerant(double x) {
  return static_cast<std::int64_t>(std::floor(x + 0.5 + 1e-9));
}

PartitionMatroid ClassMatroid(const SampleAnnotations& annotations,
                              std::size_t num_classes, double fraction, Index n) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fraction must lie in (0, 1]");
  }
  if (num_classes < 1) {
    throw Error(ErrorCode::kInvalidArgument, "num_classes must be >= 1");
  }
  const std::int64_t cap = std::max<std::int64_t>(
      1, CeilTolerant(fraction * static_cast<double>(n) /
                      static_cast<double>(num_classes)));
  std::vector<std::int32_t> cells(annotations.pseudo_label.begin(),
                                  annotations.pseudo_label.end());
  return PartitionMatroid("class", std::move(cells),
                          std::vector<std::int64_t>(num_classes, cap));
}

PartitionMatroid BoundaryMatroid(const SampleAnnotations& annotations,
                                 double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "fraction must lie in (0, 1]");
  }
  std::map<ClassPair, std::int64_t> sizes;
  for (const auto& b : annotations.boundary) {
    if (b) ++sizes[*b];
  }
  std::map<ClassPair, std::int32_t> cell_id;
  std::vector<std::int64_t> caps;
  std::vector<std::string> labels;
  for (const auto& [pair, count] : sizes) {
    cell_id.emplace(pair, static_cast<std::int32_t>(caps.size()));
    caps.push_back(std::max<std::int64_t>(
        1, RoundTolerant(fraction * static_cast<double>(count))));
    labels.push_back(std::to_string(pair.first) + "-" +
                     std::to_string(pair.second));
  }
  std::vector<std::int32_t> cells;
  cells.reserve(annotations.boundary.size());
  for (const auto& b : annotations.boundary) {
    cells.push_back(b ? cell_id.at(*b) : kUnconstrained);
  }
  return PartitionMatroid("boundary", std::move(cells), std::move(caps),
                          std::move(labels));
}

MatroidIntersection::MatroidIntersection(Index n,
                                         std::vector<PartitionMatroid> matroids)
    : n_(n) {
  for (auto& m : matroids) Add(std::move(m));
}

void MatroidIntersection::Add(PartitionMatroid m) {
  if (m.ground_size() != n_) {
    throw Error(ErrorCode::kInvalidArgument,
                "matroid '" + m.name() + "' has ground set size " +
                    std::to_string(m.ground_size()) + ", expected " +
                    std::to_string(n_));
  }
  matroids_.push_back(std::move(m));
}

bool MatroidIntersection::IsIndependent(std::span<const Index> set) const {
  for (const auto& m : matroids_) {
    if (!m.IsIndependent(set)) return false;
  }
  return true;
}

IntersectionCursor::IntersectionCursor(const MatroidIntersection& matroids)
    : matroids_(&matroids), member_(matroids.ground_size(), 0) {
  counts_.reserve(matroids.size());
  for (const auto& m : matroids.matroids()) {
    counts_.emplace_back(m.num_cells(), 0);
  }
}

bool IntersectionCursor::IsIndependentWith(Index e) const {
  for (std::size_t m = 0; m < counts_.size(); ++m) {
    const std::int32_t cell = (*matroids_)[m].cell_of(e);
    if (cell == kUnconstrained) continue;
    if (counts_[m][cell] + 1 > (*matroids_)[m].capacity(cell)) return false;
  }
  return true;
}

void IntersectionCursor::Commit(Index e) {
  if (member_[e]) {
    throw std::logic_error("element " + std::to_string(e) +
                           " committed twice");
  }
  if (!IsIndependentWith(e)) {
    throw std::logic_error("committing element " + std::to_string(e) +
                           " violates a matroid capacity");
  }
  member_[e] = 1;
  ++committed_;
  for (std::size_t m = 0; m < counts_.size(); ++m) {
    const std::int32_t cell = (*matroids_)[m].cell_of(e);
    if (cell != kUnconstrained) ++counts_[m][cell];
  }
}

}  // namespace subsel
