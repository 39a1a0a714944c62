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

#ifndef SUBSEL_MATROID_H_
#define SUBSEL_MATROID_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "subsel/common.h"
#include "subsel/dataset.h"

namespace subsel {

// Cell id of elements that no cap applies to.
inline constexpr std::int32_t kUnconstrained = -1;

// Independent sets are those with at most capacity[c] elements in every
// cell c. Elements in kUnconstrained are never counted.
class PartitionMatroid {
 public:
  PartitionMatroid(std::string name, std::vector<std::int32_t> cell_of,
                   std::vector<std::int64_t> capacity,
                   std::vector<std::string> cell_labels = {});

  Index ground_size() const { return static_cast<Index>(cell_of_.size()); }
  std::size_t num_cells() const { return capacity_.size(); }
  std::int32_t cell_of(Index e) const { return cell_of_[e]; }
  std::int64_t capacity(std::size_t cell) const { return capacity_[cell]; }
  const std::vector<std::int64_t>& capacities() const { return capacity_; }
  const std::string& name() const { return name_; }
  const std::string& label(std::size_t cell) const { return labels_[cell]; }

  // From-scratch tally; duplicates in `set` count once.
  bool IsIndependent(std::span<const Index> set) const;

 private:
  std::string name_;
  std::vector<std::int32_t> cell_of_;
  std::vector<std::int64_t> capacity_;
  std::vector<std::string> labels_;
};

// Rounding helpers shared by the cap formulas; a 1e-9 slack absorbs
// representation error such as 0.3 * 100 = 30.000000000000004.
std::int64_t CeilTolerant(double x);
std::int64_t RoundTolerant(double x);

// Cells are pseudo-labels; every cap is ceil(fraction * n / L).
PartitionMatroid ClassMatroid(const SampleAnnotations& annotations,
                              std::size_t num_classes, double fraction, Index n);

// Cells are decision boundaries (sorted class pairs); samples without a
// boundary are unconstrained. Cap of boundary b is max(1, round(fraction * n_b)).
PartitionMatroid BoundaryMatroid(const SampleAnnotations& annotations,
                                 double fraction);

class MatroidIntersection {
 public:
  MatroidIntersection() = default;
  explicit MatroidIntersection(Index n) : n_(n) {}
  MatroidIntersection(Index n, std::vector<PartitionMatroid> matroids);

  void Add(PartitionMatroid m);

  Index ground_size() const { return n_; }
  std::size_t size() const { return matroids_.size(); }
  const PartitionMatroid& operator[](std::size_t i) const { return matroids_[i]; }
  const std::vector<PartitionMatroid>& matroids() const { return matroids_; }

  bool IsIndependent(std::span<const Index> set) const;

 private:
  Index n_ = 0;
  std::vector<PartitionMatroid> matroids_;
};

// Running per-cell counts of a growing independent set.
class IntersectionCursor {
 public:
  explicit IntersectionCursor(const MatroidIntersection& matroids);

  // True iff S + e stays within every cap. Does not mutate.
  bool IsIndependentWith(Index e) const;
  // Requires IsIndependentWith(e) and e not yet committed; violating the
  // precondition is a programming error and throws std::logic_error.
  void Commit(Index e);

  bool contains(Index e) const { return member_[e] != 0; }
  std::size_t size() const { return committed_; }
  std::int64_t count(std::size_t matroid, std::size_t cell) const {
    return counts_[matroid][cell];
  }

 private:
  const MatroidIntersection* matroids_;
  std::vector<std::vector<std::int64_t>> counts_;
  std::vector<std::uint8_t> member_;
  std::size_t committed_ = 0;
};

}  // namespace subsel

#endif  // SUBSEL_MATROID_H_
