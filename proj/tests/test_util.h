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

#ifndef SUBSEL_TESTS_TEST_UTIL_H_
#define SUBSEL_TESTS_TEST_UTIL_H_

#include <string>
#include <vector>

#include "subsel/common.h"
#include "subsel/dataset.h"
#include "temp_dir.h"

namespace subsel::test {

inline RowMatrix Rows(const std::vector<std::vector<double>>& rows) {
  RowMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline DatasetInputs MakeDataset(const std::vector<std::vector<double>>& emb,
                                 const std::vector<std::vector<double>>& prob) {
  return DatasetInputs::Create(Rows(emb), Rows(prob));
}

// Uniform probabilities; for tests that only care about geometry.
inline DatasetInputs GeometryOnly(const std::vector<std::vector<double>>& emb) {
  return MakeDataset(emb, std::vector<std::vector<double>>(emb.size(), {0.5, 0.5}));
}

}  // namespace subsel::test

#endif  // SUBSEL_TESTS_TEST_UTIL_H_
