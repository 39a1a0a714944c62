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

#ifndef SUBSEL_COMMON_H_
#define SUBSEL_COMMON_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace subsel {

// Sample index into the ground set {0, ..., n-1}.
using Index = std::int32_t;

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kFormat,
  kValidation,
  kTooLarge,
  kCacheMiss,
  kInternal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Dense row-major matrix of doubles.
struct RowMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  RowMatrix() = default;
  RowMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * cols, cols};
  }
  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data[i * cols + j];
  }
};

// Membership flags over the ground set; mask[i] != 0 iff i is in the set.
using SelectionMask = std::vector<std::uint8_t>;

inline SelectionMask MaskOf(std::span<const Index> set, std::size_t n) {
  SelectionMask mask(n, 0);
  for (Index i : set) {
    if (i < 0 || static_cast<std::size_t>(i) >= n) {
      throw Error(ErrorCode::kInvalidArgument,
                  "index " + std::to_string(i) + " out of range [0, " +
                      std::to_string(n) + ")");
    }
    mask[i] = 1;
  }
  return mask;
}

}  // namespace subsel

#endif  // SUBSEL_COMMON_H_
