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

#ifndef SUBSEL_SUITES_H_
#define SUBSEL_SUITES_H_

// Property and oracle suites shared by `subsel verify` and the acceptance
// test binary. Every case is reproducible from its seed; a failing case
// carries a JSON witness that RunReplay re-executes.

#include <cstdint>
#include <string>

#include "json.hpp"

namespace subsel::testkit {

// Independent recount of every selection made by the greedy suites.
struct FeasibilityTally {
  std::size_t checked = 0;
  std::size_t failures = 0;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  double seconds = 0.0;
  std::string detail;
  nlohmann::json witness;  // null when nothing failed
};

nlohmann::json ToJson(const SuiteResult& r);

inline constexpr std::uint64_t kDefaultSuiteSeed = 20260101;

// Diminishing returns for the uncertainty, diversity, triple and unified
// objectives on n <= 8. The +gamma diversity negative control must be caught
// on every instance with a positive-weight edge. With inject_fault the
// negative control replaces the diversity term in the main check.
SuiteResult RunSubmodularitySuite(int instances, bool inject_fault = false,
                                  std::uint64_t seed = kDefaultSuiteSeed);

// Single-element extensions never decrease any component (n <= 10), and the
// closed-form gain matches the two-evaluation difference.
SuiteResult RunMonotonicitySuite(int instances, bool inject_fault = false,
                                 std::uint64_t seed = kDefaultSuiteSeed);

// Greedy within 1/3, 1/2 and 1 - 1/e of the brute-force optimum with two, one
// and zero matroids (n <= 12, k <= 4).
SuiteResult RunApproximationSuite(int instances, FeasibilityTally* tally,
                                  std::uint64_t seed = kDefaultSuiteSeed);

// Priority-queue and exact greedy agree on the ordered selection (n <= 60).
SuiteResult RunEquivalenceSuite(int configs, FeasibilityTally* tally,
                                std::uint64_t seed = kDefaultSuiteSeed);

// Generated partition matroids satisfy the axioms; a non-matroid
// intersection is rejected.
SuiteResult RunMatroidAxiomSuite(int instances,
                                 std::uint64_t seed = kDefaultSuiteSeed);

// Heron area against the Gram-determinant oracle, near-degenerate included.
SuiteResult RunGeometrySuite(int triples, std::uint64_t seed = kDefaultSuiteSeed);

// Exact k-NN lists against the O(n^2) oracle.
SuiteResult RunKnnSuite(int instances, int max_n,
                        std::uint64_t seed = kDefaultSuiteSeed);

// Class balancing lowers the max/min per-class selected-count ratio on
// LONG_TAIL(100) data.
SuiteResult RunLongTailSuite(int seeds, std::uint64_t seed = kDefaultSuiteSeed);

// Runs select + report on a constructed instance where exactly 15% of class
// pairs carry boundary samples; the reported coverage must equal 0.15.
SuiteResult RunCoverageSuite(const std::string& work_dir);

// Re-executes the single case described by a witness.
SuiteResult RunReplay(const nlohmann::json& witness);

struct VerifyOptions {
  bool inject_fault = false;
  std::uint64_t seed = kDefaultSuiteSeed;
  std::string work_dir;  // scratch space for the coverage suite
};

// Desk-scale run of every suite; {"passed": bool, "suites": [...]}.
nlohmann::json RunVerify(const VerifyOptions& options);

}  // namespace subsel::testkit

#endif  // SUBSEL_SUITES_H_
