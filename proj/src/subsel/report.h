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

#ifndef SUBSEL_REPORT_H_
#define SUBSEL_REPORT_H_

#include <string>
#include <vector>

#include "subsel/dataset.h"
#include "subsel/greedy.h"

namespace subsel {

// Fixed artifact names inside a run directory.
inline constexpr char kSelectionJson[] = "selection.json";
inline constexpr char kSelectedTxt[] = "selected.txt";
inline constexpr char kAnnotationsJson[] = "annotations.json";
inline constexpr char kManifestJson[] = "manifest.json";
inline constexpr char kReportDir[] = "report";

// {"selected", "gains", "objective", "termination", "constraints"}.
std::string SelectionToJson(const SelectionResult& result);

struct StoredSelection {
  std::vector<Index> selected;
  std::vector<double> gains;
  double objective = 0.0;
  std::string termination;
};
StoredSelection SelectionFromJson(const std::string& text);

// selection.json and selected.txt (one index per line, selection order).
void WriteSelectionArtifacts(const std::string& run_dir,
                             const SelectionResult& result);
void WriteAnnotations(const std::string& run_dir,
                      const SampleAnnotations& annotations,
                      std::size_t num_classes);

struct ReportSummary {
  double boundary_coverage = 0.0;
  std::size_t covered_pairs = 0;
  std::size_t samples_on_boundaries = 0;
  std::size_t selected = 0;
};

// Reads annotations.json and selection.json from run_dir and writes
// report/boundary_histogram.csv, report/class_distribution.csv,
// report/gain_curve.csv and report/summary.json.
ReportSummary WriteReport(const std::string& run_dir);

std::string ReadTextFile(const std::string& path);
void WriteTextFile(const std::string& path, const std::string& text);

}  // namespace subsel

#endif  // SUBSEL_REPORT_H_
