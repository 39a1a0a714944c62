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

#include "subsel/report.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace subsel {
namespace fs = std::filesystem;

std::string ReadTextFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "missing artifact " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

std::string SelectionToJson(const SelectionResult& result) {
  nlohmann::json constraints = nlohmann::json::object();
  for (const auto& usage : result.constraint_report) {
    nlohmann::json cells = nlohmann::json::array();
    for (const auto& c : usage.cells) {
      cells.push_back(
          {{"cell", c.label}, {"selected", c.selected}, {"capacity", c.capacity}});
    }
    constraints[usage.name] = {{"cells", std::move(cells)},
                               {"unconstrained_selected",
                                usage.unconstrained_selected}};
  }
  nlohmann::json j = {
      {"selected", result.selected},
      {"gains", result.gains},
      {"objective", result.objective_value},
      {"termination", TerminationName(result.termination)},
      {"constraints", std::move(constraints)},
  };
  return j.dump(1);
}

StoredSelection SelectionFromJson(const std::string& text) {
  StoredSelection s;
  try {
    const auto j = nlohmann::json::parse(text);
    s.selected = j.at("selected").get<std::vector<Index>>();
    s.gains = j.at("gains").get<std::vector<double>>();
    s.objective = j.at("objective").get<double>();
    s.termination = j.at("termination").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("selection: ") + e.what());
  }
  return s;
}

void WriteSelectionArtifacts(const std::string& run_dir,
                             const SelectionResult& result) {
  fs::create_directories(run_dir);
  WriteTextFile((fs::path(run_dir) / kSelectionJson).string(),
                SelectionToJson(result) + "\n");
  std::ostringstream txt;
  for (Index i : result.selected) txt << i << '\n';
  WriteTextFile((fs::path(run_dir) / kSelectedTxt).string(), txt.str());
}

void WriteAnnotations(const std::string& run_dir,
                      const SampleAnnotations& annotations,
                      std::size_t num_classes) {
  fs::create_directories(run_dir);
  WriteTextFile((fs::path(run_dir) / kAnnotationsJson).string(),
                AnnotationsToJson(annotations, num_classes) + "\n");
}

ReportSummary WriteReport(const std::string& run_dir) {
  const fs::path dir(run_dir);
  std::size_t num_classes = 0;
  const SampleAnnotations annotations = AnnotationsFromJson(
      ReadTextFile((dir / kAnnotationsJson).string()), &num_classes);
  const StoredSelection selection =
      SelectionFromJson(ReadTextFile((dir / kSelectionJson).string()));
  const Index n = annotations.size();
  for (Index i : selection.selected) {
    if (i < 0 || i >= n) {
      throw Error(ErrorCode::kFormat, "selection index out of range");
    }
  }

  const fs::path out = dir / kReportDir;
  fs::create_directories(out);
  const BoundaryHistogram hist = ComputeBoundaryHistogram(annotations, num_classes);

  ReportSummary summary;
  summary.boundary_coverage = hist.coverage;
  summary.covered_pairs = hist.counts.size();
  summary.selected = selection.selected.size();

  std::ostringstream h;
  h << "class_a,class_b,count\n";
  for (const auto& [pair, count] : hist.counts) {
    h << pair.first << ',' << pair.second << ',' << count << '\n';
    summary.samples_on_boundaries += count;
  }
  WriteTextFile((out / "boundary_histogram.csv").string(), h.str());

  std::vector<std::size_t> full(num_classes, 0), chosen(num_classes, 0);
  for (Index i = 0; i < n; ++i) {
    const auto label = static_cast<std::size_t>(annotations.pseudo_label[i]);
    if (label >= num_classes) {
      throw Error(ErrorCode::kFormat, "pseudo-label out of range");
    }
    ++full[label];
  }
  for (Index i : selection.selected) ++chosen[annotations.pseudo_label[i]];
  std::ostringstream c;
  c << "class,full_count,selected_count,full_fraction,selected_fraction\n";
  c.precision(10);
  const double nf = static_cast<double>(n);
  const double sf = std::max<double>(1.0, static_cast<double>(selection.selected.size()));
  for (std::size_t k = 0; k < num_classes; ++k) {
    c << k << ',' << full[k] << ',' << chosen[k] << ','
      << static_cast<double>(full[k]) / nf << ','
      << (selection.selected.empty() ? 0.0 : static_cast<double>(chosen[k]) / sf)
      << '\n';
  }
  WriteTextFile((out / "class_distribution.csv").string(), c.str());

  std::ostringstream g;
  g.precision(17);
  g << "step,index,gain,cumulative_objective\n";
  double cumulative = 0.0;
  for (std::size_t s = 0; s < selection.selected.size(); ++s) {
    const double gain = s < selection.gains.size() ? selection.gains[s] : 0.0;
    cumulative += gain;
    g << s << ',' << selection.selected[s] << ',' << gain << ',' << cumulative
      << '\n';
  }
  WriteTextFile((out / "gain_curve.csv").string(), g.str());

  const nlohmann::json j = {
      {"boundary_coverage", summary.boundary_coverage},
      {"covered_pairs", summary.covered_pairs},
      {"total_pairs", num_classes * (num_classes - 1) / 2},
      {"samples_on_boundaries", summary.samples_on_boundaries},
      {"selected", summary.selected},
      {"tau", annotations.tau},
  };
  WriteTextFile((out / "summary.json").string(), j.dump(1) + "\n");
  return summary;
}

}  // namespace subsel
