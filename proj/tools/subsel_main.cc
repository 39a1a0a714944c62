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

// subsel: command-line front end over the C API.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "subsel/subsel.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Carries a C API status out of a subcommand as the process exit code.
struct CommandError : std::runtime_error {
  CommandError(int code, const std::string& message)
      : std::runtime_error(message), code(code) {}
  int code;
};

void Check(subsel_status status, const char* what) {
  if (status != SUBSEL_OK) {
    throw CommandError(static_cast<int>(status),
                       std::string(what) + ": " + subsel_status_name(status) +
                           ": " + subsel_last_error());
  }
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};
using Dataset = Handle<subsel_dataset_t, subsel_dataset_free>;
using Graph = Handle<subsel_graph_t, subsel_graph_free>;
using Selection = Handle<subsel_selection_t, subsel_selection_free>;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandError(SUBSEL_ERR_IO, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw CommandError(SUBSEL_ERR_IO, "cannot write " + path.string());
}

std::string FileSha256(const std::string& path) {
  char hex[65];
  Check(subsel_file_sha256(path.c_str(), hex), "hash");
  return hex;
}

std::string TextSha256(const std::string& text) {
  char hex[65];
  Check(subsel_sha256(text.data(), text.size(), hex), "hash");
  return hex;
}

// Everything a run depends on. Values come from defaults, then the config
// file, then explicit flags.
struct RunConfig {
  std::string embeddings;
  std::string probabilities;
  std::string out;
  std::string graph_cache;
  subsel_graph_options graph{};
  subsel_select_options select{};

  RunConfig() {
    subsel_graph_options_init(&graph);
    subsel_select_options_init(&select);
  }
};

const char* SolverName(subsel_solver s) {
  return s == SUBSEL_SOLVER_EXACT ? "exact" : "pq";
}
const char* KnnName(subsel_knn_method m) {
  return m == SUBSEL_KNN_RANDOM_PROJECTION ? "rp" : "exact";
}

subsel_solver ParseSolver(const std::string& s) {
  if (s == "pq") return SUBSEL_SOLVER_PRIORITY_QUEUE;
  if (s == "exact") return SUBSEL_SOLVER_EXACT;
  throw CommandError(SUBSEL_ERR_INVALID_ARGUMENT, "unknown solver '" + s + "'");
}
subsel_knn_method ParseKnn(const std::string& s) {
  if (s == "exact") return SUBSEL_KNN_EXACT;
  if (s == "rp") return SUBSEL_KNN_RANDOM_PROJECTION;
  throw CommandError(SUBSEL_ERR_INVALID_ARGUMENT, "unknown knn method '" + s + "'");
}

json ConfigToJson(const RunConfig& c) {
  const auto& s = c.select;
  const auto& g = c.graph;
  return {
      {"embeddings", c.embeddings},
      {"probabilities", c.probabilities},
      {"k_neighbors", g.k},
      {"knn_method", KnnName(g.method)},
      {"num_trees", g.num_trees},
      {"leaf_size", g.leaf_size},
      {"knn_seed", g.seed},
      {"threshold",
       {{"kind", g.threshold_kind == SUBSEL_THRESHOLD_ABSOLUTE ? "absolute"
                                                              : "percentile"},
        {"value", g.threshold_value}}},
      {"tau", s.tau},
      {"budget", s.budget},
      {"budget_fraction", s.budget_fraction},
      {"weights",
       {{"lambda_uncertainty", s.lambda_uncertainty},
        {"lambda_diversity", s.lambda_diversity},
        {"lambda_triple", s.lambda_triple},
        {"gamma", s.gamma},
        {"eta", s.eta}}},
      {"class_balance", s.class_balance != 0},
      {"boundary_balance", s.boundary_balance != 0},
      {"solver", SolverName(s.solver)},
  };
}

void ApplyConfigFile(const std::string& path, RunConfig& c) {
  json j;
  try {
    j = json::parse(ReadFile(path));
  } catch (const json::exception& e) {
    throw CommandError(SUBSEL_ERR_FORMAT, path + ": " + e.what());
  }
  try {
    auto& s = c.select;
    auto& g = c.graph;
    c.embeddings = j.value("embeddings", c.embeddings);
    c.probabilities = j.value("probabilities", c.probabilities);
    c.out = j.value("out", c.out);
    c.graph_cache = j.value("graph_cache", c.graph_cache);
    g.k = j.value("k_neighbors", g.k);
    if (j.contains("knn_method")) g.method = ParseKnn(j["knn_method"]);
    g.num_threads = j.value("threads", g.num_threads);
    g.num_trees = j.value("num_trees", g.num_trees);
    g.leaf_size = j.value("leaf_size", g.leaf_size);
    g.seed = j.value("knn_seed", g.seed);
    if (j.contains("threshold")) {
      const auto& t = j["threshold"];
      const std::string kind = t.value("kind", std::string("percentile"));
      if (kind != "percentile" && kind != "absolute") {
        throw CommandError(SUBSEL_ERR_INVALID_ARGUMENT,
                           "threshold kind must be percentile or absolute");
      }
      g.threshold_kind = kind == "absolute" ? SUBSEL_THRESHOLD_ABSOLUTE
                                            : SUBSEL_THRESHOLD_PERCENTILE;
      g.threshold_value = t.value("value", g.threshold_value);
    }
    s.tau = j.value("tau", s.tau);
    s.budget = j.value("budget", s.budget);
    s.budget_fraction = j.value("budget_fraction", s.budget_fraction);
    if (j.contains("weights")) {
      const auto& w = j["weights"];
      s.lambda_uncertainty = w.value("lambda_uncertainty", s.lambda_uncertainty);
      s.lambda_diversity = w.value("lambda_diversity", s.lambda_diversity);
      s.lambda_triple = w.value("lambda_triple", s.lambda_triple);
      s.gamma = w.value("gamma", s.gamma);
      s.eta = w.value("eta", s.eta);
    }
    s.class_balance = j.value("class_balance", s.class_balance != 0) ? 1 : 0;
    s.boundary_balance = j.value("boundary_balance", s.boundary_balance != 0) ? 1 : 0;
    if (j.contains("solver")) s.solver = ParseSolver(j["solver"]);
  } catch (const json::exception& e) {
    throw CommandError(SUBSEL_ERR_FORMAT, path + ": " + e.what());
  }
}

// Flags left unset on the command line keep the config-file value.
struct Flags {
  std::string config;
  std::optional<std::string> embeddings, probabilities, out, graph_cache;
  std::optional<long long> k;
  std::optional<std::string> knn_method;
  std::optional<int> threads;
  std::optional<double> threshold_percentile, threshold_area;
  std::optional<double> tau;
  std::optional<long long> budget;
  std::optional<double> budget_fraction;
  std::optional<double> lambda_uncertainty, lambda_diversity, lambda_triple;
  std::optional<double> gamma, eta;
  bool no_class_balance = false;
  bool no_boundary_balance = false;
  std::optional<std::string> solver;
};

void AddInputFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration");
  cmd->add_option("-e,--embeddings", f.embeddings, "Embeddings matrix (.bin or .csv)");
  cmd->add_option("-p,--probabilities", f.probabilities,
                  "Class-probability matrix (.bin or .csv)");
  cmd->add_option("--graph-cache", f.graph_cache, "Graph cache file");
  cmd->add_option("-k,--k-neighbors", f.k, "Neighbours per sample (default 10)");
  cmd->add_option("--knn", f.knn_method, "Neighbour search: exact | rp");
  cmd->add_option("--threads", f.threads, "Worker threads for the graph (0 = all)");
  auto* pct = cmd->add_option("--thin-percentile", f.threshold_percentile,
                              "Thin-triangle threshold as an area percentile");
  auto* abs = cmd->add_option("--thin-area", f.threshold_area,
                              "Thin-triangle threshold as an absolute area");
  pct->excludes(abs);
}

void AddSelectFlags(CLI::App* cmd, Flags& f) {
  cmd->add_option("-o,--out", f.out, "Run directory");
  cmd->add_option("--tau", f.tau, "Boundary threshold on margin utility");
  auto* b = cmd->add_option("--budget", f.budget, "Absolute subset size k");
  auto* bf = cmd->add_option("--budget-fraction", f.budget_fraction,
                             "Subset size as a fraction of n");
  b->excludes(bf);
  cmd->add_option("--lambda-uncertainty", f.lambda_uncertainty);
  cmd->add_option("--lambda-diversity", f.lambda_diversity);
  cmd->add_option("--lambda-triple", f.lambda_triple);
  cmd->add_option("--gamma", f.gamma);
  cmd->add_option("--eta", f.eta);
  cmd->add_flag("--no-class-balance", f.no_class_balance,
                "Drop the class-balancing constraint");
  cmd->add_flag("--no-boundary-balance", f.no_boundary_balance,
                "Drop the boundary-balancing constraint");
  cmd->add_option("--solver", f.solver, "Greedy implementation: pq | exact");
}

RunConfig Resolve(const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) ApplyConfigFile(f.config, c);
  auto& s = c.select;
  auto& g = c.graph;
  if (f.embeddings) c.embeddings = *f.embeddings;
  if (f.probabilities) c.probabilities = *f.probabilities;
  if (f.out) c.out = *f.out;
  if (f.graph_cache) c.graph_cache = *f.graph_cache;
  if (f.k) g.k = *f.k;
  if (f.knn_method) g.method = ParseKnn(*f.knn_method);
  if (f.threads) g.num_threads = *f.threads;
  if (f.threshold_percentile) {
    g.threshold_kind = SUBSEL_THRESHOLD_PERCENTILE;
    g.threshold_value = *f.threshold_percentile;
  }
  if (f.threshold_area) {
    g.threshold_kind = SUBSEL_THRESHOLD_ABSOLUTE;
    g.threshold_value = *f.threshold_area;
  }
  if (f.tau) s.tau = *f.tau;
  if (f.budget) {
    s.budget = *f.budget;
  }
  if (f.budget_fraction) {
    s.budget = 0;
    s.budget_fraction = *f.budget_fraction;
  }
  if (f.lambda_uncertainty) s.lambda_uncertainty = *f.lambda_uncertainty;
  if (f.lambda_diversity) s.lambda_diversity = *f.lambda_diversity;
  if (f.lambda_triple) s.lambda_triple = *f.lambda_triple;
  if (f.gamma) s.gamma = *f.gamma;
  if (f.eta) s.eta = *f.eta;
  if (f.no_class_balance) s.class_balance = 0;
  if (f.no_boundary_balance) s.boundary_balance = 0;
  if (f.solver) s.solver = ParseSolver(*f.solver);
  if (c.embeddings.empty() || c.probabilities.empty()) {
    throw CommandError(SUBSEL_ERR_INVALID_ARGUMENT,
                       "--embeddings and --probabilities are required");
  }
  return c;
}

void LoadAndBuild(const RunConfig& c, Dataset& d, Graph& g) {
  Check(subsel_dataset_load(c.embeddings.c_str(), c.probabilities.c_str(), &d.p),
        "load");
  subsel_graph_options opts = c.graph;
  opts.cache_path = c.graph_cache.empty() ? nullptr : c.graph_cache.c_str();
  Check(subsel_graph_build(d.p, &opts, &g.p), "graph");
}

int CmdSelect(const Flags& flags) {
  const RunConfig c = Resolve(flags);
  if (c.out.empty()) {
    throw CommandError(SUBSEL_ERR_INVALID_ARGUMENT, "--out is required");
  }
  fs::create_directories(c.out);
  Dataset d;
  Graph g;
  LoadAndBuild(c, d, g);
  Selection sel;
  Check(subsel_select(d.p, g.p, &c.select, &sel.p), "select");
  Check(subsel_selection_write(sel.p, c.out.c_str()), "write");

  subsel_dataset_info di;
  subsel_graph_info gi;
  subsel_selection_info si;
  Check(subsel_dataset_info_get(d.p, &di), "info");
  Check(subsel_graph_info_get(g.p, &gi), "info");
  Check(subsel_selection_info_get(sel.p, &si), "info");

  const json config = ConfigToJson(c);
  const fs::path run(c.out);
  const json manifest = {
      {"tool", "subsel"},
      {"version", subsel_version()},
      {"config", config},
      {"config_sha256", TextSha256(config.dump())},
      {"inputs",
       {{"embeddings", {{"path", c.embeddings}, {"sha256", FileSha256(c.embeddings)}}},
        {"probabilities",
         {{"path", c.probabilities}, {"sha256", FileSha256(c.probabilities)}}}}},
      {"outputs",
       {{"selected.txt", FileSha256((run / "selected.txt").string())}}},
  };
  WriteFile(run / "manifest.json", manifest.dump(2) + "\n");
  const json timing = {
      {"graph_build_seconds", gi.knn_seconds},
      {"clique_enumeration_seconds", gi.clique_seconds},
      {"selection_seconds", si.selection_seconds},
      {"graph_from_cache", gi.from_cache != 0},
  };
  WriteFile(run / "timing.json", timing.dump(2) + "\n");

  std::printf("selected %lld of %lld (budget %lld), objective %.6f\n",
              static_cast<long long>(si.num_selected),
              static_cast<long long>(di.size),
              static_cast<long long>(si.budget), si.objective);
  if (si.termination == SUBSEL_TERMINATION_EXHAUSTED) {
    std::fprintf(stderr,
                 "warning: constraints exhausted before the budget; selected "
                 "%lld of %lld\n",
                 static_cast<long long>(si.num_selected),
                 static_cast<long long>(si.budget));
  }
  return 0;
}

int CmdGraph(const Flags& flags) {
  const RunConfig c = Resolve(flags);
  if (c.graph_cache.empty()) {
    throw CommandError(SUBSEL_ERR_INVALID_ARGUMENT, "--graph-cache is required");
  }
  Dataset d;
  Graph g;
  LoadAndBuild(c, d, g);
  subsel_graph_info gi;
  Check(subsel_graph_info_get(g.p, &gi), "info");
  std::printf("%s: %lld nodes, %lld edges, %lld triangles (%lld thin), "
              "area threshold %.6g\n",
              gi.from_cache ? "cached" : "built", static_cast<long long>(gi.size),
              static_cast<long long>(gi.num_edges),
              static_cast<long long>(gi.num_triangles),
              static_cast<long long>(gi.num_thin), gi.area_threshold);
  return 0;
}

int CmdReport(const std::string& run_dir) {
  double coverage = 0.0;
  Check(subsel_report(run_dir.c_str(), &coverage), "report");
  std::printf("boundary coverage %.6f\n", coverage);
  return 0;
}

struct GenFlags {
  std::string out;
  subsel_synthetic_spec spec{};
  double long_tail = 0.0;
  std::string format = "bin";
};

int CmdGen(GenFlags& f) {
  if (f.format != "bin" && f.format != "csv") {
    throw CommandError(SUBSEL_ERR_INVALID_ARGUMENT, "--format must be bin or csv");
  }
  if (f.long_tail > 0.0) {
    f.spec.long_tail = 1;
    f.spec.imbalance_ratio = f.long_tail;
  }
  Dataset d;
  Check(subsel_dataset_generate(&f.spec, &d.p), "gen");
  fs::create_directories(f.out);
  const std::string emb = (fs::path(f.out) / ("embeddings." + f.format)).string();
  const std::string prb = (fs::path(f.out) / ("probabilities." + f.format)).string();
  Check(subsel_dataset_save(d.p, emb.c_str(), prb.c_str()), "save");
  std::printf("wrote %s and %s\n", emb.c_str(), prb.c_str());
  return 0;
}

struct VerifyFlags {
  bool inject_fault = false;
  unsigned long long seed = 0;
  std::string replay;
  std::string report_out;
  std::string work_dir;
};

int CmdVerify(const VerifyFlags& f) {
  subsel_verify_options opts;
  subsel_verify_options_init(&opts);
  if (f.seed) opts.seed = f.seed;
  opts.inject_fault = f.inject_fault ? 1 : 0;
  std::string replay;
  if (!f.replay.empty()) {
    replay = ReadFile(f.replay);
    opts.replay_json = replay.c_str();
  }
  if (!f.work_dir.empty()) opts.work_dir = f.work_dir.c_str();

  char* text = nullptr;
  int passed = 0;
  Check(subsel_verify(&opts, &text, &passed), "verify");
  const json report = json::parse(text);
  subsel_string_free(text);

  const fs::path witness_dir = f.work_dir.empty() ? fs::current_path() : fs::path(f.work_dir);
  for (const auto& s : report["suites"]) {
    std::printf("%-18s %s  cases=%zu failures=%zu worst=%.3g  %.2fs\n",
                s["name"].get<std::string>().c_str(),
                s["passed"].get<bool>() ? "PASS" : "FAIL",
                s["cases"].get<std::size_t>(), s["failures"].get<std::size_t>(),
                s["worst"].get<double>(), s["seconds"].get<double>());
    if (!s["passed"].get<bool>()) {
      std::printf("  %s\n", s["detail"].get<std::string>().c_str());
      if (!s["witness"].is_null() && f.replay.empty()) {
        fs::create_directories(witness_dir);
        const fs::path w =
            witness_dir / ("witness-" + s["name"].get<std::string>() + ".json");
        WriteFile(w, s["witness"].dump(2) + "\n");
        std::printf("  witness: %s\n", w.string().c_str());
      }
    }
  }
  if (!f.report_out.empty()) WriteFile(f.report_out, report.dump(2) + "\n");
  std::printf("%s\n", passed ? "all checks passed" : "violations found");
  return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Submodular subset selection under partition-matroid constraints"};
  app.set_version_flag("--version", std::string(subsel_version()));
  app.require_subcommand(1);

  Flags select_flags;
  auto* select = app.add_subcommand("select", "Select a subset and write a run directory");
  AddInputFlags(select, select_flags);
  AddSelectFlags(select, select_flags);

  Flags graph_flags;
  auto* graph = app.add_subcommand("graph", "Build the neighbour graph into a cache file");
  AddInputFlags(graph, graph_flags);

  std::string run_dir;
  auto* report = app.add_subcommand("report", "Write report CSVs for a run directory");
  report->add_option("run_dir", run_dir, "Run directory from select")->required();

  GenFlags gen_flags;
  subsel_synthetic_spec_init(&gen_flags.spec);
  auto* gen = app.add_subcommand("gen", "Generate a synthetic dataset");
  gen->add_option("-o,--out", gen_flags.out, "Output directory")->required();
  gen->add_option("-n", gen_flags.spec.n, "Number of samples");
  gen->add_option("--dim", gen_flags.spec.dim, "Embedding dimension");
  gen->add_option("--classes", gen_flags.spec.num_classes, "Number of classes");
  gen->add_option("--spread", gen_flags.spec.cluster_spread, "Cluster noise scale");
  gen->add_option("--temperature", gen_flags.spec.temperature,
                  "Softmax temperature of the probabilities");
  gen->add_option("--long-tail", gen_flags.long_tail,
                  "Largest/smallest class size ratio (0 = uniform)");
  gen->add_option("--seed", gen_flags.spec.seed, "RNG seed");
  gen->add_option("--format", gen_flags.format, "bin | csv");

  VerifyFlags verify_flags;
  auto* verify = app.add_subcommand("verify", "Run the property and oracle suites");
  verify->add_flag("--inject-fault", verify_flags.inject_fault,
                   "Flip the diversity sign to exercise the checkers");
  verify->add_option("--seed", verify_flags.seed, "Base seed for generated cases");
  verify->add_option("--replay", verify_flags.replay, "Re-run one witness file");
  verify->add_option("--report", verify_flags.report_out, "Write the JSON report here");
  verify->add_option("--work-dir", verify_flags.work_dir,
                     "Scratch directory for witnesses and report runs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*select) return CmdSelect(select_flags);
    if (*graph) return CmdGraph(graph_flags);
    if (*report) return CmdReport(run_dir);
    if (*gen) return CmdGen(gen_flags);
    if (*verify) return CmdVerify(verify_flags);
  } catch (const CommandError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return e.code;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return SUBSEL_ERR_INTERNAL;
  }
  return 0;
}
