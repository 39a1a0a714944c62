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

#include "subsel/dataset.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "subsel/hash.h"

namespace subsel {

static_assert(std::endian::native == std::endian::little,
              "binary container assumes a little-endian host");

namespace {

constexpr std::uint32_t kFormatVersion = 1;
constexpr std::size_t kMagicSize = 11;
constexpr char kEmbeddingsMagic[kMagicSize] = {'S', 'U', 'B', 'S', 'E', 'L',
                                               '-', 'E', 'M', 'B', '\0'};
constexpr char kProbabilitiesMagic[kMagicSize] = {'S', 'U', 'B', 'S', 'E', 'L',
                                                  '-', 'P', 'R', 'B', '\0'};
constexpr std::size_t kHeaderSize = kMagicSize + 4 + 8 + 8;

const char* MagicFor(MatrixKind kind) {
  return kind == MatrixKind::kEmbeddings ? kEmbeddingsMagic
                                         : kProbabilitiesMagic;
}

const char* NameFor(MatrixKind kind) {
  return kind == MatrixKind::kEmbeddings ? "embeddings" : "probabilities";
}

bool HasCsvExtension(const std::string& path) {
  if (path.size() < 4) return false;
  std::string ext = path.substr(path.size() - 4);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv";
}

std::string FormatValue(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

template <typename T>
void AppendRaw(std::vector<std::uint8_t>& out, const T& value) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
  out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T ReadRaw(std::span<const std::uint8_t> bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

std::vector<std::uint8_t> ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

RowMatrix ReadCsv(const std::string& path, MatrixKind kind) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  RowMatrix m;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view rest = Trim(line);
    if (rest.empty()) continue;
    std::size_t cols = 0;
    while (true) {
      const std::size_t comma = rest.find(',');
      std::string_view field = Trim(rest.substr(0, comma));
      double value = 0.0;
      auto [ptr, ec] =
          std::from_chars(field.data(), field.data() + field.size(), value);
      if (ec != std::errc() || ptr != field.data() + field.size()) {
        throw Error(ErrorCode::kFormat,
                    std::string(NameFor(kind)) + " " + path + " line " +
                        std::to_string(line_no) + ": cannot parse '" +
                        std::string(field) + "'");
      }
      m.data.push_back(value);
      ++cols;
      if (comma == std::string_view::npos) break;
      rest = rest.substr(comma + 1);
    }
    if (m.rows == 0) {
      m.cols = cols;
    } else if (cols != m.cols) {
      throw Error(ErrorCode::kFormat,
                  std::string(NameFor(kind)) + " " + path + " row " +
                      std::to_string(m.rows) + ": expected " +
                      std::to_string(m.cols) + " columns, found " +
                      std::to_string(cols));
    }
    ++m.rows;
  }
  return m;
}

void WriteCsv(const std::string& path, const RowMatrix& m) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.precision(17);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t j = 0; j < m.cols; ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

void ValidateAndNormalise(RowMatrix& emb, RowMatrix& prob,
                          DatasetMetadata& meta) {
  if (emb.rows < 1) throw Error(ErrorCode::kValidation, "dataset is empty");
  if (emb.cols < 1) {
    throw Error(ErrorCode::kValidation, "embedding dimension must be >= 1");
  }
  if (prob.cols < 2) {
    throw Error(ErrorCode::kValidation, "need at least 2 classes, found " +
                                            std::to_string(prob.cols));
  }
  if (emb.rows != prob.rows) {
    throw Error(ErrorCode::kValidation,
                "shape mismatch: embeddings have " + std::to_string(emb.rows) +
                    " rows, probabilities have " + std::to_string(prob.rows));
  }
  for (std::size_t i = 0; i < emb.rows; ++i) {
    auto row = emb.row(i);
    double sq = 0.0;
    for (double v : row) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kValidation,
                    "non-finite embedding value at row " + std::to_string(i));
      }
      sq += v * v;
    }
    if (sq == 0.0) {
      throw Error(ErrorCode::kValidation,
                  "zero-norm embedding at row " + std::to_string(i));
    }
    const double norm = std::sqrt(sq);
    for (double& v : row) v /= norm;
  }
  meta.embeddings_normalized = true;

  meta.renormalized_rows = 0;
  for (std::size_t i = 0; i < prob.rows; ++i) {
    auto row = prob.row(i);
    double sum = 0.0;
    for (double& v : row) {
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::kValidation,
                    "non-finite probability at row " + std::to_string(i));
      }
      if (v < -kNegativeProbabilityTolerance) {
        throw Error(ErrorCode::kValidation, "negative probability " +
                                                FormatValue(v) + " at row " +
                                                std::to_string(i));
      }
      if (v < 0.0) v = 0.0;
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbabilitySumTolerance) {
      throw Error(ErrorCode::kValidation,
                  "row sum " + FormatValue(sum) + " exceeds tolerance at row " +
                      std::to_string(i));
    }
    if (sum != 1.0) {
      for (double& v : row) v /= sum;
      ++meta.renormalized_rows;
    }
  }
}

}  // namespace

DatasetInputs DatasetInputs::Create(RowMatrix embeddings,
                                    RowMatrix probabilities) {
  DatasetInputs d;
  ValidateAndNormalise(embeddings, probabilities, d.metadata_);
  d.embeddings_ = std::move(embeddings);
  d.probabilities_ = std::move(probabilities);
  return d;
}

SampleAnnotations Annotate(const DatasetInputs& dataset, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "tau must lie in [0, 1]");
  }
  const Index n = dataset.size();
  SampleAnnotations a;
  a.tau = tau;
  a.margin_utility.resize(n);
  a.pseudo_label.resize(n);
  a.boundary.resize(n);
  for (Index i = 0; i < n; ++i) {
    auto p = dataset.probabilities(i);
    // Strict comparisons keep the lower index on ties.
    std::int32_t best = 0;
    for (std::size_t c = 1; c < p.size(); ++c) {
      if (p[c] > p[best]) best = static_cast<std::int32_t>(c);
    }
    std::int32_t second = best == 0 ? 1 : 0;
    for (std::size_t c = 0; c < p.size(); ++c) {
      if (static_cast<std::int32_t>(c) == best) continue;
      if (p[c] > p[second]) second = static_cast<std::int32_t>(c);
    }
    const double u = std::clamp(1.0 - (p[best] - p[second]), 0.0, 1.0);
    a.margin_utility[i] = u;
    a.pseudo_label[i] = best;
    if (u > tau) a.boundary[i] = ClassPair::Of(best, second);
  }
  return a;
}

BoundaryHistogram ComputeBoundaryHistogram(const SampleAnnotations& annotations,
                                           std::size_t num_classes) {
  BoundaryHistogram h;
  for (const auto& b : annotations.boundary) {
    if (b) ++h.counts[*b];
  }
  const double pairs =
      static_cast<double>(num_classes) * static_cast<double>(num_classes - 1) /
      2.0;
  h.coverage = pairs > 0 ? static_cast<double>(h.counts.size()) / pairs : 0.0;
  return h;
}

std::vector<std::uint8_t> EncodeBinaryMatrix(MatrixKind kind,
                                             const RowMatrix& matrix) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + matrix.data.size() * sizeof(float));
  const char* magic = MagicFor(kind);
  out.insert(out.end(), magic, magic + kMagicSize);
  AppendRaw(out, kFormatVersion);
  AppendRaw(out, static_cast<std::uint64_t>(matrix.rows));
  AppendRaw(out, static_cast<std::uint64_t>(matrix.cols));
  for (double v : matrix.data) AppendRaw(out, static_cast<float>(v));
  return out;
}

RowMatrix DecodeBinaryMatrix(std::span<const std::uint8_t> bytes,
                             MatrixKind kind, const std::string& origin) {
  const std::string what = std::string(NameFor(kind)) + " " + origin;
  if (bytes.size() < kHeaderSize ||
      std::memcmp(bytes.data(), MagicFor(kind), kMagicSize) != 0) {
    throw Error(ErrorCode::kFormat, what + ": bad magic bytes");
  }
  const auto version = ReadRaw<std::uint32_t>(bytes, kMagicSize);
  if (version != kFormatVersion) {
    throw Error(ErrorCode::kFormat,
                what + ": unsupported version " + std::to_string(version));
  }
  const auto rows = ReadRaw<std::uint64_t>(bytes, kMagicSize + 4);
  const auto cols = ReadRaw<std::uint64_t>(bytes, kMagicSize + 12);
  if (cols != 0 && rows > (bytes.size() - kHeaderSize) / sizeof(float) / cols) {
    throw Error(ErrorCode::kFormat, what + ": payload truncated");
  }
  if (bytes.size() != kHeaderSize + rows * cols * sizeof(float)) {
    throw Error(ErrorCode::kFormat, what + ": payload size does not match header");
  }
  RowMatrix m(rows, cols);
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    m.data[i] = ReadRaw<float>(bytes, kHeaderSize + i * sizeof(float));
  }
  return m;
}

RowMatrix ReadMatrixFile(const std::string& path, MatrixKind kind) {
  if (HasCsvExtension(path)) return ReadCsv(path, kind);
  const auto bytes = ReadAll(path);
  return DecodeBinaryMatrix(bytes, kind, path);
}

void WriteMatrixFile(const std::string& path, MatrixKind kind,
                     const RowMatrix& matrix) {
  if (HasCsvExtension(path)) {
    WriteCsv(path, matrix);
    return;
  }
  const auto bytes = EncodeBinaryMatrix(kind, matrix);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path);
}

DatasetInputs LoadDataset(const std::string& embeddings_path,
                          const std::string& probabilities_path) {
  RowMatrix emb = ReadMatrixFile(embeddings_path, MatrixKind::kEmbeddings);
  RowMatrix prob = ReadMatrixFile(probabilities_path, MatrixKind::kProbabilities);
  DatasetInputs d = DatasetInputs::Create(std::move(emb), std::move(prob));
  d.mutable_metadata().embeddings_sha256 = Sha256File(embeddings_path);
  d.mutable_metadata().probabilities_sha256 = Sha256File(probabilities_path);
  return d;
}

std::string AnnotationsToJson(const SampleAnnotations& a,
                              std::size_t num_classes) {
  nlohmann::json boundary = nlohmann::json::array();
  for (const auto& b : a.boundary) {
    if (b) {
      boundary.push_back({b->first, b->second});
    } else {
      boundary.push_back(nullptr);
    }
  }
  nlohmann::json j = {
      {"num_classes", num_classes},
      {"tau", a.tau},
      {"u", a.margin_utility},
      {"pseudo_label", a.pseudo_label},
      {"boundary", std::move(boundary)},
  };
  return j.dump();
}

SampleAnnotations AnnotationsFromJson(const std::string& text,
                                      std::size_t* num_classes) {
  SampleAnnotations a;
  try {
    const auto j = nlohmann::json::parse(text);
    a.margin_utility = j.at("u").get<std::vector<double>>();
    a.pseudo_label = j.at("pseudo_label").get<std::vector<std::int32_t>>();
    a.tau = j.value("tau", kDefaultTau);
    for (const auto& b : j.at("boundary")) {
      if (b.is_null()) {
        a.boundary.emplace_back();
      } else {
        a.boundary.push_back(
            ClassPair::Of(b.at(0).get<std::int32_t>(), b.at(1).get<std::int32_t>()));
      }
    }
    if (num_classes) *num_classes = j.at("num_classes").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kFormat, std::string("annotations: ") + e.what());
  }
  if (a.pseudo_label.size() != a.margin_utility.size() ||
      a.boundary.size() != a.margin_utility.size()) {
    throw Error(ErrorCode::kFormat, "annotations: array lengths differ");
  }
  return a;
}

}  // namespace subsel
