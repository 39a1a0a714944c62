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

#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "subsel/testkit.h"
#include "test_util.h"

namespace subsel {
namespace {

using ::testing::HasSubstr;
using test::MakeDataset;
using test::Rows;
using test::TempDir;

template <typename Fn>
std::string ErrorMessage(Fn&& fn, ErrorCode expected) {
  try {
    fn();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), expected);
    return e.what();
  }
  ADD_FAILURE() << "no error thrown";
  return "";
}

TEST(LoadDatasetTest, WellFormedFiles) {
  TempDir dir;
  const RowMatrix emb = Rows({{1, 0, 0}, {0, 2, 0}, {0, 0, 3}, {1, 1, 1}});
  const RowMatrix prob = Rows({{0.5, 0.5}, {0.25, 0.75}, {1, 0}, {0, 1}});
  WriteMatrixFile(dir.file("e.bin"), MatrixKind::kEmbeddings, emb);
  WriteMatrixFile(dir.file("p.bin"), MatrixKind::kProbabilities, prob);
  const DatasetInputs d = LoadDataset(dir.file("e.bin"), dir.file("p.bin"));
  EXPECT_EQ(d.size(), 4);
  EXPECT_EQ(d.dim(), 3u);
  EXPECT_EQ(d.num_classes(), 2u);
  EXPECT_TRUE(d.metadata().embeddings_normalized);
  EXPECT_EQ(d.metadata().embeddings_sha256.size(), 64u);
  EXPECT_NEAR(d.embedding(1)[1], 1.0, 1e-12);
  EXPECT_NEAR(d.embedding(3)[0], 1.0 / std::sqrt(3.0), 1e-7);
}

TEST(LoadDatasetTest, RowSumOutsideTolerance) {
  const std::string msg = ErrorMessage(
      [] { MakeDataset({{1, 0}, {0, 1}}, {{0.5, 0.5}, {0.5, 0.6}}); },
      ErrorCode::kValidation);
  EXPECT_THAT(msg, HasSubstr("row sum 1.1 exceeds tolerance"));
  EXPECT_THAT(msg, HasSubstr("row 1"));
}

TEST(LoadDatasetTest, ZeroNormEmbedding) {
  const std::string msg = ErrorMessage(
      [] { MakeDataset({{1, 0, 0}, {0, 0, 0}}, {{0.5, 0.5}, {0.5, 0.5}}); },
      ErrorCode::kValidation);
  EXPECT_THAT(msg, HasSubstr("zero-norm embedding at row 1"));
}

TEST(LoadDatasetTest, ShapeMismatch) {
  const std::string msg = ErrorMessage(
      [] { MakeDataset({{1, 0}, {0, 1}, {1, 1}}, {{0.5, 0.5}, {0.5, 0.5}}); },
      ErrorCode::kValidation);
  EXPECT_THAT(msg, HasSubstr("shape mismatch"));
}

TEST(LoadDatasetTest, NonFiniteAndNegativeValues) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THAT(ErrorMessage([&] { MakeDataset({{1, nan}}, {{0.5, 0.5}}); },
                           ErrorCode::kValidation),
              HasSubstr("row 0"));
  EXPECT_THAT(ErrorMessage([&] { MakeDataset({{1, 0}}, {{1.0, nan}}); },
                           ErrorCode::kValidation),
              HasSubstr("non-finite probability"));
  EXPECT_THAT(ErrorMessage([] { MakeDataset({{1, 0}}, {{1.1, -0.1}}); },
                           ErrorCode::kValidation),
              HasSubstr("negative probability"));
}

TEST(LoadDatasetTest, RejectsDegenerateShapes) {
  ErrorMessage([] { MakeDataset({{1, 0}}, {{1.0}}); }, ErrorCode::kValidation);
  ErrorMessage([] { DatasetInputs::Create(RowMatrix(0, 2), RowMatrix(0, 2)); },
               ErrorCode::kValidation);
}

TEST(LoadDatasetTest, RenormalisesWithinTolerance) {
  const DatasetInputs d =
      MakeDataset({{1, 0}, {0, 1}}, {{0.50004, 0.50004}, {0.25, 0.75}});
  EXPECT_EQ(d.metadata().renormalized_rows, 1u);
  EXPECT_DOUBLE_EQ(d.probabilities(0)[0], 0.5);
  // Tiny negative noise is clamped, not rejected.
  const DatasetInputs e = MakeDataset({{1, 0}}, {{1.0, -1e-12}});
  EXPECT_EQ(e.probabilities(0)[1], 0.0);
}

TEST(MatrixFileTest, BinaryAndCsvRoundTrip) {
  TempDir dir;
  const RowMatrix m = Rows({{0.25, -1.5, 3}, {4, 5.5, -6}});
  for (const char* name : {"m.bin", "m.csv"}) {
    WriteMatrixFile(dir.file(name), MatrixKind::kEmbeddings, m);
    const RowMatrix back = ReadMatrixFile(dir.file(name), MatrixKind::kEmbeddings);
    ASSERT_EQ(back.rows, 2u);
    ASSERT_EQ(back.cols, 3u);
    for (std::size_t i = 0; i < m.data.size(); ++i) {
      EXPECT_FLOAT_EQ(back.data[i], m.data[i]) << name;
    }
  }
}

TEST(MatrixFileTest, BinaryHeaderLayout) {
  const auto bytes = EncodeBinaryMatrix(MatrixKind::kProbabilities, Rows({{1, 0}}));
  ASSERT_EQ(bytes.size(), 11u + 4 + 8 + 8 + 2 * 4);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 11),
            std::string("SUBSEL-PRB\0", 11));
  EXPECT_EQ(bytes[11], 1);  // version, little-endian
  EXPECT_EQ(bytes[15], 1);  // rows
  EXPECT_EQ(bytes[23], 2);  // cols
}

TEST(MatrixFileTest, RejectsCorruptBinary) {
  auto bytes = EncodeBinaryMatrix(MatrixKind::kEmbeddings, Rows({{1, 2}, {3, 4}}));
  EXPECT_THROW(DecodeBinaryMatrix(bytes, MatrixKind::kProbabilities, "x"), Error);
  auto truncated = bytes;
  truncated.pop_back();
  EXPECT_THROW(DecodeBinaryMatrix(truncated, MatrixKind::kEmbeddings, "x"), Error);
  auto bad_version = bytes;
  bad_version[11] = 2;
  EXPECT_THROW(DecodeBinaryMatrix(bad_version, MatrixKind::kEmbeddings, "x"), Error);
}

TEST(MatrixFileTest, MissingFileIsIoError) {
  ErrorMessage([] { ReadMatrixFile("/nonexistent/m.bin", MatrixKind::kEmbeddings); },
               ErrorCode::kIo);
}

TEST(MatrixFileTest, RaggedCsvIsFormatError) {
  TempDir dir;
  std::ofstream(dir.file("r.csv")) << "1,2,3\n4,5\n";
  ErrorMessage([&] { ReadMatrixFile(dir.file("r.csv"), MatrixKind::kEmbeddings); },
               ErrorCode::kFormat);
}

TEST(AnnotateTest, ThreeClassRow) {
  const auto a = Annotate(MakeDataset({{1, 0}}, {{0.6, 0.3, 0.1}}), 0.05);
  EXPECT_NEAR(a.margin_utility[0], 0.7, 1e-12);
  EXPECT_EQ(a.pseudo_label[0], 0);
  ASSERT_TRUE(a.boundary[0].has_value());
  EXPECT_EQ(*a.boundary[0], (ClassPair{0, 1}));
}

TEST(AnnotateTest, OneHotRowHasNoBoundary) {
  const auto a = Annotate(MakeDataset({{1, 0}}, {{1.0, 0.0}}), 0.05);
  EXPECT_EQ(a.margin_utility[0], 0.0);
  EXPECT_FALSE(a.boundary[0].has_value());
}

TEST(AnnotateTest, SymmetricTie) {
  const auto a = Annotate(MakeDataset({{1, 0}}, {{0.5, 0.5}}), 0.05);
  EXPECT_EQ(a.margin_utility[0], 1.0);
  EXPECT_EQ(a.pseudo_label[0], 0);
  EXPECT_EQ(*a.boundary[0], (ClassPair{0, 1}));
  const auto b = Annotate(MakeDataset({{1, 0}}, {{0.2, 0.4, 0.4}}), 0.05);
  EXPECT_EQ(b.pseudo_label[0], 1);
  EXPECT_EQ(*b.boundary[0], (ClassPair{1, 2}));
}

TEST(AnnotateTest, BoundaryPairIsUnordered) {
  const auto a = Annotate(MakeDataset({{1, 0}}, {{0.1, 0.3, 0.6}}), 0.05);
  EXPECT_EQ(a.pseudo_label[0], 2);
  EXPECT_EQ(*a.boundary[0], (ClassPair{1, 2}));
}

TEST(AnnotateTest, BoundaryIffUtilityAboveTau) {
  testkit::SyntheticSpec spec;
  spec.n = 300;
  spec.seed = 3;
  spec.temperature = 0.2;
  const DatasetInputs d = testkit::GenerateInstance(spec).dataset;
  for (double tau : {0.0, 0.05, 0.3, 0.5, 0.9, 1.0}) {
    const auto a = Annotate(d, tau);
    for (Index i = 0; i < d.size(); ++i) {
      EXPECT_GE(a.margin_utility[i], 0.0);
      EXPECT_LE(a.margin_utility[i], 1.0);
      EXPECT_EQ(a.boundary[i].has_value(), a.margin_utility[i] > tau);
    }
  }
  const auto x = Annotate(d, 0.05), y = Annotate(d, 0.05);
  EXPECT_EQ(x.margin_utility, y.margin_utility);
  EXPECT_EQ(x.boundary, y.boundary);
}

TEST(AnnotateTest, RejectsTauOutsideUnitInterval) {
  const DatasetInputs d = MakeDataset({{1, 0}}, {{0.5, 0.5}});
  EXPECT_THROW(Annotate(d, -0.1), Error);
  EXPECT_THROW(Annotate(d, 1.5), Error);
}

SampleAnnotations WithBoundaries(const std::vector<std::optional<ClassPair>>& b) {
  SampleAnnotations a;
  a.boundary = b;
  a.margin_utility.assign(b.size(), 0.5);
  a.pseudo_label.assign(b.size(), 0);
  return a;
}

TEST(BoundaryHistogramTest, AllNone) {
  const auto h = ComputeBoundaryHistogram(
      WithBoundaries({std::nullopt, std::nullopt}), 4);
  EXPECT_TRUE(h.counts.empty());
  EXPECT_EQ(h.coverage, 0.0);
}

TEST(BoundaryHistogramTest, DirectCount) {
  const ClassPair a{0, 1}, b{1, 2};
  const auto h = ComputeBoundaryHistogram(WithBoundaries({a, a, a, b}), 3);
  ASSERT_EQ(h.counts.size(), 2u);
  EXPECT_EQ(h.counts.at(a), 3u);
  EXPECT_EQ(h.counts.at(b), 1u);
  EXPECT_DOUBLE_EQ(h.coverage, 2.0 / 3.0);
}

TEST(BoundaryHistogramTest, ThousandClassesFifteenPercentCovered) {
  constexpr std::int32_t L = 1000;
  const std::size_t pairs = L * (L - 1) / 2;
  const std::size_t covered = pairs * 15 / 100;
  std::vector<std::optional<ClassPair>> b;
  b.reserve(covered + 10);
  std::size_t emitted = 0;
  for (std::int32_t i = 0; i < L && emitted < covered; ++i) {
    for (std::int32_t j = i + 1; j < L && emitted < covered; ++j, ++emitted) {
      b.push_back(ClassPair{i, j});
    }
  }
  for (int i = 0; i < 10; ++i) b.push_back(std::nullopt);
  const auto h = ComputeBoundaryHistogram(WithBoundaries(b), L);
  EXPECT_EQ(h.counts.size(), covered);
  EXPECT_EQ(h.coverage, 0.15);
}

TEST(BoundaryHistogramTest, SumEqualsBoundaryCount) {
  testkit::SyntheticSpec spec;
  spec.n = 200;
  spec.num_classes = 6;
  spec.temperature = 0.1;
  const auto a = Annotate(testkit::GenerateInstance(spec).dataset, 0.05);
  const auto h = ComputeBoundaryHistogram(a, 6);
  std::size_t sum = 0, expected = 0;
  for (const auto& [pair, count] : h.counts) sum += count;
  for (double u : a.margin_utility) expected += u > 0.05;
  EXPECT_EQ(sum, expected);
}

TEST(AnnotationsJsonTest, RoundTrip) {
  const auto a = Annotate(
      MakeDataset({{1, 0}, {0, 1}}, {{0.6, 0.3, 0.1}, {1.0, 0.0, 0.0}}), 0.05);
  std::size_t L = 0;
  const auto back = AnnotationsFromJson(AnnotationsToJson(a, 3), &L);
  EXPECT_EQ(L, 3u);
  EXPECT_EQ(back.margin_utility, a.margin_utility);
  EXPECT_EQ(back.pseudo_label, a.pseudo_label);
  EXPECT_EQ(back.boundary, a.boundary);
  EXPECT_EQ(back.tau, a.tau);
  EXPECT_THROW(AnnotationsFromJson("{not json", &L), Error);
}

}  // namespace
}  // namespace subsel
