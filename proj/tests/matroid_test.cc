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

#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "subsel/testkit.h"

namespace subsel {
namespace {

SampleAnnotations WithLabels(std::vector<std::int32_t> labels) {
  SampleAnnotations a;
  a.margin_utility.assign(labels.size(), 0.5);
  a.boundary.assign(labels.size(), std::nullopt);
  a.pseudo_label = std::move(labels);
  return a;
}

SampleAnnotations WithBoundaryCounts(const std::vector<std::size_t>& per_pair,
                                     std::size_t none) {
  SampleAnnotations a;
  std::int32_t b = 1;
  for (std::size_t count : per_pair) {
    for (std::size_t s = 0; s < count; ++s) a.boundary.push_back(ClassPair{0, b});
    ++b;
  }
  a.boundary.insert(a.boundary.end(), none, std::nullopt);
  a.margin_utility.assign(a.boundary.size(), 0.5);
  a.pseudo_label.assign(a.boundary.size(), 0);
  return a;
}

TEST(ClassMatroidTest, CapsUseCeiling) {
  EXPECT_EQ(ClassMatroid(WithLabels(std::vector<std::int32_t>(100, 0)), 10, 0.3, 100)
                .capacity(0),
            3);
  EXPECT_EQ(ClassMatroid(WithLabels({0, 1, 2, 0, 1, 2, 0, 1, 2, 0}), 3, 0.5, 10)
                .capacities(),
            (std::vector<std::int64_t>{2, 2, 2}));
  EXPECT_EQ(ClassMatroid(WithLabels(std::vector<std::int32_t>(1000, 3)), 7, 0.2, 1000)
                .capacity(3),
            29);
  EXPECT_THROW(ClassMatroid(WithLabels({0}), 2, 0.0, 1), Error);
  EXPECT_THROW(ClassMatroid(WithLabels({0}), 2, 1.5, 1), Error);
}

TEST(ClassMatroidTest, CellsArePseudoLabels) {
  const PartitionMatroid m = ClassMatroid(WithLabels({2, 0, 2, 1}), 3, 0.5, 4);
  EXPECT_EQ(m.cell_of(0), 2);
  EXPECT_EQ(m.cell_of(3), 1);
  EXPECT_EQ(m.num_cells(), 3u);
}

TEST(BoundaryMatroidTest, CapsUseMaxOneRound) {
  const PartitionMatroid m = BoundaryMatroid(WithBoundaryCounts({1, 50, 25}, 3), 0.1);
  ASSERT_EQ(m.num_cells(), 3u);
  EXPECT_EQ(m.capacity(0), 1);
  EXPECT_EQ(m.capacity(1), 5);
  EXPECT_EQ(m.capacity(2), 3);  // round(2.5) = 3
  EXPECT_EQ(m.label(1), "0-2");
  EXPECT_EQ(m.cell_of(static_cast<Index>(m.ground_size() - 1)), kUnconstrained);
}

TEST(BoundaryMatroidTest, AllNoneImposesNothing) {
  const PartitionMatroid m = BoundaryMatroid(WithBoundaryCounts({}, 6), 0.1);
  EXPECT_EQ(m.num_cells(), 0u);
  for (std::uint32_t mask = 0; mask < 64; ++mask) {
    std::vector<Index> s;
    for (Index i = 0; i < 6; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    EXPECT_TRUE(m.IsIndependent(s));
  }
}

TEST(PartitionMatroidTest, RejectsInvalidConstruction) {
  EXPECT_THROW(PartitionMatroid("m", {0, 0}, {0}), Error);
  EXPECT_THROW(PartitionMatroid("m", {0, 3}, {1}), Error);
  EXPECT_THROW(PartitionMatroid("m", {0, -2}, {1}), Error);
}

TEST(PartitionMatroidTest, IndependenceCountsCells) {
  const PartitionMatroid m("m", {0, 0, 1, kUnconstrained, kUnconstrained}, {1, 2});
  EXPECT_TRUE(m.IsIndependent(std::vector<Index>{}));
  EXPECT_TRUE(m.IsIndependent(std::vector<Index>{0, 2, 3, 4}));
  EXPECT_FALSE(m.IsIndependent(std::vector<Index>{0, 1}));
}

TEST(PartitionMatroidTest, AxiomsHoldForGeneratedMatroids) {
  std::mt19937_64 rng(17);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testkit::MakeRandomInstance(seed, 3, 10);
    const double f = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    EXPECT_TRUE(testkit::CheckMatroidAxioms(
                    ClassMatroid(inst.annotations, inst.dataset().num_classes(), f,
                                 inst.dataset().size()))
                    .passed());
    EXPECT_TRUE(
        testkit::CheckMatroidAxioms(BoundaryMatroid(inst.annotations, f)).passed());
  }
}

TEST(PartitionMatroidTest, UniformMatroidCharacterisation) {
  for (std::int64_t r = 1; r <= 5; ++r) {
    const PartitionMatroid u("u", std::vector<std::int32_t>(6, 0), {r});
    for (std::uint32_t mask = 0; mask < 64; ++mask) {
      std::vector<Index> s;
      for (Index i = 0; i < 6; ++i) {
        if (mask & (1u << i)) s.push_back(i);
      }
      EXPECT_EQ(u.IsIndependent(s), static_cast<std::int64_t>(s.size()) <= r);
    }
  }
}

TEST(MatroidIntersectionTest, ExchangeCanFailForIntersections) {
  const PartitionMatroid a("a", {0, 0, 1}, {1, 1});
  const PartitionMatroid b("b", {0, 1, 1}, {1, 1});
  const MatroidIntersection both(3, {a, b});
  const auto r = testkit::CheckMatroidAxioms(
      [&](std::span<const Index> s) { return both.IsIndependent(s); }, 3);
  EXPECT_TRUE(r.empty_set_independent);
  EXPECT_TRUE(r.downward_closed);
  EXPECT_FALSE(r.exchange);
}

TEST(MatroidIntersectionTest, RejectsGroundSizeMismatch) {
  MatroidIntersection m(3);
  EXPECT_THROW(m.Add(PartitionMatroid("x", {0, 0}, {1})), Error);
}

MatroidIntersection TwoMatroids() {
  MatroidIntersection m(6);
  m.Add(PartitionMatroid("class", {0, 0, 0, 1, 1, 1}, {2, 1}));
  m.Add(PartitionMatroid("boundary", {0, 1, kUnconstrained, 0, 1, kUnconstrained},
                         {1, 1}));
  return m;
}

TEST(IntersectionCursorTest, EmptyCursorAcceptsEverything) {
  const MatroidIntersection m = TwoMatroids();
  IntersectionCursor c(m);
  for (Index e = 0; e < 6; ++e) EXPECT_TRUE(c.IsIndependentWith(e));
}

TEST(IntersectionCursorTest, SaturatedCellRejects) {
  const MatroidIntersection m = TwoMatroids();
  IntersectionCursor c(m);
  c.Commit(3);
  EXPECT_EQ(c.count(0, 1), 1);
  EXPECT_FALSE(c.IsIndependentWith(4));  // class cell 1 is full
  EXPECT_FALSE(c.IsIndependentWith(0));  // boundary cell 0 is full
  EXPECT_TRUE(c.IsIndependentWith(2));
}

TEST(IntersectionCursorTest, CommitPreconditions) {
  const MatroidIntersection m = TwoMatroids();
  IntersectionCursor c(m);
  c.Commit(2);
  EXPECT_THROW(c.Commit(2), std::logic_error);
  c.Commit(3);
  EXPECT_THROW(c.Commit(4), std::logic_error);
}

TEST(IntersectionCursorTest, UnconstrainedCellsNeverSaturate) {
  MatroidIntersection m(4);
  m.Add(PartitionMatroid("b", std::vector<std::int32_t>(4, kUnconstrained), {}));
  IntersectionCursor c(m);
  for (Index e = 0; e < 4; ++e) {
    ASSERT_TRUE(c.IsIndependentWith(e));
    c.Commit(e);
  }
  EXPECT_EQ(c.size(), 4u);
}

TEST(IntersectionCursorTest, AgreesWithRecountAndSaturationIsPermanent) {
  std::mt19937_64 rng(23);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto inst = testkit::MakeRandomInstance(seed, 10, 40);
    const Index n = inst.dataset().size();
    MatroidIntersection m(n);
    m.Add(ClassMatroid(inst.annotations, inst.dataset().num_classes(), 0.3, n));
    m.Add(BoundaryMatroid(inst.annotations, 0.3));
    IntersectionCursor c(m);
    std::vector<Index> s;
    std::vector<std::uint8_t> rejected(n, 0);
    std::vector<Index> order(n);
    for (Index i = 0; i < n; ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), rng);
    for (Index e : order) {
      for (Index x = 0; x < n; ++x) {
        if (c.contains(x)) continue;
        std::vector<Index> plus = s;
        plus.push_back(x);
        const bool ok = c.IsIndependentWith(x);
        EXPECT_EQ(ok, m.IsIndependent(plus));
        if (rejected[x]) {
          EXPECT_FALSE(ok);
        }
        if (!ok) rejected[x] = 1;
      }
      if (c.IsIndependentWith(e)) {
        c.Commit(e);
        s.push_back(e);
      }
    }
    for (std::size_t j = 0; j < m.size(); ++j) {
      std::vector<std::int64_t> tally(m[j].num_cells(), 0);
      for (Index e : s) {
        if (m[j].cell_of(e) != kUnconstrained) ++tally[m[j].cell_of(e)];
      }
      for (std::size_t cell = 0; cell < tally.size(); ++cell) {
        EXPECT_EQ(c.count(j, cell), tally[cell]);
      }
    }
    EXPECT_TRUE(testkit::RecountFeasible(m, s));
  }
}

TEST(RoundingTest, TolerantToFloatNoise) {
  EXPECT_EQ(CeilTolerant(0.3 * 100 / 10), 3);
  EXPECT_EQ(CeilTolerant(3.01), 4);
  EXPECT_EQ(RoundTolerant(0.1 * 50), 5);
  EXPECT_EQ(RoundTolerant(0.35 * 10), 4);
  EXPECT_EQ(RoundTolerant(0.1), 0);
}

}  // namespace
}  // namespace subsel
