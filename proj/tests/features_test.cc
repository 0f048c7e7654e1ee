// Copyright 2026 The rbnkit Authors
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

#include "rbn/features.h"

#include <cmath>

#include <gtest/gtest.h>

#include "rbn/error.h"

namespace rbn {
namespace {

Corpus MakeCorpus(std::vector<Matrix> frames, Split split = Split::kTrain) {
  Corpus c;
  c.dim = frames.front().cols();
  c.split = split;
  for (Matrix& m : frames) c.units.push_back({0, std::move(m)});
  return c;
}

TEST(DeltasTest, ConstantSequenceHasZeroDeltas) {
  const Matrix frames(5, 2, 3.5);
  const Matrix out = ComputeDeltas(frames);
  ASSERT_EQ(out.ShapeString(), "5x6");
  for (std::size_t t = 0; t < 5; ++t) {
    EXPECT_EQ(out(t, 0), 3.5);
    EXPECT_EQ(out(t, 1), 3.5);
    for (std::size_t j = 2; j < 6; ++j) EXPECT_EQ(out(t, j), 0.0);
  }
}

TEST(DeltasTest, RampWithEdgeReplication) {
  Matrix frames(4, 1);
  for (std::size_t t = 0; t < 4; ++t) frames(t, 0) = 2.0 * t;  // 0 2 4 6
  const Matrix out = ComputeDeltas(frames);
  // Interior deltas equal the slope; edges see a replicated frame.
  EXPECT_EQ(out(0, 1), 1.0);
  EXPECT_EQ(out(1, 1), 2.0);
  EXPECT_EQ(out(2, 1), 2.0);
  EXPECT_EQ(out(3, 1), 1.0);
  EXPECT_EQ(out(0, 2), 0.5);
  EXPECT_EQ(out(1, 2), 0.0);
  EXPECT_EQ(out(2, 2), 0.0);
  EXPECT_EQ(out(3, 2), -0.5);
}

TEST(DeltasTest, SingleFrameAndWideInput) {
  EXPECT_EQ(ComputeDeltas(Matrix(1, 3, 1.0)).ShapeString(), "1x9");
  Rng rng(1);
  const Matrix wide = GaussianMatrix(rng, 7, 50, 1.0);
  EXPECT_EQ(ComputeDeltas(wide).cols(), 150u);
  EXPECT_THROW(ComputeDeltas(Matrix(0, 3)), InvalidArgument);
}

TEST(DeltasTest, CorpusLevelRejectsDoubleApplication) {
  Rng rng(2);
  const Corpus c = MakeCorpus({GaussianMatrix(rng, 3, 4, 1.0)});
  const Corpus d = WithDeltas(c);
  EXPECT_EQ(d.dim, 12u);
  EXPECT_EQ(d.delta_static_dim, 4u);
  EXPECT_THROW(WithDeltas(d), InvalidArgument);
  const Corpus s = StripDeltas(d, 4);
  EXPECT_EQ(s.dim, 4u);
  EXPECT_EQ(s.units[0].frames, c.units[0].frames);
  EXPECT_THROW(StripDeltas(c, 5), DimensionError);
}

TEST(MinMaxTest, EndpointsAndConstantColumn) {
  const Corpus c = MakeCorpus({Matrix(2, 2, {1.0, 7.0, 3.0, 7.0}),
                               Matrix(1, 2, {5.0, 7.0})});
  const MinMaxStats stats = FitMinMax(c);
  EXPECT_EQ(stats.min, (Vector{1.0, 7.0}));
  EXPECT_EQ(stats.max, (Vector{5.0, 7.0}));
  const Matrix n = ApplyMinMax(Matrix(3, 2, {1.0, 7.0, 5.0, 7.0, 3.0, 7.0}),
                               stats);
  EXPECT_NEAR(n(0, 0), 0.01, 1e-15);
  EXPECT_NEAR(n(1, 0), 0.99, 1e-15);
  EXPECT_NEAR(n(2, 0), 0.5, 1e-15);
  for (std::size_t t = 0; t < 3; ++t) EXPECT_EQ(n(t, 1), 0.5);
}

TEST(MinMaxTest, InverseRoundTripAndRange) {
  Rng rng(3);
  std::vector<Matrix> frames;
  for (int i = 0; i < 10; ++i) frames.push_back(GaussianMatrix(rng, 6, 5, 4.0));
  const Corpus c = MakeCorpus(frames);
  const MinMaxStats stats = FitMinMax(c);
  const Corpus n = ApplyMinMax(c, stats);
  for (const UnitSequence& u : n.units) {
    for (double v : u.frames.values()) {
      EXPECT_GE(v, 0.01 - 1e-12);
      EXPECT_LE(v, 0.99 + 1e-12);
    }
  }
  const Corpus back = InvertMinMax(n, stats);
  for (std::size_t i = 0; i < c.units.size(); ++i) {
    const auto& a = c.units[i].frames.values();
    const auto& b = back.units[i].frames.values();
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-12);
  }
}

TEST(MinMaxTest, FitRequiresTrainingSplit) {
  const Corpus val = MakeCorpus({Matrix(2, 2, 1.0)}, Split::kValidation);
  EXPECT_THROW(FitMinMax(val), InvalidArgument);
  const MinMaxStats stats{{0.0}, {1.0}};
  EXPECT_THROW(ApplyMinMax(Matrix(2, 2), stats), DimensionError);
}

TEST(UpsampleTest, RowsAndPosition) {
  const Vector text{1.0, 2.0, 3.0};
  const Matrix one = UpsampleText(text, 1, true);
  EXPECT_EQ(one.ShapeString(), "1x4");
  EXPECT_EQ(one(0, 3), 0.5);
  const Matrix m = UpsampleText(text, 14, true);
  EXPECT_EQ(m.ShapeString(), "14x4");
  for (std::size_t t = 0; t < 14; ++t) {
    EXPECT_EQ(m(t, 0), 1.0);
    EXPECT_EQ(m(t, 2), 3.0);
    EXPECT_DOUBLE_EQ(m(t, 3), (t + 0.5) / 14.0);
  }
  EXPECT_EQ(UpsampleText(text, 5).ShapeString(), "5x3");
  EXPECT_THROW(UpsampleText(text, 0), InvalidArgument);
}

TEST(UpsampleTest, TotalRowsEqualTotalFrames) {
  const auto [corpus, text] = GenerateSyntheticCorpus(4, 40, 3, 4);
  std::size_t rows = 0;
  for (std::size_t i = 0; i < corpus.num_units(); ++i) {
    rows += UpsampleText(text.rows.row(i), corpus.units[i].num_frames()).rows();
  }
  EXPECT_EQ(rows, corpus.total_frames());
}

TEST(SyntheticTest, DurationStatistics) {
  const auto [corpus, text] = GenerateSyntheticCorpus(2016, 10000, 2, 8);
  EXPECT_EQ(corpus.num_units(), 10000u);
  EXPECT_EQ(text.num_units(), 10000u);
  EXPECT_EQ(text.dim(), kDefaultTextDim);
  for (const UnitSequence& u : corpus.units) {
    EXPECT_GE(u.num_frames(), 4u);
    EXPECT_LE(u.num_frames(), 30u);
    EXPECT_LT(u.label_id, 8u);
  }
  const double mean =
      static_cast<double>(corpus.total_frames()) / corpus.num_units();
  EXPECT_GE(mean, 12.0);
  EXPECT_LE(mean, 16.0);
  std::size_t hist_total = 0;
  for (const auto& [len, count] : DurationHistogram(corpus)) hist_total += count;
  EXPECT_EQ(hist_total, 10000u);
}

TEST(SyntheticTest, DeterministicAndSliceable) {
  const auto a = GenerateSyntheticCorpus(9, 30, 4, 3);
  const auto b = GenerateSyntheticCorpus(9, 30, 4, 3);
  EXPECT_EQ(a.first.units, b.first.units);
  EXPECT_EQ(a.second, b.second);
  SyntheticCorpusOptions opts;
  opts.start_index = 10;
  const auto tail = GenerateSyntheticCorpus(9, 20, 4, 3, opts);
  for (std::size_t i = 0; i < 20; ++i) {
    EXPECT_EQ(tail.first.units[i], a.first.units[10 + i]);
  }
  const auto other = GenerateSyntheticCorpus(10, 30, 4, 3);
  EXPECT_NE(other.first.units, a.first.units);
}

TEST(SyntheticTest, ValuesAreFloatExactAndTextPadded) {
  const auto [corpus, text] = GenerateSyntheticCorpus(5, 20, 3, 4);
  for (const UnitSequence& u : corpus.units) {
    for (double v : u.frames.values()) {
      EXPECT_EQ(v, static_cast<double>(static_cast<float>(v)));
    }
  }
  const std::size_t informative = SyntheticTextInformativeDim(4);
  EXPECT_EQ(informative, 10u);
  for (double v : text.rows.values()) {
    EXPECT_EQ(v, static_cast<double>(static_cast<float>(v)));
  }
  for (std::size_t i = 0; i < text.num_units(); ++i) {
    for (std::size_t j = informative; j < text.dim(); ++j) {
      EXPECT_EQ(text.rows(i, j), 0.0);
    }
    EXPECT_EQ(text.rows(i, corpus.units[i].label_id), 1.0);
  }
}

TEST(SyntheticTest, EmptyAndInvalid) {
  const auto [corpus, text] = GenerateSyntheticCorpus(1, 0, 3, 2);
  EXPECT_EQ(corpus.num_units(), 0u);
  EXPECT_EQ(text.num_units(), 0u);
  EXPECT_THROW(GenerateSyntheticCorpus(1, 5, 0, 2), InvalidArgument);
  EXPECT_THROW(GenerateSyntheticCorpus(1, 5, 3, 0), InvalidArgument);
}

TEST(CorpusTest, ValidateCatchesDimensionDrift) {
  Corpus c = MakeCorpus({Matrix(2, 3), Matrix(4, 3)});
  c.Validate();
  EXPECT_EQ(c.total_frames(), 6u);
  c.units.push_back({0, Matrix(2, 2)});
  EXPECT_THROW(c.Validate(), InconsistentDimensionError);
}

}  // namespace
}  // namespace rbn
