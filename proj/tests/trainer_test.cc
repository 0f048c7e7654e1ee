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

#include "rbn/trainer.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <gtest/gtest.h>

#include "rbn/error.h"

namespace rbn {
namespace {

std::vector<Matrix*> Ptrs(std::vector<Matrix>& ms) {
  std::vector<Matrix*> out;
  for (Matrix& m : ms) out.push_back(&m);
  return out;
}

TEST(ClipTest, ScalesDownLargeGradients) {
  Rng rng(1);
  std::vector<Matrix> g{GaussianMatrix(rng, 5, 5, 4.0),
                        GaussianMatrix(rng, 3, 1, 4.0)};
  auto ptrs = Ptrs(g);
  const double before = ClipGlobalNorm(ptrs, 5.0);
  EXPECT_GT(before, 5.0);
  std::vector<const Matrix*> cptrs(ptrs.begin(), ptrs.end());
  EXPECT_LE(GlobalNorm(cptrs), 5.0 + 1e-9);
  EXPECT_NEAR(GlobalNorm(cptrs), 5.0, 1e-9);
}

TEST(ClipTest, SmallGradientsUntouched) {
  std::vector<Matrix> g{Matrix(2, 2, {0.1, -0.2, 0.3, 0.0})};
  const std::vector<Matrix> copy = g;
  auto ptrs = Ptrs(g);
  ClipGlobalNorm(ptrs, 5.0);
  EXPECT_EQ(g, copy);
}

TEST(BucketsTest, PermutationOfIndices) {
  Rng rng(3);
  std::vector<std::size_t> lengths(103);
  for (std::size_t& l : lengths) l = 4 + rng.UniformInt(27);
  Rng brng(4);
  const auto buckets = MakeLengthBuckets(lengths, 8, brng);
  std::vector<std::size_t> all;
  for (const auto& b : buckets) {
    EXPECT_LE(b.size(), 8u);
    EXPECT_FALSE(b.empty());
    all.insert(all.end(), b.begin(), b.end());
  }
  std::sort(all.begin(), all.end());
  std::vector<std::size_t> expect(103);
  std::iota(expect.begin(), expect.end(), 0);
  EXPECT_EQ(all, expect);
  // Buckets hold similar lengths: spread inside a bucket stays small.
  std::size_t spread = 0;
  for (const auto& b : buckets) {
    std::size_t lo = 1000, hi = 0;
    for (std::size_t i : b) {
      lo = std::min(lo, lengths[i]);
      hi = std::max(hi, lengths[i]);
    }
    spread = std::max(spread, hi - lo);
  }
  EXPECT_LE(spread, 4u);
}

TEST(ParallelForTest, CoversAllAndPropagatesErrors) {
  std::vector<int> hits(50, 0);
  ParallelFor(50, 4, [&](std::size_t i) { hits[i] += 1; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 50);
  EXPECT_THROW(ParallelFor(10, 3,
                           [](std::size_t i) {
                             if (i == 7) throw std::runtime_error("boom");
                           }),
               std::runtime_error);
}

std::pair<Corpus, Corpus> ToyCorpora() {
  auto [train, ttext] = GenerateSyntheticCorpus(7, 24, 3, 3);
  SyntheticCorpusOptions opts;
  opts.start_index = 24;
  auto [val, vtext] = GenerateSyntheticCorpus(7, 8, 3, 3, opts);
  val.split = Split::kValidation;
  const MinMaxStats stats = FitMinMax(train);
  return {ApplyMinMax(train, stats), ApplyMinMax(val, stats)};
}

TrainConfig ToyConfig() {
  TrainConfig c;
  c.learning_rate = 0.1;
  c.batch_size = 4;
  c.max_epochs = 8;
  c.seed = 5;
  return c;
}

TEST(TrainRaeTest, ZeroLearningRateKeepsInitialParameters) {
  const auto [train, val] = ToyCorpora();
  Rng rng(2);
  const EdFvcParams init = InitEdFvc(3, 6, rng);
  TrainConfig cfg = ToyConfig();
  cfg.learning_rate = 0.0;
  cfg.max_epochs = 2;
  const RaeTrainResult r = TrainRae(train, val, init, cfg);
  EXPECT_EQ(r.params, init);
}

TEST(TrainRaeTest, ReducesLossDeterministicallyAcrossWorkerCounts) {
  const auto [train, val] = ToyCorpora();
  RaeModelConfig model;
  model.hidden_dim = 8;
  TrainConfig cfg = ToyConfig();
  const RaeTrainResult a = TrainRae(train, val, model, cfg);
  const RaeTrainResult b = TrainRae(train, val, model, cfg);
  cfg.workers = 3;
  const RaeTrainResult c = TrainRae(train, val, model, cfg);
  EXPECT_EQ(a.params, b.params);
  EXPECT_EQ(a.params, c.params);
  EXPECT_EQ(a.report.epochs, c.report.epochs);
  ASSERT_GE(a.report.epochs.size(), 2u);
  EXPECT_EQ(a.report.epochs[0].epoch, 0u);
  const double best = a.report.epochs[a.report.best_epoch].val_loss;
  for (const EpochRecord& e : a.report.epochs) EXPECT_GE(e.val_loss, best);
  EXPECT_LT(best, a.report.epochs[0].val_loss);
  // The returned parameters are the best epoch's.
  EXPECT_DOUBLE_EQ(RaeCorpusLoss(a.params, val), best);
}

TEST(TrainRaeTest, ReportText) {
  TrainReport r;
  r.epochs.push_back({0, 1.5, 1.25, 0.1});
  r.epochs.push_back({1, 0.5, 0.75, 0.1});
  r.best_epoch = 1;
  const std::string text = r.ToText();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_NE(text.find("\"val_loss\":0.75"), std::string::npos);
  EXPECT_NE(text.find("\"epoch\":1"), std::string::npos);
}

TEST(TrainConfigTest, Validate) {
  TrainConfig c;
  c.Validate();
  c.batch_size = 0;
  EXPECT_THROW(c.Validate(), InvalidArgument);
  c = TrainConfig{};
  c.learning_rate = -1.0;
  EXPECT_THROW(c.Validate(), InvalidArgument);
  c = TrainConfig{};
  c.clip_norm = 0.0;
  EXPECT_THROW(c.Validate(), InvalidArgument);
}

TEST(TrainDnnTest, LearnsLinearMap) {
  Rng rng(10);
  const Matrix w = GaussianMatrix(rng, 3, 4, 1.0);
  auto make = [&](std::size_t n) {
    Matrix x = GaussianMatrix(rng, n, 4, 1.0), t(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
      const Vector y = MatVec(w, x.row(i));
      for (std::size_t j = 0; j < 3; ++j) t(i, j) = y[j] + 0.5;
    }
    return std::pair{x, t};
  };
  const auto [x, t] = make(800);
  const auto [vx, vt] = make(200);
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.batch_size = 16;
  cfg.max_epochs = 200;
  cfg.early_stop_patience = 20;
  const DnnTrainResult r = TrainDnn(x, t, vx, vt, ParseArch("4L 3L"), cfg);
  double sq = 0.0, mean = 0.0;
  for (double v : vt.values()) mean += v;
  mean /= vt.size();
  double var = 0.0;
  for (std::size_t i = 0; i < vx.rows(); ++i) {
    const Vector y = DnnForward(r.params, vx.row(i));
    for (std::size_t j = 0; j < 3; ++j) {
      sq += (y[j] - vt(i, j)) * (y[j] - vt(i, j));
      var += (vt(i, j) - mean) * (vt(i, j) - mean);
    }
  }
  EXPECT_LT(std::sqrt(sq / vt.size()), 0.01 * std::sqrt(var / vt.size()));
}

TEST(TrainDnnTest, DivergenceIsReported) {
  Rng rng(1);
  Matrix x = GaussianMatrix(rng, 20, 2, 1.0);
  Matrix t = GaussianMatrix(rng, 20, 1, 1.0);
  x(3, 0) = std::nan("");
  TrainConfig cfg;
  cfg.max_epochs = 1;
  EXPECT_THROW(TrainDnn(x, t, x, t, ParseArch("2L 1L"), cfg), DivergenceError);
}

TEST(RbnTest, ExtractCountsAndPurity) {
  const auto [train, val] = ToyCorpora();
  Rng rng(4);
  const EdFvcParams p = InitEdFvc(3, 6, rng);
  const auto recs = ExtractRbn(p, train);
  ASSERT_EQ(recs.size(), train.num_units());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    EXPECT_EQ(recs[i].num_frames, train.units[i].num_frames());
    EXPECT_EQ(recs[i].context.size(), 6u);
  }
  EXPECT_EQ(ExtractRbn(p, train), recs);
  const Matrix m = RbnMatrix(recs);
  EXPECT_EQ(m.ShapeString(), std::to_string(recs.size()) + "x6");
  Rng other(5);
  EXPECT_THROW(ExtractRbn(InitEdFvc(4, 6, other), train), DimensionError);
}

TEST(FrameDatasetTest, RowsMatchFrames) {
  const auto [corpus, text] = GenerateSyntheticCorpus(3, 15, 2, 3);
  const FrameDataset fd = BuildFrameDataset(text, corpus, true);
  EXPECT_EQ(fd.inputs.rows(), corpus.total_frames());
  EXPECT_EQ(fd.targets.rows(), corpus.total_frames());
  EXPECT_EQ(fd.inputs.cols(), text.dim() + 1);
  EXPECT_EQ(fd.targets.cols(), 2u);
}

TEST(SynthPipelineTest, CountsAndZeroDecoder) {
  const auto [corpus, text] = GenerateSyntheticCorpus(3, 6, 2, 3);
  Rng rng(2);
  const DnnParams dnn =
      InitDnn(ArchSpec{{text.dim(), 5}, {Activation::kLinear,
                                         Activation::kLinear}},
              rng);
  const std::vector<std::size_t> durations = Durations(corpus);
  EdFvcParams rae = EdFvcParams::Zeros(2, 5);
  const Corpus out = SynthPipeline(dnn, rae, text, durations);
  ASSERT_EQ(out.num_units(), 6u);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(out.units[i].num_frames(), durations[i]);
    for (double v : out.units[i].frames.values()) EXPECT_EQ(v, 0.0);
  }
  const EdFvcParams wrong_h = EdFvcParams::Zeros(2, 4);
  EXPECT_THROW(SynthPipeline(dnn, wrong_h, text, durations), DimensionError);
}

}  // namespace
}  // namespace rbn
