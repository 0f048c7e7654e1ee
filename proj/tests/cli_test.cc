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

#include "rbn/cli.h"

#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "rbn/checkpoint.h"
#include "rbn/corpus_io.h"
#include "rbn/eval.h"

namespace rbn {
namespace {

namespace fs = std::filesystem;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("rbn_cli_" + std::string(::testing::UnitTest::GetInstance()
                                         ->current_test_info()
                                         ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return RunCli(args, out_, err_);
  }
  std::string P(const std::string& name) const { return (dir_ / name).string(); }

  void Gen(std::size_t units, std::size_t dim, const std::string& name,
           std::size_t start = 0) {
    ASSERT_EQ(Run({"gen-corpus", "--seed", "3", "--units",
                   std::to_string(units), "--dim", std::to_string(dim),
                   "--labels", "4", "--start-index", std::to_string(start),
                   "--out", P(name + ".ufsb"), "--text-out",
                   P(name + ".utxf")}),
              0)
        << err_.str();
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, GenCorpusShapes) {
  Gen(100, 50, "c");
  const Corpus c = ReadCorpus(P("c.ufsb"));
  EXPECT_EQ(c.num_units(), 100u);
  EXPECT_EQ(c.dim, 50u);
  EXPECT_EQ(ReadTextFeatures(P("c.utxf")).num_units(), 100u);
  Gen(0, 50, "empty");
  EXPECT_EQ(ReadCorpus(P("empty.ufsb")).num_units(), 0u);
}

TEST_F(CliTest, MissingRequiredFlagIsUsageError) {
  EXPECT_EQ(Run({"train-rae", "--ckpt", P("m.ckpt")}), 2);
  EXPECT_NE(err_.str().find("--corpus"), std::string::npos) << err_.str();
  EXPECT_EQ(Run({"no-such-command"}), 2);
  EXPECT_EQ(Run({"train-dnn", "--text", P("x"), "--ckpt", P("y")}), 2);
}

TEST_F(CliTest, ZeroEpochsSavesInitialisation) {
  Gen(10, 50, "c");
  ASSERT_EQ(Run({"train-rae", "--corpus", P("c.ufsb"), "--hidden", "500",
                 "--epochs", "0", "--seed", "9", "--ckpt", P("m.ckpt")}),
            0)
      << err_.str();
  const RaeModel m = LoadRae(P("m.ckpt"));
  EXPECT_EQ(m.params.enc_input.ShapeString(), "500x50");
  EXPECT_EQ(m.params.enc_recurrent.ShapeString(), "500x500");
  EXPECT_EQ(m.params.out_state.ShapeString(), "50x500");
  EXPECT_EQ(m.params.out_prev.ShapeString(), "50x50");
  Rng rng = Rng::Derive(9, 1);
  EXPECT_EQ(m.params, InitEdFvc(50, 500, rng));
  EXPECT_TRUE(m.norm.has_value());
  EXPECT_TRUE(fs::exists(P("m.ckpt.report")));
}

TEST_F(CliTest, GradCheckPasses) {
  EXPECT_EQ(Run({"grad-check", "--seeds", "2"}), 0) << out_.str();
  EXPECT_NE(out_.str().find("PASS"), std::string::npos);
  EXPECT_EQ(out_.str().find("FAIL"), std::string::npos);
}

TEST_F(CliTest, SelfEvaluationIsZero) {
  Gen(12, 6, "c");
  ASSERT_EQ(Run({"eval-mcd", "--ref", P("c.ufsb"), "--pred", P("c.ufsb"),
                 "--report", P("r.txt")}),
            0);
  const EvalReport r = ParseReport(out_.str());
  EXPECT_EQ(r.mean_mcd_db, 0.0);
  EXPECT_EQ(r.n_units, 12u);
  EXPECT_TRUE(fs::exists(P("r.txt")));
}

TEST_F(CliTest, EncodeDecodeEvaluateLoop) {
  Gen(40, 4, "train");
  Gen(10, 4, "val", 40);
  ASSERT_EQ(Run({"train-rae", "--corpus", P("train.ufsb"), "--val",
                 P("val.ufsb"), "--hidden", "16", "--epochs", "5", "--lr",
                 "0.1", "--batch", "8", "--ckpt", P("m.ckpt")}),
            0)
      << err_.str();
  ASSERT_EQ(Run({"encode", "--corpus", P("val.ufsb"), "--ckpt", P("m.ckpt"),
                 "--out", P("val.urbn")}),
            0)
      << err_.str();
  const auto recs = ReadRbn(P("val.urbn"));
  ASSERT_EQ(recs.size(), 10u);
  EXPECT_EQ(recs[0].context.size(), 16u);
  ASSERT_EQ(Run({"decode", "--rbn", P("val.urbn"), "--ckpt", P("m.ckpt"),
                 "--out", P("rec.ufsb"), "--labels-from", P("val.ufsb")}),
            0)
      << err_.str();
  const Corpus ref = ReadCorpus(P("val.ufsb"));
  const Corpus rec = ReadCorpus(P("rec.ufsb"));
  ASSERT_EQ(rec.num_units(), ref.num_units());
  for (std::size_t i = 0; i < ref.num_units(); ++i) {
    EXPECT_EQ(rec.units[i].num_frames(), ref.units[i].num_frames());
    EXPECT_EQ(rec.units[i].label_id, ref.units[i].label_id);
  }
  ASSERT_EQ(Run({"eval-mcd", "--ref", P("val.ufsb"), "--pred", P("rec.ufsb")}),
            0);
  const EvalReport r = ParseReport(out_.str());
  EXPECT_GT(r.mean_mcd_db, 0.0);
  EXPECT_EQ(r.n_frames, ref.total_frames());
}

TEST_F(CliTest, DeltasAndExport) {
  Gen(5, 3, "c");
  ASSERT_EQ(Run({"deltas", "--corpus", P("c.ufsb"), "--out", P("d.ufsb")}), 0);
  EXPECT_EQ(ReadCorpus(P("d.ufsb")).dim, 9u);
  ASSERT_EQ(Run({"export", "--corpus", P("c.ufsb"), "--unit", "2", "--out",
                 P("u.csv")}),
            0);
  EXPECT_TRUE(fs::exists(P("u.csv")));
  EXPECT_EQ(Run({"export", "--corpus", P("c.ufsb"), "--unit", "99", "--out",
                 P("u.csv")}),
            1);
}

}  // namespace
}  // namespace rbn
