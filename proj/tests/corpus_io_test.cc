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

#include "rbn/corpus_io.h"

#include <filesystem>

#include <gtest/gtest.h>

#include "rbn/binary_io.h"
#include "rbn/error.h"

namespace rbn {
namespace {

Corpus SmallCorpus() {
  Corpus c;
  c.dim = 2;
  c.units.push_back({3, Matrix(2, 2, {0.5, -1.0, 2.25, 0.0})});
  c.units.push_back({7, Matrix(1, 2, {1.0, 4.0})});
  return c;
}

TEST(UfsbTest, RoundTripAndLayout) {
  const Corpus c = SmallCorpus();
  const std::string bytes = SerializeCorpus(c);
  EXPECT_EQ(bytes.substr(0, 4), "UFSB");
  // magic, u8 version, D, N, then (T, label, T*D f32) per unit
  EXPECT_EQ(bytes.size(), 4u + 1 + 4 + 4 + (8 + 16) + (8 + 8));
  const Corpus back = ParseCorpus(bytes);
  EXPECT_EQ(back.dim, 2u);
  EXPECT_EQ(back.units, c.units);
}

TEST(UfsbTest, EmptyCorpus) {
  Corpus c;
  c.dim = 5;
  const Corpus back = ParseCorpus(SerializeCorpus(c));
  EXPECT_EQ(back.num_units(), 0u);
  EXPECT_EQ(back.dim, 5u);
}

TEST(UfsbTest, Errors) {
  std::string bytes = SerializeCorpus(SmallCorpus());
  std::string bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(ParseCorpus(bad), BadMagicError);
  std::string version = bytes;
  version[4] = 9;
  EXPECT_THROW(ParseCorpus(version), BadVersionError);
  for (std::size_t cut : {3u, 10u, 20u, 30u}) {
    EXPECT_THROW(ParseCorpus(bytes.substr(0, bytes.size() - cut)),
                 TruncatedError)
        << cut;
  }
  EXPECT_THROW(ParseCorpus(bytes + "zz"), InconsistentDimensionError);
  try {
    ParseCorpus(bytes.substr(0, bytes.size() - 4));
    FAIL();
  } catch (const TruncatedError& e) {
    EXPECT_NE(std::string(e.what()).find("truncated"), std::string::npos);
  }
}

TEST(UfsbTest, ZeroLengthUnitRejected) {
  ByteWriter w;
  w.Bytes("UFSB");
  w.U8(1);
  w.U32(2);  // D
  w.U32(1);  // N
  w.U32(0);  // T
  w.U32(0);  // label
  EXPECT_THROW(ParseCorpus(w.buffer()), InconsistentDimensionError);
}

TEST(UtxfTest, RoundTripAndErrors) {
  TextFeatureTable t;
  t.rows = Matrix(3, 4, {1, 0, 0, 0.5, 0, 1, 0, 0.25, 0, 0, 1, -0.125});
  const std::string bytes = SerializeTextFeatures(t);
  EXPECT_EQ(bytes.substr(0, 4), "UTXF");
  EXPECT_EQ(ParseTextFeatures(bytes), t);
  EXPECT_THROW(ParseTextFeatures(bytes.substr(0, bytes.size() - 1)),
               TruncatedError);
  EXPECT_THROW(ParseTextFeatures(SerializeCorpus(SmallCorpus())),
               BadMagicError);
}

TEST(UrbnTest, RoundTripAndErrors) {
  std::vector<RbnRecord> recs{{{0.5, -0.25, 0.125}, 12}, {{1.0, 2.0, 3.0}, 4}};
  const std::string bytes = SerializeRbn(recs);
  EXPECT_EQ(bytes.substr(0, 4), "URBN");
  EXPECT_EQ(ParseRbn(bytes), recs);
  EXPECT_THROW(ParseRbn(bytes.substr(0, bytes.size() - 2)), TruncatedError);
  recs[1].context.pop_back();
  EXPECT_THROW(SerializeRbn(recs), DimensionError);
}

TEST(FileTest, WriteReadAndMissing) {
  const auto dir = std::filesystem::temp_directory_path() / "rbn_corpus_io";
  std::filesystem::create_directories(dir);
  const Corpus c = SmallCorpus();
  WriteCorpus(c, dir / "c.ufsb");
  EXPECT_EQ(ReadCorpus(dir / "c.ufsb").units, c.units);
  EXPECT_FALSE(std::filesystem::exists(dir / "c.ufsb.tmp"));
  EXPECT_THROW(ReadCorpus(dir / "missing.ufsb"), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace rbn
