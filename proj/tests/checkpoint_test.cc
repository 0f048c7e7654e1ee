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

#include "rbn/checkpoint.h"

#include <filesystem>

#include <gtest/gtest.h>

#include "rbn/error.h"

namespace rbn {
namespace {

RaeModel SmallRae() {
  Rng rng(3);
  RaeModel m{InitEdFvc(3, 5, rng), MinMaxStats{{0.0, -1.0, 2.0}, {1.0, 1.0, 2.0}}};
  return m;
}

DnnModel SmallDnn() {
  Rng rng(4);
  DnnModel m;
  m.params = InitDnn(ParseArch("6L 8R 5L"), rng);
  m.params.layers[0].bias(2, 0) = 0.75;
  m.target = DnnTarget::kFrames;
  m.frame_position = true;
  return m;
}

TEST(CheckpointTest, RaeRoundTripIsBitExact) {
  const RaeModel m = SmallRae();
  const Checkpoint ck = ToCheckpoint(m);
  EXPECT_EQ(ck.kind, "EDFVC");
  EXPECT_EQ(ck.dim_in, 3u);
  EXPECT_EQ(ck.dim_out, 5u);
  const std::string bytes = SerializeCheckpoint(ck);
  EXPECT_EQ(bytes.substr(0, 8), "RBNCKPT1");
  EXPECT_EQ(RaeFromCheckpoint(ParseCheckpoint(bytes)), m);
  RaeModel bare = m;
  bare.norm.reset();
  EXPECT_EQ(RaeFromCheckpoint(ParseCheckpoint(SerializeCheckpoint(
                ToCheckpoint(bare)))),
            bare);
}

TEST(CheckpointTest, DnnRoundTrip) {
  const DnnModel m = SmallDnn();
  const Checkpoint ck = ParseCheckpoint(SerializeCheckpoint(ToCheckpoint(m)));
  EXPECT_EQ(ck.kind, "FFDNN");
  EXPECT_EQ(ck.attributes.at("arch"), "6L 8R 5L");
  EXPECT_EQ(DnnFromCheckpoint(ck), m);
}

TEST(CheckpointTest, HeaderIsOneJsonLine) {
  const std::string bytes = SerializeCheckpoint(ToCheckpoint(SmallRae()));
  const std::size_t nl = bytes.find('\n');
  ASSERT_NE(nl, std::string::npos);
  const std::string header = bytes.substr(8, nl - 8);
  EXPECT_EQ(header.front(), '{');
  EXPECT_EQ(header.back(), '}');
  EXPECT_NE(header.find("\"enc_recurrent\""), std::string::npos);
  std::size_t doubles = 0;
  for (const Matrix* p : SmallRae().params.matrices()) doubles += p->size();
  doubles += 6;  // norm_min, norm_max
  EXPECT_EQ(bytes.size() - nl - 1, doubles * 8);
}

TEST(CheckpointTest, Errors) {
  const std::string rae = SerializeCheckpoint(ToCheckpoint(SmallRae()));
  EXPECT_THROW(DnnFromCheckpoint(ParseCheckpoint(rae)), KindMismatchError);
  const std::string dnn = SerializeCheckpoint(ToCheckpoint(SmallDnn()));
  EXPECT_THROW(RaeFromCheckpoint(ParseCheckpoint(dnn)), KindMismatchError);
  std::string bad = rae;
  bad[0] = 'X';
  EXPECT_THROW(ParseCheckpoint(bad), BadMagicError);
  EXPECT_THROW(ParseCheckpoint(rae.substr(0, rae.size() - 8)), TruncatedError);
  EXPECT_THROW(ParseCheckpoint("RBNCKPT1{not json\n"), FormatError);
}

TEST(CheckpointTest, FileRoundTrip) {
  const auto path =
      std::filesystem::temp_directory_path() / "rbn_checkpoint_test.ckpt";
  const DnnModel m = SmallDnn();
  SaveDnn(m, path);
  EXPECT_EQ(LoadDnn(path), m);
  EXPECT_THROW(LoadRae(path), KindMismatchError);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace rbn
