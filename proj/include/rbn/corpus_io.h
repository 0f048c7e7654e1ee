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

#ifndef RBN_CORPUS_IO_H_
#define RBN_CORPUS_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rbn/features.h"

namespace rbn {

// File formats, little-endian throughout:
//
//   UFSB corpus:   "UFSB" u8(1) u32 D u32 N, then N x [u32 T, u32 label,
//                  T*D f32 row-major]
//   UTXF text:     "UTXF" u8(1) u32 dim u32 N, then N*dim f32
//   URBN vectors:  "URBN" u8(1) u32 H u32 N, then N x [u32 T, H f64]
//
// Readers throw BadMagicError, BadVersionError, TruncatedError or
// InconsistentDimensionError. Frames are widened from f32 on load.

std::string SerializeCorpus(const Corpus& corpus);
Corpus ParseCorpus(std::string_view bytes, const std::string& what = "UFSB");
void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus ReadCorpus(const std::filesystem::path& path);

std::string SerializeTextFeatures(const TextFeatureTable& table);
TextFeatureTable ParseTextFeatures(std::string_view bytes,
                                   const std::string& what = "UTXF");
void WriteTextFeatures(const TextFeatureTable& table,
                       const std::filesystem::path& path);
TextFeatureTable ReadTextFeatures(const std::filesystem::path& path);

std::string SerializeRbn(const std::vector<RbnRecord>& records);
std::vector<RbnRecord> ParseRbn(std::string_view bytes,
                                const std::string& what = "URBN");
void WriteRbn(const std::vector<RbnRecord>& records,
              const std::filesystem::path& path);
std::vector<RbnRecord> ReadRbn(const std::filesystem::path& path);

}  // namespace rbn

#endif  // RBN_CORPUS_IO_H_
