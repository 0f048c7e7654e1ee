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

#include <limits>

#include "rbn/binary_io.h"
#include "rbn/error.h"

namespace rbn {

namespace {

constexpr std::uint8_t kVersion = 1;

std::uint32_t ToU32(std::size_t n, const char* what) {
  if (n > std::numeric_limits<std::uint32_t>::max()) {
    throw InvalidArgument(std::string(what) + " does not fit in 32 bits");
  }
  return static_cast<std::uint32_t>(n);
}

void ExpectEnd(const ByteReader& r) {
  if (!r.AtEnd()) {
    throw InconsistentDimensionError(
        r.what() + ": " + std::to_string(r.remaining()) +
        " trailing bytes after the declared records");
  }
}

// Rejects element counts that cannot fit in what is left of the buffer
// before allocating for them.
void ExpectAvailable(const ByteReader& r, std::uint64_t elements,
                     std::size_t width) {
  if (elements > r.remaining() / width) {
    throw TruncatedError(r.what() + ": truncated payload (header declares " +
                         std::to_string(elements) + " values, " +
                         std::to_string(r.remaining()) + " bytes left)");
  }
}

std::string WhatFor(const std::filesystem::path& path, const char* kind) {
  return std::string(kind) + " file " + path.string();
}

}  // namespace

std::string SerializeCorpus(const Corpus& corpus) {
  corpus.Validate();
  ByteWriter w;
  w.Bytes("UFSB");
  w.U8(kVersion);
  w.U32(ToU32(corpus.dim, "corpus dimension"));
  w.U32(ToU32(corpus.units.size(), "unit count"));
  for (const UnitSequence& u : corpus.units) {
    w.U32(ToU32(u.num_frames(), "frame count"));
    w.U32(u.label_id);
    for (double x : u.frames.values()) w.F32(static_cast<float>(x));
  }
  return w.Release();
}

Corpus ParseCorpus(std::string_view bytes, const std::string& what) {
  ByteReader r(bytes, what);
  ExpectMagic(r, "UFSB");
  ExpectVersion(r, kVersion);
  Corpus c;
  c.dim = r.U32();
  const std::uint32_t n = r.U32();
  if (c.dim == 0 && n > 0) {
    throw InconsistentDimensionError(what + ": zero feature dimension with " +
                                     std::to_string(n) + " units");
  }
  c.units.reserve(std::min<std::size_t>(n, r.remaining() / 8));
  for (std::uint32_t i = 0; i < n; ++i) {
    const std::uint32_t t = r.U32();
    const std::uint32_t label = r.U32();
    if (t == 0) {
      throw InconsistentDimensionError(what + ": unit " + std::to_string(i) +
                                       " declares zero frames");
    }
    const std::uint64_t count = std::uint64_t{t} * c.dim;
    ExpectAvailable(r, count, 4);
    std::vector<double> data(count);
    for (double& x : data) x = r.F32();
    c.units.push_back({label, Matrix(t, c.dim, std::move(data))});
  }
  ExpectEnd(r);
  return c;
}

void WriteCorpus(const Corpus& corpus, const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeCorpus(corpus));
}

Corpus ReadCorpus(const std::filesystem::path& path) {
  return ParseCorpus(ReadFileBytes(path), WhatFor(path, "UFSB"));
}

std::string SerializeTextFeatures(const TextFeatureTable& table) {
  ByteWriter w;
  w.Bytes("UTXF");
  w.U8(kVersion);
  w.U32(ToU32(table.dim(), "text dimension"));
  w.U32(ToU32(table.num_units(), "unit count"));
  for (double x : table.rows.values()) w.F32(static_cast<float>(x));
  return w.Release();
}

TextFeatureTable ParseTextFeatures(std::string_view bytes,
                                   const std::string& what) {
  ByteReader r(bytes, what);
  ExpectMagic(r, "UTXF");
  ExpectVersion(r, kVersion);
  const std::uint32_t dim = r.U32();
  const std::uint32_t n = r.U32();
  if (dim == 0 && n > 0) {
    throw InconsistentDimensionError(what + ": zero text dimension with " +
                                     std::to_string(n) + " units");
  }
  const std::uint64_t count = std::uint64_t{dim} * n;
  ExpectAvailable(r, count, 4);
  std::vector<double> data(count);
  for (double& x : data) x = r.F32();
  ExpectEnd(r);
  return {Matrix(n, dim, std::move(data))};
}

void WriteTextFeatures(const TextFeatureTable& table,
                       const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeTextFeatures(table));
}

TextFeatureTable ReadTextFeatures(const std::filesystem::path& path) {
  return ParseTextFeatures(ReadFileBytes(path), WhatFor(path, "UTXF"));
}

std::string SerializeRbn(const std::vector<RbnRecord>& records) {
  const std::size_t h = records.empty() ? 0 : records.front().context.size();
  ByteWriter w;
  w.Bytes("URBN");
  w.U8(kVersion);
  w.U32(ToU32(h, "RBN dimension"));
  w.U32(ToU32(records.size(), "record count"));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const RbnRecord& rec = records[i];
    if (rec.context.size() != h) {
      throw DimensionError("RBN record " + std::to_string(i) + " has " +
                           std::to_string(rec.context.size()) +
                           " values, expected " + std::to_string(h));
    }
    if (rec.num_frames == 0) {
      throw InvalidArgument("RBN record " + std::to_string(i) +
                            " has zero frames");
    }
    w.U32(rec.num_frames);
    for (double x : rec.context) w.F64(x);
  }
  return w.Release();
}

std::vector<RbnRecord> ParseRbn(std::string_view bytes,
                                const std::string& what) {
  ByteReader r(bytes, what);
  ExpectMagic(r, "URBN");
  ExpectVersion(r, kVersion);
  const std::uint32_t h = r.U32();
  const std::uint32_t n = r.U32();
  if (h == 0 && n > 0) {
    throw InconsistentDimensionError(what + ": zero RBN dimension with " +
                                     std::to_string(n) + " records");
  }
  ExpectAvailable(r, std::uint64_t{n} * (4 + 8 * std::uint64_t{h}), 1);
  std::vector<RbnRecord> out;
  out.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    RbnRecord rec;
    rec.num_frames = r.U32();
    if (rec.num_frames == 0) {
      throw InconsistentDimensionError(what + ": record " + std::to_string(i) +
                                       " declares zero frames");
    }
    rec.context.resize(h);
    for (double& x : rec.context) x = r.F64();
    out.push_back(std::move(rec));
  }
  ExpectEnd(r);
  return out;
}

void WriteRbn(const std::vector<RbnRecord>& records,
              const std::filesystem::path& path) {
  WriteFileAtomic(path, SerializeRbn(records));
}

std::vector<RbnRecord> ReadRbn(const std::filesystem::path& path) {
  return ParseRbn(ReadFileBytes(path), WhatFor(path, "URBN"));
}

}  // namespace rbn
