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

#ifndef RBN_BINARY_IO_H_
#define RBN_BINARY_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace rbn {

// Little-endian encoder appending to an in-memory buffer.
class ByteWriter {
 public:
  void Bytes(std::string_view s) { buf_.append(s); }
  void U8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void U32(std::uint32_t v);
  void U64(std::uint64_t v);
  void F32(float v);
  void F64(double v);

  const std::string& buffer() const { return buf_; }
  std::string Release() { return std::move(buf_); }

 private:
  std::string buf_;
};

// Little-endian decoder over a byte buffer. Running past the end throws
// TruncatedError naming `what`.
class ByteReader {
 public:
  ByteReader(std::string_view data, std::string what)
      : data_(data), what_(std::move(what)) {}

  std::string_view Bytes(std::size_t n);
  std::uint8_t U8();
  std::uint32_t U32();
  std::uint64_t U64();
  float F32();
  double F64();
  // Reads up to and including '\n'; returns the line without it.
  std::string Line();

  std::size_t remaining() const { return data_.size() - pos_; }
  bool AtEnd() const { return pos_ == data_.size(); }
  const std::string& what() const { return what_; }

 private:
  void Need(std::size_t n) const;

  std::string_view data_;
  std::string what_;
  std::size_t pos_ = 0;
};

// Magic check shared by the file readers; throws BadMagicError.
void ExpectMagic(ByteReader& r, std::string_view magic);
// Version byte check; throws BadVersionError.
void ExpectVersion(ByteReader& r, std::uint8_t version);

std::string ReadFileBytes(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it over `path`, so a
// failed write never leaves a partial file at the destination.
void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view bytes);

}  // namespace rbn

#endif  // RBN_BINARY_IO_H_
