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

#include "rbn/binary_io.h"

#include <bit>
#include <fstream>
#include <sstream>
#include <system_error>

#include "rbn/error.h"

namespace rbn {

void ByteWriter::U32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::U64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) U8(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::F32(float v) { U32(std::bit_cast<std::uint32_t>(v)); }

void ByteWriter::F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }

void ByteReader::Need(std::size_t n) const {
  if (remaining() < n) {
    throw TruncatedError(what_ + ": truncated payload (needed " +
                         std::to_string(n) + " more bytes at offset " +
                         std::to_string(pos_) + ", have " +
                         std::to_string(remaining()) + ")");
  }
}

std::string_view ByteReader::Bytes(std::size_t n) {
  Need(n);
  std::string_view s = data_.substr(pos_, n);
  pos_ += n;
  return s;
}

std::uint8_t ByteReader::U8() {
  Need(1);
  return static_cast<std::uint8_t>(data_[pos_++]);
}

std::uint32_t ByteReader::U32() {
  Need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(U8()) << (8 * i);
  return v;
}

std::uint64_t ByteReader::U64() {
  Need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(U8()) << (8 * i);
  return v;
}

float ByteReader::F32() { return std::bit_cast<float>(U32()); }

double ByteReader::F64() { return std::bit_cast<double>(U64()); }

std::string ByteReader::Line() {
  const std::size_t nl = data_.find('\n', pos_);
  if (nl == std::string_view::npos) {
    throw TruncatedError(what_ + ": truncated payload (unterminated header)");
  }
  std::string line(data_.substr(pos_, nl - pos_));
  pos_ = nl + 1;
  return line;
}

void ExpectMagic(ByteReader& r, std::string_view magic) {
  if (r.remaining() < magic.size() || r.Bytes(magic.size()) != magic) {
    throw BadMagicError(r.what() + ": bad magic (expected \"" +
                        std::string(magic) + "\")");
  }
}

void ExpectVersion(ByteReader& r, std::uint8_t version) {
  const std::uint8_t got = r.U8();
  if (got != version) {
    throw BadVersionError(r.what() + ": unsupported version " +
                          std::to_string(got));
  }
}

std::string ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed: " + path.string());
  return std::move(ss).str();
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      out.close();
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("write failed: " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw IoError("cannot move " + tmp.string() + " to " + path.string() +
                  ": " + ec.message());
  }
}

}  // namespace rbn
