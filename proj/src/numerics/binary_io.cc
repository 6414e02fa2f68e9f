// numerics/binary_io.cc

// Copyright 2026 The lfvctc Authors
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

#include "numerics/binary_io.h"

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include "numerics/errors.h"

namespace lfv {

void BinaryWriter::Bytes(std::string_view bytes) {
  os_.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

void BinaryWriter::U8(std::uint8_t v) { os_.put(static_cast<char>(v)); }

void BinaryWriter::U32(std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os_.write(buf, 4);
}

void BinaryWriter::U64(std::uint64_t v) {
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os_.write(buf, 8);
}

void BinaryWriter::F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }

void BinaryWriter::String(std::string_view s) {
  U32(static_cast<std::uint32_t>(s.size()));
  Bytes(s);
}

void BinaryWriter::TensorData(const Tensor& t) {
  U32(static_cast<std::uint32_t>(t.rank()));
  for (std::size_t d : t.shape()) U32(static_cast<std::uint32_t>(d));
  for (double v : t.values()) F64(v);
}

std::string BinaryReader::Bytes(std::size_t n) {
  std::string out(n, '\0');
  is_.read(out.data(), static_cast<std::streamsize>(n));
  const auto got = static_cast<std::size_t>(is_.gcount());
  if (got != n) {
    throw FormatError(source_ + ": truncated, expected " + std::to_string(n) +
                      " more bytes, got " + std::to_string(got));
  }
  return out;
}

std::uint8_t BinaryReader::U8() {
  return static_cast<std::uint8_t>(Bytes(1)[0]);
}

std::uint32_t BinaryReader::U32() {
  const std::string b = Bytes(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  }
  return v;
}

std::uint64_t BinaryReader::U64() {
  const std::string b = Bytes(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i])) << (8 * i);
  }
  return v;
}

double BinaryReader::F64() { return std::bit_cast<double>(U64()); }

std::string BinaryReader::String() {
  const std::uint32_t n = U32();
  return Bytes(n);
}

Tensor BinaryReader::TensorData() {
  const std::uint32_t rank = U32();
  if (rank > 8) throw FormatError(source_ + ": implausible tensor rank " + std::to_string(rank));
  std::vector<std::size_t> shape(rank);
  std::size_t count = 1;
  for (auto& d : shape) {
    d = U32();
    count *= d;
  }
  std::vector<double> data(count);
  for (double& v : data) v = F64();
  return Tensor(std::move(shape), std::move(data));
}

void BinaryReader::ExpectMagic(std::string_view magic) {
  const std::string got = Bytes(magic.size());
  if (got != magic) {
    throw FormatError(source_ + ": bad magic, expected '" + std::string(magic) + "'");
  }
}

bool BinaryReader::AtEnd() {
  return is_.peek() == std::char_traits<char>::eof();
}

}  // namespace lfv
