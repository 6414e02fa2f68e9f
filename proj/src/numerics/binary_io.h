// numerics/binary_io.h

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

#ifndef LFVCTC_NUMERICS_BINARY_IO_H_
#define LFVCTC_NUMERICS_BINARY_IO_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "numerics/tensor.h"

namespace lfv {

// Little-endian primitives shared by every binary file format in the library.
class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& os) : os_(os) {}
  void Bytes(std::string_view bytes);
  void U8(std::uint8_t v);
  void U32(std::uint32_t v);
  void U64(std::uint64_t v);
  void F64(double v);
  void String(std::string_view s);  // u32 length + bytes
  void TensorData(const Tensor& t);  // u32 rank, u32 extents, f64 values

 private:
  std::ostream& os_;
};

class BinaryReader {
 public:
  // `source` names the stream in error messages.
  BinaryReader(std::istream& is, std::string source)
      : is_(is), source_(std::move(source)) {}
  std::string Bytes(std::size_t n);
  std::uint8_t U8();
  std::uint32_t U32();
  std::uint64_t U64();
  double F64();
  std::string String();
  Tensor TensorData();
  // Throws FormatError if the next bytes are not `magic`.
  void ExpectMagic(std::string_view magic);
  bool AtEnd();
  const std::string& source() const { return source_; }

 private:
  std::istream& is_;
  std::string source_;
};

}  // namespace lfv

#endif  // LFVCTC_NUMERICS_BINARY_IO_H_
