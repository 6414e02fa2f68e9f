// lfv/lfv_io.cc

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

#include "lfv/lfv_io.h"

#include <fstream>

#include "numerics/binary_io.h"
#include "numerics/errors.h"

namespace lfv {
namespace {
constexpr char kLfvMagic[] = "LFVS";
constexpr std::uint32_t kLfvVersion = 1;
}  // namespace

void write_lfv_file(const std::string& path, const LfvTable& table) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open LFV file for writing: " + path);
  BinaryWriter w(os);
  w.Bytes(kLfvMagic);
  w.U32(kLfvVersion);
  for (const auto& [id, rec] : table) {
    const bool frame = rec.granularity == LfvGranularity::kFrame;
    if (frame ? rec.values.rank() != 2 : rec.values.rank() != 1) {
      throw ShapeError("LFV record " + id + " has shape " +
                       ShapeString(rec.values.shape()) + " for granularity " +
                       granularity_name(rec.granularity));
    }
    w.String(id);
    w.U8(frame ? 1 : 0);
    w.U32(static_cast<std::uint32_t>(frame ? rec.values.rows() : 1));
    w.U32(static_cast<std::uint32_t>(frame ? rec.values.cols() : rec.values.size()));
    for (double v : rec.values.values()) w.F64(v);
  }
  if (!os) throw IoError("write failed: " + path);
}

LfvTable read_lfv_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open LFV file: " + path);
  BinaryReader r(is, path);
  r.ExpectMagic(kLfvMagic);
  if (r.U32() != kLfvVersion) throw FormatError(path + ": unsupported LFV file version");
  LfvTable table;
  while (!r.AtEnd()) {
    const std::string id = r.String();
    const std::uint8_t flag = r.U8();
    if (flag > 1) throw FormatError(path + ": bad granularity flag for " + id);
    const std::uint32_t rows = r.U32();
    const std::uint32_t dim = r.U32();
    std::vector<double> data(std::size_t{rows} * dim);
    for (double& v : data) v = r.F64();
    LfvRecord rec;
    rec.granularity = flag ? LfvGranularity::kFrame : LfvGranularity::kUtterance;
    if (flag) {
      rec.values = Tensor({rows, dim}, std::move(data));
    } else {
      if (rows != 1) throw FormatError(path + ": utterance-level record with rows != 1");
      rec.values = Tensor({dim}, std::move(data));
    }
    table[id] = std::move(rec);
  }
  return table;
}

}  // namespace lfv
