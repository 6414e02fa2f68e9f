// lfv/lfv_io.h

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

#ifndef LFVCTC_LFV_LFV_IO_H_
#define LFVCTC_LFV_LFV_IO_H_

#include <map>
#include <string>

#include "lfv/extractor.h"
#include "numerics/tensor.h"

namespace lfv {

struct LfvRecord {
  LfvGranularity granularity = LfvGranularity::kUtterance;
  Tensor values;  // [D] or [T x D]
};

using LfvTable = std::map<std::string, LfvRecord>;

// File: "LFVS", u32 version (1), then records until end of file:
//   u32 id length, id bytes, u8 granularity (0 utterance, 1 frame),
//   u32 rows (1 for utterance-level), u32 D, rows*D little-endian f64.
void write_lfv_file(const std::string& path, const LfvTable& table);
LfvTable read_lfv_file(const std::string& path);

}  // namespace lfv

#endif  // LFVCTC_LFV_LFV_IO_H_
