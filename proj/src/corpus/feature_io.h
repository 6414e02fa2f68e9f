// corpus/feature_io.h

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

#ifndef LFVCTC_CORPUS_FEATURE_IO_H_
#define LFVCTC_CORPUS_FEATURE_IO_H_

#include <string>
#include <vector>

#include "corpus/utterance.h"
#include "numerics/tensor.h"

namespace lfv {

// Feature file: "MFCB", u32 version (1), u32 T, u32 F, then T*F
// little-endian f64 row-major. T must be >= 1.
void write_features(const std::string& path, const Tensor& features);
Tensor read_features(const std::string& path);

// Manifest: one tab-separated record per line:
//   id, language, unit_mode, duration_s, noise (0/1), feature path, transcript
// Relative feature paths resolve against the manifest's directory.
std::vector<Utterance> read_manifest(const std::string& path,
                                     bool load_features = true);
// Writes the manifest; utterances' feature_path values are stored verbatim.
void write_manifest(const std::string& path, const std::vector<Utterance>& utts);

}  // namespace lfv

#endif  // LFVCTC_CORPUS_FEATURE_IO_H_
