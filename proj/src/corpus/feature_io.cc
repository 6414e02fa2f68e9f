// corpus/feature_io.cc

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

#include "corpus/feature_io.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "numerics/binary_io.h"
#include "numerics/errors.h"

namespace lfv {
namespace {

constexpr char kFeatureMagic[] = "MFCB";
constexpr std::uint32_t kFeatureVersion = 1;
constexpr std::size_t kFeatureHeaderBytes = 16;

}  // namespace

void write_features(const std::string& path, const Tensor& features) {
  if (features.rank() != 2 || features.rows() == 0) {
    throw ShapeError("write_features: need a [T x F] tensor with T >= 1, got " +
                     ShapeString(features.shape()));
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open feature file for writing: " + path);
  BinaryWriter w(os);
  w.Bytes(kFeatureMagic);
  w.U32(kFeatureVersion);
  w.U32(static_cast<std::uint32_t>(features.rows()));
  w.U32(static_cast<std::uint32_t>(features.cols()));
  for (double v : features.values()) w.F64(v);
  if (!os) throw IoError("write failed: " + path);
}

Tensor read_features(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open feature file: " + path);
  std::error_code ec;
  const auto actual = std::filesystem::file_size(path, ec);
  BinaryReader r(is, path);
  r.ExpectMagic(kFeatureMagic);
  const std::uint32_t version = r.U32();
  if (version != kFeatureVersion) {
    throw FormatError(path + ": unsupported feature file version " +
                      std::to_string(version));
  }
  const std::uint32_t frames = r.U32();
  const std::uint32_t dim = r.U32();
  if (frames == 0) throw FormatError(path + ": feature file has zero frames");
  if (dim == 0) throw FormatError(path + ": feature file has zero dimensions");
  const std::uint64_t expected =
      kFeatureHeaderBytes + std::uint64_t{frames} * dim * sizeof(double);
  if (!ec && actual != expected) {
    throw FormatError(path + (actual < expected ? ": truncated" : ": trailing data") +
                      ", expected " + std::to_string(expected) + " bytes, found " +
                      std::to_string(actual));
  }
  std::vector<double> data(std::size_t{frames} * dim);
  for (double& v : data) v = r.F64();
  return Tensor({frames, dim}, std::move(data));
}

std::vector<Utterance> read_manifest(const std::string& path, bool load_features) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open manifest: " + path);
  const auto base = std::filesystem::path(path).parent_path();
  std::vector<Utterance> utts;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      const auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 7) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": expected 7 fields, got " +
                        std::to_string(fields.size()));
    }
    Utterance u;
    u.id = fields[0];
    u.language = fields[1];
    u.unit_mode = parse_unit_mode(fields[2]);
    try {
      u.duration_s = std::stod(fields[3]);
    } catch (const std::logic_error&) {
      throw FormatError(path + ":" + std::to_string(line_no) + ": bad duration '" +
                        fields[3] + "'");
    }
    if (fields[4] != "0" && fields[4] != "1") {
      throw FormatError(path + ":" + std::to_string(line_no) + ": noise flag must be 0 or 1");
    }
    u.noise = fields[4] == "1";
    std::filesystem::path fp(fields[5]);
    if (fp.is_relative()) fp = base / fp;
    u.feature_path = fp.string();
    u.transcript = split_whitespace(fields[6]);
    if (load_features) u.features = read_features(u.feature_path);
    utts.push_back(std::move(u));
  }
  return utts;
}

void write_manifest(const std::string& path, const std::vector<Utterance>& utts) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open manifest for writing: " + path);
  for (const auto& u : utts) {
    std::ostringstream dur;
    dur.precision(6);
    dur << std::fixed << u.duration_s;
    os << u.id << '\t' << u.language << '\t' << unit_mode_name(u.unit_mode) << '\t'
       << dur.str() << '\t' << (u.noise ? 1 : 0) << '\t' << u.feature_path << '\t'
       << join(u.transcript, " ") << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace lfv
