// layers/checkpoint.cc

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

#include <fstream>
#include <map>

#include "layers/acoustic_model.h"
#include "numerics/binary_io.h"
#include "numerics/errors.h"

namespace lfv {
namespace {

constexpr char kMagic[] = "LFVAMCK1";
constexpr std::uint32_t kVersion = 1;

}  // namespace

void save_checkpoint(const AcousticModel& model, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open checkpoint for writing: " + path);
  BinaryWriter w(os);
  w.Bytes(kMagic);
  w.U32(kVersion);
  w.String(model.config().Serialize());
  // Parameters() is non-const only because it hands out mutable pointers.
  auto params = const_cast<AcousticModel&>(model).Parameters();
  w.U32(static_cast<std::uint32_t>(params.size() + 2));
  for (const Parameter* p : params) {
    w.String(p->name);
    w.TensorData(p->value);
  }
  w.String("bn.running_mean");
  w.TensorData(model.batch_norm().running_mean);
  w.String("bn.running_var");
  w.TensorData(model.batch_norm().running_var);
  if (!os) throw IoError("write failed: " + path);
}

AcousticModel load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open checkpoint: " + path);
  BinaryReader r(is, path);
  r.ExpectMagic(kMagic);
  const std::uint32_t version = r.U32();
  if (version != kVersion) {
    throw FormatError(path + ": unsupported checkpoint version " +
                      std::to_string(version));
  }
  AcousticModel model(AcousticModelConfig::Deserialize(r.String()), 0);
  std::map<std::string, Tensor*> slots;
  for (Parameter* p : model.Parameters()) slots[p->name] = &p->value;
  slots["bn.running_mean"] = &model.batch_norm().running_mean;
  slots["bn.running_var"] = &model.batch_norm().running_var;

  const std::uint32_t count = r.U32();
  if (count != slots.size()) {
    throw FormatError(path + ": expected " + std::to_string(slots.size()) +
                      " tensors, found " + std::to_string(count));
  }
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::string name = r.String();
    Tensor t = r.TensorData();
    auto it = slots.find(name);
    if (it == slots.end()) throw FormatError(path + ": unknown tensor " + name);
    if (!it->second->SameShape(t)) {
      throw FormatError(path + ": tensor " + name + " has shape " +
                        ShapeString(t.shape()) + ", model expects " +
                        ShapeString(it->second->shape()));
    }
    *it->second = std::move(t);
  }
  return model;
}

}  // namespace lfv
