// layers/acoustic_model.h

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

#ifndef LFVCTC_LAYERS_ACOUSTIC_MODEL_H_
#define LFVCTC_LAYERS_ACOUSTIC_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "layers/affine.h"
#include "layers/conv.h"
#include "layers/lfv_integration.h"
#include "layers/lstm.h"
#include "numerics/batch_norm.h"
#include "numerics/optimizer.h"
#include "numerics/tensor.h"

namespace lfv {

enum class Adaptation { kBaseline, kAppend, kModulate };

const char* adaptation_name(Adaptation a);
// Accepts "baseline", "append", "modulate" (and "app"/"mod"). Throws
// ConfigError otherwise.
Adaptation parse_adaptation(const std::string& name);

struct BiLstmLayerSpec {
  std::size_t cells_per_direction = 16;
};

struct AcousticModelConfig {
  std::size_t input_feature_dim = 12;
  std::size_t vocab_size = 0;  // output arity, blank included (id 0)
  std::vector<ConvLayerSpec> conv_layers = DefaultConvLayers();
  std::vector<BiLstmLayerSpec> lstm_layers =
      std::vector<BiLstmLayerSpec>(4, BiLstmLayerSpec{});
  Adaptation adaptation = Adaptation::kBaseline;
  std::size_t lfv_dim = 0;
  int modulation_layer = 2;
  double lstm_init_scale = 0.08;
  // Token symbols by id; informational, carried in checkpoints.
  std::vector<std::string> token_symbols;

  static std::vector<ConvLayerSpec> DefaultConvLayers();

  // Throws ConfigError on inconsistent settings.
  void Validate() const;

  // Frames after the conv stack for `frames` input frames (0 if too short).
  std::size_t OutputFrames(std::size_t frames) const;
  // Width of the flattened conv-stack output (also the batch-norm width).
  std::size_t ConvOutputWidth() const;
  // Input frame at the center of output frame 0's receptive field, and the
  // time stride between consecutive output frames.
  std::size_t ReceptiveFieldOffset() const;
  std::size_t TimeStride() const;

  std::string Serialize() const;
  static AcousticModelConfig Deserialize(const std::string& text);
};

// One utterance for the model. `lfv` is null for the baseline, otherwise [D]
// (utterance-level) or [T x D] aligned with the input frames.
struct ModelInput {
  const Tensor* features = nullptr;
  const Tensor* lfv = nullptr;
};

struct UtteranceTrace {
  std::vector<ConvCache> conv;
  std::vector<PoolCache> pool;
  std::vector<std::vector<std::size_t>> conv_out_shape;
  std::size_t out_frames = 0;
  Tensor lfv;           // aligned to output frames when per-frame
  Tensor lstm_input;    // after the append point
  std::vector<BiLstmCache> lstm;
  Tensor modulated_pre; // modulated layer's output before scaling
  Tensor top_hidden;    // input of the output layer
  Tensor log_probs;
};

// Record of a forward pass that Backward() consumes.
struct ModelTrace {
  bool recorded = false;
  Mode mode = Mode::kEval;
  std::vector<UtteranceTrace> utterances;
  BatchNormCache batch_norm;
};

// conv x2 -> batch norm -> [append] -> BiLSTM x4 with [modulate] after the
// configured layer -> affine -> log-softmax.
class AcousticModel {
 public:
  AcousticModel() = default;
  AcousticModel(AcousticModelConfig config, std::uint64_t seed);

  const AcousticModelConfig& config() const { return config_; }
  const ModulationSpec& modulation() const { return modulation_; }

  // Batch forward. Batch-norm statistics span all frames of the batch in
  // train mode. Returns [T' x V] log-probabilities per input.
  std::vector<Tensor> ForwardBatch(std::span<const ModelInput> inputs, Mode mode,
                                   ModelTrace* trace = nullptr);

  // Eval-mode forward of a single utterance; does not mutate the model.
  Tensor Forward(const ModelInput& input) const;

  // Accumulates parameter gradients for dL/d(log_probs) per utterance.
  // Throws UsageError when `trace` holds no recorded forward pass; the trace
  // is consumed.
  void Backward(ModelTrace& trace, std::span<const Tensor> grad_log_probs);

  ParameterList Parameters();
  BatchNormState& batch_norm() { return batch_norm_; }
  const BatchNormState& batch_norm() const { return batch_norm_; }

  std::vector<ConvLayer>& conv_layers() { return conv_; }
  std::vector<BiLstmLayer>& lstm_layers() { return lstm_; }
  AffineLayer& output_layer() { return output_; }

 private:
  Tensor RunConvStack(const Tensor& features, UtteranceTrace* trace) const;
  Tensor AlignLfv(const Tensor& lfv, std::size_t out_frames) const;
  Tensor RunUpper(const Tensor& normalized, const Tensor& lfv,
                  UtteranceTrace* trace) const;
  void CheckInput(const ModelInput& input) const;

  AcousticModelConfig config_;
  ModulationSpec modulation_;
  std::vector<ConvLayer> conv_;
  BatchNormState batch_norm_;
  std::vector<BiLstmLayer> lstm_;
  AffineLayer output_;
};

// Checkpoint I/O. Layout: magic "LFVAMCK1", u32 version, u32 config length,
// config text, u32 tensor count, then per tensor: u32 name length, name,
// u32 rank, rank x u32 extents, little-endian f64 data.
void save_checkpoint(const AcousticModel& model, const std::string& path);
AcousticModel load_checkpoint(const std::string& path);

}  // namespace lfv

#endif  // LFVCTC_LAYERS_ACOUSTIC_MODEL_H_
