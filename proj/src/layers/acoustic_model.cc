// layers/acoustic_model.cc

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

#include "layers/acoustic_model.h"

#include <cmath>
#include <map>
#include <sstream>

#include "numerics/eigen_view.h"
#include "numerics/errors.h"
#include "numerics/ops.h"

namespace lfv {

const char* adaptation_name(Adaptation a) {
  switch (a) {
    case Adaptation::kBaseline: return "baseline";
    case Adaptation::kAppend: return "append";
    case Adaptation::kModulate: return "modulate";
  }
  return "?";
}

Adaptation parse_adaptation(const std::string& name) {
  if (name == "baseline") return Adaptation::kBaseline;
  if (name == "append" || name == "app") return Adaptation::kAppend;
  if (name == "modulate" || name == "mod") return Adaptation::kModulate;
  throw ConfigError("unknown adaptation '" + name +
                    "' (expected baseline, append or modulate)");
}

std::vector<ConvLayerSpec> AcousticModelConfig::DefaultConvLayers() {
  ConvLayerSpec first;
  first.out_channels = 8;
  ConvLayerSpec second;
  second.out_channels = 16;
  return {first, second};
}

void AcousticModelConfig::Validate() const {
  if (input_feature_dim == 0) throw ConfigError("input_feature_dim must be > 0");
  if (vocab_size < 2) throw ConfigError("vocab_size must include blank and >= 1 token");
  if (conv_layers.empty()) throw ConfigError("at least one conv layer required");
  if (lstm_layers.empty()) throw ConfigError("at least one BiLSTM layer required");
  for (const auto& c : conv_layers) c.Validate();
  for (const auto& l : lstm_layers) {
    if (l.cells_per_direction == 0) throw ConfigError("BiLSTM layer with 0 cells");
  }
  if (ConvOutputWidth() == 0) {
    throw ConfigError("conv stack leaves no frequency bins for " +
                      std::to_string(input_feature_dim) + " input features");
  }
  if (!token_symbols.empty() && token_symbols.size() != vocab_size) {
    throw ConfigError("token symbol count does not match vocab_size");
  }
  if (adaptation == Adaptation::kModulate) {
    if (modulation_layer < 1 ||
        modulation_layer > static_cast<int>(lstm_layers.size())) {
      throw ConfigError("modulation layer " + std::to_string(modulation_layer) +
                        " outside [1.." + std::to_string(lstm_layers.size()) + "]");
    }
    const std::size_t units =
        2 * lstm_layers[modulation_layer - 1].cells_per_direction;
    make_modulation_spec(units, lfv_dim, modulation_layer);
  }
}

std::size_t AcousticModelConfig::OutputFrames(std::size_t frames) const {
  for (const auto& c : conv_layers) frames = c.OutputTime(frames);
  return frames;
}

std::size_t AcousticModelConfig::ConvOutputWidth() const {
  std::size_t f = input_feature_dim;
  for (const auto& c : conv_layers) {
    f = c.PooledFreq(f);
    if (f == 0) return 0;
  }
  return f * conv_layers.back().out_channels;
}

std::size_t AcousticModelConfig::TimeStride() const {
  std::size_t s = 1;
  for (const auto& c : conv_layers) s *= c.stride_time;
  return s;
}

std::size_t AcousticModelConfig::ReceptiveFieldOffset() const {
  std::size_t field = 1, stride = 1;
  for (const auto& c : conv_layers) {
    field += (c.kernel_time - 1) * stride;
    stride *= c.stride_time;
  }
  return (field - 1) / 2;
}

std::string AcousticModelConfig::Serialize() const {
  std::ostringstream os;
  os << "input_feature_dim=" << input_feature_dim << '\n'
     << "vocab_size=" << vocab_size << '\n'
     << "adaptation=" << adaptation_name(adaptation) << '\n'
     << "lfv_dim=" << lfv_dim << '\n'
     << "modulation_layer=" << modulation_layer << '\n';
  os.precision(17);
  os << "lstm_init_scale=" << lstm_init_scale << '\n';
  os << "conv_layers=" << conv_layers.size() << '\n';
  for (std::size_t i = 0; i < conv_layers.size(); ++i) {
    const auto& c = conv_layers[i];
    os << "conv" << i << '=' << c.kernel_time << ' ' << c.kernel_freq << ' '
       << c.stride_time << ' ' << c.stride_freq << ' ' << c.out_channels << ' '
       << c.pool_freq << '\n';
  }
  os << "lstm_cells=";
  for (std::size_t i = 0; i < lstm_layers.size(); ++i) {
    os << (i ? " " : "") << lstm_layers[i].cells_per_direction;
  }
  os << '\n' << "tokens=";
  for (std::size_t i = 0; i < token_symbols.size(); ++i) {
    os << (i ? " " : "") << token_symbols[i];
  }
  os << '\n';
  return os.str();
}

AcousticModelConfig AcousticModelConfig::Deserialize(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw FormatError("model config line without '=': " + line);
    }
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto get = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw FormatError("model config missing key " + key);
    return it->second;
  };
  AcousticModelConfig c;
  try {
    c.input_feature_dim = std::stoul(get("input_feature_dim"));
    c.vocab_size = std::stoul(get("vocab_size"));
    c.adaptation = parse_adaptation(get("adaptation"));
    c.lfv_dim = std::stoul(get("lfv_dim"));
    c.modulation_layer = std::stoi(get("modulation_layer"));
    c.lstm_init_scale = std::stod(get("lstm_init_scale"));
    const std::size_t n_conv = std::stoul(get("conv_layers"));
    c.conv_layers.clear();
    for (std::size_t i = 0; i < n_conv; ++i) {
      std::istringstream cs(get("conv" + std::to_string(i)));
      ConvLayerSpec s;
      cs >> s.kernel_time >> s.kernel_freq >> s.stride_time >> s.stride_freq >>
          s.out_channels >> s.pool_freq;
      if (!cs) throw FormatError("malformed conv spec " + std::to_string(i));
      c.conv_layers.push_back(s);
    }
    c.lstm_layers.clear();
    std::istringstream ls(get("lstm_cells"));
    std::size_t cells;
    while (ls >> cells) c.lstm_layers.push_back({cells});
    c.token_symbols.clear();
    std::istringstream ts(get("tokens"));
    std::string sym;
    while (ts >> sym) c.token_symbols.push_back(sym);
  } catch (const std::logic_error& e) {
    throw FormatError(std::string("malformed model config: ") + e.what());
  }
  return c;
}

AcousticModel::AcousticModel(AcousticModelConfig config, std::uint64_t seed)
    : config_(std::move(config)) {
  config_.Validate();
  std::size_t channels = 1;
  for (std::size_t i = 0; i < config_.conv_layers.size(); ++i) {
    conv_.emplace_back("conv" + std::to_string(i + 1), config_.conv_layers[i],
                       channels);
    channels = config_.conv_layers[i].out_channels;
    auto rng = derived_rng(seed, conv_.back().weight.name);
    conv_.back().Initialize(rng);
  }
  const std::size_t conv_width = config_.ConvOutputWidth();
  batch_norm_ = BatchNormState("bn", conv_width);

  const std::size_t extra =
      config_.adaptation == Adaptation::kAppend ? config_.lfv_dim : 0;
  std::size_t in_dim = conv_width + extra;
  for (std::size_t i = 0; i < config_.lstm_layers.size(); ++i) {
    const std::size_t h = config_.lstm_layers[i].cells_per_direction;
    lstm_.emplace_back("lstm" + std::to_string(i + 1), in_dim, h);
    lstm_.back().Initialize(seed, config_.lstm_init_scale,
                            i == 0 && extra > 0 ? conv_width : 0);
    in_dim = 2 * h;
  }
  output_ = AffineLayer("output", in_dim, config_.vocab_size);
  auto rng = derived_rng(seed, output_.weight.name);
  output_.Initialize(rng, std::sqrt(6.0 / double(in_dim + config_.vocab_size)));

  if (config_.adaptation == Adaptation::kModulate) {
    const std::size_t units =
        2 * config_.lstm_layers[config_.modulation_layer - 1].cells_per_direction;
    modulation_ = make_modulation_spec(units, config_.lfv_dim,
                                       config_.modulation_layer);
  }
}

ParameterList AcousticModel::Parameters() {
  ParameterList params;
  for (auto& c : conv_) c.CollectParameters(params);
  params.push_back(&batch_norm_.gamma);
  params.push_back(&batch_norm_.beta);
  for (auto& l : lstm_) l.CollectParameters(params);
  output_.CollectParameters(params);
  return params;
}

void AcousticModel::CheckInput(const ModelInput& input) const {
  if (!input.features) throw UsageError("model input without features");
  const Tensor& x = *input.features;
  if (x.rank() != 2 || x.cols() != config_.input_feature_dim) {
    throw ShapeError("model input " + ShapeString(x.shape()) + ", expected [T x " +
                     std::to_string(config_.input_feature_dim) + "]");
  }
  if (config_.OutputFrames(x.rows()) == 0) {
    throw ShapeError("utterance of " + std::to_string(x.rows()) +
                     " frames is shorter than the conv receptive field");
  }
  if (config_.adaptation != Adaptation::kBaseline && !input.lfv) {
    throw UsageError(std::string("adaptation '") +
                     adaptation_name(config_.adaptation) +
                     "' requires a language feature vector");
  }
  if (input.lfv) {
    const Tensor& l = *input.lfv;
    const bool ok = (l.rank() == 1 && l.size() == config_.lfv_dim) ||
                    (l.rank() == 2 && l.rows() == x.rows() &&
                     l.cols() == config_.lfv_dim);
    if (config_.adaptation != Adaptation::kBaseline && !ok) {
      throw ShapeError("lfv " + ShapeString(l.shape()) + " does not match D = " +
                       std::to_string(config_.lfv_dim) + " and T = " +
                       std::to_string(x.rows()));
    }
  }
}

Tensor AcousticModel::RunConvStack(const Tensor& features,
                                   UtteranceTrace* trace) const {
  Tensor h = features.Reshaped({features.rows(), features.cols(), 1});
  if (trace) {
    trace->conv.resize(conv_.size());
    trace->pool.resize(conv_.size());
    trace->conv_out_shape.resize(conv_.size());
  }
  for (std::size_t i = 0; i < conv_.size(); ++i) {
    h = conv_[i].Forward(h, trace ? &trace->conv[i] : nullptr);
    if (trace) trace->conv_out_shape[i] = h.shape();
    const std::size_t pool = conv_[i].spec().pool_freq;
    if (pool > 1) h = max_pool_freq(h, pool, trace ? &trace->pool[i] : nullptr);
  }
  const std::size_t frames = h.dim(0);
  return h.Reshaped({frames, h.size() / frames});
}

Tensor AcousticModel::AlignLfv(const Tensor& lfv, std::size_t out_frames) const {
  if (lfv.rank() == 1) return lfv;
  const std::size_t offset = config_.ReceptiveFieldOffset();
  const std::size_t stride = config_.TimeStride();
  Tensor aligned = Tensor::Matrix(out_frames, lfv.cols());
  for (std::size_t t = 0; t < out_frames; ++t) {
    const std::size_t src = std::min(t * stride + offset, lfv.rows() - 1);
    std::copy_n(&lfv(src, 0), lfv.cols(), &aligned(t, 0));
  }
  return aligned;
}

Tensor AcousticModel::RunUpper(const Tensor& normalized, const Tensor& lfv,
                               UtteranceTrace* trace) const {
  Tensor h = config_.adaptation == Adaptation::kAppend
                 ? append_lfv(normalized, lfv)
                 : normalized;
  if (trace) {
    trace->lstm_input = h;
    trace->lstm.resize(lstm_.size());
  }
  for (std::size_t i = 0; i < lstm_.size(); ++i) {
    h = lstm_[i].Forward(h, trace ? &trace->lstm[i] : nullptr);
    if (config_.adaptation == Adaptation::kModulate &&
        static_cast<int>(i + 1) == config_.modulation_layer) {
      if (trace) trace->modulated_pre = h;
      h = modulate(h, lfv, modulation_);
    }
  }
  Tensor log_probs = log_softmax_rows(output_.Forward(h));
  if (trace) {
    trace->top_hidden = std::move(h);
    trace->log_probs = log_probs;
  }
  return log_probs;
}

std::vector<Tensor> AcousticModel::ForwardBatch(std::span<const ModelInput> inputs,
                                                Mode mode, ModelTrace* trace) {
  for (const auto& in : inputs) CheckInput(in);
  std::vector<UtteranceTrace> local(inputs.size());
  std::vector<Tensor> conv_out(inputs.size());
  std::size_t total = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    conv_out[i] = RunConvStack(*inputs[i].features, trace ? &local[i] : nullptr);
    local[i].out_frames = conv_out[i].rows();
    total += conv_out[i].rows();
  }
  const std::size_t width = config_.ConvOutputWidth();
  Tensor stacked = Tensor::Matrix(total, width);
  for (std::size_t i = 0, row = 0; i < inputs.size(); ++i) {
    std::copy(conv_out[i].values().begin(), conv_out[i].values().end(),
              &stacked(row, 0));
    row += conv_out[i].rows();
  }
  BatchNormCache bn_cache;
  Tensor normalized =
      batch_norm_forward(stacked, batch_norm_, mode, trace ? &bn_cache : nullptr);

  std::vector<Tensor> outputs;
  outputs.reserve(inputs.size());
  for (std::size_t i = 0, row = 0; i < inputs.size(); ++i) {
    const std::size_t frames = local[i].out_frames;
    Tensor slice = Tensor::Matrix(frames, width);
    std::copy_n(&normalized(row, 0), frames * width, slice.raw());
    row += frames;
    Tensor lfv = inputs[i].lfv && config_.adaptation != Adaptation::kBaseline
                     ? AlignLfv(*inputs[i].lfv, frames)
                     : Tensor();
    outputs.push_back(RunUpper(slice, lfv, trace ? &local[i] : nullptr));
    if (trace) local[i].lfv = std::move(lfv);
  }
  if (trace) {
    trace->recorded = true;
    trace->mode = mode;
    trace->utterances = std::move(local);
    trace->batch_norm = std::move(bn_cache);
  }
  return outputs;
}

Tensor AcousticModel::Forward(const ModelInput& input) const {
  CheckInput(input);
  Tensor conv_out = RunConvStack(*input.features, nullptr);
  Tensor normalized = batch_norm_inference(conv_out, batch_norm_);
  Tensor lfv = input.lfv && config_.adaptation != Adaptation::kBaseline
                   ? AlignLfv(*input.lfv, conv_out.rows())
                   : Tensor();
  return RunUpper(normalized, lfv, nullptr);
}

void AcousticModel::Backward(ModelTrace& trace,
                             std::span<const Tensor> grad_log_probs) {
  if (!trace.recorded) {
    throw UsageError("backward called without a recorded forward pass");
  }
  if (grad_log_probs.size() != trace.utterances.size()) {
    throw UsageError("backward: gradient count does not match the batch");
  }
  const std::size_t width = config_.ConvOutputWidth();
  std::size_t total = 0;
  for (const auto& u : trace.utterances) total += u.out_frames;
  Tensor d_normalized = Tensor::Matrix(total, width);

  for (std::size_t i = 0, row = 0; i < trace.utterances.size(); ++i) {
    UtteranceTrace& u = trace.utterances[i];
    Tensor d_logits = log_softmax_backward(u.log_probs, grad_log_probs[i]);
    Tensor dh = output_.Backward(u.top_hidden, d_logits);
    for (std::size_t l = lstm_.size(); l-- > 0;) {
      if (config_.adaptation == Adaptation::kModulate &&
          static_cast<int>(l + 1) == config_.modulation_layer) {
        dh = modulate_backward(u.modulated_pre, u.lfv, modulation_, dh).input;
      }
      dh = lstm_[l].Backward(u.lstm[l], dh);
    }
    if (config_.adaptation == Adaptation::kAppend) {
      Tensor base = Tensor::Matrix(u.out_frames, width);
      dh = append_lfv_backward(base, u.lfv, dh).input;
    }
    std::copy_n(dh.raw(), dh.size(), &d_normalized(row, 0));
    row += u.out_frames;
  }

  Tensor d_stacked = batch_norm_backward(trace.batch_norm, d_normalized, batch_norm_);

  for (std::size_t i = 0, row = 0; i < trace.utterances.size(); ++i) {
    UtteranceTrace& u = trace.utterances[i];
    const std::size_t frames = u.out_frames;
    Tensor dh({frames, width});
    std::copy_n(&d_stacked(row, 0), frames * width, dh.raw());
    row += frames;
    {
      const std::size_t last = conv_.size() - 1;
      const std::size_t pool = conv_[last].spec().pool_freq;
      const auto& shape = u.conv_out_shape[last];
      dh = pool > 1 ? dh.Reshaped({shape[0], shape[1] / pool, shape[2]})
                    : dh.Reshaped(shape);
    }
    for (std::size_t c = conv_.size(); c-- > 0;) {
      if (conv_[c].spec().pool_freq > 1) {
        dh = max_pool_freq_backward(u.pool[c], dh);
      }
      dh = conv_[c].Backward(u.conv[c], dh);
    }
  }
  trace.recorded = false;
  trace.utterances.clear();
}

}  // namespace lfv
