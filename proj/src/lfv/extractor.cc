// lfv/extractor.cc

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

#include "lfv/extractor.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "numerics/binary_io.h"
#include "numerics/eigen_view.h"
#include "numerics/errors.h"
#include "numerics/ops.h"

namespace lfv {

const char* granularity_name(LfvGranularity g) {
  return g == LfvGranularity::kFrame ? "frame" : "utterance";
}

LfvGranularity parse_granularity(const std::string& name) {
  if (name == "frame" || name == "per-frame") return LfvGranularity::kFrame;
  if (name == "utterance" || name == "utterance-mean") return LfvGranularity::kUtterance;
  throw ConfigError("unknown LFV granularity '" + name + "' (expected frame or utterance)");
}

void LfvExtractorConfig::Validate() const {
  if (hidden_sizes.size() < 2) throw ConfigError("LFV extractor needs >= 2 hidden layers");
  if (bottleneck_dim == 0) throw ConfigError("LFV bottleneck dimension must be > 0");
  if (bottleneck_dim >= *std::min_element(hidden_sizes.begin(), hidden_sizes.end())) {
    throw ConfigError("LFV bottleneck must be narrower than every hidden layer");
  }
  if (batch_size == 0) throw ConfigError("LFV batch size must be > 0");
}

LfvExtractor::LfvExtractor(const LfvExtractorConfig& config, std::size_t feature_dim,
                           std::vector<std::string> languages, std::uint64_t seed)
    : config_(config),
      feature_dim_(feature_dim),
      languages_(std::move(languages)),
      mean_(feature_dim, 0.0),
      inv_std_(feature_dim, 1.0) {
  config_.Validate();
  if (languages_.size() < 2) throw UsageError("LFV extractor needs >= 2 languages");
  std::size_t in = input_dim();
  std::vector<std::size_t> widths = config_.hidden_sizes;
  widths.push_back(config_.bottleneck_dim);
  widths.push_back(languages_.size());
  for (std::size_t i = 0; i < widths.size(); ++i) {
    layers_.emplace_back("lfv.layer" + std::to_string(i), in, widths[i]);
    auto rng = derived_rng(seed, layers_.back().weight.name);
    layers_.back().Initialize(rng, std::sqrt(6.0 / double(in + widths[i])));
    in = widths[i];
  }
}

void LfvExtractor::SetNormalization(std::vector<double> mean, std::vector<double> inv_std) {
  if (mean.size() != feature_dim_ || inv_std.size() != feature_dim_) {
    throw ShapeError("LFV normalization size mismatch");
  }
  mean_ = std::move(mean);
  inv_std_ = std::move(inv_std);
}

Tensor LfvExtractor::StackContext(const Tensor& features) const {
  if (features.rank() != 2 || features.cols() != feature_dim_ || features.rows() == 0) {
    throw ShapeError("LFV extractor input " + ShapeString(features.shape()) +
                     ", expected [T x " + std::to_string(feature_dim_) + "] with T >= 1");
  }
  const std::size_t T = features.rows(), F = feature_dim_;
  const long k = static_cast<long>(config_.context);
  Tensor out = Tensor::Matrix(T, input_dim());
  for (std::size_t t = 0; t < T; ++t) {
    double* dst = &out(t, 0);
    for (long d = -k; d <= k; ++d) {
      const long src = std::clamp(static_cast<long>(t) + d, 0L, static_cast<long>(T) - 1);
      for (std::size_t f = 0; f < F; ++f) {
        *dst++ = (features(static_cast<std::size_t>(src), f) - mean_[f]) * inv_std_[f];
      }
    }
  }
  return out;
}

namespace {

void TanhInPlace(Tensor& t) {
  for (double& v : t.values()) v = std::tanh(v);
}
void SigmoidInPlace(Tensor& t) {
  for (double& v : t.values()) v = sigmoid(v);
}

}  // namespace

Tensor LfvExtractor::Bottleneck(const Tensor& features) const {
  Tensor h = StackContext(features);
  const std::size_t n_hidden = config_.hidden_sizes.size();
  for (std::size_t i = 0; i < n_hidden; ++i) {
    h = layers_[i].Forward(h);
    TanhInPlace(h);
  }
  h = layers_[n_hidden].Forward(h);
  SigmoidInPlace(h);
  return h;
}

Tensor LfvExtractor::LanguageLogPosteriors(const Tensor& features) const {
  return log_softmax_rows(layers_.back().Forward(Bottleneck(features)));
}

double LfvExtractor::Loss(const Tensor& stacked, std::span<const int> labels,
                          bool accumulate) {
  if (stacked.rows() != labels.size()) throw ShapeError("LFV loss: label count mismatch");
  const std::size_t n_hidden = config_.hidden_sizes.size();
  std::vector<Tensor> acts;  // inputs of each layer
  Tensor h = stacked;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    acts.push_back(h);
    h = layers_[i].Forward(h);
    if (i < n_hidden) TanhInPlace(h);
    else if (i == n_hidden) SigmoidInPlace(h);
  }
  const Tensor logp = log_softmax_rows(h);
  const double n = static_cast<double>(labels.size());
  double loss = 0.0;
  Tensor dlogp = Tensor::Matrix(logp.rows(), logp.cols());
  for (std::size_t r = 0; r < labels.size(); ++r) {
    loss -= logp(r, static_cast<std::size_t>(labels[r]));
    dlogp(r, static_cast<std::size_t>(labels[r])) = -1.0 / n;
  }
  loss /= n;
  if (!accumulate) return loss;

  Tensor d = log_softmax_backward(logp, dlogp);
  for (std::size_t i = layers_.size(); i-- > 0;) {
    d = layers_[i].Backward(acts[i], d);
    if (i == 0) break;
    // acts[i] is the activated output of layer i-1.
    const Tensor& a = acts[i];
    const bool sig = (i - 1) == n_hidden;
    for (std::size_t j = 0; j < d.size(); ++j) {
      d[j] *= sig ? a[j] * (1.0 - a[j]) : 1.0 - a[j] * a[j];
    }
  }
  return loss;
}

ParameterList LfvExtractor::Parameters() {
  ParameterList out;
  for (auto& l : layers_) l.CollectParameters(out);
  return out;
}

namespace {
constexpr char kExtractorMagic[] = "LFVEXTR1";
}

void LfvExtractor::Save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open extractor file for writing: " + path);
  BinaryWriter w(os);
  w.Bytes(kExtractorMagic);
  w.U32(1);
  w.U32(static_cast<std::uint32_t>(feature_dim_));
  w.U32(static_cast<std::uint32_t>(config_.context));
  w.U32(static_cast<std::uint32_t>(config_.bottleneck_dim));
  w.U32(static_cast<std::uint32_t>(config_.hidden_sizes.size()));
  for (std::size_t h : config_.hidden_sizes) w.U32(static_cast<std::uint32_t>(h));
  w.U32(static_cast<std::uint32_t>(languages_.size()));
  for (const auto& l : languages_) w.String(l);
  for (std::size_t f = 0; f < feature_dim_; ++f) {
    w.F64(mean_[f]);
    w.F64(inv_std_[f]);
  }
  for (const auto& l : layers_) {
    w.TensorData(l.weight.value);
    w.TensorData(l.bias.value);
  }
  if (!os) throw IoError("write failed: " + path);
}

LfvExtractor LfvExtractor::Load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open extractor file: " + path);
  BinaryReader r(is, path);
  r.ExpectMagic(kExtractorMagic);
  if (r.U32() != 1) throw FormatError(path + ": unsupported extractor version");
  LfvExtractorConfig config;
  const std::size_t feature_dim = r.U32();
  config.context = r.U32();
  config.bottleneck_dim = r.U32();
  config.hidden_sizes.assign(r.U32(), 0);
  for (auto& h : config.hidden_sizes) h = r.U32();
  std::vector<std::string> languages(r.U32());
  for (auto& l : languages) l = r.String();
  std::vector<double> mean(feature_dim), inv_std(feature_dim);
  for (std::size_t f = 0; f < feature_dim; ++f) {
    mean[f] = r.F64();
    inv_std[f] = r.F64();
  }
  LfvExtractor ex(config, feature_dim, std::move(languages), 0);
  ex.SetNormalization(std::move(mean), std::move(inv_std));
  for (auto& l : ex.layers_) {
    Tensor w = r.TensorData(), b = r.TensorData();
    if (!w.SameShape(l.weight.value) || !b.SameShape(l.bias.value)) {
      throw FormatError(path + ": layer shape mismatch in " + l.weight.name);
    }
    l.weight.value = std::move(w);
    l.bias.value = std::move(b);
  }
  return ex;
}

LfvTrainingResult train_lfv_extractor(
    std::span<const Utterance> train, std::span<const Utterance> heldout,
    const LfvExtractorConfig& config, std::uint64_t seed,
    const std::function<void(const std::string&)>& log) {
  std::set<std::string> lang_set;
  for (const auto& u : train) lang_set.insert(u.language);
  if (lang_set.size() < 2) {
    throw UsageError("LFV extractor training needs at least two languages, found " +
                     std::to_string(lang_set.size()));
  }
  std::vector<std::string> languages(lang_set.begin(), lang_set.end());
  const std::size_t F = train.front().features.cols();

  LfvTrainingResult result;
  result.extractor = LfvExtractor(config, F, languages, seed);
  LfvExtractor& ex = result.extractor;

  // Standardization statistics over all training frames.
  std::vector<double> mean(F, 0.0), sq(F, 0.0);
  double count = 0.0;
  for (const auto& u : train) {
    for (std::size_t t = 0; t < u.frames(); ++t) {
      for (std::size_t f = 0; f < F; ++f) {
        mean[f] += u.features(t, f);
        sq[f] += u.features(t, f) * u.features(t, f);
      }
    }
    count += double(u.frames());
  }
  std::vector<double> inv_std(F);
  for (std::size_t f = 0; f < F; ++f) {
    mean[f] /= count;
    const double var = std::max(sq[f] / count - mean[f] * mean[f], 1e-8);
    inv_std[f] = 1.0 / std::sqrt(var);
  }
  ex.SetNormalization(mean, inv_std);

  // Stack every training utterance once; frames are then sampled by index.
  std::vector<Tensor> stacked;
  std::vector<int> utt_label;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> frames;
  for (std::size_t i = 0; i < train.size(); ++i) {
    stacked.push_back(ex.StackContext(train[i].features));
    const auto it = std::find(languages.begin(), languages.end(), train[i].language);
    utt_label.push_back(static_cast<int>(it - languages.begin()));
    for (std::size_t t = 0; t < train[i].frames(); ++t) {
      frames.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(t));
    }
  }

  NesterovOptimizer opt(ex.Parameters(), config.optimizer);
  auto rng = derived_rng(seed, "lfv/shuffle");
  const std::size_t in_dim = ex.input_dim();
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(frames.begin(), frames.end(), rng);
    const std::size_t n = config.frames_per_epoch == 0
                              ? frames.size()
                              : std::min(frames.size(), config.frames_per_epoch);
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t b = 0; b < n; b += config.batch_size) {
      const std::size_t end = std::min(n, b + config.batch_size);
      Tensor x = Tensor::Matrix(end - b, in_dim);
      std::vector<int> labels;
      for (std::size_t j = b; j < end; ++j) {
        const auto [u, t] = frames[j];
        std::copy_n(&stacked[u](t, 0), in_dim, &x(j - b, 0));
        labels.push_back(utt_label[u]);
      }
      opt.BeginStep();
      total += ex.Loss(x, labels, true);
      opt.FinishStep();
      ++batches;
    }
    result.epoch_losses.push_back(total / double(std::max<std::size_t>(1, batches)));
    if (log) {
      std::ostringstream os;
      os << "lfv epoch " << epoch + 1 << " loss " << result.epoch_losses.back();
      log(os.str());
    }
  }
  result.heldout_accuracy = heldout.empty() ? 0.0 : frame_language_accuracy(ex, heldout);
  return result;
}

double frame_language_accuracy(const LfvExtractor& extractor,
                               std::span<const Utterance> utts) {
  const auto& langs = extractor.languages();
  std::size_t correct = 0, total = 0;
  for (const auto& u : utts) {
    const auto it = std::find(langs.begin(), langs.end(), u.language);
    const int label = it == langs.end() ? -1 : static_cast<int>(it - langs.begin());
    const Tensor logp = extractor.LanguageLogPosteriors(u.features);
    for (std::size_t t = 0; t < logp.rows(); ++t) {
      auto row = logp.row(t);
      const int best = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
      correct += best == label;
      ++total;
    }
  }
  return total ? double(correct) / double(total) : 0.0;
}

Tensor extract_lfv(const LfvExtractor& extractor, const Tensor& features,
                   LfvGranularity granularity) {
  Tensor per_frame = extractor.Bottleneck(features);
  if (granularity == LfvGranularity::kFrame) return per_frame;
  const std::size_t T = per_frame.rows(), D = per_frame.cols();
  Tensor mean = Tensor::Vector(D);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t d = 0; d < D; ++d) mean[d] += per_frame(t, d);
  }
  for (std::size_t d = 0; d < D; ++d) mean[d] /= double(T);
  return mean;
}

}  // namespace lfv
