// lfv/extractor.h

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

#ifndef LFVCTC_LFV_EXTRACTOR_H_
#define LFVCTC_LFV_EXTRACTOR_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "corpus/utterance.h"
#include "layers/affine.h"
#include "numerics/optimizer.h"
#include "numerics/tensor.h"

namespace lfv {

enum class LfvGranularity { kUtterance = 0, kFrame = 1 };

const char* granularity_name(LfvGranularity g);
LfvGranularity parse_granularity(const std::string& name);

struct LfvExtractorConfig {
  std::size_t context = 4;  // frames stacked on each side
  std::vector<std::size_t> hidden_sizes = {64, 64};
  std::size_t bottleneck_dim = 8;
  std::size_t epochs = 6;
  std::size_t batch_size = 64;
  // Frames drawn per epoch (0 = all training frames).
  std::size_t frames_per_epoch = 30000;
  OptimizerOptions optimizer{0.05, 0.9, 5.0};

  void Validate() const;
};

// Feed-forward language classifier over context-stacked frames:
//   tanh hidden layers -> logistic bottleneck (D) -> softmax over K languages.
// The bottleneck activations are the language feature vectors.
class LfvExtractor {
 public:
  LfvExtractor() = default;
  LfvExtractor(const LfvExtractorConfig& config, std::size_t feature_dim,
               std::vector<std::string> languages, std::uint64_t seed);

  const LfvExtractorConfig& config() const { return config_; }
  const std::vector<std::string>& languages() const { return languages_; }
  std::size_t feature_dim() const { return feature_dim_; }
  std::size_t bottleneck_dim() const { return config_.bottleneck_dim; }
  std::size_t input_dim() const { return (2 * config_.context + 1) * feature_dim_; }

  // Sets the per-dimension input standardization.
  void SetNormalization(std::vector<double> mean, std::vector<double> inv_std);

  // [T x F] -> [T x (2k+1)F], edge frames replicate the first/last frame,
  // after standardization.
  Tensor StackContext(const Tensor& features) const;

  // Bottleneck activations per frame [T x D], each in (0, 1).
  Tensor Bottleneck(const Tensor& features) const;
  // Language log-posteriors per frame [T x K].
  Tensor LanguageLogPosteriors(const Tensor& features) const;

  // Mean cross-entropy of stacked inputs [N x in] against language labels;
  // when `accumulate` is set, adds the gradient of that mean to parameters.
  double Loss(const Tensor& stacked, std::span<const int> labels, bool accumulate);

  ParameterList Parameters();
  std::vector<AffineLayer>& layers() { return layers_; }

  void Save(const std::string& path) const;
  static LfvExtractor Load(const std::string& path);

 private:
  LfvExtractorConfig config_;
  std::size_t feature_dim_ = 0;
  std::vector<std::string> languages_;
  std::vector<double> mean_, inv_std_;
  std::vector<AffineLayer> layers_;  // hidden..., bottleneck, classifier
};

struct LfvTrainingResult {
  LfvExtractor extractor;
  std::vector<double> epoch_losses;
  double heldout_accuracy = 0.0;  // frame level
};

// Trains on the frames of `train` labeled with their utterance language.
// Languages are indexed in sorted order. Throws UsageError for fewer than two
// languages. `log` receives one line per epoch when set.
LfvTrainingResult train_lfv_extractor(
    std::span<const Utterance> train, std::span<const Utterance> heldout,
    const LfvExtractorConfig& config, std::uint64_t seed,
    const std::function<void(const std::string&)>& log = {});

// Frame-level accuracy of the extractor's classifier on `utts`.
double frame_language_accuracy(const LfvExtractor& extractor,
                               std::span<const Utterance> utts);

// [T x D] per frame, or [D] utterance mean.
Tensor extract_lfv(const LfvExtractor& extractor, const Tensor& features,
                   LfvGranularity granularity);

}  // namespace lfv

#endif  // LFVCTC_LFV_EXTRACTOR_H_
