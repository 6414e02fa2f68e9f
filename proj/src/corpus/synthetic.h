// corpus/synthetic.h

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

#ifndef LFVCTC_CORPUS_SYNTHETIC_H_
#define LFVCTC_CORPUS_SYNTHETIC_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "corpus/utterance.h"
#include "numerics/tensor.h"

namespace lfv {

// Knobs of the synthetic multilingual corpus. Minutes are per language.
struct SyntheticConfig {
  std::size_t num_languages = 4;
  std::size_t feature_dim = 12;
  std::size_t global_units = 40;
  std::size_t units_per_language = 24;
  std::size_t words_per_lexicon = 25;
  std::size_t min_word_units = 2;
  std::size_t max_word_units = 5;

  double full_minutes = 2.0;
  double low_resource_minutes = 0.5;
  double test_minutes = 0.5;

  // Utterance length in frames, drawn uniformly; always >= 1 s.
  std::size_t min_utterance_frames = 110;
  std::size_t max_utterance_frames = 200;
  std::size_t min_unit_frames = 3;
  std::size_t max_unit_frames = 6;
  std::size_t min_pause_frames = 2;
  std::size_t max_pause_frames = 3;

  double prototype_scale = 1.0;
  double noise_stddev = 0.6;
  // Per-language offset applied to every frame of the language.
  double language_offset_scale = 0.35;
  // Fraction of the way each colored unit is pulled towards another unit.
  double confusion_shift = 0.45;
  // Probability that a unit keeps its cross-language default spelling.
  double shared_spelling_prob = 0.5;
  double digraph_prob = 0.1;
  double zipf_exponent = 1.0;

  void Validate() const;
};

struct SyntheticInventory {
  std::vector<std::string> unit_symbols;     // "p00".. per global unit
  std::vector<std::string> default_spelling; // grapheme string per unit
  Tensor prototypes;                         // [global_units x F]
  Tensor silence;                            // [F]
};

struct SyntheticLanguageSpec {
  std::string name;
  std::vector<int> inventory;          // global unit ids
  Tensor coloring;                     // [|inventory| x F] offset per unit
  std::vector<double> start;           // first-unit distribution
  Tensor transitions;                  // [n x (n+1)]; last column ends the word
  std::vector<std::vector<int>> lexicon;  // words as indices into inventory
  std::vector<std::string> spelling;   // grapheme string per inventory unit
  std::vector<double> mean_unit_frames;
  std::vector<double> word_weights;    // unigram distribution over lexicon

  // Expected feature vector of inventory unit i in this language.
  std::vector<double> ExpectedFeatures(const SyntheticInventory& inv,
                                       std::size_t i) const;
};

struct CorpusSplit {
  std::vector<Utterance> train;
  std::vector<Utterance> test;
  std::vector<Utterance> low_resource_train;  // subset of train
};

struct SyntheticCorpus {
  std::vector<std::string> languages;
  CorpusSplit grapheme;
  CorpusSplit phone;

  const CorpusSplit& split(UnitMode mode) const {
    return mode == UnitMode::kGrapheme ? grapheme : phone;
  }
};

SyntheticInventory make_inventory(const SyntheticConfig& config, std::uint64_t seed);

std::vector<SyntheticLanguageSpec> make_language_specs(
    const SyntheticConfig& config, const SyntheticInventory& inventory,
    std::uint64_t seed);

// Deterministic per seed. Throws ConfigError for fewer than two languages or
// an empty lexicon.
SyntheticCorpus generate_corpus(std::span<const SyntheticLanguageSpec> specs,
                                const SyntheticInventory& inventory,
                                const SyntheticConfig& config, std::uint64_t seed);

// Convenience: inventory, language specs and corpus from one seed.
SyntheticCorpus generate_default_corpus(const SyntheticConfig& config,
                                        std::uint64_t seed);

}  // namespace lfv

#endif  // LFVCTC_CORPUS_SYNTHETIC_H_
