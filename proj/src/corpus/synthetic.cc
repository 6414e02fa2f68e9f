// corpus/synthetic.cc

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

#include "corpus/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <set>

#include "numerics/errors.h"
#include "numerics/ops.h"

namespace lfv {
namespace {

constexpr char kLetters[] = "abcdefghijklmnopqrstuvwxyz";

std::size_t SampleIndex(std::span<const double> probs, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng), acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (r < acc) return i;
  }
  return probs.size() - 1;
}

std::size_t UniformInt(std::size_t lo, std::size_t hi, std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Sparse random distribution: a few dominant entries over a uniform floor.
std::vector<double> PeakedDistribution(std::size_t n, std::size_t peaks,
                                       std::mt19937_64& rng) {
  std::vector<double> p(n, 0.05);
  for (std::size_t k = 0; k < peaks; ++k) {
    p[UniformInt(0, n - 1, rng)] += 1.0 + std::uniform_real_distribution<double>(0, 1)(rng);
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= sum;
  return p;
}

std::string Letter(std::size_t i) { return std::string(1, kLetters[i % 26]); }

}  // namespace

void SyntheticConfig::Validate() const {
  if (num_languages < 2) throw ConfigError("synthetic corpus needs >= 2 languages");
  if (words_per_lexicon == 0) throw ConfigError("synthetic lexicon is empty");
  if (units_per_language == 0 || units_per_language > global_units) {
    throw ConfigError("units_per_language must be in [1, global_units]");
  }
  if (feature_dim == 0) throw ConfigError("feature_dim must be > 0");
  if (min_word_units < 1 || min_word_units > max_word_units) {
    throw ConfigError("bad word length range");
  }
  if (min_unit_frames < 1 || min_unit_frames > max_unit_frames) {
    throw ConfigError("bad unit duration range");
  }
  if (min_utterance_frames < kFrameRate * kMinDurationSeconds ||
      min_utterance_frames > max_utterance_frames) {
    throw ConfigError("utterances must be at least 1 s long");
  }
  if (full_minutes <= 0 || test_minutes <= 0 || low_resource_minutes <= 0 ||
      low_resource_minutes > full_minutes) {
    throw ConfigError("split sizes must be positive with low_resource <= full");
  }
}

std::vector<double> SyntheticLanguageSpec::ExpectedFeatures(
    const SyntheticInventory& inv, std::size_t i) const {
  const std::size_t F = inv.prototypes.cols();
  std::vector<double> out(F);
  for (std::size_t f = 0; f < F; ++f) {
    out[f] = inv.prototypes(static_cast<std::size_t>(inventory[i]), f) + coloring(i, f);
  }
  return out;
}

SyntheticInventory make_inventory(const SyntheticConfig& config, std::uint64_t seed) {
  config.Validate();
  auto rng = derived_rng(seed, "inventory");
  std::normal_distribution<double> normal(0.0, config.prototype_scale);
  SyntheticInventory inv;
  inv.prototypes = Tensor::Matrix(config.global_units, config.feature_dim);
  for (double& v : inv.prototypes.values()) v = normal(rng);
  inv.silence = Tensor::Vector(config.feature_dim);
  for (double& v : inv.silence.values()) v = 0.5 * normal(rng);
  for (std::size_t u = 0; u < config.global_units; ++u) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "p%02zu", u);
    inv.unit_symbols.emplace_back(buf);
    inv.default_spelling.push_back(Letter(u));
  }
  return inv;
}

std::vector<SyntheticLanguageSpec> make_language_specs(
    const SyntheticConfig& config, const SyntheticInventory& inv,
    std::uint64_t seed) {
  config.Validate();
  const std::size_t F = config.feature_dim;
  std::vector<SyntheticLanguageSpec> specs;
  for (std::size_t l = 0; l < config.num_languages; ++l) {
    auto rng = derived_rng(seed, "language" + std::to_string(l));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    SyntheticLanguageSpec spec;
    spec.name = "lang" + std::to_string(l);

    std::vector<int> all(config.global_units);
    std::iota(all.begin(), all.end(), 0);
    std::shuffle(all.begin(), all.end(), rng);
    spec.inventory.assign(all.begin(), all.begin() + config.units_per_language);
    std::sort(spec.inventory.begin(), spec.inventory.end());
    const std::size_t n = spec.inventory.size();

    std::vector<double> offset(F);
    for (double& v : offset) v = config.language_offset_scale * normal(rng);
    spec.coloring = Tensor::Matrix(n, F);
    for (std::size_t i = 0; i < n; ++i) {
      // Pull each unit part of the way towards another global unit.
      const std::size_t self = static_cast<std::size_t>(spec.inventory[i]);
      std::size_t other = UniformInt(0, config.global_units - 1, rng);
      if (other == self) other = (other + 1) % config.global_units;
      for (std::size_t f = 0; f < F; ++f) {
        spec.coloring(i, f) =
            offset[f] + config.confusion_shift *
                            (inv.prototypes(other, f) - inv.prototypes(self, f));
      }
    }

    spec.start = PeakedDistribution(n, 6, rng);
    spec.transitions = Tensor::Matrix(n, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
      auto row = PeakedDistribution(n + 1, 4, rng);
      std::copy(row.begin(), row.end(), &spec.transitions(i, 0));
    }

    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t g = static_cast<std::size_t>(spec.inventory[i]);
      std::string s = unit(rng) < config.shared_spelling_prob
                          ? inv.default_spelling[g]
                          : Letter(UniformInt(0, 25, rng));
      if (unit(rng) < config.digraph_prob) s += Letter(UniformInt(0, 25, rng));
      if (s.size() == 2 && s[0] == s[1]) s.pop_back();
      spec.spelling.push_back(s);
      spec.mean_unit_frames.push_back(
          config.min_unit_frames +
          unit(rng) * double(config.max_unit_frames - config.min_unit_frames));
    }

    std::set<std::vector<int>> seen;
    std::size_t attempts = 0;
    while (spec.lexicon.size() < config.words_per_lexicon) {
      if (++attempts > 100000) throw ConfigError("cannot build a lexicon of distinct words");
      const std::size_t len = UniformInt(config.min_word_units, config.max_word_units, rng);
      std::vector<int> word;
      std::size_t cur = SampleIndex(spec.start, rng);
      word.push_back(static_cast<int>(cur));
      while (word.size() < len) {
        // Renormalize over units only, i.e. ignore the end-of-word column
        // until the target length is reached.
        std::vector<double> next(spec.transitions.row(cur).begin(),
                                 spec.transitions.row(cur).end() - 1);
        const double s = std::accumulate(next.begin(), next.end(), 0.0);
        for (double& v : next) v /= s;
        cur = SampleIndex(next, rng);
        word.push_back(static_cast<int>(cur));
      }
      if (seen.insert(word).second) spec.lexicon.push_back(std::move(word));
    }
    for (std::size_t r = 0; r < spec.lexicon.size(); ++r) {
      spec.word_weights.push_back(1.0 / std::pow(double(r + 1), config.zipf_exponent));
    }
    const double wsum = std::accumulate(spec.word_weights.begin(), spec.word_weights.end(), 0.0);
    for (double& w : spec.word_weights) w /= wsum;
    specs.push_back(std::move(spec));
  }
  return specs;
}

namespace {

struct GeneratedUtterance {
  Tensor features;
  std::vector<std::string> graphemes;
  std::vector<std::string> phones;
};

GeneratedUtterance GenerateOne(const SyntheticLanguageSpec& spec,
                               const SyntheticInventory& inv,
                               const SyntheticConfig& config, std::mt19937_64& rng) {
  const std::size_t F = config.feature_dim;
  std::normal_distribution<double> noise(0.0, config.noise_stddev);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t target =
      UniformInt(config.min_utterance_frames, config.max_utterance_frames, rng);

  std::vector<std::vector<double>> frames;
  // Frames of silence carry the language's channel offset (mean coloring).
  std::vector<double> silence(F);
  for (std::size_t f = 0; f < F; ++f) {
    double mean_offset = 0.0;
    for (std::size_t i = 0; i < spec.inventory.size(); ++i) mean_offset += spec.coloring(i, f);
    silence[f] = inv.silence[f] + mean_offset / double(spec.inventory.size());
  }
  auto emit = [&](const std::vector<double>& mean, std::size_t count) {
    for (std::size_t k = 0; k < count; ++k) {
      std::vector<double> x(F);
      for (std::size_t f = 0; f < F; ++f) x[f] = mean[f] + noise(rng);
      frames.push_back(std::move(x));
    }
  };

  GeneratedUtterance out;
  emit(silence, UniformInt(config.min_pause_frames, config.max_pause_frames, rng));
  bool first = true;
  // Leave room for trailing silence.
  while (frames.size() + config.max_pause_frames < target || first) {
    if (!first) {
      out.graphemes.push_back(kWordBoundary);
      out.phones.push_back(kWordBoundary);
      emit(silence, UniformInt(config.min_pause_frames, config.max_pause_frames, rng));
    }
    first = false;
    const auto& word = spec.lexicon[SampleIndex(spec.word_weights, rng)];
    for (int idx : word) {
      const std::size_t i = static_cast<std::size_t>(idx);
      const double mean_len = spec.mean_unit_frames[i];
      const double jitter = unit(rng) * 2.0 - 1.0;
      std::size_t len = static_cast<std::size_t>(std::lround(mean_len + jitter));
      len = std::clamp(len, config.min_unit_frames, config.max_unit_frames);
      // Digraph spellings need a frame per emitted grapheme.
      len = std::max(len, spec.spelling[i].size() + 1);
      emit(spec.ExpectedFeatures(inv, i), len);
      for (char c : spec.spelling[i]) out.graphemes.emplace_back(1, c);
      out.phones.push_back(inv.unit_symbols[static_cast<std::size_t>(spec.inventory[i])]);
    }
  }
  emit(silence, UniformInt(config.min_pause_frames, config.max_pause_frames, rng));
  while (frames.size() < config.min_utterance_frames) emit(silence, 1);

  out.features = Tensor::Matrix(frames.size(), F);
  for (std::size_t t = 0; t < frames.size(); ++t) {
    std::copy(frames[t].begin(), frames[t].end(), &out.features(t, 0));
  }
  return out;
}

void AddUtterance(const std::string& id, const std::string& lang,
                  GeneratedUtterance g, std::vector<Utterance>& graphemes,
                  std::vector<Utterance>& phones) {
  Utterance u;
  u.id = id;
  u.language = lang;
  u.duration_s = double(g.features.rows()) / kFrameRate;
  u.noise = false;
  u.features = std::move(g.features);
  Utterance p = u;
  u.unit_mode = UnitMode::kGrapheme;
  u.transcript = std::move(g.graphemes);
  p.unit_mode = UnitMode::kPhone;
  p.transcript = std::move(g.phones);
  graphemes.push_back(std::move(u));
  phones.push_back(std::move(p));
}

}  // namespace

SyntheticCorpus generate_corpus(std::span<const SyntheticLanguageSpec> specs,
                                const SyntheticInventory& inventory,
                                const SyntheticConfig& config, std::uint64_t seed) {
  config.Validate();
  if (specs.size() < 2) throw ConfigError("synthetic corpus needs >= 2 languages");
  SyntheticCorpus corpus;
  const double frames_per_minute = 60.0 * kFrameRate;
  for (const auto& spec : specs) {
    if (spec.lexicon.empty()) throw ConfigError("language " + spec.name + " has an empty lexicon");
    corpus.languages.push_back(spec.name);
    auto rng = derived_rng(seed, "corpus/" + spec.name);

    auto fill = [&](const char* split, double minutes, std::vector<Utterance>& g,
                    std::vector<Utterance>& p) {
      double frames = 0.0;
      for (std::size_t k = 0; frames < minutes * frames_per_minute; ++k) {
        char id[64];
        std::snprintf(id, sizeof id, "%s_%s_%05zu", spec.name.c_str(), split, k);
        auto gen = GenerateOne(spec, inventory, config, rng);
        frames += double(gen.features.rows());
        AddUtterance(id, spec.name, std::move(gen), g, p);
      }
    };
    const std::size_t train_begin = corpus.grapheme.train.size();
    fill("train", config.full_minutes, corpus.grapheme.train, corpus.phone.train);
    fill("test", config.test_minutes, corpus.grapheme.test, corpus.phone.test);

    // Low-resource subset: the leading utterances of this language's train
    // portion up to the requested amount.
    double frames = 0.0;
    for (std::size_t i = train_begin; i < corpus.grapheme.train.size() &&
                                      frames < config.low_resource_minutes * frames_per_minute;
         ++i) {
      frames += double(corpus.grapheme.train[i].frames());
      corpus.grapheme.low_resource_train.push_back(corpus.grapheme.train[i]);
      corpus.phone.low_resource_train.push_back(corpus.phone.train[i]);
    }
  }
  return corpus;
}

SyntheticCorpus generate_default_corpus(const SyntheticConfig& config,
                                        std::uint64_t seed) {
  const auto inventory = make_inventory(config, seed);
  const auto specs = make_language_specs(config, inventory, seed);
  return generate_corpus(specs, inventory, config, seed);
}

}  // namespace lfv
