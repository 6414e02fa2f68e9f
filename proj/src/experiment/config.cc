// experiment/config.cc

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

#include "experiment/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "numerics/errors.h"

namespace lfv {

const char* data_size_name(DataSize s) {
  return s == DataSize::kFull ? "full" : "low_resource";
}

DataSize parse_data_size(const std::string& name) {
  if (name == "full") return DataSize::kFull;
  if (name == "low_resource" || name == "low") return DataSize::kLowResource;
  throw ConfigError("unknown data size '" + name + "' (expected full or low_resource)");
}

std::size_t ExperimentConfig::EpochsFor(DataSize size) const {
  if (size == DataSize::kLowResource && low_resource_epochs > 0) return low_resource_epochs;
  return train.epochs;
}

LfvGranularity ExperimentConfig::GranularityFor(Adaptation a) const {
  return a == Adaptation::kAppend ? append_granularity : modulate_granularity;
}

AcousticModelConfig ExperimentConfig::ModelFor(Adaptation a, std::size_t vocab_size) const {
  AcousticModelConfig m = model;
  m.vocab_size = vocab_size;
  m.adaptation = a;
  m.lfv_dim = a == Adaptation::kBaseline ? 0 : lfv.bottleneck_dim;
  return m;
}

void ExperimentConfig::Validate() const {
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (conditions.empty()) throw ConfigError("conditions must not be empty");
  if (unit_modes.empty()) throw ConfigError("unit_modes must not be empty");
  if (data_sizes.empty()) throw ConfigError("data_sizes must not be empty");
  if (corpus_source == kGenerateCorpus) corpus.Validate();
  lfv.Validate();
  train.Validate();
  if (decode.beam == 0) throw ConfigError("decode.beam must be at least 1");
  if (decode.lambda < 0) throw ConfigError("decode.lambda must be >= 0");
  for (Adaptation a : conditions) ModelFor(a, 2).Validate();
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& s) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw ConfigError("invalid number '" + s + "'");
  }
  return v;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("invalid boolean '" + s + "'");
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T, typename F>
std::string fmt_list(const std::vector<T>& items, F&& f) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += f(items[i]);
  }
  return out;
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename M>
Field size_field(M member) {
  return {[member](ExperimentConfig& c, const std::string& v) {
            std::invoke(member, c) = parse_number<std::size_t>(v);
          },
          [member](const ExperimentConfig& c) {
            return std::to_string(std::invoke(member, c));
          }};
}

template <typename M>
Field real_field(M member) {
  return {[member](ExperimentConfig& c, const std::string& v) {
            std::invoke(member, c) = parse_number<double>(v);
          },
          [member](const ExperimentConfig& c) { return fmt(std::invoke(member, c)); }};
}

// Ordered so that formatting is canonical.
const std::vector<std::pair<std::string, Field>>& fields() {
  using C = ExperimentConfig;
  static const std::vector<std::pair<std::string, Field>> table = {
      {"seeds",
       {[](C& c, const std::string& v) {
          c.seeds.clear();
          for (const auto& s : split_list(v)) c.seeds.push_back(parse_number<std::uint64_t>(s));
        },
        [](const C& c) {
          return fmt_list(c.seeds, [](std::uint64_t s) { return std::to_string(s); });
        }}},
      {"conditions",
       {[](C& c, const std::string& v) {
          c.conditions.clear();
          for (const auto& s : split_list(v)) c.conditions.push_back(parse_adaptation(s));
        },
        [](const C& c) {
          return fmt_list(c.conditions, [](Adaptation a) { return std::string(adaptation_name(a)); });
        }}},
      {"unit_modes",
       {[](C& c, const std::string& v) {
          c.unit_modes.clear();
          for (const auto& s : split_list(v)) c.unit_modes.push_back(parse_unit_mode(s));
        },
        [](const C& c) {
          return fmt_list(c.unit_modes, [](UnitMode m) { return std::string(unit_mode_name(m)); });
        }}},
      {"data_sizes",
       {[](C& c, const std::string& v) {
          c.data_sizes.clear();
          for (const auto& s : split_list(v)) c.data_sizes.push_back(parse_data_size(s));
        },
        [](const C& c) {
          return fmt_list(c.data_sizes, [](DataSize d) { return std::string(data_size_name(d)); });
        }}},

      {"corpus.source",
       {[](C& c, const std::string& v) { c.corpus_source = v; },
        [](const C& c) { return c.corpus_source; }}},
      {"corpus.languages", size_field([](auto& c) -> auto& { return c.corpus.num_languages; })},
      {"corpus.feature_dim", size_field([](auto& c) -> auto& { return c.corpus.feature_dim; })},
      {"corpus.global_units", size_field([](auto& c) -> auto& { return c.corpus.global_units; })},
      {"corpus.units_per_language",
       size_field([](auto& c) -> auto& { return c.corpus.units_per_language; })},
      {"corpus.words_per_lexicon",
       size_field([](auto& c) -> auto& { return c.corpus.words_per_lexicon; })},
      {"corpus.min_word_units", size_field([](auto& c) -> auto& { return c.corpus.min_word_units; })},
      {"corpus.max_word_units", size_field([](auto& c) -> auto& { return c.corpus.max_word_units; })},
      {"corpus.full_minutes", real_field([](auto& c) -> auto& { return c.corpus.full_minutes; })},
      {"corpus.low_resource_minutes",
       real_field([](auto& c) -> auto& { return c.corpus.low_resource_minutes; })},
      {"corpus.test_minutes", real_field([](auto& c) -> auto& { return c.corpus.test_minutes; })},
      {"corpus.min_utterance_frames",
       size_field([](auto& c) -> auto& { return c.corpus.min_utterance_frames; })},
      {"corpus.max_utterance_frames",
       size_field([](auto& c) -> auto& { return c.corpus.max_utterance_frames; })},
      {"corpus.min_unit_frames", size_field([](auto& c) -> auto& { return c.corpus.min_unit_frames; })},
      {"corpus.max_unit_frames", size_field([](auto& c) -> auto& { return c.corpus.max_unit_frames; })},
      {"corpus.noise_stddev", real_field([](auto& c) -> auto& { return c.corpus.noise_stddev; })},
      {"corpus.language_offset",
       real_field([](auto& c) -> auto& { return c.corpus.language_offset_scale; })},
      {"corpus.confusion_shift", real_field([](auto& c) -> auto& { return c.corpus.confusion_shift; })},
      {"corpus.shared_spelling_prob",
       real_field([](auto& c) -> auto& { return c.corpus.shared_spelling_prob; })},
      {"corpus.digraph_prob", real_field([](auto& c) -> auto& { return c.corpus.digraph_prob; })},
      {"corpus.zipf_exponent", real_field([](auto& c) -> auto& { return c.corpus.zipf_exponent; })},

      {"model.conv_channels",
       {[](C& c, const std::string& v) {
          const auto items = split_list(v);
          if (items.empty()) throw ConfigError("model.conv_channels must not be empty");
          const ConvLayerSpec base = c.model.conv_layers.empty() ? ConvLayerSpec{}
                                                                 : c.model.conv_layers.front();
          c.model.conv_layers.assign(items.size(), base);
          for (std::size_t i = 0; i < items.size(); ++i) {
            c.model.conv_layers[i].out_channels = parse_number<std::size_t>(items[i]);
          }
        },
        [](const C& c) {
          return fmt_list(c.model.conv_layers,
                          [](const ConvLayerSpec& s) { return std::to_string(s.out_channels); });
        }}},
      {"model.conv_kernel_time",
       {[](C& c, const std::string& v) {
          for (auto& s : c.model.conv_layers) s.kernel_time = parse_number<std::size_t>(v);
        },
        [](const C& c) { return std::to_string(c.model.conv_layers.front().kernel_time); }}},
      {"model.conv_kernel_freq",
       {[](C& c, const std::string& v) {
          for (auto& s : c.model.conv_layers) s.kernel_freq = parse_number<std::size_t>(v);
        },
        [](const C& c) { return std::to_string(c.model.conv_layers.front().kernel_freq); }}},
      {"model.conv_pool",
       {[](C& c, const std::string& v) {
          for (auto& s : c.model.conv_layers) s.pool_freq = parse_number<std::size_t>(v);
        },
        [](const C& c) { return std::to_string(c.model.conv_layers.front().pool_freq); }}},
      {"model.lstm_layers",
       {[](C& c, const std::string& v) {
          const std::size_t cells = c.model.lstm_layers.empty()
                                        ? BiLstmLayerSpec{}.cells_per_direction
                                        : c.model.lstm_layers.front().cells_per_direction;
          c.model.lstm_layers.assign(parse_number<std::size_t>(v), BiLstmLayerSpec{cells});
        },
        [](const C& c) { return std::to_string(c.model.lstm_layers.size()); }}},
      {"model.lstm_cells",
       {[](C& c, const std::string& v) {
          for (auto& l : c.model.lstm_layers) l.cells_per_direction = parse_number<std::size_t>(v);
        },
        [](const C& c) {
          return std::to_string(c.model.lstm_layers.empty()
                                    ? 0
                                    : c.model.lstm_layers.front().cells_per_direction);
        }}},
      {"model.modulation_layer",
       {[](C& c, const std::string& v) { c.model.modulation_layer = parse_number<int>(v); },
        [](const C& c) { return std::to_string(c.model.modulation_layer); }}},
      {"model.lstm_init_scale", real_field([](auto& c) -> auto& { return c.model.lstm_init_scale; })},
      {"model.append_granularity",
       {[](C& c, const std::string& v) { c.append_granularity = parse_granularity(v); },
        [](const C& c) { return std::string(granularity_name(c.append_granularity)); }}},
      {"model.modulate_granularity",
       {[](C& c, const std::string& v) { c.modulate_granularity = parse_granularity(v); },
        [](const C& c) { return std::string(granularity_name(c.modulate_granularity)); }}},

      {"lfv.context", size_field([](auto& c) -> auto& { return c.lfv.context; })},
      {"lfv.hidden",
       {[](C& c, const std::string& v) {
          c.lfv.hidden_sizes.clear();
          for (const auto& s : split_list(v)) c.lfv.hidden_sizes.push_back(parse_number<std::size_t>(s));
        },
        [](const C& c) {
          return fmt_list(c.lfv.hidden_sizes, [](std::size_t s) { return std::to_string(s); });
        }}},
      {"lfv.dim", size_field([](auto& c) -> auto& { return c.lfv.bottleneck_dim; })},
      {"lfv.epochs", size_field([](auto& c) -> auto& { return c.lfv.epochs; })},
      {"lfv.batch_size", size_field([](auto& c) -> auto& { return c.lfv.batch_size; })},
      {"lfv.frames_per_epoch", size_field([](auto& c) -> auto& { return c.lfv.frames_per_epoch; })},
      {"lfv.lr", real_field([](auto& c) -> auto& { return c.lfv.optimizer.learning_rate; })},
      {"lfv.momentum", real_field([](auto& c) -> auto& { return c.lfv.optimizer.momentum; })},
      {"lfv.clip", real_field([](auto& c) -> auto& { return c.lfv.optimizer.clip_norm; })},

      {"train.epochs", size_field([](auto& c) -> auto& { return c.train.epochs; })},
      {"train.low_resource_epochs", size_field([](auto& c) -> auto& { return c.low_resource_epochs; })},
      {"train.lr", real_field([](auto& c) -> auto& { return c.train.learning_rate; })},
      {"train.momentum", real_field([](auto& c) -> auto& { return c.train.momentum; })},
      {"train.clip", real_field([](auto& c) -> auto& { return c.train.clip_norm; })},
      {"train.batch_size", size_field([](auto& c) -> auto& { return c.train.batch_size; })},
      {"train.halving_threshold", real_field([](auto& c) -> auto& { return c.train.halving_threshold; })},

      {"lm.embedding_dim", size_field([](auto& c) -> auto& { return c.lm.embedding_dim; })},
      {"lm.hidden", size_field([](auto& c) -> auto& { return c.lm.hidden; })},
      {"lm.epochs", size_field([](auto& c) -> auto& { return c.lm.epochs; })},
      {"lm.batch_size", size_field([](auto& c) -> auto& { return c.lm.batch_size; })},
      {"lm.lr", real_field([](auto& c) -> auto& { return c.lm.optimizer.learning_rate; })},
      {"lm.momentum", real_field([](auto& c) -> auto& { return c.lm.optimizer.momentum; })},

      {"decode.lambda", real_field([](auto& c) -> auto& { return c.decode.lambda; })},
      {"decode.beam", size_field([](auto& c) -> auto& { return c.decode.beam; })},
      {"decode.unknown_log_prob", real_field([](auto& c) -> auto& { return c.decode.unknown_log_prob; })},

      {"wer.enabled",
       {[](C& c, const std::string& v) { c.wer_enabled = parse_bool(v); },
        [](const C& c) { return std::string(c.wer_enabled ? "true" : "false"); }}},
      {"wer.language",
       {[](C& c, const std::string& v) { c.wer_language = v; },
        [](const C& c) { return c.wer_language; }}},
  };
  return table;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source) {
  std::map<std::string, const Field*> index;
  for (const auto& [key, field] : fields()) index[key] = &field;

  ExperimentConfig config;
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    auto it = index.find(key);
    if (it == index.end()) throw ConfigError(where + ": unknown key '" + key + "'");
    try {
      it->second->set(config, value);
    } catch (const Error& e) {
      throw ConfigError(where + ": " + key + ": " + e.what());
    }
  }
  config.Validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read config file: " + path);
  std::ostringstream text;
  text << is.rdbuf();
  return parse_experiment_config(text.str(), path);
}

std::string format_experiment_config(const ExperimentConfig& config) {
  std::ostringstream os;
  for (const auto& [key, field] : fields()) os << key << " = " << field.get(config) << '\n';
  return os.str();
}

}  // namespace lfv
