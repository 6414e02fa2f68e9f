// experiment/experiment.cc

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

#include "experiment/experiment.h"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "corpus/feature_io.h"
#include "ctc/ctc.h"
#include "decode/char_lm.h"
#include "decode/fused_decode.h"
#include "decode/scoring.h"
#include "lfv/extractor.h"
#include "numerics/errors.h"

namespace lfv {

namespace fs = std::filesystem;

namespace {

constexpr const char* kSplitFiles[] = {"train.tsv", "test.tsv", "low_resource.tsv"};

std::vector<Utterance>* split_member(CorpusSplit& split, std::size_t i) {
  switch (i) {
    case 0: return &split.train;
    case 1: return &split.test;
    default: return &split.low_resource_train;
  }
}

}  // namespace

void write_corpus_dir(const std::string& dir, const SyntheticCorpus& corpus) {
  const fs::path root(dir);
  fs::create_directories(root / "features");
  for (UnitMode mode : {UnitMode::kGrapheme, UnitMode::kPhone}) {
    CorpusSplit split = corpus.split(mode);
    fs::create_directories(root / unit_mode_name(mode));
    for (std::size_t i = 0; i < 3; ++i) {
      std::vector<Utterance>& utts = *split_member(split, i);
      for (Utterance& u : utts) {
        const std::string rel = "../features/" + u.id + ".mfcb";
        const fs::path file = root / "features" / (u.id + ".mfcb");
        if (!fs::exists(file)) write_features(file.string(), u.features);
        u.feature_path = rel;
      }
      write_manifest((root / unit_mode_name(mode) / kSplitFiles[i]).string(), utts);
    }
  }
}

SyntheticCorpus read_corpus_dir(const std::string& dir) {
  const fs::path root(dir);
  SyntheticCorpus corpus;
  bool any = false;
  std::set<std::string> languages;
  for (UnitMode mode : {UnitMode::kGrapheme, UnitMode::kPhone}) {
    const fs::path mode_dir = root / unit_mode_name(mode);
    if (!fs::exists(mode_dir / kSplitFiles[0])) continue;
    any = true;
    CorpusSplit& split = mode == UnitMode::kGrapheme ? corpus.grapheme : corpus.phone;
    for (std::size_t i = 0; i < 3; ++i) {
      const fs::path manifest = mode_dir / kSplitFiles[i];
      if (!fs::exists(manifest)) throw IoError("missing manifest " + manifest.string());
      *split_member(split, i) = read_manifest(manifest.string());
      for (const auto& u : *split_member(split, i)) languages.insert(u.language);
    }
  }
  if (!any) throw IoError("no corpus manifests under " + dir);
  corpus.languages.assign(languages.begin(), languages.end());
  return corpus;
}

SyntheticCorpus load_or_generate_corpus(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.corpus_source == kGenerateCorpus) return generate_default_corpus(config.corpus, seed);
  return read_corpus_dir(config.corpus_source);
}

namespace {

class ExperimentLog {
 public:
  ExperimentLog(const std::string& path, const LogFn& echo) : os_(path), echo_(echo) {
    if (!os_) throw IoError("cannot write " + path);
  }
  void operator()(const std::string& line) {
    os_ << line << '\n';
    os_.flush();
    if (echo_) echo_(line);
  }
  LogFn Prefixed(const std::string& prefix) {
    return [this, prefix](const std::string& line) { (*this)(prefix + line); };
  }

 private:
  std::ofstream os_;
  LogFn echo_;
};

// LFVs of every utterance for both granularities, keyed by utterance id.
struct LfvCache {
  const LfvExtractor* extractor = nullptr;
  std::map<std::pair<std::string, int>, Tensor> table;

  const Tensor& Get(const Utterance& u, LfvGranularity g) {
    auto key = std::make_pair(u.id, static_cast<int>(g));
    auto it = table.find(key);
    if (it == table.end()) it = table.emplace(key, extract_lfv(*extractor, u.features, g)).first;
    return it->second;
  }
  std::vector<Tensor> For(std::span<const Utterance> utts, LfvGranularity g) {
    std::vector<Tensor> out;
    out.reserve(utts.size());
    for (const auto& u : utts) out.push_back(Get(u, g));
    return out;
  }
};

std::vector<Utterance> of_language(std::span<const Utterance> utts, const std::string& lang) {
  std::vector<Utterance> out;
  for (const auto& u : utts) {
    if (u.language == lang) out.push_back(u);
  }
  return out;
}

double word_error_percent(const std::vector<TranscriptRecord>& refs,
                          const std::vector<TranscriptRecord>& hyps) {
  const auto scores = score_corpus(refs, hyps, ScoreLevel::kWord);
  auto it = scores.find(kAllLanguages);
  return it == scores.end() ? 0.0 : 100.0 * it->second.rate;
}

std::string fmt_seconds(std::chrono::steady_clock::time_point since) {
  std::ostringstream os;
  os.precision(1);
  os << std::fixed
     << std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count() << "s";
  return os.str();
}

struct CellContext {
  const ExperimentConfig& config;
  std::uint64_t seed;
  UnitMode mode;
  DataSize size;
  const std::vector<std::string>& languages;
};

void add_failed_rows(const CellContext& ctx, Adaptation a, ExperimentReport& report) {
  std::vector<std::string> langs = ctx.languages;
  langs.push_back(kAllLanguages);
  for (const auto& lang : langs) {
    ReportRow r;
    r.condition = adaptation_name(a);
    r.unit_mode = unit_mode_name(ctx.mode);
    r.data_size = data_size_name(ctx.size);
    r.language = lang;
    r.seed = ctx.seed;
    r.failed = true;
    report.rows.push_back(r);
  }
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                                const LogFn& echo) {
  config.Validate();
  fs::create_directories(out_dir);
  {
    std::ofstream os(fs::path(out_dir) / "config.used");
    os << format_experiment_config(config);
  }
  ExperimentLog log((fs::path(out_dir) / "experiment.log").string(), echo);
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;

  for (std::uint64_t seed : config.seeds) {
    const std::string seed_tag = "[seed " + std::to_string(seed) + "] ";
    log(seed_tag + "start");
    SyntheticCorpus corpus;
    std::vector<std::string> languages;
    std::optional<LfvExtractor> extractor;
    bool needs_lfv = false;
    for (Adaptation a : config.conditions) needs_lfv = needs_lfv || a != Adaptation::kBaseline;
    try {
      corpus = load_or_generate_corpus(config, seed);
      languages = corpus.languages;
      const CorpusSplit& lfv_split = corpus.split(config.unit_modes.front());
      log(seed_tag + "corpus: " + std::to_string(lfv_split.train.size()) + " train, " +
          std::to_string(lfv_split.low_resource_train.size()) + " low-resource, " +
          std::to_string(lfv_split.test.size()) + " test utterances");
      if (needs_lfv) {
        auto trained = train_lfv_extractor(lfv_split.train, lfv_split.test, config.lfv, seed,
                                           log.Prefixed(seed_tag));
        std::ostringstream os;
        os << seed_tag << "LFV extractor held-out frame accuracy " << trained.heldout_accuracy;
        log(os.str());
        extractor = std::move(trained.extractor);
      }
    } catch (const std::exception& e) {
      log(seed_tag + "setup failed: " + e.what());
      for (UnitMode mode : config.unit_modes) {
        for (DataSize size : config.data_sizes) {
          CellContext ctx{config, seed, mode, size, languages};
          for (Adaptation a : config.conditions) add_failed_rows(ctx, a, report);
        }
      }
      continue;
    }
    LfvCache lfvs;
    lfvs.extractor = extractor ? &*extractor : nullptr;

    for (UnitMode mode : config.unit_modes) {
      const CorpusSplit& split = corpus.split(mode);
      const Vocabulary vocab = Vocabulary::FromTranscripts(split.train);
      const bool wer_here = config.wer_enabled && mode == UnitMode::kGrapheme &&
                            std::find(languages.begin(), languages.end(),
                                      config.wer_language) != languages.end();
      const std::vector<Utterance> wer_test =
          wer_here ? of_language(split.test, config.wer_language) : std::vector<Utterance>{};

      for (DataSize size : config.data_sizes) {
        CellContext ctx{config, seed, mode, size, languages};
        const std::vector<Utterance>& train =
            size == DataSize::kFull ? split.train : split.low_resource_train;
        const std::string cell_tag = seed_tag + "[" + unit_mode_name(mode) + "/" +
                                     data_size_name(size) + "] ";

        std::optional<CharRnnLm> lm;
        std::vector<int> am_to_lm;
        if (wer_here) {
          try {
            std::vector<std::vector<std::string>> texts;
            for (const auto& u : of_language(train, config.wer_language)) {
              texts.push_back(u.transcript);
            }
            auto trained = train_lm(texts, config.lm, seed, log.Prefixed(cell_tag));
            lm = std::move(trained.lm);
            am_to_lm = map_tokens_to_lm(vocab.symbols(), *lm);
          } catch (const std::exception& e) {
            log(cell_tag + "LM training failed: " + e.what());
          }
        }

        TrainConfig train_config = config.train;
        train_config.epochs = config.EpochsFor(size);
        for (Adaptation a : config.conditions) {
          const std::string tag = cell_tag + "[" + adaptation_name(a) + "] ";
          const auto cell_start = std::chrono::steady_clock::now();
          try {
            AcousticModel model(config.ModelFor(a, vocab.size()), seed);
            std::vector<Tensor> train_lfvs, test_lfvs;
            if (a != Adaptation::kBaseline) {
              train_lfvs = lfvs.For(train, config.GranularityFor(a));
              test_lfvs = lfvs.For(split.test, config.GranularityFor(a));
            }
            const auto result = train_am(model, train, vocab, train_lfvs, train_config, seed,
                                         log.Prefixed(tag));
            const auto hyps = decode_greedy(model, split.test, vocab, test_lfvs);
            const auto scores = score_corpus(references_of(split.test), hyps, ScoreLevel::kToken,
                                             log.Prefixed(tag));

            std::optional<double> fused_wer;
            if (wer_here) {
              std::vector<TranscriptRecord> plain, fused;
              const std::vector<Tensor> wer_lfvs =
                  a == Adaptation::kBaseline ? std::vector<Tensor>{}
                                             : lfvs.For(wer_test, config.GranularityFor(a));
              FusionOptions no_lm = config.decode;
              no_lm.lambda = 0.0;
              for (std::size_t i = 0; i < wer_test.size(); ++i) {
                const Tensor lp = model.Forward(
                    {&wer_test[i].features, wer_lfvs.empty() ? nullptr : &wer_lfvs[i]});
                plain.push_back({wer_test[i].id, wer_test[i].language,
                                 vocab.Decode(fused_decode(lp, nullptr, am_to_lm, no_lm))});
                if (lm) {
                  fused.push_back({wer_test[i].id, wer_test[i].language,
                                   vocab.Decode(fused_decode(lp, &*lm, am_to_lm, config.decode))});
                }
              }
              const auto refs = references_of(wer_test);
              WerRow base{adaptation_name(a), data_size_name(size), config.wer_language, seed, 0.0};
              base.wer = quantize_rate(word_error_percent(refs, plain));
              report.wer_rows.push_back(base);
              if (lm) {
                WerRow with_lm = base;
                with_lm.lambda = quantize_rate(config.decode.lambda);
                with_lm.wer = quantize_rate(word_error_percent(refs, fused));
                report.wer_rows.push_back(with_lm);
                fused_wer = with_lm.wer;
              }
            }

            std::vector<std::string> langs = languages;
            langs.push_back(kAllLanguages);
            std::ostringstream summary;
            summary << tag << "done in " << fmt_seconds(cell_start) << "; skipped "
                    << result.skipped_utterances << "; TER";
            for (const auto& lang : langs) {
              ReportRow r;
              r.condition = adaptation_name(a);
              r.unit_mode = unit_mode_name(mode);
              r.data_size = data_size_name(size);
              r.language = lang;
              r.seed = seed;
              auto it = scores.find(lang);
              r.ter = quantize_rate(it == scores.end() ? 0.0 : 100.0 * it->second.rate);
              if (lang == config.wer_language) r.wer = fused_wer;
              summary << ' ' << lang << '=' << r.ter;
              report.rows.push_back(r);
            }
            log(summary.str());
          } catch (const std::exception& e) {
            log(tag + "FAILED: " + e.what());
            add_failed_rows(ctx, a, report);
            if (wer_here) {
              WerRow w{adaptation_name(a), data_size_name(size), config.wer_language, seed, 0.0};
              w.failed = true;
              report.wer_rows.push_back(w);
            }
          }
        }
      }
    }
  }
  write_report_dir(out_dir, report);
  log("finished in " + fmt_seconds(start));
  return report;
}

}  // namespace lfv
