// experiment/pipeline.cc

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

#include "experiment/pipeline.h"

#include <sstream>

#include "corpus/feature_io.h"
#include "decode/char_lm.h"
#include "experiment/experiment.h"
#include "lfv/extractor.h"
#include "lfv/lfv_io.h"
#include "numerics/errors.h"

namespace lfv {

namespace {

// LFV of each utterance looked up by id; empty when no file is given.
std::vector<Tensor> lfvs_for(const std::vector<Utterance>& utts, const std::string& lfv_path) {
  std::vector<Tensor> out;
  if (lfv_path.empty()) return out;
  const LfvTable table = read_lfv_file(lfv_path);
  out.reserve(utts.size());
  for (const auto& u : utts) {
    auto it = table.find(u.id);
    if (it == table.end()) throw FormatError(lfv_path + ": no LFV for utterance " + u.id);
    out.push_back(it->second.values);
  }
  return out;
}

}  // namespace

void gen_data_stage(const ExperimentConfig& config, std::uint64_t seed,
                    const std::string& out_dir) {
  write_corpus_dir(out_dir, generate_default_corpus(config.corpus, seed));
}

double train_lfv_stage(const ExperimentConfig& config, std::uint64_t seed,
                       const std::string& train_manifest, const std::string& heldout_manifest,
                       const std::string& out_path, const LogFn& log) {
  const auto train = read_manifest(train_manifest);
  const auto heldout =
      heldout_manifest.empty() ? std::vector<Utterance>{} : read_manifest(heldout_manifest);
  auto result = train_lfv_extractor(train, heldout, config.lfv, seed, log);
  result.extractor.Save(out_path);
  return result.heldout_accuracy;
}

void extract_lfv_stage(const std::string& extractor_path, const std::string& manifest,
                       LfvGranularity granularity, const std::string& out_path) {
  const LfvExtractor extractor = LfvExtractor::Load(extractor_path);
  LfvTable table;
  for (const auto& u : read_manifest(manifest)) {
    table[u.id] = LfvRecord{granularity, extract_lfv(extractor, u.features, granularity)};
  }
  write_lfv_file(out_path, table);
}

AmTrainingResult train_am_stage(const ExperimentConfig& config, std::uint64_t seed,
                                 const std::string& manifest, const std::string& lfv_path,
                                 Adaptation condition, DataSize size,
                                 const std::string& out_path, const LogFn& log) {
  if (condition != Adaptation::kBaseline && lfv_path.empty()) {
    throw UsageError(std::string("condition '") + adaptation_name(condition) +
                     "' needs an LFV file");
  }
  const auto utts = read_manifest(manifest);
  if (utts.empty()) throw UsageError("manifest " + manifest + " is empty");
  const Vocabulary vocab = Vocabulary::FromTranscripts(utts);
  AcousticModelConfig model_config = config.ModelFor(condition, vocab.size());
  model_config.input_feature_dim = utts.front().features.cols();
  model_config.token_symbols = vocab.symbols();
  AcousticModel model(model_config, seed);
  const auto lfvs = condition == Adaptation::kBaseline ? std::vector<Tensor>{}
                                                       : lfvs_for(utts, lfv_path);
  TrainConfig train = config.train;
  train.epochs = config.EpochsFor(size);
  auto result = train_am(model, utts, vocab, lfvs, train, seed, log);
  save_checkpoint(model, out_path);
  return result;
}

void decode_stage(const std::string& model_path, const std::string& manifest,
                  const std::string& lfv_path, const std::string& lm_path,
                  const FusionOptions& options, const std::string& out_path) {
  const AcousticModel model = load_checkpoint(model_path);
  const auto& symbols = model.config().token_symbols;
  if (symbols.size() != model.config().vocab_size) {
    throw FormatError(model_path + ": checkpoint lacks token symbols");
  }
  std::vector<std::string> without_blank(symbols.begin() + 1, symbols.end());
  const Vocabulary vocab(without_blank);
  const auto utts = read_manifest(manifest);
  const auto lfvs = model.config().adaptation == Adaptation::kBaseline
                        ? std::vector<Tensor>{}
                        : lfvs_for(utts, lfv_path);
  if (model.config().adaptation != Adaptation::kBaseline && lfv_path.empty()) {
    throw UsageError("this model needs an LFV file");
  }
  std::optional<CharRnnLm> lm;
  std::vector<int> am_to_lm(symbols.size(), -1);
  FusionOptions effective = options;
  if (!lm_path.empty()) {
    lm = CharRnnLm::Load(lm_path);
    am_to_lm = map_tokens_to_lm(symbols, *lm);
  } else {
    effective.lambda = 0.0;
  }
  std::vector<TranscriptRecord> hyps;
  for (std::size_t i = 0; i < utts.size(); ++i) {
    const Tensor lp = model.Forward({&utts[i].features, lfvs.empty() ? nullptr : &lfvs[i]});
    hyps.push_back({utts[i].id, utts[i].language,
                    vocab.Decode(fused_decode(lp, lm ? &*lm : nullptr, am_to_lm, effective))});
  }
  write_transcripts(out_path, hyps);
}

std::vector<double> train_lm_stage(const ExperimentConfig& config, std::uint64_t seed,
                                   const std::string& manifest, const std::string& language,
                                   const std::string& out_path, const LogFn& log) {
  std::vector<std::vector<std::string>> texts;
  for (const auto& u : read_manifest(manifest, false)) {
    if (language.empty() || u.language == language) texts.push_back(u.transcript);
  }
  auto result = train_lm(texts, config.lm, seed, log);
  result.lm.Save(out_path);
  return result.epoch_perplexities;
}

std::string score_stage(const std::string& ref_path, const std::string& hyp_path,
                        ScoreLevel level, const std::string& condition, const LogFn& warn) {
  const auto scores =
      score_corpus(read_transcripts(ref_path), read_transcripts(hyp_path), level, warn);
  std::ostringstream os;
  write_score_tsv(os, condition, scores);
  return os.str();
}

}  // namespace lfv
