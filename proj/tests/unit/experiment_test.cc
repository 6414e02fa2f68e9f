// tests/unit/experiment_test.cc

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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "experiment/config.h"
#include "experiment/experiment.h"
#include "experiment/pipeline.h"
#include "experiment/report.h"
#include "experiment/training.h"
#include "numerics/errors.h"
#include "tests/support/temp_dir.h"

namespace lfv {
namespace {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// Small enough to run in seconds.
constexpr char kTinyConfig[] = R"(# tiny
seeds = 3
conditions = baseline
unit_modes = grapheme
data_sizes = full
corpus.full_minutes = 0.2
corpus.low_resource_minutes = 0.1
corpus.test_minutes = 0.05
model.lstm_layers = 1
model.lstm_cells = 8
lfv.epochs = 1
lfv.frames_per_epoch = 2000
train.epochs = 1
lm.epochs = 1
lm.hidden = 8
wer.enabled = false
)";

TEST_CASE("config defaults validate and round trip through text") {
  const ExperimentConfig def;
  CHECK_NOTHROW(def.Validate());
  CHECK(def.seeds == std::vector<std::uint64_t>{1, 2, 3, 4, 5});
  CHECK(def.conditions.size() == 3);
  const std::string text = format_experiment_config(def);
  CHECK(format_experiment_config(parse_experiment_config(text)) == text);
}

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_experiment_config(
      "# comment\n\nseeds = 4, 9\nconditions = modulate,append\ntrain.lr = 0.125\n"
      "data_sizes = low\n");
  CHECK(c.seeds == std::vector<std::uint64_t>{4, 9});
  CHECK(c.conditions == std::vector<Adaptation>{Adaptation::kModulate, Adaptation::kAppend});
  CHECK(c.train.learning_rate == 0.125);
  CHECK(c.data_sizes == std::vector<DataSize>{DataSize::kLowResource});
}

TEST_CASE("config errors name the line") {
  try {
    parse_experiment_config("seeds = 1\nbogus.key = 3\n", "exp.cfg");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("exp.cfg:2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_experiment_config("seeds = \n"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("train.epochs = many\n"), ConfigError);
  CHECK_THROWS_AS(parse_experiment_config("no equals sign\n"), ConfigError);
  // 2H = 2 * 5 is not a multiple of D = 8.
  CHECK_THROWS_AS(parse_experiment_config("model.lstm_cells = 5\n"), ConfigError);
  CHECK_THROWS_AS(load_experiment_config("/nonexistent/exp.cfg"), IoError);
}

TEST_CASE("report TSV round trip") {
  ExperimentReport report;
  ReportRow r;
  r.condition = "modulate";
  r.unit_mode = "grapheme";
  r.data_size = "full";
  r.language = "lang0";
  r.seed = 2;
  r.ter = quantize_rate(12.345678);
  r.wer = quantize_rate(40.5);
  report.rows.push_back(r);
  r.language = "ALL";
  r.wer.reset();
  report.rows.push_back(r);
  r.failed = true;
  r.ter = 0.0;
  r.language = "lang1";
  report.rows.push_back(r);
  WerRow w;
  w.condition = "baseline";
  w.data_size = "low_resource";
  w.language = "lang0";
  w.seed = 1;
  w.lambda = 0.3;
  w.wer = quantize_rate(55.0);
  report.wer_rows.push_back(w);

  const std::string tsv = format_report_tsv(report.rows);
  CHECK(tsv.rfind("condition\tunit_mode\tdata_size\tlanguage\tseed\tTER\tWER\n", 0) == 0);
  CHECK(tsv.find("FAILED") != std::string::npos);
  CHECK(parse_report_tsv(tsv) == report.rows);
  CHECK(parse_wer_tsv(format_wer_tsv(report.wer_rows)) == report.wer_rows);

  testing::TempDir dir;
  write_report_dir(dir.path().string(), report);
  CHECK(read_report_dir(dir.path().string()) == report);
  CHECK(std::filesystem::exists(dir.path() / "report.txt"));
  CHECK_THROWS_AS(parse_report_tsv("wrong header\n"), FormatError);
}

TEST_CASE("medians") {
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
  std::vector<ReportRow> rows;
  for (std::uint64_t s = 1; s <= 3; ++s) {
    ReportRow r;
    r.condition = "baseline";
    r.unit_mode = "phone";
    r.data_size = "full";
    r.language = "ALL";
    r.seed = s;
    r.ter = double(s * 10);
    rows.push_back(r);
  }
  rows[2].failed = true;
  const auto m = median_ter(rows);
  CHECK(m.at({"baseline", "phone", "full", "ALL"}) == 15.0);
}

TEST_CASE("run_experiment writes a complete report") {
  testing::TempDir dir;
  const ExperimentConfig config = parse_experiment_config(kTinyConfig);
  std::vector<std::string> log;
  const ExperimentReport report =
      run_experiment(config, dir.path().string(), [&](const std::string& l) { log.push_back(l); });
  // One condition over four languages plus the pooled row.
  CHECK(report.rows.size() == 5);
  for (const auto& r : report.rows) CHECK_FALSE(r.failed);
  CHECK(std::filesystem::exists(dir.path() / "report.tsv"));
  CHECK(std::filesystem::exists(dir.path() / "report.txt"));
  CHECK(std::filesystem::exists(dir.path() / "config.used"));
  const std::string text = ReadFile((dir.path() / "experiment.log").string());
  CHECK(text.find("epoch 1 loss") != std::string::npos);
  std::size_t trainings = 0;
  for (const auto& l : log) trainings += l.find("done in") != std::string::npos && l.find("[baseline]") != std::string::npos;
  CHECK(trainings == 1);
  CHECK(read_report_dir(dir.path().string()) == report);
}

TEST_CASE("failed cells are recorded and the run continues") {
  testing::TempDir dir;
  ExperimentConfig config = parse_experiment_config(kTinyConfig);
  config.corpus_source = (dir.path() / "missing_corpus").string();
  const ExperimentReport report = run_experiment(config, (dir.path() / "out").string());
  REQUIRE_FALSE(report.rows.empty());
  for (const auto& r : report.rows) CHECK(r.failed);
}

TEST_CASE("corpus directories round trip through manifests") {
  testing::TempDir dir;
  const ExperimentConfig config = parse_experiment_config(kTinyConfig);
  gen_data_stage(config, 3, dir.path().string());
  const SyntheticCorpus back = read_corpus_dir(dir.path().string());
  const SyntheticCorpus direct = load_or_generate_corpus(config, 3);
  REQUIRE(back.grapheme.train.size() == direct.grapheme.train.size());
  CHECK(back.grapheme.train[0].features == direct.grapheme.train[0].features);
  CHECK(back.phone.test.back().transcript == direct.phone.test.back().transcript);
  CHECK(back.grapheme.low_resource_train.size() == direct.grapheme.low_resource_train.size());
}

TEST_CASE("learning-rate halving follows the threshold") {
  const ExperimentConfig config = parse_experiment_config(kTinyConfig);
  const SyntheticCorpus corpus = load_or_generate_corpus(config, 3);
  const auto& train = corpus.grapheme.train;
  const Vocabulary vocab = Vocabulary::FromTranscripts(train);
  const AcousticModelConfig model_config = config.ModelFor(Adaptation::kBaseline, vocab.size());

  TrainConfig tc = config.train;
  tc.epochs = 3;
  tc.halving_threshold = -1.0;
  AcousticModel steady(model_config, 3);
  const auto kept = train_am(steady, train, vocab, {}, tc, 3);
  CHECK(kept.learning_rates == std::vector<double>(3, tc.learning_rate));

  // A threshold no epoch can meet halves after every epoch but the first.
  tc.halving_threshold = 10.0;
  AcousticModel halved(model_config, 3);
  const auto decayed = train_am(halved, train, vocab, {}, tc, 3);
  CHECK(decayed.learning_rates ==
        std::vector<double>{tc.learning_rate, tc.learning_rate, tc.learning_rate / 2});
}

}  // namespace
}  // namespace lfv
