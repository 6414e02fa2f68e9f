// tests/unit/lfv_test.cc

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

#include <algorithm>
#include <random>
#include <vector>

#include "corpus/synthetic.h"
#include "doctest.h"
#include "lfv/extractor.h"
#include "lfv/lfv_io.h"
#include "numerics/errors.h"
#include "tests/support/grad_scenarios.h"
#include "tests/support/temp_dir.h"

namespace lfv {
namespace {

struct Fixture {
  Fixture() {
    SyntheticConfig c;
    c.full_minutes = 0.4;
    c.low_resource_minutes = 0.1;
    c.test_minutes = 0.15;
    corpus = generate_default_corpus(c, 2);
    LfvExtractorConfig lc;
    lc.epochs = 5;
    lc.frames_per_epoch = 6000;
    config = lc;
    trained = train_lfv_extractor(corpus.grapheme.train, corpus.grapheme.test, lc, 2);
  }
  SyntheticCorpus corpus;
  LfvExtractorConfig config;
  LfvTrainingResult trained;
};

const Fixture& Shared() {
  static const Fixture f;
  return f;
}

TEST_CASE("extractor learns to discriminate languages") {
  const Fixture& f = Shared();
  CHECK(f.trained.heldout_accuracy > 0.25);
  REQUIRE(f.trained.epoch_losses.size() == 5);
  CHECK(f.trained.epoch_losses.back() < f.trained.epoch_losses.front());
  CHECK(frame_language_accuracy(f.trained.extractor, f.corpus.grapheme.test) ==
        doctest::Approx(f.trained.heldout_accuracy));
}

TEST_CASE("extracted LFVs are bounded and shaped") {
  const Fixture& f = Shared();
  for (const auto& u : f.corpus.grapheme.test) {
    const Tensor frames = extract_lfv(f.trained.extractor, u.features, LfvGranularity::kFrame);
    CHECK(frames.rows() == u.frames());
    CHECK(frames.cols() == 8);
    for (double v : frames.values()) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
    const Tensor mean = extract_lfv(f.trained.extractor, u.features, LfvGranularity::kUtterance);
    CHECK(mean.shape() == std::vector<std::size_t>{8});
    for (double v : mean.values()) {
      CHECK(v > 0.0);
      CHECK(v < 1.0);
    }
  }
}

TEST_CASE("single frame utterance mean equals its frame vector") {
  const Fixture& f = Shared();
  const Tensor one = Tensor({1, 12}, std::vector<double>(
      f.corpus.grapheme.test[0].features.row(3).begin(),
      f.corpus.grapheme.test[0].features.row(3).end()));
  const Tensor frame = extract_lfv(f.trained.extractor, one, LfvGranularity::kFrame);
  const Tensor mean = extract_lfv(f.trained.extractor, one, LfvGranularity::kUtterance);
  for (std::size_t d = 0; d < 8; ++d) CHECK(mean[d] == frame(0, d));
}

TEST_CASE("utterance mean is invariant to frame order") {
  const Fixture& f = Shared();
  // Context stacking makes per-frame vectors depend on neighbours, so the
  // property is checked on a context-free extractor.
  LfvExtractorConfig c = f.config;
  c.context = 0;
  LfvExtractor ex(c, 12, {"a", "b"}, 3);
  const Tensor& x = f.corpus.grapheme.test[1].features;
  std::vector<std::size_t> perm(x.rows());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::mt19937_64 rng(4);
  std::shuffle(perm.begin(), perm.end(), rng);
  Tensor shuffled(x.shape());
  for (std::size_t t = 0; t < perm.size(); ++t) {
    std::copy(x.row(perm[t]).begin(), x.row(perm[t]).end(), shuffled.row(t).begin());
  }
  const Tensor a = extract_lfv(ex, x, LfvGranularity::kUtterance);
  const Tensor b = extract_lfv(ex, shuffled, LfvGranularity::kUtterance);
  for (std::size_t d = 0; d < a.size(); ++d) CHECK(a[d] == doctest::Approx(b[d]).epsilon(1e-12));
}

TEST_CASE("extractor training is deterministic") {
  const Fixture& f = Shared();
  const auto again =
      train_lfv_extractor(f.corpus.grapheme.train, f.corpus.grapheme.test, f.config, 2);
  CHECK(again.epoch_losses == f.trained.epoch_losses);
  const Tensor& x = f.corpus.grapheme.test[0].features;
  CHECK(extract_lfv(again.extractor, x, LfvGranularity::kFrame) ==
        extract_lfv(f.trained.extractor, x, LfvGranularity::kFrame));
}

TEST_CASE("single language corpus is a usage error") {
  const Fixture& f = Shared();
  std::vector<Utterance> one;
  for (const auto& u : f.corpus.grapheme.train) {
    if (u.language == "lang0") one.push_back(u);
  }
  CHECK_THROWS_AS(train_lfv_extractor(one, {}, f.config, 1), UsageError);
}

TEST_CASE("extractor config validation") {
  LfvExtractorConfig c;
  c.hidden_sizes = {64};
  CHECK_THROWS_AS(c.Validate(), ConfigError);
  c.hidden_sizes = {64, 8};
  CHECK_THROWS_AS(c.Validate(), ConfigError);
}

TEST_CASE("extractor gradient check") {
  const auto r = testing::ExtractorGradCheck(7);
  INFO(r.worst);
  CHECK(r.ok());
}

TEST_CASE("extractor and LFV files round trip") {
  const Fixture& f = Shared();
  testing::TempDir dir;
  f.trained.extractor.Save(dir.file("ex.bin"));
  const LfvExtractor loaded = LfvExtractor::Load(dir.file("ex.bin"));
  const Tensor& x = f.corpus.grapheme.test[0].features;
  CHECK(extract_lfv(loaded, x, LfvGranularity::kFrame) ==
        extract_lfv(f.trained.extractor, x, LfvGranularity::kFrame));
  CHECK(loaded.languages() == f.trained.extractor.languages());

  LfvTable table;
  table["u1"] = {LfvGranularity::kUtterance, Tensor({3}, std::vector<double>{0.1, 0.2, 0.3})};
  table["u2"] = {LfvGranularity::kFrame, Tensor({2, 3}, std::vector<double>{1, 2, 3, 4, 5, 6})};
  write_lfv_file(dir.file("v.lfv"), table);
  const LfvTable back = read_lfv_file(dir.file("v.lfv"));
  REQUIRE(back.size() == 2);
  CHECK(back.at("u1").granularity == LfvGranularity::kUtterance);
  CHECK(back.at("u1").values == table["u1"].values);
  CHECK(back.at("u2").values == table["u2"].values);
  CHECK_THROWS(read_lfv_file(dir.file("ex.bin")));
}

TEST_CASE("granularity names") {
  CHECK(parse_granularity("frame") == LfvGranularity::kFrame);
  CHECK(parse_granularity("utterance") == LfvGranularity::kUtterance);
  CHECK_THROWS(parse_granularity("word"));
}

}  // namespace
}  // namespace lfv
