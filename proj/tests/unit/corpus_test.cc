// tests/unit/corpus_test.cc

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
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "corpus/feature_io.h"
#include "corpus/synthetic.h"
#include "corpus/utterance.h"
#include "doctest.h"
#include "numerics/errors.h"
#include "tests/support/oracles.h"
#include "tests/support/temp_dir.h"

namespace lfv {
namespace {

Utterance Make(const std::string& id, std::size_t frames, double duration = 2.0,
               std::size_t chars = 10, bool noise = false) {
  Utterance u;
  u.id = id;
  u.language = "x";
  u.features = Tensor::Matrix(frames, 1);
  u.duration_s = duration;
  u.noise = noise;
  u.transcript.assign(chars, "a");
  return u;
}

std::vector<std::string> Ids(const std::vector<Utterance>& utts) {
  std::vector<std::string> ids;
  for (const auto& u : utts) ids.push_back(u.id);
  return ids;
}

TEST_CASE("filter_corpus boundaries") {
  std::vector<Utterance> utts = {
      Make("short", 50, 0.5),          Make("edge_dur", 100, 0.99),
      Make("one_second", 100, 1.0),    Make("c639", 200, 5.0, 639),
      Make("c640", 200, 5.0, 640),     Make("noisy", 1000, 10.0, 10, true),
      Make("fine", 300, 3.0)};
  const auto kept = filter_corpus(utts);
  CHECK(Ids(kept) == std::vector<std::string>{"one_second", "c639", "fine"});
  CHECK(Ids(filter_corpus(kept)) == Ids(kept));
}

TEST_CASE("character length counts word boundaries as one character") {
  CHECK(transcript_char_length({"ab", "|", "c"}) == 4);
  CHECK(transcript_char_length({}) == 0);
}

TEST_CASE("sort_and_batch examples") {
  const std::vector<Utterance> three = {Make("u0", 5), Make("u1", 2), Make("u2", 9)};
  CHECK(sort_and_batch(three, 2) ==
        std::vector<std::vector<std::size_t>>{{1, 0}, {2}});

  std::vector<Utterance> many;
  for (int i = 0; i < 31; ++i) many.push_back(Make("u" + std::to_string(100 + i), 100 + i % 4));
  const auto batches = sort_and_batch(many, 15);
  REQUIRE(batches.size() == 3);
  CHECK(batches[0].size() == 15);
  CHECK(batches[1].size() == 15);
  CHECK(batches[2].size() == 1);

  std::vector<std::size_t> flat;
  for (const auto& b : batches) flat.insert(flat.end(), b.begin(), b.end());
  std::vector<std::size_t> sorted = flat;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == i);
  for (std::size_t i = 1; i < flat.size(); ++i) {
    CHECK(many[flat[i - 1]].frames() <= many[flat[i]].frames());
  }

  const std::vector<Utterance> equal = {Make("a", 7), Make("b", 7), Make("c", 7)};
  CHECK(sort_and_batch(equal, 15) == std::vector<std::vector<std::size_t>>{{0, 1, 2}});
  const std::vector<Utterance> by_id = {Make("z", 7), Make("m", 7)};
  CHECK(sort_and_batch(by_id, 15) == std::vector<std::vector<std::size_t>>{{1, 0}});
  CHECK_THROWS_AS(sort_and_batch(equal, 0), UsageError);
}

TEST_CASE("vocabulary puts blank at zero") {
  const Vocabulary v({"b", "a"});
  CHECK(v.id(kBlankSymbol) == 0);
  CHECK(v.id("b") == 1);
  CHECK(v.Encode({"a", "b"}) == std::vector<int>{2, 1});
  CHECK(v.Decode({2, 1}) == std::vector<std::string>{"a", "b"});
  CHECK_THROWS_AS(Vocabulary({"a", "a"}), ConfigError);
}

TEST_CASE("word reconstruction") {
  CHECK(tokens_to_words({"a", "b", "|", "c"}) == std::vector<std::string>{"ab", "c"});
  const std::vector<std::string> words = {"ab", "cde", "f"};
  std::vector<std::string> tokens;
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (w) tokens.push_back(kWordBoundary);
    for (char c : words[w]) tokens.emplace_back(1, c);
  }
  CHECK(tokens_to_words(tokens) == words);
}

TEST_CASE("feature files round trip and reject bad input") {
  testing::TempDir dir;
  std::mt19937_64 rng(1);
  const Tensor x = testing::RandomTensor({7, 3}, rng, 1e3);
  write_features(dir.file("x.mfcb"), x);
  CHECK(read_features(dir.file("x.mfcb")) == x);

  std::ifstream in(dir.file("x.mfcb"), std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(bytes.substr(0, 4) == "MFCB");
  CHECK(bytes.size() == 16 + 7 * 3 * 8);

  {
    std::ofstream out(dir.file("trunc.mfcb"), std::ios::binary);
    out << bytes.substr(0, bytes.size() - 5);
  }
  try {
    read_features(dir.file("trunc.mfcb"));
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("truncated") != std::string::npos);
    CHECK(msg.find(std::to_string(16 + 7 * 3 * 8)) != std::string::npos);
    CHECK(msg.find(std::to_string(16 + 7 * 3 * 8 - 5)) != std::string::npos);
  }
  {
    std::ofstream out(dir.file("zero.mfcb"), std::ios::binary);
    out << bytes.substr(0, 8) << std::string("\0\0\0\0\3\0\0\0", 8);
  }
  CHECK_THROWS_AS(read_features(dir.file("zero.mfcb")), FormatError);
  {
    std::ofstream out(dir.file("magic.mfcb"), std::ios::binary);
    out << "XXXX" << bytes.substr(4);
  }
  CHECK_THROWS_AS(read_features(dir.file("magic.mfcb")), FormatError);
  CHECK_THROWS_AS(write_features(dir.file("bad.mfcb"), Tensor({0, 3})), ShapeError);
}

TEST_CASE("manifest round trip") {
  testing::TempDir dir;
  Utterance u = Make("utt1", 4);
  u.features = Tensor({4, 2}, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8});
  u.transcript = {"a", "|", "b"};
  u.duration_s = 1.25;
  u.feature_path = "feats/utt1.mfcb";
  std::filesystem::create_directories(dir.path() / "feats");
  write_features(dir.file("feats/utt1.mfcb"), u.features);
  write_manifest(dir.file("m.tsv"), {u});
  const auto back = read_manifest(dir.file("m.tsv"));
  REQUIRE(back.size() == 1);
  CHECK(back[0].id == "utt1");
  CHECK(back[0].transcript == u.transcript);
  CHECK(back[0].duration_s == 1.25);
  CHECK(back[0].features == u.features);
  {
    std::ofstream out(dir.file("bad.tsv"));
    out << "id\tx\tgrapheme\t1.0\t0\tf.mfcb\n";
  }
  CHECK_THROWS_AS(read_manifest(dir.file("bad.tsv")), FormatError);
}

SyntheticConfig SmallSynthetic() {
  SyntheticConfig c;
  c.full_minutes = 0.3;
  c.low_resource_minutes = 0.1;
  c.test_minutes = 0.1;
  return c;
}

TEST_CASE("generator is deterministic per seed") {
  const auto a = generate_default_corpus(SmallSynthetic(), 7);
  const auto b = generate_default_corpus(SmallSynthetic(), 7);
  const auto c = generate_default_corpus(SmallSynthetic(), 8);
  REQUIRE(a.grapheme.train.size() == b.grapheme.train.size());
  for (std::size_t i = 0; i < a.grapheme.train.size(); ++i) {
    CHECK(a.grapheme.train[i].features == b.grapheme.train[i].features);
    CHECK(a.phone.train[i].transcript == b.phone.train[i].transcript);
  }
  CHECK(a.grapheme.train[0].features != c.grapheme.train[0].features);
}

TEST_CASE("generated corpora satisfy the split and filter invariants") {
  const auto corpus = generate_default_corpus(SmallSynthetic(), 3);
  for (UnitMode mode : {UnitMode::kGrapheme, UnitMode::kPhone}) {
    const CorpusSplit& s = corpus.split(mode);
    CHECK(filter_corpus(s.train).size() == s.train.size());
    CHECK(filter_corpus(s.test).size() == s.test.size());
    std::set<std::string> train_ids;
    for (const auto& u : s.train) train_ids.insert(u.id);
    for (const auto& u : s.test) CHECK(train_ids.count(u.id) == 0);
    for (const auto& u : s.low_resource_train) CHECK(train_ids.count(u.id) == 1);
    CHECK(s.low_resource_train.size() < s.train.size());
    std::set<std::string> langs;
    for (const auto& u : s.low_resource_train) langs.insert(u.language);
    CHECK(langs.size() == corpus.languages.size());
    for (const auto& u : s.train) {
      CHECK(u.unit_mode == mode);
      CHECK(std::abs(u.duration_s * kFrameRate - double(u.frames())) < 1e-9);
      if (mode == UnitMode::kPhone) {
        CHECK(u.transcript.front() != kWordBoundary);
        CHECK(u.transcript.back() != kWordBoundary);
      }
    }
  }
}

TEST_CASE("language specs are well formed and share sounds") {
  const SyntheticConfig config;
  const auto inv = make_inventory(config, 5);
  const auto specs = make_language_specs(config, inv, 5);
  REQUIRE(specs.size() == 4);
  for (std::size_t l = 0; l < specs.size(); ++l) {
    const auto& s = specs[l];
    for (std::size_t r = 0; r < s.transitions.rows(); ++r) {
      double sum = 0.0;
      for (double p : s.transitions.row(r)) {
        CHECK(p >= 0.0);
        sum += p;
      }
      CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    bool shares = false;
    for (std::size_t m = 0; m < specs.size(); ++m) {
      if (m == l) continue;
      for (int u : s.inventory) {
        if (std::find(specs[m].inventory.begin(), specs[m].inventory.end(), u) !=
            specs[m].inventory.end()) {
          shares = true;
        }
      }
    }
    CHECK(shares);
  }
  // Shared units differ exactly by the colorings.
  const auto& a = specs[0];
  const auto& b = specs[1];
  for (std::size_t i = 0; i < a.inventory.size(); ++i) {
    const auto it = std::find(b.inventory.begin(), b.inventory.end(), a.inventory[i]);
    if (it == b.inventory.end()) continue;
    const std::size_t j = static_cast<std::size_t>(it - b.inventory.begin());
    const auto ea = a.ExpectedFeatures(inv, i), eb = b.ExpectedFeatures(inv, j);
    for (std::size_t f = 0; f < ea.size(); ++f) {
      CHECK(ea[f] - eb[f] == doctest::Approx(a.coloring(i, f) - b.coloring(j, f)).epsilon(1e-12));
    }
  }
}

TEST_CASE("empty lexicon is a config error") {
  SyntheticConfig c;
  c.words_per_lexicon = 0;
  CHECK_THROWS_AS(generate_default_corpus(c, 1), ConfigError);
}

TEST_CASE("disjoint inventories are separable from mean features") {
  SyntheticConfig config = SmallSynthetic();
  config.num_languages = 2;
  config.global_units = 40;
  config.units_per_language = 20;
  const auto inv = make_inventory(config, 9);
  auto specs = make_language_specs(config, inv, 9);
  // Give the second language the complement of the first inventory.
  std::vector<int> rest;
  for (int u = 0; u < 40; ++u) {
    if (std::find(specs[0].inventory.begin(), specs[0].inventory.end(), u) ==
        specs[0].inventory.end()) {
      rest.push_back(u);
    }
  }
  specs[1].inventory = rest;
  const auto corpus = generate_corpus(specs, inv, config, 9);

  const std::size_t F = config.feature_dim;
  auto mean_of = [&](const Utterance& u) {
    std::vector<double> m(F, 0.0);
    for (std::size_t t = 0; t < u.frames(); ++t) {
      for (std::size_t f = 0; f < F; ++f) m[f] += u.features(t, f) / double(u.frames());
    }
    return m;
  };
  std::map<std::string, std::vector<double>> sum, sq;
  std::map<std::string, double> count;
  for (const auto& u : corpus.grapheme.train) {
    const auto m = mean_of(u);
    auto& s = sum[u.language];
    auto& q = sq[u.language];
    s.resize(F);
    q.resize(F);
    for (std::size_t f = 0; f < F; ++f) {
      s[f] += m[f];
      q[f] += m[f] * m[f];
    }
    count[u.language] += 1;
  }
  std::size_t correct = 0;
  for (const auto& u : corpus.grapheme.test) {
    const auto m = mean_of(u);
    std::string best;
    double best_ll = -1e300;
    for (const auto& [lang, s] : sum) {
      double ll = 0.0;
      for (std::size_t f = 0; f < F; ++f) {
        const double mu = s[f] / count[lang];
        const double var = std::max(sq[lang][f] / count[lang] - mu * mu, 1e-6);
        ll -= 0.5 * (std::log(var) + (m[f] - mu) * (m[f] - mu) / var);
      }
      if (ll > best_ll) {
        best_ll = ll;
        best = lang;
      }
    }
    if (best == u.language) ++correct;
  }
  CHECK(double(correct) / double(corpus.grapheme.test.size()) > 0.9);
}

}  // namespace
}  // namespace lfv
