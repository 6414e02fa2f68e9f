// corpus/utterance.cc

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

#include "corpus/utterance.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "numerics/errors.h"

namespace lfv {

const char* unit_mode_name(UnitMode m) {
  return m == UnitMode::kGrapheme ? "grapheme" : "phone";
}

UnitMode parse_unit_mode(const std::string& name) {
  if (name == "grapheme") return UnitMode::kGrapheme;
  if (name == "phone") return UnitMode::kPhone;
  throw ConfigError("unknown unit mode '" + name + "' (expected grapheme or phone)");
}

std::size_t transcript_char_length(const std::vector<std::string>& transcript) {
  std::size_t n = 0;
  for (const auto& tok : transcript) n += tok == kWordBoundary ? 1 : tok.size();
  return n;
}

std::vector<Utterance> filter_corpus(std::vector<Utterance> utts) {
  std::vector<Utterance> kept;
  kept.reserve(utts.size());
  for (auto& u : utts) {
    if (u.duration_s < kMinDurationSeconds) continue;
    if (transcript_char_length(u.transcript) > kMaxTranscriptChars) continue;
    if (u.noise) continue;
    kept.push_back(std::move(u));
  }
  return kept;
}

std::vector<std::vector<std::size_t>> sort_and_batch(
    std::span<const Utterance> utts, std::size_t batch_size) {
  if (batch_size < 1) throw UsageError("batch size must be >= 1");
  std::vector<std::size_t> order(utts.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (utts[a].frames() != utts[b].frames()) return utts[a].frames() < utts[b].frames();
    return utts[a].id < utts[b].id;
  });
  std::vector<std::vector<std::size_t>> batches;
  for (std::size_t i = 0; i < order.size(); i += batch_size) {
    const std::size_t end = std::min(order.size(), i + batch_size);
    batches.emplace_back(order.begin() + i, order.begin() + end);
  }
  return batches;
}

Vocabulary::Vocabulary() : symbols_{kBlankSymbol} { ids_[kBlankSymbol] = 0; }

Vocabulary::Vocabulary(const std::vector<std::string>& symbols_without_blank)
    : Vocabulary() {
  for (const auto& s : symbols_without_blank) {
    if (s == kBlankSymbol) throw ConfigError("vocabulary may not redefine the blank");
    if (ids_.count(s)) throw ConfigError("duplicate vocabulary symbol " + s);
    ids_[s] = static_cast<int>(symbols_.size());
    symbols_.push_back(s);
  }
}

Vocabulary Vocabulary::FromTranscripts(std::span<const Utterance> utts) {
  std::set<std::string> all;
  for (const auto& u : utts) all.insert(u.transcript.begin(), u.transcript.end());
  return Vocabulary(std::vector<std::string>(all.begin(), all.end()));
}

int Vocabulary::id(const std::string& symbol) const {
  auto it = ids_.find(symbol);
  if (it == ids_.end()) throw FormatError("unknown token '" + symbol + "'");
  return it->second;
}

std::vector<int> Vocabulary::Encode(const std::vector<std::string>& tokens) const {
  std::vector<int> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back(id(t));
  return out;
}

std::vector<std::string> Vocabulary::Decode(const std::vector<int>& ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(symbol(i));
  return out;
}

std::vector<std::string> tokens_to_words(const std::vector<std::string>& tokens) {
  std::vector<std::string> words;
  std::string current;
  for (const auto& t : tokens) {
    if (t == kWordBoundary) {
      if (!current.empty()) words.push_back(std::move(current));
      current.clear();
    } else {
      current += t;
    }
  }
  if (!current.empty()) words.push_back(std::move(current));
  return words;
}

std::vector<std::string> split_whitespace(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace lfv
