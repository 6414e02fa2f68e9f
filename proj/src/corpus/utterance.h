// corpus/utterance.h

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

#ifndef LFVCTC_CORPUS_UTTERANCE_H_
#define LFVCTC_CORPUS_UTTERANCE_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "numerics/tensor.h"

namespace lfv {

enum class UnitMode { kGrapheme, kPhone };

const char* unit_mode_name(UnitMode m);
UnitMode parse_unit_mode(const std::string& name);

// Token separating words in both unit modes.
inline constexpr char kWordBoundary[] = "|";
// Reserved symbol for the CTC blank (id 0 in every Vocabulary).
inline constexpr char kBlankSymbol[] = "<b>";

// Feature frames per second (10 ms shift).
inline constexpr double kFrameRate = 100.0;

// Filtering limits.
inline constexpr double kMinDurationSeconds = 1.0;
inline constexpr std::size_t kMaxTranscriptChars = 639;

struct Utterance {
  std::string id;
  std::string language;
  Tensor features;  // [T x F]
  std::vector<std::string> transcript;
  UnitMode unit_mode = UnitMode::kGrapheme;
  double duration_s = 0.0;
  bool noise = false;
  // Where the features live on disk, if they came from / went to a file.
  std::string feature_path;

  std::size_t frames() const { return features.rank() == 2 ? features.rows() : 0; }
};

// Characters of the transcript as a text string: multi-character tokens count
// every character, the word boundary counts as one space, and tokens inside a
// word are not separated.
std::size_t transcript_char_length(const std::vector<std::string>& transcript);

// Drops utterances shorter than 1 s, with transcripts over 639 characters, or
// flagged as noise. Keeps the relative order of the rest.
std::vector<Utterance> filter_corpus(std::vector<Utterance> utts);

// Stable ascending sort by frame count (ties by id), cut into contiguous
// batches of `batch_size`; the last batch may be short. Returns indices into
// `utts`.
std::vector<std::vector<std::size_t>> sort_and_batch(
    std::span<const Utterance> utts, std::size_t batch_size);

// Token inventory with the blank fixed at id 0.
class Vocabulary {
 public:
  Vocabulary();
  explicit Vocabulary(const std::vector<std::string>& symbols_without_blank);

  // Sorted union of all transcript tokens.
  static Vocabulary FromTranscripts(std::span<const Utterance> utts);

  std::size_t size() const { return symbols_.size(); }
  const std::vector<std::string>& symbols() const { return symbols_; }
  const std::string& symbol(int id) const { return symbols_.at(static_cast<std::size_t>(id)); }
  // Throws FormatError for unknown symbols.
  int id(const std::string& symbol) const;
  bool contains(const std::string& symbol) const { return ids_.count(symbol) > 0; }

  std::vector<int> Encode(const std::vector<std::string>& tokens) const;
  std::vector<std::string> Decode(const std::vector<int>& ids) const;

 private:
  std::vector<std::string> symbols_;
  std::map<std::string, int> ids_;
};

// Splits a token stream into words at word-boundary tokens; tokens within a
// word are concatenated. Empty words (leading/trailing/double boundaries) are
// dropped.
std::vector<std::string> tokens_to_words(const std::vector<std::string>& tokens);

std::vector<std::string> split_whitespace(const std::string& s);
std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace lfv

#endif  // LFVCTC_CORPUS_UTTERANCE_H_
