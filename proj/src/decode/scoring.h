// decode/scoring.h

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

#ifndef LFVCTC_DECODE_SCORING_H_
#define LFVCTC_DECODE_SCORING_H_

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace lfv {

struct ScoreReport {
  std::size_t substitutions = 0;
  std::size_t insertions = 0;
  std::size_t deletions = 0;
  std::size_t reference_length = 0;
  double rate = 0.0;  // errors / max(1, reference_length)
  // Set when some reference was empty but its hypothesis was not.
  bool empty_reference = false;

  std::size_t errors() const { return substitutions + insertions + deletions; }
  void Add(const ScoreReport& other);
};

// Unit-cost Levenshtein alignment. Counts come from one optimal alignment,
// backtraced preferring match, then substitution, deletion, insertion.
ScoreReport edit_distance(const std::vector<std::string>& ref,
                          const std::vector<std::string>& hyp);

enum class ScoreLevel { kToken, kWord };
ScoreLevel parse_score_level(const std::string& name);

struct TranscriptRecord {
  std::string id;
  std::string language;
  std::vector<std::string> tokens;
};

// Key used for the pooled row over all languages.
inline constexpr char kAllLanguages[] = "ALL";

// Per-language totals plus the pooled "ALL" row. Hypotheses are matched to
// references by id; a missing hypothesis scores as all deletions and is
// reported through `warn`.
std::map<std::string, ScoreReport> score_corpus(
    const std::vector<TranscriptRecord>& refs,
    const std::vector<TranscriptRecord>& hyps, ScoreLevel level,
    const std::function<void(const std::string&)>& warn = {});

// Tab-separated id, language, space-separated tokens. Reading also accepts
// corpus manifest lines and takes their transcript column.
void write_transcripts(const std::string& path, const std::vector<TranscriptRecord>& records);
std::vector<TranscriptRecord> read_transcripts(const std::string& path);

// Tab-separated condition, language, S, I, D, N, rate with a header line.
void write_score_tsv(std::ostream& os, const std::string& condition,
                     const std::map<std::string, ScoreReport>& scores);

}  // namespace lfv

#endif  // LFVCTC_DECODE_SCORING_H_
