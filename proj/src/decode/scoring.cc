// decode/scoring.cc

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

#include "decode/scoring.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "corpus/utterance.h"
#include "numerics/errors.h"

namespace lfv {

void ScoreReport::Add(const ScoreReport& other) {
  substitutions += other.substitutions;
  insertions += other.insertions;
  deletions += other.deletions;
  reference_length += other.reference_length;
  empty_reference = empty_reference || other.empty_reference;
  rate = double(errors()) / double(std::max<std::size_t>(1, reference_length));
}

ScoreReport edit_distance(const std::vector<std::string>& ref,
                          const std::vector<std::string>& hyp) {
  const std::size_t n = ref.size(), m = hyp.size();
  std::vector<std::size_t> d((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> std::size_t& { return d[i * (m + 1) + j]; };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = i;
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = j;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const std::size_t diag = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      at(i, j) = std::min({diag, at(i - 1, j) + 1, at(i, j - 1) + 1});
    }
  }
  ScoreReport r;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    const std::size_t cur = at(i, j);
    if (i > 0 && j > 0 && ref[i - 1] == hyp[j - 1] && cur == at(i - 1, j - 1)) {
      --i, --j;
    } else if (i > 0 && j > 0 && cur == at(i - 1, j - 1) + 1) {
      ++r.substitutions;
      --i, --j;
    } else if (i > 0 && cur == at(i - 1, j) + 1) {
      ++r.deletions;
      --i;
    } else {
      ++r.insertions;
      --j;
    }
  }
  r.reference_length = n;
  r.empty_reference = n == 0 && m > 0;
  r.rate = double(r.errors()) / double(std::max<std::size_t>(1, n));
  return r;
}

ScoreLevel parse_score_level(const std::string& name) {
  if (name == "token") return ScoreLevel::kToken;
  if (name == "word") return ScoreLevel::kWord;
  throw UsageError("unknown score level '" + name + "' (expected token or word)");
}

std::map<std::string, ScoreReport> score_corpus(
    const std::vector<TranscriptRecord>& refs,
    const std::vector<TranscriptRecord>& hyps, ScoreLevel level,
    const std::function<void(const std::string&)>& warn) {
  std::map<std::string, const TranscriptRecord*> by_id;
  for (const auto& h : hyps) by_id[h.id] = &h;
  auto units = [level](const std::vector<std::string>& tokens) {
    return level == ScoreLevel::kWord ? tokens_to_words(tokens) : tokens;
  };
  std::map<std::string, ScoreReport> out;
  ScoreReport all;
  for (const auto& ref : refs) {
    auto it = by_id.find(ref.id);
    std::vector<std::string> hyp_units;
    if (it == by_id.end()) {
      if (warn) warn("no hypothesis for " + ref.id + "; scored as full deletion");
    } else {
      hyp_units = units(it->second->tokens);
    }
    const ScoreReport r = edit_distance(units(ref.tokens), hyp_units);
    out[ref.language].Add(r);
    all.Add(r);
  }
  if (!refs.empty()) out[kAllLanguages] = all;
  return out;
}

void write_transcripts(const std::string& path, const std::vector<TranscriptRecord>& records) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  for (const auto& r : records) {
    os << r.id << '\t' << r.language << '\t' << join(r.tokens, " ") << '\n';
  }
  if (!os) throw IoError("write failed: " + path);
}

std::vector<TranscriptRecord> read_transcripts(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open transcript file: " + path);
  std::vector<TranscriptRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = tab1 == std::string::npos ? tab1 : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": expected id<TAB>language<TAB>tokens");
    }
    std::string tokens = line.substr(tab2 + 1);
    if (tokens.find('\t') != std::string::npos) {
      // Corpus manifest line: the transcript is the last of seven fields.
      const auto fields = std::count(line.begin(), line.end(), '\t') + 1;
      if (fields != 7) {
        throw FormatError(path + ":" + std::to_string(line_no) + ": expected 3 or 7 fields, found " +
                          std::to_string(fields));
      }
      tokens = line.substr(line.rfind('\t') + 1);
    }
    out.push_back({line.substr(0, tab1), line.substr(tab1 + 1, tab2 - tab1 - 1),
                   split_whitespace(tokens)});
  }
  return out;
}

void write_score_tsv(std::ostream& os, const std::string& condition,
                     const std::map<std::string, ScoreReport>& scores) {
  os << "condition\tlanguage\tS\tI\tD\tN\trate\n";
  auto row = [&](const std::string& lang, const ScoreReport& r) {
    std::ostringstream rate;
    rate << std::fixed << std::setprecision(6) << r.rate;
    os << condition << '\t' << lang << '\t' << r.substitutions << '\t' << r.insertions
       << '\t' << r.deletions << '\t' << r.reference_length << '\t' << rate.str() << '\n';
  };
  for (const auto& [lang, r] : scores) {
    if (lang != kAllLanguages) row(lang, r);
  }
  if (auto it = scores.find(kAllLanguages); it != scores.end()) row(it->first, it->second);
}

}  // namespace lfv
