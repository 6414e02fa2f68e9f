// experiment/report.h

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

#ifndef LFVCTC_EXPERIMENT_REPORT_H_
#define LFVCTC_EXPERIMENT_REPORT_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace lfv {

// One report.tsv line. Rates are percentages rounded to the printed
// precision, so a re-read report compares equal.
struct ReportRow {
  std::string condition;
  std::string unit_mode;
  std::string data_size;
  std::string language;
  std::uint64_t seed = 0;
  bool failed = false;
  double ter = 0.0;
  std::optional<double> wer;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

// One wer.tsv line: WER of the word-level language at one fusion weight.
struct WerRow {
  std::string condition;
  std::string data_size;
  std::string language;
  std::uint64_t seed = 0;
  double lambda = 0.0;
  bool failed = false;
  double wer = 0.0;

  friend bool operator==(const WerRow&, const WerRow&) = default;
};

struct ExperimentReport {
  std::vector<ReportRow> rows;
  std::vector<WerRow> wer_rows;

  friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

// Percentage with four decimals, as stored and printed.
double quantize_rate(double percent);

std::string format_report_tsv(const std::vector<ReportRow>& rows);
std::vector<ReportRow> parse_report_tsv(const std::string& text,
                                        const std::string& source = "<report>");
std::string format_wer_tsv(const std::vector<WerRow>& rows);
std::vector<WerRow> parse_wer_tsv(const std::string& text, const std::string& source = "<wer>");

// Reads <dir>/report.tsv and, when present, <dir>/wer.tsv.
ExperimentReport read_report_dir(const std::string& dir);
void write_report_dir(const std::string& dir, const ExperimentReport& report);

// Median of the values; the mean of the middle pair for even counts.
// Throws UsageError when empty.
double median(std::vector<double> values);

// (condition, unit_mode, data_size, language) -> median TER over seeds.
// Failed cells are left out; a key with only failed cells is absent.
using CellKey = std::tuple<std::string, std::string, std::string, std::string>;
std::map<CellKey, double> median_ter(const std::vector<ReportRow>& rows);

// (condition, data_size, lambda) -> median WER over seeds.
std::map<std::tuple<std::string, std::string, double>, double> median_wer(
    const std::vector<WerRow>& rows);

// Human-readable tables: one per unit mode and data size with conditions as
// rows and languages as columns, then the WER table when present.
std::string format_report_table(const ExperimentReport& report);

}  // namespace lfv

#endif  // LFVCTC_EXPERIMENT_REPORT_H_
