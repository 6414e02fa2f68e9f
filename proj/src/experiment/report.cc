// experiment/report.cc

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

#include "experiment/report.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "numerics/errors.h"

namespace lfv {

namespace {

constexpr char kReportHeader[] = "condition\tunit_mode\tdata_size\tlanguage\tseed\tTER\tWER";
constexpr char kWerHeader[] = "condition\tdata_size\tlanguage\tseed\tlambda\tWER";
constexpr char kFailed[] = "FAILED";

std::string fixed4(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << v;
  return os.str();
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return out;
}

double parse_real(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError(where + ": invalid number '" + s + "'");
  }
  return v;
}

std::uint64_t parse_seed(const std::string& s, const std::string& where) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw FormatError(where + ": invalid seed '" + s + "'");
  }
  return v;
}

// Calls `row` with the fields of every data line after checking the header.
template <typename F>
void for_each_record(const std::string& text, const std::string& source,
                     const std::string& header, std::size_t columns, F&& row) {
  std::istringstream is(text);
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(line_no);
    if (!seen_header) {
      if (line != header) throw FormatError(where + ": unexpected header");
      seen_header = true;
      continue;
    }
    const auto fields = split_tabs(line);
    if (fields.size() != columns) {
      throw FormatError(where + ": expected " + std::to_string(columns) + " fields, found " +
                        std::to_string(fields.size()));
    }
    row(fields, where);
  }
  if (!seen_header) throw FormatError(source + ": missing header");
}

std::string read_text(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os << text;
  if (!os) throw IoError("write failed: " + path);
}

}  // namespace

double quantize_rate(double percent) {
  return parse_real(fixed4(percent), "rate");
}

std::string format_report_tsv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << kReportHeader << '\n';
  for (const auto& r : rows) {
    os << r.condition << '\t' << r.unit_mode << '\t' << r.data_size << '\t' << r.language
       << '\t' << r.seed << '\t' << (r.failed ? std::string(kFailed) : fixed4(r.ter)) << '\t'
       << (r.failed ? std::string(kFailed) : r.wer ? fixed4(*r.wer) : std::string()) << '\n';
  }
  return os.str();
}

std::vector<ReportRow> parse_report_tsv(const std::string& text, const std::string& source) {
  std::vector<ReportRow> rows;
  for_each_record(text, source, kReportHeader, 7,
                  [&](const std::vector<std::string>& f, const std::string& where) {
                    ReportRow r;
                    r.condition = f[0];
                    r.unit_mode = f[1];
                    r.data_size = f[2];
                    r.language = f[3];
                    r.seed = parse_seed(f[4], where);
                    if (f[5] == kFailed) {
                      r.failed = true;
                    } else {
                      r.ter = parse_real(f[5], where);
                      if (!f[6].empty()) r.wer = parse_real(f[6], where);
                    }
                    rows.push_back(std::move(r));
                  });
  return rows;
}

std::string format_wer_tsv(const std::vector<WerRow>& rows) {
  std::ostringstream os;
  os << kWerHeader << '\n';
  for (const auto& r : rows) {
    os << r.condition << '\t' << r.data_size << '\t' << r.language << '\t' << r.seed << '\t'
       << fixed4(r.lambda) << '\t' << (r.failed ? std::string(kFailed) : fixed4(r.wer)) << '\n';
  }
  return os.str();
}

std::vector<WerRow> parse_wer_tsv(const std::string& text, const std::string& source) {
  std::vector<WerRow> rows;
  for_each_record(text, source, kWerHeader, 6,
                  [&](const std::vector<std::string>& f, const std::string& where) {
                    WerRow r;
                    r.condition = f[0];
                    r.data_size = f[1];
                    r.language = f[2];
                    r.seed = parse_seed(f[3], where);
                    r.lambda = parse_real(f[4], where);
                    if (f[5] == kFailed) {
                      r.failed = true;
                    } else {
                      r.wer = parse_real(f[5], where);
                    }
                    rows.push_back(std::move(r));
                  });
  return rows;
}

ExperimentReport read_report_dir(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path report = fs::path(dir) / "report.tsv";
  ExperimentReport out;
  out.rows = parse_report_tsv(read_text(report.string()), report.string());
  const fs::path wer = fs::path(dir) / "wer.tsv";
  if (fs::exists(wer)) out.wer_rows = parse_wer_tsv(read_text(wer.string()), wer.string());
  return out;
}

void write_report_dir(const std::string& dir, const ExperimentReport& report) {
  namespace fs = std::filesystem;
  write_text((fs::path(dir) / "report.tsv").string(), format_report_tsv(report.rows));
  if (!report.wer_rows.empty()) {
    write_text((fs::path(dir) / "wer.tsv").string(), format_wer_tsv(report.wer_rows));
  }
  write_text((fs::path(dir) / "report.txt").string(), format_report_table(report));
}

double median(std::vector<double> values) {
  if (values.empty()) throw UsageError("median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::map<CellKey, double> median_ter(const std::vector<ReportRow>& rows) {
  std::map<CellKey, std::vector<double>> groups;
  for (const auto& r : rows) {
    if (!r.failed) groups[{r.condition, r.unit_mode, r.data_size, r.language}].push_back(r.ter);
  }
  std::map<CellKey, double> out;
  for (auto& [key, values] : groups) out[key] = median(std::move(values));
  return out;
}

std::map<std::tuple<std::string, std::string, double>, double> median_wer(
    const std::vector<WerRow>& rows) {
  std::map<std::tuple<std::string, std::string, double>, std::vector<double>> groups;
  for (const auto& r : rows) {
    if (!r.failed) groups[{r.condition, r.data_size, r.lambda}].push_back(r.wer);
  }
  std::map<std::tuple<std::string, std::string, double>, double> out;
  for (auto& [key, values] : groups) out[key] = median(std::move(values));
  return out;
}

namespace {

// Keeps first-seen order.
void remember(std::vector<std::string>& list, const std::string& value) {
  if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(value);
}

std::string cell(const std::map<CellKey, double>& medians, const CellKey& key) {
  auto it = medians.find(key);
  return it == medians.end() ? std::string(kFailed) : fixed4(it->second);
}

}  // namespace

std::string format_report_table(const ExperimentReport& report) {
  std::vector<std::string> conditions, modes, sizes, languages;
  std::set<std::uint64_t> seeds;
  for (const auto& r : report.rows) {
    remember(conditions, r.condition);
    remember(modes, r.unit_mode);
    remember(sizes, r.data_size);
    remember(languages, r.language);
    seeds.insert(r.seed);
  }
  // The pooled column goes last.
  if (auto it = std::find(languages.begin(), languages.end(), "ALL"); it != languages.end()) {
    languages.erase(it);
    languages.push_back("ALL");
  }
  const auto medians = median_ter(report.rows);

  std::ostringstream os;
  os << "Median TER (%) over " << seeds.size() << " seed(s)\n";
  for (const auto& mode : modes) {
    for (const auto& size : sizes) {
      os << "\n" << mode << " / " << size << "\n";
      os << std::left << std::setw(12) << "condition";
      for (const auto& lang : languages) os << std::right << std::setw(10) << lang;
      os << '\n';
      for (const auto& cond : conditions) {
        os << std::left << std::setw(12) << cond;
        for (const auto& lang : languages) {
          os << std::right << std::setw(10) << cell(medians, {cond, mode, size, lang});
        }
        os << '\n';
      }
    }
  }
  if (!report.wer_rows.empty()) {
    std::vector<std::string> wer_conditions, wer_sizes;
    std::set<double> lambdas;
    std::string language;
    for (const auto& r : report.wer_rows) {
      remember(wer_conditions, r.condition);
      remember(wer_sizes, r.data_size);
      lambdas.insert(r.lambda);
      language = r.language;
    }
    const auto wer = median_wer(report.wer_rows);
    os << "\nMedian WER (%) on " << language << "\n";
    for (const auto& size : wer_sizes) {
      os << "\n" << size << "\n" << std::left << std::setw(12) << "condition";
      for (double l : lambdas) os << std::right << std::setw(14) << ("lambda=" + fixed4(l).substr(0, 4));
      os << '\n';
      for (const auto& cond : wer_conditions) {
        os << std::left << std::setw(12) << cond;
        for (double l : lambdas) {
          auto it = wer.find({cond, size, l});
          os << std::right << std::setw(14)
             << (it == wer.end() ? std::string(kFailed) : fixed4(it->second));
        }
        os << '\n';
      }
    }
  }
  return os.str();
}

}  // namespace lfv
