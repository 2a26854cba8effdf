// Copyright 2026 The Bellgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef BELLGATE_REPORT_HPP
#define BELLGATE_REPORT_HPP

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "bellgate/operator_io.hpp"
#include "bellgate/source_ops.hpp"
#include "bellgate/sweep.hpp"

namespace bellgate {

inline nlohmann::ordered_json report_to_json(const InequalityReport& r) {
  return {{"type", "report"}, {"eq", r.eq},           {"lhs", r.lhs},        {"rhs", r.rhs},
          {"margin", r.margin}, {"satisfied", r.satisfied}, {"context", r.context}};
}

inline nlohmann::ordered_json summary_to_json(const SweepSummary& s) {
  nlohmann::ordered_json j{{"type", "sweep"},
                           {"eq", s.tag},
                           {"seed", s.seed},
                           {"samples", s.samples},
                           {"evaluated", s.evaluated},
                           {"skipped", s.skipped},
                           {"violations", s.violations}};
  j["worst_margin"] = s.worst_margin ? nlohmann::ordered_json(*s.worst_margin) : nlohmann::ordered_json(nullptr);
  j["statistics"] = s.statistics;
  j["violation_contexts"] = s.violation_contexts;
  return j;
}

inline nlohmann::ordered_json classification_to_json(const ClassificationReport& c, const SourceOperator& t) {
  nlohmann::ordered_json residuals = nlohmann::ordered_json::object();
  for (const auto& w : c.witnesses) residuals[w.name] = w.residual;
  return {{"type", "classification"},
          {"kind", to_string(c.kind)},
          {"dims", t.op().dims()},
          {"target_hash", operator_hash(t.target().op())},
          {"trace_norm", c.trace_norm},
          {"min_eigenvalue", c.min_eigenvalue},
          {"is_dso", c.is_dso},
          {"has_special_dilation", c.has_special_dilation},
          {"residuals", residuals}};
}

// ---------------------------------------------------------------------------
// Summary table
// ---------------------------------------------------------------------------

struct TableRow {
  std::string eq;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t violations = 0;
  std::optional<double> worst_margin;

  friend bool operator==(const TableRow&, const TableRow&) = default;
};

inline TableRow table_row_from_json(const nlohmann::json& j) {
  try {
    TableRow r;
    r.eq = j.at("eq").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.samples = j.at("samples").get<std::size_t>();
    r.violations = j.at("violations").get<std::size_t>();
    const auto& wm = j.at("worst_margin");
    if (!wm.is_null()) r.worst_margin = wm.get<double>();
    return r;
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("sweep summary: ") + ex.what());
  }
}

/// Reads newline-delimited JSON and keeps the sweep-summary lines.
inline std::vector<TableRow> table_rows_from_ndjson(const std::string& text, const std::string& source) {
  std::vector<TableRow> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw ValidationError(source + ":" + std::to_string(lineno) + ": " + ex.what());
    }
    if (j.value("type", "") == "sweep") rows.push_back(table_row_from_json(j));
  }
  return rows;
}

inline void sort_table(std::vector<TableRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const TableRow& a, const TableRow& b) { return std::tie(a.eq, a.seed) < std::tie(b.eq, b.seed); });
}

inline const char* kTableCsvHeader = "eq,seed,samples,violations,worst_margin";

inline std::string format_table_csv(const std::vector<TableRow>& rows) {
  std::string out = std::string(kTableCsvHeader) + "\n";
  for (const auto& r : rows) {
    out += r.eq + "," + std::to_string(r.seed) + "," + std::to_string(r.samples) + "," + std::to_string(r.violations) +
           "," + (r.worst_margin ? format_double(*r.worst_margin) : std::string()) + "\n";
  }
  return out;
}

inline std::vector<TableRow> parse_table_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kTableCsvHeader) throw ValidationError("table CSV: bad header");
  std::vector<TableRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) f.push_back(cell);
    if (f.size() == 4) f.emplace_back();
    if (f.size() != 5) throw ValidationError("table CSV: expected 5 fields in '" + line + "'");
    try {
      TableRow r{f[0], std::stoull(f[1]), static_cast<std::size_t>(std::stoull(f[2])),
                 static_cast<std::size_t>(std::stoull(f[3])), std::nullopt};
      if (!f[4].empty()) r.worst_margin = std::stod(f[4]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ValidationError("table CSV: malformed number in '" + line + "'");
    }
  }
  return rows;
}

inline std::string format_table_text(const std::vector<TableRow>& rows) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-8s %20s %10s %10s %24s\n", "eq", "seed", "samples", "violations", "worst_margin");
  out += buf;
  for (const auto& r : rows) {
    const std::string wm = r.worst_margin ? format_double(*r.worst_margin) : std::string("-");
    std::snprintf(buf, sizeof buf, "%-8s %20llu %10zu %10zu %24s\n", r.eq.c_str(),
                  static_cast<unsigned long long>(r.seed), r.samples, r.violations, wm.c_str());
    out += buf;
  }
  return out;
}

inline std::string format_table_json(const std::vector<TableRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"eq", r.eq},
                   {"seed", r.seed},
                   {"samples", r.samples},
                   {"violations", r.violations},
                   {"worst_margin", r.worst_margin ? nlohmann::ordered_json(*r.worst_margin) : nlohmann::ordered_json(nullptr)}});
  }
  return arr.dump() + "\n";
}

inline TableRow table_row(const SweepSummary& s) { return {s.tag, s.seed, s.samples, s.violations, s.worst_margin}; }

// ---------------------------------------------------------------------------
// Audit CSV: one row per sweep summary.
// ---------------------------------------------------------------------------

inline std::string format_summaries_csv(const std::vector<SweepSummary>& sums) {
  std::string out = "eq,seed,samples,evaluated,skipped,violations,worst_margin\n";
  for (const auto& s : sums) {
    out += s.tag + "," + std::to_string(s.seed) + "," + std::to_string(s.samples) + "," + std::to_string(s.evaluated) +
           "," + std::to_string(s.skipped) + "," + std::to_string(s.violations) + "," +
           (s.worst_margin ? format_double(*s.worst_margin) : std::string()) + "\n";
  }
  return out;
}

}  // namespace bellgate

#endif  // BELLGATE_REPORT_HPP
