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

// Command-line front end. run_cli() is the whole program minus process
// plumbing so tests can drive it with in-memory streams.
//
// Exit status: 0 all satisfied, 1 configuration or validation error,
// 2 at least one violation.

#ifndef BELLGATE_CLI_HPP
#define BELLGATE_CLI_HPP

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include "bellgate/report.hpp"

namespace bellgate {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

enum class Command { Audit, Classify, Table };
enum class OutputFormat { Json, Csv, Text };

struct RunConfig {
  Command command = Command::Audit;
  std::string state_spec;
  std::string dso_spec = "auto";
  std::vector<std::string> tags;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  std::string out_path;
  OutputFormat format = OutputFormat::Json;
  bool canonical_observables = false;
  bool emit_samples = false;
  std::vector<std::string> inputs;  // table files

  void validate() const {
    if (samples < 1) throw ValidationError("--samples: must be >= 1");
    for (const auto& t : tags) {
      if (!is_known_tag(t)) throw ValidationError("--eq: unknown inequality tag '" + t + "'");
    }
  }
};

/// Tolerance for inequality audits; BELLGATE_TOL overrides the default.
inline double inequality_tolerance_from_env() {
  const char* v = std::getenv("BELLGATE_TOL");
  if (v == nullptr || *v == '\0') return kDefaultInequalityTolerance;
  char* end = nullptr;
  const double x = std::strtod(v, &end);
  if (end == v || *end != '\0' || !(x >= 0.0)) {
    throw ValidationError(std::string("BELLGATE_TOL: not a non-negative number: '") + v + "'");
  }
  return x;
}

// ---------------------------------------------------------------------------
// Spec resolution
// ---------------------------------------------------------------------------

struct ResolvedState {
  BipartiteState state;
  std::string family;  // werner, rho1, rho2, singlet, separable, file
  std::size_t param = 0;
  std::optional<SeparableRepresentation> separable;
};

namespace detail {

inline bool split_named(const std::string& spec, std::string& name, std::size_t& param) {
  const auto colon = spec.find(':');
  name = spec.substr(0, colon);
  if (name != "werner" && name != "rho1" && name != "rho2") return false;
  if (colon == std::string::npos) throw ValidationError("'" + spec + "': expected " + name + ":<dim>");
  const std::string num = spec.substr(colon + 1);
  if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos) {
    throw ValidationError("'" + spec + "': dimension must be a non-negative integer");
  }
  param = static_cast<std::size_t>(std::stoull(num));
  return true;
}

// Separable file: {"separable":[{"weight":w,"rho1":{operator},"rho2":{operator}}, ...]}
inline SeparableRepresentation separable_from_json(const nlohmann::json& j) {
  SeparableRepresentation rep;
  try {
    for (const auto& term : j.at("separable")) {
      rep.terms.push_back({term.at("weight").get<double>(), operator_from_json(term.at("rho1")),
                           operator_from_json(term.at("rho2"))});
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("separable JSON: ") + ex.what());
  }
  rep.validate();
  return rep;
}

}  // namespace detail

inline ResolvedState resolve_state(const std::string& spec) {
  if (spec.empty()) throw ValidationError("--state: missing");
  if (spec == "singlet") return {singlet_state(), "singlet", 2, std::nullopt};
  std::string name;
  std::size_t p = 0;
  if (detail::split_named(spec, name, p)) {
    if (name == "werner") return {werner_state(p), name, p, std::nullopt};
    if (name == "rho1") return {example_rho1(p), name, p, std::nullopt};
    return {example_rho2(p), name, p, std::nullopt};
  }
  if (!std::filesystem::exists(spec)) throw ValidationError("--state: '" + spec + "' is neither a named state nor a file");
  const nlohmann::json j = read_json_file(spec);
  if (j.is_object() && j.contains("separable")) {
    SeparableRepresentation rep = detail::separable_from_json(j);
    BipartiteState s = separable_state(rep);
    return {std::move(s), "separable", 0, std::move(rep)};
  }
  return {BipartiteState(operator_from_json(j)), "file", 0, std::nullopt};
}

/// Named dilations (werner:d, rho1:dim, rho2:dim) or a source-operator file.
inline SourceOperator resolve_named_or_file_dso(const std::string& spec) {
  std::string name;
  std::size_t p = 0;
  if (detail::split_named(spec, name, p)) {
    if (name == "werner") return werner_dso(p);
    if (name == "rho1") return dso_rho1(p);
    return dso_rho2(p);
  }
  if (!std::filesystem::exists(spec)) throw ValidationError("--dso: '" + spec + "' is neither a named dilation nor a file");
  return source_operator_from_json(read_json_file(spec));
}

/// `auto` maps named states to their own constructors and separable files to the
/// T122 construction; any other state needs an explicit dilation.
inline SourceOperator resolve_dso(const std::string& spec, const ResolvedState& state) {
  if (spec != "auto") return resolve_named_or_file_dso(spec);
  if (state.family == "werner") return werner_dso(state.param);
  if (state.family == "rho1") return dso_rho1(state.param);
  if (state.family == "rho2") return dso_rho2(state.param);
  if (state.family == "separable") return separable_dso(*state.separable, DilationKind::T122);
  throw ValidationError("--dso auto: no known dilation for state '" + state.family + "'; pass a dilation file");
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

namespace detail {

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw ValidationError("--out: cannot write '" + path + "'");
  f << text;
  if (!f) throw ValidationError("--out: write failed for '" + path + "'");
}

}  // namespace detail

inline int cmd_audit(const RunConfig& cfg, std::ostream& out) {
  cfg.validate();
  if (cfg.tags.empty()) throw ValidationError("--eq: at least one inequality tag is required");
  const double tol = inequality_tolerance_from_env();
  const ResolvedState st = resolve_state(cfg.state_spec);

  std::optional<SourceOperator> dso;
  const bool need = std::any_of(cfg.tags.begin(), cfg.tags.end(), tag_needs_source);
  if (need || cfg.dso_spec != "auto") dso = resolve_dso(cfg.dso_spec, st);

  std::vector<SweepSummary> sums;
  std::string ndjson;
  for (const auto& tag : cfg.tags) {
    SweepSpec spec{tag, st.state, dso, cfg.samples, cfg.seed, tol, cfg.canonical_observables, cfg.emit_samples};
    SweepSummary s = monte_carlo_sweep(spec);
    for (const auto& r : s.reports) ndjson += report_to_json(r).dump() + "\n";
    ndjson += summary_to_json(s).dump() + "\n";
    sums.push_back(std::move(s));
  }

  const std::string body = cfg.format == OutputFormat::Csv ? format_summaries_csv(sums) : ndjson;
  detail::write_output(cfg.out_path, body, out);
  if (!cfg.out_path.empty()) {
    std::vector<TableRow> rows;
    for (const auto& s : sums) rows.push_back(table_row(s));
    out << format_table_text(rows);
  }
  const bool violated = std::any_of(sums.begin(), sums.end(), [](const auto& s) { return s.violations > 0; });
  return violated ? kExitViolation : kExitOk;
}

inline int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.dso_spec.empty() || cfg.dso_spec == "auto") throw ValidationError("--dso: classify needs a dilation spec");
  const SourceOperator t = resolve_named_or_file_dso(cfg.dso_spec);
  const ClassificationReport c = verify_source_operator(t);
  detail::write_output(cfg.out_path, classification_to_json(c, t).dump() + "\n", out);
  return kExitOk;
}

inline int cmd_table(const RunConfig& cfg, std::ostream& out) {
  std::vector<TableRow> rows;
  for (const auto& path : cfg.inputs) {
    const auto more = table_rows_from_ndjson(read_text_file(path), path);
    rows.insert(rows.end(), more.begin(), more.end());
  }
  sort_table(rows);
  std::string text;
  switch (cfg.format) {
    case OutputFormat::Csv: text = format_table_csv(rows); break;
    case OutputFormat::Json: text = format_table_json(rows); break;
    case OutputFormat::Text: text = format_table_text(rows); break;
  }
  detail::write_output(cfg.out_path, text, out);
  return kExitOk;
}

inline int run_config(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::Audit: return cmd_audit(cfg, out);
    case Command::Classify: return cmd_classify(cfg, out);
    case Command::Table: return cmd_table(cfg, out);
  }
  return kExitError;
}

/// Parses `args` (without the program name) and runs the selected subcommand.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bellgate: audit Bell-type inequalities for states with source-operator dilations", "bellgate"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string format = "json";
  std::string table_format = "text";
  std::string observables;

  auto* audit = app.add_subcommand("audit", "Run Monte-Carlo inequality sweeps on a state");
  audit->add_option("--state", cfg.state_spec, "werner:d | rho1:dim | rho2:dim | singlet | FILE")->required();
  audit->add_option("--dso", cfg.dso_spec, "auto | werner:d | rho1:dim | rho2:dim | FILE")->capture_default_str();
  audit->add_option("--eq", cfg.tags, "Inequality tag (repeatable)")->required();
  audit->add_option("--samples", cfg.samples, "Samples per tag")->capture_default_str();
  audit->add_option("--seed", cfg.seed, "Master seed")->capture_default_str();
  audit->add_option("--out", cfg.out_path, "Report file (default: stdout)");
  audit->add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}));
  audit->add_option("--observables", observables, "canonical-violation: add the fixed CHSH-optimal observables")
      ->check(CLI::IsMember({"canonical-violation"}));
  audit->add_flag("--emit-samples", cfg.emit_samples, "Also write every per-sample report");

  auto* classify = app.add_subcommand("classify", "Classify a source-operator");
  classify->add_option("--dso", cfg.dso_spec, "werner:d | rho1:dim | rho2:dim | FILE")->required();
  classify->add_option("--out", cfg.out_path, "Report file (default: stdout)");

  auto* table = app.add_subcommand("table", "Summarize audit report files");
  table->add_option("files", cfg.inputs, "Audit report files");
  table->add_option("--format", table_format, "text | csv | json")->check(CLI::IsMember({"text", "csv", "json"}));
  table->add_option("--out", cfg.out_path, "Output file (default: stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitError;
  }

  if (audit->parsed()) {
    cfg.command = Command::Audit;
    cfg.format = format == "csv" ? OutputFormat::Csv : OutputFormat::Json;
    cfg.canonical_observables = observables == "canonical-violation";
  } else if (classify->parsed()) {
    cfg.command = Command::Classify;
  } else {
    cfg.command = Command::Table;
    cfg.format = table_format == "csv" ? OutputFormat::Csv
                 : table_format == "json" ? OutputFormat::Json
                                          : OutputFormat::Text;
  }

  try {
    return run_config(cfg, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace bellgate

#endif  // BELLGATE_CLI_HPP
