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

// Monte-Carlo sweeps: evaluate one inequality tag over many random
// observables, coefficient quads or POVMs.
//
// Sample i draws everything from sub_rng(seed, i), so a sweep is a pure
// function of its SweepSpec. Samples alternate the discrete options of a tag
// (interchange flag, Bell side, coefficient constraint, POVM refinement) by
// index parity, so both settings are always exercised.

#ifndef BELLGATE_SWEEP_HPP
#define BELLGATE_SWEEP_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bellgate/inequalities.hpp"
#include "bellgate/povm.hpp"
#include "bellgate/source_ops.hpp"

namespace bellgate {

inline const std::vector<std::string>& known_tags() {
  static const std::vector<std::string> tags{"eq20",   "eq21",   "eq33",  "eq34",   "eq35",
                                             "eq36",   "chsh39", "chsh40", "bell41", "cond42",
                                             "bell43", "restr44", "chsh52", "chsh53", "bell55"};
  return tags;
}

inline bool is_known_tag(const std::string& tag) {
  const auto& t = known_tags();
  return std::find(t.begin(), t.end(), tag) != t.end();
}

/// Tags whose right-hand side is read from a source-operator.
inline bool tag_needs_source(const std::string& tag) {
  static const std::vector<std::string> tags{"eq20", "eq21", "eq33", "eq34", "eq35", "eq36", "cond42", "bell43", "restr44"};
  return std::find(tags.begin(), tags.end(), tag) != tags.end();
}

struct SweepSpec {
  std::string tag;
  BipartiteState state;
  std::optional<SourceOperator> source;
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double tolerance = kDefaultInequalityTolerance;
  /// Adds the fixed singlet-violating observables as one extra sample (2x2 states, CHSH tags).
  bool include_canonical = false;
  /// Keep every per-sample report in the summary.
  bool keep_reports = false;
};

struct SweepSummary {
  std::string tag;
  std::uint64_t seed = 0;
  std::size_t samples = 0;     // samples drawn (plus the canonical one, if requested)
  std::size_t evaluated = 0;   // reports produced
  std::size_t skipped = 0;     // samples where the audited statement was vacuous
  std::size_t violations = 0;
  std::optional<double> worst_margin;
  std::vector<nlohmann::ordered_json> violation_contexts;
  nlohmann::ordered_json statistics = nlohmann::ordered_json::object();
  std::vector<InequalityReport> reports;
};

namespace detail {

struct SweepContext {
  const SweepSpec& spec;
  std::optional<SourceProfile> profile;
  std::size_t d1, d2;
  std::map<std::string, double> stats;

  void bump(const std::string& key, double by = 1.0) { stats[key] += by; }
  void track_max(const std::string& key, double v) {
    auto it = stats.find(key);
    if (it == stats.end() || v > it->second) stats[key] = v;
  }
};

inline ObservableQuad random_quad(Rng& rng, std::size_t d1, std::size_t d2) {
  Observable a1 = random_observable(rng, d1, "A1");
  Observable a2 = random_observable(rng, d1, "A2");
  Observable b1 = random_observable(rng, d2, "B1");
  Observable b2 = random_observable(rng, d2, "B2");
  return {std::move(a1), std::move(a2), std::move(b1), std::move(b2)};
}

inline Observable random_sign_observable(Rng& rng, std::size_t d, std::string label) {
  std::vector<double> diag(d);
  for (double& x : diag) x = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
  return Observable(TensorOperator::diagonal(diag), std::move(label));
}

inline std::size_t outcome_count(std::size_t index) { return 2 + index % 3; }

inline std::vector<InequalityReport> run_sample(SweepContext& ctx, std::size_t index, bool canonical) {
  const SweepSpec& spec = ctx.spec;
  const BipartiteState& rho = spec.state;
  const std::string& tag = spec.tag;
  const double tol = spec.tolerance;
  Rng rng = sub_rng(spec.seed, index);
  const bool odd = index % 2 == 1;
  std::vector<InequalityReport> out;

  if (tag == "eq20") {
    const Observable a = random_observable(rng, ctx.d1, "A");
    const Observable b1 = random_observable(rng, ctx.d2, "B1");
    const Observable b2 = random_observable(rng, ctx.d2, "B2");
    out.push_back(bell_form_bound_right(rho, *ctx.profile, a, b1, b2, odd, tol));
  } else if (tag == "eq21") {
    const Observable a1 = random_observable(rng, ctx.d1, "A1");
    const Observable a2 = random_observable(rng, ctx.d1, "A2");
    const Observable b = random_observable(rng, ctx.d2, "B");
    out.push_back(bell_form_bound_left(rho, *ctx.profile, a1, a2, b, odd, tol));
  } else if (tag == "eq33") {
    const Observable a = random_observable(rng, ctx.d1, "A");
    const Observable b = random_observable(rng, ctx.d2, "B");
    DilationRole role = default_role(ctx.profile->source.kind());
    if (ctx.profile->source.kind() == DilationKind::Both && odd) role = DilationRole::Left;
    out.push_back(single_product_bound(rho, *ctx.profile, a, b, role, tol));
  } else if (tag == "eq34") {
    const Observable a = random_observable(rng, ctx.d1, "A");
    const Observable b = random_observable(rng, ctx.d2, "B");
    out.push_back(bell_class_product_bound(rho, a, b, odd ? DilationRole::Left : DilationRole::Right, tol));
  } else if (tag == "eq35" || tag == "eq36") {
    const ConstraintKind k = tag == "eq35" ? ConstraintKind::First : ConstraintKind::Second;
    const CoefficientQuad g = canonical ? CoefficientQuad::chsh(k) : random_coefficients(rng, k);
    const ObservableQuad w = canonical ? canonical_violation_observables() : random_quad(rng, ctx.d1, ctx.d2);
    InequalityReport r = chsh_form_bound(rho, *ctx.profile, g, w, tol);
    ctx.track_max("max_intermediate_minus_bound", r.context["intermediate_bound"].get<double>() - r.rhs);
    out.push_back(std::move(r));
  } else if (tag == "chsh39") {
    const ObservableQuad w = canonical ? canonical_violation_observables() : random_quad(rng, ctx.d1, ctx.d2);
    out.push_back(chsh_classical(rho, w, tol));
  } else if (tag == "chsh40") {
    const ConstraintKind k = odd ? ConstraintKind::Second : ConstraintKind::First;
    const CoefficientQuad g = canonical ? CoefficientQuad::chsh(k) : random_coefficients(rng, k);
    const ObservableQuad w = canonical ? canonical_violation_observables() : random_quad(rng, ctx.d1, ctx.d2);
    out.push_back(chsh_extended(rho, g, w, tol));
  } else if (tag == "bell41") {
    const BellSide side = odd ? BellSide::Left : BellSide::Right;
    const Observable common = random_observable(rng, side == BellSide::Right ? ctx.d1 : ctx.d2, "X");
    const Observable first = random_observable(rng, ctx.d2, "Y");
    const Observable second = random_observable(rng, ctx.d2, "Z");
    InequalityReport r = bell_perfect_correlation(rho, common, first, second, side, tol);
    const double corr = 1.0 - r.rhs;
    if (std::abs(corr - 1.0) > 1e-3) ctx.bump("not_perfectly_correlated");
    out.push_back(std::move(r));
  } else if (tag == "cond42") {
    // The implied Bell form is audited only where the sufficient condition holds;
    // elsewhere the sample is vacuous.
    const Observable w2 = random_observable(rng, ctx.d2, "W2");
    const Observable w2t = random_observable(rng, ctx.d2, "W2t");
    const ConditionResult c =
        sufficient_condition_check(rho, *ctx.profile, w2, w2t, 4, rng(), kConditionTolerance, tol);
    ctx.bump(std::string("sign_") + to_string(c.sign));
    if (!c.implied.empty()) {
      const auto worst = std::min_element(c.implied.begin(), c.implied.end(),
                                          [](const auto& x, const auto& y) { return x.margin < y.margin; });
      nlohmann::ordered_json cx{{"sign", to_string(c.sign)},
                                {"delta_plus", c.delta_plus},
                                {"delta_minus", c.delta_minus},
                                {"implied", worst->context}};
      out.push_back(make_report("cond42", worst->lhs, worst->rhs, tol, std::move(cx)));
    }
  } else if (tag == "bell43") {
    const Observable w1 = random_observable(rng, ctx.d1, "W1");
    const Observable w2 = random_observable(rng, ctx.d2, "W2");
    const Observable w2t = random_observable(rng, ctx.d2, "W2t");
    const ConditionResult c = sufficient_condition_check(rho, *ctx.profile, w2, w2t);
    if (c.sign == SignResult::Plus || c.sign == SignResult::Both)
      out.push_back(bell_sign_form(rho, w1, w2, w2t, SignResult::Plus, tol));
    if (c.sign == SignResult::Minus || c.sign == SignResult::Both)
      out.push_back(bell_sign_form(rho, w1, w2, w2t, SignResult::Minus, tol));
  } else if (tag == "restr44") {
    // Generic observables almost never meet the restriction, so odd samples draw a
    // random +/-1 diagonal observable, which reaches it on diagonal product terms.
    const Observable w2 = odd ? random_sign_observable(rng, ctx.d2, "W2") : random_observable(rng, ctx.d2, "W2");
    const Observable w2t = random_observable(rng, ctx.d2, "W2t");
    const SignResult restriction = bell_restriction_check(rho, w2);
    if (restriction != SignResult::None) {
      const ConditionResult c = sufficient_condition_check(rho, *ctx.profile, w2, w2t);
      const double delta = restriction == SignResult::Plus ? c.delta_plus : c.delta_minus;
      out.push_back(make_report("restr44", delta, kConditionTolerance, 0.0,
                                {{"restriction", to_string(restriction)}, {"condition", to_string(c.sign)}}));
    }
  } else if (tag == "chsh52" || tag == "chsh53") {
    const std::size_t k = outcome_count(index);
    const DiscretePOVM a1 = random_povm(rng, ctx.d1, k, "a1");
    const DiscretePOVM a2 = random_povm(rng, ctx.d1, k, "a2");
    const DiscretePOVM b1 = random_povm(rng, ctx.d2, k, "b1");
    const DiscretePOVM b2 = random_povm(rng, ctx.d2, k, "b2");
    const ChshMeasurements m = chsh_measurements(a1, a2, b1, b2);
    InequalityReport r = [&] {
      if (tag == "chsh52") return chsh_povm(rho, m, tol);
      const ConstraintKind ck = odd ? ConstraintKind::Second : ConstraintKind::First;
      return extended_chsh_povm(rho, random_coefficients(rng, ck), m, "caller-asserted", tol);
    }();
    ctx.track_max("max_route_discrepancy",
                  std::abs(r.lhs - r.context["lhs_via_induced_observables"].get<double>()));
    out.push_back(std::move(r));
  } else if (tag == "bell55") {
    const std::size_t k = outcome_count(index);
    const DiscretePOVM alice_a = random_povm(rng, ctx.d1, k, "a");
    const DiscretePOVM bob_b1 = random_povm(rng, ctx.d2, k, "b1");
    const DiscretePOVM bob_b2 = random_povm(rng, ctx.d2, k, "b2");
    const DiscretePOVM alice_b1 = odd ? refine_preserving_observable(bob_b1, rng, "b1-refined") : bob_b1;
    if (odd) ctx.bump("refined_b1");
    out.push_back(bell_povm(rho, alice_a, alice_b1, bob_b1, bob_b2, tol));
  } else {
    throw ValidationError("unknown inequality tag '" + tag + "'");
  }
  for (auto& r : out) r.context["sample"] = canonical ? nlohmann::ordered_json("canonical") : nlohmann::ordered_json(index);
  return out;
}

}  // namespace detail

inline SweepSummary monte_carlo_sweep(const SweepSpec& spec) {
  if (!is_known_tag(spec.tag)) throw ValidationError("unknown inequality tag '" + spec.tag + "'");
  if (spec.samples < 1) throw ValidationError("sweep: samples must be >= 1");

  detail::SweepContext ctx{spec, std::nullopt, spec.state.dim1(), spec.state.dim2(), {}};
  if (tag_needs_source(spec.tag)) {
    if (!spec.source) throw ValidationError("sweep '" + spec.tag + "' requires a source-operator");
    ctx.profile = profile_source(*spec.source);
    const bool needs_dso = spec.tag == "cond42" || spec.tag == "bell43" || spec.tag == "restr44" || spec.tag == "eq34";
    if (needs_dso && !ctx.profile->is_dso()) {
      throw ValidationError("sweep '" + spec.tag + "' requires a density source-operator");
    }
    if (spec.tag == "eq34" && spec.source->kind() != DilationKind::Both) {
      throw ValidationError("sweep 'eq34' requires a special-dilation (BOTH) source-operator");
    }
  }
  const bool canonical_applies = spec.include_canonical && (spec.tag == "chsh39" || spec.tag == "chsh40" ||
                                                            spec.tag == "eq35" || spec.tag == "eq36");
  if (canonical_applies && (ctx.d1 != 2 || ctx.d2 != 2)) {
    throw ValidationError("canonical-violation observables need a 2x2 state");
  }

  SweepSummary sum;
  sum.tag = spec.tag;
  sum.seed = spec.seed;
  const std::size_t total = spec.samples + (canonical_applies ? 1 : 0);
  sum.samples = total;
  for (std::size_t i = 0; i < total; ++i) {
    const bool canonical = canonical_applies && i == spec.samples;
    std::vector<InequalityReport> reports = detail::run_sample(ctx, i, canonical);
    if (reports.empty()) ++sum.skipped;
    for (auto& r : reports) {
      ++sum.evaluated;
      if (!sum.worst_margin || r.margin < *sum.worst_margin) sum.worst_margin = r.margin;
      if (!r.satisfied) {
        ++sum.violations;
        nlohmann::ordered_json v = r.context;
        v["lhs"] = r.lhs;
        v["rhs"] = r.rhs;
        v["margin"] = r.margin;
        sum.violation_contexts.push_back(std::move(v));
      }
      if (spec.keep_reports) sum.reports.push_back(std::move(r));
    }
  }
  for (const auto& [k, v] : ctx.stats) sum.statistics[k] = v;
  if (spec.tag == "bell41") {
    const double n = ctx.stats.count("not_perfectly_correlated") ? ctx.stats["not_perfectly_correlated"] : 0.0;
    sum.statistics["not_perfectly_correlated_fraction"] = n / static_cast<double>(sum.evaluated);
  }
  return sum;
}

}  // namespace bellgate

#endif  // BELLGATE_SWEEP_HPP
