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

// Auditors for Bell-form and CHSH-form inequalities on bipartite states.
//
// Every auditor evaluates the left-hand side exactly from the state,
// evaluates the right-hand side (from the state, or from a source-operator
// profile), and returns an InequalityReport with margin = rhs - lhs.

#ifndef BELLGATE_INEQUALITIES_HPP
#define BELLGATE_INEQUALITIES_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bellgate/random.hpp"
#include "bellgate/source_ops.hpp"
#include "bellgate/states.hpp"
#include "bellgate/tensor_core.hpp"
#include <nlohmann/json.hpp>

namespace bellgate {

/// Default tolerance below which a negative margin counts as roundoff.
inline constexpr double kDefaultInequalityTolerance = 1e-8;
/// Tolerance for the sign tests of the sufficient condition and the Bell restriction.
inline constexpr double kConditionTolerance = 1e-8;

/// Self-adjoint single-factor operator with operator norm at most 1.
class Observable {
 public:
  explicit Observable(TensorOperator op, std::string label = {}) : op_(std::move(op)), label_(std::move(label)) {
    if (op_.factor_count() != 1) {
      throw ValidationError("Observable: expected a single factor, got dims " + dims_string(op_.dims()));
    }
    require_hermitian(op_, "Observable");
    const double norm = operator_norm(op_);
    if (norm > 1.0 + 1e-9) {
      throw ValidationError("Observable: operator norm " + std::to_string(norm) + " exceeds 1");
    }
  }

  [[nodiscard]] const TensorOperator& op() const noexcept { return op_; }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }
  [[nodiscard]] std::size_t dim() const noexcept { return op_.side(); }

 private:
  TensorOperator op_;
  std::string label_;
};

inline Observable identity_observable(std::size_t d) { return Observable(TensorOperator::identity({d}), "I"); }

inline Observable pauli_z() { return Observable(TensorOperator::diagonal({1.0, -1.0}), "sz"); }

inline Observable pauli_x() {
  return Observable(TensorOperator(Dims{2}, {0.0, 1.0, 1.0, 0.0}), "sx");
}

enum class ConstraintKind {
  First,   // g11 g12 = -g21 g22, pairs with RIGHT dilations
  Second,  // g11 g21 = -g12 g22, pairs with LEFT dilations
};

inline const char* to_string(ConstraintKind k) { return k == ConstraintKind::First ? "FIRST" : "SECOND"; }

struct CoefficientQuad {
  double g11, g12, g21, g22;
  ConstraintKind constraint;

  [[nodiscard]] double constraint_residual() const {
    return constraint == ConstraintKind::First ? std::abs(g11 * g12 + g21 * g22) : std::abs(g11 * g21 + g12 * g22);
  }

  void validate() const {
    for (double g : {g11, g12, g21, g22}) {
      if (!(std::abs(g) <= 1.0)) throw ValidationError("CoefficientQuad: |gamma| must be <= 1");
    }
    if (constraint_residual() > 1e-12) {
      throw ValidationError(std::string("CoefficientQuad: ") + to_string(constraint) + " constraint violated by " +
                            std::to_string(constraint_residual()));
    }
  }

  /// (1, 1, 1, -1): satisfies both constraints.
  static CoefficientQuad chsh(ConstraintKind k = ConstraintKind::First) { return {1.0, 1.0, 1.0, -1.0, k}; }
};

struct InequalityReport {
  std::string eq;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool satisfied = true;
  nlohmann::ordered_json context = nlohmann::ordered_json::object();
};

inline InequalityReport make_report(std::string eq, double lhs, double rhs, double tolerance,
                                    nlohmann::ordered_json context = nlohmann::ordered_json::object()) {
  InequalityReport r;
  r.eq = std::move(eq);
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.satisfied = r.margin >= -tolerance;
  r.context = std::move(context);
  return r;
}

namespace detail {

inline void require_observable_dims(const BipartiteState& rho, const Observable& w1, const Observable& w2) {
  if (w1.dim() != rho.dim1() || w2.dim() != rho.dim2()) {
    throw ValidationError("observable dims (" + std::to_string(w1.dim()) + ", " + std::to_string(w2.dim()) +
                          ") do not match state dims " + dims_string(rho.op().dims()));
  }
}

inline double real_part_checked(Complex z, const char* what) {
  if (std::abs(z.imag()) > 1e-10) {
    throw ValidationError(std::string(what) + ": imaginary residual " + std::to_string(z.imag()));
  }
  return z.real();
}

inline std::string label_of(const Observable& w) { return w.label().empty() ? std::string("W") : w.label(); }

}  // namespace detail

/// Re tr[rho (w1 (x) w2)].
inline double product_average(const BipartiteState& rho, const Observable& w1, const Observable& w2) {
  detail::require_observable_dims(rho, w1, w2);
  return detail::real_part_checked(expectation_of_product(rho.op(), w1.op(), w2.op()), "product_average");
}

/// Re tr[sigma (a (x) b)] for a density operator on a doubled factor.
inline double pair_average(const TensorOperator& sigma, const Observable& a, const Observable& b) {
  if (sigma.factor_count() != 2 || sigma.dims()[0] != a.dim() || sigma.dims()[1] != b.dim()) {
    throw ValidationError("pair_average: dims mismatch with " + dims_string(sigma.dims()));
  }
  return detail::real_part_checked(expectation_of_product(sigma, a.op(), b.op()), "pair_average");
}

namespace detail {

inline void require_dilates(const SourceProfile& p, const BipartiteState& rho, DilationRole role, const char* what) {
  if (!supports_role(p.source.kind(), role)) {
    throw ValidationError(std::string(what) + ": source-operator kind " + to_string(p.source.kind()) +
                          " cannot serve as a " + (role == DilationRole::Right ? "T122" : "T112") + " dilation");
  }
  const double r = max_abs_diff(p.source.target().op(), rho.op());
  if (r > tol::kDilation) {
    throw ValidationError(std::string(what) + ": source-operator does not dilate the state (residual " +
                          std::to_string(r) + ")");
  }
}

}  // namespace detail

/// |<a b1> - <a b2>| <= ||T||_1 (1 - tr[sigma_T (b1 (x) b2)]), T of RIGHT role.
/// `interchange` evaluates tr[sigma_T (b2 (x) b1)] instead.
inline InequalityReport bell_form_bound_right(const BipartiteState& rho, const SourceProfile& t, const Observable& w1a,
                                              const Observable& w2b1, const Observable& w2b2, bool interchange = false,
                                              double tolerance = kDefaultInequalityTolerance) {
  detail::require_dilates(t, rho, DilationRole::Right, "bell_form_bound_right");
  const double lhs = std::abs(product_average(rho, w1a, w2b1) - product_average(rho, w1a, w2b2));
  const TensorOperator& sigma = t.sigma(DilationRole::Right);
  const double corr = interchange ? pair_average(sigma, w2b2, w2b1) : pair_average(sigma, w2b1, w2b2);
  const double rhs = t.trace_norm * (1.0 - corr);
  nlohmann::ordered_json ctx{{"source_kind", to_string(t.source.kind())},
                             {"trace_norm", t.trace_norm},
                             {"interchange", interchange},
                             {"observables", {detail::label_of(w1a), detail::label_of(w2b1), detail::label_of(w2b2)}}};
  return make_report("eq20", lhs, rhs, tolerance, std::move(ctx));
}

inline InequalityReport bell_form_bound_right(const BipartiteState& rho, const SourceOperator& t, const Observable& w1a,
                                              const Observable& w2b1, const Observable& w2b2, bool interchange = false,
                                              double tolerance = kDefaultInequalityTolerance) {
  return bell_form_bound_right(rho, profile_source(t), w1a, w2b1, w2b2, interchange, tolerance);
}

/// |<a1 b> - <a2 b>| <= ||T||_1 (1 - tr[sigma_T (a1 (x) a2)]), T of LEFT role.
inline InequalityReport bell_form_bound_left(const BipartiteState& rho, const SourceProfile& t, const Observable& w1a1,
                                             const Observable& w1a2, const Observable& w2b, bool interchange = false,
                                             double tolerance = kDefaultInequalityTolerance) {
  detail::require_dilates(t, rho, DilationRole::Left, "bell_form_bound_left");
  const double lhs = std::abs(product_average(rho, w1a1, w2b) - product_average(rho, w1a2, w2b));
  const TensorOperator& sigma = t.sigma(DilationRole::Left);
  const double corr = interchange ? pair_average(sigma, w1a2, w1a1) : pair_average(sigma, w1a1, w1a2);
  const double rhs = t.trace_norm * (1.0 - corr);
  nlohmann::ordered_json ctx{{"source_kind", to_string(t.source.kind())},
                             {"trace_norm", t.trace_norm},
                             {"interchange", interchange},
                             {"observables", {detail::label_of(w1a1), detail::label_of(w1a2), detail::label_of(w2b)}}};
  return make_report("eq21", lhs, rhs, tolerance, std::move(ctx));
}

inline InequalityReport bell_form_bound_left(const BipartiteState& rho, const SourceOperator& t, const Observable& w1a1,
                                             const Observable& w1a2, const Observable& w2b, bool interchange = false,
                                             double tolerance = kDefaultInequalityTolerance) {
  return bell_form_bound_left(rho, profile_source(t), w1a1, w1a2, w2b, interchange, tolerance);
}

/// |<w1 w2>| <= 1/2 ||T||_1 (1 + tr[sigma_T (w (x) w)]), w = w2 for RIGHT role, w1 for LEFT.
inline InequalityReport single_product_bound(const BipartiteState& rho, const SourceProfile& t, const Observable& w1,
                                             const Observable& w2, DilationRole role,
                                             double tolerance = kDefaultInequalityTolerance) {
  detail::require_dilates(t, rho, role, "single_product_bound");
  const double lhs = std::abs(product_average(rho, w1, w2));
  const Observable& w = role == DilationRole::Right ? w2 : w1;
  const double rhs = 0.5 * t.trace_norm * (1.0 + pair_average(t.sigma(role), w, w));
  nlohmann::ordered_json ctx{{"source_kind", to_string(t.source.kind())},
                             {"role", role == DilationRole::Right ? "RIGHT" : "LEFT"},
                             {"trace_norm", t.trace_norm},
                             {"observables", {detail::label_of(w1), detail::label_of(w2)}}};
  return make_report("eq33", lhs, rhs, tolerance, std::move(ctx));
}

inline InequalityReport single_product_bound(const BipartiteState& rho, const SourceProfile& t, const Observable& w1,
                                             const Observable& w2, double tolerance = kDefaultInequalityTolerance) {
  return single_product_bound(rho, t, w1, w2, default_role(t.source.kind()), tolerance);
}

/// Bell-class specialization: |<w1 w2>| <= 1/2 (1 + tr[rho (w (x) w)]).
inline InequalityReport bell_class_product_bound(const BipartiteState& rho, const Observable& w1, const Observable& w2,
                                                 DilationRole role = DilationRole::Right,
                                                 double tolerance = kDefaultInequalityTolerance) {
  const double lhs = std::abs(product_average(rho, w1, w2));
  const Observable& w = role == DilationRole::Right ? w2 : w1;
  const double rhs = 0.5 * (1.0 + product_average(rho, w, w));
  nlohmann::ordered_json ctx{{"role", role == DilationRole::Right ? "RIGHT" : "LEFT"},
                             {"observables", {detail::label_of(w1), detail::label_of(w2)}}};
  return make_report("eq34", lhs, rhs, tolerance, std::move(ctx));
}

struct ObservableQuad {
  Observable a1, a2, b1, b2;
};

namespace detail {

inline double weighted_chsh_sum(const BipartiteState& rho, const CoefficientQuad& g, const ObservableQuad& w) {
  return g.g11 * product_average(rho, w.a1, w.b1) + g.g12 * product_average(rho, w.a1, w.b2) +
         g.g21 * product_average(rho, w.a2, w.b1) + g.g22 * product_average(rho, w.a2, w.b2);
}

inline nlohmann::ordered_json gamma_json(const CoefficientQuad& g) {
  return {{"g11", g.g11}, {"g12", g.g12}, {"g21", g.g21}, {"g22", g.g22}, {"constraint", to_string(g.constraint)}};
}

inline nlohmann::ordered_json quad_labels(const ObservableQuad& w) {
  return {label_of(w.a1), label_of(w.a2), label_of(w.b1), label_of(w.b2)};
}

}  // namespace detail

/// |sum g_nm <a_n b_m>| <= 2 ||T||_1. FIRST constraint uses a RIGHT dilation, SECOND a LEFT one.
/// The context carries the intermediate bound built from sigma_T as "intermediate_bound".
inline InequalityReport chsh_form_bound(const BipartiteState& rho, const SourceProfile& t, const CoefficientQuad& g,
                                        const ObservableQuad& w, double tolerance = kDefaultInequalityTolerance) {
  g.validate();
  const bool first = g.constraint == ConstraintKind::First;
  const DilationRole role = first ? DilationRole::Right : DilationRole::Left;
  detail::require_dilates(t, rho, role, "chsh_form_bound");
  const double lhs = std::abs(detail::weighted_chsh_sum(rho, g, w));
  const double rhs = 2.0 * t.trace_norm;
  double intermediate = 0.0;
  if (first) {
    intermediate = t.trace_norm * (2.0 + (g.g11 * g.g12 + g.g21 * g.g22) * pair_average(t.sigma(role), w.b1, w.b2));
  } else {
    intermediate = t.trace_norm * (2.0 + (g.g11 * g.g21 + g.g12 * g.g22) * pair_average(t.sigma(role), w.a1, w.a2));
  }
  nlohmann::ordered_json ctx{{"source_kind", to_string(t.source.kind())},
                             {"trace_norm", t.trace_norm},
                             {"gamma", detail::gamma_json(g)},
                             {"intermediate_eq", first ? "eq37" : "eq38"},
                             {"intermediate_bound", intermediate},
                             {"observables", detail::quad_labels(w)}};
  return make_report(first ? "eq35" : "eq36", lhs, rhs, tolerance, std::move(ctx));
}

/// |<a1b1> + <a1b2> + <a2b1> - <a2b2>| <= 2.
inline InequalityReport chsh_classical(const BipartiteState& rho, const ObservableQuad& w,
                                       double tolerance = kDefaultInequalityTolerance) {
  const double lhs = std::abs(detail::weighted_chsh_sum(rho, CoefficientQuad::chsh(), w));
  return make_report("chsh39", lhs, 2.0, tolerance, {{"observables", detail::quad_labels(w)}});
}

/// |sum g_nm <a_n b_m>| <= 2 for coefficients obeying either constraint.
inline InequalityReport chsh_extended(const BipartiteState& rho, const CoefficientQuad& g, const ObservableQuad& w,
                                      double tolerance = kDefaultInequalityTolerance) {
  g.validate();
  const double lhs = std::abs(detail::weighted_chsh_sum(rho, g, w));
  return make_report("chsh40", lhs, 2.0, tolerance,
                     {{"gamma", detail::gamma_json(g)}, {"observables", detail::quad_labels(w)}});
}

enum class BellSide { Right, Left };

/// Perfect-correlation form of the Bell inequality.
///
/// RIGHT: |<x (x) y> - <x (x) z>| <= 1 - <y (x) z>   (x on factor 1; y, z on factor 2)
/// LEFT:  |<y (x) x> - <z (x) x>| <= 1 - <y (x) z>   (x on factor 2; y, z on factor 1)
///
/// `common` is the observable shared by both product terms.
inline InequalityReport bell_perfect_correlation(const BipartiteState& rho, const Observable& common,
                                                 const Observable& first, const Observable& second, BellSide side,
                                                 double tolerance = kDefaultInequalityTolerance) {
  double lhs = 0.0;
  double rhs = 0.0;
  if (side == BellSide::Right) {
    lhs = std::abs(product_average(rho, common, first) - product_average(rho, common, second));
    rhs = 1.0 - product_average(rho, first, second);
  } else {
    lhs = std::abs(product_average(rho, first, common) - product_average(rho, second, common));
    rhs = 1.0 - product_average(rho, first, second);
  }
  nlohmann::ordered_json ctx{
      {"side", side == BellSide::Right ? "RIGHT" : "LEFT"},
      {"observables", {detail::label_of(common), detail::label_of(first), detail::label_of(second)}}};
  return make_report("bell41", lhs, rhs, tolerance, std::move(ctx));
}

enum class SignResult { Plus, Minus, Both, None };

inline const char* to_string(SignResult s) {
  switch (s) {
    case SignResult::Plus: return "PLUS";
    case SignResult::Minus: return "MINUS";
    case SignResult::Both: return "BOTH";
    case SignResult::None: return "NONE";
  }
  return "?";
}

struct ConditionResult {
  SignResult sign = SignResult::None;
  double sigma_correlation = 0.0;  // tr[sigma_R (w2 (x) w2t)]
  double state_correlation = 0.0;  // tr[rho (w2 (x) w2t)]
  double delta_plus = 0.0;         // |sigma_corr - state_corr|
  double delta_minus = 0.0;        // |sigma_corr + state_corr|
  std::vector<InequalityReport> implied;  // Bell-inequality reports over sampled w1
};

/// Bell inequality in the form implied by a sign of the sufficient condition:
/// PLUS gives rhs 1 - <w2 w2t> (perfect correlation form), MINUS gives 1 + <w2 w2t>.
inline InequalityReport bell_sign_form(const BipartiteState& rho, const Observable& w1, const Observable& w2,
                                       const Observable& w2t, SignResult sign,
                                       double tolerance = kDefaultInequalityTolerance) {
  if (sign != SignResult::Plus && sign != SignResult::Minus) {
    throw ValidationError("bell_sign_form: sign must be PLUS or MINUS");
  }
  const double lhs = std::abs(product_average(rho, w1, w2) - product_average(rho, w1, w2t));
  const double corr = product_average(rho, w2, w2t);
  const double rhs = sign == SignResult::Plus ? 1.0 - corr : 1.0 + corr;
  nlohmann::ordered_json ctx{{"sign", to_string(sign)},
                             {"form", sign == SignResult::Plus ? "perfect_correlation" : "perfect_anticorrelation"},
                             {"observables", {detail::label_of(w1), detail::label_of(w2), detail::label_of(w2t)}}};
  return make_report("bell43", lhs, rhs, tolerance, std::move(ctx));
}

inline Observable random_observable(Rng& rng, std::size_t d, std::string label = "W");

/// Sufficient condition tr[sigma_R (w2 (x) w2t)] = +/- tr[rho (w2 (x) w2t)] for a RIGHT-role DSO R.
/// For each sign that holds, the implied Bell inequality is audited over `w1_samples`
/// random w1 drawn from `seed`.
inline ConditionResult sufficient_condition_check(const BipartiteState& rho, const SourceProfile& r,
                                                  const Observable& w2, const Observable& w2t,
                                                  std::size_t w1_samples = 0, std::uint64_t seed = 0,
                                                  double condition_tolerance = kConditionTolerance,
                                                  double tolerance = kDefaultInequalityTolerance) {
  detail::require_dilates(r, rho, DilationRole::Right, "sufficient_condition_check");
  if (!r.is_dso()) {
    throw ValidationError("sufficient_condition_check: source-operator is not a DSO (min eigenvalue " +
                          std::to_string(r.min_eigenvalue) + ")");
  }
  ConditionResult out;
  out.sigma_correlation = pair_average(r.sigma(DilationRole::Right), w2, w2t);
  out.state_correlation = product_average(rho, w2, w2t);
  out.delta_plus = std::abs(out.sigma_correlation - out.state_correlation);
  out.delta_minus = std::abs(out.sigma_correlation + out.state_correlation);
  const bool plus = out.delta_plus <= condition_tolerance;
  const bool minus = out.delta_minus <= condition_tolerance;
  out.sign = plus && minus ? SignResult::Both : plus ? SignResult::Plus : minus ? SignResult::Minus : SignResult::None;
  for (std::size_t i = 0; i < w1_samples && out.sign != SignResult::None; ++i) {
    Rng rng = sub_rng(seed, i, 42);
    const Observable w1 = random_observable(rng, rho.dim1(), "W1");
    if (plus) out.implied.push_back(bell_sign_form(rho, w1, w2, w2t, SignResult::Plus, tolerance));
    if (minus) out.implied.push_back(bell_sign_form(rho, w1, w2, w2t, SignResult::Minus, tolerance));
  }
  return out;
}

/// Bell restriction tr[rho (w2 (x) w2)] = +1 (PLUS) or -1 (MINUS).
inline SignResult bell_restriction_check(const BipartiteState& rho, const Observable& w2,
                                         double condition_tolerance = kConditionTolerance) {
  if (w2.dim() != rho.dim1() || w2.dim() != rho.dim2()) {
    throw ValidationError("bell_restriction_check: observable must act on both factors");
  }
  const double corr = product_average(rho, w2, w2);
  if (std::abs(corr - 1.0) <= condition_tolerance) return SignResult::Plus;
  if (std::abs(corr + 1.0) <= condition_tolerance) return SignResult::Minus;
  return SignResult::None;
}

/// U diag(u_1..u_d) U^dagger with u_i ~ U[-1, 1] and U Haar-random.
inline Observable random_observable(Rng& rng, std::size_t d, std::string label) {
  if (d < 2) throw DomainError("random_observable: d must be >= 2");
  std::vector<double> diag(d);
  for (double& x : diag) x = uniform(rng, -1.0, 1.0);
  const TensorOperator u = haar_unitary(rng, d);
  const TensorOperator w = u * TensorOperator::diagonal(diag) * u.adjoint();
  // exact hermitization against roundoff
  return Observable(0.5 * (w + w.adjoint()), std::move(label));
}

inline Observable random_observable(std::size_t d, std::uint64_t seed) {
  Rng rng = sub_rng(seed, 0);
  return random_observable(rng, d, "W");
}

/// Random coefficients |g| <= 1 satisfying the given constraint exactly.
inline CoefficientQuad random_coefficients(Rng& rng, ConstraintKind kind) {
  const double x = uniform(rng, -1.0, 1.0);
  const double y = uniform(rng, -1.0, 1.0);
  const double p = x * y;
  // |z| in [|p|, 1] keeps |p / z| <= 1
  double z = uniform(rng, std::abs(p), 1.0);
  if (uniform(rng, 0.0, 1.0) < 0.5) z = -z;
  const double w = z == 0.0 ? uniform(rng, -1.0, 1.0) : -p / z;
  // FIRST: g11 g12 = -g21 g22;  SECOND: g11 g21 = -g12 g22
  if (kind == ConstraintKind::First) return {x, y, z, w, kind};
  return {x, z, y, w, kind};
}

/// Fixed observables giving the maximal CHSH value 2 sqrt(2) on the singlet:
/// sz, sx on factor 1 and (sz +/- sx)/sqrt(2) on factor 2.
inline ObservableQuad canonical_violation_observables() {
  const double h = 1.0 / std::sqrt(2.0);
  const TensorOperator z = TensorOperator::diagonal({1.0, -1.0});
  const TensorOperator x(Dims{2}, {0.0, 1.0, 1.0, 0.0});
  return {pauli_z(), pauli_x(), Observable(h * (z + x), "(sz+sx)/sqrt2"), Observable(h * (z - x), "(sz-sx)/sqrt2")};
}

}  // namespace bellgate

#endif  // BELLGATE_INEQUALITIES_HPP
