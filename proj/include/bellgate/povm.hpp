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

// Discrete generalized measurements (POVMs) with real outcomes in [-1, 1],
// Alice/Bob product measurements and the inequalities stated for them.

#ifndef BELLGATE_POVM_HPP
#define BELLGATE_POVM_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bellgate/inequalities.hpp"
#include "bellgate/operator_io.hpp"
#include "bellgate/random.hpp"
#include "bellgate/states.hpp"

namespace bellgate {

struct PovmOutcome {
  double lambda;
  TensorOperator effect;
};

class DiscretePOVM {
 public:
  explicit DiscretePOVM(std::vector<PovmOutcome> outcomes, std::string label = {})
      : outcomes_(std::move(outcomes)), label_(std::move(label)) {
    if (outcomes_.empty()) throw ValidationError("DiscretePOVM: no outcomes");
    const Dims dims = outcomes_.front().effect.dims();
    if (dims.size() != 1) throw ValidationError("DiscretePOVM: effects must be single-factor operators");
    TensorOperator sum = TensorOperator::zeros(dims);
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
      const auto& o = outcomes_[i];
      const std::string where = "DiscretePOVM outcome " + std::to_string(i + 1);
      if (o.effect.dims() != dims) throw ValidationError(where + ": effect dims differ");
      if (!(std::abs(o.lambda) <= 1.0 + 1e-12)) throw ValidationError(where + ": |lambda| exceeds 1");
      require_hermitian(o.effect, where);
      const double lo = min_eigenvalue(o.effect);
      if (lo < tol::kPsdFloor) throw ValidationError(where + ": effect is not positive (min eigenvalue " + std::to_string(lo) + ")");
      sum = sum + o.effect;
    }
    const double resid = max_abs_diff(sum, TensorOperator::identity(dims));
    if (resid > 1e-10) throw ValidationError("DiscretePOVM: effects sum to identity only within " + std::to_string(resid));
  }

  [[nodiscard]] const std::vector<PovmOutcome>& outcomes() const noexcept { return outcomes_; }
  [[nodiscard]] std::size_t dim() const noexcept { return outcomes_.front().effect.side(); }
  [[nodiscard]] const std::string& label() const noexcept { return label_; }

  friend bool operator==(const DiscretePOVM& a, const DiscretePOVM& b) {
    if (a.outcomes_.size() != b.outcomes_.size()) return false;
    for (std::size_t i = 0; i < a.outcomes_.size(); ++i) {
      const auto& x = a.outcomes_[i];
      const auto& y = b.outcomes_[i];
      if (x.lambda != y.lambda || x.effect.dims() != y.effect.dims()) return false;
      if (!std::equal(x.effect.entries().begin(), x.effect.entries().end(), y.effect.entries().begin())) return false;
    }
    return true;
  }

 private:
  std::vector<PovmOutcome> outcomes_;
  std::string label_;
};

/// Alice measures on factor 1, Bob on factor 2.
struct ProductMeasurement {
  DiscretePOVM alice;
  DiscretePOVM bob;
};

/// W = sum_i lambda_i E_i.
inline Observable induced_observable(const DiscretePOVM& m) {
  TensorOperator w = TensorOperator::zeros({m.dim()});
  for (const auto& o : m.outcomes()) w = w + o.lambda * o.effect;
  return Observable(0.5 * (w + w.adjoint()), m.label().empty() ? "W(povm)" : "W(" + m.label() + ")");
}

/// sum_ij lambda_i mu_j tr[rho (E_i (x) F_j)], summed outcome by outcome.
inline double product_expectation(const BipartiteState& rho, const ProductMeasurement& pm) {
  if (pm.alice.dim() != rho.dim1() || pm.bob.dim() != rho.dim2()) {
    throw ValidationError("product_expectation: measurement dims do not match state dims " + dims_string(rho.op().dims()));
  }
  Complex total{};
  for (const auto& a : pm.alice.outcomes()) {
    for (const auto& b : pm.bob.outcomes()) {
      total += a.lambda * b.lambda * trace_of_product(rho.op(), kron(a.effect, b.effect));
    }
  }
  if (std::abs(total.imag()) > 1e-10) {
    throw ValidationError("product_expectation: imaginary residual " + std::to_string(total.imag()));
  }
  return total.real();
}

/// Measurements at settings (a1,b1), (a1,b2), (a2,b1), (a2,b2).
using ChshMeasurements = std::array<ProductMeasurement, 4>;

inline ChshMeasurements chsh_measurements(const DiscretePOVM& a1, const DiscretePOVM& a2, const DiscretePOVM& b1,
                                          const DiscretePOVM& b2) {
  return {ProductMeasurement{a1, b1}, ProductMeasurement{a1, b2}, ProductMeasurement{a2, b1},
          ProductMeasurement{a2, b2}};
}

namespace detail {

inline void require_consistent_settings(const ChshMeasurements& m, const char* what) {
  const bool ok = m[0].alice == m[1].alice && m[2].alice == m[3].alice && m[0].bob == m[2].bob && m[1].bob == m[3].bob;
  if (!ok) {
    throw ValidationError(std::string(what) +
                          ": inconsistent settings (a1 must be shared by (a1,b1),(a1,b2); b1 by (a1,b1),(a2,b1); ...)");
  }
}

inline double weighted_povm_sum(const BipartiteState& rho, const CoefficientQuad& g, const ChshMeasurements& m) {
  return g.g11 * product_expectation(rho, m[0]) + g.g12 * product_expectation(rho, m[1]) +
         g.g21 * product_expectation(rho, m[2]) + g.g22 * product_expectation(rho, m[3]);
}

inline double weighted_induced_sum(const BipartiteState& rho, const CoefficientQuad& g, const ChshMeasurements& m) {
  const ObservableQuad w{induced_observable(m[0].alice), induced_observable(m[2].alice), induced_observable(m[0].bob),
                         induced_observable(m[1].bob)};
  return detail::weighted_chsh_sum(rho, g, w);
}

}  // namespace detail

/// CHSH inequality for product expectation values under generalized measurements.
/// The context records the same combination computed from induced observables.
inline InequalityReport chsh_povm(const BipartiteState& rho, const ChshMeasurements& m,
                                  double tolerance = kDefaultInequalityTolerance) {
  detail::require_consistent_settings(m, "chsh_povm");
  const CoefficientQuad g = CoefficientQuad::chsh();
  const double lhs = std::abs(detail::weighted_povm_sum(rho, g, m));
  const double via_observables = std::abs(detail::weighted_induced_sum(rho, g, m));
  return make_report("chsh52", lhs, 2.0, tolerance, {{"lhs_via_induced_observables", via_observables}});
}

/// Extended CHSH inequality under generalized measurements; `state_class` records
/// the caller's assertion (symmetric DSO or Bell class).
inline InequalityReport extended_chsh_povm(const BipartiteState& rho, const CoefficientQuad& g,
                                           const ChshMeasurements& m, const std::string& state_class = "unspecified",
                                           double tolerance = kDefaultInequalityTolerance) {
  g.validate();
  detail::require_consistent_settings(m, "extended_chsh_povm");
  const double lhs = std::abs(detail::weighted_povm_sum(rho, g, m));
  const double via_observables = std::abs(detail::weighted_induced_sum(rho, g, m));
  return make_report("chsh53", lhs, 2.0, tolerance,
                     {{"gamma", detail::gamma_json(g)},
                      {"state_class", state_class},
                      {"lhs_via_induced_observables", via_observables}});
}

/// Perfect-correlation Bell inequality under generalized measurements:
/// |<(a,b1)> - <(a,b2)>| <= 1 - <(b1,b2)>, where Alice's b1-role measurement
/// must induce the same observable as Bob's b1 measurement.
inline InequalityReport bell_povm(const BipartiteState& rho, const DiscretePOVM& alice_a,
                                  const DiscretePOVM& alice_b1, const DiscretePOVM& bob_b1,
                                  const DiscretePOVM& bob_b2, double tolerance = kDefaultInequalityTolerance) {
  const Observable wa = induced_observable(alice_b1);
  const Observable wb = induced_observable(bob_b1);
  if (wa.dim() != wb.dim()) throw PreconditionError("bell_povm: b1 measurements act on different dimensions");
  const double residual = max_abs_diff(wa.op(), wb.op());
  if (residual > 1e-9) {
    throw PreconditionError("bell_povm: Alice's and Bob's b1 measurements induce different observables (residual " +
                            std::to_string(residual) + ")");
  }
  const double ab1 = product_expectation(rho, {alice_a, bob_b1});
  const double ab2 = product_expectation(rho, {alice_a, bob_b2});
  const double b1b2 = product_expectation(rho, {alice_b1, bob_b2});
  return make_report("bell55", std::abs(ab1 - ab2), 1.0 - b1b2, tolerance, {{"b1_observable_residual", residual}});
}

/// E_i = S^{-1/2} G_i S^{-1/2} with G_i = A_i^dagger A_i Ginibre and S = sum G_i;
/// outcomes i.i.d. uniform on [-1, 1].
inline DiscretePOVM random_povm(Rng& rng, std::size_t d, std::size_t k, std::string label = {}) {
  if (d < 2) throw DomainError("random_povm: d must be >= 2");
  if (k < 2) throw DomainError("random_povm: need at least 2 outcomes");
  std::vector<TensorOperator> g;
  g.reserve(k);
  TensorOperator s = TensorOperator::zeros({d});
  for (std::size_t i = 0; i < k; ++i) {
    const TensorOperator a = gaussian_matrix(rng, {d});
    g.push_back(a.adjoint() * a);
    s = s + g.back();
  }
  const TensorOperator s_inv_sqrt = hermitian_eigen(s).apply([](double x) { return 1.0 / std::sqrt(x); });
  std::vector<PovmOutcome> outcomes;
  outcomes.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const TensorOperator e = s_inv_sqrt * g[i] * s_inv_sqrt;
    outcomes.push_back({uniform(rng, -1.0, 1.0), 0.5 * (e + e.adjoint())});
  }
  return DiscretePOVM(std::move(outcomes), std::move(label));
}

inline DiscretePOVM random_povm(std::size_t d, std::size_t k, std::uint64_t seed) {
  Rng rng = sub_rng(seed, 0);
  return random_povm(rng, d, k);
}

/// Projective measurement of an observable: one outcome per eigenvalue with
/// the eigenprojector as effect (degenerate eigenvalues kept separate).
inline DiscretePOVM projective_povm(const Observable& w, std::string label = {}) {
  const Spectrum s = hermitian_eigen(w.op());
  std::vector<PovmOutcome> outcomes;
  for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
    const double lambda = std::clamp(s.eigenvalues[i], -1.0, 1.0);
    outcomes.push_back({lambda, TensorOperator::outer(s.eigenvectors[i], s.eigenvectors[i])});
  }
  return DiscretePOVM(std::move(outcomes), std::move(label));
}

/// Splits each outcome (lambda, E) into (lambda + delta, E/2), (lambda - delta, E/2)
/// with delta in (0, 1 - |lambda|]. The induced observable is unchanged while
/// the outcome statistics differ.
inline DiscretePOVM refine_preserving_observable(const DiscretePOVM& m, Rng& rng, std::string label = {}) {
  std::vector<PovmOutcome> outcomes;
  outcomes.reserve(2 * m.outcomes().size());
  for (const auto& o : m.outcomes()) {
    const double room = std::max(0.0, 1.0 - std::abs(o.lambda));
    const double delta = room * uniform(rng, 0.0, 1.0);
    outcomes.push_back({o.lambda + delta, 0.5 * o.effect});
    outcomes.push_back({o.lambda - delta, 0.5 * o.effect});
  }
  return DiscretePOVM(std::move(outcomes), std::move(label));
}

// POVM file format: {"dim":d, "outcomes":[{"lambda":x, "effect":{operator}}]}.
inline std::string povm_to_json(const DiscretePOVM& m) {
  std::string out = "{\"dim\":" + std::to_string(m.dim()) + ",\"outcomes\":[";
  for (std::size_t i = 0; i < m.outcomes().size(); ++i) {
    if (i) out += ',';
    out += "{\"lambda\":" + format_double(m.outcomes()[i].lambda) + ",\"effect\":";
    append_operator_json(out, m.outcomes()[i].effect);
    out += '}';
  }
  out += "]}";
  return out;
}

inline DiscretePOVM povm_from_json(const nlohmann::json& j) {
  try {
    const auto dim = j.at("dim").get<std::size_t>();
    std::vector<PovmOutcome> outcomes;
    for (const auto& o : j.at("outcomes")) {
      TensorOperator e = operator_from_json(o.at("effect"));
      if (e.dims() != Dims{dim}) throw ValidationError("POVM JSON: effect dims disagree with \"dim\"");
      outcomes.push_back({o.at("lambda").get<double>(), std::move(e)});
    }
    return DiscretePOVM(std::move(outcomes));
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("POVM JSON: ") + ex.what());
  }
}

}  // namespace bellgate

#endif  // BELLGATE_POVM_HPP
