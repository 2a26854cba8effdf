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

// Source-operators: self-adjoint unit-trace operators on a three-factor space
// whose designated partial traces reproduce a bipartite state.
//
//   kind  | factor dims     | slots traced to recover rho
//   ------+-----------------+----------------------------
//   T122  | [d1, d2, d2]    | 2 and 3
//   T112  | [d1, d1, d2]    | 1 and 2
//   RIGHT | [d, d, d]       | 2 and 3
//   LEFT  | [d, d, d]       | 1 and 2
//   BOTH  | [d, d, d]       | 1, 2 and 3 (special dilation)
//
// A positive source-operator is a density source-operator (DSO); a source
// operator is a DSO exactly when its trace norm is 1.

#ifndef BELLGATE_SOURCE_OPS_HPP
#define BELLGATE_SOURCE_OPS_HPP

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bellgate/operator_io.hpp"
#include "bellgate/states.hpp"
#include "bellgate/tensor_core.hpp"

namespace bellgate {

enum class DilationKind { T112, T122, Left, Right, Both };

/// Which pair of factors a bound reads from: RIGHT uses sigma on H2 (x) H2, LEFT on H1 (x) H1.
enum class DilationRole { Right, Left };

inline const char* to_string(DilationKind k) {
  switch (k) {
    case DilationKind::T112: return "T112";
    case DilationKind::T122: return "T122";
    case DilationKind::Left: return "LEFT";
    case DilationKind::Right: return "RIGHT";
    case DilationKind::Both: return "BOTH";
  }
  return "?";
}

inline DilationKind parse_dilation_kind(const std::string& s) {
  if (s == "T112") return DilationKind::T112;
  if (s == "T122") return DilationKind::T122;
  if (s == "LEFT") return DilationKind::Left;
  if (s == "RIGHT") return DilationKind::Right;
  if (s == "BOTH") return DilationKind::Both;
  throw ValidationError("unknown dilation kind '" + s + "'");
}

inline bool supports_role(DilationKind k, DilationRole role) {
  if (k == DilationKind::Both) return true;
  if (role == DilationRole::Right) return k == DilationKind::T122 || k == DilationKind::Right;
  return k == DilationKind::T112 || k == DilationKind::Left;
}

inline std::vector<std::size_t> dilation_slots(DilationKind k) {
  switch (k) {
    case DilationKind::T122:
    case DilationKind::Right: return {2, 3};
    case DilationKind::T112:
    case DilationKind::Left: return {1, 2};
    case DilationKind::Both: return {1, 2, 3};
  }
  return {};
}

/// Factor dims a dilation of `rho` of this kind must carry.
inline Dims expected_dilation_dims(DilationKind k, const BipartiteState& rho) {
  const std::size_t d1 = rho.dim1(), d2 = rho.dim2();
  switch (k) {
    case DilationKind::T122: return {d1, d2, d2};
    case DilationKind::T112: return {d1, d1, d2};
    default: return {d1, d1, d1};
  }
}

/// max |tr^(slot)[op] - rho| entry, or +inf when the reduced dims do not match.
inline double dilation_residual(const TensorOperator& op, Slot slot, const BipartiteState& rho) {
  const TensorOperator reduced = partial_trace(op, slot);
  if (reduced.dims() != rho.op().dims()) return std::numeric_limits<double>::infinity();
  return max_abs_diff(reduced, rho.op());
}

class SourceOperator {
 public:
  SourceOperator(TensorOperator op, DilationKind kind, BipartiteState target)
      : op_(std::move(op)), kind_(kind), target_(std::move(target)) {
    const std::string what = std::string("SourceOperator(") + to_string(kind_) + ")";
    if (kind_ != DilationKind::T122 && kind_ != DilationKind::T112 && target_.dim1() != target_.dim2()) {
      throw ValidationError(what + ": kind requires equal factor dimensions");
    }
    const Dims want = expected_dilation_dims(kind_, target_);
    if (op_.dims() != want) {
      throw ValidationError(what + ": dims " + dims_string(op_.dims()) + ", expected " + dims_string(want));
    }
    require_hermitian(op_, what);
    const double tr_err = std::abs(op_.trace() - 1.0);
    if (tr_err > tol::kTrace) {
      throw ValidationError(what + ": trace differs from 1 by " + std::to_string(tr_err));
    }
    std::ostringstream failed;
    for (std::size_t s : dilation_slots(kind_)) {
      const double r = dilation_residual(op_, Slot{s}, target_);
      if (r > tol::kDilation) failed << " tr^(" << s << ") residual " << r << ';';
    }
    if (!failed.str().empty()) throw ValidationError(what + ": dilation fails:" + failed.str());
  }

  [[nodiscard]] const TensorOperator& op() const noexcept { return op_; }
  [[nodiscard]] DilationKind kind() const noexcept { return kind_; }
  [[nodiscard]] const BipartiteState& target() const noexcept { return target_; }

 private:
  TensorOperator op_;
  DilationKind kind_;
  BipartiteState target_;
};

namespace detail {

inline void require_three_factor_dims(const TensorOperator& t, const Dims& want, const char* what) {
  if (t.dims() != want) {
    throw ValidationError(std::string(what) + ": dims " + dims_string(t.dims()) + ", expected " + dims_string(want));
  }
}

inline void require_vanishing_traces(const TensorOperator& tau, Slot a, Slot b, const char* what) {
  require_hermitian(tau, what);
  for (Slot s : {a, b}) {
    const TensorOperator r = partial_trace(tau, s);
    const double res = max_abs_diff(r, TensorOperator::zeros(r.dims()));
    if (res > 1e-10) {
      std::ostringstream os;
      os << what << ": tau has nonzero partial trace over slot " << s.index << " (residual " << res << ")";
      throw ValidationError(os.str());
    }
  }
}

}  // namespace detail

/// T122 = sum rho_nm (x) |phi_n><phi_m| (x) sigma + sum rho_nm (x) sigma (x) |phi_n><phi_m|
///        - tr_2[rho] (x) sigma (x) sigma + tau.
///
/// `sigma` defaults to the factor-2 reduction of rho, `tau` to zero.
inline SourceOperator construct_t122(const BipartiteState& rho, std::optional<TensorOperator> sigma = std::nullopt,
                                     std::optional<TensorOperator> tau = std::nullopt) {
  const std::size_t d1 = rho.dim1(), d2 = rho.dim2();
  const TensorOperator s = sigma ? *sigma : reduce(rho, 2);
  if (s.dims() != Dims{d2}) throw ValidationError("construct_t122: sigma must act on factor 2, dims " + dims_string(s.dims()));
  require_density(s, "construct_t122 sigma");
  if (tau) {
    detail::require_three_factor_dims(*tau, Dims{d1, d2, d2}, "construct_t122 tau");
    detail::require_vanishing_traces(*tau, Slot{2}, Slot{3}, "construct_t122 tau");
  }

  const SchmidtBlocks blocks = schmidt_blocks(rho);
  TensorOperator t = TensorOperator::zeros(Dims{d1, d2, d2});
  for (std::size_t n = 0; n < d2; ++n) {
    for (std::size_t m = 0; m < d2; ++m) {
      const TensorOperator phi_nm = TensorOperator::outer(basis_vector(d2, n), basis_vector(d2, m));
      const TensorOperator& r = blocks.block(n, m);
      t = t + kron(r, phi_nm, s) + kron(r, s, phi_nm);
    }
  }
  t = t - kron(reduce(rho, 1), s, s);
  if (tau) t = t + *tau;
  return {std::move(t), DilationKind::T122, rho};
}

/// Mirror of construct_t122 with the roles of the factors exchanged:
/// T112 = rho placed on slots (1,3) with sigma on slot 2 + sigma (x) rho
///        - sigma (x) sigma (x) tr_1[rho] + tau.
inline SourceOperator construct_t112(const BipartiteState& rho, std::optional<TensorOperator> sigma = std::nullopt,
                                     std::optional<TensorOperator> tau = std::nullopt) {
  const std::size_t d1 = rho.dim1(), d2 = rho.dim2();
  const TensorOperator s = sigma ? *sigma : reduce(rho, 1);
  if (s.dims() != Dims{d1}) throw ValidationError("construct_t112: sigma must act on factor 1, dims " + dims_string(s.dims()));
  require_density(s, "construct_t112 sigma");
  if (tau) {
    detail::require_three_factor_dims(*tau, Dims{d1, d1, d2}, "construct_t112 tau");
    detail::require_vanishing_traces(*tau, Slot{1}, Slot{2}, "construct_t112 tau");
  }
  TensorOperator t = insert_factor(rho.op(), s, Slot{2}) + kron(s, rho.op()) - kron(s, s, reduce(rho, 2));
  if (tau) t = t + *tau;
  return {std::move(t), DilationKind::T112, rho};
}

namespace detail {

inline void require_projector_dim(std::size_t d) {
  if (d < 3) throw DomainError("antisymmetric_projector: d must be >= 3, got " + std::to_string(d));
}

}  // namespace detail

/// Projection onto the totally antisymmetric subspace of (C^d)^(x)3, from swap operators:
/// 6Q = I - V12 - V23 - V23 V12 V23 + V23 V12 + V12 V23.
inline TensorOperator antisymmetric_projector(std::size_t d) {
  detail::require_projector_dim(d);
  const TensorOperator id1 = TensorOperator::identity({d});
  const TensorOperator v = permutation_operator(d);
  const TensorOperator v12 = kron(v, id1);
  const TensorOperator v23 = kron(id1, v);
  const TensorOperator id = TensorOperator::identity({d, d, d});
  const TensorOperator six_q = id - v12 - v23 - v23 * v12 * v23 + v23 * v12 + v12 * v23;
  return (1.0 / 6.0) * six_q;
}

/// Same projector assembled from basis dyads |e_n><e_m|.
inline TensorOperator antisymmetric_projector_from_basis(std::size_t d) {
  detail::require_projector_dim(d);
  const TensorOperator id1 = TensorOperator::identity({d});
  auto dyad = [d](std::size_t n, std::size_t m) { return TensorOperator::outer(basis_vector(d, n), basis_vector(d, m)); };
  TensorOperator six_q = TensorOperator::identity({d, d, d});
  for (std::size_t n = 0; n < d; ++n) {
    for (std::size_t m = 0; m < d; ++m) {
      const TensorOperator nm = dyad(n, m), mn = dyad(m, n);
      six_q = six_q - kron(nm, mn, id1) - kron(id1, nm, mn) - kron(nm, id1, mn);
      for (std::size_t k = 0; k < d; ++k) {
        six_q = six_q + kron(nm, dyad(m, k), dyad(k, n)) + kron(mn, dyad(k, m), dyad(n, k));
      }
    }
  }
  return (1.0 / 6.0) * six_q;
}

/// Density source-operator for the Werner state.
///
/// d >= 3: 1/d^4 I + 6/(d^2 (d-2)) Q, kind BOTH.
/// d == 2: 1/4 I - 1/8 V12 - 1/8 V23 V12 V23, kind RIGHT.
inline SourceOperator werner_dso(std::size_t d) {
  if (d < 2) throw DomainError("werner_dso: d must be >= 2, got " + std::to_string(d));
  const BipartiteState rho = werner_state(d);
  const double dd = static_cast<double>(d);
  if (d >= 3) {
    TensorOperator r = (1.0 / (dd * dd * dd * dd)) * TensorOperator::identity({d, d, d}) +
                       (6.0 / (dd * dd * (dd - 2.0))) * antisymmetric_projector(d);
    return {std::move(r), DilationKind::Both, rho};
  }
  const TensorOperator id1 = TensorOperator::identity({2});
  const TensorOperator v = permutation_operator(2);
  const TensorOperator v12 = kron(v, id1);
  const TensorOperator v23 = kron(id1, v);
  TensorOperator r = 0.25 * TensorOperator::identity({2, 2, 2}) - 0.125 * v12 - 0.125 * (v23 * v12 * v23);
  return {std::move(r), DilationKind::Right, rho};
}

namespace detail {

inline TensorOperator triple_projector(std::size_t d, std::initializer_list<std::array<std::size_t, 3>> kets) {
  std::vector<Complex> psi(d * d * d);
  for (const auto& k : kets) psi[(k[0] * d + k[1]) * d + k[2]] += 1.0;
  return TensorOperator::outer(psi, psi).with_dims({d, d, d});
}

}  // namespace detail

/// 1/4 |Phi><Phi| (x) P1 + 1/4 |e1e1e1 + e2e1e2><...|, a RIGHT DSO for example_rho1.
inline SourceOperator dso_rho1(std::size_t embed_dim) {
  detail::require_embed_dim(embed_dim, "dso_rho1");
  const std::size_t d = embed_dim;
  TensorOperator r = 0.25 * kron(detail::maximally_correlated_projector(d), detail::basis_projector(d, 0)) +
                     0.25 * detail::triple_projector(d, {{0, 0, 0}, {1, 0, 1}});
  return {std::move(r), DilationKind::Right, example_rho1(d)};
}

/// Adds 1/6 |e1e1e1 + e1e2e2><...| to the rho1 construction (weights 1/6); kind BOTH.
inline SourceOperator dso_rho2(std::size_t embed_dim) {
  detail::require_embed_dim(embed_dim, "dso_rho2");
  const std::size_t d = embed_dim;
  const double w = 1.0 / 6.0;
  TensorOperator r = w * kron(detail::maximally_correlated_projector(d), detail::basis_projector(d, 0)) +
                     w * detail::triple_projector(d, {{0, 0, 0}, {1, 0, 1}}) +
                     w * detail::triple_projector(d, {{0, 0, 0}, {0, 1, 1}});
  return {std::move(r), DilationKind::Both, example_rho2(d)};
}

/// sum xi_m rho1 (x) rho2 (x) rho2 (T122) or sum xi_m rho1 (x) rho1 (x) rho2 (T112).
inline SourceOperator separable_dso(const SeparableRepresentation& rep, DilationKind kind = DilationKind::T122) {
  if (kind != DilationKind::T122 && kind != DilationKind::T112) {
    throw ValidationError(std::string("separable_dso: kind must be T122 or T112, got ") + to_string(kind));
  }
  const BipartiteState rho = separable_state(rep);
  TensorOperator t = TensorOperator::zeros(expected_dilation_dims(kind, rho));
  for (const auto& term : rep.terms) {
    t = t + term.weight * (kind == DilationKind::T122 ? kron(term.first, term.second, term.second)
                                                      : kron(term.first, term.first, term.second));
  }
  return {std::move(t), kind, rho};
}

/// Reverses the factor order of a dilation of a swap-symmetric state,
/// turning a RIGHT dilation into a LEFT one and vice versa.
inline SourceOperator mirror_dilation(const SourceOperator& t) {
  if (!is_swap_symmetric(t.target())) {
    throw PreconditionError("mirror_dilation: target state is not swap-symmetric");
  }
  DilationKind kind = DilationKind::Both;
  if (t.kind() == DilationKind::T122 || t.kind() == DilationKind::Right) kind = DilationKind::Left;
  if (t.kind() == DilationKind::T112 || t.kind() == DilationKind::Left) kind = DilationKind::Right;
  return {permute_factors(t.op(), {3, 2, 1}), kind, t.target()};
}

struct Witness {
  std::string name;
  double residual;
};

struct ClassificationReport {
  DilationKind kind;
  double trace_norm;
  double min_eigenvalue;
  bool is_dso;
  bool has_special_dilation;
  std::vector<Witness> witnesses;
};

inline ClassificationReport verify_source_operator(const SourceOperator& t) {
  const Spectrum spec = hermitian_eigen(t.op());
  ClassificationReport rep{};
  rep.kind = t.kind();
  rep.trace_norm = trace_norm(spec);
  rep.min_eigenvalue = spec.min_eigenvalue();
  rep.is_dso = rep.min_eigenvalue >= tol::kPsdFloor;
  rep.witnesses.push_back({"trace", std::abs(t.op().trace() - 1.0)});
  rep.witnesses.push_back({"hermitian", hermitian_asymmetry(t.op())});
  rep.witnesses.push_back({"trace_norm_minus_one", rep.trace_norm - 1.0});
  bool all_three = true;
  for (std::size_t s = 1; s <= 3; ++s) {
    const double r = dilation_residual(t.op(), Slot{s}, t.target());
    rep.witnesses.push_back({"slot" + std::to_string(s), r});
    all_three = all_three && r <= tol::kDilation;
  }
  rep.has_special_dilation = rep.is_dso && all_three;
  return rep;
}

inline DilationRole default_role(DilationKind k) {
  return supports_role(k, DilationRole::Right) ? DilationRole::Right : DilationRole::Left;
}

/// sigma_T = tr^(1)[|T|] / ||T||_1 (RIGHT role) or tr^(3)[|T|] / ||T||_1 (LEFT role).
inline TensorOperator sigma_from_source(const SourceOperator& t, DilationRole role) {
  if (!supports_role(t.kind(), role)) {
    throw ValidationError(std::string("sigma_from_source: kind ") + to_string(t.kind()) + " has no " +
                          (role == DilationRole::Right ? "RIGHT" : "LEFT") + " role");
  }
  const Spectrum spec = hermitian_eigen(t.op());
  const TensorOperator abs_t = absolute_value(spec);
  return (1.0 / trace_norm(spec)) * partial_trace(abs_t, Slot{role == DilationRole::Right ? 1u : 3u});
}

inline TensorOperator sigma_from_source(const SourceOperator& t) { return sigma_from_source(t, default_role(t.kind())); }

/// Quantities the bound auditors read from a source-operator, computed once.
struct SourceProfile {
  SourceOperator source;
  double trace_norm;
  double min_eigenvalue;
  std::optional<TensorOperator> sigma_right;
  std::optional<TensorOperator> sigma_left;

  [[nodiscard]] bool is_dso() const { return min_eigenvalue >= tol::kPsdFloor; }

  [[nodiscard]] const TensorOperator& sigma(DilationRole role) const {
    const auto& s = role == DilationRole::Right ? sigma_right : sigma_left;
    if (!s) {
      throw ValidationError(std::string("source-operator of kind ") + to_string(source.kind()) + " has no " +
                            (role == DilationRole::Right ? "RIGHT" : "LEFT") + " role");
    }
    return *s;
  }
};

inline SourceProfile profile_source(const SourceOperator& t) {
  const Spectrum spec = hermitian_eigen(t.op());
  const double norm1 = trace_norm(spec);
  const TensorOperator abs_t = absolute_value(spec);
  SourceProfile p{t, norm1, spec.min_eigenvalue(), std::nullopt, std::nullopt};
  if (supports_role(t.kind(), DilationRole::Right)) p.sigma_right = (1.0 / norm1) * partial_trace(abs_t, Slot{1});
  if (supports_role(t.kind(), DilationRole::Left)) p.sigma_left = (1.0 / norm1) * partial_trace(abs_t, Slot{3});
  return p;
}

// Source-operator file format: the operator fields plus "kind", the target
// state, and "target_hash" (FNV-1a of the target's serialized form).
inline std::string source_operator_to_json(const SourceOperator& t) {
  std::string out = "{\"kind\":\"";
  out += to_string(t.kind());
  out += "\",\"target_hash\":\"";
  out += operator_hash(t.target().op());
  out += "\",\"dims\":";
  const std::string body = operator_to_json(t.op());
  // splice the operator's own "dims"/"entries" members into this object
  out += body.substr(std::string("{\"dims\":").size(), body.size() - std::string("{\"dims\":").size() - 1);
  out += ",\"target\":";
  append_operator_json(out, t.target().op());
  out += '}';
  return out;
}

inline SourceOperator source_operator_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.contains("target")) {
    throw ValidationError("source-operator JSON: expected \"kind\", \"target\", \"dims\", \"entries\"");
  }
  std::string kind;
  try {
    kind = j.at("kind").get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("source-operator JSON: ") + ex.what());
  }
  BipartiteState target(operator_from_json(j.at("target")));
  if (j.contains("target_hash") && j.at("target_hash").is_string() &&
      j.at("target_hash").get<std::string>() != operator_hash(target.op())) {
    throw ValidationError("source-operator JSON: target_hash does not match the embedded target");
  }
  return {operator_from_json(j), parse_dilation_kind(kind), std::move(target)};
}

}  // namespace bellgate

#endif  // BELLGATE_SOURCE_OPS_HPP
