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

// Bipartite density operators and their standard decompositions.

#ifndef BELLGATE_STATES_HPP
#define BELLGATE_STATES_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "bellgate/random.hpp"
#include "bellgate/tensor_core.hpp"

namespace bellgate {

/// Positive unit-trace operator on a two-factor space.
class BipartiteState {
 public:
  explicit BipartiteState(TensorOperator op) : op_(std::move(op)) {
    if (op_.factor_count() != 2) {
      throw ValidationError("BipartiteState: expected 2 factors, got dims " + dims_string(op_.dims()));
    }
    require_density(op_, "BipartiteState");
  }

  [[nodiscard]] const TensorOperator& op() const noexcept { return op_; }
  [[nodiscard]] std::size_t dim1() const noexcept { return op_.dims()[0]; }
  [[nodiscard]] std::size_t dim2() const noexcept { return op_.dims()[1]; }

 private:
  TensorOperator op_;
};

/// rho = sum_{n,m} rho_nm (x) |phi_n><phi_m| with phi the standard basis of factor 2.
struct SchmidtBlocks {
  std::size_t basis_dim = 0;
  std::vector<TensorOperator> blocks;  // row-major, blocks[n * basis_dim + m] = rho_nm

  [[nodiscard]] const TensorOperator& block(std::size_t n, std::size_t m) const {
    return blocks.at(n * basis_dim + m);
  }

  [[nodiscard]] TensorOperator reassemble() const {
    const std::size_t d1 = blocks.front().side();
    const std::size_t d2 = basis_dim;
    return TensorOperator::generate(Dims{d1, d2}, [&](std::size_t r, std::size_t c) {
      return block(r % d2, c % d2)(r / d2, c / d2);
    });
  }
};

struct SeparableTerm {
  double weight;
  TensorOperator first;   // density operator on factor 1
  TensorOperator second;  // density operator on factor 2
};

/// sum_m xi_m rho1^(m) (x) rho2^(m).
struct SeparableRepresentation {
  std::vector<SeparableTerm> terms;

  void validate() const {
    if (terms.empty()) throw ValidationError("SeparableRepresentation: no terms");
    double total = 0.0;
    const Dims& d1 = terms.front().first.dims();
    const Dims& d2 = terms.front().second.dims();
    for (std::size_t i = 0; i < terms.size(); ++i) {
      const auto& t = terms[i];
      const std::string where = "SeparableRepresentation term " + std::to_string(i + 1);
      if (!(t.weight > 0.0)) throw ValidationError(where + ": weight must be > 0");
      if (t.first.dims() != d1 || t.second.dims() != d2 || d1.size() != 1 || d2.size() != 1) {
        throw ValidationError(where + ": factor dimensions disagree");
      }
      require_density(t.first, where + " first factor");
      require_density(t.second, where + " second factor");
      total += t.weight;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ValidationError("SeparableRepresentation: weights sum to " + std::to_string(total) + ", not 1");
    }
  }
};

inline TensorOperator swap_factors(const TensorOperator& t) { return permute_factors(t, {2, 1}); }

/// V rho V = rho to tolerance (equal factor dimensions required).
inline bool is_swap_symmetric(const BipartiteState& rho, double tolerance = tol::kDilation) {
  if (rho.dim1() != rho.dim2()) return false;
  return max_abs_diff(swap_factors(rho.op()), rho.op()) <= tolerance;
}

/// (d+1)/d^3 I - V_d/d^2 on C^d (x) C^d.
inline BipartiteState werner_state(std::size_t d) {
  if (d < 2) throw DomainError("werner_state: d must be >= 2, got " + std::to_string(d));
  const double dd = static_cast<double>(d);
  const TensorOperator v = permutation_operator(d);
  return BipartiteState((dd + 1.0) / (dd * dd * dd) * TensorOperator::identity(Dims{d, d}) - (1.0 / (dd * dd)) * v);
}

/// (|01> - |10>)/sqrt(2) on C^2 (x) C^2.
inline BipartiteState singlet_state() {
  const double h = 1.0 / std::sqrt(2.0);
  const std::vector<Complex> psi{0.0, h, -h, 0.0};
  return BipartiteState(TensorOperator::outer(psi, psi).with_dims(Dims{2, 2}));
}

namespace detail {

inline void require_embed_dim(std::size_t embed_dim, const char* what) {
  if (embed_dim < 2) throw DomainError(std::string(what) + ": embed_dim must be >= 2, got " + std::to_string(embed_dim));
}

// |psi1 (x) psi1 + psi2 (x) psi2><...| with psi_i = e_i, unnormalized.
inline TensorOperator maximally_correlated_projector(std::size_t d) {
  std::vector<Complex> phi(d * d);
  phi[0 * d + 0] = 1.0;
  phi[1 * d + 1] = 1.0;
  return TensorOperator::outer(phi, phi).with_dims(Dims{d, d});
}

inline TensorOperator basis_projector(std::size_t d, std::size_t i) {
  const auto e = basis_vector(d, i);
  return TensorOperator::outer(e, e);
}

}  // namespace detail

/// 1/4 |e1e1 + e2e2><...| + 1/4 (P1 + P2) (x) P1, embedded in C^embed_dim.
inline BipartiteState example_rho1(std::size_t embed_dim) {
  detail::require_embed_dim(embed_dim, "example_rho1");
  const std::size_t d = embed_dim;
  const TensorOperator p1 = detail::basis_projector(d, 0);
  const TensorOperator p2 = detail::basis_projector(d, 1);
  return BipartiteState(0.25 * detail::maximally_correlated_projector(d) + 0.25 * kron(p1 + p2, p1));
}

/// 1/6 |e1e1 + e2e2><...| + 1/6 (P1 + P2) (x) P1 + 1/6 P1 (x) (P1 + P2).
inline BipartiteState example_rho2(std::size_t embed_dim) {
  detail::require_embed_dim(embed_dim, "example_rho2");
  const std::size_t d = embed_dim;
  const TensorOperator p1 = detail::basis_projector(d, 0);
  const TensorOperator p2 = detail::basis_projector(d, 1);
  const double w = 1.0 / 6.0;
  return BipartiteState(w * detail::maximally_correlated_projector(d) + w * kron(p1 + p2, p1) + w * kron(p1, p1 + p2));
}

inline BipartiteState separable_state(const SeparableRepresentation& rep) {
  rep.validate();
  TensorOperator sum = TensorOperator::zeros(Dims{rep.terms.front().first.side(), rep.terms.front().second.side()});
  for (const auto& t : rep.terms) sum = sum + t.weight * kron(t.first, t.second);
  return BipartiteState(std::move(sum));
}

/// Spectral decomposition rho = sum_i alpha_i |Psi_i><Psi_i|.
inline Spectrum spectral_decompose(const BipartiteState& rho) { return hermitian_eigen(rho.op()); }

inline SchmidtBlocks schmidt_blocks(const BipartiteState& rho) {
  const std::size_t d1 = rho.dim1();
  const std::size_t d2 = rho.dim2();
  SchmidtBlocks out;
  out.basis_dim = d2;
  out.blocks.reserve(d2 * d2);
  for (std::size_t n = 0; n < d2; ++n) {
    for (std::size_t m = 0; m < d2; ++m) {
      out.blocks.push_back(TensorOperator::generate(Dims{d1}, [&](std::size_t i, std::size_t j) {
        return rho.op()(i * d2 + n, j * d2 + m);
      }));
    }
  }
  return out;
}

/// Reduced density operator keeping factor `keep` (1 or 2).
inline TensorOperator reduce(const BipartiteState& rho, std::size_t keep) {
  if (keep != 1 && keep != 2) throw IndexError("reduce: side must be 1 or 2, got " + std::to_string(keep));
  return partial_trace(rho.op(), Slot{keep == 1 ? 2u : 1u});
}

/// Random full-rank state on [d1, d2].
inline BipartiteState random_state(Rng& rng, std::size_t d1, std::size_t d2) {
  return BipartiteState(random_density(rng, Dims{d1, d2}));
}

/// Random separable representation with `terms` product terms of random densities.
inline SeparableRepresentation random_separable(Rng& rng, std::size_t d1, std::size_t d2, std::size_t terms,
                                                bool bell_class_form = false) {
  SeparableRepresentation rep;
  std::vector<double> w(terms);
  double total = 0.0;
  for (double& x : w) total += (x = uniform(rng, 0.1, 1.0));
  for (std::size_t i = 0; i < terms; ++i) {
    TensorOperator a = random_density(rng, Dims{d1});
    TensorOperator b = bell_class_form ? a : random_density(rng, Dims{d2});
    rep.terms.push_back({w[i] / total, std::move(a), std::move(b)});
  }
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < terms; ++i) sum += rep.terms[i].weight;
  rep.terms.back().weight = 1.0 - sum;
  return rep;
}

}  // namespace bellgate

#endif  // BELLGATE_STATES_HPP
