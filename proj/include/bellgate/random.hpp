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

// Seeded sampling of matrices used by the sweeps and tests.

#ifndef BELLGATE_RANDOM_HPP
#define BELLGATE_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "bellgate/tensor_core.hpp"

namespace bellgate {

using Rng = std::mt19937_64;

/// Independent stream for sample `index` of a run seeded with `master`.
inline Rng sub_rng(std::uint64_t master, std::uint64_t index, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::vector<Complex> gaussian_entries(Rng& rng, std::size_t count) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Complex> e(count);
  for (Complex& z : e) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = {re, im};
  }
  return e;
}

/// Complex Ginibre matrix with i.i.d. standard normal real and imaginary parts.
inline TensorOperator gaussian_matrix(Rng& rng, Dims dims) {
  const std::size_t n = product_of(dims);
  return {std::move(dims), gaussian_entries(rng, n * n)};
}

/// Haar unitary: Gram-Schmidt on the columns of a Ginibre matrix.
inline TensorOperator haar_unitary(Rng& rng, std::size_t d) {
  std::vector<Complex> g = gaussian_entries(rng, d * d);
  // columns q_j, stored column-major in cols[j]
  std::vector<std::vector<Complex>> cols(d, std::vector<Complex>(d));
  for (std::size_t j = 0; j < d; ++j)
    for (std::size_t r = 0; r < d; ++r) cols[j][r] = g[r * d + j];
  for (std::size_t j = 0; j < d; ++j) {
    // two passes of modified Gram-Schmidt
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        Complex proj{};
        for (std::size_t r = 0; r < d; ++r) proj += std::conj(cols[i][r]) * cols[j][r];
        for (std::size_t r = 0; r < d; ++r) cols[j][r] -= proj * cols[i][r];
      }
    }
    double norm = 0.0;
    for (const Complex& z : cols[j]) norm += std::norm(z);
    norm = std::sqrt(norm);
    for (Complex& z : cols[j]) z /= norm;
  }
  return TensorOperator::generate(Dims{d}, [&](std::size_t r, std::size_t c) { return cols[c][r]; });
}

/// Random Hermitian matrix (G + G^dagger)/2 from a Ginibre G.
inline TensorOperator random_hermitian(Rng& rng, Dims dims) {
  const TensorOperator g = gaussian_matrix(rng, std::move(dims));
  return 0.5 * (g + g.adjoint());
}

/// Full-rank random density operator G G^dagger / tr.
inline TensorOperator random_density(Rng& rng, Dims dims) {
  const TensorOperator g = gaussian_matrix(rng, std::move(dims));
  const TensorOperator p = g * g.adjoint();
  return (1.0 / p.trace().real()) * p;
}

}  // namespace bellgate

#endif  // BELLGATE_RANDOM_HPP
