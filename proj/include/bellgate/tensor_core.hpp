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

// Dense complex operators on finite tensor-product spaces.
//
// A TensorOperator is a square row-major matrix together with the list of
// factor dimensions it acts on. Factor slots are 1-based and slot 1 is the
// leftmost (slowest varying) index, so kron(A, B) has A's indices slowest.

#ifndef BELLGATE_TENSOR_CORE_HPP
#define BELLGATE_TENSOR_CORE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <type_traits>
#include <vector>

#include "bellgate/errors.hpp"

namespace bellgate {

using Complex = std::complex<double>;
using Dims = std::vector<std::size_t>;

/// Tolerances shared by every module.
namespace tol {
inline constexpr double kHermitian = 1e-10;       // max |A - A^dagger| entry
inline constexpr double kOrthonormal = 1e-9;
inline constexpr double kReconstruction = 1e-10;  // relative Frobenius
inline constexpr double kPsdFloor = -1e-9;        // smallest admissible eigenvalue
inline constexpr double kTrace = 1e-10;
inline constexpr double kDilation = 1e-9;
}  // namespace tol

/// 1-based tensor-factor position.
struct Slot {
  std::size_t index;
};

inline std::size_t product_of(const Dims& dims) {
  return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>{});
}

inline std::string dims_string(const Dims& dims) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < dims.size(); ++i) os << (i ? "," : "") << dims[i];
  os << ']';
  return os.str();
}

class TensorOperator {
 public:
  TensorOperator(Dims dims, std::vector<Complex> entries)
      : dims_(std::move(dims)), entries_(std::move(entries)) {
    if (dims_.empty()) throw ValidationError("TensorOperator: empty dimension list");
    for (std::size_t d : dims_) {
      if (d < 1) throw ValidationError("TensorOperator: factor dimension must be >= 1");
    }
    side_ = product_of(dims_);
    if (entries_.size() != side_ * side_) {
      throw ValidationError("TensorOperator: expected " + std::to_string(side_ * side_) +
                            " entries for dims " + dims_string(dims_) + ", got " +
                            std::to_string(entries_.size()));
    }
  }

  static TensorOperator zeros(Dims dims) {
    const std::size_t n = product_of(dims);
    return {std::move(dims), std::vector<Complex>(n * n)};
  }

  static TensorOperator identity(Dims dims) {
    const std::size_t n = product_of(dims);
    std::vector<Complex> e(n * n);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = 1.0;
    return {std::move(dims), std::move(e)};
  }

  static TensorOperator diagonal(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<Complex> e(n * n);
    for (std::size_t i = 0; i < n; ++i) e[i * n + i] = values[i];
    return {Dims{n}, std::move(e)};
  }

  /// |v><w| on a single factor of dimension v.size().
  static TensorOperator outer(std::span<const Complex> v, std::span<const Complex> w) {
    if (v.size() != w.size()) throw ValidationError("outer: vector sizes differ");
    const std::size_t n = v.size();
    std::vector<Complex> e(n * n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) e[r * n + c] = v[r] * std::conj(w[c]);
    return {Dims{n}, std::move(e)};
  }

  /// Builds entries from f(row, col).
  template <class F>
  static TensorOperator generate(Dims dims, F&& f) {
    const std::size_t n = product_of(dims);
    std::vector<Complex> e(n * n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) e[r * n + c] = f(r, c);
    return {std::move(dims), std::move(e)};
  }

  /// Same entries, different factorization of the same side.
  [[nodiscard]] TensorOperator with_dims(Dims dims) const {
    if (product_of(dims) != side_) {
      throw ValidationError("with_dims: " + dims_string(dims) + " does not factor side " +
                            std::to_string(side_));
    }
    return {std::move(dims), entries_};
  }

  [[nodiscard]] const Dims& dims() const noexcept { return dims_; }
  [[nodiscard]] std::size_t factor_count() const noexcept { return dims_.size(); }
  [[nodiscard]] std::size_t side() const noexcept { return side_; }
  [[nodiscard]] std::span<const Complex> entries() const noexcept { return entries_; }
  [[nodiscard]] Complex operator()(std::size_t r, std::size_t c) const {
    return entries_[r * side_ + c];
  }

  [[nodiscard]] Complex trace() const {
    Complex s{};
    for (std::size_t i = 0; i < side_; ++i) s += entries_[i * side_ + i];
    return s;
  }

  [[nodiscard]] TensorOperator adjoint() const {
    return generate(dims_, [&](std::size_t r, std::size_t c) { return std::conj((*this)(c, r)); });
  }

  [[nodiscard]] double frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : entries_) s += std::norm(z);
    return std::sqrt(s);
  }

  friend TensorOperator operator+(const TensorOperator& a, const TensorOperator& b) {
    require_same_dims(a, b, "operator+");
    std::vector<Complex> e(a.entries_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] += b.entries_[i];
    return {a.dims_, std::move(e)};
  }

  friend TensorOperator operator-(const TensorOperator& a, const TensorOperator& b) {
    require_same_dims(a, b, "operator-");
    std::vector<Complex> e(a.entries_);
    for (std::size_t i = 0; i < e.size(); ++i) e[i] -= b.entries_[i];
    return {a.dims_, std::move(e)};
  }

  friend TensorOperator operator*(Complex s, const TensorOperator& a) {
    std::vector<Complex> e(a.entries_);
    for (Complex& z : e) z *= s;
    return {a.dims_, std::move(e)};
  }
  friend TensorOperator operator*(double s, const TensorOperator& a) { return Complex{s} * a; }

  /// Matrix product; both operands must carry the same dims.
  friend TensorOperator operator*(const TensorOperator& a, const TensorOperator& b) {
    require_same_dims(a, b, "operator*");
    const std::size_t n = a.side_;
    std::vector<Complex> e(n * n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t k = 0; k < n; ++k) {
        const Complex ark = a.entries_[r * n + k];
        if (ark == Complex{}) continue;
        for (std::size_t c = 0; c < n; ++c) e[r * n + c] += ark * b.entries_[k * n + c];
      }
    }
    return {a.dims_, std::move(e)};
  }

 private:
  static void require_same_dims(const TensorOperator& a, const TensorOperator& b, const char* what) {
    if (a.dims_ != b.dims_) {
      throw ValidationError(std::string(what) + ": dims " + dims_string(a.dims_) + " vs " +
                            dims_string(b.dims_));
    }
  }

  Dims dims_;
  std::vector<Complex> entries_;
  std::size_t side_ = 0;
};

/// tr[a b] without forming the product.
inline Complex trace_of_product(const TensorOperator& a, const TensorOperator& b) {
  if (a.side() != b.side()) throw ValidationError("trace_of_product: side mismatch");
  const std::size_t n = a.side();
  Complex s{};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) s += a(r, c) * b(c, r);
  return s;
}

/// Largest entrywise |a - b|; dims must agree.
inline double max_abs_diff(const TensorOperator& a, const TensorOperator& b) {
  if (a.dims() != b.dims()) {
    throw ValidationError("max_abs_diff: dims " + dims_string(a.dims()) + " vs " +
                          dims_string(b.dims()));
  }
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) m = std::max(m, std::abs(ea[i] - eb[i]));
  return m;
}

/// Largest entrywise |A - A^dagger|.
inline double hermitian_asymmetry(const TensorOperator& t) {
  double m = 0.0;
  for (std::size_t r = 0; r < t.side(); ++r)
    for (std::size_t c = r; c < t.side(); ++c) m = std::max(m, std::abs(t(r, c) - std::conj(t(c, r))));
  return m;
}

inline void require_hermitian(const TensorOperator& t, const std::string& what) {
  const double asym = hermitian_asymmetry(t);
  if (asym > tol::kHermitian) {
    std::ostringstream os;
    os << what << ": operator is not Hermitian (max |A - A^dagger| entry = " << asym << ")";
    throw ValidationError(os.str());
  }
}

inline void require_slot(const TensorOperator& t, Slot slot, const char* what) {
  if (slot.index < 1 || slot.index > t.factor_count()) {
    throw IndexError(std::string(what) + ": slot " + std::to_string(slot.index) +
                     " out of range for dims " + dims_string(t.dims()));
  }
}

inline TensorOperator kron(const TensorOperator& a, const TensorOperator& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  const std::size_t nb = b.side();
  return TensorOperator::generate(std::move(dims), [&](std::size_t r, std::size_t c) {
    return a(r / nb, c / nb) * b(r % nb, c % nb);
  });
}

template <typename... Rest>
  requires(sizeof...(Rest) > 0 && (std::is_convertible_v<const Rest&, const TensorOperator&> && ...))
inline TensorOperator kron(const TensorOperator& a, const TensorOperator& b, const Rest&... rest) {
  return kron(kron(a, b), rest...);
}

namespace detail {

// Splits the flat index space around one slot: [left | slot | right].
struct SlotSplit {
  std::size_t left;
  std::size_t mid;
  std::size_t right;
};

inline SlotSplit split_at(const Dims& dims, std::size_t slot0) {
  SlotSplit s{1, dims[slot0], 1};
  for (std::size_t i = 0; i < slot0; ++i) s.left *= dims[i];
  for (std::size_t i = slot0 + 1; i < dims.size(); ++i) s.right *= dims[i];
  return s;
}

}  // namespace detail

inline TensorOperator partial_trace(const TensorOperator& t, Slot slot) {
  require_slot(t, slot, "partial_trace");
  if (t.factor_count() < 2) {
    throw IndexError("partial_trace: needs at least two factors, got dims " + dims_string(t.dims()));
  }
  const auto [left, mid, right] = detail::split_at(t.dims(), slot.index - 1);
  Dims dims = t.dims();
  dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(slot.index - 1));
  return TensorOperator::generate(std::move(dims), [&](std::size_t r, std::size_t c) {
    const std::size_t rl = r / right, rr = r % right;
    const std::size_t cl = c / right, cr = c % right;
    Complex s{};
    for (std::size_t m = 0; m < mid; ++m) s += t((rl * mid + m) * right + rr, (cl * mid + m) * right + cr);
    return s;
  });
}

inline TensorOperator partial_transpose(const TensorOperator& t, Slot slot) {
  require_slot(t, slot, "partial_transpose");
  const auto [left, mid, right] = detail::split_at(t.dims(), slot.index - 1);
  (void)left;
  return TensorOperator::generate(t.dims(), [&](std::size_t r, std::size_t c) {
    const std::size_t rl = r / (mid * right), rm = (r / right) % mid, rr = r % right;
    const std::size_t cl = c / (mid * right), cm = (c / right) % mid, cr = c % right;
    return t((rl * mid + cm) * right + rr, (cl * mid + rm) * right + cr);
  });
}

/// Reorders tensor factors: result slot i (1-based) holds input slot order[i-1].
inline TensorOperator permute_factors(const TensorOperator& t, const std::vector<std::size_t>& order) {
  const Dims& old_dims = t.dims();
  const std::size_t k = old_dims.size();
  if (order.size() != k) throw IndexError("permute_factors: order length mismatch");
  std::vector<bool> seen(k, false);
  for (std::size_t s : order) {
    if (s < 1 || s > k || seen[s - 1]) throw IndexError("permute_factors: order is not a permutation");
    seen[s - 1] = true;
  }
  Dims new_dims(k);
  for (std::size_t i = 0; i < k; ++i) new_dims[i] = old_dims[order[i] - 1];

  std::vector<std::size_t> old_stride(k, 1);
  for (std::size_t i = k - 1; i > 0; --i) old_stride[i - 1] = old_stride[i] * old_dims[i];

  // map[new flat index] = old flat index
  const std::size_t n = t.side();
  std::vector<std::size_t> map(n);
  std::vector<std::size_t> digit(k, 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t old = 0;
    for (std::size_t i = 0; i < k; ++i) old += digit[i] * old_stride[order[i] - 1];
    map[flat] = old;
    for (std::size_t i = k; i-- > 0;) {
      if (++digit[i] < new_dims[i]) break;
      digit[i] = 0;
    }
  }
  return TensorOperator::generate(std::move(new_dims),
                                  [&](std::size_t r, std::size_t c) { return t(map[r], map[c]); });
}

/// Inserts `op` as a new factor so that it occupies `slot` of the result.
inline TensorOperator insert_factor(const TensorOperator& t, const TensorOperator& op, Slot slot) {
  const std::size_t k = t.factor_count() + op.factor_count();
  if (op.factor_count() != 1) throw ValidationError("insert_factor: inserted operator must be single-factor");
  if (slot.index < 1 || slot.index > k) {
    throw IndexError("insert_factor: slot " + std::to_string(slot.index) + " out of range");
  }
  std::vector<std::size_t> order;
  order.reserve(k);
  std::size_t next = 1;
  for (std::size_t i = 1; i <= k; ++i) order.push_back(i == slot.index ? k : next++);
  return permute_factors(kron(t, op), order);
}

/// Eigen-decomposition of a Hermitian operator; eigenvalues descending.
struct Spectrum {
  Dims dims;
  std::vector<double> eigenvalues;
  std::vector<std::vector<Complex>> eigenvectors;  // eigenvectors[i] pairs with eigenvalues[i]

  /// Sum_i f(lambda_i) |v_i><v_i|.
  template <class F>
  [[nodiscard]] TensorOperator apply(F&& f) const {
    const std::size_t n = eigenvalues.size();
    std::vector<Complex> e(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      const double w = f(eigenvalues[i]);
      if (w == 0.0) continue;
      const auto& v = eigenvectors[i];
      for (std::size_t r = 0; r < n; ++r) {
        const Complex vr = w * v[r];
        for (std::size_t c = 0; c < n; ++c) e[r * n + c] += vr * std::conj(v[c]);
      }
    }
    return {dims, std::move(e)};
  }

  [[nodiscard]] TensorOperator reconstruct() const {
    return apply([](double x) { return x; });
  }

  [[nodiscard]] double min_eigenvalue() const { return eigenvalues.back(); }
  [[nodiscard]] double max_eigenvalue() const { return eigenvalues.front(); }
};

/// Cyclic Jacobi diagonalization with complex plane rotations.
inline Spectrum hermitian_eigen(const TensorOperator& t) {
  require_hermitian(t, "hermitian_eigen");
  const std::size_t n = t.side();
  std::vector<Complex> a(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) a[r * n + c] = 0.5 * (t(r, c) + std::conj(t(c, r)));
  std::vector<Complex> v(n * n);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

  const double scale = std::max(t.frobenius_norm(), 1e-300);
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a[p * n + q]);
    if (std::sqrt(off) <= 1e-16 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex apq = a[p * n + q];
        const double mag = std::abs(apq);
        if (mag <= 1e-300 || mag <= 1e-18 * scale) continue;
        const Complex phase = apq / mag;
        const Complex conj_phase = std::conj(phase);
        const double app = a[p * n + p].real();
        const double aqq = a[q * n + q].real();
        const double zeta = (aqq - app) / (2.0 * mag);
        const double tan_angle = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + tan_angle * tan_angle);
        const double s = tan_angle * c;

        // A <- A U with U e_p = c e_p - s e^{-i phi} e_q, U e_q = s e_p + c e^{-i phi} e_q
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a[k * n + p], akq = a[k * n + q];
          a[k * n + p] = c * akp - s * conj_phase * akq;
          a[k * n + q] = s * akp + c * conj_phase * akq;
          const Complex vkp = v[k * n + p], vkq = v[k * n + q];
          v[k * n + p] = c * vkp - s * conj_phase * vkq;
          v[k * n + q] = s * vkp + c * conj_phase * vkq;
        }
        // A <- U^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a[p * n + k], aqk = a[q * n + k];
          a[p * n + k] = c * apk - s * phase * aqk;
          a[q * n + k] = s * apk + c * phase * aqk;
        }
        a[p * n + q] = 0.0;
        a[q * n + p] = 0.0;
        a[p * n + p] = app - tan_angle * mag;
        a[q * n + q] = aqq + tan_angle * mag;
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i * n + i].real() > a[j * n + j].real();
  });

  Spectrum out;
  out.dims = t.dims();
  out.eigenvalues.reserve(n);
  out.eigenvectors.reserve(n);
  for (std::size_t idx : order) {
    out.eigenvalues.push_back(a[idx * n + idx].real());
    std::vector<Complex> col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = v[r * n + idx];
    out.eigenvectors.push_back(std::move(col));
  }
  return out;
}

inline double trace_norm(const Spectrum& s) {
  double sum = 0.0;
  for (double x : s.eigenvalues) sum += std::abs(x);
  return sum;
}

inline double trace_norm(const TensorOperator& t) { return trace_norm(hermitian_eigen(t)); }

inline double operator_norm(const TensorOperator& t) {
  const Spectrum s = hermitian_eigen(t);
  return std::max(std::abs(s.max_eigenvalue()), std::abs(s.min_eigenvalue()));
}

/// |T| = sqrt(T^2) for Hermitian T.
inline TensorOperator absolute_value(const Spectrum& s) {
  return s.apply([](double x) { return std::abs(x); });
}

inline TensorOperator absolute_value(const TensorOperator& t) { return absolute_value(hermitian_eigen(t)); }

/// T = T(+) - T(-) with T(+) = (|T| + T)/2 and T(-) = (|T| - T)/2.
inline std::pair<TensorOperator, TensorOperator> positive_negative_parts(const TensorOperator& t) {
  const Spectrum s = hermitian_eigen(t);
  return {s.apply([](double x) { return x > 0.0 ? x : 0.0; }),
          s.apply([](double x) { return x < 0.0 ? -x : 0.0; })};
}

inline double min_eigenvalue(const TensorOperator& t) { return hermitian_eigen(t).min_eigenvalue(); }

/// Hermitian, eigenvalues above the PSD floor.
inline bool is_psd(const TensorOperator& t) {
  return hermitian_asymmetry(t) <= tol::kHermitian && min_eigenvalue(t) >= tol::kPsdFloor;
}

/// Hermitian, PSD and unit trace.
inline void require_density(const TensorOperator& t, const std::string& what) {
  require_hermitian(t, what);
  const double lo = min_eigenvalue(t);
  if (lo < tol::kPsdFloor) {
    std::ostringstream os;
    os << what << ": operator is not positive (min eigenvalue " << lo << ")";
    throw ValidationError(os.str());
  }
  const Complex tr = t.trace();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    std::ostringstream os;
    os << what << ": trace " << tr.real() << " differs from 1";
    throw ValidationError(os.str());
  }
}

/// V_d on C^d (x) C^d: |n><m| (x) |m><n| summed over n, m.
inline TensorOperator permutation_operator(std::size_t d) {
  if (d < 2) throw DomainError("permutation_operator: d must be >= 2, got " + std::to_string(d));
  return TensorOperator::generate(Dims{d, d}, [d](std::size_t r, std::size_t c) {
    const std::size_t r1 = r / d, r2 = r % d, c1 = c / d, c2 = c % d;
    return (r1 == c2 && r2 == c1) ? Complex{1.0} : Complex{};
  });
}

/// Standard basis vector e_i (0-based) of C^d.
inline std::vector<Complex> basis_vector(std::size_t d, std::size_t i) {
  std::vector<Complex> v(d);
  v.at(i) = 1.0;
  return v;
}

/// Kronecker product of state vectors, first factor slowest.
inline std::vector<Complex> kron_vectors(std::span<const Complex> a, std::span<const Complex> b) {
  std::vector<Complex> out;
  out.reserve(a.size() * b.size());
  for (const Complex& x : a)
    for (const Complex& y : b) out.push_back(x * y);
  return out;
}

/// tr[T (A (x) B)] or tr[T (A (x) B (x) C)] without materializing the product.
inline Complex expectation_of_product(const TensorOperator& t, std::span<const TensorOperator* const> factors) {
  const std::size_t k = factors.size();
  if (t.factor_count() != k) throw ValidationError("expectation_of_product: factor count mismatch");
  for (std::size_t i = 0; i < k; ++i) {
    if (factors[i]->factor_count() != 1 || factors[i]->side() != t.dims()[i]) {
      throw ValidationError("expectation_of_product: factor " + std::to_string(i + 1) +
                            " does not match dims " + dims_string(t.dims()));
    }
  }
  // tr[T X] = sum_{r,c} T(r,c) X(c,r), with X(c,r) = prod_i factor_i(c_i, r_i)
  const std::size_t n = t.side();
  const Dims& dims = t.dims();
  std::vector<std::size_t> rd(k, 0);
  Complex total{};
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::size_t> cd(k, 0);
    for (std::size_t c = 0; c < n; ++c) {
      const Complex trc = t(r, c);
      if (trc != Complex{}) {
        Complex x{1.0};
        for (std::size_t i = 0; i < k && x != Complex{}; ++i) x *= (*factors[i])(cd[i], rd[i]);
        total += trc * x;
      }
      for (std::size_t i = k; i-- > 0;) {
        if (++cd[i] < dims[i]) break;
        cd[i] = 0;
      }
    }
    for (std::size_t i = k; i-- > 0;) {
      if (++rd[i] < dims[i]) break;
      rd[i] = 0;
    }
  }
  return total;
}

inline Complex expectation_of_product(const TensorOperator& t, const TensorOperator& a, const TensorOperator& b) {
  const TensorOperator* f[] = {&a, &b};
  return expectation_of_product(t, f);
}

inline Complex expectation_of_product(const TensorOperator& t, const TensorOperator& a, const TensorOperator& b,
                                      const TensorOperator& c) {
  const TensorOperator* f[] = {&a, &b, &c};
  return expectation_of_product(t, f);
}

}  // namespace bellgate

#endif  // BELLGATE_TENSOR_CORE_HPP
