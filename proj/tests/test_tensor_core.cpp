#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "bellgate/operator_io.hpp"
#include "bellgate/random.hpp"
#include "bellgate/tensor_core.hpp"

using namespace bellgate;

namespace {

Eigen::MatrixXcd to_eigen(const TensorOperator& t) {
  Eigen::MatrixXcd m(t.side(), t.side());
  for (std::size_t r = 0; r < t.side(); ++r)
    for (std::size_t c = 0; c < t.side(); ++c) m(r, c) = t(r, c);
  return m;
}

std::vector<double> eigen_oracle(const TensorOperator& t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(to_eigen(t));
  std::vector<double> v(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(v.rbegin(), v.rend());
  return v;
}

TensorOperator pauli_z_op() { return TensorOperator::diagonal({1.0, -1.0}); }

// Entry-by-entry partial trace over slot k, written with explicit multi-indices.
TensorOperator naive_partial_trace(const TensorOperator& t, std::size_t slot) {
  const Dims& dims = t.dims();
  Dims out_dims;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (i + 1 != slot) out_dims.push_back(dims[i]);
  auto digits = [&](std::size_t idx) {
    std::vector<std::size_t> d(dims.size());
    for (std::size_t i = dims.size(); i-- > 0;) {
      d[i] = idx % dims[i];
      idx /= dims[i];
    }
    return d;
  };
  std::vector<Complex> e(product_of(out_dims) * product_of(out_dims));
  const std::size_t n_out = product_of(out_dims);
  for (std::size_t r = 0; r < t.side(); ++r) {
    for (std::size_t c = 0; c < t.side(); ++c) {
      const auto dr = digits(r), dc = digits(c);
      if (dr[slot - 1] != dc[slot - 1]) continue;
      std::size_t ro = 0, co = 0;
      for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i + 1 == slot) continue;
        ro = ro * dims[i] + dr[i];
        co = co * dims[i] + dc[i];
      }
      e[ro * n_out + co] += t(r, c);
    }
  }
  return TensorOperator(out_dims, e);
}

}  // namespace

TEST(TensorOperator, ConstructorRejectsWrongEntryCount) {
  EXPECT_THROW(TensorOperator(Dims{2, 2}, std::vector<Complex>(15)), ValidationError);
  EXPECT_THROW(TensorOperator(Dims{}, std::vector<Complex>{}), ValidationError);
}

TEST(TensorOperator, ArithmeticRequiresMatchingDims) {
  EXPECT_THROW((void)(TensorOperator::identity({2, 2}) + TensorOperator::identity({4})), ValidationError);
}

TEST(Kron, IdentitiesCompose) {
  const auto k = kron(TensorOperator::identity({2}), TensorOperator::identity({3}));
  EXPECT_EQ(k.dims(), (Dims{2, 3}));
  EXPECT_LT(max_abs_diff(k, TensorOperator::identity({2, 3})), 1e-15);
}

TEST(Kron, SlowestIndexIsLeftFactor) {
  const auto z = pauli_z_op();
  const auto k = kron(z, TensorOperator::identity({2}));
  EXPECT_EQ(k(0, 0), Complex(1.0));
  EXPECT_EQ(k(1, 1), Complex(1.0));
  EXPECT_EQ(k(2, 2), Complex(-1.0));
  EXPECT_EQ(k(3, 3), Complex(-1.0));
}

TEST(PartialTrace, ProductStates) {
  Rng rng = sub_rng(1, 0);
  const auto a = random_density(rng, {2});
  const auto b = random_density(rng, {3});
  const auto ab = kron(a, b);
  EXPECT_LT(max_abs_diff(partial_trace(ab, Slot{1}), b), 1e-14);
  EXPECT_LT(max_abs_diff(partial_trace(ab, Slot{2}), a), 1e-14);
}

TEST(PartialTrace, MatchesNaiveImplementationOnRandomOperators) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    Rng rng = sub_rng(2, i);
    const auto t = random_hermitian(rng, {2, 3, 2});
    for (std::size_t k = 1; k <= 3; ++k) {
      EXPECT_LT(max_abs_diff(partial_trace(t, Slot{k}), naive_partial_trace(t, k)), 1e-13);
    }
  }
}

TEST(PartialTrace, SlotOutOfRange) {
  const auto t = TensorOperator::identity({2, 2});
  EXPECT_THROW((void)partial_trace(t, Slot{0}), IndexError);
  EXPECT_THROW((void)partial_trace(t, Slot{3}), IndexError);
  EXPECT_THROW((void)partial_trace(TensorOperator::identity({2}), Slot{1}), IndexError);
}

TEST(PartialTrace, PreservesTrace) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = sub_rng(3, i);
    const auto t = random_hermitian(rng, {3, 2, 2});
    for (std::size_t k = 1; k <= 3; ++k) {
      const Complex a = partial_trace(t, Slot{k}).trace();
      const Complex b = t.trace();
      EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(b)));
    }
  }
}

TEST(PartialTrace, CommutesAcrossDisjointSlots) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    Rng rng = sub_rng(4, i);
    const auto t = random_hermitian(rng, {2, 3, 2});
    const auto a = partial_trace(partial_trace(t, Slot{1}), Slot{1});  // slots 1 then 2
    const auto b = partial_trace(partial_trace(t, Slot{2}), Slot{1});  // slots 2 then 1
    EXPECT_LT(max_abs_diff(a, b), 1e-13);
  }
}

TEST(PartialTranspose, IdentityInvariant) {
  const auto id = TensorOperator::identity({2, 3});
  for (std::size_t k = 1; k <= 2; ++k) EXPECT_EQ(max_abs_diff(partial_transpose(id, Slot{k}), id), 0.0);
}

TEST(PartialTranspose, InvolutionAndTraceHermiticity) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    Rng rng = sub_rng(5, i);
    const auto rho = random_density(rng, {2, 3});
    for (std::size_t k = 1; k <= 2; ++k) {
      const auto pt = partial_transpose(rho, Slot{k});
      EXPECT_LT(max_abs_diff(partial_transpose(pt, Slot{k}), rho), 1e-15);
      EXPECT_NEAR(pt.trace().real(), 1.0, 1e-12);
      EXPECT_LT(hermitian_asymmetry(pt), 1e-14);
    }
  }
}

TEST(PartialTranspose, FullTransposeOfSingleFactor) {
  const TensorOperator t(Dims{2}, {1.0, Complex(0, 2), Complex(0, -2), 3.0});
  const auto pt = partial_transpose(t, Slot{1});
  EXPECT_EQ(pt(0, 1), t(1, 0));
  EXPECT_THROW((void)partial_transpose(t, Slot{2}), IndexError);
}

TEST(PermuteFactors, SwapMatchesConjugationBySwapOperator) {
  Rng rng = sub_rng(6, 0);
  const auto t = random_hermitian(rng, {3, 3});
  const auto v = permutation_operator(3);
  EXPECT_LT(max_abs_diff(permute_factors(t, {2, 1}), v * t * v), 1e-13);
}

TEST(PermuteFactors, KronOrderIsPermuted) {
  Rng rng = sub_rng(7, 0);
  const auto a = random_hermitian(rng, {2});
  const auto b = random_hermitian(rng, {3});
  const auto c = random_hermitian(rng, {2});
  EXPECT_LT(max_abs_diff(permute_factors(kron(a, b, c), {3, 1, 2}), kron(c, a, b)), 1e-14);
  EXPECT_THROW((void)permute_factors(kron(a, b), {1, 1}), IndexError);
}

TEST(InsertFactor, PlacesOperatorAtSlot) {
  Rng rng = sub_rng(8, 0);
  const auto a = random_hermitian(rng, {2});
  const auto b = random_hermitian(rng, {3});
  const auto s = random_hermitian(rng, {2});
  EXPECT_LT(max_abs_diff(insert_factor(kron(a, b), s, Slot{2}), kron(a, s, b)), 1e-14);
  EXPECT_LT(max_abs_diff(insert_factor(kron(a, b), s, Slot{1}), kron(s, a, b)), 1e-14);
  EXPECT_LT(max_abs_diff(insert_factor(kron(a, b), s, Slot{3}), kron(a, b, s)), 1e-14);
}

TEST(HermitianEigen, Diagonal) {
  const auto s = hermitian_eigen(TensorOperator::diagonal({3.0, 1.0, 2.0}));
  ASSERT_EQ(s.eigenvalues.size(), 3U);
  EXPECT_NEAR(s.eigenvalues[0], 3.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues[1], 2.0, 1e-15);
  EXPECT_NEAR(s.eigenvalues[2], 1.0, 1e-15);
}

TEST(HermitianEigen, SwapSpectrum) {
  const auto s = hermitian_eigen(permutation_operator(2));
  const std::vector<double> want{1, 1, 1, -1};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(s.eigenvalues[i], want[i], 1e-12);
}

TEST(HermitianEigen, RejectsNonHermitian) {
  const TensorOperator t(Dims{2}, {1.0, 1.0, 0.0, 1.0});
  EXPECT_THROW((void)hermitian_eigen(t), ValidationError);
}

TEST(HermitianEigen, AgreesWithEigenOracleAndReconstructs) {
  const std::vector<Dims> shapes{{2}, {3, 3}, {2, 2, 2}, {3, 3, 3}, {9, 9}};
  std::uint64_t i = 0;
  for (const auto& dims : shapes) {
    Rng rng = sub_rng(9, i++);
    const auto t = random_hermitian(rng, dims);
    const auto s = hermitian_eigen(t);
    const auto want = eigen_oracle(t);
    ASSERT_EQ(s.eigenvalues.size(), want.size());
    for (std::size_t k = 0; k < want.size(); ++k) EXPECT_NEAR(s.eigenvalues[k], want[k], 1e-10);
    EXPECT_LE((s.reconstruct() - t).frobenius_norm(), tol::kReconstruction * t.frobenius_norm());
    // orthonormal eigenvectors
    for (std::size_t a = 0; a < s.eigenvectors.size(); ++a) {
      for (std::size_t b = 0; b < s.eigenvectors.size(); ++b) {
        Complex ip = 0.0;
        for (std::size_t r = 0; r < s.eigenvectors[a].size(); ++r) ip += std::conj(s.eigenvectors[a][r]) * s.eigenvectors[b][r];
        EXPECT_NEAR(std::abs(ip - Complex(a == b ? 1.0 : 0.0)), 0.0, tol::kOrthonormal);
      }
    }
  }
}

TEST(HermitianEigen, DescendingOrder) {
  Rng rng = sub_rng(10, 0);
  const auto s = hermitian_eigen(random_hermitian(rng, {4, 4}));
  EXPECT_TRUE(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
}

TEST(TraceNorm, Examples) {
  Rng rng = sub_rng(11, 0);
  EXPECT_NEAR(trace_norm(random_density(rng, {2, 2})), 1.0, 1e-12);
  EXPECT_NEAR(trace_norm(TensorOperator::diagonal({1.0, -1.0})), 2.0, 1e-15);
}

TEST(TraceNorm, EqualsOnePlusTwiceNegativeTraceForUnitTrace) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = sub_rng(12, i);
    auto h = random_hermitian(rng, {3, 3});
    // shift to unit trace
    h = h + ((1.0 - h.trace().real()) / 9.0) * TensorOperator::identity({3, 3});
    const auto [plus, minus] = positive_negative_parts(h);
    EXPECT_NEAR(trace_norm(h), 1.0 + 2.0 * minus.trace().real(), 1e-10);
    EXPECT_GE(trace_norm(h) + 1e-12, std::abs(h.trace()));
  }
}

TEST(PositiveNegativeParts, Examples) {
  Rng rng = sub_rng(13, 0);
  const auto p = random_density(rng, {3});
  const auto [pp, pm] = positive_negative_parts(p);
  EXPECT_LT(max_abs_diff(pp, p), 1e-12);
  EXPECT_LT(pm.frobenius_norm(), 1e-12);

  const auto [a, b] = positive_negative_parts(TensorOperator::diagonal({2.0, -3.0}));
  EXPECT_LT(max_abs_diff(a, TensorOperator::diagonal({2.0, 0.0})), 1e-14);
  EXPECT_LT(max_abs_diff(b, TensorOperator::diagonal({0.0, 3.0})), 1e-14);
}

TEST(PositiveNegativeParts, ReconstructionAndOrthogonality) {
  for (std::uint64_t i = 0; i < 10; ++i) {
    Rng rng = sub_rng(14, i);
    const auto h = random_hermitian(rng, {9});
    const auto [p, m] = positive_negative_parts(h);
    EXPECT_LT(max_abs_diff(p - m, h), 1e-12);
    EXPECT_LT((p * m).frobenius_norm(), 1e-10);
    EXPECT_GE(min_eigenvalue(p), -1e-12);
    EXPECT_GE(min_eigenvalue(m), -1e-12);
  }
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(TensorOperator::identity({3})), 1.0, 1e-15);
  for (std::size_t d = 2; d <= 4; ++d) EXPECT_NEAR(operator_norm(permutation_operator(d)), 1.0, 1e-12);
  EXPECT_NEAR(operator_norm(0.5 * TensorOperator::diagonal({1.0, -1.0})), 0.5, 1e-15);
}

TEST(PermutationOperator, Properties) {
  const auto v2 = permutation_operator(2);
  const auto e12 = kron_vectors(basis_vector(2, 0), basis_vector(2, 1));
  const auto e21 = kron_vectors(basis_vector(2, 1), basis_vector(2, 0));
  for (std::size_t r = 0; r < 4; ++r) {
    Complex acc = 0.0;
    for (std::size_t c = 0; c < 4; ++c) acc += v2(r, c) * e12[c];
    EXPECT_EQ(acc, e21[r]);
  }
  for (std::size_t d = 2; d <= 4; ++d) {
    const auto v = permutation_operator(d);
    EXPECT_LT(max_abs_diff(v * v, TensorOperator::identity({d, d})), 1e-15);
    EXPECT_LT(hermitian_asymmetry(v), 1e-15);
  }
  EXPECT_NEAR(permutation_operator(3).trace().real(), 3.0, 1e-15);
  EXPECT_THROW((void)permutation_operator(1), DomainError);
}

TEST(ExpectationOfProduct, MatchesExplicitTrace) {
  Rng rng = sub_rng(15, 0);
  const auto rho = random_density(rng, {2, 3});
  const auto a = random_hermitian(rng, {2});
  const auto b = random_hermitian(rng, {3});
  const Complex want = (rho * kron(a, b)).trace();
  EXPECT_LT(std::abs(expectation_of_product(rho, a, b) - want), 1e-13);
}

TEST(OperatorJson, RoundTripIsExact) {
  Rng rng = sub_rng(16, 0);
  const auto t = random_hermitian(rng, {2, 3});
  const auto back = operator_from_json(operator_to_json(t));
  EXPECT_EQ(back.dims(), t.dims());
  EXPECT_EQ(max_abs_diff(back, t), 0.0);
  EXPECT_EQ(operator_hash(back), operator_hash(t));
}

TEST(OperatorJson, RejectsMalformed) {
  EXPECT_THROW((void)operator_from_json(std::string("{not json")), ValidationError);
  EXPECT_THROW((void)operator_from_json(std::string(R"({"dims":[2]})")), ValidationError);
  EXPECT_THROW((void)operator_from_json(std::string(R"({"dims":[2],"entries":[[1,0]]})")), ValidationError);
  EXPECT_THROW((void)operator_from_json(std::string(R"({"dims":[0],"entries":[]})")), ValidationError);
}

TEST(Random, SubStreamsAreReproducible) {
  Rng a = sub_rng(99, 3), b = sub_rng(99, 3), c = sub_rng(99, 4);
  EXPECT_EQ(a(), b());
  EXPECT_NE(sub_rng(99, 3)(), c());
}

TEST(Random, HaarUnitaryIsUnitary) {
  Rng rng = sub_rng(17, 0);
  const auto u = haar_unitary(rng, 4);
  EXPECT_LT(max_abs_diff(u * u.adjoint(), TensorOperator::identity({4})), 1e-13);
}
