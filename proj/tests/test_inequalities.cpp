#include <gtest/gtest.h>

#include <cmath>

#include "bellgate/inequalities.hpp"

using namespace bellgate;

namespace {

Observable obs(const TensorOperator& t, const char* label = "W") { return Observable(t, label); }

TensorOperator sz() { return TensorOperator::diagonal({1.0, -1.0}); }

// Independent trace oracle: tr[rho (a (x) b)] via an explicit Kronecker product.
double direct_average(const BipartiteState& rho, const Observable& a, const Observable& b) {
  return (rho.op() * kron(a.op(), b.op())).trace().real();
}

}  // namespace

TEST(Observable, Invariants) {
  EXPECT_NO_THROW(obs(sz()));
  EXPECT_THROW(obs(2.0 * sz()), ValidationError);
  EXPECT_THROW(obs(TensorOperator(Dims{2}, {0.0, 1.0, 0.0, 0.0})), ValidationError);
  EXPECT_THROW(obs(TensorOperator::identity({2, 2})), ValidationError);
}

TEST(ProductAverage, Examples) {
  Rng rng = sub_rng(50, 0);
  const auto rho = random_state(rng, 2, 3);
  EXPECT_NEAR(product_average(rho, identity_observable(2), identity_observable(3)), 1.0, 1e-12);
  EXPECT_NEAR(product_average(werner_state(2), pauli_z(), pauli_z()), -0.5, 1e-14);
  EXPECT_THROW((void)product_average(rho, pauli_z(), pauli_z()), ValidationError);
}

TEST(ProductAverage, BilinearAndMatchesDirectTrace) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = sub_rng(51, i);
    const auto rho = random_state(rng, 2, 3);
    const auto a = random_observable(rng, 2);
    const auto a2 = random_observable(rng, 2);
    const auto b = random_observable(rng, 3);
    EXPECT_NEAR(product_average(rho, a, b), direct_average(rho, a, b), 1e-12);
    const Observable mix(0.5 * a.op() + 0.25 * a2.op());
    EXPECT_NEAR(product_average(rho, mix, b), 0.5 * product_average(rho, a, b) + 0.25 * product_average(rho, a2, b),
                1e-12);
  }
}

TEST(ScalarBound, AbsoluteDifferenceBound) {
  Rng rng = sub_rng(52, 0);
  for (int i = 0; i < 1000000; ++i) {
    const double x = uniform(rng, -1.0, 1.0), y = uniform(rng, -1.0, 1.0);
    ASSERT_LE(std::abs(x - y), 1.0 - x * y + 1e-15);
  }
}

TEST(CoefficientQuad, Constraints) {
  const auto c = CoefficientQuad::chsh();
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.g11 * c.g12, -c.g21 * c.g22);
  EXPECT_THROW((CoefficientQuad{1, 1, 1, 1, ConstraintKind::First}.validate()), ValidationError);
  EXPECT_THROW((CoefficientQuad{1.5, 0, 0, 0, ConstraintKind::First}.validate()), ValidationError);
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng = sub_rng(53, i);
    for (auto k : {ConstraintKind::First, ConstraintKind::Second}) {
      const auto g = random_coefficients(rng, k);
      EXPECT_NO_THROW(g.validate());
      if (k == ConstraintKind::First) EXPECT_NEAR(g.g11 * g.g12, -g.g21 * g.g22, 1e-12);
      else EXPECT_NEAR(g.g11 * g.g21, -g.g12 * g.g22, 1e-12);
    }
  }
}

TEST(BellFormBound, IdenticalObservablesGiveZeroLhs) {
  const auto rho = werner_state(3);
  const auto p = profile_source(werner_dso(3));
  Rng rng = sub_rng(54, 0);
  const auto a = random_observable(rng, 3), b = random_observable(rng, 3);
  const auto r = bell_form_bound_right(rho, p, a, b, b);
  EXPECT_EQ(r.eq, "eq20");
  EXPECT_NEAR(r.lhs, 0.0, 1e-15);
  EXPECT_TRUE(r.satisfied);
  const auto l = bell_form_bound_left(rho, p, b, b, a);
  EXPECT_EQ(l.eq, "eq21");
  EXPECT_NEAR(l.lhs, 0.0, 1e-15);
}

TEST(BellFormBound, RhsMatchesIndependentFormula) {
  Rng rng = sub_rng(55, 0);
  const auto rho = random_state(rng, 2, 2);
  const auto t = construct_t122(rho, random_density(rng, {2}));
  const auto a = random_observable(rng, 2), b1 = random_observable(rng, 2), b2 = random_observable(rng, 2);
  const auto r = bell_form_bound_right(rho, t, a, b1, b2);
  const double norm = trace_norm(t.op());
  const TensorOperator sigma = (1.0 / norm) * partial_trace(absolute_value(t.op()), Slot{1});
  const double want = norm * (1.0 - (sigma * kron(b1.op(), b2.op())).trace().real());
  EXPECT_NEAR(r.rhs, want, 1e-10);
  EXPECT_NEAR(r.lhs, std::abs(direct_average(rho, a, b1) - direct_average(rho, a, b2)), 1e-12);
  EXPECT_NEAR(r.margin, r.rhs - r.lhs, 0.0);
}

TEST(BellFormBound, RequiresMatchingDilation) {
  const auto rho = werner_state(2);
  const auto a = pauli_z();
  EXPECT_THROW((void)bell_form_bound_right(rho, werner_dso(3), identity_observable(3), identity_observable(3),
                                          identity_observable(3)),
               ValidationError);
  // qubit Werner DSO has no LEFT role
  EXPECT_THROW((void)bell_form_bound_left(rho, werner_dso(2), a, a, a), ValidationError);
  EXPECT_NO_THROW((void)bell_form_bound_left(rho, mirror_dilation(werner_dso(2)), a, a, a));
}

TEST(BellFormBound, RandomConstructedPairsSatisfied) {
  for (std::uint64_t i = 0; i < 20; ++i) {
    Rng rng = sub_rng(56, i);
    const auto rho = random_state(rng, 2, 2);
    const auto right = profile_source(construct_t122(rho, random_density(rng, {2})));
    const auto left = profile_source(construct_t112(rho, random_density(rng, {2})));
    for (int k = 0; k < 50; ++k) {
      const auto a1 = random_observable(rng, 2), a2 = random_observable(rng, 2);
      const auto b1 = random_observable(rng, 2), b2 = random_observable(rng, 2);
      EXPECT_TRUE(bell_form_bound_right(rho, right, a1, b1, b2, k % 2 == 1).satisfied);
      EXPECT_TRUE(bell_form_bound_left(rho, left, a1, a2, b1, k % 2 == 1).satisfied);
    }
  }
}

TEST(BellFormBound, SymmetricStateLeftMirrorsRight) {
  const auto rho = werner_state(2);
  const auto right = profile_source(werner_dso(2));
  const auto left = profile_source(mirror_dilation(werner_dso(2)));
  Rng rng = sub_rng(57, 0);
  for (int k = 0; k < 20; ++k) {
    const auto x = random_observable(rng, 2), y = random_observable(rng, 2), z = random_observable(rng, 2);
    const auto r = bell_form_bound_right(rho, right, x, y, z);
    const auto l = bell_form_bound_left(rho, left, y, z, x);
    EXPECT_NEAR(r.lhs, l.lhs, 1e-12);
    EXPECT_NEAR(r.rhs, l.rhs, 1e-12);
  }
}

TEST(SingleProductBound, IdentityCaseAndBellClassSpecialization) {
  Rng rng = sub_rng(58, 0);
  const auto rho = random_state(rng, 2, 2);
  const auto p = profile_source(construct_t122(rho, random_density(rng, {2})));
  const auto w1 = random_observable(rng, 2);
  const auto r = single_product_bound(rho, p, w1, identity_observable(2));
  EXPECT_NEAR(r.rhs, p.trace_norm, 1e-10);
  EXPECT_TRUE(r.satisfied);

  const auto w = werner_state(3);
  const auto pw = profile_source(werner_dso(3));
  for (int k = 0; k < 50; ++k) {
    const auto a = random_observable(rng, 3), b = random_observable(rng, 3);
    const auto general = single_product_bound(w, pw, a, b, DilationRole::Right);
    const auto special = bell_class_product_bound(w, a, b, DilationRole::Right);
    EXPECT_EQ(special.eq, "eq34");
    EXPECT_NEAR(general.rhs, special.rhs, 1e-10);
    EXPECT_NEAR(special.rhs, 0.5 * (1.0 + direct_average(w, b, b)), 1e-12);
    EXPECT_TRUE(general.satisfied);
    EXPECT_TRUE(bell_class_product_bound(w, a, b, DilationRole::Left).satisfied);
  }
}

TEST(ChshFormBound, DsoReducesToTwoAndDiagnosticBelowBound) {
  const auto rho = werner_state(3);
  const auto p = profile_source(werner_dso(3));
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = sub_rng(59, i);
    const auto k = i % 2 == 0 ? ConstraintKind::First : ConstraintKind::Second;
    const auto g = random_coefficients(rng, k);
    const ObservableQuad w{random_observable(rng, 3), random_observable(rng, 3), random_observable(rng, 3),
                           random_observable(rng, 3)};
    const auto r = chsh_form_bound(rho, p, g, w);
    EXPECT_EQ(r.eq, k == ConstraintKind::First ? "eq35" : "eq36");
    EXPECT_NEAR(r.rhs, 2.0, 1e-10);
    EXPECT_TRUE(r.satisfied);
    EXPECT_LE(r.context["intermediate_bound"].get<double>(), r.rhs + 1e-12);
  }
}

TEST(ChshFormBound, ConstraintMustMatchKind) {
  const auto rho = werner_state(2);
  const auto p = profile_source(werner_dso(2));  // RIGHT only
  const ObservableQuad w{pauli_z(), pauli_z(), pauli_z(), pauli_z()};
  EXPECT_NO_THROW((void)chsh_form_bound(rho, p, CoefficientQuad::chsh(ConstraintKind::First), w));
  EXPECT_THROW((void)chsh_form_bound(rho, p, CoefficientQuad{1, 1, -1, 1, ConstraintKind::Second}, w), ValidationError);
}

TEST(ChshClassical, BoundaryAndNegativeControl) {
  Rng rng = sub_rng(60, 0);
  const auto rho = random_state(rng, 2, 2);
  const auto id = identity_observable(2);
  const auto r = chsh_classical(rho, {id, id, id, id});
  EXPECT_NEAR(r.lhs, 2.0, 1e-12);
  EXPECT_NEAR(r.margin, 0.0, 1e-12);
  EXPECT_TRUE(r.satisfied);

  const auto v = chsh_classical(singlet_state(), canonical_violation_observables());
  EXPECT_NEAR(v.lhs, 2.0 * std::sqrt(2.0), 1e-10);
  EXPECT_FALSE(v.satisfied);
}

TEST(ChshClassical, MonotoneUnderObservableScaling) {
  for (std::uint64_t i = 0; i < 200; ++i) {
    Rng rng = sub_rng(61, i);
    const auto rho = werner_state(2);
    ObservableQuad w{random_observable(rng, 2), random_observable(rng, 2), random_observable(rng, 2),
                     random_observable(rng, 2)};
    ASSERT_TRUE(chsh_classical(rho, w).satisfied);
    const double s = uniform(rng, 0.0, 1.0);
    w.a1 = Observable(s * w.a1.op());
    w.b2 = Observable(s * w.b2.op());
    EXPECT_TRUE(chsh_classical(rho, w).satisfied);
  }
}

TEST(ChshExtended, ReducesToClassical) {
  Rng rng = sub_rng(62, 0);
  const auto rho = random_state(rng, 2, 2);
  const ObservableQuad w{random_observable(rng, 2), random_observable(rng, 2), random_observable(rng, 2),
                         random_observable(rng, 2)};
  EXPECT_NEAR(chsh_extended(rho, CoefficientQuad::chsh(), w).lhs, chsh_classical(rho, w).lhs, 0.0);
}

TEST(ChshExtended, SymmetricSeparableBellClassSatisfied) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng = sub_rng(63, i);
    const auto rho = separable_state(random_separable(rng, 2, 2, 3, true));
    const ObservableQuad w{random_observable(rng, 2), random_observable(rng, 2), random_observable(rng, 2),
                           random_observable(rng, 2)};
    for (auto k : {ConstraintKind::First, ConstraintKind::Second}) {
      EXPECT_TRUE(chsh_extended(rho, random_coefficients(rng, k), w).satisfied);
    }
  }
}

TEST(BellPerfectCorrelation, EqualObservablesAndSides) {
  const auto rho = werner_state(3);
  Rng rng = sub_rng(64, 0);
  const auto x = random_observable(rng, 3), y = random_observable(rng, 3), z = random_observable(rng, 3);
  const auto same = bell_perfect_correlation(rho, x, y, y, BellSide::Right);
  EXPECT_NEAR(same.lhs, 0.0, 1e-15);
  EXPECT_GE(same.rhs, -1e-12);

  const auto r = bell_perfect_correlation(rho, x, y, z, BellSide::Right);
  EXPECT_NEAR(r.lhs, std::abs(direct_average(rho, x, y) - direct_average(rho, x, z)), 1e-12);
  EXPECT_NEAR(r.rhs, 1.0 - direct_average(rho, y, z), 1e-12);
  const auto l = bell_perfect_correlation(rho, x, y, z, BellSide::Left);
  EXPECT_NEAR(l.lhs, std::abs(direct_average(rho, y, x) - direct_average(rho, z, x)), 1e-12);
  EXPECT_NEAR(l.rhs, 1.0 - direct_average(rho, y, z), 1e-12);
}

TEST(BellPerfectCorrelation, WernerWithoutPerfectCorrelations) {
  const auto rho = werner_state(3);
  int imperfect = 0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    Rng rng = sub_rng(65, i);
    const auto x = random_observable(rng, 3), y = random_observable(rng, 3), z = random_observable(rng, 3);
    const auto r = bell_perfect_correlation(rho, x, y, z, i % 2 ? BellSide::Left : BellSide::Right);
    EXPECT_TRUE(r.satisfied);
    imperfect += std::abs(product_average(rho, y, z) - 1.0) > 1e-3 ? 1 : 0;
  }
  EXPECT_GE(imperfect, 990);
}

TEST(SufficientCondition, BellClassPlusAlways) {
  const auto rho = werner_state(3);
  const auto p = profile_source(werner_dso(3));
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng = sub_rng(66, i);
    const auto c =
        sufficient_condition_check(rho, p, random_observable(rng, 3), random_observable(rng, 3), 20, i);
    EXPECT_TRUE(c.sign == SignResult::Plus || c.sign == SignResult::Both);
    EXPECT_EQ(c.implied.size(), c.sign == SignResult::Both ? 40U : 20U);
    for (const auto& r : c.implied) EXPECT_TRUE(r.satisfied);
  }
}

TEST(SufficientCondition, ZeroObservableGivesBoth) {
  const auto rho = werner_state(3);
  const auto p = profile_source(werner_dso(3));
  const Observable zero(TensorOperator::zeros({3}), "0");
  const auto c = sufficient_condition_check(rho, p, random_observable(3, 1), zero);
  EXPECT_EQ(c.sign, SignResult::Both);
}

TEST(SufficientCondition, ImpliedBellHoldsOverManyW1) {
  const auto rho = werner_state(3);
  const auto p = profile_source(werner_dso(3));
  Rng rng = sub_rng(67, 0);
  const auto c = sufficient_condition_check(rho, p, random_observable(rng, 3), random_observable(rng, 3), 1000, 5);
  ASSERT_NE(c.sign, SignResult::None);
  for (const auto& r : c.implied) ASSERT_TRUE(r.satisfied);
}

TEST(SufficientCondition, RejectsNonDso) {
  Rng rng = sub_rng(68, 0);
  for (std::uint64_t i = 0; i < 20; ++i) {
    const auto t = construct_t122(werner_state(2), random_density(rng, {2}));
    const auto p = profile_source(t);
    if (p.is_dso()) continue;
    EXPECT_THROW((void)sufficient_condition_check(werner_state(2), p, pauli_z(), pauli_z()), ValidationError);
    return;
  }
  FAIL() << "no non-positive construction found";
}

TEST(BellRestriction, Examples) {
  const TensorOperator e11 = TensorOperator::diagonal({1.0, 0.0, 0.0, 0.0}).with_dims({2, 2});
  EXPECT_EQ(bell_restriction_check(BipartiteState(e11), pauli_z()), SignResult::Plus);
  EXPECT_EQ(bell_restriction_check(singlet_state(), pauli_z()), SignResult::Minus);
  Rng rng = sub_rng(69, 0);
  EXPECT_EQ(bell_restriction_check(werner_state(3), random_observable(rng, 3)), SignResult::None);
}

TEST(BellSignForm, MinusUsesAnticorrelationRhs) {
  const auto rho = singlet_state();
  const auto r = bell_sign_form(rho, pauli_x(), pauli_z(), pauli_z(), SignResult::Minus);
  EXPECT_NEAR(r.rhs, 1.0 + product_average(rho, pauli_z(), pauli_z()), 1e-15);
  EXPECT_THROW((void)bell_sign_form(rho, pauli_x(), pauli_z(), pauli_z(), SignResult::Both), ValidationError);
}

TEST(SufficientConditionForward, SymmetricSeparableStates) {
  // xi_m rho_m (x) rho_m with diagonal factors; sz-type observables are then perfectly correlated
  const auto p0 = TensorOperator::diagonal({1.0, 0.0});
  const auto p1 = TensorOperator::diagonal({0.0, 1.0});
  const SeparableRepresentation rep{{{0.3, p0, p0}, {0.7, p1, p1}}};
  const auto rho = separable_state(rep);
  const auto prof = profile_source(separable_dso(rep));
  ASSERT_EQ(bell_restriction_check(rho, pauli_z()), SignResult::Plus);
  const auto c = sufficient_condition_check(rho, prof, pauli_z(), pauli_z());
  EXPECT_TRUE(c.sign == SignResult::Plus || c.sign == SignResult::Both);
  EXPECT_LE(c.delta_plus, 1e-8);
}

TEST(RandomObservable, ContractDeterminismAndCoverage) {
  double lo = 1.0, hi = -1.0;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    const auto w = random_observable(3, i);
    EXPECT_LE(operator_norm(w.op()), 1.0 + 1e-9);
    const auto s = hermitian_eigen(w.op());
    lo = std::min(lo, s.min_eigenvalue());
    hi = std::max(hi, s.max_eigenvalue());
  }
  EXPECT_LT(lo, -0.9);
  EXPECT_GT(hi, 0.9);
  EXPECT_EQ(max_abs_diff(random_observable(3, 17).op(), random_observable(3, 17).op()), 0.0);
  EXPECT_THROW((void)random_observable(1, 0), DomainError);
}

TEST(InequalityReport, SatisfiedIffMarginAboveTolerance) {
  EXPECT_TRUE(make_report("x", 1.0, 1.0 - 0.9e-8, 1e-8).satisfied);
  EXPECT_FALSE(make_report("x", 1.0, 1.0 - 1.1e-8, 1e-8).satisfied);
}
