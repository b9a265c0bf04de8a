#include <cmath>

#include <gtest/gtest.h>

#include "navier_bubble/errors.hpp"
#include "navier_bubble/expansions.hpp"

using namespace navier_bubble;

namespace {

const std::vector<double> kSweep{5, 10, 20, 40, 80};

FunctionalContext unit_context(int n) { return FunctionalContext(Dimension(n), KField::constant(1.0), 1e-12); }

}  // namespace

TEST(Energy, TendsToSobolevLevel) {
  const auto ctx = unit_context(5);
  const double S = ctx.constants.Sn;
  const double level = std::pow(S, 0.8);
  double prev = std::numeric_limits<double>::infinity();
  for (double lam : kSweep) {
    const double J = energy_direct(ctx, ctx.dim.origin(), lam, 0.0);
    EXPECT_GT(J, level);
    EXPECT_LT(J - level, prev);
    prev = J - level;
  }
  // first correction: level * c1 H(0,0) / (S lambda), H(0,0) = 1.2
  EXPECT_NEAR(prev * 80.0 / (level * ctx.constants.c1 * 1.2 / S), 1.0, 0.02);
}

TEST(Energy, HomogeneousInK) {
  const Dimension d(5);
  const FunctionalContext a(d, KField::quadratic(1.0, 0.3), 1e-12);
  const FunctionalContext b(d, KField::quadratic(2.5, 0.75), 1e-12);
  Point x = d.origin();
  x[2] = 0.2;
  const double ja = energy_direct(a, x, 20.0, 0.0), jb = energy_direct(b, x, 20.0, 0.0);
  EXPECT_NEAR(jb * std::pow(2.5, 2.0 / d.p_plus_one()) / ja, 1.0, 1e-9);
}

TEST(Energy, CloseToTruncatedExpansionAtLambda40) {
  const auto ctx = unit_context(5);
  const double direct = energy_direct(ctx, ctx.dim.origin(), 40.0, 0.0);
  const double exp = energy_expansion(ctx, ctx.dim.origin(), 40.0, 0.0);
  EXPECT_LT(std::abs(direct / exp - 1.0), 0.02);
}

TEST(Energy, WarnsWhenLambdaDIsSmall) {
  const auto ctx = unit_context(5);
  Point x = ctx.dim.origin();
  x[0] = 0.8;
  std::vector<std::string> w;
  energy_direct(ctx, x, 20.0, 0.0, &w);
  ASSERT_EQ(w.size(), 1u);
  EXPECT_NE(w[0].find("lambda-d-small"), std::string::npos);
  EXPECT_THROW(energy_direct(ctx, x, 20.0, -0.1), UsageError);
}

TEST(EnergyExpansion, TermIsolation) {
  const auto ctx = unit_context(5);
  const UniversalConstants& c = ctx.constants;
  const double p = ctx.dim.p();
  const double pre = std::pow(c.Sn, (p - 1) / (p + 1));
  for (double lam : {10.0, 50.0}) {
    EXPECT_NEAR(energy_expansion(ctx, ctx.dim.origin(), lam, 0.0), pre * (1.0 + c.c1 * 1.2 / (c.Sn * lam)), 1e-10);
  }
  // at lambda = e the logarithm is one
  const double eps = 1e-3, lam = std::exp(1.0);
  const double q = p + 1 - eps;
  const double pre_eps = std::pow(c.Sn, (p - 1 - eps) / q);
  const double expected = pre_eps * (1.0 + 0.2 * eps * (0.5 + c.c3 / c.Sn) + c.c1 * 1.2 / (c.Sn * lam));
  EXPECT_NEAR(energy_expansion(ctx, ctx.dim.origin(), lam, eps), expected, 1e-10);
}

TEST(EnergyExpansion, LaplacianTermSign) {
  const Dimension d(6);
  const FunctionalContext flat(d, KField::constant(1.0));
  const FunctionalContext bump(d, KField::quadratic(1.0, 0.5));
  // the K(x)^{-2/(p+1)} prefactor is 1 at x = 0 for both
  EXPECT_LT(energy_expansion(bump, d.origin(), 30.0, 0.0), energy_expansion(flat, d.origin(), 30.0, 0.0));
}

TEST(ProjectedNorm, ResidualSlope) {
  const auto ctx = unit_context(5);
  const auto reps = expansion_sweep(ctx, Formula::eq212, ctx.dim.origin(), kSweep, 0.0);
  ASSERT_TRUE(reps[0].fitted_slope);
  EXPECT_NEAR(*reps[0].fitted_slope, -3.0, 0.3);
  EXPECT_EQ(reps[0].claimed_next_order, -3.0);
  for (const auto& r : reps) EXPECT_DOUBLE_EQ(r.residual, std::abs(r.direct - r.expansion));
}

TEST(EnergyResidual, ResidualSlope) {
  const auto ctx = unit_context(5);
  const auto reps = expansion_sweep(ctx, Formula::prop24, ctx.dim.origin(), kSweep, 0.0);
  EXPECT_EQ(reps[0].claimed_next_order, -2.0);
  EXPECT_LE(*reps[0].fitted_slope, -2.0 + 0.3);
}

TEST(EnergyResidual, EpsilonTermTracked) {
  const auto ctx = unit_context(5);
  const double eps = 1e-3;
  for (double lam : {20.0, 80.0}) {
    const auto r0 = prop24_check(ctx, ctx.dim.origin(), lam, 0.0);
    const auto r1 = prop24_check(ctx, ctx.dim.origin(), lam, eps);
    const double predicted = r1.expansion - r0.expansion;
    const double measured = r1.direct - r0.direct;
    EXPECT_GT(std::abs(predicted), 0.0);
    EXPECT_LE(std::abs(measured - predicted), 2.0 * r0.residual);
    EXPECT_EQ(r1.claimed_next_order, 0.0);
  }
}

TEST(NormalizedQuotient, HomogeneityInK) {
  const Dimension d(5);
  const FunctionalContext a(d, KField::constant(1.0), 1e-12);
  const FunctionalContext b(d, KField::constant(3.0), 1e-12);
  for (double lam : {10.0, 80.0}) {
    const auto ra = l_eps_expansion_check(a, d.origin(), lam, 0.0);
    const auto rb = l_eps_expansion_check(b, d.origin(), lam, 0.0);
    EXPECT_NEAR(3.0 * rb.direct / ra.direct, 1.0, 1e-10);
    EXPECT_NEAR(rb.expansion, 1.0 / 3.0, 1e-15);
  }
}

TEST(NormalizedQuotient, EnvelopeRatioBoundedAndConverging) {
  const auto ctx = unit_context(5);
  const auto reps = expansion_sweep(ctx, Formula::lemma25, ctx.dim.origin(), {20, 40, 80, 160}, 0.0);
  // leading residual p c1 H(0,0) / (S lambda) against an envelope ~ 1/lambda
  const double limit = ctx.dim.p() * ctx.constants.c1 * 1.2 / ctx.constants.Sn;
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& r : reps) {
    ASSERT_TRUE(r.envelope);
    const double ratio = r.residual / *r.envelope;
    EXPECT_LT(ratio, prev);
    EXPECT_GT(ratio, limit);
    prev = ratio;
  }
  EXPECT_LT(prev / limit, 1.1);
  EXPECT_NEAR(*reps[0].fitted_slope, -1.0, 0.3);
}

TEST(NormalizedQuotient, LaplacianTermSlopeInDimensionEight) {
  const Dimension d(8);
  const FunctionalContext ctx(d, KField::quadratic(1.0, 0.25), 1e-12);
  const auto reps = expansion_sweep(ctx, Formula::lemma25, d.origin(), {40, 80, 160, 320}, 0.0);
  EXPECT_EQ(reps[0].claimed_next_order, -2.0);
  EXPECT_NEAR(*reps[0].fitted_slope, -2.0, 0.3);
  for (const auto& r : reps) EXPECT_LT(r.residual, *r.envelope);
}

TEST(LambdaGradient, SlopeForConstantK) {
  const auto ctx = unit_context(5);
  const auto reps = expansion_sweep(ctx, Formula::lemma26, ctx.dim.origin(), {10, 20, 40, 80}, 0.0);
  EXPECT_NEAR(*reps[0].fitted_slope, -3.0, 0.4);
  const double pre = std::pow(ctx.constants.Sn, -0.2);
  for (const auto& r : reps) {
    EXPECT_LT(r.expansion, 0.0);
    EXPECT_NEAR(r.expansion, -pre * ctx.constants.c1 * 1.2 / (r.lambda * r.lambda), 1e-12);
  }
}

TEST(LambdaGradient, StepHalvingBelowResidual) {
  const auto ctx = unit_context(5);
  for (double lam : {10.0, 40.0}) {
    const auto r = grad_lambda_check(ctx, ctx.dim.origin(), lam, 0.0);
    const double coarse = grad_lambda_direct(ctx, ctx.dim.origin(), lam, 0.0, 2e-4);
    EXPECT_LT(std::abs(coarse - r.direct), r.residual);
  }
}

TEST(LambdaGradient, CancellationAtBalanceRate) {
  const auto ctx = unit_context(5);
  const UniversalConstants& c = ctx.constants;
  const double eps = 1e-4;
  const double tstar = 10.0 * c.c1 / c.Sn;
  const double lam = tstar * 1.2 / eps;
  const double pre = std::pow(c.Sn, -2.0 / (ctx.dim.p_plus_one() - eps));
  const double h_term = pre * c.c1 * 1.2 / (lam * lam);
  const double e_term = pre * c.Sn * eps / (10.0 * lam);
  const double g = grad_lambda_expansion(ctx, ctx.dim.origin(), lam, eps);
  EXPECT_LE(std::abs(g), 0.05 * h_term);
  EXPECT_LE(std::abs(g), 0.05 * e_term);
}

TEST(BubbleIntegrals, ItemOneTailSlope) {
  const auto ctx = unit_context(5);
  const auto r = appendix_integral_checks(ctx, 1, ctx.dim.origin(), 40.0, 0.0, kSweep);
  EXPECT_EQ(r.claimed_next_order, -5.0);
  EXPECT_NEAR(*r.fitted_slope, -5.0, 0.5);
  EXPECT_NEAR(r.direct / ctx.constants.Sn, 1.0, 1e-6);
}

TEST(BubbleIntegrals, ItemTwoLeadingTerm) {
  const auto ctx = unit_context(5);
  const auto r = appendix_integral_checks(ctx, 2, ctx.dim.origin(), 80.0, 0.0);
  EXPECT_NEAR(r.direct / (ctx.constants.c1 * 1.2 / 80.0), 1.0, 0.10);
}

TEST(BubbleIntegrals, ItemThreeVanishingLeadingTerms) {
  const auto ctx = unit_context(5);
  const auto r = appendix_integral_checks(ctx, 3, ctx.dim.origin(), 40.0, 0.0, kSweep);
  EXPECT_EQ(r.expansion, 0.0);
  // decays at least at the stated rate; the exterior tail alone gives lambda^{-(n+1)}
  EXPECT_LE(*r.fitted_slope, r.claimed_next_order + 0.5);
}

TEST(BubbleIntegrals, ItemsFourAndFiveSlopes) {
  const auto ctx = unit_context(5);
  for (int item : {4, 5}) {
    const auto r = appendix_integral_checks(ctx, item, ctx.dim.origin(), 40.0, 0.0, kSweep);
    EXPECT_EQ(r.claimed_next_order, -4.0);
    EXPECT_NEAR(*r.fitted_slope, -4.0, 0.5) << item;
    EXPECT_LT(r.direct, 0.0);
  }
}

TEST(BubbleIntegrals, ItemThreeWithLaplacian) {
  const Dimension d(6);
  const FunctionalContext ctx(d, KField::quadratic(1.0, 0.5), 1e-12);
  const auto r = appendix_integral_checks(ctx, 3, d.origin(), 40.0, 0.0);
  EXPECT_LT(r.expansion, 0.0);
  EXPECT_LT(r.residual, 0.05 * std::abs(r.expansion));
}

TEST(Formula, ParseRoundTrip) {
  for (Formula f : {Formula::eq212, Formula::prop24, Formula::lemma25, Formula::lemma26, Formula::appx1,
                    Formula::appx5}) {
    EXPECT_EQ(parse_formula(formula_id(f)), f);
  }
  EXPECT_THROW(parse_formula("lemma99"), UsageError);
  EXPECT_THROW(appendix_integral_checks(unit_context(5), 6, Point::Zero(5), 10.0, 0.0), UsageError);
}
