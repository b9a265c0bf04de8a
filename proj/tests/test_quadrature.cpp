#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "navier_bubble/bubble.hpp"
#include "navier_bubble/constants.hpp"
#include "navier_bubble/errors.hpp"
#include "navier_bubble/quadrature.hpp"
#include "navier_bubble/special.hpp"

using namespace navier_bubble;

TEST(Quadrature, KronrodRuleIntegratesPolynomialsExactly) {
  for (int deg = 0; deg <= 22; ++deg) {
    const IntegralResult r =
        adaptive_integrate([deg](double x) { return std::pow(x, deg); }, {0.0, 1.0}, 1e-300, 15);
    EXPECT_NEAR(r.value, 1.0 / (deg + 1), 1e-15) << "degree " << deg;
  }
}

TEST(Quadrature, GaussLegendreNodes) {
  std::vector<double> x, w;
  gauss_legendre(12, x, w);
  double sw = 0.0, s10 = 0.0;
  for (int i = 0; i < 12; ++i) {
    sw += w[i];
    s10 += w[i] * std::pow(x[i], 22);
  }
  EXPECT_NEAR(sw, 2.0, 1e-14);
  EXPECT_NEAR(s10, 2.0 / 23.0, 1e-14);
}

TEST(Quadrature, BallVolumeN5) {
  QuadratureSpec spec(Dimension(5));
  const IntegralResult r = integrate_ball([](const Point&) { return 1.0; }, spec);
  EXPECT_NEAR(r.value / (8.0 * std::numbers::pi * std::numbers::pi / 15.0), 1.0, 1e-10);
}

TEST(Quadrature, BallVolumeOffCenterPeak) {
  for (int n : {5, 6, 7, 8, 10}) {
    QuadratureSpec spec{Dimension(n)};
    Point c = Point::Zero(n);
    c[1] = 0.6;
    spec.peak_center = c;
    spec.peak_rate = 30.0;
    const IntegralResult r = integrate_ball([](const Point&) { return 1.0; }, spec);
    EXPECT_NEAR(r.value / unit_ball_volume(n), 1.0, 1e-10) << "n=" << n;
  }
}

TEST(Quadrature, BallMomentsUseTransverseRule) {
  // int_B y_2^2 |y|^2 dy = |S^{n-1}| / (n (n+4)) over a peak centered off-axis
  const int n = 6;
  QuadratureSpec spec{Dimension(n)};
  Point c = Point::Zero(n);
  c[0] = 0.3;
  spec.peak_center = c;
  const IntegralResult r = integrate_ball([](const Point& y) { return y[1] * y[1] * y.squaredNorm(); }, spec);
  EXPECT_NEAR(r.value, unit_sphere_area(n) / (n * (n + 4.0)), 1e-10);
}

TEST(Quadrature, BubbleCriticalPowerApproachesSnFromBelow) {
  const Dimension d(5);
  const Bubble b(d, d.origin(), 50.0);
  QuadratureSpec spec(d);
  spec.peak_center = d.origin();
  spec.peak_rate = 50.0;
  const double p1 = d.p_plus_one();
  const IntegralResult r = integrate_ball([&](const Point& y) { return std::pow(eval_delta(b, y), p1); }, spec);
  const double ratio = r.value / closed_form_constants(d).Sn;
  EXPECT_GT(ratio, 0.99);
  EXPECT_LT(ratio, 1.0);
}

TEST(Quadrature, OddIntegrandVanishes) {
  const Dimension d(5);
  QuadratureSpec spec(d);
  const IntegralResult r =
      integrate_ball([](const Point& y) { return y[0] * std::exp(-y.squaredNorm()); }, spec);
  EXPECT_LE(std::abs(r.value), std::max(r.error_estimate, 1e-15));
}

TEST(Quadrature, RadialMasterIntegral) {
  const Dimension d(5);
  QuadratureSpec spec(d);
  spec.radial_extent = std::numeric_limits<double>::infinity();
  spec.tol = 1e-13;
  const IntegralResult r = integrate_radial([](double r) { return std::pow(1.0 + r * r, -5.0); }, 0.0, spec);
  EXPECT_NEAR(r.value / (master_integral(d, 5.0) / unit_sphere_area(5)), 1.0, 1e-10);
}

TEST(Quadrature, RadialUnitInterval) {
  for (int n = 5; n <= 10; ++n) {
    QuadratureSpec spec{Dimension(n)};
    const IntegralResult r = integrate_radial([](double) { return 1.0; }, 0.0, spec);
    EXPECT_NEAR(r.value * unit_sphere_area(n), unit_sphere_area(n) / n, 1e-13);
  }
}

TEST(Quadrature, BallAndRadialAgreeOnCenteredBubble) {
  const Dimension d(5);
  const double lam = 20.0;
  const double c0 = bubble_c0(d);
  const double p1 = d.p_plus_one();
  QuadratureSpec spec(d);
  spec.peak_center = d.origin();
  spec.peak_rate = lam;
  const IntegralResult rad = integrate_radial(
      [&](double r) { return std::pow(profile::value(d, c0, lam, r * r), p1); }, 0.0, spec);
  const IntegralResult ball = integrate_ball_axisymmetric(
      [&](double r, double) { return std::pow(profile::value(d, c0, lam, r * r), p1); }, spec);
  const double area = unit_sphere_area(5);
  EXPECT_LE(std::abs(area * rad.value - ball.value), 2.0 * (area * rad.error_estimate + ball.error_estimate) + 1e-12);
}

TEST(Quadrature, PeakSubstitutionAgreesWithPlainRule) {
  const Dimension d(6);
  const double c0 = bubble_c0(d);
  const double p1 = d.p_plus_one();
  Point x = Point::Zero(6);
  x[0] = 0.25;
  for (double lam : {5.0, 20.0, 100.0}) {
    QuadratureSpec with(d), without(d);
    with.peak_center = x;
    with.peak_rate = lam;
    without.peak_center = x;
    without.tol = 1e-12;
    auto g = [&](double r, double) { return std::pow(profile::value(d, c0, lam, r * r), p1); };
    const IntegralResult a = integrate_ball_axisymmetric(g, with);
    const IntegralResult b = integrate_ball_axisymmetric(g, without);
    EXPECT_LE(std::abs(a.value - b.value), a.error_estimate + b.error_estimate + 1e-12 * a.value) << lam;
  }
}

TEST(Quadrature, RefinementNeverIncreasesDiscrepancy) {
  const Dimension d(7);
  const double exact_vol = unit_ball_volume(7);
  const double exact_I = master_integral(d, 6.0) / unit_sphere_area(7);
  double prev_vol = std::numeric_limits<double>::infinity();
  double prev_I = std::numeric_limits<double>::infinity();
  const double floor = 1e-15;
  for (double tol : {1e-4, 5e-5, 2.5e-5, 1.25e-5, 6.25e-6, 1e-8, 5e-9, 1e-12}) {
    QuadratureSpec spec(d);
    spec.tol = tol;
    Point c = Point::Zero(7);
    c[0] = 0.5;
    spec.peak_center = c;
    const double vol = std::abs(integrate_ball([](const Point&) { return 1.0; }, spec).value / exact_vol - 1.0);
    QuadratureSpec rs(d);
    rs.tol = tol;
    rs.radial_extent = std::numeric_limits<double>::infinity();
    const double I =
        std::abs(integrate_radial([](double r) { return std::pow(1.0 + r * r, -6.0); }, 0.0, rs).value / exact_I - 1.0);
    EXPECT_LE(vol, std::max(prev_vol, floor)) << tol;
    EXPECT_LE(I, std::max(prev_I, floor)) << tol;
    prev_vol = vol;
    prev_I = I;
  }
}

TEST(Quadrature, BudgetExhaustionIsFlagged) {
  QuadratureSpec spec{Dimension(5)};
  spec.tol = 1e-20;
  spec.max_evals = 1000;
  spec.radial_extent = std::numeric_limits<double>::infinity();
  const IntegralResult r = integrate_radial([](double r) { return std::pow(1.0 + r * r, -5.0); }, 0.0, spec);
  EXPECT_FALSE(r.converged);
  EXPECT_GT(r.value, 0.0);
}

TEST(Quadrature, SpecValidation) {
  QuadratureSpec spec{Dimension(5)};
  spec.max_evals = 10;
  EXPECT_THROW(spec.validate(), UsageError);
  spec.max_evals = 1000;
  spec.tol = 0.0;
  EXPECT_THROW(spec.validate(), UsageError);
}

TEST(Quadrature, FixedNodesReproduceVolume) {
  for (int n : {5, 8}) {
    QuadratureSpec spec{Dimension(n)};
    Point c = Point::Zero(n);
    c[0] = 0.4;
    spec.peak_center = c;
    spec.peak_rate = 50.0;
    const AxisymmetricNodes nodes = axisymmetric_nodes(spec);
    double v = 0.0;
    for (double w : nodes.w) v += w;
    EXPECT_NEAR(v / unit_ball_volume(n), 1.0, 1e-12);
  }
}
