#include <chrono>
#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "navier_bubble/constants.hpp"
#include "navier_bubble/errors.hpp"

using namespace navier_bubble;

namespace {

// Reference values from a 30-digit evaluation of the Gamma/digamma closed forms.
struct Reference {
  int n;
  double c0, Sn, c1, c2, c3;
};

const Reference kReference[] = {
    {5, 1.7891578669708494, 325.67638114557917, 505.49521951791854, 542.7939685759653, 58.70789973905893},
    {6, 4.426727678801286, 3888.617302542933, 9721.543256357332, 5832.9259538144, 2738.859344151589},
    {7, 13.055302170075995, 40857.70150791822, 169111.6211341961, 57200.78211108551, 57803.54786036221},
    {8, 43.81780460041329, 427486.7537949364, 2992407.276564555, 569982.3383932485, 966544.3926837533},
    {9, 163.0476427265035, 4588074.318595484, 55244272.48834379, 5898952.695337051, 14748897.415525809},
    {10, 661.1756678384927, 50962858.65641331, 1070220031.7846794, 63703573.32051663, 216954740.00789753},
};

}  // namespace

TEST(Constants, ClosedFormMatchesHighPrecisionReference) {
  for (const Reference& ref : kReference) {
    const UniversalConstants k = closed_form_constants(Dimension(ref.n));
    EXPECT_NEAR(k.c0 / ref.c0, 1.0, 1e-13) << ref.n;
    EXPECT_NEAR(k.Sn / ref.Sn, 1.0, 1e-12) << ref.n;
    EXPECT_NEAR(k.c1 / ref.c1, 1.0, 1e-12) << ref.n;
    EXPECT_NEAR(k.c2 / ref.c2, 1.0, 1e-12) << ref.n;
    EXPECT_NEAR(k.c3 / ref.c3, 1.0, 1e-11) << ref.n;
  }
}

TEST(Constants, SnN5GammaForm) {
  const double expected = std::pow(105.0, 1.25) * std::pow(std::numbers::pi, 2.5) * std::tgamma(2.5) / std::tgamma(5.0);
  EXPECT_NEAR(closed_form_constants(Dimension(5)).Sn / expected, 1.0, 1e-13);
}

TEST(Constants, PositivityOfClosedForms) {
  for (int n = 5; n <= 16; ++n) {
    const UniversalConstants k = closed_form_constants(Dimension(n));
    EXPECT_GT(k.c0, 0.0);
    EXPECT_GT(k.Sn, 0.0);
    EXPECT_GT(k.c1, 0.0);
    EXPECT_GT(k.c2, 0.0);
    EXPECT_TRUE(std::isfinite(k.c3));
  }
}

TEST(Constants, QuadratureAgreesWithClosedForm) {
  const auto start = std::chrono::steady_clock::now();
  for (int n = 5; n <= 10; ++n) {
    const Dimension d(n);
    const UniversalConstants a = closed_form_constants(d);
    const UniversalConstants b = quadrature_constants(d, 1e-10);
    EXPECT_EQ(b.method, ConstantsMethod::quadrature);
    EXPECT_NEAR(b.Sn / a.Sn, 1.0, 1e-8) << n;
    EXPECT_NEAR(b.c1 / a.c1, 1.0, 1e-8) << n;
    EXPECT_NEAR(b.c2 / a.c2, 1.0, 1e-8) << n;
    EXPECT_NEAR(b.c3 / a.c3, 1.0, 1e-8) << n;
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 10.0);
}

TEST(Constants, UnreachableToleranceReportsBestEstimate) {
  const Dimension d(5);
  try {
    quadrature_constants(d, 1e-20);
    FAIL() << "expected nonconvergence";
  } catch (const QuadratureNonconvergence& e) {
    EXPECT_NEAR(e.best_estimate() / closed_form_constants(d).Sn, 1.0, 1e-10);
    EXPECT_GE(e.error_estimate(), 0.0);
  }
}

TEST(Constants, MasterIntegralDecreasing) {
  for (int n = 5; n <= 10; ++n) {
    const Dimension d(n);
    double prev = std::numeric_limits<double>::infinity();
    for (double s = 0.5 * n + 0.25; s < 3.0 * n; s += 0.25) {
      const double I = master_integral(d, s);
      EXPECT_LT(I, prev) << "n=" << n << " s=" << s;
      prev = I;
    }
  }
  EXPECT_THROW(master_integral(Dimension(5), 2.5), UsageError);
}

TEST(Constants, MasterIntegralDerivativeMatchesFiniteDifference) {
  const Dimension d(7);
  const double h = 1e-5;
  for (double s : {5.0, 7.0, 9.5}) {
    const double fd = (master_integral(d, s + h) - master_integral(d, s - h)) / (2 * h);
    EXPECT_NEAR(master_integral_ds(d, s) / fd, 1.0, 1e-8);
  }
}

TEST(Constants, SobolevQuotient) {
  for (int n : {5, 6}) {
    const SobolevQuotient q = sobolev_quotient_check(Dimension(n));
    EXPECT_NEAR(q.quotient / q.expected, 1.0, 1e-6) << n;
  }
  EXPECT_NEAR(sobolev_quotient_check(Dimension(5)).expected, 102.38327344058294, 1e-10);
}

TEST(Constants, SobolevQuotientScaleInvariant) {
  const Dimension d(5);
  const double a = sobolev_quotient_check(d, 1.0).quotient;
  const double b = sobolev_quotient_check(d, 7.0).quotient;
  EXPECT_NEAR(a / b, 1.0, 1e-12);
}
