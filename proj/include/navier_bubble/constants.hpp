#pragma once

#include "navier_bubble/dimension.hpp"

namespace navier_bubble {

enum class ConstantsMethod { closed_form, quadrature };

struct UniversalConstants {
  Dimension dim;
  double c0 = 0.0;
  double Sn = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;
  ConstantsMethod method = ConstantsMethod::closed_form;
  // largest quadrature error estimate over the four integrals (0 for closed forms)
  double error_estimate = 0.0;

  explicit UniversalConstants(Dimension d) : dim(d) {}
};

// I(s) = int_{R^n} (1+|y|^2)^{-s} dy = pi^{n/2} Gamma(s - n/2) / Gamma(s), s > n/2.
double master_integral(const Dimension& dim, double s);
// dI/ds = I(s) (psi(s - n/2) - psi(s))
double master_integral_ds(const Dimension& dim, double s);

UniversalConstants closed_form_constants(const Dimension& dim);

// Radial quadrature over [0, inf) through r = tan(theta). Throws
// QuadratureNonconvergence when the budget is exhausted before tol is met.
UniversalConstants quadrature_constants(const Dimension& dim, double tol = 1e-12);

struct SobolevQuotient {
  double quotient;
  double expected;
};

// |Delta delta_{0,lambda}|_2^2 / |delta_{0,lambda}|_{p+1}^2 over R^n, against S_n^{4/n}.
SobolevQuotient sobolev_quotient_check(const Dimension& dim, double lambda = 1.0);

const char* to_string(ConstantsMethod m);

}  // namespace navier_bubble
