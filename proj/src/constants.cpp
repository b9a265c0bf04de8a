#include "navier_bubble/constants.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "navier_bubble/bubble.hpp"
#include "navier_bubble/errors.hpp"
#include "navier_bubble/quadrature.hpp"
#include "navier_bubble/special.hpp"

namespace navier_bubble {

double master_integral(const Dimension& dim, double s) {
  const double h = 0.5 * dim.n();
  if (!(s > h)) throw UsageError("master integral requires s > n/2");
  return std::pow(std::numbers::pi, h) * std::exp(log_gamma(s - h) - log_gamma(s));
}

double master_integral_ds(const Dimension& dim, double s) {
  const double h = 0.5 * dim.n();
  return master_integral(dim, s) * (digamma(s - h) - digamma(s));
}

UniversalConstants closed_form_constants(const Dimension& dim) {
  const double n = dim.n();
  UniversalConstants k(dim);
  k.method = ConstantsMethod::closed_form;
  k.c0 = bubble_c0(dim);
  const double P = std::pow(k.c0, dim.p_plus_one());
  const double In = master_integral(dim, n);
  k.Sn = P * In;
  k.c1 = P * master_integral(dim, 0.5 * (n + 4.0));
  k.c2 = P * (master_integral(dim, n - 1.0) - In);
  k.c3 = P * (std::log(k.c0) * In + dim.alpha() * master_integral_ds(dim, n));
  return k;
}

UniversalConstants quadrature_constants(const Dimension& dim, double tol) {
  QuadratureSpec spec(dim);
  spec.tol = tol;
  spec.radial_extent = std::numeric_limits<double>::infinity();
  spec.max_evals = 200'000;
  const double c0 = bubble_c0(dim);
  const double p1 = dim.p_plus_one();
  const double area = unit_sphere_area(dim.n());
  auto dp1 = [&](double r) { return std::pow(profile::value(dim, c0, 1.0, r * r), p1); };

  UniversalConstants k(dim);
  k.method = ConstantsMethod::quadrature;
  k.c0 = c0;
  auto run = [&](const std::function<double(double)>& f, double weight, const char* name) {
    const IntegralResult r = integrate_radial(f, weight, spec);
    if (!r.converged) {
      throw QuadratureNonconvergence(std::string("quadrature of ") + name + " did not reach tolerance",
                                     area * r.value, area * r.error_estimate);
    }
    k.error_estimate = std::max(k.error_estimate, r.error_estimate / std::abs(r.value));
    return area * r.value;
  };
  k.Sn = run(dp1, 0.0, "S_n");
  const double cp1 = std::pow(c0, p1);
  k.c1 = run([&](double r) { return cp1 * std::pow(1.0 + r * r, -0.5 * (dim.n() + 4.0)); }, 0.0, "c_1");
  k.c2 = run(dp1, 2.0, "c_2");
  k.c3 = run(
      [&](double r) {
        const double d = profile::value(dim, c0, 1.0, r * r);
        return std::pow(d, p1) * std::log(d);
      },
      0.0, "c_3");
  return k;
}

SobolevQuotient sobolev_quotient_check(const Dimension& dim, double lambda) {
  QuadratureSpec spec(dim);
  spec.tol = 1e-13;
  spec.radial_extent = std::numeric_limits<double>::infinity();
  spec.peak_rate = lambda;
  spec.max_evals = 200'000;
  const double c0 = bubble_c0(dim);
  const double p1 = dim.p_plus_one();
  const double area = unit_sphere_area(dim.n());
  const IntegralResult num = integrate_radial(
      [&](double r) {
        const double l = profile::laplacian(dim, c0, lambda, r * r);
        return l * l;
      },
      0.0, spec);
  const IntegralResult den =
      integrate_radial([&](double r) { return std::pow(profile::value(dim, c0, lambda, r * r), p1); }, 0.0, spec);
  if (!num.converged || !den.converged) {
    throw QuadratureNonconvergence("Sobolev quotient quadrature did not converge", num.value, num.error_estimate);
  }
  SobolevQuotient q;
  q.quotient = area * num.value / std::pow(area * den.value, 2.0 / p1);
  q.expected = std::pow(closed_form_constants(dim).Sn, 4.0 / dim.n());
  return q;
}

const char* to_string(ConstantsMethod m) { return m == ConstantsMethod::closed_form ? "closed_form" : "quadrature"; }

}  // namespace navier_bubble
