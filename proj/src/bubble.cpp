#include "navier_bubble/bubble.hpp"

#include <cmath>
#include <limits>

#include "navier_bubble/errors.hpp"

namespace navier_bubble {

double bubble_c0(const Dimension& dim) {
  const double n = dim.n();
  return std::pow((n - 4.0) * (n - 2.0) * n * (n + 2.0), (n - 4.0) / 8.0);
}

Bubble::Bubble(Dimension dim, Point center, double rate)
    : dim_(dim), center_(std::move(center)), rate_(rate), c0_(bubble_c0(dim)) {
  if (center_.size() != dim_.n()) throw UsageError("bubble center has wrong dimension");
  if (!(rate_ > 0.0) || !std::isfinite(rate_)) throw UsageError("bubble rate must be positive and finite");
}

double Bubble::peak() const { return c0_ * std::pow(rate_, dim_.alpha()); }

namespace profile {

double value(const Dimension& dim, double c0, double lambda, double s2) {
  const double a = dim.alpha();
  const double z2 = lambda * lambda * s2;
  if (z2 > 1e12) {
    const double logv = std::log(c0) + a * std::log(lambda) - a * (std::log(z2) + std::log1p(1.0 / z2));
    return std::exp(logv);
  }
  return c0 * std::pow(lambda, a) * std::pow(1.0 + z2, -a);
}

double d_lambda(const Dimension& dim, double c0, double lambda, double s2) {
  const double a = dim.alpha();
  const double u = 1.0 + lambda * lambda * s2;
  return c0 * a * std::pow(lambda, a - 1.0) * std::pow(u, -a) * (2.0 / u - 1.0);
}

double radial_d_x(const Dimension& dim, double c0, double lambda, double s2) {
  const double a = dim.alpha();
  const double u = 1.0 + lambda * lambda * s2;
  return 2.0 * a * c0 * std::pow(lambda, a + 2.0) * std::pow(u, -a - 1.0);
}

double laplacian(const Dimension& dim, double c0, double lambda, double s2) {
  const double n = dim.n();
  const double a = dim.alpha();
  const double u = 1.0 + lambda * lambda * s2;
  const double um = std::pow(u, -a - 1.0);
  return c0 * std::pow(lambda, a + 2.0) * um * (-2.0 * (n - 4.0) - (n - 4.0) * (n - 2.0) / u);
}

double d_lambda_laplacian(const Dimension& dim, double c0, double lambda, double s2) {
  const double n = dim.n();
  const double nu = 0.5 * (n - 2.0);
  const double u = 1.0 + lambda * lambda * s2;
  const double u0 = std::pow(u, -nu);
  const double u1 = u0 / u;
  const double u2 = u1 / u;
  const double first = -2.0 * (n - 4.0) * ((1.0 - nu) * u0 + 2.0 * nu * u1);
  const double second = -(n - 4.0) * (n - 2.0) * (-(nu + 1.0) * u1 + 2.0 * (nu + 1.0) * u2);
  return c0 * std::pow(lambda, nu) * (first + second);
}

}  // namespace profile

double eval_delta(const Bubble& b, const Point& y) {
  return profile::value(b.dim(), b.c0(), b.rate(), (y - b.center()).squaredNorm());
}

DeltaDerivs eval_delta_derivs(const Bubble& b, const Point& y) {
  const Point diff = y - b.center();
  const double s2 = diff.squaredNorm();
  DeltaDerivs d;
  d.d_lambda = profile::d_lambda(b.dim(), b.c0(), b.rate(), s2);
  d.d_x = profile::radial_d_x(b.dim(), b.c0(), b.rate(), s2) * diff;
  return d;
}

double eval_laplacian_delta(const Bubble& b, const Point& y) {
  return profile::laplacian(b.dim(), b.c0(), b.rate(), (y - b.center()).squaredNorm());
}

double verify_entire_equation(const Bubble& b, const std::vector<Point>& sample_points, double h) {
  const double step = h / std::max(1.0, b.rate());
  const double p = b.dim().p();
  auto f = [&](const Point& z) { return eval_delta(b, z); };
  double worst = 0.0;
  for (const Point& y : sample_points) {
    const double scale = std::max(1.0, y.lpNorm<Eigen::Infinity>());
    if (step < 1e-6 * scale) throw StepUnderflow("stencil step underflows for rate " + std::to_string(b.rate()));
    const double lhs = stencil_bilaplacian(f, y, step);
    const double rhs = std::pow(eval_delta(b, y), p);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace navier_bubble
