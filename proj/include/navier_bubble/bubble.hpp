#pragma once

#include <vector>

#include "navier_bubble/dimension.hpp"

namespace navier_bubble {

// c0 = [(n-4)(n-2)n(n+2)]^{(n-4)/8}
double bubble_c0(const Dimension& dim);

class Bubble {
 public:
  Bubble(Dimension dim, Point center, double rate);

  const Dimension& dim() const { return dim_; }
  const Point& center() const { return center_; }
  double rate() const { return rate_; }
  double c0() const { return c0_; }
  double peak() const;

 private:
  Dimension dim_;
  Point center_;
  double rate_;
  double c0_;
};

// Profile of delta_{x,lambda} as a function of the squared distance s2 = |y-x|^2.
// These are the hot paths used by the quadrature drivers.
namespace profile {
double value(const Dimension& dim, double c0, double lambda, double s2);
double d_lambda(const Dimension& dim, double c0, double lambda, double s2);
// d delta / d x_j = radial_d_x * (y-x)_j
double radial_d_x(const Dimension& dim, double c0, double lambda, double s2);
double laplacian(const Dimension& dim, double c0, double lambda, double s2);
double d_lambda_laplacian(const Dimension& dim, double c0, double lambda, double s2);
}  // namespace profile

struct DeltaDerivs {
  double d_lambda;
  Point d_x;
};

double eval_delta(const Bubble& b, const Point& y);
DeltaDerivs eval_delta_derivs(const Bubble& b, const Point& y);
double eval_laplacian_delta(const Bubble& b, const Point& y);

// Max over samples of |Delta_h^2 delta - delta^p| with the nested fourth-order
// 13-point Laplacian stencil. The step used is h / max(1, lambda).
double verify_entire_equation(const Bubble& b, const std::vector<Point>& sample_points, double h = 1e-2);

// Nested fourth-order stencil Laplacian and bilaplacian of an arbitrary field.
template <class F>
double stencil_laplacian(const F& f, const Point& y, double h) {
  const int n = static_cast<int>(y.size());
  const double f0 = f(y);
  double acc = -30.0 * n * f0;
  Point z = y;
  for (int i = 0; i < n; ++i) {
    const double yi = y[i];
    z[i] = yi + h;
    acc += 16.0 * f(z);
    z[i] = yi - h;
    acc += 16.0 * f(z);
    z[i] = yi + 2.0 * h;
    acc -= f(z);
    z[i] = yi - 2.0 * h;
    acc -= f(z);
    z[i] = yi;
  }
  return acc / (12.0 * h * h);
}

template <class F>
double stencil_bilaplacian(const F& f, const Point& y, double h) {
  auto lap = [&](const Point& z) { return stencil_laplacian(f, z, h); };
  return stencil_laplacian(lap, y, h);
}

}  // namespace navier_bubble
