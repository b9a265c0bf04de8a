#pragma once

#include <string>
#include <vector>

#include "navier_bubble/dimension.hpp"

namespace navier_bubble {

enum class KFamily { constant, quadratic, gaussian, polynomial };

// Radial coefficient K(y) = k(|y|^2). Positivity on the closed unit ball is
// checked on construction.
class KField {
 public:
  static KField constant(double c);
  // a + b |y|^2
  static KField quadratic(double a, double b);
  // 1 + A exp(-|y|^2 / s^2)
  static KField gaussian(double A, double s);
  // sum_i c_i |y|^{2i}
  static KField polynomial(std::vector<double> coeffs);

  KFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  std::string descriptor() const;

  // m-th derivative of k with respect to s = |y|^2
  double profile_derivative(double s, int m) const;
  double profile(double s) const { return profile_derivative(s, 0); }

  double value(const Point& y) const { return profile(y.squaredNorm()); }
  Point gradient(const Point& y) const;
  double laplacian(const Point& y) const;
  // j-th derivative of t -> K(x + t e) at t = 0
  double directional_derivative(const Point& x, const Point& e, int j) const;
  // sup over unit e of |d^j/dt^j K(x + t e)|, the spectral norm of D^j K(x)
  double derivative_norm(const Point& x, int j) const;
  // min of K over the closed unit ball
  double min_on_ball() const;
  // c K
  KField scaled(double c) const;

 private:
  KField(KFamily f, std::vector<double> p);
  KFamily family_;
  std::vector<double> params_;
};

const char* to_string(KFamily f);

}  // namespace navier_bubble
