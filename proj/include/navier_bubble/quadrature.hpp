#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "navier_bubble/dimension.hpp"

namespace navier_bubble {

struct QuadratureSpec {
  Dimension dim;
  double tol = 1e-10;  // relative to the L1 size of the integrand
  std::optional<Point> peak_center;
  std::optional<double> peak_rate;
  long max_evals = 4'000'000;
  int angular_order = 32;  // Gauss nodes in the polar angle
  double radial_extent = 1.0;  // integrate_radial upper limit; infinity allowed

  explicit QuadratureSpec(Dimension d) : dim(d) {}
  void validate() const;
};

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  long evals = 0;
  bool converged = true;

  IntegralResult& operator+=(const IntegralResult& o);
};

// Adaptive 15-point Gauss-Kronrod over the union of the given panels.
// Stops when the summed error is below tol times the integral of |f|, or below abs_floor.
IntegralResult adaptive_integrate(const std::function<double(double)>& f, const std::vector<double>& breakpoints,
                                  double tol, long max_evals, double abs_floor = 0.0);

// 1-D integral of f(r) r^{n-1+weight} over [0, radial_extent]; no solid-angle factor.
IntegralResult integrate_radial(const std::function<double(double)>& f, double weight, const QuadratureSpec& spec);

// Integrand g(r, t) where y = c + r (t e + sqrt(1-t^2) sigma), c the peak center
// (origin if unset) and e the unit vector along c (first axis if c = 0).
using AxisymmetricIntegrand = std::function<double(double r, double t)>;

// Integral over the unit ball of an integrand that depends on y only through (r, t).
IntegralResult integrate_ball_axisymmetric(const AxisymmetricIntegrand& g, const QuadratureSpec& spec);

// General scalar field over the unit ball. Transverse directions use a
// degree-5 symmetric rule on the sphere orthogonal to the axis.
IntegralResult integrate_ball(const std::function<double(const Point&)>& f, const QuadratureSpec& spec);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights);

// Length of the ray from c along a direction with cosine t to the axis e = c/|c|.
double ray_to_unit_sphere(double rho, double t);

// Fixed composite rule for many integrands sharing the same geometry.
struct AxisymmetricNodes {
  std::vector<double> r;
  std::vector<double> t;
  std::vector<double> w;  // includes r^{n-1}, sin^{n-2} and |S^{n-2}|
};
AxisymmetricNodes axisymmetric_nodes(const QuadratureSpec& spec, int radial_points_per_panel = 20);

}  // namespace navier_bubble
