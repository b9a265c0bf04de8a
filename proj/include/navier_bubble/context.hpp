#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "navier_bubble/ball_green.hpp"
#include "navier_bubble/constants.hpp"
#include "navier_bubble/kfield.hpp"
#include "navier_bubble/quadrature.hpp"

namespace navier_bubble {

// Everything needed to evaluate J_eps and its relatives on the unit ball.
struct FunctionalContext {
  Dimension dim;
  KField K;
  std::shared_ptr<const BallGreen> green;
  UniversalConstants constants;
  QuadratureSpec quad;

  FunctionalContext(Dimension d, KField k, double tol = 1e-11);
  FunctionalContext(Dimension d, KField k, std::shared_ptr<const BallGreen> g, UniversalConstants c,
                    QuadratureSpec q);
};

// Values attached to one quadrature node around the concentration point x.
struct NodeSample {
  double r;       // |y - x|
  double ysq;     // |y|^2
  double k;       // K(y)
  double delta;   // delta_{x,lambda}(y)
  double d_lambda_delta;
  double lap_delta;
  CorrectionValues phi;
};

// Integral over the ball of f evaluated on the samples of a bubble at (x, lambda).
// Uses the radial rule when x = 0 and the axisymmetric rule otherwise.
IntegralResult integrate_about(const FunctionalContext& ctx, const Point& x, double lambda,
                               const std::function<double(const NodeSample&)>& f);

struct EnergyParts {
  double lap_norm2 = 0.0;  // ||Delta P delta||^2
  double k_power = 0.0;    // int K (P delta)^{p+1-eps}
  double error_estimate = 0.0;
  std::vector<std::string> warnings;
};

// Exponent p+1-eps; a negative eps gives the supercritical exponent.
EnergyParts energy_parts(const FunctionalContext& ctx, const Point& x, double lambda, double eps);

// lambda d(x, boundary) < 10 produces a warning
std::vector<std::string> admissibility_warnings(const Point& x, double lambda);

void check_interior(const FunctionalContext& ctx, const Point& x);

}  // namespace navier_bubble
