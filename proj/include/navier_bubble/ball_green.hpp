#pragma once

#include <memory>
#include <string>
#include <vector>

#include "navier_bubble/bubble.hpp"
#include "navier_bubble/gegenbauer.hpp"

namespace navier_bubble {

struct CorrectionValues {
  double phi = 0.0;
  double lap_phi = 0.0;
  double d_lambda_phi = 0.0;
  double d_lambda_lap_phi = 0.0;
};

// phi_{x,lambda}: the biharmonic function on the unit ball with phi = delta and
// Delta phi = Delta delta on the sphere, together with its lambda-derivative.
class CorrectionField {
 public:
  const Bubble& bubble() const { return bubble_; }
  int modes() const { return phi_.modes(); }
  // lambda * d(x, boundary) below 10
  bool outside_asymptotic_regime() const { return outside_regime_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  double eval(const Point& y) const;
  CorrectionValues eval_all(const Point& y) const;
  // r = |y|, t = cosine between y and the bubble axis
  CorrectionValues eval_polar(double r, double t) const;

 private:
  friend class BallGreen;
  explicit CorrectionField(const Bubble& b) : bubble_(b) {}

  Bubble bubble_;
  double nu_ = 0.0;
  Point axis_;
  ZonalBiharmonic phi_;
  ZonalBiharmonic dphi_;
  bool outside_regime_ = false;
  std::vector<std::string> warnings_;
};

// Green's function of the bilaplacian on the unit ball with u = Delta u = 0 on
// the sphere, Delta^2 G(x, .) = c_n delta_x, and its regular part
// H(x, y) = |x - y|^{4-n} - G(x, y).
class BallGreen {
 public:
  explicit BallGreen(Dimension dim, double tol = 1e-15, int max_modes = 20000);

  const Dimension& dim() const { return dim_; }
  double tol() const { return tol_; }
  int max_modes() const { return max_modes_; }
  // c_n obtained by testing Delta^2 |y|^{4-n} against a compactly supported radial function
  double normalization() const { return normalization_; }
  // (n-4)(n-2)|S^{n-1}|, the value without the factor two
  double nominal_normalization() const;

  double regular_part(const Point& x, const Point& y) const;
  double regular_part(const Point& x, const Point& y, int& modes_used) const;
  double robin(const Point& x) const { return regular_part(x, x); }
  double green(const Point& x, const Point& y) const;
  // gradient of H with respect to its first argument
  Point grad_x_regular_part(const Point& x, const Point& y) const;

  std::shared_ptr<const CorrectionField> correction_field(const Bubble& b) const;

 private:
  Dimension dim_;
  double tol_;
  int max_modes_;
  double normalization_;
};

// Pd_{x,lambda} = delta_{x,lambda} - phi_{x,lambda} on the unit ball.
class ProjectedBubble {
 public:
  ProjectedBubble(Bubble b, std::shared_ptr<const CorrectionField> correction);

  const Bubble& bubble() const { return bubble_; }
  const CorrectionField& correction() const;

 private:
  Bubble bubble_;
  std::shared_ptr<const CorrectionField> correction_;
};

double eval_proj_delta(const ProjectedBubble& pb, const Point& y);

}  // namespace navier_bubble
