#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "navier_bubble/context.hpp"

namespace navier_bubble {

// Clamped cubic B-splines in s = |y|^2 on [0, 1], the last one dropped so that
// every member vanishes at s = 1. Interior knots s_i = (sinh(a i/M)/sinh a)^2 with
// a = asinh(lambda), so doubling M nests the spaces.
class SplineBasis {
 public:
  SplineBasis(int intervals, double lambda);

  int size() const { return static_cast<int>(knots_.size()) - 5; }
  int intervals() const { return intervals_; }
  // breakpoints in s
  const std::vector<double>& breakpoints() const { return breaks_; }
  // values and first two s-derivatives of all retained functions; s > 1 continues the last piece
  void eval(double s, Eigen::VectorXd& b, Eigen::VectorXd& db, Eigen::VectorXd& d2b) const;

 private:
  int intervals_;
  std::vector<double> knots_;
  std::vector<double> breaks_;
};

// Span of {B_i(|y|^2), B_i(|y|^2) y.e} (axisymmetric block, e the axis through x)
// and {B_i(|y|^2) y_j} for a direction j orthogonal to e (transverse block),
// with every integral needed by the quadratic model of psi_eps around P delta.
class GalerkinSpace {
 public:
  GalerkinSpace(const FunctionalContext& ctx, const Point& x, double lambda, double eps, int intervals);

  const SplineBasis& basis() const { return basis_; }
  const Point& x() const { return x_; }
  const Point& axis() const { return axis_; }
  double lambda() const { return lambda_; }
  double eps() const { return eps_; }
  int dim() const { return n_; }
  int axis_size() const { return 2 * basis_.size(); }

  // ||P delta||^2, int K (P delta)^{p+1-eps} and J_eps(P delta)
  double lap_norm2() const { return lap_norm2_; }
  double k_power() const { return k_power_; }
  double energy() const { return energy_; }

  // axisymmetric block
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::MatrixXd& weighted_mass() const { return mass_; }  // int K P delta^{p-1-eps} u v
  const Eigen::VectorXd& pairing_vector() const { return pair_; }  // int K P delta^{p-eps} u
  const Eigen::MatrixXd& constraints() const { return cons_; }     // rows: P delta, d_lambda, d_x along e
  Eigen::MatrixXd quadratic_form() const;
  Eigen::VectorXd linear_form() const;

  // transverse block (one representative direction)
  const Eigen::MatrixXd& transverse_gram() const { return gram_t_; }
  const Eigen::MatrixXd& transverse_mass() const { return mass_t_; }
  const Eigen::RowVectorXd& transverse_constraint() const { return cons_t_; }
  Eigen::MatrixXd transverse_quadratic_form() const;

  double norm(const Eigen::VectorXd& c) const;
  double pairing(const Eigen::VectorXd& c) const { return pair_.dot(c); }
  // |C_k c| / (||v|| sup_{u in span} |C_k u| / ||u||), largest over the three constraints
  double constraint_violation(const Eigen::VectorXd& c) const;
  // G-orthogonal projection onto the constrained subspace
  Eigen::VectorXd project(const Eigen::VectorXd& c) const;
  // field value at y for axisymmetric coefficients c
  double eval(const Eigen::VectorXd& c, const Point& y) const;

 private:
  SplineBasis basis_;
  Point x_, axis_;
  double lambda_, eps_;
  int n_;
  double p_;
  double lap_norm2_ = 0.0, k_power_ = 0.0, energy_ = 0.0;
  Eigen::MatrixXd gram_, mass_, cons_;
  Eigen::VectorXd pair_;
  Eigen::MatrixXd gram_t_, mass_t_;
  Eigen::RowVectorXd cons_t_;
};

// Member of the axisymmetric span of a GalerkinSpace.
struct GalerkinField {
  std::shared_ptr<const GalerkinSpace> space;
  Eigen::VectorXd coeffs;

  double eval(const Point& y) const { return space->eval(coeffs, y); }
  double norm() const { return space->norm(coeffs); }
};

struct GalerkinResult {
  GalerkinField v;
  double norm = 0.0;
  // smallest generalized eigenvalue of Q against the Gram matrix on the constrained
  // span, in units of 2 J / ||P delta||^2
  double coercivity = 0.0;
  double axis_coercivity = 0.0;
  double transverse_coercivity = 0.0;
  // psi(v) - psi(0) in the quadratic model: -(f, v) / 2 at the minimizer
  double model_decrease = 0.0;
  int basis_size = 0;
};

// Minimizer of -(f, v) + Q(v, v)/2 over the constrained span. Throws IndefiniteForm when
// Q is not positive on the span.
GalerkinResult galerkin_v(const FunctionalContext& ctx, const Point& x, double lambda, double eps, int basis_size);

}  // namespace navier_bubble
