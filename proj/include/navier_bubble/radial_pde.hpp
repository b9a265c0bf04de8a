#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "navier_bubble/dimension.hpp"
#include "navier_bubble/errors.hpp"
#include "navier_bubble/kfield.hpp"

namespace navier_bubble {

// Chebyshev-Lobatto collocation for even functions of xi on [-1, 1], mapped to the
// radius by r = sinh(a xi) / sinh(a), a = asinh(rate). Node 0 is r = 1, node N is r = 0.
class RadialMesh {
 public:
  RadialMesh(int half_nodes, double rate);

  int half_nodes() const { return n_; }
  double rate() const { return rate_; }
  int size() const { return n_ + 1; }
  const Eigen::VectorXd& xi() const { return xi_; }
  const Eigen::VectorXd& r() const { return r_; }

  // radial Laplacian u'' + (dim-1)/r u' on the node values
  Eigen::MatrixXd laplacian(int dim) const;
  // d/dr on the node values
  Eigen::MatrixXd d_dr() const;
  // int_0^1 g(r) r^{dim-1} dr from node values of g (Clenshaw-Curtis in xi)
  double integrate(const Eigen::VectorXd& g, int dim) const;
  // barycentric interpolation in xi; r outside [0, 1] is clamped
  double interpolate(const Eigen::VectorXd& values, double r) const;

 private:
  int n_;
  double rate_, a_;
  Eigen::VectorXd xi_, r_, dr_, d2r_, cc_;
  Eigen::MatrixXd d1_, d2_;
};

struct RadialSolution {
  Dimension dim;
  double eps = 0.0;
  KField K = KField::constant(1.0);
  RadialMesh mesh{16, 1.0};
  Eigen::VectorXd u;  // node values, u(1) = 0
  Eigen::VectorXd w;  // node values of Delta u, w(1) = 0
  // max over nodes of |Delta u - w| / max|w| and |Delta w - K u^{p-eps}| / max|K u^{p-eps}|
  double residual_norm = 0.0;
  int newton_iterations = 0;
  // |int |Delta u|^2 / int K u^{p+1-eps} - 1|
  double energy_mismatch = 0.0;
  std::vector<std::string> warnings;

  explicit RadialSolution(Dimension d) : dim(d) {}
  double peak() const { return u[u.size() - 1]; }
  double eval_u(double r) const { return mesh.interpolate(u, r); }
  double eval_w(double r) const { return mesh.interpolate(w, r); }
};

struct BranchPoint {
  double eps = 0.0;
  double peak = 0.0;
  double alpha_hat = 0.0;
  double lambda_hat = 0.0;
  double fit_error = 0.0;
  double residual_norm = 0.0;
  int mesh_nodes = 0;
};

class NewtonDivergence : public NumericalError {
 public:
  NewtonDivergence(const std::string& what, RadialSolution last) : NumericalError(what), last_(std::move(last)) {}
  const RadialSolution& last_iterate() const { return last_; }

 private:
  RadialSolution last_;
};

class NegativeIterate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ContinuationStall : public NumericalError {
 public:
  ContinuationStall(const std::string& what, double smallest_eps, std::vector<BranchPoint> points)
      : NumericalError(what), smallest_eps_(smallest_eps), points_(std::move(points)) {}
  double smallest_eps() const { return smallest_eps_; }
  const std::vector<BranchPoint>& points() const { return points_; }

 private:
  double smallest_eps_;
  std::vector<BranchPoint> points_;
};

struct NewtonOptions {
  int max_iterations = 60;
  double tol = 1e-10;
  // on failure from init, solve at larger eps first and continue back (mesh regraded on the way)
  bool homotopy = true;
};

// alpha P delta_{0,lambda} on a mesh graded at lambda, alpha^{p-1-eps} = P delta(0)^eps / K(0)
RadialSolution bubble_seed(Dimension dim, const KField& K, double eps, double lambda, int half_nodes = 96);

// Delta^2 u = K u^{p-eps}, u = Delta u = 0 on r = 1, by Newton from init on the normalized
// problem v(0) = 1, u = mu v. The mesh of init is kept unless the homotopy fallback runs.
RadialSolution solve_bvp(Dimension dim, double eps, const KField& K, const RadialSolution& init,
                         const NewtonOptions& opt = {});

// Linear problem Delta^2 u - c(r) u = f(r) with u(1) = u1, Delta u(1) = w1.
RadialSolution solve_linear(Dimension dim, const RadialMesh& mesh, const std::function<double(double)>& c,
                            const std::function<double(double)>& f, double u1 = 0.0, double w1 = 0.0);

// Model for the bubble parameters: the projected bubble alpha P delta_{0,lambda}
// or the free bubble alpha delta_{0,lambda}.
enum class BubbleModel { projected, free };

// Half-peak radius r_h of u gives lambda_hat through the model's own half-peak
// ratio; alpha_hat = u(0) / model(0). Throws NoClearPeak if r_h > 0.25.
BranchPoint extract_bubble(const RadialSolution& sol, BubbleModel model = BubbleModel::projected);

// Projected bubble P delta_{0,lambda}(r) and its Laplacian.
double projected_bubble(Dimension dim, double lambda, double r);
double projected_bubble_laplacian(Dimension dim, double lambda, double r);

struct ContinuationOptions {
  int half_nodes = 96;
  double seed_lambda = 3.0;
  int max_halvings = 8;
  NewtonOptions newton;
};

// Natural-parameter continuation in eps over a geometric sequence of steps + 1 values.
// Step halving on Newton failure; ContinuationStall carries the points reached.
std::vector<BranchPoint> continue_branch(Dimension dim, const KField& K, double eps_start, double eps_end, int steps,
                                         const ContinuationOptions& opt = {},
                                         RadialSolution* final_solution = nullptr);

// int |Delta u|^2 and int K u^{p+1-eps} over the ball
std::pair<double, double> energy_identity(const RadialSolution& sol);

}  // namespace navier_bubble
