#include <cmath>

#include <gtest/gtest.h>

#include "navier_bubble/bubble.hpp"
#include "navier_bubble/fit.hpp"
#include "navier_bubble/radial_pde.hpp"

using namespace navier_bubble;

namespace {

const Dimension kFive(5);

RadialSolution sampled(Dimension dim, double rate, const std::function<double(double)>& u,
                       const std::function<double(double)>& w) {
  RadialSolution s(dim);
  s.mesh = RadialMesh(96, rate);
  s.u.resize(s.mesh.size());
  s.w.resize(s.mesh.size());
  for (int i = 0; i < s.mesh.size(); ++i) {
    s.u[i] = u(s.mesh.r()[i]);
    s.w[i] = w(s.mesh.r()[i]);
  }
  return s;
}

const RadialSolution& moderate_solution() {
  static const RadialSolution s =
      solve_bvp(kFive, 0.5, KField::constant(1.0), bubble_seed(kFive, KField::constant(1.0), 0.5, 3.0));
  return s;
}

}  // namespace

TEST(RadialMesh, LaplacianOfProjectedBubble) {
  const RadialMesh mesh(64, 20.0);
  const Eigen::MatrixXd L = mesh.laplacian(5);
  Eigen::VectorXd u(mesh.size()), lu(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) {
    u[i] = projected_bubble(kFive, 20.0, mesh.r()[i]);
    lu[i] = projected_bubble_laplacian(kFive, 20.0, mesh.r()[i]);
  }
  EXPECT_LT((L * u - lu).cwiseAbs().maxCoeff(), 1e-8 * lu.cwiseAbs().maxCoeff());
}

TEST(RadialMesh, IntegrationAndInterpolation) {
  const RadialMesh mesh(48, 15.0);
  Eigen::VectorXd g(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) g[i] = 1.0 - mesh.r()[i] * mesh.r()[i];
  // int_0^1 (1 - r^2) r^4 dr = 1/5 - 1/7
  EXPECT_NEAR(mesh.integrate(g, 5), 1.0 / 5.0 - 1.0 / 7.0, 1e-13);
  for (double r : {0.0, 0.013, 0.3, 0.999}) EXPECT_NEAR(mesh.interpolate(g, r), 1.0 - r * r, 1e-12);
}

TEST(SolveLinear, ManufacturedSolution) {
  // u* = (1 - r^2)^2: Delta^2 u* = 8 n (n + 2), Delta u*(1) = 8
  const int n = 5;
  for (double rate : {1.0, 25.0}) {
    const RadialMesh mesh(32, rate);
    const RadialSolution s = solve_linear(
        kFive, mesh, [](double) { return 1.0; },
        [&](double r) { return 8.0 * n * (n + 2) - std::pow(1.0 - r * r, 2); }, 0.0, 8.0);
    double err = 0.0;
    for (int i = 0; i < mesh.size(); ++i) err = std::max(err, std::abs(s.u[i] - std::pow(1.0 - mesh.r()[i] * mesh.r()[i], 2)));
    EXPECT_LE(err, 1e-9);
    EXPECT_LE(s.residual_norm, 1e-9);
  }
}

TEST(SolveBvp, ConvergesFromBubbleSeed) {
  const RadialSolution& s = moderate_solution();
  EXPECT_LE(s.residual_norm, 1e-8);
  EXPECT_GT(s.u.segment(1, s.mesh.half_nodes()).minCoeff(), 0.0);
  EXPECT_EQ(s.u[0], 0.0);
  EXPECT_EQ(s.w[0], 0.0);
  const Eigen::VectorXd du = s.mesh.d_dr() * s.u, dw = s.mesh.d_dr() * s.w;
  EXPECT_NEAR(du[s.mesh.half_nodes()], 0.0, 1e-12 * s.peak());
  EXPECT_NEAR(dw[s.mesh.half_nodes()], 0.0, 1e-12 * std::abs(s.w[s.mesh.half_nodes()]));
}

TEST(SolveBvp, EnergyIdentity) {
  const auto [lap, pw] = energy_identity(moderate_solution());
  EXPECT_NEAR(lap / pw, 1.0, 1e-6);
}

TEST(SolveBvp, MeshRefinementStability) {
  const RadialSolution& s = moderate_solution();
  RadialSolution fine(kFive);
  fine.mesh = RadialMesh(2 * s.mesh.half_nodes(), s.mesh.rate());
  fine.u.resize(fine.mesh.size());
  fine.w.resize(fine.mesh.size());
  for (int i = 0; i < fine.mesh.size(); ++i) {
    fine.u[i] = s.eval_u(fine.mesh.r()[i]);
    fine.w[i] = s.eval_w(fine.mesh.r()[i]);
  }
  NewtonOptions opt;
  opt.homotopy = false;
  const RadialSolution f = solve_bvp(kFive, 0.5, KField::constant(1.0), fine, opt);
  EXPECT_NEAR(f.peak() / s.peak(), 1.0, 1e-6);
}

TEST(SolveBvp, BilaplacianStencilInFullDimension) {
  const RadialSolution& s = moderate_solution();
  const double lam = extract_bubble(s).lambda_hat;
  const double q = kFive.p() - 0.5;
  auto field = [&](const Point& y) { return s.eval_u(y.norm()); };
  const double scale = std::pow(s.peak(), q);
  for (double rho : {0.0, 0.5, 1.0, 2.0}) {
    Point y = kFive.origin();
    y[0] = 0.6 * rho / lam;
    y[1] = 0.8 * rho / lam;
    const double lhs = stencil_bilaplacian(field, y, 0.02 / lam);
    EXPECT_LE(std::abs(lhs - std::pow(s.eval_u(y.norm()), q)), 1e-4 * scale) << rho;
  }
}

TEST(SolveBvp, DivergenceReportsLastIterate) {
  NewtonOptions opt;
  opt.max_iterations = 1;
  opt.homotopy = false;
  const RadialSolution seed = bubble_seed(kFive, KField::constant(1.0), 0.5, 3.0, 32);
  try {
    solve_bvp(kFive, 0.5, KField::constant(1.0), seed, opt);
    FAIL() << "expected divergence";
  } catch (const NewtonDivergence& e) {
    EXPECT_EQ(e.last_iterate().u.size(), seed.u.size());
    EXPECT_GT(e.last_iterate().residual_norm, opt.tol);
  }
  EXPECT_THROW(solve_bvp(kFive, 0.0, KField::constant(1.0), seed), UsageError);
}

TEST(ExtractBubble, ExactFreeBubble) {
  const double c0 = bubble_c0(kFive);
  const RadialSolution s = sampled(
      kFive, 10.0, [&](double r) { return profile::value(kFive, c0, 10.0, r * r); },
      [&](double r) { return profile::laplacian(kFive, c0, 10.0, r * r); });
  const BranchPoint bp = extract_bubble(s, BubbleModel::free);
  EXPECT_NEAR(bp.lambda_hat, 10.0, 1e-8);
  EXPECT_NEAR(bp.alpha_hat, 1.0, 1e-8);
  EXPECT_LE(bp.fit_error, 1e-6);
}

TEST(ExtractBubble, ScaledProjectedBubble) {
  const RadialSolution s = sampled(
      kFive, 25.0, [](double r) { return 0.9 * projected_bubble(kFive, 25.0, r); },
      [](double r) { return 0.9 * projected_bubble_laplacian(kFive, 25.0, r); });
  const BranchPoint bp = extract_bubble(s);
  EXPECT_NEAR(bp.lambda_hat / 25.0, 1.0, 0.01);
  EXPECT_NEAR(bp.alpha_hat / 0.9, 1.0, 0.01);
  EXPECT_LE(bp.fit_error, 1e-6);
}

TEST(ExtractBubble, FlatProfileHasNoClearPeak) {
  const RadialSolution s = sampled(
      kFive, 1.0, [](double r) { return std::pow(1.0 - r * r, 2); }, [](double r) { return -20.0 + 28.0 * r * r; });
  EXPECT_THROW(extract_bubble(s), NoClearPeak);
}

TEST(ContinueBranch, FrozenEpsMatchesSingleSolve) {
  const auto pts = continue_branch(kFive, KField::constant(1.0), 0.5, 0.5, 1);
  ASSERT_EQ(pts.size(), 1u);
  EXPECT_NEAR(pts[0].peak / moderate_solution().peak(), 1.0, 1e-10);
  EXPECT_NEAR(pts[0].lambda_hat / extract_bubble(moderate_solution()).lambda_hat, 1.0, 1e-8);
}

TEST(ContinueBranch, AlphaScalesWithConstantK) {
  const auto one = continue_branch(kFive, KField::constant(1.0), 0.5, 0.05, 10);
  const auto two = continue_branch(kFive, KField::constant(2.0), 0.5, 0.05, 10);
  ASSERT_EQ(one.size(), two.size());
  // u solves the K = 2 problem iff 2^{1/(q-1)} u solves K = 1
  const double e = one.back().eps;
  EXPECT_NEAR(two.back().alpha_hat / one.back().alpha_hat, std::pow(2.0, -1.0 / (kFive.p() - 1.0 - e)), 1e-8);
  EXPECT_NEAR(two.back().alpha_hat / one.back().alpha_hat, std::pow(2.0, -1.0 / 8.0), 0.005);
  EXPECT_NEAR(two.back().lambda_hat / one.back().lambda_hat, 1.0, 1e-8);
}

TEST(ContinueBranch, PeakGrowsLikeInverseSquareRootOfEps) {
  const auto pts = continue_branch(kFive, KField::constant(1.0), 0.5, 5e-3, 40);
  ASSERT_NEAR(pts.back().eps, 5e-3, 1e-15);
  std::vector<double> inv, peak;
  for (const auto& p : pts) {
    if (p.eps <= 5e-2) {
      inv.push_back(1.0 / p.eps);
      peak.push_back(p.peak);
    }
  }
  EXPECT_NEAR(fit_loglog(inv, peak).slope, 0.5, 0.1);
  for (const auto& p : pts) EXPECT_LE(p.residual_norm, 1e-8);
}

TEST(ContinueBranch, Errors) {
  EXPECT_THROW(continue_branch(kFive, KField::constant(1.0), 0.1, 0.2, 4), UsageError);
  EXPECT_THROW(continue_branch(kFive, KField::constant(1.0), 0.2, 0.1, 0), UsageError);
}
