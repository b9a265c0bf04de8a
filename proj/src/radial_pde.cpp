#include "navier_bubble/radial_pde.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "navier_bubble/bubble.hpp"
#include "navier_bubble/quadrature.hpp"
#include "navier_bubble/special.hpp"

namespace navier_bubble {

namespace {

double positive_part(double v) { return v > 0.0 ? v : 0.0; }

struct Residual {
  Eigen::VectorXd f1, f2;
  double f3 = 0.0;
  double s1 = 1.0, s2 = 1.0;
  double norm = 0.0;
  // weighted 2-norm with the row scales of another iterate, for the line search
  double merit(const Residual& ref) const {
    return std::sqrt(f1.squaredNorm() / (ref.s1 * ref.s1) + f2.squaredNorm() / (ref.s2 * ref.s2) + f3 * f3);
  }
};

// Rows 1..N of Delta v = w, Delta w = m K v^q and v(0) = 1; node 0 carries the boundary values.
Residual residual(const Eigen::MatrixXd& L, const Eigen::VectorXd& v, const Eigen::VectorXd& w, double m,
                  const Eigen::VectorXd& k, double q) {
  const int N = static_cast<int>(v.size()) - 1;
  Residual r;
  Eigen::VectorXd src(N);
  for (int i = 0; i < N; ++i) src[i] = m * k[i + 1] * std::pow(positive_part(v[i + 1]), q);
  r.f1 = L.bottomRows(N) * v - w.tail(N);
  r.f2 = L.bottomRows(N) * w - src;
  r.f3 = v[N] - 1.0;
  r.s1 = std::max(w.cwiseAbs().maxCoeff(), 1e-300);
  r.s2 = std::max(src.cwiseAbs().maxCoeff(), 1e-300);
  r.norm = std::max({r.f1.cwiseAbs().maxCoeff() / r.s1, r.f2.cwiseAbs().maxCoeff() / r.s2, std::abs(r.f3)});
  return r;
}

Eigen::VectorXd k_values(const KField& K, const RadialMesh& mesh) {
  Eigen::VectorXd k(mesh.size());
  for (int i = 0; i < mesh.size(); ++i) k[i] = K.profile(mesh.r()[i] * mesh.r()[i]);
  return k;
}

double free_bubble(Dimension dim, double lambda, double r) {
  return profile::value(dim, bubble_c0(dim), lambda, r * r);
}

double model_value(Dimension dim, BubbleModel model, double lambda, double r) {
  return model == BubbleModel::projected ? projected_bubble(dim, lambda, r) : free_bubble(dim, lambda, r);
}

RadialSolution remeshed(const RadialSolution& sol, double rate, int half_nodes) {
  RadialSolution out(sol.dim);
  out.eps = sol.eps;
  out.K = sol.K;
  out.mesh = RadialMesh(half_nodes, rate);
  out.u.resize(out.mesh.size());
  out.w.resize(out.mesh.size());
  for (int i = 0; i < out.mesh.size(); ++i) {
    out.u[i] = sol.eval_u(out.mesh.r()[i]);
    out.w[i] = sol.eval_w(out.mesh.r()[i]);
  }
  out.u[0] = out.w[0] = 0.0;
  return out;
}

}  // namespace

RadialMesh::RadialMesh(int half_nodes, double rate) : n_(half_nodes), rate_(rate) {
  if (half_nodes < 4) throw UsageError("radial mesh needs at least 4 half nodes");
  if (!(rate > 0.0)) throw UsageError("mesh rate must be positive");
  a_ = std::asinh(rate);
  const int M = 2 * n_;
  Eigen::VectorXd x(M + 1), c(M + 1);
  for (int k = 0; k <= M; ++k) {
    x[k] = std::cos(std::numbers::pi * k / M);
    c[k] = ((k == 0 || k == M) ? 2.0 : 1.0) * (k % 2 ? -1.0 : 1.0);
  }
  x[n_] = 0.0;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(M + 1, M + 1);
  for (int i = 0; i <= M; ++i) {
    for (int j = 0; j <= M; ++j) {
      if (i != j) D(i, j) = c[i] / c[j] / (x[i] - x[j]);
    }
    D(i, i) = -D.row(i).sum();
  }
  const Eigen::MatrixXd D2 = D * D;
  d1_.setZero(n_ + 1, n_ + 1);
  d2_.setZero(n_ + 1, n_ + 1);
  for (int i = 0; i <= n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      d1_(i, j) = D(i, j) + D(i, M - j);
      d2_(i, j) = D2(i, j) + D2(i, M - j);
    }
    d1_(i, n_) = D(i, n_);
    d2_(i, n_) = D2(i, n_);
  }
  d1_.row(n_).setZero();

  // Clenshaw-Curtis on [-1, 1], folded onto [0, 1]
  Eigen::VectorXd wcc = Eigen::VectorXd::Zero(M + 1);
  wcc[0] = wcc[M] = 1.0 / (M * M - 1.0);
  for (int k = 1; k < M; ++k) {
    const double th = std::numbers::pi * k / M;
    double v = 1.0;
    for (int j = 1; j < M / 2; ++j) v -= 2.0 * std::cos(2.0 * j * th) / (4.0 * j * j - 1.0);
    v -= std::cos(M * th) / (M * M - 1.0);
    wcc[k] = 2.0 * v / M;
  }
  cc_.resize(n_ + 1);
  for (int j = 0; j < n_; ++j) cc_[j] = wcc[j];
  cc_[n_] = 0.5 * wcc[n_];

  xi_ = x.head(n_ + 1);
  r_.resize(n_ + 1);
  dr_.resize(n_ + 1);
  d2r_.resize(n_ + 1);
  const double sa = std::sinh(a_);
  for (int i = 0; i <= n_; ++i) {
    r_[i] = std::sinh(a_ * xi_[i]) / sa;
    dr_[i] = a_ * std::cosh(a_ * xi_[i]) / sa;
    d2r_[i] = a_ * a_ * r_[i];
  }
  r_[0] = 1.0;
}

Eigen::MatrixXd RadialMesh::laplacian(int dim) const {
  Eigen::MatrixXd L(n_ + 1, n_ + 1);
  for (int i = 0; i < n_; ++i) {
    L.row(i) = (d2_.row(i) - (d2r_[i] / dr_[i]) * d1_.row(i)) / (dr_[i] * dr_[i]) +
               ((dim - 1.0) / (r_[i] * dr_[i])) * d1_.row(i);
  }
  L.row(n_) = (dim / (dr_[n_] * dr_[n_])) * d2_.row(n_);
  return L;
}

Eigen::MatrixXd RadialMesh::d_dr() const { return dr_.cwiseInverse().asDiagonal() * d1_; }

double RadialMesh::integrate(const Eigen::VectorXd& g, int dim) const {
  double s = 0.0;
  for (int i = 0; i <= n_; ++i) s += cc_[i] * g[i] * std::pow(r_[i], dim - 1) * dr_[i];
  return s;
}

double RadialMesh::interpolate(const Eigen::VectorXd& values, double r) const {
  if (values.size() != n_ + 1) throw UsageError("value vector does not match the mesh");
  r = std::clamp(r, 0.0, 1.0);
  const double xi = std::asinh(std::sinh(a_) * r) / a_;
  const int M = 2 * n_;
  double num = 0.0, den = 0.0;
  for (int k = 0; k <= M; ++k) {
    const double xk = k == n_ ? 0.0 : std::cos(std::numbers::pi * k / M);
    const double fk = values[std::min(k, M - k)];
    if (xi == xk) return fk;
    double b = (k % 2 ? -1.0 : 1.0) / (xi - xk);
    if (k == 0 || k == M) b *= 0.5;
    num += b * fk;
    den += b;
  }
  return num / den;
}

double projected_bubble(Dimension dim, double lambda, double r) {
  const int n = dim.n();
  const double c0 = bubble_c0(dim);
  const double B = profile::laplacian(dim, c0, lambda, 1.0) / (2.0 * n);
  const double A = profile::value(dim, c0, lambda, 1.0) - B;
  return profile::value(dim, c0, lambda, r * r) - A - B * r * r;
}

double projected_bubble_laplacian(Dimension dim, double lambda, double r) {
  const double c0 = bubble_c0(dim);
  return profile::laplacian(dim, c0, lambda, r * r) - profile::laplacian(dim, c0, lambda, 1.0);
}

RadialSolution bubble_seed(Dimension dim, const KField& K, double eps, double lambda, int half_nodes) {
  RadialSolution s(dim);
  s.eps = eps;
  s.K = K;
  s.mesh = RadialMesh(half_nodes, lambda);
  // matches Delta^2 u and K u^{p-eps} at the peak
  const double q = dim.p() - eps;
  const double alpha = std::pow(std::pow(projected_bubble(dim, lambda, 0.0), eps) / K.profile(0.0), 1.0 / (q - 1.0));
  s.u.resize(s.mesh.size());
  s.w.resize(s.mesh.size());
  for (int i = 0; i < s.mesh.size(); ++i) {
    s.u[i] = alpha * projected_bubble(dim, lambda, s.mesh.r()[i]);
    s.w[i] = alpha * projected_bubble_laplacian(dim, lambda, s.mesh.r()[i]);
  }
  s.u[0] = s.w[0] = 0.0;
  return s;
}

namespace {

RadialSolution newton_solve(Dimension dim, double eps, const KField& K, const RadialSolution& init,
                            const NewtonOptions& opt) {
  if (!(init.dim == dim)) throw UsageError("initial guess has a different dimension");
  if (!(init.peak() > 0.0)) throw UsageError("initial guess must be positive");
  RadialSolution sol = init;
  sol.eps = eps;
  sol.K = K;
  sol.warnings.clear();
  const RadialMesh& mesh = sol.mesh;
  const int N = mesh.half_nodes();
  const double q = dim.p() - eps;
  const Eigen::MatrixXd L = mesh.laplacian(dim.n());
  const Eigen::MatrixXd Lii = L.bottomRightCorner(N, N);
  const Eigen::VectorXd k = k_values(K, mesh);

  // u = mu v with v(0) = 1 and m = mu^{q-1}; the normalization keeps Newton away from u = 0
  const double mu0 = init.peak();
  Eigen::VectorXd v = init.u / mu0, w = init.w / mu0;
  v[0] = w[0] = 0.0;
  double m = std::pow(mu0, q - 1.0);
  auto finish = [&](const Residual& res, int it) {
    const double mu = std::pow(m, 1.0 / (q - 1.0));
    sol.u = mu * v;
    sol.w = mu * w;
    sol.residual_norm = res.norm;
    sol.newton_iterations = it;
    if (sol.u.segment(1, N).minCoeff() <= 0.0) throw NegativeIterate("converged profile is not positive");
    const auto [lap, pw] = energy_identity(sol);
    sol.energy_mismatch = std::abs(lap / pw - 1.0);
    if (sol.energy_mismatch > 1e-6) {
      std::ostringstream s;
      s << "energy-identity mismatch " << sol.energy_mismatch << ": mesh under-resolved";
      sol.warnings.push_back(s.str());
    }
    return sol;
  };

  Residual res = residual(L, v, w, m, k, q);
  int negative_rejections = 0;
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (res.norm <= opt.tol) return finish(res, it);
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * N + 1, 2 * N + 1);
    J.block(0, 0, N, N) = Lii;
    J.block(0, N, N, N) = -Eigen::MatrixXd::Identity(N, N);
    J.block(N, N, N, N) = Lii;
    for (int i = 0; i < N; ++i) {
      const double vi = positive_part(v[i + 1]);
      J(N + i, i) = -m * k[i + 1] * q * std::pow(vi, q - 1.0);
      J(N + i, 2 * N) = -k[i + 1] * std::pow(vi, q);
    }
    J(2 * N, N - 1) = 1.0;
    Eigen::VectorXd rhs(2 * N + 1);
    rhs << -res.f1, -res.f2, -res.f3;
    const Eigen::VectorXd step = J.partialPivLu().solve(rhs);
    const double step_size =
        std::max(step.head(N).cwiseAbs().maxCoeff() / v.cwiseAbs().maxCoeff(), std::abs(step[2 * N]) / m);
    bool accepted = false, saw_negative = false;
    for (double t = 1.0; t >= 1.0 / 1024.0; t *= 0.5) {
      Eigen::VectorXd vt = v, wt = w;
      vt.tail(N) += t * step.head(N);
      wt.tail(N) += t * step.segment(N, N);
      const double mt = m + t * step[2 * N];
      if (vt.tail(N).minCoeff() <= 0.0 || !(mt > 0.0)) {
        saw_negative = true;
        continue;
      }
      const Residual trial = residual(L, vt, wt, mt, k, q);
      if (trial.merit(res) < (1.0 - 1e-4 * t) * res.merit(res) || (step_size < 1e-13 && trial.norm <= 1e-8)) {
        v = vt;
        w = wt;
        m = mt;
        res = trial;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (step_size < 1e-12 && res.norm <= 1e-8) {
        sol.warnings.push_back("residual at round-off floor");
        return finish(res, it);
      }
      if (saw_negative && ++negative_rejections > 2) throw NegativeIterate("Newton iterates keep leaving u > 0");
      std::ostringstream s;
      s << "newton-divergence: no decrease of the residual " << res.norm << " at iteration " << it;
      const double mu = std::pow(m, 1.0 / (q - 1.0));
      sol.u = mu * v;
      sol.w = mu * w;
      sol.residual_norm = res.norm;
      throw NewtonDivergence(s.str(), sol);
    }
  }
  if (res.norm <= opt.tol) return finish(res, opt.max_iterations);
  std::ostringstream s;
  s << "newton-divergence: residual " << res.norm << " after " << opt.max_iterations << " iterations";
  const double mu = std::pow(m, 1.0 / (q - 1.0));
  sol.u = mu * v;
  sol.w = mu * w;
  sol.residual_norm = res.norm;
  throw NewtonDivergence(s.str(), sol);
}

// Newton again on a mesh graded at the extracted rate until the grading matches
RadialSolution regraded(Dimension dim, RadialSolution sol, const NewtonOptions& opt) {
  for (int pass = 0; pass < 3; ++pass) {
    double rate;
    try {
      rate = extract_bubble(sol).lambda_hat;
    } catch (const NoClearPeak&) {
      return sol;
    }
    const bool graded = rate <= 1.05 * sol.mesh.rate() && rate >= sol.mesh.rate() / 1.05;
    if (graded && sol.energy_mismatch <= 1e-6) return sol;
    sol = newton_solve(dim, sol.eps, sol.K, remeshed(sol, rate, sol.mesh.half_nodes()), opt);
  }
  return sol;
}

}  // namespace

RadialSolution solve_bvp(Dimension dim, double eps, const KField& K, const RadialSolution& init,
                         const NewtonOptions& opt) {
  if (!(eps > 0.0 && eps < dim.p() - 1.0)) throw UsageError("eps must lie in (0, p-1)");
  try {
    return newton_solve(dim, eps, K, init, opt);
  } catch (const NumericalError&) {
    if (!opt.homotopy) throw;
  }
  // climb in eps until Newton converges from init, then walk back down regrading the mesh
  const double cap = 0.75 * (dim.p() - 1.0);
  double e = eps;
  std::optional<RadialSolution> sol;
  while (!sol) {
    e = std::min(2.0 * e, cap);
    try {
      sol = newton_solve(dim, e, K, init, opt);
    } catch (const NumericalError&) {
      if (e >= cap) throw;
    }
  }
  int halvings = 0;
  while (sol->eps > eps * (1.0 + 1e-12)) {
    RadialSolution guess = *sol;
    try {
      const double rate = extract_bubble(*sol).lambda_hat;
      if (rate > 1.5 * sol->mesh.rate() || rate < sol->mesh.rate() / 1.5) {
        guess = remeshed(*sol, rate, sol->mesh.half_nodes());
      }
    } catch (const NoClearPeak&) {
    }
    const double trial = sol->eps * std::pow(eps / sol->eps, std::ldexp(1.0, -halvings));
    try {
      sol = newton_solve(dim, trial, K, guess, opt);
      halvings = std::max(0, halvings - 1);
    } catch (const NumericalError&) {
      if (++halvings > 10) throw;
    }
  }
  RadialSolution out = regraded(dim, *sol, opt);
  out.warnings.push_back("reached through eps homotopy");
  return out;
}

RadialSolution solve_linear(Dimension dim, const RadialMesh& mesh, const std::function<double(double)>& c,
                            const std::function<double(double)>& f, double u1, double w1) {
  const int N = mesh.half_nodes();
  const Eigen::MatrixXd L = mesh.laplacian(dim.n());
  const Eigen::MatrixXd Lii = L.bottomRightCorner(N, N);
  const Eigen::VectorXd Lb = L.bottomLeftCorner(N, 1);
  Eigen::VectorXd cv(N), fv(N);
  for (int i = 0; i < N; ++i) {
    cv[i] = c(mesh.r()[i + 1]);
    fv[i] = f(mesh.r()[i + 1]);
  }
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  A.topLeftCorner(N, N) = Lii;
  A.topRightCorner(N, N) = -Eigen::MatrixXd::Identity(N, N);
  A.bottomLeftCorner(N, N) = Eigen::MatrixXd(-cv.asDiagonal().toDenseMatrix());
  A.bottomRightCorner(N, N) = Lii;
  Eigen::VectorXd rhs(2 * N);
  rhs << -Lb * u1, fv - Lb * w1;
  const Eigen::VectorXd x = A.partialPivLu().solve(rhs);
  RadialSolution s(dim);
  s.mesh = mesh;
  s.u.resize(N + 1);
  s.w.resize(N + 1);
  s.u << u1, x.head(N);
  s.w << w1, x.tail(N);
  const Eigen::VectorXd r1 = L.bottomRows(N) * s.u - s.w.tail(N);
  const Eigen::VectorXd r2 = L.bottomRows(N) * s.w - cv.cwiseProduct(s.u.tail(N)) - fv;
  const double s1 = std::max(s.w.cwiseAbs().maxCoeff(), 1e-300);
  const double s2 = std::max((cv.cwiseProduct(s.u.tail(N))).cwiseAbs().maxCoeff() + fv.cwiseAbs().maxCoeff(), 1e-300);
  s.residual_norm = std::max(r1.cwiseAbs().maxCoeff() / s1, r2.cwiseAbs().maxCoeff() / s2);
  return s;
}

BranchPoint extract_bubble(const RadialSolution& sol, BubbleModel model) {
  const Dimension dim = sol.dim;
  const int n = dim.n();
  const double u0 = sol.peak();
  if (!(u0 > 0.0)) throw NoClearPeak("no-clear-peak: u(0) is not positive");
  const double ratio = std::pow(2.0, -0.5 * (n - 4));
  const double level = u0 * ratio;
  // first node (outward from the center) below the half-peak level
  const RadialMesh& mesh = sol.mesh;
  int j = mesh.half_nodes();
  while (j > 0 && sol.u[j] >= level) --j;
  double lo = mesh.r()[std::min(j + 1, mesh.half_nodes())], hi = mesh.r()[j];
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (sol.eval_u(mid) >= level ? lo : hi) = mid;
  }
  const double rh = 0.5 * (lo + hi);
  if (rh > 0.25) {
    std::ostringstream s;
    s << "no-clear-peak: half-peak radius " << rh << " exceeds 0.25";
    throw NoClearPeak(s.str());
  }
  BranchPoint bp;
  bp.eps = sol.eps;
  bp.peak = u0;
  bp.residual_norm = sol.residual_norm;
  bp.mesh_nodes = mesh.size();
  if (model == BubbleModel::free) {
    bp.lambda_hat = 1.0 / rh;
  } else {
    // the projected profile's half-peak ratio at rh decreases in lambda
    auto g = [&](double lam) { return projected_bubble(dim, lam, rh) / projected_bubble(dim, lam, 0.0) - ratio; };
    double a = 0.5 / rh, b = 2.0 / rh;
    while (g(a) < 0.0) a *= 0.5;
    while (g(b) > 0.0) b *= 2.0;
    for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
      const double mid = std::sqrt(a * b);
      (g(mid) > 0.0 ? a : b) = mid;
    }
    bp.lambda_hat = std::sqrt(a * b);
  }
  bp.alpha_hat = u0 / model_value(dim, model, bp.lambda_hat, 0.0);

  std::vector<double> gx, gw;
  gauss_legendre(32, gx, gw);
  const double R = std::min(1.0, 3.0 / bp.lambda_hat);
  double num = 0.0, den = 0.0;
  const int panels = 6;
  for (int p = 0; p < panels; ++p) {
    const double a = R * p / panels, b = R * (p + 1) / panels;
    for (std::size_t q = 0; q < gx.size(); ++q) {
      const double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
      const double wq = 0.5 * (b - a) * gw[q] * std::pow(r, n - 1);
      const double u = sol.eval_u(r);
      const double d = u - bp.alpha_hat * model_value(dim, model, bp.lambda_hat, r);
      num += wq * d * d;
      den += wq * u * u;
    }
  }
  bp.fit_error = std::sqrt(num / den);
  return bp;
}

std::vector<BranchPoint> continue_branch(Dimension dim, const KField& K, double eps_start, double eps_end, int steps,
                                         const ContinuationOptions& opt, RadialSolution* final_solution) {
  if (!(eps_end > 0.0 && eps_start >= eps_end)) throw UsageError("need eps_start >= eps_end > 0");
  if (steps < 1) throw UsageError("steps must be at least 1");
  auto point_of = [&](const RadialSolution& s) {
    try {
      return extract_bubble(s);
    } catch (const NoClearPeak&) {
      BranchPoint bp;
      bp.eps = s.eps;
      bp.peak = s.peak();
      bp.alpha_hat = bp.lambda_hat = bp.fit_error = std::numeric_limits<double>::quiet_NaN();
      bp.residual_norm = s.residual_norm;
      bp.mesh_nodes = s.mesh.size();
      return bp;
    }
  };
  RadialSolution sol = solve_bvp(dim, eps_start, K, bubble_seed(dim, K, eps_start, opt.seed_lambda, opt.half_nodes),
                                 opt.newton);
  if (!sol.warnings.empty() || sol.energy_mismatch > 1e-6) sol = regraded(dim, sol, opt.newton);
  std::vector<BranchPoint> points{point_of(sol)};
  NewtonOptions step_opt = opt.newton;
  step_opt.homotopy = false;
  const double decay = 1.0 / (dim.n() - 4.0);
  if (eps_start > eps_end) {
    const double ratio = std::pow(eps_end / eps_start, 1.0 / steps);
    for (int k = 1; k <= steps; ++k) {
      const double target = k == steps ? eps_end : eps_start * std::pow(ratio, k);
      int halvings = 0;
      std::string reason;
      while (sol.eps > target * (1.0 + 1e-12)) {
        const double trial = sol.eps * std::pow(target / sol.eps, std::ldexp(1.0, -halvings));
        // mesh graded at the rate predicted by lambda ~ eps^{-1/(n-4)}
        RadialSolution guess = sol;
        const double lam = points.back().lambda_hat;
        if (std::isfinite(lam)) guess = remeshed(sol, lam * std::pow(sol.eps / trial, decay), opt.half_nodes);
        try {
          RadialSolution next = regraded(dim, solve_bvp(dim, trial, K, guess, step_opt), step_opt);
          if (next.energy_mismatch > 1e-6) {
            std::ostringstream m;
            m << "energy identity mismatch " << next.energy_mismatch << " on " << next.mesh.size()
              << " nodes, mesh under-resolved";
            throw NumericalError(m.str());
          }
          sol = std::move(next);
        } catch (const NumericalError& e) {
          reason = e.what();
          if (++halvings > opt.max_halvings) {
            std::ostringstream s;
            s << "continuation-stall: no convergence below eps = " << sol.eps << " (" << reason << ")";
            if (final_solution) *final_solution = sol;
            throw ContinuationStall(s.str(), sol.eps, points);
          }
          continue;
        }
        halvings = std::max(0, halvings - 1);
        points.push_back(point_of(sol));
      }
    }
  }
  if (final_solution) *final_solution = sol;
  return points;
}

std::pair<double, double> energy_identity(const RadialSolution& sol) {
  const int n = sol.dim.n();
  const double q1 = sol.dim.p() + 1.0 - sol.eps;
  Eigen::VectorXd lap2 = sol.w.cwiseProduct(sol.w);
  Eigen::VectorXd pw(sol.mesh.size());
  for (int i = 0; i < sol.mesh.size(); ++i) {
    const double r = sol.mesh.r()[i];
    pw[i] = sol.K.profile(r * r) * std::pow(positive_part(sol.u[i]), q1);
  }
  const double area = unit_sphere_area(n);
  return {area * sol.mesh.integrate(lap2, n), area * sol.mesh.integrate(pw, n)};
}

}  // namespace navier_bubble
