#include "navier_bubble/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "navier_bubble/errors.hpp"
#include "navier_bubble/expansions.hpp"
#include "navier_bubble/special.hpp"

namespace navier_bubble {

namespace {

constexpr int kDegree = 3;

// Nonzero basis functions of degree 3 and their first two derivatives at u in
// span k (NURBS book, algorithm A2.3).
void ders_basis(const std::vector<double>& U, int k, double u, double ders[3][4]) {
  const int p = kDegree;
  double ndu[4][4], left[4], right[4], a[2][4];
  ndu[0][0] = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = u - U[k + 1 - j];
    right[j] = U[k + j] - u;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }
  for (int j = 0; j <= p; ++j) ders[0][j] = ndu[j][p];
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a[0][0] = 1.0;
    for (int kk = 1; kk <= 2; ++kk) {
      double d = 0.0;
      const int rk = r - kk, pk = p - kk;
      if (r >= kk) {
        a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
        d = a[s2][0] * ndu[rk][pk];
      }
      const int j1 = rk >= -1 ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? kk - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
        d += a[s2][j] * ndu[rk + j][pk];
      }
      if (r <= pk) {
        a[s2][kk] = -a[s1][kk - 1] / ndu[pk + 1][r];
        d += a[s2][kk] * ndu[r][pk];
      }
      ders[kk][r] = d;
      std::swap(s1, s2);
    }
  }
  double f = p;
  for (int kk = 1; kk <= 2; ++kk) {
    for (int j = 0; j <= p; ++j) ders[kk][j] *= f;
    f *= (p - kk);
  }
}

struct MomentNode {
  double w;      // quadrature weight including the volume element
  double s;      // |y|^2
  double ma;     // average of y.e over the node's angular set
  double maa;    // average of (y.e)^2
  double mperp;  // average of y_j^2 for one transverse direction
  double r_rel;  // |y - x|
  double phi_r, phi_t;  // polar coordinates for the correction field
};

// 1-D rule on [0, 1] with Gauss panels between the given sorted breakpoints
std::vector<std::pair<double, double>> panel_rule(const std::vector<double>& bp, int per_panel) {
  std::vector<double> gx, gw;
  gauss_legendre(per_panel, gx, gw);
  std::vector<std::pair<double, double>> out;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    const double a = bp[k], b = bp[k + 1];
    if (!(b > a)) continue;
    for (int q = 0; q < per_panel; ++q) out.emplace_back(0.5 * (a + b) + 0.5 * (b - a) * gx[q], 0.5 * (b - a) * gw[q]);
  }
  return out;
}

std::vector<double> merged_breakpoints(std::vector<double> bp) {
  std::sort(bp.begin(), bp.end());
  std::vector<double> out;
  for (double v : bp) {
    if (out.empty() || v > out.back() * (1.0 + 1e-12) + 1e-300) out.push_back(v);
  }
  return out;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& C) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv[i] > 1e-12 * sv[0]) ++rank;
  }
  return svd.matrixV().rightCols(C.cols() - rank);
}

// smallest generalized eigenvalue of (A, B), B positive definite, after diagonal scaling
double min_generalized_eigenvalue(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
  const Eigen::VectorXd d = B.diagonal().cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd As = d.asDiagonal() * A * d.asDiagonal();
  const Eigen::MatrixXd Bs = d.asDiagonal() * B * d.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (As + As.transpose()),
                                                               0.5 * (Bs + Bs.transpose()));
  if (es.info() != Eigen::Success) throw NumericalError("generalized eigenproblem failed");
  return es.eigenvalues().minCoeff();
}

}  // namespace

SplineBasis::SplineBasis(int intervals, double lambda) : intervals_(intervals) {
  if (intervals < 2) throw UsageError("spline basis needs at least two intervals");
  if (!(lambda > 0.0)) throw UsageError("lambda must be positive");
  const double a = std::asinh(lambda);
  breaks_.push_back(0.0);
  for (int i = 1; i < intervals; ++i) {
    const double r = std::sinh(a * i / intervals) / std::sinh(a);
    breaks_.push_back(r * r);
  }
  breaks_.push_back(1.0);
  for (int i = 0; i < kDegree; ++i) knots_.push_back(0.0);
  knots_.insert(knots_.end(), breaks_.begin(), breaks_.end());
  for (int i = 0; i < kDegree; ++i) knots_.push_back(1.0);
}

void SplineBasis::eval(double s, Eigen::VectorXd& b, Eigen::VectorXd& db, Eigen::VectorXd& d2b) const {
  const int m = size();
  b.setZero(m);
  db.setZero(m);
  d2b.setZero(m);
  s = std::max(s, 0.0);
  // span index k with knots[k] <= s < knots[k+1]
  int k = static_cast<int>(std::upper_bound(knots_.begin(), knots_.end(), s) - knots_.begin()) - 1;
  const int last = static_cast<int>(knots_.size()) - kDegree - 2;
  k = std::min(k, last);
  double ders[3][4];
  ders_basis(knots_, k, s, ders);
  for (int j = 0; j <= kDegree; ++j) {
    const int idx = k - kDegree + j;
    if (idx < 0 || idx >= m) continue;
    b[idx] = ders[0][j];
    db[idx] = ders[1][j];
    d2b[idx] = ders[2][j];
  }
}

GalerkinSpace::GalerkinSpace(const FunctionalContext& ctx, const Point& x, double lambda, double eps, int intervals)
    : basis_(intervals, lambda), x_(x), lambda_(lambda), eps_(eps), n_(ctx.dim.n()), p_(ctx.dim.p()) {
  check_interior(ctx, x);
  if (!(eps >= 0.0 && eps < 1.0)) throw UsageError("eps must lie in [0, 1)");
  const int n = n_;
  const int N = basis_.size();
  const double rho = x.norm();
  axis_ = Point::Zero(n);
  if (rho > 0.0) {
    axis_ = x / rho;
  } else {
    axis_[0] = 1.0;
  }
  const EnergyParts parts = energy_parts(ctx, x, lambda, eps);
  lap_norm2_ = parts.lap_norm2;
  k_power_ = parts.k_power;
  energy_ = lap_norm2_ / std::pow(k_power_, 2.0 / (p_ + 1.0 - eps));

  const double area = unit_sphere_area(n);
  Eigen::VectorXd b, db, d2b;

  // Gram matrices: exact on knot-aligned panels
  {
    std::vector<double> bp;
    for (double s : basis_.breakpoints()) bp.push_back(std::sqrt(s));
    Eigen::MatrixXd G0 = Eigen::MatrixXd::Zero(N, N), G1 = Eigen::MatrixXd::Zero(N, N);
    for (const auto& [r, w] : panel_rule(merged_breakpoints(bp), 12)) {
      const double s = r * r;
      basis_.eval(s, b, db, d2b);
      const Eigen::VectorXd L0 = 4.0 * s * d2b + 2.0 * n * db;
      const Eigen::VectorXd L1 = 4.0 * s * d2b + 2.0 * (n + 2.0) * db;
      G0 += (w * area * std::pow(r, n - 1)) * L0 * L0.transpose();
      G1 += (w * area / n * std::pow(r, n + 1)) * L1 * L1.transpose();
    }
    gram_ = Eigen::MatrixXd::Zero(2 * N, 2 * N);
    gram_.topLeftCorner(N, N) = G0;
    gram_.bottomRightCorner(N, N) = G1;
    gram_t_ = G1;
  }

  // bubble-weighted integrals
  std::vector<MomentNode> nodes;
  if (rho == 0.0) {
    std::vector<double> bp{0.0, 1.0};
    for (double s : basis_.breakpoints()) bp.push_back(std::sqrt(s));
    for (double r = 0.25 / lambda; r < 1.0; r *= 2.0) bp.push_back(r);
    for (const auto& [r, w] : panel_rule(merged_breakpoints(bp), 20)) {
      const double r2 = r * r;
      nodes.push_back({w * area * std::pow(r, n - 1), r2, 0.0, r2 / n, r2 / n, r, r, 1.0});
    }
  } else {
    QuadratureSpec spec = ctx.quad;
    spec.peak_center = x;
    spec.peak_rate = lambda;
    const AxisymmetricNodes an = axisymmetric_nodes(spec, 20);
    for (std::size_t i = 0; i < an.r.size(); ++i) {
      const double r = an.r[i], t = an.t[i];
      const double ya = rho + r * t;
      const double perp2 = r * r * (1.0 - t * t);
      const double s = ya * ya + perp2;
      const double ynorm = std::sqrt(s);
      nodes.push_back({an.w[i], s, ya, ya * ya, perp2 / (n - 1), r, std::min(ynorm, 1.0),
                       ynorm > 0.0 ? std::clamp(ya / ynorm, -1.0, 1.0) : 1.0});
    }
  }

  const Bubble bub(ctx.dim, x, lambda);
  const auto cf = ctx.green->correction_field(bub);
  const double c0 = bub.c0();
  mass_ = Eigen::MatrixXd::Zero(2 * N, 2 * N);
  pair_ = Eigen::VectorXd::Zero(2 * N);
  cons_ = Eigen::MatrixXd::Zero(3, 2 * N);
  mass_t_ = Eigen::MatrixXd::Zero(N, N);
  cons_t_ = Eigen::RowVectorXd::Zero(N);
  for (const MomentNode& nd : nodes) {
    const double r2 = nd.r_rel * nd.r_rel;
    const double delta = profile::value(ctx.dim, c0, lambda, r2);
    const double dl = profile::d_lambda(ctx.dim, c0, lambda, r2);
    const double rd = profile::radial_d_x(ctx.dim, c0, lambda, r2);
    const double phi = cf->eval_polar(nd.phi_r, nd.phi_t).phi;
    const double pd = std::max(0.0, delta - phi);
    const double K = ctx.K.profile(nd.s);
    const double wk = nd.w * K * std::pow(pd, p_ - 1.0 - eps);
    const double wp = nd.w * K * std::pow(pd, p_ - eps);
    const double dp1 = p_ * std::pow(delta, p_ - 1.0);
    basis_.eval(nd.s, b, db, d2b);
    const Eigen::MatrixXd bb = b * b.transpose();
    mass_.topLeftCorner(N, N) += wk * bb;
    mass_.topRightCorner(N, N) += (wk * nd.ma) * bb;
    mass_.bottomRightCorner(N, N) += (wk * nd.maa) * bb;
    mass_t_ += (wk * nd.mperp) * bb;
    pair_.head(N) += wp * b;
    pair_.tail(N) += (wp * nd.ma) * b;
    const double w0 = nd.w * std::pow(delta, p_);
    const double w1 = nd.w * dp1 * dl;
    const double w2 = nd.w * dp1 * rd;
    cons_.row(0).head(N) += w0 * b.transpose();
    cons_.row(0).tail(N) += (w0 * nd.ma) * b.transpose();
    cons_.row(1).head(N) += w1 * b.transpose();
    cons_.row(1).tail(N) += (w1 * nd.ma) * b.transpose();
    cons_.row(2).head(N) += (w2 * (nd.ma - rho)) * b.transpose();
    cons_.row(2).tail(N) += (w2 * (nd.maa - rho * nd.ma)) * b.transpose();
    cons_t_ += (w2 * nd.mperp) * b.transpose();
  }
  mass_.bottomLeftCorner(N, N) = mass_.topRightCorner(N, N).transpose();
}

Eigen::MatrixXd GalerkinSpace::quadratic_form() const {
  const double e = eps_;
  return 2.0 * energy_ *
         (gram_ / lap_norm2_ - (p_ - e) * mass_ / k_power_ +
          (p_ + 3.0 - e) * pair_ * pair_.transpose() / (k_power_ * k_power_));
}

Eigen::VectorXd GalerkinSpace::linear_form() const { return 2.0 * energy_ * pair_ / k_power_; }

Eigen::MatrixXd GalerkinSpace::transverse_quadratic_form() const {
  return 2.0 * energy_ * (gram_t_ / lap_norm2_ - (p_ - eps_) * mass_t_ / k_power_);
}

double GalerkinSpace::norm(const Eigen::VectorXd& c) const {
  if (c.size() != axis_size()) throw UsageError("coefficient vector has wrong size");
  return std::sqrt(std::max(0.0, c.dot(gram_ * c)));
}

double GalerkinSpace::constraint_violation(const Eigen::VectorXd& c) const {
  const double nv = norm(c);
  if (nv == 0.0) return 0.0;
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram_);
  double worst = 0.0;
  for (int k = 0; k < cons_.rows(); ++k) {
    const Eigen::VectorXd ck = cons_.row(k).transpose();
    const double dual = std::sqrt(ck.dot(ldlt.solve(ck)));
    if (dual == 0.0) continue;
    worst = std::max(worst, std::abs(ck.dot(c)) / (nv * dual));
  }
  return worst;
}

Eigen::VectorXd GalerkinSpace::project(const Eigen::VectorXd& c) const {
  const Eigen::LDLT<Eigen::MatrixXd> ldlt(gram_);
  const Eigen::MatrixXd GiCt = ldlt.solve(cons_.transpose());
  const Eigen::MatrixXd S = cons_ * GiCt;
  const Eigen::VectorXd mult = S.completeOrthogonalDecomposition().solve(cons_ * c);
  Eigen::VectorXd u = c - GiCt * mult;
  // one refinement sweep against round-off
  const Eigen::VectorXd mult2 = S.completeOrthogonalDecomposition().solve(cons_ * u);
  u -= GiCt * mult2;
  return u;
}

double GalerkinSpace::eval(const Eigen::VectorXd& c, const Point& y) const {
  if (c.size() != axis_size()) throw UsageError("coefficient vector has wrong size");
  Eigen::VectorXd b, db, d2b;
  basis_.eval(y.squaredNorm(), b, db, d2b);
  const int N = basis_.size();
  return c.head(N).dot(b) + y.dot(axis_) * c.tail(N).dot(b);
}

GalerkinResult galerkin_v(const FunctionalContext& ctx, const Point& x, double lambda, double eps, int basis_size) {
  auto space = std::make_shared<GalerkinSpace>(ctx, x, lambda, eps, basis_size);
  const double unit = 2.0 * space->energy() / space->lap_norm2();
  GalerkinResult res;
  res.basis_size = basis_size;

  const Eigen::MatrixXd Z = null_space(space->constraints());
  const Eigen::MatrixXd A = Z.transpose() * space->quadratic_form() * Z;
  const Eigen::MatrixXd B = Z.transpose() * space->gram() * Z;
  res.axis_coercivity = min_generalized_eigenvalue(A, B) / unit;

  const Eigen::MatrixXd Zt = null_space(space->transverse_constraint());
  res.transverse_coercivity = min_generalized_eigenvalue(Zt.transpose() * space->transverse_quadratic_form() * Zt,
                                                         Zt.transpose() * space->transverse_gram() * Zt) /
                              unit;
  res.coercivity = std::min(res.axis_coercivity, res.transverse_coercivity);
  if (!(res.coercivity > 0.0)) {
    std::ostringstream s;
    s << "quadratic form is not positive on the constrained span (min eigenvalue " << res.coercivity << ")";
    throw IndefiniteForm(s.str(), res.coercivity);
  }
  const Eigen::VectorXd rhs = Z.transpose() * space->linear_form();
  const Eigen::VectorXd c = A.ldlt().solve(rhs);
  res.v.space = space;
  res.v.coeffs = Z * c;
  res.norm = space->norm(res.v.coeffs);
  res.model_decrease = -0.5 * space->linear_form().dot(res.v.coeffs);
  return res;
}

double v_pairing_bound_check(const FunctionalContext& ctx, const Point& x, double lambda, double eps,
                             const GalerkinField& v, double theta) {
  if (!v.space) throw UsageError("field has no space attached");
  const GalerkinSpace& sp = *v.space;
  if ((sp.x() - x).norm() > 1e-14 || std::abs(sp.lambda() / lambda - 1.0) > 1e-14 || sp.eps() != eps) {
    throw UsageError("field was built for a different (x, lambda, eps)");
  }
  const double nv = v.norm();
  if (nv == 0.0) return 0.0;
  const double viol = sp.constraint_violation(v.coeffs);
  if (viol > 1e-8) {
    std::ostringstream s;
    s << "field violates the orthogonality constraints (relative " << viol << ")";
    throw ConstraintViolation(s.str());
  }
  const int n = ctx.dim.n();
  const int k = taylor_order(ctx.dim);
  double env = eps + std::pow(lambda, -(k + 1.0)) +
               std::pow(lambda * (1.0 - x.norm()), -(0.5 * (n - 4.0) + theta));
  for (int j = 1; j <= k; ++j) env += ctx.K.derivative_norm(x, j) / std::pow(lambda, j);
  return std::abs(sp.pairing(v.coeffs)) / (env * nv);
}

}  // namespace navier_bubble
