#include "navier_bubble/ball_green.hpp"

#include <cmath>
#include <sstream>

#include "navier_bubble/errors.hpp"
#include "navier_bubble/special.hpp"

namespace navier_bubble {

namespace {

// c_n from int Delta^2 psi |y|^{4-n} dy = c_n psi(0) with psi = (1 - |y|^2)^6 on the ball.
double tested_normalization(const Dimension& dim) {
  const int n = dim.n();
  const int deg = 6;
  std::vector<double> c(deg + 1, 0.0);
  // (1 - s)^6 in powers of s
  double binom = 1.0;
  for (int i = 0; i <= deg; ++i) {
    c[i] = ((i % 2) ? -1.0 : 1.0) * binom;
    binom = binom * (deg - i) / (i + 1);
  }
  // radial Laplacian in s = r^2: (L f)(s) = 4 s f''(s) + 2n f'(s)
  auto apply_L = [n](const std::vector<double>& f) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t i = 1; i < f.size(); ++i) {
      out[i - 1] += 2.0 * n * i * f[i];
      if (i >= 2) out[i - 1] += 4.0 * i * (i - 1.0) * f[i];
    }
    return out;
  };
  const std::vector<double> bil = apply_L(apply_L(c));
  // int_0^1 s^i r^{4-n} r^{n-1} dr = 1 / (2i + 4)
  double integral = 0.0;
  for (std::size_t i = 0; i < bil.size(); ++i) integral += bil[i] / (2.0 * i + 4.0);
  return unit_sphere_area(n) * integral / c[0];
}

struct PolarPair {
  double rho, r, t;
  Point xhat, yhat;
};

PolarPair polar(const Point& x, const Point& y) {
  PolarPair p;
  p.rho = x.norm();
  p.r = y.norm();
  const int n = static_cast<int>(x.size());
  p.xhat = Point::Zero(n);
  if (p.rho > 0.0) {
    p.xhat = x / p.rho;
  } else {
    p.xhat[0] = 1.0;
  }
  p.yhat = (p.r > 0.0) ? Point(y / p.r) : p.xhat;
  p.t = std::clamp(p.xhat.dot(p.yhat), -1.0, 1.0);
  return p;
}

void check_inside(const Point& x, const Point& y, int n) {
  if (x.size() != n || y.size() != n) throw UsageError("point has wrong dimension");
  if (!(x.norm() < 1.0)) throw UsageError("first point must lie in the open unit ball");
  if (y.norm() > 1.0 + 1e-12) throw UsageError("second point must lie in the closed unit ball");
}

thread_local std::vector<double> tl_gegenbauer;

}  // namespace

BallGreen::BallGreen(Dimension dim, double tol, int max_modes)
    : dim_(dim), tol_(tol), max_modes_(max_modes), normalization_(tested_normalization(dim)) {
  if (!(tol > 0.0)) throw UsageError("series tolerance must be positive");
  if (max_modes < 1) throw UsageError("mode cap must be positive");
}

double BallGreen::nominal_normalization() const {
  const int n = dim_.n();
  return (n - 4.0) * (n - 2.0) * unit_sphere_area(n);
}

double BallGreen::regular_part(const Point& x, const Point& y) const {
  int modes = 0;
  return regular_part(x, y, modes);
}

double BallGreen::regular_part(const Point& x, const Point& y, int& modes_used) const {
  const int n = dim_.n();
  check_inside(x, y, n);
  const PolarPair pp = polar(x, y);
  const double nu = 0.5 * (n - 2.0);
  const double rho2 = pp.rho * pp.rho;
  const double pr = pp.rho * pp.r;
  double c_prev = 0.0, c_cur = 1.0;  // C_k(t)
  double o_prev = 0.0, o_cur = 1.0;  // C_k(1)
  double sum = 0.0;
  double prk = 1.0;  // (rho r)^k
  int small_run = 0;
  double last_bound = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_modes_; ++k) {
    if (k == 1) {
      c_prev = 1.0;
      c_cur = 2.0 * nu * pp.t;
      o_prev = 1.0;
      o_cur = 2.0 * nu;
    } else if (k >= 2) {
      const double cn = (2.0 * pp.t * (k + nu - 1.0) * c_cur - (k + 2.0 * nu - 2.0) * c_prev) / k;
      const double on = (2.0 * (k + nu - 1.0) * o_cur - (k + 2.0 * nu - 2.0) * o_prev) / k;
      c_prev = c_cur;
      c_cur = cn;
      o_prev = o_cur;
      o_cur = on;
    }
    const double Ak = (nu - 1.0) * (1.0 / (k + nu - 1.0) - rho2 / (k + nu + 1.0)) + (n - 4.0) / (2.0 * k + n);
    const double Bk = -(n - 4.0) / (2.0 * k + n);
    const double radial = Ak + Bk * pp.r * pp.r;
    sum += prk * radial * c_cur;
    const double bound = prk * (std::abs(Ak) + std::abs(Bk) * pp.r * pp.r) * o_cur;
    if (pr == 0.0) {
      modes_used = 1;
      return sum;
    }
    if (bound <= tol_ * std::abs(sum) && bound <= last_bound) {
      if (++small_run >= 3) {
        modes_used = k + 1;
        return sum;
      }
    } else {
      small_run = 0;
    }
    last_bound = bound;
    prk *= pr;
  }
  std::ostringstream msg;
  msg << "regular part series did not reach tolerance within " << max_modes_ << " modes";
  throw SeriesTruncationError(msg.str(), max_modes_);
}

double BallGreen::green(const Point& x, const Point& y) const {
  const double dist = (x - y).norm();
  if (dist < 1e-12) throw CoincidentPoints("green: x and y coincide");
  return std::pow(dist, 4.0 - dim_.n()) - regular_part(x, y);
}

Point BallGreen::grad_x_regular_part(const Point& x, const Point& y) const {
  const int n = dim_.n();
  check_inside(x, y, n);
  const PolarPair pp = polar(x, y);
  const double nu = 0.5 * (n - 2.0);
  const double rho = pp.rho, r = pp.r, t = pp.t;
  double cx = 0.0, cy = 0.0, cxx = 0.0;  // coefficients of xhat, yhat and x
  double c_prev = 0.0, c_cur = 1.0;      // C_k^nu(t)
  double d_prev = 0.0, d_cur = 0.0;      // C_{k-1}^{nu+1}(t)
  double o_cur = 1.0, o_prev = 0.0;      // C_k^nu(1)
  double rk = 1.0, rhok1 = 0.0;          // r^k, rho^{k-1}
  int small_run = 0;
  for (int k = 0; k < max_modes_; ++k) {
    if (k == 1) {
      c_prev = 1.0;
      c_cur = 2.0 * nu * t;
      d_prev = 0.0;
      d_cur = 1.0;
      o_prev = 1.0;
      o_cur = 2.0 * nu;
      rhok1 = 1.0;
    } else if (k >= 2) {
      const double cn = (2.0 * t * (k + nu - 1.0) * c_cur - (k + 2.0 * nu - 2.0) * c_prev) / k;
      c_prev = c_cur;
      c_cur = cn;
      // C_{k-1}^{nu+1}
      const int m = k - 1;
      const double lam = nu + 1.0;
      const double dn = (m == 1) ? 2.0 * lam * t
                                 : (2.0 * t * (m + lam - 1.0) * d_cur - (m + 2.0 * lam - 2.0) * d_prev) / m;
      d_prev = d_cur;
      d_cur = dn;
      const double on = (2.0 * (k + nu - 1.0) * o_cur - (k + 2.0 * nu - 2.0) * o_prev) / k;
      o_prev = o_cur;
      o_cur = on;
      rhok1 *= rho;
    }
    const double Ak = (nu - 1.0) * (1.0 / (k + nu - 1.0) - rho * rho / (k + nu + 1.0)) + (n - 4.0) / (2.0 * k + n);
    const double Bk = -(n - 4.0) / (2.0 * k + n);
    const double Phi = Ak * rk + Bk * rk * r * r;
    const double rhok = (k == 0) ? 1.0 : rhok1 * rho;
    double step = 0.0;
    if (k >= 1) {
      const double dC = 2.0 * nu * d_cur;
      cx += rhok1 * (k * c_cur - t * dC) * Phi;
      cy += rhok1 * dC * Phi;
      step = std::abs(rhok1 * Phi) * (k + 2.0 * nu) * o_cur * 2.0;
    }
    const double dA = -2.0 * (nu - 1.0) / (k + nu + 1.0);
    cxx += rhok * c_cur * rk * dA;
    step += std::abs(rhok * rk * dA) * o_cur;
    if (k >= 1 && rho * r == 0.0) break;
    const double mag = std::abs(cx) + std::abs(cy) + std::abs(cxx);
    if (k >= 2 && step <= tol_ * mag) {
      if (++small_run >= 3) break;
    } else if (k >= 2) {
      small_run = 0;
    }
    if (k == max_modes_ - 1) throw SeriesTruncationError("gradient series did not converge", max_modes_);
    rk *= r;
  }
  return cx * pp.xhat + cy * pp.yhat + cxx * x;
}

std::shared_ptr<const CorrectionField> BallGreen::correction_field(const Bubble& b) const {
  if (!(b.dim() == dim_)) throw UsageError("bubble dimension differs from Green's function dimension");
  const int n = dim_.n();
  const double rho = b.center().norm();
  if (!(rho < 1.0)) throw UsageError("bubble center must lie strictly inside the ball");
  auto cf = std::shared_ptr<CorrectionField>(new CorrectionField(b));
  const double lam = b.rate();
  const double nu = 0.5 * (n - 2.0);
  const double alpha = dim_.alpha();
  const double c0 = b.c0();
  cf->nu_ = nu;
  cf->axis_ = Point::Zero(n);
  if (rho > 0.0) {
    cf->axis_ = b.center() / rho;
  } else {
    cf->axis_[0] = 1.0;
  }
  const double d = 1.0 - rho;
  if (lam * d < 10.0) {
    cf->outside_regime_ = true;
    std::ostringstream msg;
    msg << "lambda*d = " << lam * d << " < 10: outside the asymptotic regime";
    cf->warnings_.push_back(msg.str());
  }
  const double A = 1.0 + rho * rho + 1.0 / (lam * lam);
  const double q = 2.0 * rho / (A + std::sqrt(A * A - 4.0 * rho * rho));
  const double Pf = lam * lam * A / (1.0 + q * q);
  int K = 1;
  if (q > 0.0) {
    while (K < max_modes_ && K * std::log(q) + (n + 2.0) * std::log(K + 1.0) > std::log(1e-18)) ++K;
    if (K >= max_modes_) throw SeriesTruncationError("correction field needs too many modes", K);
    ++K;
  }
  auto Pm = [&](double beta) { return std::pow(Pf, -beta); };
  const double pm1 = Pm(nu - 1.0), p0 = Pm(nu), p1 = Pm(nu + 1.0), p2 = Pm(nu + 2.0);
  std::vector<double> g(K), h(K), dg(K), dh(K);
  const double la = std::pow(lam, alpha);
  for (int k = 0; k < K; ++k) {
    const double zm1 = zonal_power_coefficient(-1, nu, q, k);
    const double z0 = zonal_power_coefficient(0, nu, q, k);
    const double z1 = zonal_power_coefficient(1, nu, q, k);
    const double z2 = zonal_power_coefficient(2, nu, q, k);
    const double um1 = pm1 * zm1, u0 = p0 * z0, u1 = p1 * z1, u2 = p2 * z2;
    g[k] = c0 * la * um1;
    h[k] = c0 * la * lam * lam * (-2.0 * (n - 4.0) * u0 - (n - 4.0) * (n - 2.0) * u1);
    dg[k] = c0 * alpha * la / lam * (2.0 * u0 - um1);
    dh[k] = c0 * la * lam *
            (-2.0 * (n - 4.0) * ((1.0 - nu) * u0 + 2.0 * nu * u1) -
             (n - 4.0) * (n - 2.0) * (-(nu + 1.0) * u1 + 2.0 * (nu + 1.0) * u2));
  }
  cf->phi_ = ZonalBiharmonic::from_boundary_data(n, g, h);
  cf->dphi_ = ZonalBiharmonic::from_boundary_data(n, dg, dh);
  return cf;
}

CorrectionValues CorrectionField::eval_polar(double r, double t) const {
  std::vector<double>& C = tl_gegenbauer;
  gegenbauer_values(phi_.modes() - 1, nu_, t, C);
  CorrectionValues v;
  v.phi = phi_.value(r, C);
  v.lap_phi = phi_.laplacian(r, C);
  v.d_lambda_phi = dphi_.value(r, C);
  v.d_lambda_lap_phi = dphi_.laplacian(r, C);
  return v;
}

CorrectionValues CorrectionField::eval_all(const Point& y) const {
  const double r = y.norm();
  const double t = (r > 0.0) ? std::clamp(axis_.dot(y) / r, -1.0, 1.0) : 1.0;
  return eval_polar(r, t);
}

double CorrectionField::eval(const Point& y) const { return eval_all(y).phi; }

ProjectedBubble::ProjectedBubble(Bubble b, std::shared_ptr<const CorrectionField> correction)
    : bubble_(std::move(b)), correction_(std::move(correction)) {}

const CorrectionField& ProjectedBubble::correction() const {
  if (!correction_) throw CorrectionNotInitialized("projected bubble has no correction field");
  return *correction_;
}

double eval_proj_delta(const ProjectedBubble& pb, const Point& y) {
  return eval_delta(pb.bubble(), y) - pb.correction().eval(y);
}

}  // namespace navier_bubble
