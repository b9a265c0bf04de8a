#include "navier_bubble/kfield.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "navier_bubble/errors.hpp"

namespace navier_bubble {

namespace {

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// coefficients of sigma(t)^m truncated at degree j, sigma = a t + t^2
std::vector<std::vector<double>> sigma_powers(double a, int j) {
  std::vector<std::vector<double>> pw(j + 1, std::vector<double>(j + 1, 0.0));
  pw[0][0] = 1.0;
  for (int m = 1; m <= j; ++m) {
    for (int d = 0; d <= j; ++d) {
      if (pw[m - 1][d] == 0.0) continue;
      if (d + 1 <= j) pw[m][d + 1] += a * pw[m - 1][d];
      if (d + 2 <= j) pw[m][d + 2] += pw[m - 1][d];
    }
  }
  return pw;
}

}  // namespace

KField::KField(KFamily f, std::vector<double> p) : family_(f), params_(std::move(p)) {
  for (double v : params_) {
    if (!std::isfinite(v)) throw UsageError("K parameters must be finite");
  }
  const double m = min_on_ball();
  if (!(m > 0.0)) {
    std::ostringstream msg;
    msg << "K = " << descriptor() << " is not positive on the closed unit ball (min " << m << ")";
    throw PositivityViolation(msg.str());
  }
}

KField KField::constant(double c) { return KField(KFamily::constant, {c}); }
KField KField::quadratic(double a, double b) { return KField(KFamily::quadratic, {a, b}); }
KField KField::gaussian(double A, double s) {
  if (!(s > 0.0)) throw UsageError("gaussian width must be positive");
  return KField(KFamily::gaussian, {A, s});
}
KField KField::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) throw UsageError("polynomial K needs at least one coefficient");
  return KField(KFamily::polynomial, std::move(coeffs));
}

std::string KField::descriptor() const {
  std::string s;
  switch (family_) {
    case KFamily::constant: s = "const:"; break;
    case KFamily::quadratic: s = "quad:"; break;
    case KFamily::gaussian: s = "gauss:"; break;
    case KFamily::polynomial: s = "poly:"; break;
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i) s += ",";
    s += format_number(params_[i]);
  }
  return s;
}

double KField::profile_derivative(double s, int m) const {
  switch (family_) {
    case KFamily::constant:
      return m == 0 ? params_[0] : 0.0;
    case KFamily::quadratic:
      if (m == 0) return params_[0] + params_[1] * s;
      return m == 1 ? params_[1] : 0.0;
    case KFamily::gaussian: {
      const double A = params_[0], w = 1.0 / (params_[1] * params_[1]);
      const double e = A * std::pow(-w, m) * std::exp(-s * w);
      return m == 0 ? 1.0 + e : e;
    }
    case KFamily::polynomial: {
      double acc = 0.0;
      for (int i = static_cast<int>(params_.size()) - 1; i >= m; --i) {
        double fall = 1.0;
        for (int q = 0; q < m; ++q) fall *= (i - q);
        acc = acc * s + params_[i] * fall;
      }
      return acc;
    }
  }
  return 0.0;
}

Point KField::gradient(const Point& y) const { return 2.0 * profile_derivative(y.squaredNorm(), 1) * y; }

double KField::laplacian(const Point& y) const {
  const double s = y.squaredNorm();
  const double n = static_cast<double>(y.size());
  return 4.0 * s * profile_derivative(s, 2) + 2.0 * n * profile_derivative(s, 1);
}

double KField::directional_derivative(const Point& x, const Point& e, int j) const {
  if (j == 0) return value(x);
  const double s0 = x.squaredNorm();
  const double a = 2.0 * x.dot(e) / e.squaredNorm();
  const double scale = std::pow(e.norm(), j);
  // K(x + t e/|e|) = sum_m k^(m)(s0) sigma^m / m!, sigma = a t + t^2
  const auto pw = sigma_powers(a, j);
  double coeff = 0.0;
  double fact = 1.0;
  for (int m = 1; m <= j; ++m) {
    fact *= m;
    coeff += profile_derivative(s0, m) / fact * pw[m][j];
  }
  double jfact = 1.0;
  for (int q = 2; q <= j; ++q) jfact *= q;
  return coeff * jfact * scale;
}

double KField::derivative_norm(const Point& x, int j) const {
  if (j == 0) return std::abs(value(x));
  const int n = static_cast<int>(x.size());
  const double rho = x.norm();
  Point xhat = Point::Zero(n), perp = Point::Zero(n);
  if (rho > 0.0) {
    xhat = x / rho;
  } else {
    xhat[0] = 1.0;
  }
  // a unit vector orthogonal to xhat
  const int k = (std::abs(xhat[0]) < 0.9) ? 0 : 1;
  perp[k] = 1.0;
  perp -= perp.dot(xhat) * xhat;
  perp.normalize();
  auto at = [&](double c) {
    const Point e = c * xhat + std::sqrt(std::max(0.0, 1.0 - c * c)) * perp;
    return std::abs(directional_derivative(x, e, j));
  };
  const int samples = 400;
  double best = 0.0, best_c = 1.0;
  for (int i = 0; i <= samples; ++i) {
    const double c = -1.0 + 2.0 * i / samples;
    const double v = at(c);
    if (v > best) {
      best = v;
      best_c = c;
    }
  }
  // golden-section refinement around the best sample
  double lo = std::max(-1.0, best_c - 2.0 / samples), hi = std::min(1.0, best_c + 2.0 / samples);
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 60; ++it) {
    const double c1 = hi - g * (hi - lo), c2 = lo + g * (hi - lo);
    if (at(c1) > at(c2)) {
      hi = c2;
    } else {
      lo = c1;
    }
  }
  return std::max(best, at(0.5 * (lo + hi)));
}

double KField::min_on_ball() const {
  switch (family_) {
    case KFamily::constant:
      return params_[0];
    case KFamily::quadratic:
      return std::min(params_[0], params_[0] + params_[1]);
    case KFamily::gaussian:
      return std::min(profile(0.0), profile(1.0));
    case KFamily::polynomial: {
      double m = std::min(profile(0.0), profile(1.0));
      const int samples = 4000;
      for (int i = 0; i <= samples; ++i) m = std::min(m, profile(static_cast<double>(i) / samples));
      // local minima of the polynomial in s: refine by Newton on k'
      for (int i = 0; i < samples; ++i) {
        double s = (i + 0.5) / samples;
        for (int it = 0; it < 30; ++it) {
          const double d2 = profile_derivative(s, 2);
          if (d2 == 0.0) break;
          const double step = profile_derivative(s, 1) / d2;
          s -= step;
          if (s < 0.0 || s > 1.0 || std::abs(step) < 1e-15) break;
        }
        if (s >= 0.0 && s <= 1.0) m = std::min(m, profile(s));
      }
      return m;
    }
  }
  return 0.0;
}

KField KField::scaled(double c) const {
  std::vector<double> p = params_;
  switch (family_) {
    case KFamily::constant:
    case KFamily::quadratic:
    case KFamily::polynomial:
      for (double& v : p) v *= c;
      return KField(family_, p);
    case KFamily::gaussian: {
      // c (1 + A e) is a polynomial-free family only for c = 1
      if (c == 1.0) return *this;
      throw UsageError("gaussian K cannot be rescaled within its family");
    }
  }
  return *this;
}

const char* to_string(KFamily f) {
  switch (f) {
    case KFamily::constant: return "constant";
    case KFamily::quadratic: return "quadratic-bump";
    case KFamily::gaussian: return "gaussian";
    case KFamily::polynomial: return "user-polynomial";
  }
  return "unknown";
}

}  // namespace navier_bubble
