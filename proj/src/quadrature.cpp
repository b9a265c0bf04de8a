#include "navier_bubble/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <queue>

#include "navier_bubble/errors.hpp"
#include "navier_bubble/special.hpp"

namespace navier_bubble {

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error, abs_value;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  double resabs = std::abs(resk);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    resk += kWgk[j] * (f1 + f2);
    resabs += kWgk[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
  }
  Panel p{a, b, resk * h, std::abs((resk - resg) * h), resabs * std::abs(h)};
  if (!std::isfinite(p.value)) throw NumericalError("non-finite integrand value in quadrature");
  return p;
}

double inner_radius(double rho) { return std::min(1.0 - rho, 1.0); }

// Integral of f(r) r^{power} over [0, R] with panels graded about r = 0 at scale 1/lambda.
IntegralResult peaked_line(const std::function<double(double)>& f, double power, double R,
                           std::optional<double> lambda, double inner, double tol, long budget) {
  if (!(R > 0.0)) return {};
  if (!lambda) {
    std::vector<double> bp;
    const int pieces = 4;
    for (int i = 0; i <= pieces; ++i) bp.push_back(R * i / pieces);
    return adaptive_integrate([&](double r) { return f(r) * std::pow(r, power); }, bp, tol, budget);
  }
  const double lam = *lambda;
  const double r_in = std::min(inner, R);
  // inner ball in the rescaled variable z = lambda r
  std::vector<double> zbp{0.0};
  const double z_in = lam * r_in;
  for (double z = 0.25; z < z_in; z *= 2.0) zbp.push_back(z);
  if (z_in > zbp.back()) zbp.push_back(z_in);
  const double scale = std::pow(lam, -(power + 1.0));
  auto fz = [&](double z) { return f(z / lam) * std::pow(z, power) * scale; };
  IntegralResult res = adaptive_integrate(fz, zbp, tol, budget);
  if (R > r_in * (1.0 + 1e-15)) {
    std::vector<double> bp{r_in};
    for (double r = 2.0 * r_in; r < R; r *= 2.0) bp.push_back(r);
    bp.push_back(R);
    res += adaptive_integrate([&](double r) { return f(r) * std::pow(r, power); }, bp, tol,
                              std::max<long>(1000, budget - res.evals), tol * std::abs(res.value));
  }
  return res;
}

// Clenshaw-Curtis weights on [0, pi] for N (even) intervals; endpoints included.
std::vector<double> clenshaw_curtis_theta(int N) {
  std::vector<double> w(N + 1);
  for (int j = 0; j <= N; ++j) {
    double s = 0.0;
    for (int k = 1; k <= N / 2; ++k) {
      const double b = (2 * k == N) ? 1.0 : 2.0;
      s += b / (4.0 * k * k - 1.0) * std::cos(2.0 * k * j * std::numbers::pi / N);
    }
    const double c = (j == 0 || j == N) ? 1.0 : 2.0;
    w[j] = c / N * (1.0 - s) * 0.5 * std::numbers::pi;
  }
  return w;
}

double theta_node(int j, int N) { return 0.5 * std::numbers::pi * (1.0 - std::cos(j * std::numbers::pi / N)); }

struct Frame {
  Point c;
  double rho;
  Eigen::MatrixXd basis;  // column 0 is the axis, the rest span its complement
};

Frame make_frame(const QuadratureSpec& spec) {
  const int n = spec.dim.n();
  Frame fr;
  fr.c = spec.peak_center ? *spec.peak_center : Point::Zero(n);
  fr.rho = fr.c.norm();
  if (fr.rho >= 1.0) throw UsageError("peak center must lie in the open unit ball");
  Point e = Point::Zero(n);
  if (fr.rho > 0.0) {
    e = fr.c / fr.rho;
  } else {
    e[0] = 1.0;
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(e);
  fr.basis = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  if (fr.basis.col(0).dot(e) < 0.0) fr.basis.col(0) *= -1.0;
  return fr;
}

// Degree-5 symmetric rule on the unit sphere of R^m, weights summing to 1.
void transverse_rule(int m, std::vector<Eigen::VectorXd>& pts, std::vector<double>& wts) {
  pts.clear();
  wts.clear();
  if (m == 1) {
    for (double s : {1.0, -1.0}) {
      pts.push_back(Eigen::VectorXd::Constant(1, s));
      wts.push_back(0.5);
    }
    return;
  }
  const double A = (4.0 - m) / (2.0 * m * (m + 2.0));
  const double B = 1.0 / (m * (m + 2.0));
  for (int i = 0; i < m; ++i) {
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
      v[i] = s;
      pts.push_back(v);
      wts.push_back(A);
    }
  }
  const double h = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      for (double si : {1.0, -1.0}) {
        for (double sj : {1.0, -1.0}) {
          Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
          v[i] = si * h;
          v[j] = sj * h;
          pts.push_back(v);
          wts.push_back(B);
        }
      }
    }
  }
}

template <class LineFn>
IntegralResult theta_sum(const QuadratureSpec& spec, const LineFn& line) {
  const int n = spec.dim.n();
  int N = spec.angular_order;
  if (N % 2 == 1) ++N;
  const std::vector<double> w = clenshaw_curtis_theta(N);
  const std::vector<double> wh = clenshaw_curtis_theta(N / 2);
  const double area = unit_sphere_area(n - 1);
  IntegralResult total;
  double coarse = 0.0;
  double fine = 0.0;
  for (int j = 1; j < N; ++j) {
    const double th = theta_node(j, N);
    const double jac = area * std::pow(std::sin(th), n - 2);
    const IntegralResult li = line(std::cos(th), std::max<long>(1000, spec.max_evals / N));
    total.evals += li.evals;
    total.converged = total.converged && li.converged;
    total.error_estimate += w[j] * jac * li.error_estimate;
    fine += w[j] * jac * li.value;
    if (j % 2 == 0) coarse += wh[j / 2] * jac * li.value;
  }
  total.value = fine;
  total.error_estimate += std::abs(fine - coarse);
  return total;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(tol > 0.0)) throw UsageError("quadrature tolerance must be positive");
  if (max_evals < 1000) throw UsageError("quadrature budget must be at least 1000 evaluations");
  if (peak_rate && !(*peak_rate > 0.0)) throw UsageError("peak rate must be positive");
  if (peak_center && peak_center->size() != dim.n()) throw UsageError("peak center has wrong dimension");
  if (angular_order < 4) throw UsageError("angular order must be at least 4");
}

IntegralResult& IntegralResult::operator+=(const IntegralResult& o) {
  value += o.value;
  error_estimate += o.error_estimate;
  evals += o.evals;
  converged = converged && o.converged;
  return *this;
}

IntegralResult adaptive_integrate(const std::function<double(double)>& f, const std::vector<double>& breakpoints,
                                  double tol, long max_evals, double abs_floor) {
  IntegralResult res;
  std::priority_queue<Panel> heap;
  double value = 0.0, error = 0.0, absval = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i + 1] > breakpoints[i])) continue;
    Panel p = gk15(f, breakpoints[i], breakpoints[i + 1]);
    res.evals += 15;
    value += p.value;
    error += p.error;
    absval += p.abs_value;
    heap.push(p);
  }
  while (!heap.empty() && error > std::max(tol * absval, abs_floor)) {
    if (res.evals + 30 > max_evals) {
      res.converged = false;
      break;
    }
    Panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      res.converged = false;
      break;
    }
    Panel l = gk15(f, p.a, m);
    Panel r = gk15(f, m, p.b);
    res.evals += 30;
    value += l.value + r.value - p.value;
    error += l.error + r.error - p.error;
    absval += l.abs_value + r.abs_value - p.abs_value;
    heap.push(l);
    heap.push(r);
  }
  // resum to avoid drift from incremental updates
  double v = 0.0, e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  res.value = v;
  res.error_estimate = e;
  return res;
}

IntegralResult integrate_radial(const std::function<double(double)>& f, double weight, const QuadratureSpec& spec) {
  spec.validate();
  const double power = spec.dim.n() - 1.0 + weight;
  if (std::isinf(spec.radial_extent)) {
    const double s = spec.peak_rate ? *spec.peak_rate : 1.0;
    auto g = [&](double th) {
      const double tn = std::tan(th);
      const double r = tn / s;
      const double val = f(r) * std::pow(r, power) * (1.0 + tn * tn) / s;
      return std::isfinite(val) ? val : 0.0;
    };
    std::vector<double> bp;
    const int pieces = 16;
    for (int i = 0; i <= pieces; ++i) bp.push_back(0.5 * std::numbers::pi * i / pieces);
    return adaptive_integrate(g, bp, spec.tol, spec.max_evals);
  }
  return peaked_line(f, power, spec.radial_extent, spec.peak_rate, spec.radial_extent, spec.tol, spec.max_evals);
}

double ray_to_unit_sphere(double rho, double t) { return -rho * t + std::sqrt(1.0 - rho * rho * (1.0 - t * t)); }

IntegralResult integrate_ball_axisymmetric(const AxisymmetricIntegrand& g, const QuadratureSpec& spec) {
  spec.validate();
  const Frame fr = make_frame(spec);
  const double power = spec.dim.n() - 1.0;
  const double inner = inner_radius(fr.rho);
  return theta_sum(spec, [&](double t, long budget) {
    const double R = ray_to_unit_sphere(fr.rho, t);
    return peaked_line([&](double r) { return g(r, t); }, power, R, spec.peak_rate, inner, spec.tol, budget);
  });
}

IntegralResult integrate_ball(const std::function<double(const Point&)>& f, const QuadratureSpec& spec) {
  spec.validate();
  const Frame fr = make_frame(spec);
  const int n = spec.dim.n();
  std::vector<Eigen::VectorXd> tp;
  std::vector<double> tw;
  transverse_rule(n - 1, tp, tw);
  std::vector<Point> dirs;
  for (const auto& p : tp) dirs.push_back(fr.basis.rightCols(n - 1) * p);
  const Point e = fr.basis.col(0);
  const double power = n - 1.0;
  const double inner = inner_radius(fr.rho);
  return theta_sum(spec, [&](double t, long budget) {
    const double R = ray_to_unit_sphere(fr.rho, t);
    const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
    Point y(n);
    auto line = [&](double r) {
      double acc = 0.0;
      for (std::size_t k = 0; k < dirs.size(); ++k) {
        y = fr.c + r * (t * e + s * dirs[k]);
        acc += tw[k] * f(y);
      }
      return acc;
    };
    return peaked_line(line, power, R, spec.peak_rate, inner, spec.tol, budget);
  });
}

void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(m, 0.0);
  weights.assign(m, 0.0);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (m == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= m; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    nodes[i] = -x;
    nodes[m - 1 - i] = x;
    weights[i] = weights[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

AxisymmetricNodes axisymmetric_nodes(const QuadratureSpec& spec, int radial_points_per_panel) {
  spec.validate();
  const Frame fr = make_frame(spec);
  const int n = spec.dim.n();
  std::vector<double> gx, gw;
  gauss_legendre(radial_points_per_panel, gx, gw);
  int N = spec.angular_order;
  if (N % 2 == 1) ++N;
  const std::vector<double> w = clenshaw_curtis_theta(N);
  const double area = unit_sphere_area(n - 1);
  const double inner = inner_radius(fr.rho);
  AxisymmetricNodes out;
  for (int j = 1; j < N; ++j) {
    const double th = theta_node(j, N);
    const double t = std::cos(th);
    const double wt = w[j] * area * std::pow(std::sin(th), n - 2);
    const double R = ray_to_unit_sphere(fr.rho, t);
    std::vector<double> bp{0.0};
    if (spec.peak_rate) {
      const double lam = *spec.peak_rate;
      const double r_in = std::min(inner, R);
      for (double r = 0.25 / lam; r < r_in; r *= 2.0) bp.push_back(r);
      bp.push_back(r_in);
      for (double r = 2.0 * r_in; r < R; r *= 2.0) bp.push_back(r);
    } else {
      for (int i = 1; i < 4; ++i) bp.push_back(R * i / 4.0);
    }
    if (R > bp.back() * (1.0 + 1e-15)) bp.push_back(R);
    for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
      const double a = bp[k], b = bp[k + 1];
      for (int q = 0; q < radial_points_per_panel; ++q) {
        const double r = 0.5 * (a + b) + 0.5 * (b - a) * gx[q];
        out.r.push_back(r);
        out.t.push_back(t);
        out.w.push_back(wt * 0.5 * (b - a) * gw[q] * std::pow(r, n - 1));
      }
    }
  }
  return out;
}

}  // namespace navier_bubble
