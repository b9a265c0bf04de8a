#include "navier_bubble/reduced.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "navier_bubble/errors.hpp"
#include "navier_bubble/expansions.hpp"
#include "navier_bubble/parallel.hpp"

namespace navier_bubble {

namespace {

void check_eps_range(double eps) {
  if (!(eps > 0.0 && eps <= 0.1)) throw UsageError("eps must lie in (0, 0.1]");
}

// J with exponent p+1-eps (subcritical) or p+1+eps (supercritical)
double signed_energy(const FunctionalContext& ctx, const Point& x, double lambda, double eps, Problem problem) {
  const double e = problem == Problem::subcritical ? eps : -eps;
  const EnergyParts parts = energy_parts(ctx, x, lambda, e);
  return parts.lap_norm2 / std::pow(parts.k_power, 2.0 / (ctx.dim.p_plus_one() - e));
}

}  // namespace

const char* to_string(Problem p) { return p == Problem::subcritical ? "P" : "Q"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::existence_predicted: return "existence-predicted";
    case Verdict::nonexistence_predicted: return "nonexistence-predicted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

double t0(const FunctionalContext& ctx, const Point& x) {
  check_interior(ctx, x);
  const double n = ctx.dim.n();
  const UniversalConstants& c = ctx.constants;
  return std::pow(2.0 * n * c.c1 * ctx.green->robin(x) / ((n - 4.0) * c.Sn), 1.0 / (n - 4.0));
}

BalanceTerms balance_terms(const FunctionalContext& ctx, const Point& x, double eps, double t,
                           const BalanceOptions& opt) {
  const double n = ctx.dim.n();
  const UniversalConstants& c = ctx.constants;
  const double K = ctx.K.value(x);
  const double H = ctx.green->robin(x);
  const double lapK = opt.drop_laplacian ? 0.0 : ctx.K.laplacian(x);
  const double scale = opt.alt_normalization ? n * K / (n - 4.0) : 1.0;
  BalanceTerms b;
  const double lap_coeff = c.c2 * lapK / (n * n * K) * std::pow(eps, 2.0 / (n - 4.0) - 1.0);
  b.laplacian = scale * lap_coeff / (t * t);
  b.robin = -scale * c.c1 * H / std::pow(t, n - 4.0);
  b.eps = scale * (n - 4.0) * c.Sn / (2.0 * n);
  b.derivative = scale * (-2.0 * lap_coeff / (t * t * t) + (n - 4.0) * c.c1 * H / std::pow(t, n - 3.0));
  return b;
}

RateSolution solve_E_lambda(const FunctionalContext& ctx, const Point& x, double eps, const BalanceOptions& opt) {
  check_eps_range(eps);
  RateSolution sol;
  sol.x = x;
  sol.eps = eps;
  sol.t0 = t0(ctx, x);
  const double n = ctx.dim.n();
  auto g = [&](double t) { return balance_terms(ctx, x, eps, t, opt); };
  double a = 0.5 * sol.t0, b = 1.5 * sol.t0;
  double ga = g(a).sum(), gb = g(b).sum();
  if (ga == 0.0 || gb == 0.0 || (ga < 0.0) == (gb < 0.0)) {
    if (ga != 0.0 && gb != 0.0) {
      std::ostringstream s;
      s << "no-root-in-bracket: balance has sign " << (ga > 0 ? "+" : "-") << " on (t0/2, 3t0/2) = (" << a << ", "
        << b << ")";
      sol.diagnostic = s.str();
      sol.t_eps = std::numeric_limits<double>::quiet_NaN();
      sol.lambda_eps = std::numeric_limits<double>::quiet_NaN();
      return sol;
    }
  }
  double t = ga == 0.0 ? a : (gb == 0.0 ? b : 0.5 * (a + b));
  for (int it = 0; it < 200; ++it) {
    sol.iterations = it + 1;
    const BalanceTerms bt = g(t);
    const double v = bt.sum();
    const double scale = std::max({std::abs(bt.laplacian), std::abs(bt.robin), std::abs(bt.eps)});
    if (std::abs(v) <= 1e-14 * scale) break;
    if ((v < 0.0) == (ga < 0.0)) {
      a = t;
      ga = v;
    } else {
      b = t;
    }
    double next = bt.derivative != 0.0 ? t - v / bt.derivative : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - t) <= 1e-16 * t) break;
    t = next;
  }
  const BalanceTerms bt = g(t);
  sol.t_eps = t;
  sol.lambda_eps = t * std::pow(eps, -1.0 / (n - 4.0));
  sol.residual = bt.sum();
  sol.scale = std::max({std::abs(bt.laplacian), std::abs(bt.robin), std::abs(bt.eps)});
  sol.root_found = true;
  return sol;
}

RateSolution solve_direct_gradient_root(const FunctionalContext& ctx, const Point& x, double eps, double rel_step) {
  check_eps_range(eps);
  RateSolution sol;
  sol.x = x;
  sol.eps = eps;
  sol.t0 = t0(ctx, x);
  const double n = ctx.dim.n();
  const double unit = std::pow(eps, -1.0 / (n - 4.0));
  auto g = [&](double lam) { return grad_lambda_direct(ctx, x, lam, eps, rel_step); };
  double a = 0.5 * sol.t0 * unit, b = 1.5 * sol.t0 * unit;
  double ga = g(a), gb = g(b);
  if ((ga < 0.0) == (gb < 0.0)) {
    sol.diagnostic = "no-root-in-bracket: finite-difference gradient has one sign on the bracket";
    sol.t_eps = sol.lambda_eps = std::numeric_limits<double>::quiet_NaN();
    return sol;
  }
  // Illinois false position
  int side = 0;
  double c = a, gc = ga;
  for (int it = 0; it < 80; ++it) {
    sol.iterations = it + 1;
    c = (a * gb - b * ga) / (gb - ga);
    gc = g(c);
    if (gc == 0.0 || (b - a) < 1e-7 * c) break;
    if ((gc < 0.0) == (gb < 0.0)) {
      b = c;
      gb = gc;
      if (side == -1) ga *= 0.5;
      side = -1;
    } else {
      a = c;
      ga = gc;
      if (side == 1) gb *= 0.5;
      side = 1;
    }
  }
  sol.lambda_eps = c;
  sol.t_eps = c / unit;
  sol.residual = gc;
  sol.scale = std::abs(grad_lambda_expansion(ctx, x, c, eps)) +
              std::pow(ctx.constants.Sn * ctx.K.value(x), -2.0 / (ctx.dim.p_plus_one() - eps)) *
                  (n - 4.0) * (n - 4.0) * ctx.constants.Sn * eps / (2.0 * n * c);
  sol.root_found = true;
  return sol;
}

LandscapeResult landscape_scan(const FunctionalContext& ctx, const LandscapeGrid& grid, double eps, Extremum mode,
                               Problem problem) {
  if (grid.x_coords.empty() || grid.lambdas.empty()) throw UsageError("landscape grid is empty");
  if (!(eps >= 0.0 && eps <= 0.1)) throw UsageError("eps must lie in [0, 0.1]");
  for (double lam : grid.lambdas) {
    if (!(lam > 0.0)) throw UsageError("grid rates must be positive");
  }
  const int n = ctx.dim.n();
  const std::size_t nx = grid.x_coords.size(), nl = grid.lambdas.size();
  LandscapeResult out;
  out.states.resize(nx * nl);
  std::vector<Point> xs;
  for (double c : grid.x_coords) {
    Point x = Point::Zero(n);
    x[0] = c;
    check_interior(ctx, x);
    xs.push_back(x);
  }
  parallel_for(nx * nl, [&](std::size_t k) {
    const std::size_t i = k / nl, j = k % nl;
    ReducedState& s = out.states[k];
    s.x = xs[i];
    s.lambda = grid.lambdas[j];
    s.eps = eps;
    s.psi = signed_energy(ctx, s.x, s.lambda, eps, problem);
  });
  std::size_t small = 0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < nl; ++j) {
      ReducedState& s = out.states[i * nl + j];
      if (!admissibility_warnings(s.x, s.lambda).empty()) ++small;
      if (nl == 1) {
        s.dpsi_dlambda = std::numeric_limits<double>::quiet_NaN();
        continue;
      }
      const std::size_t lo = j == 0 ? 0 : j - 1, hi = j + 1 == nl ? j : j + 1;
      const ReducedState& a = out.states[i * nl + lo];
      const ReducedState& b = out.states[i * nl + hi];
      s.dpsi_dlambda = (b.psi - a.psi) / (b.lambda - a.lambda);
    }
  }
  if (small) {
    std::ostringstream w;
    w << "lambda-d-small: " << small << " grid points with lambda*d < 10";
    out.warnings.push_back(w.str());
  }
  std::size_t best_i = 0, best_j = 0;
  if (mode == Extremum::min) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < out.states.size(); ++k) {
      if (out.states[k].psi < best) {
        best = out.states[k].psi;
        best_i = k / nl;
        best_j = k % nl;
      }
    }
  } else {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nx; ++i) {
      std::size_t jmin = 0;
      for (std::size_t j = 1; j < nl; ++j) {
        if (out.states[i * nl + j].psi < out.states[i * nl + jmin].psi) jmin = j;
      }
      if (out.states[i * nl + jmin].psi > best) {
        best = out.states[i * nl + jmin].psi;
        best_i = i;
        best_j = jmin;
      }
    }
  }
  out.argext = out.states[best_i * nl + best_j];
  const bool lambda_interior = nl >= 3 && best_j > 0 && best_j + 1 < nl;
  const bool x_interior = nx == 1 || (best_i > 0 && best_i + 1 < nx);
  out.interior = lambda_interior && x_interior;
  if (!out.interior) {
    std::ostringstream w;
    w << "extremum-on-boundary: grid index (" << best_i << ", " << best_j << ")";
    out.warnings.push_back(w.str());
  }
  return out;
}

CriterionVerdict verdict_for(int n, Problem problem, double quantity) {
  if (n < 5) throw UsageError("dimension must be at least 5");
  CriterionVerdict v;
  v.quantity = quantity;
  if (problem == Problem::subcritical) {
    if (n == 5) {
      v.theorem = "T15";
      v.clause = "(i)";
      v.verdict = Verdict::existence_predicted;
    } else if (n == 6) {
      if (quantity > 0.0) {
        v.theorem = "T15";
        v.clause = "(ii)";
        v.verdict = Verdict::existence_predicted;
      } else if (quantity < 0.0) {
        v.theorem = "T16";
        v.clause = "(ii)";
        v.verdict = Verdict::nonexistence_predicted;
      } else {
        v.theorem = "T15";
        v.verdict = Verdict::inconclusive;
      }
    } else {
      if (quantity > 0.0) {
        v.theorem = "T16";
        v.clause = "(i)";
        v.verdict = Verdict::nonexistence_predicted;
      } else {
        // existence needs the flatness hypotheses of T14, which a sign cannot decide
        v.theorem = "T14";
        v.verdict = Verdict::inconclusive;
      }
    }
  } else {
    v.theorem = "T17";
    if (n == 5) {
      v.clause = "(i)";
      v.verdict = Verdict::nonexistence_predicted;
    } else if (n == 6) {
      v.clause = "(ii)";
      v.verdict = quantity > 0.0 ? Verdict::nonexistence_predicted : Verdict::inconclusive;
    } else {
      v.clause = "(iii)";
      v.verdict = quantity > 0.0 ? Verdict::nonexistence_predicted : Verdict::inconclusive;
    }
    if (v.verdict == Verdict::inconclusive) v.clause.clear();
  }
  return v;
}

double criterion_quantity(const FunctionalContext& ctx, const Point& x0, Problem problem) {
  check_interior(ctx, x0);
  const int n = ctx.dim.n();
  const UniversalConstants& c = ctx.constants;
  if (n == 5) return c.c1 * ctx.green->robin(x0);
  if (n == 6) return c.c1 * ctx.green->robin(x0) - c.c2 * ctx.K.laplacian(x0) / (36.0 * ctx.K.value(x0));
  const double lapK = ctx.K.laplacian(x0);
  return problem == Problem::subcritical ? lapK : -lapK;
}

CriterionVerdict criteria(const FunctionalContext& ctx, const Point& x0, Problem problem) {
  CriterionVerdict v = verdict_for(ctx.dim.n(), problem, criterion_quantity(ctx, x0, problem));
  v.point = x0;
  if (ctx.K.gradient(x0).norm() > 1e-8) v.warnings.push_back("x0 is not a critical point of K");
  return v;
}

}  // namespace navier_bubble
