#include "navier_bubble/expansions.hpp"

#include <cmath>

#include "navier_bubble/errors.hpp"
#include "navier_bubble/fit.hpp"
#include "navier_bubble/parallel.hpp"

namespace navier_bubble {

namespace {

struct Term {
  bool present;
  double exponent;
};

double slowest(const std::vector<Term>& terms) {
  double best = -std::numeric_limits<double>::infinity();
  for (const Term& t : terms) {
    if (t.present) best = std::max(best, t.exponent);
  }
  return best;
}

bool nonzero_derivative(const FunctionalContext& ctx, const Point& x, int j) {
  return ctx.K.derivative_norm(x, j) > 1e-14 * std::max(1.0, std::abs(ctx.K.value(x)));
}

bool k_constant(const FunctionalContext& ctx) {
  return ctx.K.family() == KFamily::constant ||
         (ctx.K.family() == KFamily::gaussian && ctx.K.params()[0] == 0.0);
}

ExpansionReport make_report(const FunctionalContext& ctx, Formula f, const Point& x, double lambda, double eps) {
  ExpansionReport r;
  r.formula_id = formula_id(f);
  r.x = x;
  r.lambda = lambda;
  r.eps = eps;
  r.n = ctx.dim.n();
  r.k_descriptor = ctx.K.descriptor();
  r.warnings = admissibility_warnings(x, lambda);
  return r;
}

void finish(ExpansionReport& r) { r.residual = std::abs(r.direct - r.expansion); }

void check_lambda(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw UsageError("lambda must be positive and finite");
}

void check_eps(double eps) {
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw UsageError("eps must be non-negative");
}

}  // namespace

const char* formula_id(Formula f) {
  switch (f) {
    case Formula::eq212: return "eq212";
    case Formula::prop24: return "prop24";
    case Formula::lemma25: return "lemma25";
    case Formula::lemma26: return "lemma26";
    case Formula::appx1: return "appx1";
    case Formula::appx2: return "appx2";
    case Formula::appx3: return "appx3";
    case Formula::appx4: return "appx4";
    case Formula::appx5: return "appx5";
  }
  return "unknown";
}

Formula parse_formula(const std::string& s) {
  for (Formula f : {Formula::eq212, Formula::prop24, Formula::lemma25, Formula::lemma26, Formula::appx1, Formula::appx2,
                    Formula::appx3, Formula::appx4, Formula::appx5}) {
    if (s == formula_id(f)) return f;
  }
  throw UsageError("unknown formula '" + s + "'");
}

Formula appendix_formula(int item) {
  switch (item) {
    case 1: return Formula::appx1;
    case 2: return Formula::appx2;
    case 3: return Formula::appx3;
    case 4: return Formula::appx4;
    case 5: return Formula::appx5;
  }
  throw UsageError("appendix item must be in 1..5");
}

int taylor_order(const Dimension& dim) { return (dim.n() - 4) / 2; }

double energy_direct(const FunctionalContext& ctx, const Point& x, double lambda, double eps,
                     std::vector<std::string>* warnings) {
  check_lambda(lambda);
  check_eps(eps);
  const EnergyParts e = energy_parts(ctx, x, lambda, eps);
  if (warnings) warnings->insert(warnings->end(), e.warnings.begin(), e.warnings.end());
  const double q = ctx.dim.p_plus_one() - eps;
  return e.lap_norm2 / std::pow(e.k_power, 2.0 / q);
}

double energy_expansion(const FunctionalContext& ctx, const Point& x, double lambda, double eps) {
  check_interior(ctx, x);
  check_lambda(lambda);
  check_eps(eps);
  const double n = ctx.dim.n(), p = ctx.dim.p();
  const UniversalConstants& c = ctx.constants;
  const double K = ctx.K.value(x), lapK = ctx.K.laplacian(x);
  const double H = ctx.green->robin(x);
  const double q = p + 1.0 - eps;
  const double pre = std::pow(c.Sn, (p - 1.0 - eps) / q) / std::pow(K, 2.0 / q);
  const double bracket = 1.0 - (n - 4.0) * c.c2 * lapK / (2.0 * n * n * c.Sn * K * lambda * lambda) +
                         (n - 4.0) / n * eps * (0.5 * (n - 4.0) * std::log(lambda) + c.c3 / c.Sn) +
                         c.c1 * H / (c.Sn * std::pow(lambda, n - 4.0));
  return pre * bracket;
}

double l_eps_direct(const FunctionalContext& ctx, const Point& x, double lambda, double eps) {
  check_lambda(lambda);
  check_eps(eps);
  const EnergyParts e = energy_parts(ctx, x, lambda, eps);
  return e.lap_norm2 / e.k_power;
}

double l_eps_envelope(const FunctionalContext& ctx, const Point& x, double lambda, double eps) {
  const int n = ctx.dim.n();
  const int k = taylor_order(ctx.dim);
  double env = std::pow(lambda, -(n - 4.0)) + eps * std::abs(std::log(lambda)) + std::pow(lambda, -(2.0 * k + 2.0));
  for (int j = 2; j <= n - 4; ++j) env += ctx.K.derivative_norm(x, j) / std::pow(lambda, j);
  for (int j = 1; j <= k; ++j) {
    const double dj = ctx.K.derivative_norm(x, j);
    env += dj * dj / std::pow(lambda, 2 * j);
  }
  return env;
}

double grad_lambda_direct(const FunctionalContext& ctx, const Point& x, double lambda, double eps, double rel_step,
                          bool richardson) {
  check_lambda(lambda);
  if (!(rel_step > 0.0) || rel_step >= 0.5) throw UsageError("relative step must lie in (0, 0.5)");
  auto central = [&](double h) {
    return (energy_direct(ctx, x, lambda + h, eps) - energy_direct(ctx, x, lambda - h, eps)) / (2.0 * h);
  };
  const double h = lambda * rel_step;
  const double d1 = central(h);
  if (!richardson) return d1;
  const double d2 = central(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

double grad_lambda_expansion(const FunctionalContext& ctx, const Point& x, double lambda, double eps) {
  check_interior(ctx, x);
  check_lambda(lambda);
  check_eps(eps);
  const double n = ctx.dim.n(), p = ctx.dim.p();
  const UniversalConstants& c = ctx.constants;
  const double K = ctx.K.value(x), lapK = ctx.K.laplacian(x);
  const double H = ctx.green->robin(x);
  const double pre = std::pow(c.Sn * K, -2.0 / (p + 1.0 - eps));
  return pre * (c.c2 * (n - 4.0) * lapK / (n * n * K * std::pow(lambda, 3)) -
                c.c1 * (n - 4.0) * H / std::pow(lambda, n - 3.0) +
                (n - 4.0) * (n - 4.0) * c.Sn * eps / (2.0 * n * lambda));
}

double appendix_direct(const FunctionalContext& ctx, int item, const Point& x, double lambda, double eps) {
  check_lambda(lambda);
  check_eps(eps);
  const double p = ctx.dim.p();
  std::function<double(const NodeSample&)> f;
  switch (item) {
    case 1:
      f = [=](const NodeSample& s) { return s.k * std::pow(s.delta, p + 1.0 - eps); };
      break;
    case 2:
      f = [=](const NodeSample& s) { return s.k * std::pow(s.delta, p - eps) * s.phi.phi; };
      break;
    case 3:
      f = [=](const NodeSample& s) { return s.k * std::pow(s.delta, p - eps) * s.d_lambda_delta; };
      break;
    case 4:
      f = [=](const NodeSample& s) { return s.k * std::pow(s.delta, p - 1.0 - eps) * s.phi.phi * s.d_lambda_delta; };
      break;
    case 5:
      f = [=](const NodeSample& s) { return s.k * std::pow(s.delta, p - eps) * s.phi.d_lambda_phi; };
      break;
    default:
      throw UsageError("appendix item must be in 1..5");
  }
  const IntegralResult r = integrate_about(ctx, x, lambda, f);
  if (!r.converged) throw QuadratureNonconvergence("appendix integral did not reach tolerance", r.value, r.error_estimate);
  return r.value;
}

double appendix_expansion(const FunctionalContext& ctx, int item, const Point& x, double lambda, double eps) {
  check_interior(ctx, x);
  const double n = ctx.dim.n();
  const UniversalConstants& c = ctx.constants;
  const double K = ctx.K.value(x);
  switch (item) {
    case 1:
      return K * c.Sn + c.c2 * ctx.K.laplacian(x) / (2.0 * n * lambda * lambda) -
             eps * K * c.Sn * (0.5 * (n - 4.0) * std::log(lambda) + c.c3 / c.Sn);
    case 2:
      return c.c1 * K * ctx.green->robin(x) / std::pow(lambda, n - 4.0);
    case 3:
      return -K * (n - 4.0) * (n - 4.0) * c.Sn * eps / (4.0 * n * lambda) -
             (n - 4.0) / (2.0 * n * n) * c.c2 * ctx.K.laplacian(x) / std::pow(lambda, 3);
    case 4:
      return -(n - 4.0) * (n - 4.0) / (2.0 * (n + 4.0)) * c.c1 * K * ctx.green->robin(x) / std::pow(lambda, n - 3.0);
    case 5:
      return -0.5 * (n - 4.0) * c.c1 * K * ctx.green->robin(x) / std::pow(lambda, n - 3.0);
    default:
      throw UsageError("appendix item must be in 1..5");
  }
}

ExpansionReport eq212_check(const FunctionalContext& ctx, const Point& x, double lambda) {
  check_lambda(lambda);
  ExpansionReport r = make_report(ctx, Formula::eq212, x, lambda, 0.0);
  const double n = ctx.dim.n();
  const IntegralResult lap = integrate_about(ctx, x, lambda, [](const NodeSample& s) {
    const double v = s.lap_delta - s.phi.lap_phi;
    return v * v;
  });
  if (!lap.converged) throw QuadratureNonconvergence("norm integral did not reach tolerance", lap.value, lap.error_estimate);
  r.direct = lap.value;
  r.expansion = ctx.constants.Sn - ctx.constants.c1 * ctx.green->robin(x) / std::pow(lambda, n - 4.0);
  r.claimed_next_order = -(n - 2.0);
  finish(r);
  return r;
}

ExpansionReport prop24_check(const FunctionalContext& ctx, const Point& x, double lambda, double eps) {
  ExpansionReport r = make_report(ctx, Formula::prop24, x, lambda, eps);
  const int n = ctx.dim.n();
  r.direct = energy_direct(ctx, x, lambda, eps);
  r.expansion = energy_expansion(ctx, x, lambda, eps);
  std::vector<Term> terms{{eps > 0.0, -2.0},
                          {true, -(n - 3.0)},
                          {true, -(n - 2.0)},
                          {eps > 0.0, -(n - 4.0)},
                          {eps > 0.0, 0.0},
                          {n < 8, -2.0 * (n - 4.0)}};
  for (int j = 3; j <= n - 4; ++j) terms.push_back({nonzero_derivative(ctx, x, j), -double(j)});
  r.claimed_next_order = slowest(terms);
  finish(r);
  return r;
}

ExpansionReport l_eps_expansion_check(const FunctionalContext& ctx, const Point& x, double lambda, double eps) {
  ExpansionReport r = make_report(ctx, Formula::lemma25, x, lambda, eps);
  if (!(1.0 - x.norm() >= 0.3)) r.warnings.push_back("d(x, boundary) below 0.3");
  const int n = ctx.dim.n(), k = taylor_order(ctx.dim);
  r.direct = l_eps_direct(ctx, x, lambda, eps);
  r.expansion = 1.0 / ctx.K.value(x);
  r.envelope = l_eps_envelope(ctx, x, lambda, eps) / ctx.K.value(x);
  std::vector<Term> terms{{true, -(n - 4.0)}, {eps > 0.0, 0.0}, {true, -(2.0 * k + 2.0)}};
  for (int j = 2; j <= n - 4; ++j) terms.push_back({nonzero_derivative(ctx, x, j), -double(j)});
  for (int j = 1; j <= k; ++j) terms.push_back({nonzero_derivative(ctx, x, j), -2.0 * j});
  r.claimed_next_order = slowest(terms);
  finish(r);
  return r;
}

ExpansionReport grad_lambda_check(const FunctionalContext& ctx, const Point& x, double lambda, double eps) {
  ExpansionReport r = make_report(ctx, Formula::lemma26, x, lambda, eps);
  if (!(1.0 - x.norm() >= 0.3)) r.warnings.push_back("d(x, boundary) below 0.3");
  const int n = ctx.dim.n(), k = taylor_order(ctx.dim);
  r.direct = grad_lambda_direct(ctx, x, lambda, eps);
  r.expansion = grad_lambda_expansion(ctx, x, lambda, eps);
  std::vector<Term> terms{{eps > 0.0, -3.0},         {true, -(n - 2.0)},       {eps > 0.0, -1.0},
                          {eps > 0.0, -(n - 3.0)},   {true, -(2.0 * k + 3.0)}, {n < 8, -(2.0 * n - 7.0)}};
  for (int j = 3; j <= n - 4; ++j) terms.push_back({nonzero_derivative(ctx, x, j), -(j + 1.0)});
  for (int j = 1; j <= k; ++j) terms.push_back({nonzero_derivative(ctx, x, j), -(2.0 * j + 1.0)});
  r.claimed_next_order = slowest(terms);
  finish(r);
  return r;
}

ExpansionReport appendix_integral_checks(const FunctionalContext& ctx, int item, const Point& x, double lambda,
                                         double eps, const std::vector<double>& sweep) {
  const Formula f = appendix_formula(item);
  if (!sweep.empty()) {
    std::vector<ExpansionReport> reps = expansion_sweep(ctx, f, x, sweep, eps);
    ExpansionReport r = check(ctx, f, x, lambda, eps);
    r.fitted_slope = reps.front().fitted_slope;
    return r;
  }
  ExpansionReport r = make_report(ctx, f, x, lambda, eps);
  const int n = ctx.dim.n();
  const bool kvar = !k_constant(ctx);
  r.direct = appendix_direct(ctx, item, x, lambda, eps);
  r.expansion = appendix_expansion(ctx, item, x, lambda, eps);
  std::vector<Term> terms;
  switch (item) {
    case 1:
      terms = {{kvar, -(n - 3.0)}, {eps > 0.0, -2.0}, {eps > 0.0, 0.0}, {true, -double(n)}};
      for (int j = 3; j <= n - 4; ++j) terms.push_back({nonzero_derivative(ctx, x, j), -double(j)});
      break;
    case 2:
      terms = {{eps > 0.0, -(n - 4.0)}, {true, -(n - 2.0)}};
      break;
    case 3:
      terms = {{eps > 0.0, -1.0}, {eps > 0.0, -3.0}, {true, -(n - 2.0)}, {true, -(n + 1.0)}};
      for (int j = 3; j <= n - 4; ++j) terms.push_back({nonzero_derivative(ctx, x, j), -(j + 1.0)});
      break;
    default:
      terms = {{eps > 0.0, -(n - 3.0)}, {true, -(n - 1.0)}};
      break;
  }
  r.claimed_next_order = slowest(terms);
  finish(r);
  return r;
}

ExpansionReport check(const FunctionalContext& ctx, Formula f, const Point& x, double lambda, double eps) {
  switch (f) {
    case Formula::eq212: return eq212_check(ctx, x, lambda);
    case Formula::prop24: return prop24_check(ctx, x, lambda, eps);
    case Formula::lemma25: return l_eps_expansion_check(ctx, x, lambda, eps);
    case Formula::lemma26: return grad_lambda_check(ctx, x, lambda, eps);
    case Formula::appx1: return appendix_integral_checks(ctx, 1, x, lambda, eps);
    case Formula::appx2: return appendix_integral_checks(ctx, 2, x, lambda, eps);
    case Formula::appx3: return appendix_integral_checks(ctx, 3, x, lambda, eps);
    case Formula::appx4: return appendix_integral_checks(ctx, 4, x, lambda, eps);
    case Formula::appx5: return appendix_integral_checks(ctx, 5, x, lambda, eps);
  }
  throw UsageError("unknown formula");
}

std::vector<ExpansionReport> expansion_sweep(const FunctionalContext& ctx, Formula f, const Point& x,
                                             const std::vector<double>& lambdas, double eps) {
  std::vector<ExpansionReport> out(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t i) { out[i] = check(ctx, f, x, lambdas[i], eps); });
  if (lambdas.size() >= 2) {
    std::vector<double> res;
    bool positive = true;
    for (const auto& r : out) {
      res.push_back(r.residual);
      positive = positive && r.residual > 0.0;
    }
    if (positive) {
      const double slope = fit_loglog(lambdas, res).slope;
      for (auto& r : out) r.fitted_slope = slope;
    } else {
      for (auto& r : out) r.warnings.push_back("zero residual in sweep; slope not fitted");
    }
  }
  return out;
}

}  // namespace navier_bubble
