#include "navier_bubble/context.hpp"

#include <cmath>
#include <sstream>

#include "navier_bubble/errors.hpp"
#include "navier_bubble/special.hpp"

namespace navier_bubble {

FunctionalContext::FunctionalContext(Dimension d, KField k, double tol)
    : dim(d), K(std::move(k)), green(std::make_shared<BallGreen>(d)), constants(closed_form_constants(d)), quad(d) {
  quad.tol = tol;
}

FunctionalContext::FunctionalContext(Dimension d, KField k, std::shared_ptr<const BallGreen> g, UniversalConstants c,
                                     QuadratureSpec q)
    : dim(d), K(std::move(k)), green(std::move(g)), constants(c), quad(std::move(q)) {
  if (!green) throw UsageError("context needs a Green function");
  if (!(green->dim() == d) || !(constants.dim == d) || !(quad.dim == d)) {
    throw UsageError("context components built for different dimensions");
  }
}

void check_interior(const FunctionalContext& ctx, const Point& x) {
  if (x.size() != ctx.dim.n()) throw UsageError("point has wrong dimension");
  if (!(x.norm() < 1.0)) throw UsageError("concentration point must lie in the open unit ball");
}

std::vector<std::string> admissibility_warnings(const Point& x, double lambda) {
  std::vector<std::string> w;
  const double ld = lambda * (1.0 - x.norm());
  if (ld < 10.0) {
    std::ostringstream s;
    s << "lambda-d-small: lambda*d = " << ld << " < 10";
    w.push_back(s.str());
  }
  return w;
}

IntegralResult integrate_about(const FunctionalContext& ctx, const Point& x, double lambda,
                               const std::function<double(const NodeSample&)>& f) {
  check_interior(ctx, x);
  const Dimension& dim = ctx.dim;
  const Bubble b(dim, x, lambda);
  const auto cf = ctx.green->correction_field(b);
  const double c0 = b.c0();
  const double rho = x.norm();
  auto sample = [&](double r, double t) {
    NodeSample s;
    s.r = r;
    s.ysq = std::max(0.0, rho * rho + 2.0 * rho * r * t + r * r);
    const double ynorm = std::sqrt(s.ysq);
    const double ty = ynorm > 0.0 ? std::clamp((rho + r * t) / ynorm, -1.0, 1.0) : 1.0;
    const double r2 = r * r;
    s.k = ctx.K.profile(s.ysq);
    s.delta = profile::value(dim, c0, lambda, r2);
    s.d_lambda_delta = profile::d_lambda(dim, c0, lambda, r2);
    s.lap_delta = profile::laplacian(dim, c0, lambda, r2);
    s.phi = cf->eval_polar(std::min(ynorm, 1.0), ty);
    return f(s);
  };
  QuadratureSpec spec = ctx.quad;
  spec.peak_rate = lambda;
  if (rho == 0.0) {
    spec.peak_center.reset();
    spec.radial_extent = 1.0;
    IntegralResult res = integrate_radial([&](double r) { return sample(r, 1.0); }, 0.0, spec);
    const double area = unit_sphere_area(dim.n());
    res.value *= area;
    res.error_estimate *= area;
    return res;
  }
  spec.peak_center = x;
  return integrate_ball_axisymmetric(sample, spec);
}

EnergyParts energy_parts(const FunctionalContext& ctx, const Point& x, double lambda, double eps) {
  if (!(eps > -1.0 && eps < 1.0)) throw UsageError("exponent shift must lie in (-1, 1)");
  EnergyParts out;
  out.warnings = admissibility_warnings(x, lambda);
  const double q = ctx.dim.p_plus_one() - eps;
  const IntegralResult lap = integrate_about(ctx, x, lambda, [](const NodeSample& s) {
    const double v = s.lap_delta - s.phi.lap_phi;
    return v * v;
  });
  const IntegralResult kp = integrate_about(ctx, x, lambda, [q](const NodeSample& s) {
    const double pd = std::max(0.0, s.delta - s.phi.phi);
    return s.k * std::pow(pd, q);
  });
  for (const IntegralResult* r : {&lap, &kp}) {
    if (!r->converged) {
      throw QuadratureNonconvergence("energy integral did not reach tolerance", r->value, r->error_estimate);
    }
  }
  out.lap_norm2 = lap.value;
  out.k_power = kp.value;
  out.error_estimate = std::max(lap.error_estimate / std::abs(lap.value), kp.error_estimate / std::abs(kp.value));
  return out;
}

}  // namespace navier_bubble
