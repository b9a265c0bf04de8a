#pragma once

#include <optional>
#include <string>
#include <vector>

#include "navier_bubble/context.hpp"

namespace navier_bubble {

struct GalerkinField;

enum class Formula { eq212, prop24, lemma25, lemma26, appx1, appx2, appx3, appx4, appx5 };

const char* formula_id(Formula f);
Formula parse_formula(const std::string& s);
Formula appendix_formula(int item);

struct ExpansionReport {
  std::string formula_id;
  Point x;
  double lambda = 0.0;
  double eps = 0.0;
  int n = 0;
  std::string k_descriptor;
  double direct = 0.0;
  double expansion = 0.0;
  double residual = 0.0;
  // exponent of lambda in the slowest claimed remainder term (0 for terms with no decay)
  double claimed_next_order = 0.0;
  std::optional<double> fitted_slope;
  // numerical value of the claimed error bracket, when the formula has one
  std::optional<double> envelope;
  std::vector<std::string> warnings;
};

// J_eps(P delta_{x,lambda}) by quadrature.
double energy_direct(const FunctionalContext& ctx, const Point& x, double lambda, double eps,
                     std::vector<std::string>* warnings = nullptr);
// Truncated asymptotic expansion of J_eps(P delta).
double energy_expansion(const FunctionalContext& ctx, const Point& x, double lambda, double eps);

// l_eps(P delta) = ||P delta||^2 / int K (P delta)^{p+1-eps}
double l_eps_direct(const FunctionalContext& ctx, const Point& x, double lambda, double eps);
// Sum of the error terms bounding l_eps - 1/K(x)
double l_eps_envelope(const FunctionalContext& ctx, const Point& x, double lambda, double eps);

// dJ/dlambda by central differences with step lambda * rel_step, refined by
// one Richardson step when richardson is set.
double grad_lambda_direct(const FunctionalContext& ctx, const Point& x, double lambda, double eps,
                          double rel_step = 1e-4, bool richardson = true);
double grad_lambda_expansion(const FunctionalContext& ctx, const Point& x, double lambda, double eps);

// Direct value and leading terms of the five appendix integrals.
double appendix_direct(const FunctionalContext& ctx, int item, const Point& x, double lambda, double eps);
double appendix_expansion(const FunctionalContext& ctx, int item, const Point& x, double lambda, double eps);

ExpansionReport eq212_check(const FunctionalContext& ctx, const Point& x, double lambda);
ExpansionReport prop24_check(const FunctionalContext& ctx, const Point& x, double lambda, double eps);
ExpansionReport l_eps_expansion_check(const FunctionalContext& ctx, const Point& x, double lambda, double eps);
ExpansionReport grad_lambda_check(const FunctionalContext& ctx, const Point& x, double lambda, double eps);
// With a non-empty sweep the fitted slope over the sweep is attached.
ExpansionReport appendix_integral_checks(const FunctionalContext& ctx, int item, const Point& x, double lambda,
                                         double eps, const std::vector<double>& sweep = {});

ExpansionReport check(const FunctionalContext& ctx, Formula f, const Point& x, double lambda, double eps);
// One report per lambda; every report carries the fitted slope of the residuals.
std::vector<ExpansionReport> expansion_sweep(const FunctionalContext& ctx, Formula f, const Point& x,
                                             const std::vector<double>& lambdas, double eps);

// floor((n-4)/2)
int taylor_order(const Dimension& dim);

// |int K (P delta)^{p-eps} v| / (envelope * ||v||), envelope
// eps + sum_{j<=k} |D^jK(x)|/lambda^j + lambda^{-(k+1)} + (lambda d)^{-((n-4)/2 + theta)}.
double v_pairing_bound_check(const FunctionalContext& ctx, const Point& x, double lambda, double eps,
                             const GalerkinField& v, double theta = 0.25);

}  // namespace navier_bubble
