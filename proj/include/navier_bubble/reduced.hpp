#pragma once

#include <optional>
#include <string>
#include <vector>

#include "navier_bubble/context.hpp"

namespace navier_bubble {

enum class Problem { subcritical, supercritical };

const char* to_string(Problem p);

struct ReducedState {
  Point x;
  double lambda = 0.0;
  double eps = 0.0;
  double psi = 0.0;
  double dpsi_dlambda = 0.0;
};

struct RateSolution {
  Point x;
  double eps = 0.0;
  double t_eps = 0.0;
  double t0 = 0.0;
  double lambda_eps = 0.0;
  double residual = 0.0;
  // largest magnitude among the balance terms at the root
  double scale = 0.0;
  bool root_found = false;
  std::string diagnostic;
  int iterations = 0;
};

struct BalanceOptions {
  // drop the c2 Delta K / lambda^3 term (flat K regime)
  bool drop_laplacian = false;
  // multiply the balance by n K(x) / (n-4); same roots, different residual scale
  bool alt_normalization = false;
};

// (2n c1 H(x,x) / ((n-4) S_n))^{1/(n-4)}
double t0(const FunctionalContext& ctx, const Point& x);

// Terms of the rescaled balance lambda dJ/dlambda / ((n-4) eps) at lambda = t eps^{-1/(n-4)},
// without the (S_n K)^{-2/(p+1-eps)} prefactor.
struct BalanceTerms {
  double laplacian = 0.0;
  double robin = 0.0;
  double eps = 0.0;
  double derivative = 0.0;  // d/dt of the sum
  double sum() const { return laplacian + robin + eps; }
};
BalanceTerms balance_terms(const FunctionalContext& ctx, const Point& x, double eps, double t,
                           const BalanceOptions& opt = {});

// Root t_eps of the balance in (t0/2, 3 t0/2) by safeguarded Newton. A missing
// sign change is reported through root_found = false and a diagnostic.
RateSolution solve_E_lambda(const FunctionalContext& ctx, const Point& x, double eps, const BalanceOptions& opt = {});

// Root of the finite-difference gradient of energy_direct in lambda, searched in
// the same bracket. rel_step is the relative finite-difference step.
RateSolution solve_direct_gradient_root(const FunctionalContext& ctx, const Point& x, double eps,
                                        double rel_step = 1e-3);

struct LandscapeGrid {
  // signed coordinates along the first axis
  std::vector<double> x_coords;
  std::vector<double> lambdas;
};

enum class Extremum { min, max };

struct LandscapeResult {
  std::vector<ReducedState> states;  // x-major order
  ReducedState argext;
  bool interior = false;
  std::vector<std::string> warnings;
};

// psi_eps(x, lambda, 0) on the grid. Extremum::min takes the global minimum;
// Extremum::max takes, for each x, the minimum over lambda and then the maximum over x.
LandscapeResult landscape_scan(const FunctionalContext& ctx, const LandscapeGrid& grid, double eps,
                               Extremum mode = Extremum::min, Problem problem = Problem::subcritical);

enum class Verdict { existence_predicted, nonexistence_predicted, inconclusive };

const char* to_string(Verdict v);

struct CriterionVerdict {
  std::string theorem;  // T14 | T15 | T16 | T17
  std::string clause;   // (i), (ii), (iii) or empty
  Point point;
  double quantity = 0.0;
  Verdict verdict = Verdict::inconclusive;
  std::vector<std::string> warnings;
};

// Pure sign logic: the theorem, clause and verdict for dimension n, problem and quantity.
CriterionVerdict verdict_for(int n, Problem problem, double quantity);

// n = 5: c1 H; n = 6: c1 H - c2 Delta K / (36 K); n >= 7: Delta K (subcritical) or -Delta K (supercritical).
double criterion_quantity(const FunctionalContext& ctx, const Point& x0, Problem problem);

CriterionVerdict criteria(const FunctionalContext& ctx, const Point& x0, Problem problem);

}  // namespace navier_bubble
