// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "navier_bubble/ball_green.hpp"
#include "navier_bubble/constants.hpp"
#include "navier_bubble/expansions.hpp"
#include "navier_bubble/fit.hpp"
#include "navier_bubble/galerkin.hpp"
#include "navier_bubble/radial_pde.hpp"
#include "navier_bubble/reduced.hpp"

using namespace navier_bubble;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

void note(Outcome& o, bool ok, const char* fmt, ...) __attribute__((format(printf, 3, 4)));
void note(Outcome& o, bool ok, const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  if (!o.detail.empty()) o.detail += "; ";
  o.detail += buf;
  if (!ok) o.detail += " [x]";
  o.pass = o.pass && ok;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

FunctionalContext unit_context(int n) { return FunctionalContext(Dimension(n), KField::constant(1.0), 1e-12); }

Outcome constants_oracle() {
  Outcome o;
  double worst = 0.0;
  for (int n = 5; n <= 10; ++n) {
    const Dimension d(n);
    const auto c = closed_form_constants(d), q = quadrature_constants(d);
    for (double e : {rel(q.Sn, c.Sn), rel(q.c1, c.c1), rel(q.c2, c.c2), rel(q.c3, c.c3)}) worst = std::max(worst, e);
  }
  note(o, worst <= 1e-8, "max rel diff over n=5..10 and S_n,c1,c2,c3 = %.2e (tol 1e-8)", worst);
  return o;
}

Outcome sobolev_quotient() {
  Outcome o;
  for (int n : {5, 6}) {
    const auto s = sobolev_quotient_check(Dimension(n));
    const double e = rel(s.quotient, s.expected);
    note(o, e <= 1e-6, "n=%d quotient %.12f vs S_n^{4/n} %.12f rel %.1e", n, s.quotient, s.expected, e);
  }
  return o;
}

Outcome ball_regular_part() {
  Outcome o;
  double worst_h = 0.0, worst_g = 0.0;
  for (int n = 5; n <= 8; ++n) {
    const Dimension d(n);
    const BallGreen g(d);
    worst_h = std::max(worst_h, std::abs(g.robin(d.origin()) - (2.0 * n - 4.0) / n));
    worst_g = std::max(worst_g, g.grad_x_regular_part(d.origin(), d.origin()).norm());
  }
  note(o, worst_h <= 1e-10, "max |H(0,0) - (2n-4)/n| over n=5..8 = %.1e", worst_h);
  note(o, worst_g <= 1e-8, "max |grad_x H(0,0)| = %.1e", worst_g);
  return o;
}

const std::vector<double> kSweep{5, 10, 20, 40, 80};

Outcome projected_norm_slope() {
  Outcome o;
  const auto ctx = unit_context(5);
  const auto reps = expansion_sweep(ctx, Formula::eq212, ctx.dim.origin(), kSweep, 0.0);
  const double s = *reps[0].fitted_slope;
  note(o, std::abs(s + 3.0) <= 0.3, "residual slope over lambda 5..80 = %.3f (target -3 +/- 0.3)", s);
  return o;
}

Outcome energy_expansion_check() {
  Outcome o;
  const auto ctx = unit_context(5);
  const Point x = ctx.dim.origin();
  const auto reps = expansion_sweep(ctx, Formula::prop24, x, kSweep, 0.0);
  const double s = *reps[0].fitted_slope;
  note(o, s <= -2.0 + 0.3, "eps=0 residual slope = %.3f (<= -1.7)", s);
  const double eps = 1e-3;
  double worst = 0.0;
  bool moved = true;
  for (std::size_t i = 0; i < kSweep.size(); ++i) {
    const auto r1 = prop24_check(ctx, x, kSweep[i], eps);
    const double predicted = r1.expansion - reps[i].expansion;
    const double measured = r1.direct - reps[i].direct;
    moved = moved && std::abs(predicted) > 0.0;
    worst = std::max(worst, std::abs(measured - predicted) / reps[i].residual);
  }
  note(o, moved && worst <= 2.0, "eps=1e-3 shift: max |direct shift - expansion shift| / eps=0 residual = %.3f (<= 2)",
       worst);
  return o;
}

Outcome gradient_cancellation() {
  Outcome o;
  const auto ctx = unit_context(5);
  const UniversalConstants& c = ctx.constants;
  const Point x = ctx.dim.origin();
  const double eps = 1e-4, H = 1.2;
  const double tstar = 10.0 * c.c1 / c.Sn;
  const double lam = tstar * H / eps;
  const double pre = std::pow(c.Sn, -2.0 / (ctx.dim.p_plus_one() - eps));
  const double h_term = pre * c.c1 * H / (lam * lam);
  const double e_term = pre * c.Sn * eps / (10.0 * lam);
  const double g = grad_lambda_expansion(ctx, x, lam, eps);
  const double ratio = std::abs(g) / std::min(h_term, e_term);
  note(o, ratio <= 0.05, "|grad expansion| / surviving term = %.2e at lambda = %.1f", ratio, lam);
  const double lo = 0.8 * lam, hi = 1.25 * lam;
  const double e_lo = grad_lambda_expansion(ctx, x, lo, eps), e_hi = grad_lambda_expansion(ctx, x, hi, eps);
  const double d_lo = grad_lambda_direct(ctx, x, lo, eps), d_hi = grad_lambda_direct(ctx, x, hi, eps);
  const bool flip = e_lo * e_hi < 0.0 && d_lo * d_hi < 0.0 && d_lo * e_lo > 0.0;
  note(o, flip, "sign of dJ/dlambda at 0.8/1.25 x root: expansion %+.0f/%+.0f, direct %+.0f/%+.0f",
       std::copysign(1.0, e_lo), std::copysign(1.0, e_hi), std::copysign(1.0, d_lo), std::copysign(1.0, d_hi));
  return o;
}

Outcome reduced_root() {
  Outcome o;
  const auto ctx = unit_context(5);
  const RateSolution s = solve_E_lambda(ctx, ctx.dim.origin(), 1e-4);
  const double e = std::abs(s.t_eps / s.t0 - 1.0);
  note(o, s.root_found && e <= 0.05, "balance root t_eps/t0 - 1 = %.2e (t0 = %.6f)", s.t_eps / s.t0 - 1.0, s.t0);
  const RateSolution d = solve_direct_gradient_root(ctx, ctx.dim.origin(), 1e-4);
  const double ed = std::abs(d.t_eps / d.t0 - 1.0);
  note(o, d.root_found && ed <= 0.05, "direct-gradient root t_eps/t0 - 1 = %.2e", d.t_eps / d.t0 - 1.0);
  return o;
}

// Verdicts written out case by case: (theorem, clause, verdict).
struct Expected {
  const char* theorem;
  const char* clause;
  Verdict verdict;
};

Expected expected_verdict(int n, Problem problem, int sign) {
  if (problem == Problem::subcritical) {
    // n = 5: c1 H > 0 on the ball, the statement has no sign condition
    if (n == 5) return {"T15", "(i)", Verdict::existence_predicted};
    if (n == 6) {
      if (sign > 0) return {"T15", "(ii)", Verdict::existence_predicted};
      if (sign < 0) return {"T16", "(ii)", Verdict::nonexistence_predicted};
      return {"T15", "", Verdict::inconclusive};
    }
    return sign > 0 ? Expected{"T16", "(i)", Verdict::nonexistence_predicted} : Expected{"T14", "", Verdict::inconclusive};
  }
  if (n == 5) return {"T17", "(i)", Verdict::nonexistence_predicted};
  if (n == 6) return sign > 0 ? Expected{"T17", "(ii)", Verdict::nonexistence_predicted} : Expected{"T17", "", Verdict::inconclusive};
  return sign > 0 ? Expected{"T17", "(iii)", Verdict::nonexistence_predicted} : Expected{"T17", "", Verdict::inconclusive};
}

bool matches(const CriterionVerdict& v, const Expected& e) {
  return v.theorem == e.theorem && v.clause == e.clause && v.verdict == e.verdict;
}

Outcome criteria_table() {
  Outcome o;
  int cases = 0, bad = 0;
  for (int n = 5; n <= 8; ++n)
    for (Problem p : {Problem::subcritical, Problem::supercritical})
      for (int sign : {1, -1, 0}) {
        ++cases;
        if (!matches(verdict_for(n, p, 0.75 * sign), expected_verdict(n, p, sign))) ++bad;
      }
  note(o, bad == 0, "sign table %d/%d cases match", cases - bad, cases);

  // analytic families at the center, quantities from closed forms
  struct Family {
    int n;
    KField K;
    Problem problem;
    double quantity;
  };
  const auto c6 = closed_form_constants(Dimension(6));
  const double H6 = 4.0 / 3.0;
  const double b_neg = 6.0 * c6.c1 * H6 / c6.c2;  // c1 H - c2 (12 b) / 36 = -c1 H
  const std::vector<Family> fam = {
      {5, KField::constant(1.0), Problem::subcritical, closed_form_constants(Dimension(5)).c1 * 6.0 / 5.0},
      {5, KField::quadratic(1.0, 0.5), Problem::supercritical, closed_form_constants(Dimension(5)).c1 * 6.0 / 5.0},
      {6, KField::quadratic(1.0, 0.25), Problem::subcritical, c6.c1 * H6 - c6.c2 * 12.0 * 0.25 / 36.0},
      {6, KField::quadratic(1.0, b_neg), Problem::subcritical, -c6.c1 * H6},
      {6, KField::constant(1.0), Problem::supercritical, c6.c1 * H6},
      {7, KField::quadratic(1.0, 1.0), Problem::subcritical, 14.0},
      {7, KField::gaussian(0.5, 0.5), Problem::subcritical, -2.0 * 7 * 0.5 / 0.25},
      {8, KField::gaussian(0.5, 0.5), Problem::supercritical, 2.0 * 8 * 0.5 / 0.25},
      {8, KField::quadratic(1.0, 1.0), Problem::supercritical, -16.0},
  };
  int fbad = 0;
  double worst = 0.0;
  for (const auto& f : fam) {
    const FunctionalContext ctx(Dimension(f.n), f.K, 1e-12);
    const CriterionVerdict v = criteria(ctx, ctx.dim.origin(), f.problem);
    worst = std::max(worst, std::abs(v.quantity - f.quantity) / std::abs(f.quantity));
    const int sign = f.quantity > 0 ? 1 : -1;
    if (!matches(v, expected_verdict(f.n, f.problem, sign))) ++fbad;
  }
  note(o, fbad == 0 && worst <= 1e-9, "analytic families %d/%zu verdicts match, quantity rel err %.1e",
       static_cast<int>(fam.size()) - fbad, fam.size(), worst);
  return o;
}

Outcome radial_branch() {
  Outcome o;
  const Dimension d(5);
  std::vector<BranchPoint> pts;
  try {
    pts = continue_branch(d, KField::constant(1.0), 0.5, 5e-3, 40);
  } catch (const ContinuationStall& e) {
    pts = e.points();
    note(o, false, "%s", e.what());
  }
  const double eps_min = pts.back().eps;
  note(o, eps_min <= 5e-3 * (1 + 1e-12), "smallest eps reached %.3e", eps_min);

  std::vector<double> inv, peak, lam_eps;
  for (const auto& p : pts) {
    if (p.eps <= 10.0 * eps_min) {
      inv.push_back(1.0 / p.eps);
      peak.push_back(p.peak);
    }
    if (p.eps <= std::sqrt(10.0) * eps_min) lam_eps.push_back(p.lambda_hat * p.eps);
  }
  const double slope = fit_loglog(inv, peak).slope;
  note(o, std::abs(slope - 0.5) <= 0.1, "(a) log u(0) vs log(1/eps) slope over the last decade %.3f", slope);

  double lo = lam_eps[0], hi = lam_eps[0], mean = 0.0;
  for (double v : lam_eps) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    mean += v / lam_eps.size();
  }
  note(o, (hi - lo) / mean <= 0.15, "(b) lambda_hat eps over the last half-decade in [%.4f, %.4f], variation %.2f%%",
       lo, hi, 100.0 * (hi - lo) / mean);
  const double alpha = pts.back().alpha_hat;
  note(o, std::abs(alpha - 1.0) <= 0.05, "(c) alpha_hat = %.5f", alpha);

  const auto ctx = unit_context(5);
  const double t0 = navier_bubble::t0(ctx, ctx.dim.origin());
  const double c = pts.back().lambda_hat * eps_min;
  note(o, std::abs(c / t0 - 1.0) <= 0.2, "lambda_hat eps = %.4f vs t* H(0,0) = %.4f (rel %.2e)", c, t0, c / t0 - 1.0);
  return o;
}

Outcome galerkin_v_check() {
  Outcome o;
  const auto ctx = unit_context(5);
  const Point x = ctx.dim.origin();
  std::vector<double> co;
  for (int m : {8, 16, 32}) co.push_back(galerkin_v(ctx, x, 40.0, 0.0, m).coercivity);
  const double ref = co.back();
  double spread = 0.0;
  for (double v : co) spread = std::max(spread, std::abs(v / ref - 1.0));
  note(o, co[0] > 0 && co[1] > 0 && co[2] > 0 && spread <= 0.2,
       "coercivity at lambda 40 for basis 8/16/32 = %.4f/%.4f/%.4f (max dev %.1f%%)", co[0], co[1], co[2],
       100.0 * spread);
  const std::vector<double> lams{80, 160, 320, 640};
  std::vector<double> norms;
  for (double l : lams) norms.push_back(galerkin_v(ctx, x, l, 0.0, 32).norm);
  const double s = fit_loglog(lams, norms).slope;
  note(o, s < 0.0, "||v|| over lambda 80..640 = %.4f..%.4f, slope %.3f", norms.front(), norms.back(), s);
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all = {
      {1, "constants oracle", 10, constants_oracle},
      {2, "Sobolev quotient", 10, sobolev_quotient},
      {3, "ball regular part", 60, ball_regular_part},
      {4, "projected bubble norm slope", 60, projected_norm_slope},
      {5, "energy expansion", 120, energy_expansion_check},
      {6, "gradient cancellation", 60, gradient_cancellation},
      {7, "reduced root", 60, reduced_root},
      {8, "criteria table", 60, criteria_table},
      {9, "radial branch", 600, radial_branch},
      {10, "Galerkin v", 120, galerkin_v_check},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto t = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
    const bool in_time = s < c.limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("criterion %2d %s  %s: %s (%.2f s, limit %.0f s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), s, c.limit_s);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(all.size()) - failures, all.size());
  return failures;
}
