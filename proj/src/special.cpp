#include "navier_bubble/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace navier_bubble {

namespace {

constexpr double kLanczosG = 7.0;
constexpr double kLanczosCoeff[9] = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// Returns log Gamma(x) for x >= 1/2 and the series value a(x).
double lanczos_log(double x) {
  x -= 1.0;
  double a = kLanczosCoeff[0];
  const double t = x + kLanczosG + 0.5;
  for (int i = 1; i < 9; ++i) a += kLanczosCoeff[i] / (x + i);
  return 0.5 * std::log(2.0 * std::numbers::pi) + (x + 0.5) * std::log(t) - t + std::log(a);
}

}  // namespace

double gamma_fn(double x) {
  if (x == std::floor(x) && x <= 0.0) throw std::domain_error("gamma_fn: pole at non-positive integer");
  if (x < 0.5) {
    return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
  }
  if (x == std::floor(x) && x <= 25.0) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    return f;
  }
  return std::exp(lanczos_log(x));
}

double log_gamma(double x) {
  if (x <= 0.0) throw std::domain_error("log_gamma: argument must be positive");
  if (x < 0.5) return std::log(std::numbers::pi / std::sin(std::numbers::pi * x)) - lanczos_log(1.0 - x);
  return lanczos_log(x);
}

double digamma(double x) {
  if (x == std::floor(x) && x <= 0.0) throw std::domain_error("digamma: pole at non-positive integer");
  if (x < 0.0) return digamma(1.0 - x) - std::numbers::pi / std::tan(std::numbers::pi * x);
  double acc = 0.0;
  while (x < 12.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                       inv2 * (1.0 / 252 -
                               inv2 * (1.0 / 240 - inv2 * (1.0 / 132 - inv2 * (691.0 / 32760 - inv2 / 12))))));
  return acc + std::log(x) - 0.5 * inv - series;
}

double unit_sphere_area(int n) {
  if (n < 1) throw std::domain_error("unit_sphere_area: n must be >= 1");
  double a = (n % 2 == 1) ? 2.0 : 2.0 * std::numbers::pi;
  for (int m = (n % 2 == 1) ? 3 : 4; m <= n; m += 2) a *= 2.0 * std::numbers::pi / (m - 2);
  return a;
}

double unit_ball_volume(int n) { return unit_sphere_area(n) / n; }

}  // namespace navier_bubble
