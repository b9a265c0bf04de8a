#pragma once

namespace navier_bubble {

// Lanczos approximation (g = 7, 9 terms) with reflection for x < 1/2.
double gamma_fn(double x);
double log_gamma(double x);

// Recurrence up to x >= 12, then the asymptotic Bernoulli series.
double digamma(double x);

// |S^{n-1}|, the area of the unit sphere in R^n, by the two-step recurrence.
double unit_sphere_area(int n);
double unit_ball_volume(int n);

}  // namespace navier_bubble
