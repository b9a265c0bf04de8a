#pragma once

#include <vector>

namespace navier_bubble {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

// Least-squares line through (x_i, y_i).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log y against log x; non-positive y are rejected.
LineFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace navier_bubble
