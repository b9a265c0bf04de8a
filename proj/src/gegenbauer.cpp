#include "navier_bubble/gegenbauer.hpp"

#include <cmath>
#include <stdexcept>

namespace navier_bubble {

double zonal_power_coefficient(int j, double nu, double q, int k) {
  const double qk = std::pow(q, k);
  const double w = 1.0 - q * q;
  switch (j) {
    case -1:
      return (nu - 1.0) * (qk / (k + nu - 1.0) - qk * q * q / (k + nu + 1.0));
    case 0:
      return qk;
    case 1:
      return (k + nu) * qk / (nu * w);
    case 2:
      return (k + nu) * qk / (nu * (nu + 1.0) * w) * ((k + nu + 1.0) / w + 2.0 * q * q / (w * w));
    default:
      throw std::invalid_argument("zonal_power_coefficient: j must be in {-1,0,1,2}");
  }
}

void gegenbauer_values(int kmax, double nu, double t, std::vector<double>& out) {
  out.resize(kmax + 1);
  out[0] = 1.0;
  if (kmax >= 1) out[1] = 2.0 * nu * t;
  for (int k = 2; k <= kmax; ++k) {
    out[k] = (2.0 * t * (k + nu - 1.0) * out[k - 1] - (k + 2.0 * nu - 2.0) * out[k - 2]) / k;
  }
}

ZonalBiharmonic ZonalBiharmonic::from_boundary_data(int n, const std::vector<double>& g, const std::vector<double>& h) {
  if (g.size() != h.size()) throw std::invalid_argument("boundary data length mismatch");
  ZonalBiharmonic z;
  z.n_ = n;
  z.a_.resize(g.size());
  z.b_.resize(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    z.b_[k] = h[k] / (4.0 * k + 2.0 * n);
    z.a_[k] = g[k] - z.b_[k];
  }
  return z;
}

double ZonalBiharmonic::value(double r, const std::vector<double>& C) const {
  double acc = 0.0;
  double rk = 1.0;
  const double r2 = r * r;
  for (std::size_t k = 0; k < a_.size(); ++k) {
    acc += (a_[k] + b_[k] * r2) * rk * C[k];
    rk *= r;
  }
  return acc;
}

double ZonalBiharmonic::laplacian(double r, const std::vector<double>& C) const {
  double acc = 0.0;
  double rk = 1.0;
  for (std::size_t k = 0; k < b_.size(); ++k) {
    acc += b_[k] * (4.0 * k + 2.0 * n_) * rk * C[k];
    rk *= r;
  }
  return acc;
}

}  // namespace navier_bubble
