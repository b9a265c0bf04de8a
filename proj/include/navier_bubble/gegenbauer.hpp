#pragma once

#include <vector>

namespace navier_bubble {

// Coefficient of C_k^nu(t) in the expansion of (1 - 2qt + q^2)^{-(nu + j)},
// j in {-1, 0, 1, 2}, 0 <= q < 1.
double zonal_power_coefficient(int j, double nu, double q, int k);

// C_0^nu(t), ..., C_kmax^nu(t) by the three-term recurrence.
void gegenbauer_values(int kmax, double nu, double t, std::vector<double>& out);

// Biharmonic zonal field sum_k (a_k r^k + b_k r^{k+2}) C_k^nu(t) in R^n, nu = (n-2)/2.
class ZonalBiharmonic {
 public:
  ZonalBiharmonic() = default;
  // Boundary data on the unit sphere: u = sum g_k C_k, Delta u = sum h_k C_k.
  static ZonalBiharmonic from_boundary_data(int n, const std::vector<double>& g, const std::vector<double>& h);

  int modes() const { return static_cast<int>(a_.size()); }
  const std::vector<double>& a() const { return a_; }
  const std::vector<double>& b() const { return b_; }

  // C must hold C_k^nu(t) for k < modes().
  double value(double r, const std::vector<double>& C) const;
  double laplacian(double r, const std::vector<double>& C) const;

 private:
  int n_ = 0;
  std::vector<double> a_, b_;
};

}  // namespace navier_bubble
