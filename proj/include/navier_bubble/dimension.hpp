#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace navier_bubble {

using Point = Eigen::VectorXd;

struct Rational {
  std::int64_t num;
  std::int64_t den;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

Rational make_rational(std::int64_t num, std::int64_t den);
Rational operator*(const Rational& a, const Rational& b);

// Space dimension n >= 5 with the critical exponents attached.
class Dimension {
 public:
  explicit Dimension(int n);

  int n() const { return n_; }
  // p = (n+4)/(n-4)
  Rational p_rational() const { return p_; }
  // p + 1 = 2n/(n-4)
  Rational p_plus_one_rational() const { return p1_; }
  double p() const { return p_.value(); }
  double p_plus_one() const { return p1_.value(); }
  // (n-4)/2, the decay exponent of the bubble
  double alpha() const { return 0.5 * (n_ - 4); }

  Point origin() const { return Point::Zero(n_); }
  bool operator==(const Dimension& o) const { return n_ == o.n_; }

 private:
  int n_;
  Rational p_;
  Rational p1_;
};

}  // namespace navier_bubble
