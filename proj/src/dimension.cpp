#include "navier_bubble/dimension.hpp"

#include <numeric>
#include <string>

#include "navier_bubble/errors.hpp"

namespace navier_bubble {

Rational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw UsageError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return {num / g, den / g};
}

Rational operator*(const Rational& a, const Rational& b) { return make_rational(a.num * b.num, a.den * b.den); }

Dimension::Dimension(int n)
    : n_(n), p_{0, 1}, p1_{0, 1} {
  if (n < 5) throw UsageError("dimension must satisfy n >= 5, got n = " + std::to_string(n));
  p_ = make_rational(n + 4, n - 4);
  p1_ = make_rational(2 * n, n - 4);
}

}  // namespace navier_bubble
