#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "affm/core.hpp"

namespace affm::numeric {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846;

// log(1+z) without cancellation when |z| is small.
inline cplx log1p(cplx z) {
  const double x = z.real(), y = z.imag();
  if (y == 0.0 && x > -1.0) return {std::log1p(x), 0.0};
  return {0.5 * std::log1p(x * (2.0 + x) + y * y), std::atan2(y, 1.0 + x)};
}

// log1p(z)/z, continuous through z = 0
inline cplx log1p_over(cplx z) {
  if (std::abs(z) < 1e-4) {
    // 1 - z/2 + z^2/3 - z^3/4 + z^4/5
    return 1.0 + z * (-0.5 + z * (1.0 / 3.0 + z * (-0.25 + z * 0.2)));
  }
  return log1p(z) / z;
}

// sinh(z)/z
inline cplx sinhc(cplx z) {
  if (std::abs(z) < 1e-3) {
    const cplx z2 = z * z;
    return 1.0 + z2 / 6.0 * (1.0 + z2 / 20.0 * (1.0 + z2 / 42.0));
  }
  return std::sinh(z) / z;
}

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

inline double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

inline double logsumexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace affm::numeric
