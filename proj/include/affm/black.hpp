#pragma once

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>

#include "affm/numeric/special.hpp"

namespace affm {

enum class OptionType { Call, Put };

// Undiscounted-by-annuity Black price: annuity * E[(F - K)^+] (or put) with
// lognormal F + shift.
inline double black_price(OptionType type, double F, double K, double vol, double expiry,
                          double annuity = 1.0, double shift = 0.0) {
  const double f = F + shift, k = K + shift;
  if (!(f > 0.0) || !(k > 0.0)) fail(ErrorCode::InvalidInput, "black: shifted forward and strike must be > 0");
  const double sd = vol * std::sqrt(expiry);
  const double w = type == OptionType::Call ? 1.0 : -1.0;
  double v;
  if (sd <= 0.0) {
    v = std::max(w * (f - k), 0.0);
  } else {
    const double d1 = (std::log(f / k) + 0.5 * sd * sd) / sd;
    v = w * (f * numeric::norm_cdf(w * d1) - k * numeric::norm_cdf(w * (d1 - sd)));
  }
  return annuity * std::max(v, 0.0);
}

inline double black_vega(double F, double K, double vol, double expiry, double annuity = 1.0,
                         double shift = 0.0) {
  const double f = F + shift, k = K + shift, sd = vol * std::sqrt(expiry);
  const double d1 = (std::log(f / k) + 0.5 * sd * sd) / sd;
  return annuity * f * numeric::norm_pdf(d1) * std::sqrt(expiry);
}

// Black volatility reproducing `price`. Throws OutOfBounds when the price is
// below intrinsic value or above the no-arbitrage upper bound.
inline double black_implied_vol(double price, OptionType type, double F, double K, double expiry,
                                double annuity = 1.0, double shift = 0.0) {
  const double f = F + shift, k = K + shift;
  if (!(f > 0.0) || !(k > 0.0) || !(expiry > 0.0) || !(annuity > 0.0))
    fail(ErrorCode::OutOfBounds, "implied vol: non-positive shifted forward, strike, expiry or annuity");
  const double p = price / annuity;
  const double intrinsic = type == OptionType::Call ? std::max(f - k, 0.0) : std::max(k - f, 0.0);
  const double upper = type == OptionType::Call ? f : k;
  const double slack = 1e-14 * upper;
  if (!(p >= intrinsic - slack) || !(p < upper)) fail(ErrorCode::OutOfBounds, "implied vol: price outside no-arbitrage bounds");
  if (p <= intrinsic + slack) return 0.0;

  auto obj = [&](double v) { return black_price(type, F, K, v, expiry, 1.0, shift) - p; };
  double lo = 0.0, hi = 1.0;
  double fhi = obj(hi);
  while (fhi < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e4) fail(ErrorCode::OutOfBounds, "implied vol: no volatility reaches the price");
    fhi = obj(hi);
  }
  std::uintmax_t iters = 200;
  boost::math::tools::eps_tolerance<double> tol(52);
  auto r = boost::math::tools::toms748_solve(obj, lo, hi, obj(lo), fhi, tol, iters);
  return 0.5 * (r.first + r.second);
}

}  // namespace affm
