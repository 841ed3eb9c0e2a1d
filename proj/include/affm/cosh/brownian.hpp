#pragma once

#include <cmath>

#include "affm/cosh/model.hpp"
#include "affm/numeric/special.hpp"

namespace affm::cosh {

// Closed forms for X = standard Brownian motion started at 0. The exercise
// region is the symmetric interval [-kappa, kappa] and
// E[M_{t}^u(X_t) 1{|X_t| <= kappa}] = e^{u^2 T / 2} (Phi(kappa/s - u s) - Phi(-kappa/s - u s)),
// s = sqrt(t).
namespace detail {

inline void require_standard_brownian(const CoshLiborModel& m) {
  const auto* b = std::get_if<BrownianDrift>(&m.process());
  if (!b || b->sigma != 1.0 || b->mu != 0.0 || b->x0 != 0.0)
    fail(ErrorCode::WrongSpec, "closed form needs BrownianDrift(sigma=1, mu=0, x0=0)");
}

inline double truncated_cosh_moment(double u, double T, double t, double kappa) {
  const double s = std::sqrt(t);
  if (std::isinf(kappa)) return std::exp(0.5 * u * u * T);
  return std::exp(0.5 * u * u * T) *
         (numeric::norm_cdf(kappa / s - u * s) - numeric::norm_cdf(-kappa / s - u * s));
}

// Positive root of an even g with g(0) > 0 and g -> negative at infinity.
template <class G>
double positive_root(G&& g) {
  double hi = 1.0;
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e6) return numeric::kInf;
  }
  return numeric::bisect_best(g, 0.0, hi);
}

}  // namespace detail

inline double brownian_floorlet_price(const CoshLiborModel& m, int k, double K) {
  detail::require_standard_brownian(m);
  const double T = m.horizon(), t = m.grid().T(k);
  const double ua = m.u(k), ub = m.u(k + 1);
  const double Kt = 1.0 + m.grid().delta(k + 1) * K;
  // log M^a - log M^b = (a^2 - b^2)(T - t)/2 + log cosh(a x) - log cosh(b x)
  auto log_cosh = [](double z) { z = std::abs(z); return z + std::log1p(std::exp(-2.0 * z)) - std::log(2.0); };
  auto g = [&](double x) {
    return Kt - std::exp(0.5 * (ua * ua - ub * ub) * (T - t) + log_cosh(ua * x) - log_cosh(ub * x));
  };
  double kappa;
  if (ua == ub)
    kappa = Kt > 1.0 ? numeric::kInf : 0.0;
  else
    kappa = g(0.0) > 0.0 ? detail::positive_root(g) : 0.0;
  if (kappa == 0.0) return 0.0;
  return m.P0T() * (Kt * detail::truncated_cosh_moment(ub, T, t, kappa) -
                    detail::truncated_cosh_moment(ua, T, t, kappa));
}

inline double brownian_put_swaption_price(const CoshLiborModel& m, int alpha, int beta, double K) {
  detail::require_standard_brownian(m);
  const double T = m.horizon(), t = m.grid().T(alpha);
  auto M = [&](double u, double x) { return m.log_martingale(t, u, x); };
  const double ua = m.u(alpha);
  auto g = [&](double x) {
    const double la = M(ua, x);
    double v = std::exp(M(m.u(beta), x) - la) - 1.0;
    for (int k = alpha + 1; k <= beta; ++k) v += K * m.grid().delta(k) * std::exp(M(m.u(k), x) - la);
    return v;
  };
  const double kappa = g(0.0) > 0.0 ? detail::positive_root(g) : 0.0;
  if (kappa == 0.0) return 0.0;
  double v = detail::truncated_cosh_moment(m.u(beta), T, t, kappa) - detail::truncated_cosh_moment(ua, T, t, kappa);
  for (int k = alpha + 1; k <= beta; ++k)
    v += K * m.grid().delta(k) * detail::truncated_cosh_moment(m.u(k), T, t, kappa);
  return m.P0T() * v;
}

}  // namespace affm::cosh
