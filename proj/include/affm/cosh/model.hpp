#pragma once

#include <cmath>
#include <sstream>

#include "affm/kernel.hpp"
#include "affm/numeric/roots.hpp"
#include "affm/tenor.hpp"

namespace affm::cosh {

// Rational LIBOR model driven by a one-dimensional affine process X:
// P(t, T_k) / P(t, T) = M_t^{u_k}(X_t) with M_t^u(x) = E[cosh(u X_T) | X_t = x]
// and T = T_N the last tenor date.
class CoshLiborModel {
 public:
  CoshLiborModel() = default;
  CoshLiborModel(AffineProcessSpec spec, TenorGrid grid, Vec u_seq, double P0T)
      : spec_(std::move(spec)), grid_(std::move(grid)), u_(std::move(u_seq)), P0T_(P0T) {
    if (spec_.dim() != 1) fail(ErrorCode::InvalidSpec, "cosh model needs a one-dimensional process");
    if (std::abs(spec_.horizon() - grid_.last()) > 1e-12)
      fail(ErrorCode::InvalidInput, "process horizon must equal the last tenor date");
    if (static_cast<int>(u_.size()) != grid_.size())
      fail(ErrorCode::InvalidInput, "need one u per tenor date");
    if (!(P0T_ > 0.0)) fail(ErrorCode::InvalidInput, "P(0,T) must be > 0");
    for (std::size_t i = 0; i < u_.size(); ++i) {
      if (!(u_[i] >= 0.0)) fail(ErrorCode::NonmonotoneInput, "u sequence must be >= 0");
      if (i > 0 && u_[i] > u_[i - 1]) fail(ErrorCode::NonmonotoneInput, "u sequence must be nonincreasing");
    }
  }

  const AffineProcessSpec& spec() const { return spec_; }
  const Component& process() const { return spec_.component(0); }
  const TenorGrid& grid() const { return grid_; }
  int size() const { return grid_.size(); }
  double horizon() const { return grid_.last(); }
  double P0T() const { return P0T_; }
  const Vec& u_seq() const { return u_; }
  double u(int k) const {
    if (k < 1 || k > size()) fail(ErrorCode::InvalidInput, "u index out of range");
    return u_[k - 1];
  }
  double x0() const { return initial_state(process()); }

  // log M_t^u(x)
  double log_martingale(double t, double u, double x) const {
    affm::detail::check_time(t, horizon());
    if (u == 0.0) return 0.0;
    const double tau = horizon() - t;
    auto p = phi_psi(process(), tau, cplx(u));
    auto m = phi_psi(process(), tau, cplx(-u));
    return numeric::logsumexp(p.phi.real() + p.psi.real() * x, m.phi.real() + m.psi.real() * x) -
           std::log(2.0);
  }

  double martingale(double t, double u, double x) const { return std::exp(log_martingale(t, u, x)); }

  // P(0, T_k); k = 0 gives 1.
  double discount(int k) const {
    if (k == 0) return 1.0;
    return P0T_ * martingale(0.0, u(k), x0());
  }

  // Simple forward rate for [T_{k-1}, T_k] seen at t in state x.
  double forward_rate(int k, double t, double x) const {
    if (k == 1) {
      if (t != 0.0) fail(ErrorCode::InvalidTime, "first forward is fixed at time 0");
      return (1.0 / discount(1) - 1.0) / grid_.delta(1);
    }
    return std::expm1(log_martingale(t, u(k - 1), x) - log_martingale(t, u(k), x)) / grid_.delta(k);
  }

  double forward_rate(int k) const { return forward_rate(k, 0.0, x0()); }

  CoshLiborModel with_process(const Component& c) const {
    return CoshLiborModel(spec_.with_component(0, c), grid_, u_, P0T_);
  }

 private:
  AffineProcessSpec spec_;
  TenorGrid grid_;
  Vec u_;
  double P0T_ = 1.0;
};

// Largest u with both +u and -u in the time-uniform moment domain.
inline double symmetric_u_limit(const AffineProcessSpec& spec) {
  const auto d = domain(spec.component(0), spec.horizon());
  return std::min(d.hi, -d.lo);
}

// Solves M_0^{u_k}(x0) = P(0,T_k)/P(0,T) for each k, with T = T_N.
inline CoshLiborModel fit_u_sequence(const AffineProcessSpec& spec, const TenorGrid& grid,
                                     const Vec& discounts) {
  const int N = grid.size();
  if (static_cast<int>(discounts.size()) != N) fail(ErrorCode::InvalidInput, "need one discount factor per tenor date");
  const double P0T = discounts.back();
  for (int k = 0; k < N; ++k) {
    if (!(discounts[k] > 0.0)) fail(ErrorCode::InvalidInput, "discount factors must be > 0");
    if (discounts[k] < P0T || (k > 0 && discounts[k] > discounts[k - 1]))
      fail(ErrorCode::NonmonotoneInput, "bond price ratios must be nonincreasing and >= 1");
  }
  const Component& c = spec.component(0);
  const double x0 = initial_state(c);
  auto log_m = [&](double u) {
    if (u == 0.0) return 0.0;
    auto p = phi_psi(c, spec.horizon(), cplx(u));
    auto m = phi_psi(c, spec.horizon(), cplx(-u));
    return numeric::logsumexp(p.phi.real() + p.psi.real() * x0, m.phi.real() + m.psi.real() * x0) -
           std::log(2.0);
  };

  double u_hi = symmetric_u_limit(spec);
  const double target_max = std::log(discounts[0] / P0T);
  if (std::isfinite(u_hi)) {
    u_hi *= 0.999;
    if (log_m(u_hi) <= target_max) {
      std::ostringstream os;
      os << "ratio P(0,T_1)/P(0,T) = " << discounts[0] / P0T << " not reachable below u = " << u_hi;
      fail(ErrorCode::Infeasible, os.str());
    }
  } else {
    u_hi = 1.0;
    while (log_m(u_hi) <= target_max) {
      u_hi *= 2.0;
      if (u_hi > 1e6) fail(ErrorCode::Infeasible, "ratio not reachable");
    }
  }

  Vec u(N, 0.0);
  for (int k = 0; k < N - 1; ++k) {
    const double target = std::log(discounts[k] / P0T);
    if (target <= 0.0) continue;
    if (k > 0 && discounts[k] == discounts[k - 1]) {
      u[k] = u[k - 1];
      continue;
    }
    const double hi = k > 0 ? u[k - 1] : u_hi;
    u[k] = numeric::bisect_best([&](double v) { return log_m(v) - target; }, 0.0, hi);
  }
  return CoshLiborModel(spec, grid, u, P0T);
}

// inf over states of the forward rate F^k at time t. For k = 1 the forward is
// fixed at time 0, so the bound is its value.
inline double forward_rate_lower_bound(const CoshLiborModel& m, int k, double t) {
  if (k < 1 || k > m.size()) fail(ErrorCode::InvalidInput, "forward index out of range");
  if (k == 1) return m.forward_rate(1);
  if (t < 0.0 || t > m.grid().T(k - 1) + 1e-12) fail(ErrorCode::InvalidTime, "bound time must be in [0, T_{k-1}]");
  const double a = m.u(k - 1), b = m.u(k);
  if (a == b) return 0.0;
  auto neg_log_ratio = [&](double x) { return m.log_martingale(t, b, x) - m.log_martingale(t, a, x); };
  double lo, hi;
  if (!numeric::bracket_max(neg_log_ratio, m.x0(), lo, hi))
    fail(ErrorCode::NotUnimodal, "bond price ratio has no interior minimum");
  auto e = numeric::golden_max(neg_log_ratio, lo, hi, 1e-10);
  return std::expm1(-e.fx) / m.grid().delta(k);
}

}  // namespace affm::cosh
