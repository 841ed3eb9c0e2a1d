#pragma once

#include <algorithm>
#include <optional>
#include <sstream>

#include "affm/black.hpp"
#include "affm/cosh/exercise.hpp"
#include "affm/cosh/model.hpp"
#include "affm/numeric/quadrature.hpp"

namespace affm::cosh {

struct PricingOptions {
  std::optional<double> contour;  // real part R of the inversion line
  numeric::QuadratureOptions quad{};
};

// h^t(zeta, u) = sum over +-u of e^{phi(+-u)} psi(+-u) / (2 (zeta + psi(+-u)))
//                 * (e^{(zeta + psi) k2} - e^{(zeta + psi) k1}),
// with phi, psi evaluated at T - t. The pieces that do not depend on zeta are
// computed once.
class HKernel {
 public:
  HKernel(const CoshLiborModel& m, double t, double u) : zero_(u == 0.0) {
    if (zero_) return;
    const double tau = m.horizon() - t;
    for (int i = 0; i < 2; ++i) {
      auto pp = phi_psi(m.process(), tau, cplx(i == 0 ? u : -u));
      psi_[i] = pp.psi;
      coef_[i] = 0.5 * pp.psi;
      phi_[i] = pp.phi;
    }
  }

  cplx operator()(cplx zeta, double k1, double k2) const {
    if (zero_) return 0.0;
    const double mid = 0.5 * (k1 + k2), half = 0.5 * (k2 - k1);
    cplx sum = 0.0;
    for (int i = 0; i < 2; ++i) {
      const cplx a = zeta + psi_[i];
      if (a == cplx(0.0)) fail(ErrorCode::PoleError, "h evaluated at zeta = -psi(u)");
      // (e^{a k2} - e^{a k1}) / a = 2 half e^{a mid} sinh(a half)/(a half)
      sum += coef_[i] * 2.0 * half * std::exp(phi_[i] + a * mid) * numeric::sinhc(a * half);
    }
    return sum;
  }

 private:
  bool zero_;
  cplx psi_[2]{}, coef_[2]{}, phi_[2]{};
};

inline cplx h_function(const CoshLiborModel& m, double t, cplx zeta, double u, double k1, double k2) {
  return HKernel(m, t, u)(zeta, k1, k2);
}

namespace detail {

// Real numbers where the inversion integrand has a (removable) singularity.
inline Vec contour_poles(const CoshLiborModel& m, double t, std::initializer_list<double> us) {
  Vec poles{0.0};
  const double tau = m.horizon() - t;
  for (double u : us) {
    if (u == 0.0) continue;
    poles.push_back(phi_psi(m.process(), tau, cplx(u)).psi.real());
    poles.push_back(phi_psi(m.process(), tau, cplx(-u)).psi.real());
  }
  std::sort(poles.begin(), poles.end());
  return poles;
}

inline double default_contour(const CoshLiborModel& m, const Vec& poles) {
  const auto dom = domain(m.process(), m.horizon());
  double reach = 1.0;
  for (double p : poles) reach = std::max(reach, 2.0 * std::abs(p));
  const double lo = std::max(dom.lo, -reach), hi = std::min(dom.hi, reach);
  Vec pts{lo};
  for (double p : poles)
    if (p > lo && p < hi) pts.push_back(p);
  pts.push_back(hi);
  double best = -1.0, R = 0.0;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (pts[i] - pts[i - 1] > best) {
      best = pts[i] - pts[i - 1];
      R = 0.5 * (pts[i] + pts[i - 1]);
    }
  }
  return R;
}

inline double checked_contour(const CoshLiborModel& m, const Vec& poles, std::optional<double> R) {
  if (!R) return default_contour(m, poles);
  const auto dom = domain(m.process(), m.horizon());
  if (!dom.contains(*R)) {
    std::ostringstream os;
    os << "contour R = " << *R << " outside (" << dom.lo << ", " << dom.hi << ")";
    fail(ErrorCode::ContourError, os.str());
  }
  for (double p : poles)
    if (std::abs(*R - p) <= 1e-12 * (1.0 + std::abs(p)))
      fail(ErrorCode::ContourError, "contour passes through a pole");
  return *R;
}

// P(0,T)/pi * int_0^inf Re( E[e^{(R+iu) X_t}] * fhat(u - iR) ) du where
// fhat(u - iR) = hsum(-(R+iu)) / (R + iu). A point mass of X_t is priced
// directly through `payoff` and removed from the transform, otherwise the
// integrand would not decay.
template <class HSum, class Payoff>
double invert(const CoshLiborModel& m, double t, double R, HSum&& hsum, Payoff&& payoff,
              const PricingOptions& opt) {
  const Component& c = m.process();
  const double x0 = m.x0();
  const Atom at = atom(c, t);
  auto integrand = [&](double v) {
    const cplx w(R, v);
    auto pp = phi_psi(c, t, w);
    cplx mg = std::exp(pp.phi + pp.psi * x0);
    if (at.probability > 0.0) mg -= at.probability * std::exp(w * at.location);
    return (mg * hsum(-w) / w).real();
  };
  double direct = 0.0;
  if (at.probability > 0.0) direct = at.probability * payoff(at.location);
  if (at.probability == 1.0) return m.P0T() * direct;
  auto q = opt.quad;
  const double var = variance(c, t);
  if (var > 0.0) q.first_panel = std::max(1e-3, std::min(10.0, 1.0 / std::sqrt(var)));
  auto res = numeric::integrate_half_line(integrand, q);
  return m.P0T() * (res.value / numeric::kPi + direct);
}

}  // namespace detail

// Floorlet on F^{k+1}: reset at T_k, pays Delta_{k+1} (K - F^{k+1}(T_k))^+ at T_{k+1}.
inline double floorlet_price(const CoshLiborModel& m, int k, double K, const PricingOptions& opt = {}) {
  if (k < 1 || k >= m.size()) fail(ErrorCode::InvalidInput, "floorlet index must be in [1, N-1]");
  const double t = m.grid().T(k);
  const double delta = m.grid().delta(k + 1);
  const double Kt = 1.0 + delta * K;
  const double ua = m.u(k), ub = m.u(k + 1);
  if (ua == ub) return m.discount(k + 1) * std::max(delta * K, 0.0);
  auto g = [&](double x) { return Kt - std::exp(m.log_martingale(t, ua, x) - m.log_martingale(t, ub, x)); };
  auto b = find_exercise_bounds(g, m.x0());
  if (b.degenerate) return 0.0;
  const Vec poles = detail::contour_poles(m, t, {ua, ub});
  const double R = detail::checked_contour(m, poles, opt.contour);
  const HKernel ha(m, t, ua), hb(m, t, ub);
  auto hsum = [&](cplx zeta) { return Kt * hb(zeta, b.lower, b.upper) - ha(zeta, b.lower, b.upper); };
  auto payoff = [&](double x) { return std::max(g(x), 0.0) * m.martingale(t, ub, x); };
  return detail::invert(m, t, R, hsum, payoff, opt);
}

// Caplet from put-call parity.
inline double caplet_price(const CoshLiborModel& m, int k, double K, const PricingOptions& opt = {}) {
  const double fl = floorlet_price(m, k, K, opt);
  const double delta = m.grid().delta(k + 1);
  return fl + m.discount(k + 1) * delta * (m.forward_rate(k + 1) - K);
}

// Put swaption at T_alpha: pays (P(T_a,T_b) + K sum_{k=a+1}^{b} Delta_k P(T_a,T_k) - 1)^+.
inline double put_swaption_price(const CoshLiborModel& m, int alpha, int beta, double K,
                                 const PricingOptions& opt = {}) {
  if (alpha < 1 || beta <= alpha || beta > m.size()) fail(ErrorCode::InvalidInput, "need 1 <= alpha < beta <= N");
  const double t = m.grid().T(alpha);
  const double ua = m.u(alpha), ub = m.u(beta);
  if (ua == ub) {
    double annuity = 0.0;
    for (int k = alpha + 1; k <= beta; ++k) annuity += m.grid().delta(k) * m.discount(k);
    return std::max(K * annuity, 0.0);
  }
  auto g = [&](double x) {
    const double la = m.log_martingale(t, ua, x);
    double v = std::exp(m.log_martingale(t, ub, x) - la) - 1.0;
    for (int k = alpha + 1; k <= beta; ++k)
      v += K * m.grid().delta(k) * std::exp(m.log_martingale(t, m.u(k), x) - la);
    return v;
  };
  auto b = find_exercise_bounds(g, m.x0());
  if (b.degenerate) return 0.0;
  Vec poles = detail::contour_poles(m, t, {ua});
  for (int k = alpha + 1; k <= beta; ++k) {
    auto more = detail::contour_poles(m, t, {m.u(k)});
    poles.insert(poles.end(), more.begin(), more.end());
  }
  std::sort(poles.begin(), poles.end());
  const double R = detail::checked_contour(m, poles, opt.contour);
  const HKernel ha(m, t, ua), hb(m, t, ub);
  std::vector<HKernel> coupons;
  for (int k = alpha + 1; k <= beta; ++k) coupons.emplace_back(m, t, m.u(k));
  auto hsum = [&](cplx zeta) {
    cplx s = hb(zeta, b.lower, b.upper) - ha(zeta, b.lower, b.upper);
    for (int k = alpha + 1; k <= beta; ++k)
      s += K * m.grid().delta(k) * coupons[k - alpha - 1](zeta, b.lower, b.upper);
    return s;
  };
  auto payoff = [&](double x) { return std::max(g(x), 0.0) * m.martingale(t, ua, x); };
  return detail::invert(m, t, R, hsum, payoff, opt);
}

struct SurfacePoint {
  double expiry;
  double strike;
  double price;
  std::optional<double> implied_vol;  // empty when the price has no Black vol
};

// Caplets on F^{k+1} reset at T_k for each k in `resets`, Black vols quoted on
// the model forward with annuity P(0,T_{k+1}) Delta_{k+1}.
inline std::vector<SurfacePoint> caplet_surface(const CoshLiborModel& m, const std::vector<int>& resets,
                                                const Vec& strikes, const PricingOptions& opt = {}) {
  std::vector<SurfacePoint> out;
  for (int k : resets) {
    const double T = m.grid().T(k), delta = m.grid().delta(k + 1);
    const double F = m.forward_rate(k + 1), A = m.discount(k + 1) * delta;
    for (double K : strikes) {
      SurfacePoint p{T, K, caplet_price(m, k, K, opt), std::nullopt};
      try {
        p.implied_vol = black_implied_vol(p.price, OptionType::Call, F, K, T, A);
      } catch (const Error&) {
      }
      out.push_back(p);
    }
  }
  return out;
}

}  // namespace affm::cosh
