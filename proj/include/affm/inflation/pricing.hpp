#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "affm/black.hpp"
#include "affm/inflation/transforms.hpp"
#include "affm/numeric/quadrature.hpp"
#include "affm/numeric/roots.hpp"

namespace affm::inflation {

struct PricingOptions {
  std::optional<double> contour;  // R > 1; chosen automatically when empty
  numeric::QuadratureOptions quad{1e-11, 1e-15, 1.0, 2e5, 4000};
};

// E[(e^Y - K)^+] from the cumulant L(z) = log E[e^{zY}]:
//   (1/pi) int_0^inf Re( exp(L(z) + (1 - z) log K) / (z (z - 1)) ) du,  z = R + iu.
// L must throw DomainError outside its strip.
class FourierCall {
 public:
  using Cumulant = std::function<cplx(cplx)>;

  explicit FourierCall(Cumulant L) : L_(std::move(L)) {}

  bool feasible(double R) const {
    try {
      return std::isfinite(L_(cplx(R)).real());
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DomainError) throw;
      return false;
    }
  }

  // Farthest admissible R on one side of the strip (capped at |R| = 64):
  // side > 0 searches above 1, side < 0 below 0.
  double contour_limit(int side) const {
    const double start = side > 0 ? 1.0 + 1e-9 : -1e-9;
    if (!feasible(start))
      fail(ErrorCode::ContourError, side > 0 ? "no contour with R > 1: E[e^Y] is not finite"
                                             : "no contour with R < 0: E[e^{-eps Y}] is not finite");
    const double base = side > 0 ? 1.0 : 0.0;
    double lo = 1e-9, hi = 1.0;
    while (feasible(base + side * hi)) {
      lo = hi;
      if (hi >= 64.0) return base + side * hi;
      hi *= 2.0;
    }
    for (int i = 0; i < 60 && hi - lo > 1e-9 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (feasible(base + side * mid) ? lo : hi) = mid;
    }
    return base + side * lo;
  }

  // Minimizes the integrand at u = 0 over the admissible part of one side,
  // searching the distance to the nearest pole of 1/(z(z-1)) on a log scale.
  double auto_contour(double logK, int side = 1) const {
    const double base = side > 0 ? 1.0 : 0.0;
    const double reach = std::abs(contour_limit(side) - base);
    auto R_of = [&](double s) { return base + side * std::exp(s); };
    auto f = [&](double s) {
      const double R = R_of(s);
      return L_(cplx(R)).real() - R * logK - std::log(R * (R - 1.0));
    };
    return R_of(numeric::golden_min(f, std::log(1e-4 * reach), std::log(0.98 * reach), 1e-6).x);
  }

  // E[(e^Y - K)^+] on a contour R > 1.
  double price(double K, const PricingOptions& opt = {}) const {
    if (K <= 0.0) return std::exp(L_(cplx(1.0)).real()) - K;
    return invert(K, opt, 1);
  }

  // E[(K - e^Y)^+] on a contour R < 0.
  double put(double K, const PricingOptions& opt = {}) const {
    if (K <= 0.0) return 0.0;
    return invert(K, opt, -1);
  }

 private:
  double invert(double K, const PricingOptions& opt, int side) const {
    const double logK = std::log(K);
    double R;
    if (opt.contour) {
      R = *opt.contour;
      if (side > 0 && !(R > 1.0)) fail(ErrorCode::ContourError, "call contour needs R > 1");
      if (side < 0 && !(R < 0.0)) fail(ErrorCode::ContourError, "put contour needs R < 0");
      try {
        L_(cplx(R));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DomainError) throw;
        std::ostringstream os;
        os << "contour R = " << R << " not admissible: " << e.what();
        fail(ErrorCode::ContourError, os.str());
      }
    } else {
      R = auto_contour(logK, side);
    }
    auto integrand = [&](double u) {
      const cplx z(R, u);
      return (std::exp(L_(z) + (1.0 - z) * logK) / (z * (z - 1.0))).real();
    };
    auto q = opt.quad;
    q.first_panel = std::clamp(1.0 / tilted_sd(R), 1e-3, 1e3);
    // at most four phase turns per initial piece
    auto max_piece = [&](double a, double b) {
      const double w = std::max(phase_rate(R, logK, a), phase_rate(R, logK, b));
      return w > 0.0 ? 8.0 * numeric::kPi / w : 0.0;
    };
    return std::max(numeric::integrate_half_line(integrand, q, max_piece).value / numeric::kPi, 0.0);
  }

  // Rate at which the phase of the integrand turns at height u.
  double phase_rate(double R, double logK, double u) const {
    if (u <= 0.0) return 0.0;
    const cplx z(R, u), h(0.0, 1e-4 * u);
    try {
      const cplx dL = (L_(z + h) - L_(z - h)) / (2.0 * h);
      const double r = std::abs(dL.real() - logK - (1.0 / z + 1.0 / (z - 1.0)).real());
      return std::isfinite(r) ? r : 0.0;
    } catch (const Error&) {
      return 0.0;
    }
  }

  // standard deviation of Y under the measure tilted by e^{RY}
  double tilted_sd(double R) const {
    const double h = 1e-3 * std::max(1.0, R);
    try {
      const double v =
          (L_(cplx(R + h)).real() - 2.0 * L_(cplx(R)).real() + L_(cplx(R - h)).real()) / (h * h);
      if (v > 0.0 && std::isfinite(v)) return std::sqrt(v);
    } catch (const Error&) {
    }
    return 1.0;
  }

  Cumulant L_;
};

namespace detail {

inline bool all_zero(const Vec& b) {
  return std::all_of(b.begin(), b.end(), [](double x) { return x == 0.0; });
}

}  // namespace detail

// log(1 + Delta_k F^k(T_{k-1})) = A + B . X_{T_{k-1}}
inline Loading nominal_forward_loading(const InflationModel& m, int k) {
  if (k < 1 || k > m.size()) fail(ErrorCode::InvalidInput, "forward index out of range");
  if (k == 1) return {std::log(1.0 / m.discount(1)), Vec(m.dim(), 0.0)};
  return m.loading(m.T(k - 1), m.u(k - 1), m.u(k));
}

// Law of log(1 + Delta_k F^k(T_{k-1})) under Q^{T_k}.
inline FourierCall nominal_forward_transform(const InflationModel& m, int k) {
  const auto Y = nominal_forward_loading(m, k);
  const double t = m.T(k - 1);
  return FourierCall([&m, k, t, Y, x0 = m.x0()](cplx z) {
    CVec w(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) w[i] = z * Y.B[i];
    return z * Y.A + forward_measure_cumulant(m, k, w, 0.0, t, x0);
  });
}

// Law of log I(T_k) under Q^{T_k}.
inline FourierCall cpi_transform(const InflationModel& m, int k) {
  return FourierCall([&m, k, x0 = m.x0()](cplx z) { return cpi_cumulant(m, k, z, 0.0, x0); });
}

// Law of log(I(T_k)/I(T_b)) under Q^{T_k}.
inline FourierCall yoy_transform(const InflationModel& m, int b, int k) {
  if (b < 0 || b >= k || k > m.size()) fail(ErrorCode::InvalidInput, "need 0 <= T_b < T_k <= T");
  return FourierCall([&m, b, k, x0 = m.x0()](cplx z) { return yoy_cumulant(m, k, k - b, z, 0.0, x0); });
}

// Caplet on F^k: fixes at T_{k-1}, pays Delta_k (F^k - K)^+ at T_k.
inline double nominal_caplet_price(const InflationModel& m, int k, double K, const PricingOptions& opt = {}) {
  const auto Y = nominal_forward_loading(m, k);
  const double Kt = 1.0 + m.grid().delta(k) * K;
  const bool det = detail::all_zero(Y.B);
  if (det) return m.discount(k) * std::max(std::exp(Y.A) - Kt, 0.0);
  return m.discount(k) * nominal_forward_transform(m, k).price(Kt, opt);
}

inline double nominal_floorlet_price(const InflationModel& m, int k, double K, const PricingOptions& opt = {}) {
  const double d = m.grid().delta(k);
  return nominal_caplet_price(m, k, K, opt) - m.discount(k) * d * (m.forward_rate(k) - K);
}

// Call on the index: pays (I(T_k) - K)^+ at T_k.
inline double cpi_call_price(const InflationModel& m, int k, double K, const PricingOptions& opt = {}) {
  const auto& L = m.index_loading(k);
  if (detail::all_zero(L.B)) return m.discount(k) * std::max(std::exp(L.A) - K, 0.0);
  return m.discount(k) * cpi_transform(m, k).price(K, opt);
}

inline double cpi_put_price(const InflationModel& m, int k, double K, const PricingOptions& opt = {}) {
  return cpi_call_price(m, k, K, opt) - (m.ilb_price(k) - m.discount(k) * K);
}

// Year-on-year caplet on the index ratio over [T_b, T_k]: pays
// (T_k - T_b) (F - K)^+ at T_k with 1 + (T_k - T_b) F = I(T_k)/I(T_b).
inline double inflation_caplet_price(const InflationModel& m, int b, int k, double K, const PricingOptions& opt = {}) {
  if (b < 0 || b >= k || k > m.size()) fail(ErrorCode::InvalidInput, "need 0 <= T_b < T_k <= T");
  const double Kt = 1.0 + (m.T(k) - m.T(b)) * K;
  const auto& Lk = m.index_loading(k);
  const auto& Lb = m.index_loading(b);
  if (detail::all_zero(Lk.B) && detail::all_zero(Lb.B))
    return m.discount(k) * std::max(std::exp(Lk.A - Lb.A) - Kt, 0.0);
  return m.discount(k) * yoy_transform(m, b, k).price(Kt, opt);
}

inline double inflation_floorlet_price(const InflationModel& m, int b, int k, double K,
                                       const PricingOptions& opt = {}) {
  const double span = m.T(k) - m.T(b);
  return inflation_caplet_price(m, b, k, K, opt) -
         m.discount(k) * span * (forward_inflation_rate(m, b, k) - K);
}

inline double inflation_option_price(const InflationModel& m, OptionType type, int b, int k, double K,
                                     const PricingOptions& opt = {}) {
  return type == OptionType::Call ? inflation_caplet_price(m, b, k, K, opt)
                                  : inflation_floorlet_price(m, b, k, K, opt);
}

// Black vol of the caplet on F^k, quoted on the model forward.
inline double caplet_implied_vol(const InflationModel& m, int k, double K, double price) {
  const double d = m.grid().delta(k);
  return black_implied_vol(price, OptionType::Call, m.forward_rate(k), K, m.T(k - 1), m.discount(k) * d);
}

// Shifted-Black vol of a year-on-year option on the model forward inflation rate.
inline double inflation_implied_vol(const InflationModel& m, OptionType type, int b, int k, double K, double price,
                                    double shift = 1.0) {
  const double span = m.T(k) - m.T(b);
  return black_implied_vol(price, type, forward_inflation_rate(m, b, k), K, m.T(k), m.discount(k) * span, shift);
}

// Zero-coupon inflation swap over `years` full years (payer of the index leg).
inline double zciis_rate(const InflationModel& m, int years) {
  if (years < 1 || years > m.years()) fail(ErrorCode::InvalidInput, "swap maturity must be 1..M years");
  return std::expm1(std::log(m.forward_cpi(2 * years)) / years);
}

inline double zciis_value(const InflationModel& m, int years, double K) {
  const int k = 2 * years;
  return m.discount(k) * (m.forward_cpi(k) - std::pow(1.0 + K, years));
}

// Year-on-year swap with annual payments at T_2, T_4, ..., T_{2 years}.
inline double yyiis_value(const InflationModel& m, int years, double K) {
  if (years < 1 || years > m.years()) fail(ErrorCode::InvalidInput, "swap maturity must be 1..M years");
  double v = 0.0;
  for (int i = 1; i <= years; ++i) {
    const int k = 2 * i;
    v += m.discount(k) * (m.T(k) - m.T(k - 2)) * (forward_inflation_rate(m, k - 2, k) - K);
  }
  return v;
}

inline double yyiis_rate(const InflationModel& m, int years) {
  if (years < 1 || years > m.years()) fail(ErrorCode::InvalidInput, "swap maturity must be 1..M years");
  double num = 0.0, den = 0.0;
  for (int i = 1; i <= years; ++i) {
    const int k = 2 * i;
    const double w = m.discount(k) * (m.T(k) - m.T(k - 2));
    num += w * forward_inflation_rate(m, k - 2, k);
    den += w;
  }
  return num / den;
}

// Quantities whose logarithms are affine in the state.
struct NominalForward {
  int k;  // log(1 + Delta_k F^k(t))
};
struct ForwardCpi {
  int k;  // log I(t, T_k)
};
struct ForwardInflation {
  int b, k;  // log(1 + (T_k - T_b) F_I(t, T_b, T_k))
};
using LogQuantity = std::variant<NominalForward, ForwardCpi, ForwardInflation>;

inline Vec state_loading(const InflationModel& m, double t, const LogQuantity& q) {
  if (const auto* f = std::get_if<NominalForward>(&q)) {
    if (f->k < 2 || f->k > m.size()) fail(ErrorCode::InvalidInput, "forward index must be in [2, N]");
    if (t > m.T(f->k - 1)) fail(ErrorCode::InvalidTime, "forward already fixed");
    return m.loading(t, m.u(f->k - 1), m.u(f->k)).B;
  }
  if (const auto* c = std::get_if<ForwardCpi>(&q)) {
    if (c->k < 1 || c->k > m.size()) fail(ErrorCode::InvalidInput, "CPI index out of range");
    if (t > m.T(c->k)) fail(ErrorCode::InvalidTime, "forward CPI observed after maturity");
    return m.loading(t, m.v(c->k), m.u(c->k)).B;
  }
  const auto& f = std::get<ForwardInflation>(q);
  if (f.b < 0 || f.b >= f.k || f.k > m.size()) fail(ErrorCode::InvalidInput, "need 0 <= T_b < T_k <= T");
  if (t > m.T(f.b)) fail(ErrorCode::InvalidTime, "forward inflation observed after its start");
  const double T = m.horizon();
  Vec B(m.dim(), 0.0);
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const double c = phi_psi(m.spec().component(i), T - m.T(f.b), cplx(m.v(f.k)[i])).psi.real() -
                     m.index_loading(f.b).B[i];
    B[i] = phi_psi(m.spec().component(i), m.T(f.b) - t, cplx(c)).psi.real() -
           phi_psi(m.spec().component(i), T - t, cplx(m.u(f.k)[i])).psi.real();
  }
  return B;
}

// Correlation of two log quantities over [0, t] for independent components.
// Empty when either quantity has zero variance.
inline std::optional<double> correlation(const InflationModel& m, double t, const LogQuantity& a,
                                         const LogQuantity& b) {
  const Vec Ba = state_loading(m, t, a), Bb = state_loading(m, t, b);
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (Ba[i] == 0.0 && Bb[i] == 0.0) continue;
    const double v = variance(m.spec().component(i), t);
    ab += Ba[i] * Bb[i] * v;
    aa += Ba[i] * Ba[i] * v;
    bb += Bb[i] * Bb[i] * v;
  }
  if (!(aa > 0.0) || !(bb > 0.0)) return std::nullopt;
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

// Smallest value F^k(T_{k-1}) can take; nominal loadings are nonnegative so
// the bound sits at the zero state.
inline double forward_rate_lower_bound(const InflationModel& m, int k) {
  const auto Y = nominal_forward_loading(m, k);
  if (std::any_of(Y.B.begin(), Y.B.end(), [](double b) { return b < 0.0; })) return -1.0 / m.grid().delta(k);
  return std::expm1(Y.A) / m.grid().delta(k);
}

}  // namespace affm::inflation
