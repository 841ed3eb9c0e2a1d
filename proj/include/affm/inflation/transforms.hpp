#pragma once

#include <sstream>

#include "affm/inflation/model.hpp"

namespace affm::inflation {

// All *_cumulant functions return the complex logarithm of the corresponding
// moment generating function. Components on which an exponent vanishes drop
// out exactly by the semiflow property and are skipped.

namespace detail {

inline void check_order(std::initializer_list<double> times, const char* what) {
  double prev = -1e-14;
  for (double t : times) {
    if (t < prev - 1e-12) fail(ErrorCode::InvalidTime, std::string(what) + ": times out of order");
    prev = t;
  }
}

inline PhiPsi1 pp(const InflationModel& m, std::size_t i, double tau, cplx w) {
  return phi_psi(m.spec().component(i), std::max(tau, 0.0), w);
}

// Re-throws a DomainError with a note on which admissibility condition failed.
template <class F>
auto tagged(const char* note, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DomainError) throw;
    fail(ErrorCode::DomainError, std::string(note) + ": " + e.what());
  }
}

}  // namespace detail

// log E^{Q^{T_k}}[exp(w . X_r) | X_s = x], 0 <= s <= r <= T_k
inline cplx forward_measure_cumulant(const InflationModel& m, int k, const CVec& w, double s, double r,
                                     const Vec& x) {
  if (k < 1 || k > m.size()) fail(ErrorCode::InvalidInput, "forward measure index out of range");
  detail::check_order({0.0, s, r, m.T(k)}, "forward_measure_mgf");
  const double T = m.horizon();
  cplx out = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (w[i] == cplx(0.0)) continue;
    const double a = m.u(k)[i] == 0.0 ? 0.0 : detail::pp(m, i, T - r, m.u(k)[i]).psi.real();
    auto shifted = detail::pp(m, i, r - s, a + w[i]);
    auto base = detail::pp(m, i, r - s, a);
    out += shifted.phi - base.phi + (shifted.psi - base.psi) * x[i];
  }
  return out;
}

inline cplx forward_measure_mgf(const InflationModel& m, int k, const CVec& w, double s, double r, const Vec& x) {
  return std::exp(forward_measure_cumulant(m, k, w, s, r, x));
}

// log E^{Q^{T_k}}[I(T_k)^z | X_s = x], simplified form built from a single
// exponent z psi(v_k) + (1 - z) psi(u_k).
inline cplx cpi_cumulant(const InflationModel& m, int k, cplx z, double s, const Vec& x) {
  if (k < 1 || k > m.size()) fail(ErrorCode::InvalidInput, "CPI index out of range");
  detail::check_order({0.0, s, m.T(k)}, "cpi_log_mgf");
  const double T = m.horizon(), Tk = m.T(k);
  cplx out = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const double ui = m.u(k)[i], vi = m.v(k)[i];
    if (ui == vi) continue;
    auto pu = detail::pp(m, i, T - Tk, ui);
    auto pv = detail::pp(m, i, T - Tk, vi);
    const cplx w = z * pv.psi + (1.0 - z) * pu.psi;
    auto mid = detail::pp(m, i, Tk - s, w);
    auto norm = detail::pp(m, i, T - s, ui);
    out += z * pv.phi + (1.0 - z) * pu.phi + mid.phi + mid.psi * x[i] - norm.phi - norm.psi * x[i];
  }
  return out;
}

// Same quantity through the forward-measure transform of z B_I^k.
inline cplx cpi_cumulant_composed(const InflationModel& m, int k, cplx z, double s, const Vec& x) {
  const auto& L = m.index_loading(k);
  CVec w(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) w[i] = z * L.B[i];
  return z * L.A + forward_measure_cumulant(m, k, w, s, m.T(k), x);
}

inline cplx cpi_log_mgf(const InflationModel& m, int k, cplx z, double s, const Vec& x) {
  return std::exp(cpi_cumulant(m, k, z, s, x));
}

// log E^{Q^{T_k}}[exp(a . X_r + b . X_t) | X_s = x] for s <= r <= t <= T_k.
inline cplx double_time_cumulant(const InflationModel& m, int k, const CVec& a, const CVec& b, double r, double t,
                                 double s, const Vec& x) {
  if (k < 1 || k > m.size()) fail(ErrorCode::InvalidInput, "forward measure index out of range");
  detail::check_order({0.0, s, r, t, m.T(k)}, "double_time_mgf");
  const double T = m.horizon();
  cplx out = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    if (a[i] == cplx(0.0) && b[i] == cplx(0.0)) continue;
    const double ui = m.u(k)[i];
    const double base = ui == 0.0 ? 0.0 : detail::pp(m, i, T - t, ui).psi.real();
    const cplx c1 = base + b[i];
    auto late = detail::tagged("condition psi_{T-t}(u_k) + w in domain", [&] { return detail::pp(m, i, t - r, c1); });
    const cplx c2 = late.psi + a[i];
    auto early = detail::tagged("condition psi_{t-r}(psi_{T-t}(u_k) + w) + u in domain",
                                [&] { return detail::pp(m, i, r - s, c2); });
    auto norm_phi = detail::pp(m, i, t - s, base).phi;
    const double norm_psi = ui == 0.0 ? 0.0 : detail::pp(m, i, T - s, ui).psi.real();
    out += late.phi + early.phi - norm_phi + (early.psi - norm_psi) * x[i];
  }
  return out;
}

inline cplx double_time_mgf(const InflationModel& m, int k, const CVec& a, const CVec& b, double r, double t,
                            double s, const Vec& x) {
  return std::exp(double_time_cumulant(m, k, a, b, r, t, s, x));
}

// log E^{Q^{T_k}}[(I(T_k)/I(T_{k-j}))^z | X_s = x], s <= T_{k-j}
inline cplx yoy_cumulant(const InflationModel& m, int k, int j, cplx z, double s, const Vec& x) {
  if (j < 1 || j > k || k > m.size()) fail(ErrorCode::InvalidInput, "need 1 <= j <= k <= N");
  const int base = k - j;
  const auto& Lk = m.index_loading(k);
  const auto& Lb = m.index_loading(base);
  CVec a(m.dim()), b(m.dim());
  for (std::size_t i = 0; i < m.dim(); ++i) {
    a[i] = -z * Lb.B[i];
    b[i] = z * Lk.B[i];
  }
  return z * (Lk.A - Lb.A) + double_time_cumulant(m, k, a, b, m.T(base), m.T(k), s, x);
}

inline cplx yoy_mgf(const InflationModel& m, int k, int j, cplx z, double s, const Vec& x) {
  return std::exp(yoy_cumulant(m, k, j, z, s, x));
}

// log(1 + (T_k - T_b) F_I(t, T_b, T_k)) with b = k - j, in closed form:
//   phi_{T-T_b}(v_k) - phi_{T-T_b}(v_b) + phi_{T-T_b}(u_b) + phi_{T_b-t}(c) - phi_{T-t}(u_k)
//   + (psi_{T_b-t}(c) - psi_{T-t}(u_k)) . x,   c = psi_{T-T_b}(v_k) - B_I^b.
inline double forward_inflation_log_growth(const InflationModel& m, double t, int b, int k, const Vec& x) {
  if (b < 0 || b >= k || k > m.size()) fail(ErrorCode::InvalidInput, "need 0 <= T_b < T_k <= T");
  detail::check_order({0.0, t, m.T(b)}, "forward_inflation_rate");
  const double T = m.horizon(), Tb = m.T(b);
  const auto& Lb = m.index_loading(b);
  double out = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) {
    const double uk = m.u(k)[i], vk = m.v(k)[i], ub = m.u(b)[i], vb = m.v(b)[i];
    if (uk == vk && ub == vb) continue;
    auto pvk = detail::pp(m, i, T - Tb, vk);
    const double c = pvk.psi.real() - Lb.B[i];
    auto mid = detail::tagged("condition psi_{T-T_b}(v_k) - B_I^b in domain", [&] { return detail::pp(m, i, Tb - t, c); });
    auto puk = detail::pp(m, i, T - t, uk);
    const double phi_b = b == 0 ? 0.0 : detail::pp(m, i, T - Tb, ub).phi.real() - detail::pp(m, i, T - Tb, vb).phi.real();
    out += pvk.phi.real() + phi_b + mid.phi.real() - puk.phi.real() + (mid.psi.real() - puk.psi.real()) * x[i];
  }
  return out;
}

inline double forward_inflation_rate(const InflationModel& m, double t, int b, int k, const Vec& x) {
  return std::expm1(forward_inflation_log_growth(m, t, b, k, x)) / (m.T(k) - m.T(b));
}

inline double forward_inflation_rate(const InflationModel& m, int b, int k) {
  return forward_inflation_rate(m, 0.0, b, k, m.x0());
}

}  // namespace affm::inflation
