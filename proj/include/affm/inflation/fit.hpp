#pragma once

#include <algorithm>
#include <sstream>

#include "affm/inflation/model.hpp"
#include "affm/numeric/roots.hpp"

namespace affm::inflation {

namespace detail {

// log E[exp(w X_T)] of one component started at its initial state
inline double log_mgf(const Component& c, double T, double w) {
  if (w == 0.0) return 0.0;
  auto r = phi_psi(c, T, cplx(w));
  return r.phi.real() + r.psi.real() * initial_state(c);
}

inline void infeasible(const char* what, int k, double target) {
  std::ostringstream os;
  os << what << ": target " << target << " not attainable at index " << k;
  fail(ErrorCode::Infeasible, os.str());
}

// Root of the increasing map w -> log_mgf(c, T, w) on [0, 0.999 hi).
inline double increasing_root(const Component& c, double T, double target, const char* what, int k) {
  if (target <= 0.0) {
    if (target > -1e-14) return 0.0;
    infeasible(what, k, target);
  }
  double hi = domain(c, T).hi;
  hi = std::isfinite(hi) ? 0.999 * hi : 1.0;
  auto f = [&](double w) { return log_mgf(c, T, w) - target; };
  if (!std::isfinite(domain(c, T).hi))
    while (f(hi) < 0.0) {
      hi *= 2.0;
      if (hi > 1e6) infeasible(what, k, target);
    }
  if (f(hi) < 0.0) infeasible(what, k, target);
  return numeric::bisect_best(f, 0.0, hi);
}

}  // namespace detail

// Common-factor loadings: E[exp(2 tilde_u_k X^0_T)] = P(0,T_k)/P(0,T).
inline Vec default_tilde_u(const Component& common, double T, const Vec& ratios) {
  Vec out;
  double prev = numeric::kInf;
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    if (!(ratios[k] > 0.0)) fail(ErrorCode::InvalidInput, "bond ratios must be positive");
    const double w = detail::increasing_root(common, T, std::log(ratios[k]), "tilde_u", static_cast<int>(k) + 1);
    out.push_back(std::min(0.5 * w, prev));
    prev = out.back();
  }
  return out;
}

// tilde_v_k = tilde_u_k (1 + c k)
inline Vec default_tilde_v(const Vec& tilde_u, double c = 0.08) {
  Vec out(tilde_u.size());
  for (std::size_t k = 0; k < tilde_u.size(); ++k) out[k] = tilde_u[k] * (1.0 + c * static_cast<double>(k + 1));
  return out;
}

// Solves bar_u backwards from k = N so that E[exp(u_k . X_T)] = ratios[k-1],
// ratios[k-1] = P(0,T_k)/P(0,T). tilde_u and the processes stay fixed.
inline Vec fit_ubar_sequence(const AffineProcessSpec& spec, const ParamLayout& layout, const Vec& ratios) {
  const int N = layout.size(), M = layout.M;
  if (static_cast<int>(ratios.size()) != N) fail(ErrorCode::InvalidInput, "need one bond ratio per tenor date");
  const double T = spec.horizon();
  Vec bar(N, 0.0);
  for (int k = N; k >= 1; --k) {
    if (!(ratios[k - 1] > 0.0)) fail(ErrorCode::InvalidInput, "bond ratios must be positive");
    const int y = year_of(k);
    double rest = detail::log_mgf(spec.component(0), T, layout.tilde_u[k - 1]);
    for (int l = y + 1; l <= M; ++l) rest += detail::log_mgf(spec.component(l), T, bar[2 * l - 2]);
    bar[k - 1] = detail::increasing_root(spec.component(y), T, std::log(ratios[k - 1]) - rest, "bar_u", k);
  }
  return bar;
}

struct VbarFit {
  double value = 0.0;
  bool ambiguous = false;  // two roots of the same sign; the smaller one in magnitude was taken
  Vec roots;
};

// Solves for bar_v_k so that E[exp(v_k . X_T)] = ilb_ratio = P_ILB(0,T_k)/P(0,T).
// For a real-valued inflation factor the map is convex and may have two roots.
inline VbarFit fit_vbar(const AffineProcessSpec& spec, const ParamLayout& layout, int k, double ilb_ratio) {
  const int M = layout.M;
  if (k < 1 || k > layout.size()) fail(ErrorCode::InvalidInput, "index out of range");
  if (!(ilb_ratio > 0.0)) fail(ErrorCode::InvalidInput, "ILB ratio must be positive");
  const double T = spec.horizon();
  const int y = year_of(k);
  double rest = detail::log_mgf(spec.component(0), T, layout.tilde_v[k - 1]);
  rest += detail::log_mgf(spec.component(y), T, layout.bar_u[k - 1]);
  for (int l = y + 1; l <= M; ++l) rest += detail::log_mgf(spec.component(l), T, layout.bar_u[2 * l - 2]);
  const double target = std::log(ilb_ratio) - rest;
  const Component& c = spec.component(M + y);

  if (is_nonnegative(c)) {
    VbarFit out;
    if (target >= 0.0) {
      out.value = detail::increasing_root(c, T, target, "bar_v", k);
    } else {
      // decreasing branch on the negative half-line
      auto f = [&](double w) { return detail::log_mgf(c, T, w) - target; };
      double lo = -1.0;
      while (f(lo) > 0.0) {
        lo *= 2.0;
        if (lo < -1e6) detail::infeasible("bar_v", k, target);
      }
      out.value = numeric::bisect_best(f, lo, 0.0);
    }
    out.roots = {out.value};
    return out;
  }

  const auto dom = domain(c, T);
  const double lo = std::isfinite(dom.lo) ? 0.999 * dom.lo : -50.0;
  const double hi = std::isfinite(dom.hi) ? 0.999 * dom.hi : 50.0;
  auto f = [&](double w) { return detail::log_mgf(c, T, w) - target; };
  const auto mn = numeric::golden_min(f, lo, hi, 1e-14);
  if (target == 0.0) {
    // zero is a root; report the other one too when it exists
    VbarFit out{0.0, false, {0.0}};
    const double far = mn.x < 0.0 ? lo : hi;
    if (std::abs(mn.x) > 1e-12 && f(far) >= 0.0) {
      out.roots.push_back(mn.x < 0.0 ? numeric::bisect_best(f, lo, mn.x) : numeric::bisect_best(f, mn.x, hi));
      std::sort(out.roots.begin(), out.roots.end());
    }
    return out;
  }
  if (mn.fx > 0.0) {
    if (mn.fx > 1e-14 * (1.0 + std::abs(target))) detail::infeasible("bar_v", k, target);
    return {mn.x, false, {mn.x}};
  }
  VbarFit out;
  if (f(lo) >= 0.0) out.roots.push_back(numeric::bisect_best(f, lo, mn.x));
  if (f(hi) >= 0.0) out.roots.push_back(numeric::bisect_best(f, mn.x, hi));
  if (out.roots.empty()) detail::infeasible("bar_v", k, target);
  if (out.roots.size() == 1) {
    out.value = out.roots[0];
    return out;
  }
  const double a = out.roots[0], b = out.roots[1];
  if (a == 0.0 || b == 0.0) {
    out.value = 0.0;
  } else if ((a < 0.0) != (b < 0.0)) {
    out.value = a > 0.0 ? a : b;
  } else {
    out.value = std::abs(a) < std::abs(b) ? a : b;
    out.ambiguous = true;
  }
  return out;
}

inline std::vector<VbarFit> fit_vbar_sequence(const AffineProcessSpec& spec, ParamLayout& layout,
                                              const Vec& ilb_ratios) {
  if (static_cast<int>(ilb_ratios.size()) != layout.size())
    fail(ErrorCode::InvalidInput, "need one ILB ratio per tenor date");
  std::vector<VbarFit> fits;
  for (int k = 1; k <= layout.size(); ++k) {
    fits.push_back(fit_vbar(spec, layout, k, ilb_ratios[k - 1]));
    layout.bar_v[k - 1] = fits.back().value;
  }
  return fits;
}

// Term-structure inputs for the model: discounts P(0,T_k) and forward CPIs
// I(0,T_k), k = 1..N.
struct TermStructure {
  Vec discounts;
  Vec forward_cpi;
};

inline Vec bond_ratios(const Vec& discounts) {
  Vec r(discounts.size());
  for (std::size_t k = 0; k < discounts.size(); ++k) r[k] = discounts[k] / discounts.back();
  return r;
}

inline Vec ilb_ratios(const TermStructure& ts) {
  Vec r(ts.discounts.size());
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = ts.forward_cpi.at(k) * ts.discounts[k] / ts.discounts.back();
  return r;
}

// Refits bar_u (and bar_v when forward CPIs are given) for fixed processes and
// common-factor loadings.
inline InflationModel fit_term_structure(const AffineProcessSpec& spec, ParamLayout layout, const TermStructure& ts) {
  const Vec ratios = bond_ratios(ts.discounts);
  layout.bar_u = fit_ubar_sequence(spec, layout, ratios);
  if (!ts.forward_cpi.empty()) fit_vbar_sequence(spec, layout, ilb_ratios(ts));
  return InflationModel(spec, layout, ts.discounts.back());
}

}  // namespace affm::inflation
