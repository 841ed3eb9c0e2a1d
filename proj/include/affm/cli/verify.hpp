#pragma once

#include <functional>
#include <random>
#include <string>

#include "affm/cosh/brownian.hpp"
#include "affm/cosh/pricing.hpp"
#include "affm/inflation/fit.hpp"
#include "affm/inflation/pricing.hpp"
#include "affm/mc/simulate.hpp"
#include "affm/riccati.hpp"

namespace affm::cli {

struct CheckResult {
  std::string name;
  double error;      // worst error found
  double tolerance;  // pass when error < tolerance
  bool passed() const { return error < tolerance; }
};

namespace detail {

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

inline std::vector<Component> check_processes() {
  return {GaussOU{0.3, 0.5, 0.4, 0.1},
          DoubleGammaOUBM{0.02, 0.5, 0.3, 12.0, 10.0, 50.0, 5.0, 0.7},
          CIR{0.4, 0.2, 0.3, 0.5},
          CIRJump{0.3, 0.6, 0.15, 8.0, 0.7, 0.4}};
}

inline CheckResult riccati_check() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (const auto& c : check_processes()) {
    AffineProcessSpec s(c, 10.0);
    for (int n = 0; n < 20; ++n) {
      const double t = 0.2 + 9.8 * U(rng);
      const auto dom = domain(c, t);
      const double lo = std::max(dom.lo, -2.0), hi = std::min(dom.hi, 2.0);
      const double u = lo + (hi - lo) * (0.05 + 0.9 * U(rng));
      const auto closed = phi_psi(s, t, Vec{u});
      const auto ode = riccati_integrate(s, t, Vec{u});
      worst = std::max({worst,
                        std::abs(closed.phi.real() - ode.phi.real()) / std::max(1.0, std::abs(ode.phi.real())),
                        std::abs(closed.psi[0].real() - ode.psi[0].real()) / std::max(1.0, std::abs(ode.psi[0].real()))});
    }
  }
  return {"riccati_closed_form_vs_ode", worst, 1e-6};
}

inline CheckResult semiflow_check() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (const auto& c : check_processes())
    for (int n = 0; n < 1000; ++n) {
      const double t = 5.0 * U(rng), s = 5.0 * U(rng);
      const auto dom = domain(c, t + s);
      const double lo = std::max(dom.lo, -3.0), hi = std::min(dom.hi, 3.0);
      const cplx u(lo + (hi - lo) * (0.05 + 0.9 * U(rng)), 4.0 * (U(rng) - 0.5));
      const auto whole = phi_psi(c, t + s, u);
      const auto first = phi_psi(c, t, u);
      const auto second = phi_psi(c, s, first.psi);
      worst = std::max({worst, std::abs(whole.phi - first.phi - second.phi), std::abs(whole.psi - second.psi)});
    }
  return {"semiflow", worst, 1e-10};
}

inline cosh::CoshLiborModel flat_cosh(const Component& c, double rate, double step, int n) {
  Vec P;
  for (int k = 1; k <= n; ++k) P.push_back(std::pow(1.0 + rate * step, -k));
  return cosh::fit_u_sequence(AffineProcessSpec(c, step * n), TenorGrid::regular(step, n), P);
}

inline CheckResult brownian_check() {
  const auto m = flat_cosh(BrownianDrift{1.0, 0.0, 0.0}, 0.035, 0.5, 20);
  double worst = 0.0;
  for (int k : {1, 4, 8, 12, 18})
    for (double K : {0.02, 0.03, 0.035, 0.04, 0.05, 0.06}) {
      const double ref = cosh::brownian_floorlet_price(m, k, K);
      if (ref > 1e-14) worst = std::max(worst, rel_err(cosh::floorlet_price(m, k, K), ref));
    }
  for (int a : {2, 6, 10})
    for (double K : {0.025, 0.035, 0.05}) {
      const double ref = cosh::brownian_put_swaption_price(m, a, a + 6, K);
      if (ref > 1e-14) worst = std::max(worst, rel_err(cosh::put_swaption_price(m, a, a + 6, K), ref));
    }
  return {"brownian_closed_form_vs_fourier", worst, 1e-8};
}

inline CheckResult contour_check() {
  const auto m = flat_cosh(DoubleGammaOUBM{0.02, 0.5, 0.3, 12.0, 10.0, 50.0, 5.0, 0.7}, 0.035, 0.5, 20);
  double worst = 0.0;
  for (int k : {1, 5, 9})
    for (double K : {0.02, 0.035, 0.06}) {
      const double tau = m.horizon() - m.grid().T(k);
      const double pole = phi_psi(m.process(), tau, cplx(m.u(k + 1))).psi.real();
      cosh::PricingOptions a, b;
      a.contour = -3.0;
      b.contour = 0.5 * pole;
      worst = std::max(worst, rel_err(cosh::floorlet_price(m, k, K, a), cosh::floorlet_price(m, k, K, b)));
    }
  return {"contour_independence", worst, 1e-8};
}

inline inflation::InflationModel check_inflation_model(int M) {
  std::vector<Component> cs{CIR{0.026, 0.65, 0.5, 3.45}};
  for (int i = 0; i < M; ++i) cs.push_back(CIRJump{0.3, 0.6, 0.15, 8.0, 0.7, 0.4 + 0.05 * i});
  for (int i = 0; i < M; ++i) cs.push_back(DoubleGammaOUBM{1.0, 0.05, 0.03, 30, 30, 0.5, 0.5, 0.0});
  const AffineProcessSpec spec(cs, M);
  inflation::TermStructure ts;
  for (int k = 1; k <= 2 * M; ++k) {
    const double t = 0.5 * k;
    ts.discounts.push_back(std::exp(-(0.015 + 0.004 * t) * t));
    ts.forward_cpi.push_back(std::exp((0.018 + 0.006 * std::exp(-t)) * t));
  }
  auto L = inflation::ParamLayout::zeros(M);
  L.tilde_u = inflation::default_tilde_u(spec.component(0), M, inflation::bond_ratios(ts.discounts));
  L.tilde_v = inflation::default_tilde_v(L.tilde_u);
  auto m = inflation::fit_term_structure(spec, L, ts);
  double worst = 0.0;
  for (int k = 1; k <= 2 * M; ++k)
    worst = std::max({worst, rel_err(m.discount(k), ts.discounts[k - 1]), rel_err(m.forward_cpi(k), ts.forward_cpi[k - 1])});
  if (!(worst < 1e-10)) fail(ErrorCode::Infeasible, "term structure not reproduced");
  return m;
}

inline CheckResult term_structure_check() {
  try {
    check_inflation_model(3);
    return {"term_structure_reproduction", 0.0, 1e-10};
  } catch (const Error&) {
    return {"term_structure_reproduction", 1.0, 1e-10};
  }
}

// Fourier prices against an importance-weighted Monte Carlo estimate, error in
// standard errors.
inline CheckResult monte_carlo_check(std::uint64_t seed) {
  const auto m = check_inflation_model(2);
  Vec times;
  for (int k = 1; k <= m.size(); ++k) times.push_back(m.T(k));
  auto weight = [&](const mc::PathView& p, int k) {
    return std::exp(m.log_martingale(m.T(k), m.u(k), p.state(k - 1)) - m.log_martingale(0.0, m.u(k), m.x0()));
  };
  std::vector<double> ref;
  std::vector<std::function<double(const mc::PathView&)>> pay;
  for (double K : {0.02, 0.03}) {
    ref.push_back(inflation::nominal_floorlet_price(m, 3, K));
    pay.push_back([&, K](const mc::PathView& p) {
      const Vec x = p.state(1);
      const double F = std::expm1(m.log_martingale(m.T(2), m.u(2), x) - m.log_martingale(m.T(2), m.u(3), x)) / 0.5;
      return m.discount(3) * 0.5 * std::max(K - F, 0.0) * weight(p, 3);
    });
  }
  ref.push_back(inflation::cpi_call_price(m, 4, 1.04));
  pay.push_back([&](const mc::PathView& p) {
    return m.discount(4) * std::max(m.forward_cpi(m.T(4), 4, p.state(3)) - 1.04, 0.0) * weight(p, 4);
  });
  ref.push_back(inflation::inflation_caplet_price(m, 2, 4, 0.02));
  pay.push_back([&](const mc::PathView& p) {
    const double r = m.forward_cpi(m.T(4), 4, p.state(3)) / m.forward_cpi(m.T(2), 2, p.state(1));
    return m.discount(4) * std::max(r - 1.02, 0.0) * weight(p, 4);
  });
  mc::SimConfig cfg;
  cfg.n_paths = 50000;
  cfg.seed = seed;
  cfg.cir_scheme = mc::CirScheme::Exact;
  const auto res = mc::mc_estimate(
      m.spec(), times, [&](const mc::PathView& p, double* o) { for (std::size_t i = 0; i < pay.size(); ++i) o[i] = pay[i](p); },
      pay.size(), cfg);
  double worst = 0.0;
  for (std::size_t i = 0; i < pay.size(); ++i)
    worst = std::max(worst, std::abs(res[i].estimate - ref[i]) / std::max(res[i].std_error, 1e-300));
  return {"monte_carlo_standard_errors", worst, 3.0};
}

}  // namespace detail

inline std::vector<CheckResult> verify_suite(std::uint64_t seed = 1) {
  return {detail::riccati_check(),  detail::semiflow_check(),       detail::brownian_check(),
          detail::contour_check(),  detail::term_structure_check(), detail::monte_carlo_check(seed)};
}

}  // namespace affm::cli
