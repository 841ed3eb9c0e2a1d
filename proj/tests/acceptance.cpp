// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "affm/calibration/calibrate.hpp"
#include "affm/calibration/synthetic.hpp"
#include "affm/cosh/brownian.hpp"
#include "affm/cosh/pricing.hpp"
#include "affm/inflation/pricing.hpp"
#include "affm/mc/simulate.hpp"
#include "affm/riccati.hpp"
#include "support/inflation_models.hpp"

using namespace affm;

namespace {

struct Outcome {
  bool ok;
  std::string detail;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const DoubleGammaOUBM kFig21{0.02, 0.5, 0.3, 12.0, 10.0, 50.0, 5.0, 0.7};
const DoubleGammaOUBM kFig22{0.02, 0.0, 0.0, 50.0, 5.0, 50.0, 10.0, 1.0};

cosh::CoshLiborModel flat_cosh(const Component& c, double rate = 0.035) {
  Vec P;
  for (int k = 1; k <= 20; ++k) P.push_back(std::pow(1.0 + 0.5 * rate, -k));
  return cosh::fit_u_sequence(AffineProcessSpec(c, 10.0), TenorGrid::regular(0.5, 20), P);
}

// 1. Fourier against the Brownian closed forms
Outcome closed_form() {
  const auto m = flat_cosh(BrownianDrift{1.0, 0.0, 0.0});
  const Vec strikes{0.02, 0.03, 0.035, 0.04, 0.05, 0.06};
  double worst = 0.0;
  int n = 0, zero_miss = 0;
  for (int k : {1, 3, 6, 10, 15})
    for (double K : strikes) {
      const double ref = cosh::brownian_floorlet_price(m, k, K), f = cosh::floorlet_price(m, k, K);
      // a zero reference has no relative error; it must come out as zero
      if (ref > 0.0)
        worst = std::max(worst, rel(f, ref));
      else
        zero_miss += std::abs(f) > 1e-14;
      ++n;
    }
  for (int a : {2, 4, 6, 8, 10})
    for (double K : strikes) {
      const double ref = cosh::brownian_put_swaption_price(m, a, a + 8, K), f = cosh::put_swaption_price(m, a, a + 8, K);
      if (ref > 0.0)
        worst = std::max(worst, rel(f, ref));
      else
        zero_miss += std::abs(f) > 1e-14;
      ++n;
    }
  return {worst < 1e-8 && zero_miss == 0, fmt("%.0f prices, max rel err %.2e, %.0f zero prices missed", n, worst, zero_miss)};
}

std::vector<Component> variants() {
  return {CIR{0.4, 0.2, 0.3, 0.5}, CIRJump{0.3, 0.6, 0.15, 8.0, 0.7, 0.4}, GaussOU{0.3, 0.5, 0.4, 0.1}, kFig21,
          BrownianDrift{0.8, 0.1, 0.2}};
}

// 2. closed-form phi, psi against the Riccati ODE
Outcome riccati() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  RiccatiOptions opt;
  opt.abs_tol = 1e-13;
  opt.rel_tol = 1e-12;
  double worst = 0.0;
  for (const auto& c : variants()) {
    if (std::holds_alternative<BrownianDrift>(c)) continue;
    AffineProcessSpec s(c, 10.0);
    for (int n = 0; n < 20; ++n) {
      const double t = 0.1 + 9.9 * U(rng);
      const auto dom = domain(c, t);
      const double lo = std::max(dom.lo, -2.0), hi = std::min(dom.hi, 2.0);
      const double u = lo + (hi - lo) * (0.02 + 0.96 * U(rng));
      const auto closed = phi_psi(s, t, Vec{u});
      const auto ode = riccati_integrate(s, t, Vec{u}, opt);
      worst = std::max({worst, rel(closed.phi.real(), ode.phi.real()), rel(closed.psi[0].real(), ode.psi[0].real())});
    }
  }
  return {worst < 1e-6, fmt("4 variants x 20 points, max rel err %.2e", worst)};
}

// 3. semiflow residuals
Outcome semiflow() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst = 0.0;
  for (const auto& c : variants())
    for (int n = 0; n < 1000; ++n) {
      const double t = 5.0 * U(rng), s = 5.0 * U(rng);
      const auto dom = domain(c, t + s);
      const double lo = std::max(dom.lo, -3.0), hi = std::min(dom.hi, 3.0);
      const cplx u(lo + (hi - lo) * (0.02 + 0.96 * U(rng)), 4.0 * (U(rng) - 0.5));
      const auto whole = phi_psi(c, t + s, u);
      const auto first = phi_psi(c, t, u);
      const auto second = phi_psi(c, s, first.psi);
      worst = std::max({worst, std::abs(whole.phi - first.phi - second.phi), std::abs(whole.psi - second.psi)});
    }
  return {worst < 1e-10, fmt("5 variants x 1000 points, max residual %.2e", worst)};
}

// 4. Fourier prices against 10^6-path Monte Carlo under the terminal measure
struct McCheck {
  std::string name;
  double ref;
  std::function<double(const mc::PathView&)> payoff;
};

mc::SimConfig mc_config() {
  mc::SimConfig c;
  c.n_paths = 1000000;
  c.seed = 1;
  c.cir_scheme = mc::CirScheme::Exact;
  return c;
}

// returns the worst |error| in standard errors and appends failures to `bad`
double run_checks(const AffineProcessSpec& spec, const Vec& times, const std::vector<McCheck>& checks,
                  std::string& bad, int& count) {
  const auto res = mc::mc_estimate(
      spec, times, [&](const mc::PathView& p, double* o) { for (std::size_t i = 0; i < checks.size(); ++i) o[i] = checks[i].payoff(p); },
      checks.size(), mc_config());
  double worst = 0.0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const double diff = std::abs(res[i].estimate - checks[i].ref);
    ++count;
    // a payoff that is constant on every path has no standard error
    if (res[i].std_error == 0.0) {
      if (!(diff < 1e-12)) bad += " " + checks[i].name + fmt("(zero SE, diff %.1e)", diff);
      continue;
    }
    const double z = diff / res[i].std_error;
    worst = std::max(worst, z);
    if (!(z <= 3.0)) bad += " " + checks[i].name + fmt("(%.1f SE)", z);
  }
  return worst;
}

std::vector<McCheck> cosh_checks(const cosh::CoshLiborModel& m) {
  std::vector<McCheck> out;
  auto F = [&m](int k, double x) { return m.forward_rate(k + 1, m.grid().T(k), x); };
  for (auto [k, K] : {std::pair{1, 0.035}, std::pair{1, 0.06}, std::pair{5, 0.03}, std::pair{9, 0.045}}) {
    const double d = m.grid().delta(k + 1), t = m.grid().T(k);
    out.push_back({fmt("floorlet(%.0f,%.3f)", k, K), cosh::floorlet_price(m, k, K), [=, &m](const mc::PathView& p) {
                     const double x = p(k - 1, 0);
                     return m.P0T() * d * std::max(K - F(k, x), 0.0) * m.martingale(t, m.u(k + 1), x);
                   }});
    out.push_back({fmt("caplet(%.0f,%.3f)", k, K), cosh::caplet_price(m, k, K), [=, &m](const mc::PathView& p) {
                     const double x = p(k - 1, 0);
                     return m.P0T() * d * std::max(F(k, x) - K, 0.0) * m.martingale(t, m.u(k + 1), x);
                   }});
  }
  for (auto [a, b, K] : {std::tuple{2, 8, 0.035}, std::tuple{6, 16, 0.03}}) {
    const double t = m.grid().T(a);
    out.push_back({fmt("put_swaption(%.0f,%.0f,%.3f)", a, b, K), cosh::put_swaption_price(m, a, b, K),
                   [=, &m](const mc::PathView& p) {
                     const double x = p(a - 1, 0);
                     const double la = m.log_martingale(t, m.u(a), x);
                     double g = std::exp(m.log_martingale(t, m.u(b), x) - la) - 1.0;
                     for (int k = a + 1; k <= b; ++k)
                       g += K * m.grid().delta(k) * std::exp(m.log_martingale(t, m.u(k), x) - la);
                     return m.P0T() * std::max(g, 0.0) * std::exp(la);
                   }});
  }
  return out;
}

std::vector<McCheck> inflation_checks(const inflation::InflationModel& m) {
  std::vector<McCheck> out;
  // density of Q^{T_k} against Q^T
  auto weight = [&m](const mc::PathView& p, int k) {
    return std::exp(m.log_martingale(m.T(k), m.u(k), p.state(k - 1)) - m.log_martingale(0.0, m.u(k), m.x0()));
  };
  auto cpi = [&m](const mc::PathView& p, int k) { return k == 0 ? 1.0 : m.forward_cpi(m.T(k), k, p.state(k - 1)); };
  for (auto [k, K] : {std::pair{3, 0.03}, std::pair{4, 0.02}}) {
    auto F = [&m, k = k](const mc::PathView& p) {
      const Vec x = p.state(k - 2);
      return std::expm1(m.log_martingale(m.T(k - 1), m.u(k - 1), x) - m.log_martingale(m.T(k - 1), m.u(k), x)) /
             m.grid().delta(k);
    };
    const double d = m.grid().delta(k);
    out.push_back({fmt("floorlet(%.0f,%.3f)", k, K), inflation::nominal_floorlet_price(m, k, K),
                   [=, &m](const mc::PathView& p) { return m.discount(k) * d * std::max(K - F(p), 0.0) * weight(p, k); }});
    out.push_back({fmt("caplet(%.0f,%.3f)", k, K), inflation::nominal_caplet_price(m, k, K),
                   [=, &m](const mc::PathView& p) { return m.discount(k) * d * std::max(F(p) - K, 0.0) * weight(p, k); }});
  }
  for (auto [k, K] : {std::pair{2, 1.0}, std::pair{4, 1.05}})
    out.push_back({fmt("cpi_call(%.0f,%.2f)", k, K), inflation::cpi_call_price(m, k, K),
                   [=, &m](const mc::PathView& p) { return m.discount(k) * std::max(cpi(p, k) - K, 0.0) * weight(p, k); }});
  for (auto [b, k, K] : {std::tuple{0, 2, 0.02}, std::tuple{2, 4, 0.01}, std::tuple{2, 4, 0.035}})
    out.push_back({fmt("inflation_caplet(%.0f,%.0f,%.3f)", b, k, K), inflation::inflation_caplet_price(m, b, k, K),
                   [=, &m](const mc::PathView& p) {
                     const double span = m.T(k) - m.T(b);
                     return m.discount(k) * span * std::max((cpi(p, k) / cpi(p, b) - 1.0) / span - K, 0.0) *
                            weight(p, k);
                   }});
  for (auto [b, k] : {std::pair{0, 2}, std::pair{2, 4}})
    out.push_back({fmt("forward_inflation(%.0f,%.0f)", b, k), inflation::forward_inflation_rate(m, b, k),
                   [=, &m](const mc::PathView& p) {
                     return (cpi(p, k) / cpi(p, b) - 1.0) / (m.T(k) - m.T(b)) * weight(p, k);
                   }});
  return out;
}

Outcome monte_carlo() {
  std::string bad;
  int count = 0;
  double worst = 0.0;
  for (const Component& c : {Component(kFig21), Component(kFig22), Component(GaussOU{0.3, 0.5, 0.4, 0.1})}) {
    const auto m = flat_cosh(c);
    worst = std::max(worst, run_checks(m.spec(), m.grid().maturities(), cosh_checks(m), bad, count));
  }
  for (int which : {0, 1, 2}) {
    const auto m = testing_models::config(which, 2);
    worst = std::max(worst, run_checks(m.spec(), m.grid().maturities(), inflation_checks(m), bad, count));
  }
  return {bad.empty(), fmt("%.0f comparisons on 6 models, worst %.2f SE", count, worst) + (bad.empty() ? "" : ";" + bad)};
}

// 5. term-structure reproduction
Outcome term_structure() {
  double worst = 0.0;
  for (const Component& c : {Component(kFig21), Component(kFig22), Component(BrownianDrift{1.0, 0.0, 0.0})}) {
    Vec P;
    for (int k = 1; k <= 20; ++k) P.push_back(std::exp(-(0.01 + 0.003 * 0.5 * k) * 0.5 * k));
    const auto m = cosh::fit_u_sequence(AffineProcessSpec(c, 10.0), TenorGrid::regular(0.5, 20), P);
    for (int k = 1; k <= 20; ++k) worst = std::max(worst, rel(m.discount(k) / m.P0T(), P[k - 1] / P.back()));
  }
  for (int M : {3, 5}) {
    const auto ts = testing_models::sloped_curves(M);
    for (const Component& common : {Component(testing_models::kCommon), Component(CIR{0.2, 0.4, 0.2, 0.5})}) {
      const auto m = testing_models::fitted(
          testing_models::make_spec(M, common, CIRJump{0.3, 0.6, 0.15, 8.0, 0.7, 0.4},
                                    DoubleGammaOUBM{1.0, 0.05, 0.03, 30, 30, 0.5, 0.5, 0.0}),
          ts);
      for (int k = 1; k <= 2 * M; ++k)
        worst = std::max({worst, rel(m.discount(k) / m.P0T(), ts.discounts[k - 1] / ts.discounts.back()),
                          rel(m.forward_cpi(k), ts.forward_cpi[k - 1])});
    }
  }
  return {worst < 1e-10, fmt("max rel err %.2e", worst)};
}

// 6. figure shapes
Outcome figure_shapes() {
  Vec strikes;
  for (int i = 0; i <= 10; ++i) strikes.push_back(0.02 + 0.005 * i);
  std::vector<int> resets;
  for (int k = 1; k <= 10; ++k) resets.push_back(k);
  std::string bad;

  const auto skew = flat_cosh(kFig21);
  const auto s1 = cosh::caplet_surface(skew, resets, strikes);
  for (std::size_t r = 0; r < resets.size(); ++r) {
    bool mono = true;
    for (std::size_t i = 1; i < strikes.size(); ++i) {
      const auto& a = s1[r * strikes.size() + i - 1].implied_vol;
      const auto& b = s1[r * strikes.size() + i].implied_vol;
      mono = mono && a && b && *b < *a;
    }
    if (!mono) bad += fmt(" skew not decreasing at %.1fy;", s1[r * strikes.size()].expiry);
  }
  const auto smile = flat_cosh(kFig22);
  const auto s2 = cosh::caplet_surface(smile, resets, strikes);
  for (std::size_t r = 0; r < resets.size(); ++r) {
    std::size_t lo = 0;
    bool defined = true;
    for (std::size_t i = 0; i < strikes.size(); ++i) {
      const auto& v = s2[r * strikes.size() + i].implied_vol;
      defined = defined && v.has_value();
      if (v && *v < *s2[r * strikes.size() + lo].implied_vol) lo = i;
    }
    if (!defined || lo == 0 || lo == strikes.size() - 1)
      bad += fmt(" no interior smile minimum at %.1fy;", s2[r * strikes.size()].expiry);
  }
  Vec bounds;
  for (int k = 2; k <= 11; ++k) bounds.push_back(cosh::forward_rate_lower_bound(skew, k, skew.grid().T(k - 1)));
  for (std::size_t i = 1; i < bounds.size(); ++i)
    if (!(bounds[i] < bounds[i - 1])) bad += fmt(" lower bound not decreasing at %.1fy;", 0.5 * (i + 1));
  if (!(bounds[0] > 0.0 && bounds[0] < 0.02)) bad += fmt(" first lower bound %.4f outside (0, 0.02);", bounds[0]);
  return {bad.empty(), fmt("first lower bound %.4f, last %.4f", bounds.front(), bounds.back()) + (bad.empty() ? "" : ";" + bad)};
}

// 7. five-year synthetic calibration round trip
Outcome calibration_round_trip() {
  const int M = 5;
  const auto truth = testing_models::fitted(
      testing_models::make_spec(M, testing_models::kCommon, CIRJump{0.4, 0.7, 0.12, 6.0, 0.6, 0.5},
                                DoubleGammaOUBM{1.2, 0.03, 0.025, 25, 20, 0.8, 0.6, 0.01}),
      testing_models::sloped_curves(M));
  const auto snap = calibration::quotes_from_model(truth, {0.01, 0.02, 0.03, 0.04, 0.05}, {0.0, 0.01, 0.02, 0.03, 0.04});
  calibration::CalibrationConfig cfg;
  cfg.nominal_initial.x0 = truth.x0()[1];
  const auto res = calibration::calibrate(snap, cfg);
  double worst = 0.0;
  int n = 0;
  for (const auto& s : res.report.stages) worst = std::max(worst, s.objective), ++n;
  return {worst < 1e-10 && n == 2 * M, fmt("%.0f stages, worst objective %.2e", n, worst)};
}

// 8. parity and par-rate identities on random models; calls and puts use
// contours on opposite sides of the strip
Outcome parity() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto between = [&](double a, double b) { return a + (b - a) * U(rng); };
  double worst = 0.0;
  int models = 0, draws = 0;
  while (models < 12 && draws < 200) {
    ++draws;
    const int M = 2 + static_cast<int>(2 * U(rng));
    const CIR common{between(0.02, 0.5), between(0.2, 1.0), between(0.1, 0.5), between(0.5, 3.5)};
    const CIRJump nominal{between(0.1, 1.0), between(0.1, 1.0), between(0.05, 0.3), between(3, 15), between(0, 1),
                          between(0.1, 0.8)};
    const DoubleGammaOUBM infl{between(0.3, 2), between(-0.05, 0.1), between(0, 0.05), between(15, 40),
                               between(15, 40), between(0, 1.5), between(0, 1.5), between(-0.02, 0.05)};
    const double r = between(0.005, 0.04), slope = between(0, 0.004), pi = between(0.005, 0.03);
    inflation::TermStructure ts;
    for (int k = 1; k <= 2 * M; ++k) {
      const double t = 0.5 * k;
      ts.discounts.push_back(std::exp(-(r + slope * t) * t));
      ts.forward_cpi.push_back(std::exp(pi * t));
    }
    inflation::InflationModel m;
    try {
      m = testing_models::fitted(testing_models::make_spec(M, common, nominal, infl), ts);
    } catch (const Error&) {
      continue;
    }
    ++models;
    try {
      for (int k = 2; k <= m.size(); ++k)
        for (double K : {0.0, 0.02, 0.04}) {
          const auto T = inflation::nominal_forward_transform(m, k);
          const double d = m.grid().delta(k), Kt = 1.0 + d * K;
          const double lhs = m.discount(k) * (T.price(Kt) - T.put(Kt));
          worst = std::max(worst, std::abs(lhs - m.discount(k) * d * (m.forward_rate(k) - K)));
        }
      for (int y = 1; y <= M; ++y) {
        const int k = 2 * y;
        for (double K : {0.95, 1.0, 1.08}) {
          const auto T = inflation::cpi_transform(m, k);
          worst = std::max(worst, std::abs(m.discount(k) * (T.price(K) - T.put(K)) - (m.ilb_price(k) - m.discount(k) * K)));
        }
        for (double K : {-0.01, 0.02, 0.05}) {
          const auto T = inflation::yoy_transform(m, k - 2, k);
          const double Kt = 1.0 + K;
          worst = std::max(worst, std::abs(m.discount(k) * (T.price(Kt) - T.put(Kt)) -
                                           m.discount(k) * (inflation::forward_inflation_rate(m, k - 2, k) - K)));
        }
        worst = std::max({worst, std::abs(inflation::zciis_value(m, y, inflation::zciis_rate(m, y))),
                          std::abs(inflation::yyiis_value(m, y, inflation::yyiis_rate(m, y)))});
      }
    } catch (const Error& e) {
      return {false, std::string("pricing failed: ") + e.what()};
    }
  }
  return {worst < 1e-10 && models == 12, fmt("%.0f random models (%.0f draws), max residual %.2e", models, draws, worst)};
}

// 9. unimodality of the exercise functions on a 10^4-point scan, built from
// phi and psi directly
struct Affine {
  double phi_p, psi_p, phi_m, psi_m;  // exponents for +u and -u
  double log_m(double x) const { return numeric::logsumexp(phi_p + psi_p * x, phi_m + psi_m * x) - std::log(2.0); }
};

Affine affine_of(const cosh::CoshLiborModel& m, double t, double u) {
  const double tau = m.horizon() - t;
  if (u == 0.0) return {0.0, 0.0, 0.0, 0.0};
  const auto p = phi_psi(m.process(), tau, cplx(u)), q = phi_psi(m.process(), tau, cplx(-u));
  return {p.phi.real() + std::log(1.0), p.psi.real(), q.phi.real(), q.psi.real()};
}

// local maxima of a scan after merging equal neighbours; endpoints count when
// they exceed their single neighbour. Also checks the sign pattern is a
// subsequence of -, +, -.
bool unimodal(const Vec& g) {
  Vec v;
  for (double x : g)
    if (v.empty() || x != v.back()) v.push_back(x);
  int maxima = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool left = i == 0 || v[i] > v[i - 1];
    const bool right = i + 1 == v.size() || v[i] > v[i + 1];
    maxima += left && right;
  }
  int changes = 0;
  bool seen_positive = false, after = false;
  for (double x : g) {
    if (x > 0.0) {
      if (after) return false;
      if (!seen_positive) ++changes;
      seen_positive = true;
    } else if (seen_positive) {
      after = true;
    }
  }
  return maxima == 1 && changes <= 1;
}

Outcome unimodality() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  auto between = [&](double a, double b) { return a + (b - a) * U(rng); };
  int tested = 0, failed = 0, draws = 0;
  while (tested < 500 && draws < 5000) {
    ++draws;
    Component c;
    switch (static_cast<int>(5 * U(rng))) {
      case 0: c = BrownianDrift{between(0.3, 1.5), between(-0.1, 0.1), between(-0.5, 0.5)}; break;
      case 1: c = GaussOU{between(0.05, 1.0), between(-0.5, 0.5), between(0.1, 0.6), between(-0.5, 0.5)}; break;
      case 2: c = CIR{between(0.05, 1.0), between(0.2, 1.0), between(0.1, 0.5), between(0.1, 1.5)}; break;
      case 3: c = CIRJump{between(0.05, 1.0), between(0.2, 1.0), between(0.1, 0.5), between(5, 20), between(0, 1), between(0.1, 1.5)}; break;
      default:
        c = DoubleGammaOUBM{between(0.01, 0.5), between(-0.5, 0.5), between(0, 0.4), between(8, 50), between(5, 50),
                            between(1, 50), between(1, 50), between(-0.5, 1.0)};
    }
    const double r = between(0.005, 0.05), slope = between(-0.002, 0.004);
    Vec P;
    for (int k = 1; k <= 20; ++k) P.push_back(std::exp(-(r + slope * 0.5 * k) * 0.5 * k));
    cosh::CoshLiborModel m;
    try {
      m = cosh::fit_u_sequence(AffineProcessSpec(c, 10.0), TenorGrid::regular(0.5, 20), P);
    } catch (const Error&) {
      continue;
    }
    const bool swaption = tested % 2 == 1;
    const int a = 1 + static_cast<int>(15 * U(rng));
    const int b = swaption ? a + 1 + static_cast<int>((19 - a) * U(rng)) : a + 1;
    if (m.u(a) == m.u(b)) continue;
    const double t = m.grid().T(a);
    const double K = std::max(0.0, m.forward_rate(a + 1) + between(-0.02, 0.02));
    std::vector<Affine> legs;
    for (int k = a; k <= b; ++k) legs.push_back(affine_of(m, t, m.u(k)));
    auto g = [&](double x) {
      const double la = legs.front().log_m(x);
      if (!swaption) return 1.0 + m.grid().delta(b) * K - std::exp(la - legs.back().log_m(x));
      double v = std::exp(legs.back().log_m(x) - la) - 1.0;
      for (int k = a + 1; k <= b; ++k) v += K * m.grid().delta(k) * std::exp(legs[k - a].log_m(x) - la);
      return v;
    };
    // scan range: the state space, cut where g has fallen well below its value at x0
    const bool nonnegative = is_nonnegative(c);
    const double x0 = m.x0(), g0 = g(x0);
    double lo = nonnegative ? 0.0 : x0 - 1.0, hi = x0 + 1.0;
    while (!nonnegative && g(lo) > std::min(g0, 0.0) - 1.0 && lo > x0 - 1e4) lo = x0 - 2.0 * (x0 - lo);
    while (g(hi) > std::min(g0, 0.0) - 1.0 && hi < x0 + 1e4) hi = x0 + 2.0 * (hi - x0);
    Vec scan(10000);
    for (int i = 0; i < 10000; ++i) scan[i] = g(lo + (hi - lo) * i / 9999.0);
    ++tested;
    if (!unimodal(scan)) ++failed;
  }
  return {tested == 500 && failed == 0, fmt("%.0f functions scanned, %.0f not unimodal", tested, failed)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;  // seconds
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> all{
      {1, "closed-form cross-check", 5, closed_form},
      {2, "Riccati oracle", 10, riccati},
      {3, "semiflow suite", 5, semiflow},
      {4, "Monte Carlo concordance", 600, monte_carlo},
      {5, "term-structure reproduction", 60, term_structure},
      {6, "figure shapes", 120, figure_shapes},
      {7, "calibration round trip", 900, calibration_round_trip},
      {8, "parity and par rates", 60, parity},
      {9, "unimodality", 120, unimodality},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = o.ok && secs < c.limit;
    failures += !ok;
    std::printf("%s criterion %d (%s): %s; %.1f s of %.0f s\n", ok ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(),
                secs, c.limit);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
