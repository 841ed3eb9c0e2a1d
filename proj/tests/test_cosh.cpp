#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <random>

#include "affm/cosh/brownian.hpp"
#include "affm/cosh/pricing.hpp"

using namespace affm;
using namespace affm::cosh;

namespace {

const DoubleGammaOUBM kFig21{0.02, 0.5, 0.3, 12.0, 10.0, 50.0, 5.0, 0.7};
const DoubleGammaOUBM kFig22{0.02, 0.0, 0.0, 50.0, 5.0, 50.0, 10.0, 1.0};

Vec flat_discounts(double rate, double step, int n) {
  Vec P;
  for (int k = 1; k <= n; ++k) P.push_back(std::pow(1.0 + rate * step, -k));
  return P;
}

CoshLiborModel flat_model(const Component& c, double rate = 0.035) {
  return fit_u_sequence(AffineProcessSpec(c, 10.0), TenorGrid::regular(0.5, 20), flat_discounts(rate, 0.5, 20));
}

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Io;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Gaussian OU model priced by integrating the payoff against the transition
// density. Everything here is written out from scratch.
struct GaussOracle {
  GaussOU p;
  double T;
  double mean(double x, double tau) const {
    const double E = std::exp(-p.lambda * tau);
    return x * E + p.theta * (1 - E);
  }
  double var(double tau) const { return p.sigma * p.sigma * (1 - std::exp(-2 * p.lambda * tau)) / (2 * p.lambda); }
  // E[cosh(u X_T) | X_t = x]
  double M(double u, double t, double x) const {
    const double m = mean(x, T - t), v = var(T - t);
    return std::exp(0.5 * u * u * v) * std::cosh(u * m);
  }
  template <class Payoff>
  double expect(double t, Payoff&& f) const {
    const double m = mean(p.x0, t), s = std::sqrt(var(t));
    auto dens = [&](double x) {
      const double z = (x - m) / s;
      return std::exp(-0.5 * z * z) / (s * std::sqrt(2 * numeric::kPi)) * f(x);
    };
    double err;
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(dens, m - 14 * s, m + 14 * s, 12, 1e-13,
                                                                        &err);
  }
};

}  // namespace

TEST(CoshModel, MartingaleBasics) {
  auto m = flat_model(kFig21);
  EXPECT_EQ(m.martingale(3.0, 0.0, 0.4), 1.0);
  EXPECT_NEAR(m.martingale(10.0, 0.8, 0.4), std::cosh(0.32), 1e-15);
  EXPECT_DOUBLE_EQ(m.log_martingale(2.0, 0.8, 0.1), m.log_martingale(2.0, -0.8, 0.1));
  auto b = flat_model(BrownianDrift{1.0, 0.0, 0.0});
  EXPECT_NEAR(b.martingale(0.0, 0.4, 0.0), std::exp(0.5 * 0.16 * 10.0), 1e-14);
}

TEST(CoshModel, BondRatiosAreOrdered) {
  auto m = flat_model(kFig21);
  for (double t : {0.0, 2.5, 7.0})
    for (double x : {-30.0, -1.0, 0.0, 0.7, 5.0, 40.0})
      for (int k = 2; k <= m.size(); ++k) {
        const double a = m.martingale(t, m.u(k - 1), x), b = m.martingale(t, m.u(k), x);
        EXPECT_GE(a, b * (1 - 1e-14));
        EXPECT_GE(b, 1.0 - 1e-14);
      }
}

TEST(CoshFit, ReproducesDiscountCurve) {
  for (const Component& c : {Component(BrownianDrift{1, 0, 0}), Component(GaussOU{0.3, 0.0, 0.5, 0.2}),
                             Component(kFig21), Component(kFig22)}) {
    const Vec P = flat_discounts(0.035, 0.5, 20);
    auto m = flat_model(c);
    for (int k = 1; k <= 20; ++k) EXPECT_LT(rel(m.discount(k), P[k - 1]), 1e-10) << variant_name(c) << " k=" << k;
    for (int k = 2; k < 20; ++k) EXPECT_LT(m.u(k), m.u(k - 1));
    EXPECT_EQ(m.u(20), 0.0);
  }
}

TEST(CoshFit, BrownianAnalyticInverse) {
  auto m = flat_model(BrownianDrift{1, 0, 0});
  const Vec P = flat_discounts(0.035, 0.5, 20);
  for (int k = 1; k < 20; ++k) EXPECT_NEAR(m.u(k), std::sqrt(2 * std::log(P[k - 1] / P[19]) / 10.0), 1e-12);
}

TEST(CoshFit, FlatZeroCurveGivesZeroU) {
  auto m = fit_u_sequence(AffineProcessSpec(kFig21, 5.0), TenorGrid::regular(1.0, 5), Vec(5, 0.9));
  for (int k = 1; k <= 5; ++k) EXPECT_EQ(m.u(k), 0.0);
}

TEST(CoshFit, Errors) {
  auto grid = TenorGrid::regular(0.5, 20);
  EXPECT_EQ(code_of([&] {
              Vec P = flat_discounts(0.035, 0.5, 20);
              std::swap(P[3], P[4]);
              fit_u_sequence(AffineProcessSpec(kFig21, 10.0), grid, P);
            }),
            ErrorCode::NonmonotoneInput);
  // Fig 2.2 only admits |u| < 5, which caps the reachable bond price ratio
  EXPECT_EQ(code_of([&] {
              fit_u_sequence(AffineProcessSpec(kFig22, 10.0), TenorGrid::regular(5.0, 2), {0.5, 0.5 * std::exp(-400.0)});
            }),
            ErrorCode::Infeasible);
}

TEST(CoshPricing, BrownianFourierMatchesClosedForm) {
  auto m = flat_model(BrownianDrift{1, 0, 0});
  for (int k : {1, 3, 6, 10, 15})
    for (double K : {0.01, 0.025, 0.03, 0.035, 0.045, 0.07}) {
      const double cf = brownian_floorlet_price(m, k, K);
      if (cf == 0.0) {
        EXPECT_EQ(floorlet_price(m, k, K), 0.0);
        continue;
      }
      EXPECT_LT(rel(floorlet_price(m, k, K), cf), 1e-8) << k << " " << K;
    }
  for (auto [a, b] : {std::pair{1, 5}, std::pair{4, 10}, std::pair{10, 20}})
    for (double K : {0.02, 0.035, 0.05}) {
      EXPECT_LT(rel(put_swaption_price(m, a, b, K), brownian_put_swaption_price(m, a, b, K)), 1e-8);
    }
}

TEST(CoshPricing, BrownianSymmetricBounds) {
  auto m = flat_model(BrownianDrift{1, 0, 0});
  const double t = m.grid().T(4), Kt = 1 + 0.5 * 0.04;
  auto g = [&](double x) { return Kt - std::exp(m.log_martingale(t, m.u(4), x) - m.log_martingale(t, m.u(5), x)); };
  auto b = find_exercise_bounds(g, 0.3);
  EXPECT_NEAR(b.lower, -b.upper, 1e-9);
  EXPECT_LT(std::abs(g(b.lower)), 1e-12);
  EXPECT_LT(std::abs(g(b.upper)), 1e-12);
}

TEST(CoshPricing, GaussianDensityOracle) {
  const GaussOU p{0.3, 0.1, 1.5, 0.2};
  auto m = flat_model(p);
  const GaussOracle o{p, 10.0};
  for (int k : {2, 7, 12})
    for (double K : {0.02, 0.035, 0.05}) {
      const double t = m.grid().T(k), d = m.grid().delta(k + 1), Kt = 1 + d * K;
      const double ua = m.u(k), ub = m.u(k + 1);
      const double fl = m.P0T() * o.expect(t, [&](double x) { return std::max(Kt * o.M(ub, t, x) - o.M(ua, t, x), 0.0); });
      const double cp = m.P0T() * o.expect(t, [&](double x) { return std::max(o.M(ua, t, x) - Kt * o.M(ub, t, x), 0.0); });
      EXPECT_LT(std::abs(floorlet_price(m, k, K) - fl), 1e-8 * fl + 1e-14) << k << " " << K;
      EXPECT_LT(std::abs(caplet_price(m, k, K) - cp), 1e-8 * cp + 1e-14) << k << " " << K;
    }
}

TEST(CoshPricing, ContourIndependence) {
  auto m = flat_model(kFig21);
  for (int k : {1, 5, 9})
    for (double K : {0.02, 0.035, 0.06}) {
      // one line on each side of the origin, clear of the poles at psi(+-u)
      const double tau = m.horizon() - m.grid().T(k);
      const double pole = phi_psi(m.process(), tau, cplx(m.u(k + 1))).psi.real();
      PricingOptions a, b;
      a.contour = -3.0;
      b.contour = 0.5 * pole;
      EXPECT_LT(rel(floorlet_price(m, k, K, a), floorlet_price(m, k, K, b)), 1e-8) << k << " " << K;
    }
}

TEST(CoshPricing, OnePeriodSwaptionIsFloorlet) {
  for (const Component& c : {Component(kFig21), Component(kFig22), Component(BrownianDrift{1, 0, 0})}) {
    auto m = flat_model(c);
    for (int k : {1, 4, 9})
      for (double K : {0.025, 0.04}) {
        // the swaption pays at T_k, the floorlet at T_{k+1}: both are the same Q^T expectation
        EXPECT_LT(rel(put_swaption_price(m, k, k + 1, K), floorlet_price(m, k, K)), 1e-9) << variant_name(c);
      }
  }
}

TEST(CoshPricing, ParityResidual) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> K(0.0, 0.08);
  auto m = flat_model(kFig21);
  for (int i = 0; i < 10; ++i) {
    const int k = 1 + static_cast<int>(rng() % 19);
    const double strike = K(rng);
    const double lhs = caplet_price(m, k, strike) - floorlet_price(m, k, strike);
    const double rhs = m.discount(k + 1) * m.grid().delta(k + 1) * (m.forward_rate(k + 1) - strike);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10);
  }
}

TEST(CoshPricing, LargeStrikeCapletVanishes) {
  auto m = flat_model(kFig21);
  EXPECT_LT(caplet_price(m, 4, 5.0), 1e-10);
}

TEST(CoshPricing, StrikeBelowLowerBoundIsWorthless) {
  for (const Component& c : {Component(kFig21), Component(kFig22)}) {
    auto m = flat_model(c);
    for (int k : {1, 5, 9}) {
      const double lb = forward_rate_lower_bound(m, k + 1, m.grid().T(k));
      EXPECT_EQ(floorlet_price(m, k, lb - 1e-4), 0.0);
      EXPECT_GT(floorlet_price(m, k, lb + 5e-3), 0.0);
    }
  }
}

TEST(CoshPricing, EqualUGivesDeterministicForward) {
  auto grid = TenorGrid::regular(1.0, 4);
  CoshLiborModel m(AffineProcessSpec(kFig21, 4.0), grid, {0.5, 0.3, 0.3, 0.0}, 0.88);
  EXPECT_EQ(forward_rate_lower_bound(m, 3, 1.0), 0.0);
  EXPECT_NEAR(floorlet_price(m, 2, 0.01), m.discount(3) * 0.01, 1e-15);
  EXPECT_EQ(floorlet_price(m, 2, -0.01), 0.0);
}

TEST(CoshBounds, LowerBoundBelowForwardAndScan) {
  auto m = flat_model(kFig21);
  for (int k = 2; k <= 11; ++k) {
    const double t = m.grid().T(k - 1), lb = forward_rate_lower_bound(m, k, t);
    EXPECT_LE(lb, m.forward_rate(k) + 1e-15);
    double scan = numeric::kInf;
    for (double x = -50; x <= 50; x += 0.01) scan = std::min(scan, m.forward_rate(k, t, x));
    EXPECT_LE(lb, scan + 1e-12);
    EXPECT_GT(lb, scan - 1e-6);
  }
  const double first = forward_rate_lower_bound(m, 2, m.grid().T(1));
  EXPECT_GT(first, 0.0);
  EXPECT_LT(first, 0.02);
}

TEST(CoshBounds, SyntheticFunctions) {
  auto b = find_exercise_bounds([](double x) { return 1 - (x - 2) * (x - 2); }, 0.0);
  EXPECT_FALSE(b.degenerate);
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, 3.0, 1e-12);
  EXPECT_NEAR(b.xi, 2.0, 1e-6);

  auto d = find_exercise_bounds([](double x) { return -1 - x * x; }, 0.5);
  EXPECT_TRUE(d.degenerate);

  EXPECT_EQ(code_of([] { find_exercise_bounds([](double x) { return 0.5 - (x * x - 1) * (x * x - 1); }, 0.9); }),
            ErrorCode::NotUnimodal);
  EXPECT_EQ(code_of([] { find_exercise_bounds([](double x) { return 1 - std::exp(-x * x); }, 0.5); }),
            ErrorCode::NotUnimodal);
}

TEST(CoshBounds, ModelFunctionsAreUnimodal) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  for (int i = 0; i < 20; ++i) {
    const DoubleGammaOUBM p{0.01 + 0.2 * U(rng), U(rng) - 0.5, 0.5 * U(rng), 8 + 10 * U(rng), 8 + 10 * U(rng),
                            30 * U(rng), 30 * U(rng), 2 * U(rng) - 1};
    auto m = flat_model(p, 0.01 + 0.04 * U(rng));
    const int k = 1 + static_cast<int>(rng() % 19);
    const double t = m.grid().T(k), Kt = 1 + 0.5 * 0.08 * U(rng);
    auto g = [&](double x) {
      return Kt - std::exp(m.log_martingale(t, m.u(k), x) - m.log_martingale(t, m.u(k + 1), x));
    };
    int maxima = 0;
    double prev2 = g(-60), prev1 = g(-60 + 0.012);
    for (int j = 2; j < 10000; ++j) {
      const double cur = g(-60 + 0.012 * j);
      if (prev1 > prev2 && prev1 > cur) ++maxima;
      prev2 = prev1;
      prev1 = cur;
    }
    EXPECT_LE(maxima, 1) << i;
    auto b = find_exercise_bounds(g, m.x0());
    if (!b.degenerate) {
      EXPECT_LT(std::abs(g(b.lower)), 1e-12);
      EXPECT_LT(std::abs(g(b.upper)), 1e-12);
      EXPECT_GT(g(0.5 * (b.lower + b.upper)), 0.0);
    }
  }
}

TEST(CoshH, MatchesDefiningIntegral) {
  auto m = flat_model(kFig21);
  const double t = 2.0, u = m.u(3), k1 = -1.3, k2 = 2.1;
  for (cplx z : {cplx(-2.0, 0.0), cplx(-2.0, 3.0), cplx(1.5, -7.0)}) {
    auto f = [&](double x, bool im) {
      const double h = 1e-5;
      const double dM = (m.martingale(t, u, x + h) - m.martingale(t, u, x - h)) / (2 * h);
      const cplx v = std::exp(z * x) * dM;
      return im ? v.imag() : v.real();
    };
    double err;
    const double re = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return f(x, false); }, k1, k2, 6, 1e-11, &err);
    const double im = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        [&](double x) { return f(x, true); }, k1, k2, 6, 1e-11, &err);
    const cplx h = h_function(m, t, z, u, k1, k2);
    EXPECT_LT(std::abs(h - cplx(re, im)) / std::abs(h), 1e-8);
  }
  EXPECT_EQ(h_function(m, t, cplx(0.3, 1.0), u, 0.7, 0.7), cplx(0.0));
  EXPECT_EQ(h_function(m, t, cplx(0.3, 1.0), 0.0, -1.0, 0.7), cplx(0.0));
}

TEST(CoshErrors, Codes) {
  auto m = flat_model(kFig21);
  const double psi = phi_psi(m.process(), m.horizon() - 2.0, cplx(m.u(3))).psi.real();
  EXPECT_EQ(code_of([&] { h_function(m, 2.0, cplx(-psi), m.u(3), -1, 1); }), ErrorCode::PoleError);
  PricingOptions outside;
  outside.contour = 20.0;
  EXPECT_EQ(code_of([&] { floorlet_price(m, 2, 0.03, outside); }), ErrorCode::ContourError);
  PricingOptions at_zero;
  at_zero.contour = 0.0;
  EXPECT_EQ(code_of([&] { floorlet_price(m, 2, 0.03, at_zero); }), ErrorCode::ContourError);
  EXPECT_EQ(code_of([&] { floorlet_price(m, 0, 0.03); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([&] { floorlet_price(m, 20, 0.03); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([&] { brownian_floorlet_price(m, 2, 0.03); }), ErrorCode::WrongSpec);
  EXPECT_EQ(code_of([&] { put_swaption_price(m, 3, 3, 0.03); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([&] { m.martingale(11.0, 0.1, 0.0); }), ErrorCode::InvalidTime);
}

TEST(CoshBrownian, DegenerateCases) {
  auto grid = TenorGrid::regular(1.0, 3);
  CoshLiborModel m(AffineProcessSpec(BrownianDrift{1, 0, 0}, 3.0), grid, {0.4, 0.4, 0.0}, 0.9);
  // constant payoff K~ - 1 when the two u agree
  EXPECT_NEAR(brownian_floorlet_price(m, 1, 0.02), 0.9 * std::exp(0.5 * 0.16 * 3.0) * 0.02, 1e-15);
  EXPECT_EQ(brownian_floorlet_price(m, 1, -0.02), 0.0);
  auto b = flat_model(BrownianDrift{1, 0, 0});
  EXPECT_EQ(brownian_floorlet_price(b, 3, -0.5), 0.0);
}
