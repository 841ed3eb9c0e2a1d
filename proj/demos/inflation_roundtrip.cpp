// Generates quotes from a known two-year inflation model, calibrates a fresh
// model to them stage by stage and compares the recovered prices.
#include <cstdio>

#include "affm/calibration/calibrate.hpp"
#include "affm/calibration/synthetic.hpp"
#include "affm/inflation/pricing.hpp"

using namespace affm;

int main() {
  const int M = 2;
  std::vector<Component> cs{CIR{0.026, 0.65, 0.5, 3.45}};
  for (int i = 0; i < M; ++i) cs.push_back(CIRJump{0.4, 0.7, 0.12, 6.0, 0.6, 0.5});
  for (int i = 0; i < M; ++i) cs.push_back(DoubleGammaOUBM{1.2, 0.03, 0.025, 25.0, 20.0, 0.8, 0.6, 0.01});
  const AffineProcessSpec spec(cs, M);

  inflation::TermStructure ts;
  for (int k = 1; k <= 2 * M; ++k) {
    const double t = 0.5 * k;
    ts.discounts.push_back(std::exp(-(0.015 + 0.004 * t) * t));
    ts.forward_cpi.push_back(std::exp(0.02 * t));
  }
  auto L = inflation::ParamLayout::zeros(M);
  L.tilde_u = inflation::default_tilde_u(spec.component(0), M, inflation::bond_ratios(ts.discounts));
  L.tilde_v = inflation::default_tilde_v(L.tilde_u);
  const auto truth = inflation::fit_term_structure(spec, L, ts);

  const auto market = calibration::quotes_from_model(truth, {0.01, 0.02, 0.03, 0.04}, {-0.01, 0.0, 0.02, 0.03});
  calibration::CalibrationConfig cfg;
  cfg.budget = 600;
  const auto fit = calibration::calibrate(market, cfg);

  for (const auto& s : fit.report.stages)
    std::printf("%-9s stage, year %d: objective %.3e after %d evaluations\n", s.kind.c_str(), s.year, s.objective,
                s.evals);
  std::printf("\n   kind  T  strike      market       model\n");
  for (const auto& c : fit.report.caplets)
    std::printf(" caplet %3.1f  %5.2f%%  %10.6f  %10.6f  (vols)\n", c.expiry, 100 * c.strike, c.market_vol, c.model_vol);
  for (const auto& o : fit.report.inflation)
    std::printf("    yoy %3d  %5.2f%%  %10.6f  %10.6f  (%s, bp)\n", o.maturity, 100 * o.strike, 1e4 * o.market_price,
                1e4 * o.model_price, o.type == OptionType::Call ? "cap" : "floor");
}
