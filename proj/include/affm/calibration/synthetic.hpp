#pragma once

#include "affm/inflation/market.hpp"
#include "affm/inflation/pricing.hpp"

namespace affm::calibration {

// Quotes generated by a model: discounts at every tenor date, ZCIIS rates per
// year, caplet vols on every stochastic forward and year-on-year cap and
// floor prices per year. Strikes whose model price has no Black vol are
// skipped.
inline inflation::MarketSnapshot quotes_from_model(const inflation::InflationModel& m, const Vec& caplet_strikes,
                                                   const Vec& inflation_strikes) {
  using namespace inflation;
  MarketSnapshot s;
  for (int k = 1; k <= m.size(); ++k) s.curve.push_back({m.T(k), m.discount(k)});
  for (int y = 1; y <= m.years(); ++y) s.zciis.push_back({y, zciis_rate(m, y)});
  for (int k = 2; k <= m.size(); ++k)
    for (double K : caplet_strikes) {
      try {
        const double vol = caplet_implied_vol(m, k, K, nominal_caplet_price(m, k, K));
        if (vol > 0.0) s.caplet_vols.push_back({m.T(k - 1), K, vol});
      } catch (const Error& e) {
        if (e.code() != ErrorCode::OutOfBounds) throw;
      }
    }
  for (int y = 1; y <= m.years(); ++y)
    for (double K : inflation_strikes)
      for (OptionType t : {OptionType::Call, OptionType::Put})
        s.inflation_options.push_back({y, K, t, 1e4 * inflation_option_price(m, t, 2 * y - 2, 2 * y, K)});
  s.validate();
  return s;
}

}  // namespace affm::calibration
