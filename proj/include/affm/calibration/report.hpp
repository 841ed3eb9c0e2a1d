#pragma once

#include <filesystem>
#include <fstream>
#include <iomanip>

#include "affm/calibration/calibrate.hpp"
#include "affm/io/model_json.hpp"

namespace affm::calibration {

namespace detail {

inline io::json number_or_null(double x) { return std::isfinite(x) ? io::json(x) : io::json(nullptr); }

}  // namespace detail

inline io::json to_json(const CalibrationReport& r) {
  io::json stages = io::json::array();
  for (const auto& s : r.stages)
    stages.push_back({{"kind", s.kind},
                      {"year", s.year},
                      {"quotes", s.n_quotes},
                      {"objective", s.objective},
                      {"evaluations", s.evals},
                      {"restarts", s.restarts},
                      {"converged", s.converged},
                      {"budget_exhausted", s.budget_exhausted},
                      {"params", io::to_json(s.params)},
                      {"history", s.history}});
  io::json bounds = io::json::array();
  bool flagged = false;
  for (const auto& b : r.lower_bounds) {
    bounds.push_back({{"k", b.k}, {"lower_bound", b.bound}, {"flagged", b.flagged}});
    flagged = flagged || b.flagged;
  }
  io::json caplets = io::json::array();
  for (const auto& c : r.caplets)
    caplets.push_back({{"expiry_years", c.expiry},
                       {"strike", c.strike},
                       {"market_vol", c.market_vol},
                       {"model_vol", detail::number_or_null(c.model_vol)},
                       {"market_price", c.market_price},
                       {"model_price", detail::number_or_null(c.model_price)}});
  io::json options = io::json::array();
  for (const auto& o : r.inflation)
    options.push_back({{"maturity_years", o.maturity},
                       {"strike", o.strike},
                       {"type", o.type == OptionType::Call ? "cap" : "floor"},
                       {"market_price", o.market_price},
                       {"model_price", detail::number_or_null(o.model_price)}});
  return {{"objective", to_string(r.objective)},
          {"stages", stages},
          {"lower_bounds", bounds},
          {"lower_bound_flagged", flagged},
          {"caplet_residuals", caplets},
          {"inflation_residuals", options}};
}

// report.json, caplet_residuals.csv and inflation_residuals.csv in `dir`.
inline void write_report(const CalibrationReport& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  io::write_json(to_json(r), dir / "report.json");
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) fail(ErrorCode::Io, "cannot write " + (dir / name).string());
    out << std::setprecision(17);
    return out;
  };
  {
    auto out = open("caplet_residuals.csv");
    out << "expiry_years,strike,market_vol,model_vol,market_price,model_price,price_residual\n";
    for (const auto& c : r.caplets) {
      out << c.expiry << ',' << c.strike << ',' << c.market_vol << ',';
      if (std::isfinite(c.model_vol)) out << c.model_vol; else out << "nan";
      out << ',' << c.market_price << ',';
      if (std::isfinite(c.model_price)) out << c.model_price << ',' << c.model_price - c.market_price;
      else out << "nan,nan";
      out << '\n';
    }
  }
  {
    auto out = open("inflation_residuals.csv");
    out << "maturity_years,strike,type,market_price,model_price,price_residual\n";
    for (const auto& o : r.inflation) {
      out << o.maturity << ',' << o.strike << ',' << (o.type == OptionType::Call ? "cap" : "floor") << ','
          << o.market_price << ',';
      if (std::isfinite(o.model_price)) out << o.model_price << ',' << o.model_price - o.market_price;
      else out << "nan,nan";
      out << '\n';
    }
  }
}

}  // namespace affm::calibration
