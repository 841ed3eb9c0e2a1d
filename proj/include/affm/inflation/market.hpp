#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>

#include "affm/black.hpp"
#include "affm/inflation/fit.hpp"

namespace affm::inflation {

struct CurvePoint {
  double maturity;
  double discount;
};

struct ZciisQuote {
  int years;
  double rate;
};

// Caplet on the semiannual forward fixing at `expiry`.
struct CapletVol {
  double expiry;
  double strike;
  double vol;
};

// Year-on-year option on the index over [maturity - 1, maturity].
struct InflationOptionQuote {
  int maturity;
  double strike;
  OptionType type;
  double price_bps;
};

struct MarketSnapshot {
  std::vector<CurvePoint> curve;
  std::vector<ZciisQuote> zciis;
  std::vector<CapletVol> caplet_vols;
  std::vector<InflationOptionQuote> inflation_options;

  void validate() const {
    double prev = 0.0;
    for (const auto& p : curve) {
      if (!(p.maturity > prev)) fail(ErrorCode::InvalidInput, "curve maturities must be increasing and > 0");
      if (!(p.discount > 0.0 && p.discount <= 1.0)) fail(ErrorCode::InvalidInput, "discounts must lie in (0, 1]");
      prev = p.maturity;
    }
    int prev_year = 0;
    for (const auto& q : zciis) {
      if (q.years <= prev_year) fail(ErrorCode::InvalidInput, "ZCIIS maturities must be increasing whole years");
      if (!(q.rate > -1.0)) fail(ErrorCode::InvalidInput, "ZCIIS rate must exceed -100%");
      prev_year = q.years;
    }
    for (const auto& c : caplet_vols)
      if (!(c.vol > 0.0) || !(c.expiry > 0.0)) fail(ErrorCode::OutOfBounds, "caplet vols and expiries must be > 0");
    for (const auto& o : inflation_options)
      if (o.maturity < 1 || !std::isfinite(o.price_bps)) fail(ErrorCode::InvalidInput, "bad inflation option quote");
  }

  // log-linear in the discount factor, flat continuation of the last zero rate
  double discount(double t) const {
    if (curve.empty()) fail(ErrorCode::InvalidInput, "empty discount curve");
    if (t <= 0.0) return 1.0;
    double t0 = 0.0, l0 = 0.0;
    for (const auto& p : curve) {
      const double l1 = std::log(p.discount);
      if (t <= p.maturity) return std::exp(l0 + (l1 - l0) * (t - t0) / (p.maturity - t0));
      t0 = p.maturity;
      l0 = l1;
    }
    return std::exp(l0 * t / t0);
  }

  // forward CPI I(0,t) from ZCIIS quotes, log-linear between whole years with I(0,0) = 1
  double forward_cpi(double t) const {
    if (zciis.empty()) fail(ErrorCode::InvalidInput, "no ZCIIS quotes");
    if (t <= 0.0) return 1.0;
    double t0 = 0.0, l0 = 0.0;
    for (const auto& q : zciis) {
      const double l1 = q.years * std::log1p(q.rate);
      if (t <= q.years) return std::exp(l0 + (l1 - l0) * (t - t0) / (q.years - t0));
      t0 = q.years;
      l0 = l1;
    }
    return std::exp(l0 * t / t0);
  }

  TermStructure term_structure(int M) const {
    TermStructure ts;
    for (int k = 1; k <= 2 * M; ++k) {
      ts.discounts.push_back(discount(0.5 * k));
      if (!zciis.empty()) ts.forward_cpi.push_back(forward_cpi(0.5 * k));
    }
    return ts;
  }
};

namespace csv {

inline std::vector<std::vector<std::string>> read(const std::filesystem::path& path,
                                                  const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto a = cell.find_first_not_of(" \t"), b = cell.find_last_not_of(" \t");
      cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
    }
    if (first) {
      first = false;
      if (cells != header) fail(ErrorCode::Io, path.string() + ": unexpected header");
      continue;
    }
    if (cells.size() != header.size()) fail(ErrorCode::Io, path.string() + ": wrong number of columns");
    rows.push_back(cells);
  }
  if (first) fail(ErrorCode::Io, path.string() + ": missing header");
  return rows;
}

inline double number(const std::string& s, const std::filesystem::path& path) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::Io, path.string() + ": not a number: '" + s + "'");
  }
}

inline int whole(const std::string& s, const std::filesystem::path& path) {
  const double v = number(s, path);
  if (v != std::round(v)) fail(ErrorCode::Io, path.string() + ": expected whole years: '" + s + "'");
  return static_cast<int>(v);
}

}  // namespace csv

inline MarketSnapshot load_snapshot(const std::filesystem::path& dir) {
  MarketSnapshot s;
  namespace fs = std::filesystem;
  const auto curve = dir / "curve.csv";
  for (const auto& r : csv::read(curve, {"maturity_years", "discount_factor"}))
    s.curve.push_back({csv::number(r[0], curve), csv::number(r[1], curve)});
  if (const auto p = dir / "zciis.csv"; fs::exists(p))
    for (const auto& r : csv::read(p, {"maturity_years", "rate"}))
      s.zciis.push_back({csv::whole(r[0], p), csv::number(r[1], p)});
  if (const auto p = dir / "caplet_vols.csv"; fs::exists(p))
    for (const auto& r : csv::read(p, {"expiry_years", "strike", "vol"}))
      s.caplet_vols.push_back({csv::number(r[0], p), csv::number(r[1], p), csv::number(r[2], p)});
  if (const auto p = dir / "infl_options.csv"; fs::exists(p))
    for (const auto& r : csv::read(p, {"maturity_years", "strike", "type", "price_bps"})) {
      OptionType t;
      if (r[2] == "cap") t = OptionType::Call;
      else if (r[2] == "floor") t = OptionType::Put;
      else fail(ErrorCode::Io, p.string() + ": type must be cap or floor");
      s.inflation_options.push_back({csv::whole(r[0], p), csv::number(r[1], p), t, csv::number(r[3], p)});
    }
  s.validate();
  return s;
}

inline void save_snapshot(const MarketSnapshot& s, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name);
    if (!out) fail(ErrorCode::Io, "cannot write " + (dir / name).string());
    out << std::setprecision(17);
    return out;
  };
  {
    auto out = open("curve.csv");
    out << "maturity_years,discount_factor\n";
    for (const auto& p : s.curve) out << p.maturity << ',' << p.discount << '\n';
  }
  if (!s.zciis.empty()) {
    auto out = open("zciis.csv");
    out << "maturity_years,rate\n";
    for (const auto& q : s.zciis) out << q.years << ',' << q.rate << '\n';
  }
  if (!s.caplet_vols.empty()) {
    auto out = open("caplet_vols.csv");
    out << "expiry_years,strike,vol\n";
    for (const auto& c : s.caplet_vols) out << c.expiry << ',' << c.strike << ',' << c.vol << '\n';
  }
  if (!s.inflation_options.empty()) {
    auto out = open("infl_options.csv");
    out << "maturity_years,strike,type,price_bps\n";
    for (const auto& o : s.inflation_options)
      out << o.maturity << ',' << o.strike << ',' << (o.type == OptionType::Call ? "cap" : "floor") << ','
          << o.price_bps << '\n';
  }
}

}  // namespace affm::inflation
