#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "affm/calibration/calibrate.hpp"
#include "affm/calibration/report.hpp"
#include "affm/cli/verify.hpp"
#include "affm/cosh/pricing.hpp"
#include "affm/inflation/market.hpp"
#include "affm/inflation/pricing.hpp"
#include "affm/io/model_json.hpp"

namespace affm::cli {

namespace fs = std::filesystem;
using io::json;

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kInfeasible = 3, kNumerical = 4 };

inline int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::Infeasible:
    case ErrorCode::StageInfeasible:
    case ErrorCode::NonmonotoneInput:
      return kInfeasible;
    case ErrorCode::DomainError:
    case ErrorCode::InvalidTime:
    case ErrorCode::OdeBlowup:
    case ErrorCode::DegenerateVariance:
    case ErrorCode::NotUnimodal:
    case ErrorCode::PoleError:
    case ErrorCode::ContourError:
    case ErrorCode::OutOfBounds:
      return kNumerical;
    default:
      return kUsage;
  }
}

namespace detail {

// one line: error code=<name> exit=<n> command=<cmd> message="<text>"
inline void diagnose(std::ostream& err, const std::string& command, const std::string& code, int exit,
                     const std::string& message) {
  std::string m;
  for (char ch : message) {
    if (ch == '\n' || ch == '\r') m += ' ';
    else if (ch == '"') m += "\\\"";
    else m += ch;
  }
  err << "error code=" << code << " exit=" << exit << " command=" << (command.empty() ? "-" : command) << " message=\""
      << m << "\"\n";
}

inline Vec range(double lo, double hi, double step) {
  Vec v;
  for (int i = 0; lo + i * step <= hi + 1e-9 * step; ++i) v.push_back(lo + i * step);
  return v;
}

inline std::ofstream open_csv(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(dir / name);
  if (!out) fail(ErrorCode::Io, "cannot write " + (dir / name).string());
  out << std::setprecision(12);
  return out;
}

inline std::string number_or_nan(std::optional<double> v) {
  if (!v) return "nan";
  std::ostringstream os;
  os << std::setprecision(12) << *v;
  return os.str();
}

inline json read_config(const std::string& path) { return path.empty() ? json::object() : io::read_json(path); }

// Market data: CSV files in `market_dir`, or flat curves from the config
// ("flat_rate" with "tenor"/"horizon", and "flat_inflation" for ZCIIS).
inline inflation::MarketSnapshot market_from(const json& cfg, const std::string& market_dir) {
  if (!market_dir.empty()) return inflation::load_snapshot(market_dir);
  if (!cfg.contains("flat_rate")) fail(ErrorCode::InvalidInput, "need --market or flat_rate in the config");
  inflation::MarketSnapshot s;
  const double r = cfg.at("flat_rate").get<double>();
  const double step = cfg.value("tenor", 0.5), horizon = cfg.value("horizon", 10.0);
  const int n = static_cast<int>(std::lround(horizon / step));
  for (int k = 1; k <= n; ++k) s.curve.push_back({step * k, std::pow(1.0 + r * step, -k)});
  if (cfg.contains("flat_inflation")) {
    const double i = cfg.at("flat_inflation").get<double>();
    for (int y = 1; y <= static_cast<int>(horizon + 1e-9); ++y) s.zciis.push_back({y, i});
  }
  s.validate();
  return s;
}

inline cosh::CoshLiborModel fit_cosh(const json& cfg, const inflation::MarketSnapshot& s) {
  if (!cfg.contains("process")) fail(ErrorCode::InvalidInput, "cosh config needs a 'process'");
  const Component c = io::component_from_json(cfg.at("process"));
  Vec T, P;
  for (const auto& p : s.curve) {
    T.push_back(p.maturity);
    P.push_back(p.discount);
  }
  return cosh::fit_u_sequence(AffineProcessSpec(c, T.back()), TenorGrid(T), P);
}

inline io::AnyModel model_from_config(const json& cfg, const std::string& market_dir) {
  const auto s = market_from(cfg, market_dir);
  const std::string kind = cfg.value("model", "cosh");
  if (kind == "cosh") return fit_cosh(cfg, s);
  if (kind == "inflation") return calibration::initial_model(s, calibration::config_from_json(cfg));
  fail(ErrorCode::InvalidInput, "model must be cosh or inflation");
}

template <class M>
const M& expect_model(const io::AnyModel& m, const char* what) {
  if (const auto* p = std::get_if<M>(&m)) return *p;
  fail(ErrorCode::InvalidInput, std::string(what) + " needs a " +
                                    (std::is_same_v<M, cosh::CoshLiborModel> ? "cosh" : "inflation") + " model");
}

struct Options {
  std::string config, model_in, model_out, out_dir, market;
  std::optional<std::uint64_t> seed;
  // price
  std::string instrument;
  double strike = 0.0;
  int index = 0, start = -1, alpha = 0, beta = 0, years = 0;
  std::optional<double> contour;
  // surface
  std::string kind;
};

inline void save_if_requested(const io::AnyModel& m, const Options& o) {
  if (o.model_out.empty()) return;
  std::visit([&](const auto& x) { io::save_model(x, o.model_out); }, m);
}

inline io::AnyModel input_model(const Options& o) {
  if (!o.model_in.empty()) return io::load_model(o.model_in);
  if (!o.config.empty() || !o.market.empty()) return model_from_config(read_config(o.config), o.market);
  fail(ErrorCode::InvalidInput, "need --model-in, or --config/--market to build a model");
}

inline calibration::CalibrationConfig calibration_config(const Options& o) {
  auto c = calibration::config_from_json(read_config(o.config));
  if (o.seed) c.seed = *o.seed;
  return c;
}

inline int fit_curve(const Options& o, std::ostream& out) {
  const auto m = model_from_config(read_config(o.config), o.market);
  save_if_requested(m, o);
  if (o.model_out.empty()) out << std::visit([](const auto& x) { return io::to_json(x); }, m).dump(2) << '\n';
  return kOk;
}

inline int calibrate_nominal(const Options& o) {
  const auto s = inflation::load_snapshot(o.market);
  const auto c = calibration_config(o);
  calibration::CalibrationReport r;
  r.objective = c.objective;
  const auto m = calibration::calibrate_nominal(s, c, &r);
  calibration::fill_residuals(m, s, c, r);
  if (!o.out_dir.empty()) calibration::write_report(r, o.out_dir);
  save_if_requested(m, o);
  return kOk;
}

inline int calibrate_inflation(const Options& o) {
  const auto s = inflation::load_snapshot(o.market);
  const auto c = calibration_config(o);
  const auto nominal = o.model_in.empty() ? calibration::initial_model(s, c)
                                          : expect_model<inflation::InflationModel>(io::load_model(o.model_in),
                                                                                    "calibrate-inflation");
  calibration::CalibrationReport r;
  r.objective = c.objective;
  const auto m = calibration::calibrate_inflation(s, nominal, c, &r);
  calibration::fill_residuals(m, s, c, r);
  if (!o.out_dir.empty()) calibration::write_report(r, o.out_dir);
  save_if_requested(m, o);
  return kOk;
}

inline double price_cosh(const cosh::CoshLiborModel& m, const Options& o) {
  cosh::PricingOptions p;
  p.contour = o.contour;
  if (o.instrument == "floorlet") return cosh::floorlet_price(m, o.index, o.strike, p);
  if (o.instrument == "caplet") return cosh::caplet_price(m, o.index, o.strike, p);
  if (o.instrument == "put-swaption") return cosh::put_swaption_price(m, o.alpha, o.beta, o.strike, p);
  fail(ErrorCode::InvalidInput, "unknown cosh instrument '" + o.instrument + "'");
}

inline double price_inflation(const inflation::InflationModel& m, const Options& o) {
  inflation::PricingOptions p;
  p.contour = o.contour;
  const int b = o.start >= 0 ? o.start : o.index - 2;
  if (o.instrument == "floorlet") return inflation::nominal_floorlet_price(m, o.index, o.strike, p);
  if (o.instrument == "caplet") return inflation::nominal_caplet_price(m, o.index, o.strike, p);
  if (o.instrument == "cpi-call") return inflation::cpi_call_price(m, o.index, o.strike, p);
  if (o.instrument == "cpi-put") return inflation::cpi_put_price(m, o.index, o.strike, p);
  if (o.instrument == "yoy-cap") return inflation::inflation_caplet_price(m, b, o.index, o.strike, p);
  if (o.instrument == "yoy-floor") return inflation::inflation_floorlet_price(m, b, o.index, o.strike, p);
  if (o.instrument == "forward-inflation") return inflation::forward_inflation_rate(m, b, o.index);
  if (o.instrument == "zciis") return inflation::zciis_rate(m, o.years);
  if (o.instrument == "yyiis") return inflation::yyiis_rate(m, o.years);
  fail(ErrorCode::InvalidInput, "unknown inflation instrument '" + o.instrument + "'");
}

inline int price(const Options& o, std::ostream& out) {
  const auto m = input_model(o);
  const double v = std::visit(
      [&](const auto& x) {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, cosh::CoshLiborModel>) return price_cosh(x, o);
        else return price_inflation(x, o);
      },
      m);
  std::ostringstream line;
  line << std::setprecision(17) << "instrument,value\n" << o.instrument << ',' << v << '\n';
  if (!o.out_dir.empty()) detail::open_csv(o.out_dir, "price.csv") << line.str();
  else out << line.str();
  return kOk;
}

// Caplet smile grid: expiries up to 5 years, strikes 2% to 7%.
inline void cosh_caplet_surface(const cosh::CoshLiborModel& m, const json& cfg, const fs::path& dir) {
  const double max_expiry = cfg.value("max_expiry", 5.0);
  const Vec strikes = cfg.value("strikes", range(0.02, 0.07, 0.005));
  std::vector<int> resets;
  for (int k = 1; k < m.size() && m.grid().T(k) <= max_expiry + 1e-9; ++k) resets.push_back(k);
  auto out = open_csv(dir, "vol_surface.csv");
  out << "expiry_years,strike,implied_vol,price\n";
  for (const auto& p : cosh::caplet_surface(m, resets, strikes))
    out << p.expiry << ',' << p.strike << ',' << number_or_nan(p.implied_vol) << ',' << p.price << '\n';
}

// At-the-money receiver swaptions; expiry and swap length in whole years.
inline void cosh_swaption_surface(const cosh::CoshLiborModel& m, const json& cfg, const fs::path& dir) {
  const Vec years = cfg.value("years", range(2.0, 7.0, 1.0));
  auto out = open_csv(dir, "swaption_surface.csv");
  out << "expiry_years,tenor_years,strike,implied_vol,price\n";
  for (double e : years)
    for (double len : years) {
      const int a = m.grid().find(e), b = m.grid().find(e + len);
      if (a < 1 || b < 0) continue;
      double annuity = 0.0;
      for (int k = a + 1; k <= b; ++k) annuity += m.grid().delta(k) * m.discount(k);
      const double S = (m.discount(a) - m.discount(b)) / annuity;
      const double p = cosh::put_swaption_price(m, a, b, S);
      std::optional<double> vol;
      try {
        vol = black_implied_vol(p, OptionType::Put, S, S, e, annuity);
      } catch (const Error&) {
      }
      out << e << ',' << len << ',' << S << ',' << number_or_nan(vol) << ',' << p << '\n';
    }
}

inline void inflation_caplet_surface(const inflation::InflationModel& m, const json& cfg, const fs::path& dir) {
  const Vec strikes = cfg.value("strikes", range(0.01, 0.06, 0.01));
  auto out = open_csv(dir, "caplet_surface.csv");
  out << "expiry_years,strike,implied_vol,price\n";
  for (int k = 2; k <= m.size(); ++k)
    for (double K : strikes) {
      const double p = inflation::nominal_caplet_price(m, k, K);
      std::optional<double> vol;
      try {
        vol = inflation::caplet_implied_vol(m, k, K, p);
      } catch (const Error&) {
      }
      out << m.T(k - 1) << ',' << K << ',' << number_or_nan(vol) << ',' << p << '\n';
    }
}

// Annual forward inflation against the ratio of forward CPIs.
inline void forward_inflation_table(const inflation::InflationModel& m, const fs::path& dir) {
  auto out = open_csv(dir, "forward_inflation.csv");
  out << "maturity_years,forward_inflation,cpi_ratio_minus_one\n";
  for (int y = 1; y <= m.years(); ++y) {
    const double start = y == 1 ? 1.0 : m.forward_cpi(2 * y - 2);
    out << y << ',' << inflation::forward_inflation_rate(m, 2 * y - 2, 2 * y) << ','
        << m.forward_cpi(2 * y) / start - 1.0 << '\n';
  }
}

// Year-on-year floors for strikes up to `floor_max`, caps above; prices in
// basis points with shifted-Black vols.
inline void inflation_option_surface(const inflation::InflationModel& m, const json& cfg, const fs::path& dir) {
  const Vec strikes = cfg.value("strikes", range(-0.02, 0.06, 0.01));
  const double floor_max = cfg.value("floor_max_strike", 0.01 + 1e-12);
  const double shift = cfg.value("shift", 1.0);
  auto out = open_csv(dir, "inflation_surface.csv");
  out << "maturity_years,strike,type,price_bps,implied_vol\n";
  for (int y = 1; y <= m.years(); ++y)
    for (double K : strikes) {
      const OptionType t = K <= floor_max ? OptionType::Put : OptionType::Call;
      const double p = inflation::inflation_option_price(m, t, 2 * y - 2, 2 * y, K);
      std::optional<double> vol;
      try {
        vol = inflation::inflation_implied_vol(m, t, 2 * y - 2, 2 * y, K, p, shift);
      } catch (const Error&) {
      }
      out << y << ',' << K << ',' << (t == OptionType::Call ? "cap" : "floor") << ',' << 1e4 * p << ','
          << number_or_nan(vol) << '\n';
    }
}

inline int surface(const Options& o) {
  if (o.out_dir.empty()) fail(ErrorCode::InvalidInput, "surface needs --out-dir");
  const json cfg = read_config(o.config);
  const json grid = cfg.value("surface", json::object());
  const auto m = input_model(o);
  save_if_requested(m, o);
  if (const auto* c = std::get_if<cosh::CoshLiborModel>(&m)) {
    const std::string kind = o.kind.empty() ? "caplet-vol" : o.kind;
    if (kind == "caplet-vol") cosh_caplet_surface(*c, grid, o.out_dir);
    else if (kind == "swaption-vol") cosh_swaption_surface(*c, grid, o.out_dir);
    else fail(ErrorCode::InvalidInput, "cosh surfaces: caplet-vol or swaption-vol");
    return kOk;
  }
  const auto& m2 = std::get<inflation::InflationModel>(m);
  const std::string kind = o.kind.empty() ? "inflation-options" : o.kind;
  if (kind == "caplet-vol") inflation_caplet_surface(m2, grid, o.out_dir);
  else if (kind == "forward-inflation") forward_inflation_table(m2, o.out_dir);
  else if (kind == "inflation-options") inflation_option_surface(m2, grid, o.out_dir);
  else fail(ErrorCode::InvalidInput, "inflation surfaces: caplet-vol, forward-inflation or inflation-options");
  return kOk;
}

inline int verify(const Options& o, std::ostream& out) {
  const auto results = verify_suite(o.seed.value_or(1));
  std::ostringstream table;
  table << std::setprecision(6) << "check,error,tolerance,status\n";
  bool ok = true;
  for (const auto& r : results) {
    table << r.name << ',' << r.error << ',' << r.tolerance << ',' << (r.passed() ? "pass" : "fail") << '\n';
    ok = ok && r.passed();
  }
  if (!o.out_dir.empty()) open_csv(o.out_dir, "verify.csv") << table.str();
  else out << table.str();
  return ok ? kOk : kFailed;
}

}  // namespace detail

// Entry point of the affm command line tool; returns the process exit code.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Affine LIBOR and inflation market models: curve fitting, calibration, pricing"};
  app.require_subcommand(1);
  detail::Options o;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--model-in", o.model_in, "model JSON to load")->check(CLI::ExistingFile);
    sub->add_option("--model-out", o.model_out, "where to write the resulting model JSON");
    sub->add_option("--out-dir", o.out_dir, "directory for output files");
    sub->add_option("--seed", seed, "random seed");
  };
  auto* fit = app.add_subcommand("fit-curve", "fit a model to a discount (and ZCIIS) curve");
  common(fit);
  fit->add_option("--market", o.market, "directory with curve.csv and optional zciis.csv")->check(CLI::ExistingDirectory);
  auto* nom = app.add_subcommand("calibrate-nominal", "calibrate the nominal factors to caplet vols");
  common(nom);
  nom->add_option("--market", o.market, "market snapshot directory")->required()->check(CLI::ExistingDirectory);
  auto* inf = app.add_subcommand("calibrate-inflation", "calibrate the inflation factors to year-on-year options");
  common(inf);
  inf->add_option("--market", o.market, "market snapshot directory")->required()->check(CLI::ExistingDirectory);
  auto* pr = app.add_subcommand("price", "price one instrument");
  common(pr);
  pr->add_option("--market", o.market, "market directory used with --config")->check(CLI::ExistingDirectory);
  pr->add_option("--instrument", o.instrument,
                 "floorlet, caplet, put-swaption (cosh); floorlet, caplet, cpi-call, cpi-put, yoy-cap, yoy-floor, "
                 "forward-inflation, zciis, yyiis (inflation)")
      ->required();
  pr->add_option("--strike", o.strike, "strike");
  pr->add_option("--index", o.index, "tenor index: reset date (cosh) or payment date (inflation)");
  pr->add_option("--start", o.start, "start index of a year-on-year period (default index - 2)");
  pr->add_option("--alpha", o.alpha, "swaption expiry index");
  pr->add_option("--beta", o.beta, "swap end index");
  pr->add_option("--years", o.years, "swap maturity in years");
  pr->add_option("--contour", o.contour, "Fourier contour R");
  auto* sf = app.add_subcommand("surface", "write a price/vol grid as CSV");
  common(sf);
  sf->add_option("--market", o.market, "market directory used with --config")->check(CLI::ExistingDirectory);
  sf->add_option("--kind", o.kind,
                 "caplet-vol, swaption-vol (cosh); caplet-vol, forward-inflation, inflation-options (inflation)");
  auto* vf = app.add_subcommand("verify", "run the built-in consistency checks");
  common(vf);

  std::string command;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    for (auto* s : app.get_subcommands()) command = s->get_name();
    detail::diagnose(err, command, "Usage", kUsage, e.what());
    return kUsage;
  }
  command = app.get_subcommands().front()->get_name();
  if (app.get_subcommands().front()->count("--seed")) o.seed = seed;

  try {
    if (command == "fit-curve") return detail::fit_curve(o, out);
    if (command == "calibrate-nominal") return detail::calibrate_nominal(o);
    if (command == "calibrate-inflation") return detail::calibrate_inflation(o);
    if (command == "price") return detail::price(o, out);
    if (command == "surface") return detail::surface(o);
    return detail::verify(o, out);
  } catch (const Error& e) {
    const int code = exit_code(e.code());
    detail::diagnose(err, command, to_string(e.code()), code, e.what());
    return code;
  } catch (const json::exception& e) {
    detail::diagnose(err, command, "InvalidInput", kUsage, e.what());
    return kUsage;
  } catch (const std::exception& e) {
    detail::diagnose(err, command, "Internal", kFailed, e.what());
    return kFailed;
  }
}

}  // namespace affm::cli
