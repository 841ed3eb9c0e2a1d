#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include "affm/calibration/config.hpp"
#include "affm/inflation/market.hpp"
#include "affm/inflation/pricing.hpp"

namespace affm::calibration {

using inflation::InflationModel;
using inflation::MarketSnapshot;
using inflation::ParamLayout;

struct StageReport {
  std::string kind;  // "nominal" or "inflation"
  int year = 0;
  int n_quotes = 0;
  double objective = 0.0;
  int evals = 0;
  int restarts = 0;
  bool converged = false;
  bool budget_exhausted = false;
  Vec history;  // best objective after each evaluation
  Component params;
};

struct CapletResidual {
  double expiry, strike, market_vol, model_vol, market_price, model_price;
};

struct InflationResidual {
  int maturity;
  double strike;
  OptionType type;
  double market_price, model_price;
};

struct LowerBoundAudit {
  int k;
  double bound;
  bool flagged;
};

struct CalibrationReport {
  Objective objective = Objective::MsePrice;
  std::vector<StageReport> stages;
  std::vector<CapletResidual> caplets;
  std::vector<InflationResidual> inflation;
  std::vector<LowerBoundAudit> lower_bounds;
};

namespace detail {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Free parameters of one process variant and their search coordinates.
template <class P>
struct Coder {
  struct Field {
    const char* name;
    double P::*member;
  };
  std::vector<Field> fields;
  std::vector<ParamBound> bounds;

  Coder(std::vector<Field> f, const Bounds& b) : fields(std::move(f)) {
    for (const auto& x : fields) bounds.push_back(b.at(x.name));
  }

  double scale(std::size_t i) const { return 0.1 * (bounds[i].hi - bounds[i].lo); }

  Vec encode(const P& p) const {
    Vec s(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto& b = bounds[i];
      const double v = std::clamp(p.*(fields[i].member), b.lo, b.hi);
      s[i] = b.log ? std::log(v) : v / scale(i);
    }
    return s;
  }

  // false when s lies outside the box
  bool decode(const Vec& s, P& p) const {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto& b = bounds[i];
      const double v = b.log ? std::exp(s[i]) : s[i] * scale(i);
      if (!(v >= b.lo && v <= b.hi)) return false;
      p.*(fields[i].member) = v;
    }
    return true;
  }
};

inline Coder<CIRJump> nominal_coder(const Bounds& b) {
  return {{{"lambda", &CIRJump::lambda},
           {"theta", &CIRJump::theta},
           {"eta", &CIRJump::eta},
           {"alpha", &CIRJump::alpha},
           {"beta", &CIRJump::beta}},
          b};
}

inline Coder<DoubleGammaOUBM> inflation_coder(const Bounds& b) {
  return {{{"lambda", &DoubleGammaOUBM::lambda},
           {"theta", &DoubleGammaOUBM::theta},
           {"sigma", &DoubleGammaOUBM::sigma},
           {"alpha_plus", &DoubleGammaOUBM::alpha_plus},
           {"alpha_minus", &DoubleGammaOUBM::alpha_minus},
           {"beta_plus", &DoubleGammaOUBM::beta_plus},
           {"beta_minus", &DoubleGammaOUBM::beta_minus}},
          b};
}

inline inflation::PricingOptions pricing(const CalibrationConfig& c) {
  inflation::PricingOptions o;
  o.contour = c.contour;
  o.quad.rel_tol = c.pricing_rel_tol;
  return o;
}

inline bool on_grid(double t, int& k) {
  const double h = 2.0 * t;
  k = static_cast<int>(std::lround(h));
  return std::abs(h - k) < 1e-9;
}

// Market forward and annuity of the semiannual caplet fixing at `expiry`.
inline void caplet_market(const MarketSnapshot& s, double expiry, double& F, double& annuity) {
  const double P0 = s.discount(expiry), P1 = s.discount(expiry + 0.5);
  F = (P0 / P1 - 1.0) / 0.5;
  annuity = 0.5 * P1;
}

inline double caplet_market_price(const MarketSnapshot& s, const inflation::CapletVol& q) {
  double F, A;
  caplet_market(s, q.expiry, F, A);
  return black_price(OptionType::Call, F, q.strike, q.vol, q.expiry, A);
}

inline double mean_square(const Vec& r) {
  double s = 0.0;
  for (double x : r) s += x * x;
  return r.empty() ? 0.0 : s / static_cast<double>(r.size());
}

template <class P>
P with_x0(P p, double x0) {
  p.x0 = x0;
  return p;
}

[[noreturn]] inline void stage_infeasible(const char* kind, int year, const std::string& why) {
  std::ostringstream os;
  os << kind << " stage " << year << ": " << why;
  fail(ErrorCode::StageInfeasible, os.str());
}

template <class P, class Objective>
StageReport run_stage(const char* kind, int year, int n_quotes, const Coder<P>& coder, P start, Objective&& obj,
                      const CalibrationConfig& cfg) {
  auto f = [&](const Vec& s) {
    P p = start;
    if (!coder.decode(s, p)) return kInf;
    try {
      return obj(p);
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::DomainError:
        case ErrorCode::ContourError:
        case ErrorCode::Infeasible:
        case ErrorCode::InvalidSpec:
        case ErrorCode::LayoutError:
        case ErrorCode::OutOfBounds:
        case ErrorCode::InvalidInput:
          return kInf;
        default:
          throw;
      }
    }
  };
  auto opt = cfg.optimizer();
  opt.seed = cfg.seed + 7919u * static_cast<std::uint64_t>(year) + (kind[0] == 'n' ? 0u : 104729u);
  const auto r = nelder_mead(f, coder.encode(start), opt);
  if (!std::isfinite(r.fx))
    stage_infeasible(kind, year, "no admissible parameters within bounds (every evaluation failed)");
  P best = start;
  coder.decode(r.x, best);
  StageReport rep;
  rep.kind = kind;
  rep.year = year;
  rep.n_quotes = n_quotes;
  rep.objective = r.fx;
  rep.evals = r.evals;
  rep.restarts = r.restarts;
  rep.converged = r.converged;
  rep.budget_exhausted = !r.converged && r.evals >= opt.max_evals;
  rep.history = r.history;
  rep.params = best;
  return rep;
}

}  // namespace detail

inline int resolve_years(const MarketSnapshot& s, const CalibrationConfig& c) {
  if (c.years > 0) return c.years;
  if (s.curve.empty()) fail(ErrorCode::InvalidInput, "empty discount curve");
  const int M = static_cast<int>(std::floor(s.curve.back().maturity + 1e-9));
  if (M < 1) fail(ErrorCode::InvalidInput, "discount curve must cover at least one year");
  return M;
}

// Model on the snapshot's curves with the configured starting processes:
// common loadings by default policy, bar_u from the discount curve and, when
// ZCIIS quotes are present, bar_v from the ILB curve. Without ZCIIS quotes the
// index is flat.
inline InflationModel initial_model(const MarketSnapshot& s, const CalibrationConfig& c) {
  s.validate();
  c.validate();
  const int M = resolve_years(s, c);
  std::vector<Component> cs{c.common};
  for (int i = 0; i < M; ++i) cs.push_back(c.nominal_initial);
  for (int i = 0; i < M; ++i) cs.push_back(c.inflation_initial);
  const AffineProcessSpec spec(cs, M);
  const auto ts = s.term_structure(M);
  auto L = ParamLayout::zeros(M);
  L.tilde_u = inflation::default_tilde_u(spec.component(0), M, inflation::bond_ratios(ts.discounts));
  L.bar_u = inflation::fit_ubar_sequence(spec, L, inflation::bond_ratios(ts.discounts));
  if (ts.forward_cpi.empty()) {
    L.tilde_v = L.tilde_u;
  } else {
    L.tilde_v = inflation::default_tilde_v(L.tilde_u, c.tilde_v_c);
    inflation::fit_vbar_sequence(spec, L, inflation::ilb_ratios(ts));
  }
  return InflationModel(spec, L, ts.discounts.back());
}

inline std::vector<LowerBoundAudit> audit_lower_bounds(const InflationModel& m, double flag) {
  std::vector<LowerBoundAudit> out;
  for (int k = 2; k <= m.size(); ++k) {
    const double b = inflation::forward_rate_lower_bound(m, k);
    out.push_back({k, b, b >= flag});
  }
  return out;
}

// Backward nominal stages k = M..1: the CIRJump factor X^k is fitted to the
// caplets on F^{2k} (fixing at T_{2k-1}); bar_u is refitted to the discount
// curve inside every evaluation. Stages without quotes keep their start.
inline InflationModel calibrate_nominal(const MarketSnapshot& s, const CalibrationConfig& c,
                                        CalibrationReport* report = nullptr) {
  const InflationModel start = initial_model(s, c);
  const int M = start.years();
  const auto ratios = inflation::bond_ratios(s.term_structure(M).discounts);
  const auto popt = detail::pricing(c);
  const auto coder = detail::nominal_coder(c.nominal_bounds);
  AffineProcessSpec spec = start.spec();
  ParamLayout L = start.layout();
  const double P0T = start.P0T();

  std::optional<CIRJump> prev;
  for (int year = M; year >= 1; --year) {
    const int k = 2 * year;
    std::vector<inflation::CapletVol> quotes;
    for (const auto& q : s.caplet_vols) {
      int j;
      if (detail::on_grid(q.expiry, j) && j == k - 1) quotes.push_back(q);
    }
    if (quotes.empty()) continue;
    Vec market(quotes.size());
    for (std::size_t i = 0; i < quotes.size(); ++i) market[i] = detail::caplet_market_price(s, quotes[i]);

    auto objective = [&](const CIRJump& p) {
      const auto sp = spec.with_component(year, p);
      ParamLayout l = L;
      l.bar_u = inflation::fit_ubar_sequence(sp, l, ratios);
      const InflationModel m(sp, l, P0T);
      Vec r(quotes.size());
      for (std::size_t i = 0; i < quotes.size(); ++i) {
        const double price = inflation::nominal_caplet_price(m, k, quotes[i].strike, popt);
        r[i] = c.objective == Objective::MsePrice ? price - market[i]
                                                  : inflation::caplet_implied_vol(m, k, quotes[i].strike, price) -
                                                        quotes[i].vol;
      }
      return detail::mean_square(r);
    };
    // warm start from the neighbouring stage, own initial state
    CIRJump first = std::get<CIRJump>(spec.component(year));
    if (prev) first = detail::with_x0(*prev, first.x0);
    auto rep = detail::run_stage("nominal", year, static_cast<int>(quotes.size()), coder, first, objective, c);
    prev = std::get<CIRJump>(rep.params);
    spec = spec.with_component(year, rep.params);
    L.bar_u = inflation::fit_ubar_sequence(spec, L, ratios);
    if (report) report->stages.push_back(std::move(rep));
  }
  L.tilde_v = L.tilde_u;
  L.bar_v.assign(L.size(), 0.0);
  InflationModel out(spec, L, P0T);
  if (report) {
    report->objective = c.objective;
    report->lower_bounds = audit_lower_bounds(out, c.lower_bound_flag);
  }
  return out;
}

// Forward inflation stages k = 1..M: the DoubleGammaOUBM factor X^{M+k} is
// fitted to year-on-year options on [T_{2k-2}, T_{2k}]; bar_v of year k is
// refitted to the ZCIIS curve inside every evaluation.
inline InflationModel calibrate_inflation(const MarketSnapshot& s, const InflationModel& nominal,
                                          const CalibrationConfig& c, CalibrationReport* report = nullptr) {
  s.validate();
  c.validate();
  if (s.zciis.empty()) fail(ErrorCode::InvalidInput, "inflation calibration needs ZCIIS quotes");
  const int M = nominal.years();
  const auto ilb = inflation::ilb_ratios(s.term_structure(M));
  const auto popt = detail::pricing(c);
  const auto coder = detail::inflation_coder(c.inflation_bounds);
  AffineProcessSpec spec = nominal.spec();
  ParamLayout L = nominal.layout();
  L.tilde_v = inflation::default_tilde_v(L.tilde_u, c.tilde_v_c);
  L.bar_v.assign(L.size(), 0.0);
  for (int j = 1; j <= L.size(); ++j) {
    try {
      L.bar_v[j - 1] = inflation::fit_vbar(spec, L, j, ilb[j - 1]).value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Infeasible) throw;
    }
  }
  const double P0T = nominal.P0T();

  auto refit_year = [&](const AffineProcessSpec& sp, ParamLayout& l, int year) {
    for (int j = 2 * year - 1; j <= 2 * year; ++j) l.bar_v[j - 1] = inflation::fit_vbar(sp, l, j, ilb[j - 1]).value;
  };

  std::optional<DoubleGammaOUBM> prev;
  for (int year = 1; year <= M; ++year) {
    const int b = 2 * year - 2, k = 2 * year;
    std::vector<inflation::InflationOptionQuote> quotes;
    for (const auto& q : s.inflation_options)
      if (q.maturity == year) quotes.push_back(q);
    const std::size_t comp = static_cast<std::size_t>(M + year);
    if (quotes.empty()) {
      refit_year(spec, L, year);
      continue;
    }
    auto objective = [&](const DoubleGammaOUBM& p) {
      const auto sp = spec.with_component(comp, p);
      ParamLayout l = L;
      refit_year(sp, l, year);
      for (int j = 2 * year - 1; j <= 2 * year; ++j) {
        const double v = l.bar_v[j - 1];
        if (v + c.alpha_margin > p.alpha_plus || -v + c.alpha_margin > p.alpha_minus) return detail::kInf;
      }
      const InflationModel m(sp, l, P0T);
      Vec r(quotes.size());
      for (std::size_t i = 0; i < quotes.size(); ++i) {
        const auto& q = quotes[i];
        const double price = inflation::inflation_option_price(m, q.type, b, k, q.strike, popt);
        const double target = 1e-4 * q.price_bps;
        r[i] = c.objective == Objective::MsePrice
                   ? price - target
                   : inflation::inflation_implied_vol(m, q.type, b, k, q.strike, price) -
                         inflation::inflation_implied_vol(m, q.type, b, k, q.strike, target);
      }
      return detail::mean_square(r);
    };
    DoubleGammaOUBM first = std::get<DoubleGammaOUBM>(spec.component(comp));
    if (prev) first = detail::with_x0(*prev, first.x0);
    auto rep = detail::run_stage("inflation", year, static_cast<int>(quotes.size()), coder, first, objective, c);
    prev = std::get<DoubleGammaOUBM>(rep.params);
    spec = spec.with_component(comp, rep.params);
    refit_year(spec, L, year);
    if (report) report->stages.push_back(std::move(rep));
  }
  return InflationModel(spec, L, P0T);
}

// Residual grids of the final model against every quote of the snapshot.
inline void fill_residuals(const InflationModel& m, const MarketSnapshot& s, const CalibrationConfig& c,
                           CalibrationReport& r) {
  const auto popt = detail::pricing(c);
  r.caplets.clear();
  for (const auto& q : s.caplet_vols) {
    CapletResidual x{q.expiry, q.strike, q.vol, detail::kNaN, detail::caplet_market_price(s, q), detail::kNaN};
    int j;
    if (detail::on_grid(q.expiry, j) && j >= 1 && j < m.size()) {
      try {
        x.model_price = inflation::nominal_caplet_price(m, j + 1, q.strike, popt);
        x.model_vol = inflation::caplet_implied_vol(m, j + 1, q.strike, x.model_price);
      } catch (const Error&) {
      }
    }
    r.caplets.push_back(x);
  }
  r.inflation.clear();
  for (const auto& q : s.inflation_options) {
    InflationResidual x{q.maturity, q.strike, q.type, 1e-4 * q.price_bps, detail::kNaN};
    if (q.maturity <= m.years()) {
      try {
        x.model_price = inflation::inflation_option_price(m, q.type, 2 * q.maturity - 2, 2 * q.maturity, q.strike, popt);
      } catch (const Error&) {
      }
    }
    r.inflation.push_back(x);
  }
  r.lower_bounds = audit_lower_bounds(m, c.lower_bound_flag);
}

struct CalibrationResult {
  InflationModel model;
  CalibrationReport report;
};

// Nominal stages, then inflation stages when the snapshot has ZCIIS quotes.
inline CalibrationResult calibrate(const MarketSnapshot& s, const CalibrationConfig& c) {
  CalibrationResult out;
  out.model = calibrate_nominal(s, c, &out.report);
  if (!s.zciis.empty()) out.model = calibrate_inflation(s, out.model, c, &out.report);
  fill_residuals(out.model, s, c, out.report);
  return out;
}

}  // namespace affm::calibration
