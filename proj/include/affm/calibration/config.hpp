#pragma once

#include <map>
#include <optional>
#include <string>

#include "affm/calibration/nelder_mead.hpp"
#include "affm/io/spec_json.hpp"

namespace affm::calibration {

enum class Objective { MsePrice, MseImpliedVol };

inline const char* to_string(Objective o) { return o == Objective::MsePrice ? "mse_price" : "mse_implied_vol"; }

// One free parameter of a stage; `log` parameters are searched on a log scale.
struct ParamBound {
  double lo, hi;
  bool log = true;
};

using Bounds = std::map<std::string, ParamBound>;

inline Bounds default_nominal_bounds() {
  return {{"lambda", {1e-3, 20.0}}, {"theta", {1e-4, 20.0}}, {"eta", {1e-3, 5.0}},
          {"alpha", {0.2, 200.0}},  {"beta", {1e-8, 50.0}}};
}

inline Bounds default_inflation_bounds() {
  return {{"lambda", {1e-3, 20.0}},      {"theta", {-1.0, 1.0, false}},  {"sigma", {1e-8, 2.0}},
          {"alpha_plus", {0.5, 500.0}},  {"alpha_minus", {0.5, 500.0}}, {"beta_plus", {1e-8, 50.0}},
          {"beta_minus", {1e-8, 50.0}}};
}

struct CalibrationConfig {
  int years = 0;  // 0: whole years covered by the discount curve
  Objective objective = Objective::MsePrice;
  int budget = 2000;  // objective evaluations per stage
  std::uint64_t seed = 1;
  double ftol = 1e-15;
  double xtol = 1e-10;
  double initial_step = 0.25;
  double pricing_rel_tol = 1e-10;
  std::optional<double> contour;
  double tilde_v_c = 0.08;
  double alpha_margin = 0.1;        // alpha_+- must exceed the largest |bar_v| by this much
  double lower_bound_flag = 0.005;  // flag forward-rate lower bounds at or above this
  Component common = CIR{0.026, 0.65, 0.5, 3.45};
  CIRJump nominal_initial{0.3, 0.5, 0.15, 8.0, 0.5, 0.4};
  DoubleGammaOUBM inflation_initial{1.0, 0.02, 0.03, 30.0, 30.0, 0.5, 0.5, 0.0};
  Bounds nominal_bounds = default_nominal_bounds();
  Bounds inflation_bounds = default_inflation_bounds();

  void validate() const {
    if (budget <= 0) fail(ErrorCode::InvalidInput, "calibration budget must be > 0");
    if (years < 0) fail(ErrorCode::InvalidInput, "years must be >= 0");
    if (!is_nonnegative(common)) fail(ErrorCode::InvalidSpec, "the common factor must be nonnegative");
    affm::detail::validate(nominal_initial);
    affm::detail::validate(inflation_initial);
    auto check = [](const Bounds& b, const Bounds& allowed, const char* stage) {
      for (const auto& [name, r] : b) {
        if (!allowed.count(name))
          fail(ErrorCode::InvalidInput, std::string(stage) + ": unknown parameter '" + name + "'");
        if (!(r.lo < r.hi) || (r.log && !(r.lo > 0.0)))
          fail(ErrorCode::InvalidInput, std::string(stage) + ": bad bounds for '" + name + "'");
      }
    };
    check(nominal_bounds, default_nominal_bounds(), "nominal");
    check(inflation_bounds, default_inflation_bounds(), "inflation");
    // bounds must respect the process constraints
    auto at_least = [](const Bounds& b, const char* name, double min, const char* stage) {
      if (auto it = b.find(name); it != b.end() && it->second.lo < min)
        fail(ErrorCode::InvalidInput, std::string(stage) + ": lower bound of '" + name + "' violates the process");
    };
    for (const char* p : {"lambda", "eta", "alpha"}) at_least(nominal_bounds, p, 1e-300, "nominal");
    at_least(nominal_bounds, "theta", 0.0, "nominal");
    at_least(nominal_bounds, "beta", 0.0, "nominal");
    for (const char* p : {"lambda", "alpha_plus", "alpha_minus"}) at_least(inflation_bounds, p, 1e-300, "inflation");
    for (const char* p : {"sigma", "beta_plus", "beta_minus"}) at_least(inflation_bounds, p, 0.0, "inflation");
  }

  NelderMeadOptions optimizer() const {
    NelderMeadOptions o;
    o.max_evals = budget;
    o.seed = seed;
    o.ftol = ftol;
    o.xtol = xtol;
    o.initial_step = initial_step;
    return o;
  }
};

namespace detail {

using io::json;

inline Bounds bounds_from_json(const json& j, Bounds base) {
  for (const auto& [name, v] : j.items()) {
    if (!v.is_array() || v.size() != 2) fail(ErrorCode::InvalidInput, "bounds for '" + name + "' must be [lo, hi]");
    auto it = base.find(name);
    if (it == base.end()) fail(ErrorCode::InvalidInput, "unknown parameter '" + name + "'");
    it->second.lo = v[0].get<double>();
    it->second.hi = v[1].get<double>();
  }
  return base;
}

inline json bounds_to_json(const Bounds& b) {
  json j = json::object();
  for (const auto& [name, r] : b) j[name] = {r.lo, r.hi};
  return j;
}

template <class P>
P params_from_json(const json& j, const char* variant) {
  json c{{"variant", variant}, {"params", j}};
  return std::get<P>(io::component_from_json(c));
}

}  // namespace detail

inline CalibrationConfig config_from_json(const io::json& j) {
  CalibrationConfig c;
  try {
    if (j.contains("years")) c.years = j.at("years").get<int>();
    if (j.contains("objective")) {
      const auto s = j.at("objective").get<std::string>();
      if (s == "mse_price") c.objective = Objective::MsePrice;
      else if (s == "mse_implied_vol") c.objective = Objective::MseImpliedVol;
      else fail(ErrorCode::InvalidInput, "objective must be mse_price or mse_implied_vol");
    }
    if (j.contains("budget")) c.budget = j.at("budget").get<int>();
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("tolerances")) {
      const auto& t = j.at("tolerances");
      c.ftol = t.value("ftol", c.ftol);
      c.xtol = t.value("xtol", c.xtol);
      c.pricing_rel_tol = t.value("pricing_rel_tol", c.pricing_rel_tol);
    }
    if (j.contains("initial_step")) c.initial_step = j.at("initial_step").get<double>();
    if (j.contains("contour") && !j.at("contour").is_null()) c.contour = j.at("contour").get<double>();
    if (j.contains("tilde_v_c")) c.tilde_v_c = j.at("tilde_v_c").get<double>();
    if (j.contains("alpha_margin")) c.alpha_margin = j.at("alpha_margin").get<double>();
    if (j.contains("lower_bound_flag")) c.lower_bound_flag = j.at("lower_bound_flag").get<double>();
    if (j.contains("common")) c.common = io::component_from_json(j.at("common"));
    if (j.contains("nominal")) {
      const auto& n = j.at("nominal");
      if (n.contains("initial")) c.nominal_initial = detail::params_from_json<CIRJump>(n.at("initial"), "CIRJump");
      if (n.contains("bounds")) c.nominal_bounds = detail::bounds_from_json(n.at("bounds"), c.nominal_bounds);
    }
    if (j.contains("inflation")) {
      const auto& n = j.at("inflation");
      if (n.contains("initial"))
        c.inflation_initial = detail::params_from_json<DoubleGammaOUBM>(n.at("initial"), "DoubleGammaOUBM");
      if (n.contains("bounds")) c.inflation_bounds = detail::bounds_from_json(n.at("bounds"), c.inflation_bounds);
    }
  } catch (const io::json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("calibration config: ") + e.what());
  }
  c.validate();
  return c;
}

inline io::json to_json(const CalibrationConfig& c) {
  io::json j{{"years", c.years},
             {"objective", to_string(c.objective)},
             {"budget", c.budget},
             {"seed", c.seed},
             {"tolerances", {{"ftol", c.ftol}, {"xtol", c.xtol}, {"pricing_rel_tol", c.pricing_rel_tol}}},
             {"initial_step", c.initial_step},
             {"contour", c.contour ? io::json(*c.contour) : io::json(nullptr)},
             {"tilde_v_c", c.tilde_v_c},
             {"alpha_margin", c.alpha_margin},
             {"lower_bound_flag", c.lower_bound_flag},
             {"common", io::to_json(c.common)}};
  j["nominal"] = {{"initial", io::to_json(Component(c.nominal_initial)).at("params")},
                  {"bounds", detail::bounds_to_json(c.nominal_bounds)}};
  j["inflation"] = {{"initial", io::to_json(Component(c.inflation_initial)).at("params")},
                    {"bounds", detail::bounds_to_json(c.inflation_bounds)}};
  return j;
}

}  // namespace affm::calibration
