#pragma once

#include <json.hpp>

#include <map>
#include <string>

#include "affm/process.hpp"

namespace affm::io {

using json = nlohmann::json;

namespace detail {

inline double param(const json& params, const char* name, const char* variant) {
  if (!params.contains(name) || !params.at(name).is_number())
    fail(ErrorCode::InvalidSpec, std::string(variant) + ": missing numeric parameter '" + name + "'");
  return params.at(name).get<double>();
}

inline json params_of(const BrownianDrift& p) {
  return {{"sigma", p.sigma}, {"mu", p.mu}, {"x0", p.x0}};
}
inline json params_of(const GaussOU& p) {
  return {{"lambda", p.lambda}, {"theta", p.theta}, {"sigma", p.sigma}, {"x0", p.x0}};
}
inline json params_of(const DoubleGammaOUBM& p) {
  return {{"lambda", p.lambda},         {"theta", p.theta},          {"sigma", p.sigma},
          {"alpha_plus", p.alpha_plus}, {"alpha_minus", p.alpha_minus}, {"beta_plus", p.beta_plus},
          {"beta_minus", p.beta_minus}, {"x0", p.x0}};
}
inline json params_of(const CIR& p) {
  return {{"lambda", p.lambda}, {"theta", p.theta}, {"eta", p.eta}, {"x0", p.x0}};
}
inline json params_of(const CIRJump& p) {
  return {{"lambda", p.lambda}, {"theta", p.theta}, {"eta", p.eta},
          {"alpha", p.alpha},   {"beta", p.beta},   {"x0", p.x0}};
}

}  // namespace detail

inline json to_json(const Component& c) {
  return {{"variant", variant_name(c)},
          {"params", std::visit([](const auto& p) { return detail::params_of(p); }, c)}};
}

inline Component component_from_json(const json& j) {
  const std::string v = j.at("variant").get<std::string>();
  const json& p = j.at("params");
  auto g = [&](const char* n) { return detail::param(p, n, v.c_str()); };
  if (v == "BrownianDrift") return BrownianDrift{g("sigma"), g("mu"), g("x0")};
  if (v == "GaussOU") return GaussOU{g("lambda"), g("theta"), g("sigma"), g("x0")};
  if (v == "DoubleGammaOUBM")
    return DoubleGammaOUBM{g("lambda"),     g("theta"),     g("sigma"),      g("alpha_plus"),
                           g("alpha_minus"), g("beta_plus"), g("beta_minus"), g("x0")};
  if (v == "CIR") return CIR{g("lambda"), g("theta"), g("eta"), g("x0")};
  if (v == "CIRJump") return CIRJump{g("lambda"), g("theta"), g("eta"), g("alpha"), g("beta"), g("x0")};
  fail(ErrorCode::InvalidSpec, "unknown variant '" + v + "'");
}

inline json to_json(const AffineProcessSpec& s) {
  if (!s.is_product()) {
    json j = to_json(s.component(0));
    j["horizon"] = s.horizon();
    return j;
  }
  json comps = json::array();
  for (const auto& c : s.components()) comps.push_back(to_json(c));
  return {{"variant", "Product"}, {"components", comps}, {"horizon", s.horizon()}};
}

inline void collect_components(const json& j, std::vector<Component>& out) {
  if (j.at("variant").get<std::string>() == "Product") {
    for (const auto& c : j.at("components")) collect_components(c, out);
  } else {
    out.push_back(component_from_json(j));
  }
}

inline AffineProcessSpec spec_from_json(const json& j) {
  try {
    const double horizon = j.at("horizon").get<double>();
    std::vector<Component> cs;
    collect_components(j, cs);
    const bool product = j.at("variant").get<std::string>() == "Product";
    return AffineProcessSpec(std::move(cs), horizon, product);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidSpec, std::string("malformed process spec: ") + e.what());
  }
}

}  // namespace affm::io
