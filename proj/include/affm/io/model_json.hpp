#pragma once

#include <filesystem>
#include <fstream>
#include <variant>

#include "affm/cosh/model.hpp"
#include "affm/inflation/model.hpp"
#include "affm/io/spec_json.hpp"

namespace affm::io {

inline json to_json(const inflation::ParamLayout& L) {
  return {{"M", L.M}, {"tilde_u", L.tilde_u}, {"bar_u", L.bar_u}, {"tilde_v", L.tilde_v}, {"bar_v", L.bar_v}};
}

inline inflation::ParamLayout layout_from_json(const json& j) {
  inflation::ParamLayout L;
  L.M = j.at("M").get<int>();
  L.tilde_u = j.at("tilde_u").get<Vec>();
  L.bar_u = j.at("bar_u").get<Vec>();
  L.tilde_v = j.at("tilde_v").get<Vec>();
  L.bar_v = j.at("bar_v").get<Vec>();
  return L;
}

inline json to_json(const inflation::InflationModel& m) {
  return {{"model", "inflation"},
          {"specs", to_json(m.spec())},
          {"layout", to_json(m.layout())},
          {"grid", m.grid().maturities()},
          {"P0T", m.P0T()}};
}

inline json to_json(const cosh::CoshLiborModel& m) {
  return {{"model", "cosh"},
          {"specs", to_json(m.spec())},
          {"u", m.u_seq()},
          {"grid", m.grid().maturities()},
          {"P0T", m.P0T()}};
}

using AnyModel = std::variant<cosh::CoshLiborModel, inflation::InflationModel>;

inline AnyModel model_from_json(const json& j) {
  try {
    const std::string kind = j.at("model").get<std::string>();
    auto spec = spec_from_json(j.at("specs"));
    const double P0T = j.at("P0T").get<double>();
    const TenorGrid grid(j.at("grid").get<Vec>());
    if (kind == "cosh") return cosh::CoshLiborModel(std::move(spec), grid, j.at("u").get<Vec>(), P0T);
    if (kind == "inflation") {
      inflation::InflationModel m(std::move(spec), layout_from_json(j.at("layout")), P0T);
      if (m.grid().maturities() != grid.maturities()) fail(ErrorCode::InvalidInput, "grid does not match the layout");
      return m;
    }
    fail(ErrorCode::InvalidInput, "unknown model kind '" + kind + "'");
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidInput, std::string("malformed model document: ") + e.what());
  }
}

inline json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::Io, path.string() + ": " + e.what());
  }
}

inline void write_json(const json& j, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

inline AnyModel load_model(const std::filesystem::path& path) { return model_from_json(read_json(path)); }

template <class Model>
void save_model(const Model& m, const std::filesystem::path& path) {
  write_json(to_json(m), path);
}

}  // namespace affm::io
