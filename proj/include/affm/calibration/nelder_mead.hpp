#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include "affm/core.hpp"

namespace affm::calibration {

struct NelderMeadOptions {
  int max_evals = 2000;
  double initial_step = 0.25;  // simplex edge in the search coordinates
  double ftol = 1e-15;         // spread of simplex values, absolute
  double ftol_rel = 1e-12;
  double xtol = 1e-10;         // simplex diameter
  double target = 0.0;         // stop once the best value is at or below this
  std::uint64_t seed = 1;      // orientation of restart simplices
};

struct NelderMeadResult {
  Vec x;
  double fx = std::numeric_limits<double>::infinity();
  int evals = 0;
  int restarts = 0;
  bool converged = false;  // last restart brought no improvement
  Vec history;             // best value after each evaluation
};

// Minimizes f over R^n with adaptive Nelder-Mead coefficients. Non-finite
// values count as +inf, so box limits can be imposed by the objective. After
// each collapse the simplex is rebuilt around the best point with randomly
// signed axes; the search ends when a restart gains nothing or the budget is
// spent.
template <class F>
NelderMeadResult nelder_mead(F&& f, Vec x0, const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  if (n == 0) fail(ErrorCode::InvalidInput, "nelder_mead: empty parameter vector");
  if (opt.max_evals < 1) fail(ErrorCode::InvalidInput, "nelder_mead: budget must be > 0");
  const double dn = static_cast<double>(n);
  const double a_r = 1.0, a_e = 1.0 + 2.0 / dn, a_c = 0.75 - 0.5 / dn, a_s = 1.0 - 1.0 / dn;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  NelderMeadResult out;
  out.x = x0;
  std::mt19937_64 rng(opt.seed);

  auto eval = [&](const Vec& x) {
    double v = kInf;
    if (out.evals < opt.max_evals) {
      v = f(x);
      if (!std::isfinite(v)) v = kInf;
      ++out.evals;
      if (v < out.fx) {
        out.fx = v;
        out.x = x;
      }
      out.history.push_back(out.fx);
    }
    return v;
  };
  auto spent = [&] { return out.evals >= opt.max_evals || out.fx <= opt.target; };

  std::vector<Vec> S(n + 1);
  Vec fS(n + 1);
  std::vector<std::size_t> order(n + 1);
  double prev_best = kInf;

  for (int round = 0;; ++round) {
    const Vec base = out.x;
    S[0] = base;
    fS[0] = round == 0 ? eval(base) : out.fx;
    for (std::size_t i = 0; i < n; ++i) {
      S[i + 1] = base;
      const double sign = round == 0 || rng() % 2 == 0 ? 1.0 : -1.0;
      S[i + 1][i] += sign * opt.initial_step;
      fS[i + 1] = eval(S[i + 1]);
    }
    if (round > 0) ++out.restarts;

    while (!spent()) {
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fS[a] < fS[b]; });
      const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];

      double diam = 0.0;
      for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j < n; ++j) diam = std::max(diam, std::abs(S[i][j] - S[best][j]));
      const double spread = fS[worst] - fS[best];
      if (std::isfinite(spread) && spread <= opt.ftol + opt.ftol_rel * std::abs(fS[best]) && diam <= opt.xtol)
        break;
      if (diam <= 1e-3 * opt.xtol) break;

      Vec c(n, 0.0);
      for (std::size_t i = 0; i <= n; ++i)
        if (i != worst)
          for (std::size_t j = 0; j < n; ++j) c[j] += S[i][j] / dn;
      auto along = [&](double t) {
        Vec x(n);
        for (std::size_t j = 0; j < n; ++j) x[j] = c[j] + t * (S[worst][j] - c[j]);
        return x;
      };

      const Vec xr = along(-a_r);
      const double fr = eval(xr);
      if (fr < fS[best]) {
        const Vec xe = along(-a_r * a_e);
        const double fe = eval(xe);
        if (fe < fr) {
          S[worst] = xe;
          fS[worst] = fe;
        } else {
          S[worst] = xr;
          fS[worst] = fr;
        }
        continue;
      }
      if (fr < fS[second]) {
        S[worst] = xr;
        fS[worst] = fr;
        continue;
      }
      const bool outside = fr < fS[worst];
      const Vec xc = along(outside ? -a_r * a_c : a_c);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fS[worst])) {
        S[worst] = xc;
        fS[worst] = fc;
        continue;
      }
      for (std::size_t i = 0; i <= n; ++i) {
        if (i == best) continue;
        for (std::size_t j = 0; j < n; ++j) S[i][j] = S[best][j] + a_s * (S[i][j] - S[best][j]);
        fS[i] = eval(S[i]);
      }
    }

    if (spent()) break;
    if (!(out.fx < prev_best) ||
        (std::isfinite(prev_best) && prev_best - out.fx <= opt.ftol + opt.ftol_rel * std::abs(out.fx))) {
      out.converged = true;
      break;
    }
    prev_best = out.fx;
  }
  if (out.fx <= opt.target) out.converged = true;
  return out;
}

}  // namespace affm::calibration
