#pragma once

#include <cmath>

#include "affm/numeric/roots.hpp"

namespace affm::cosh {

struct ExerciseBounds {
  double xi = 0.0;       // maximiser of g
  double g_max = 0.0;
  bool degenerate = true;  // g <= 0 everywhere: empty exercise region
  double lower = 0.0;
  double upper = 0.0;
};

namespace detail {

// Walk away from the maximiser until g turns negative, then bisect.
template <class G>
double one_sided_root(G& g, double xi, double g_xi, double dir, double limit) {
  double step = 1.0;
  double prev = xi, g_prev = g_xi;
  while (true) {
    const double x = xi + dir * step;
    const double gx = g(x);
    if (gx > g_prev + 1e-12 * (1.0 + std::abs(g_prev)))
      fail(ErrorCode::NotUnimodal, "exercise function increases away from its maximum");
    if (gx < 0.0) {
      // a second hump further out would show up as g rising again
      double far = gx;
      for (double s = 2.0 * step; s <= 4.0 * step; s *= 2.0) {
        const double gf = g(xi + dir * s);
        if (gf > far + 1e-12 * (1.0 + std::abs(far)) && gf > 0.0)
          fail(ErrorCode::NotUnimodal, "exercise function changes sign more than once on one side");
        far = std::min(far, gf);
      }
      return dir > 0 ? numeric::bisect_best(g, prev, x) : numeric::bisect_best(g, x, prev);
    }
    prev = x;
    g_prev = gx;
    step *= 2.0;
    if (step > limit) fail(ErrorCode::NotUnimodal, "exercise region is unbounded");
  }
}

}  // namespace detail

// Roots lower < upper of a unimodal g with g <= 0 far out on both sides.
template <class G>
ExerciseBounds find_exercise_bounds(G&& g, double start = 0.0, double limit = 1e6) {
  double a, b;
  if (!numeric::bracket_max(g, start, a, b, limit))
    fail(ErrorCode::NotUnimodal, "no maximum of the exercise function found");
  auto top = numeric::golden_max(g, a, b, 1e-13);
  ExerciseBounds out;
  out.xi = top.x;
  out.g_max = top.fx;
  if (!(top.fx > 0.0)) return out;
  out.degenerate = false;
  out.lower = detail::one_sided_root(g, top.x, top.fx, -1.0, limit);
  out.upper = detail::one_sided_root(g, top.x, top.fx, +1.0, limit);
  return out;
}

}  // namespace affm::cosh
