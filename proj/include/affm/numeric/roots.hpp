#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "affm/core.hpp"

namespace affm::numeric {

// Bisection on a bracket [lo, hi] with f(lo) and f(hi) of opposite sign.
// Runs until the bracket collapses to adjacent doubles, so the result is
// as accurate as the function evaluation allows.
template <class F>
double bisect(F&& f, double lo, double hi, double flo, int max_iter = 300) {
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Same, but returns whichever endpoint has the smaller residual.
template <class F>
double bisect_best(F&& f, double lo, double hi, int max_iter = 300) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  for (int i = 0; i < max_iter; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return std::abs(flo) <= std::abs(fhi) ? lo : hi;
}

struct Extremum {
  double x;
  double fx;
};

// Golden-section search for the maximum of a unimodal f on [a, b].
template <class F>
Extremum golden_max(F&& f, double a, double b, double xtol = 1e-12) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  while (std::abs(b - a) > xtol * (1.0 + std::abs(c) + std::abs(d))) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? Extremum{c, fc} : Extremum{d, fd};
}

template <class F>
Extremum golden_min(F&& f, double a, double b, double xtol = 1e-12) {
  auto e = golden_max([&](double x) { return -f(x); }, a, b, xtol);
  return {e.x, -e.fx};
}

// Find a triple a < m < b with f(m) >= f(a), f(m) >= f(b) by walking out
// from x0 with doubling steps. Returns false if none found within |x| < limit.
template <class F>
bool bracket_max(F&& f, double x0, double& a, double& b, double limit = 1e6) {
  double step = 1.0;
  double m = x0, fm = f(m);
  double r = m + step, fr = f(r);
  double l = m - step, fl = f(l);
  // walk toward increasing values
  while (!(fm >= fl && fm >= fr)) {
    if (fr > fm) {
      l = m; fl = fm;
      m = r; fm = fr;
      step *= 2.0;
      r = m + step; fr = f(r);
    } else {
      r = m; fr = fm;
      m = l; fm = fl;
      step *= 2.0;
      l = m - step; fl = f(l);
    }
    if (std::abs(m) > limit) return false;
  }
  a = l;
  b = r;
  return true;
}

}  // namespace affm::numeric
