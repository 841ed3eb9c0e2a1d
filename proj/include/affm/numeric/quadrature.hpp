#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>
#include <vector>

namespace affm::numeric {

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-15;
  double first_panel = 1.0;   // width of [0, first_panel]; later panels double
  double u_max = 2e5;         // hard cap on the upper limit
  int max_intervals = 4000;   // per panel
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  double upper = 0.0;      // where integration stopped
  bool truncated = false;  // hit u_max before the tail test passed
  long evaluations = 0;
};

namespace detail {

struct Piece {
  double a, b, value, error, l1;
  bool operator<(const Piece& o) const { return error < o.error; }
};

template <class F>
Piece gk21(F& f, double a, double b, long& evals) {
  double err = 0.0, l1 = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 21>::integrate(f, a, b, 0, 0.0, &err, &l1);
  evals += 21;
  return {a, b, v, err, l1};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod on [a, b]; refines the worst piece until the
// summed error estimate is below tol(current value).
template <class F, class Tol>
detail::Piece adaptive_gk(F& f, double a, double b, Tol tol, int max_intervals, long& evals, int n_init = 1) {
  std::priority_queue<detail::Piece> heap;
  double value = 0.0, error = 0.0, l1 = 0.0;
  for (int i = 0; i < n_init; ++i) {
    const double lo = a + (b - a) * i / n_init, hi = i + 1 == n_init ? b : a + (b - a) * (i + 1) / n_init;
    auto p = detail::gk21(f, lo, hi, evals);
    value += p.value;
    error += p.error;
    l1 += p.l1;
    heap.push(p);
  }
  int n = n_init;
  while (error > tol(value) && n < max_intervals) {
    auto worst = heap.top();
    heap.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (m <= worst.a || m >= worst.b) break;
    auto left = detail::gk21(f, worst.a, m, evals);
    auto right = detail::gk21(f, m, worst.b, evals);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  return {a, b, value, std::max(error, 0.0), l1};
}

// Integral of f over [0, inf) on doubling panels. Stops once the mass a panel
// could still carry, peak |f| times its width, is below the tolerance, or at
// u_max.
// `max_piece(a, b)` caps the width of the first pieces of panel [a, b]
// (0: no cap), which keeps GK estimates honest on oscillating tails.
template <class F, class W>
QuadratureResult integrate_half_line(F&& f, const QuadratureOptions& opt, W&& max_piece) {
  QuadratureResult out;
  double peak = 0.0;
  auto tracked = [&](double u) {
    const double v = f(u);
    peak = std::max(peak, std::abs(v));
    return v;
  };
  double a = 0.0, width = opt.first_panel;
  while (true) {
    double b = a + width;
    if (b >= opt.u_max) b = opt.u_max;
    const double total = out.value;
    auto tol = [&](double v) {
      return std::max(opt.abs_tol, opt.rel_tol * std::max(std::abs(total + v), std::abs(v)));
    };
    peak = 0.0;
    int n_init = 1;
    if (const double w = max_piece(a, b); w > 0.0)
      n_init = static_cast<int>(std::min(65536.0, std::ceil((b - a) / w)));
    auto piece = adaptive_gk(tracked, a, b, tol, std::max(opt.max_intervals, 2 * n_init), out.evaluations, n_init);
    out.value += piece.value;
    out.error += piece.error;
    out.upper = b;
    const double tail_tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(out.value));
    if (peak * (b - a) <= tail_tol && a > 0.0) break;
    if (b >= opt.u_max) {
      out.truncated = true;
      break;
    }
    a = b;
    if (a >= opt.first_panel) width = a;  // panels [s,2s], [2s,4s], ...
  }
  return out;
}

template <class F>
QuadratureResult integrate_half_line(F&& f, const QuadratureOptions& opt = {}) {
  return integrate_half_line(std::forward<F>(f), opt, [](double, double) { return 0.0; });
}

}  // namespace affm::numeric
