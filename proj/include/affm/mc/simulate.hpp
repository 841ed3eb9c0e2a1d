#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <thread>
#include <vector>

#include "affm/mc/rng.hpp"
#include "affm/process.hpp"

namespace affm::mc {

enum class CirScheme {
  FullTruncationEuler,
  Exact,  // noncentral chi-square transitions, jumps inserted at their exact times
};

struct SimConfig {
  long n_paths = 100000;
  int steps_per_year = 64;  // Euler substeps for CIR-type components
  std::uint64_t seed = 1;
  CirScheme cir_scheme = CirScheme::FullTruncationEuler;
  int threads = 0;  // 0: RATES_THREADS or the hardware count
};

struct McResult {
  double estimate = 0.0;
  double std_error = 0.0;
  long n = 0;
};

inline int thread_count(int requested) {
  if (requested > 0) return requested;
  if (const char* s = std::getenv("RATES_THREADS")) {
    const int n = std::atoi(s);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// One path: state at each requested time, row-major [time][component].
class PathView {
 public:
  PathView(const double* data, std::size_t dim) : data_(data), dim_(dim) {}
  double operator()(std::size_t time_index, std::size_t component) const {
    return data_[time_index * dim_ + component];
  }
  Vec state(std::size_t time_index) const {
    return Vec(data_ + time_index * dim_, data_ + (time_index + 1) * dim_);
  }
  std::size_t dim() const { return dim_; }

 private:
  const double* data_;
  std::size_t dim_;
};

namespace detail {

struct Stepper {
  Philox& rng;
  const SimConfig& cfg;
  std::normal_distribution<double> normal{0.0, 1.0};

  double gauss() { return normal(rng); }

  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    return std::poisson_distribution<int>(mean)(rng);
  }

  // sum of exp(-lambda (h - tau)) J over jumps on [0, h]
  double decayed_jumps(double rate, double mean_size, double lambda, double h) {
    double s = 0.0;
    const int n = poisson(rate * h);
    for (int i = 0; i < n; ++i) {
      const double tau = h * rng.uniform();
      s += -std::log(rng.uniform()) * mean_size * std::exp(-lambda * (h - tau));
    }
    return s;
  }

  double step(const BrownianDrift& p, double x, double h) { return x + p.mu * h + p.sigma * std::sqrt(h) * gauss(); }

  double ou_part(double lambda, double theta, double sigma, double x, double h) {
    const double E = std::exp(-lambda * h);
    double y = theta + (x - theta) * E;
    if (sigma != 0.0) y += sigma * std::sqrt(-std::expm1(-2.0 * lambda * h) / (2.0 * lambda)) * gauss();
    return y;
  }

  double step(const GaussOU& p, double x, double h) { return ou_part(p.lambda, p.theta, p.sigma, x, h); }

  double step(const DoubleGammaOUBM& p, double x, double h) {
    double y = ou_part(p.lambda, p.theta, p.sigma, x, h);
    if (p.beta_plus > 0.0) y += decayed_jumps(p.lambda * p.beta_plus, 1.0 / p.alpha_plus, p.lambda, h);
    if (p.beta_minus > 0.0) y -= decayed_jumps(p.lambda * p.beta_minus, 1.0 / p.alpha_minus, p.lambda, h);
    return y;
  }

  // dX = -lambda (X - theta) dt + 2 eta sqrt(X) dW over h, exact
  double cir_exact(double lambda, double theta, double eta, double x, double h) {
    if (h <= 0.0) return x;
    const double c = eta * eta * -std::expm1(-lambda * h) / lambda;
    const double dof = lambda * theta / (eta * eta);
    const double ncp = x * std::exp(-lambda * h) / c;
    const int n = poisson(0.5 * ncp);
    const double shape = 0.5 * dof + n;
    if (shape <= 0.0) return 0.0;
    return c * 2.0 * std::gamma_distribution<double>(shape, 1.0)(rng);
  }

  double cir_euler(double lambda, double theta, double eta, double x, double h) {
    const double xp = std::max(x, 0.0);
    return x + lambda * (theta - xp) * h + 2.0 * eta * std::sqrt(xp * h) * gauss();
  }

  // Jumps of rate `rate`, Exp(mean) sizes, added at their exact times.
  double cir_with_jumps(double lambda, double theta, double eta, double rate, double mean_size, double x,
                        double h) {
    if (cfg.cir_scheme == CirScheme::Exact) {
      double t = 0.0;
      while (true) {
        const double gap = rate > 0.0 ? -std::log(rng.uniform()) / rate : h;
        if (t + gap >= h) return cir_exact(lambda, theta, eta, x, h - t);
        x = cir_exact(lambda, theta, eta, x, gap) - std::log(rng.uniform()) * mean_size;
        t += gap;
      }
    }
    const int n = std::max(1, static_cast<int>(std::ceil(h * cfg.steps_per_year - 1e-9)));
    const double dt = h / n;
    for (int i = 0; i < n; ++i) {
      x = cir_euler(lambda, theta, eta, x, dt);
      if (rate > 0.0)
        for (int j = poisson(rate * dt); j > 0; --j) x += -std::log(rng.uniform()) * mean_size;
    }
    return std::max(x, 0.0);
  }

  double step(const CIR& p, double x, double h) { return cir_with_jumps(p.lambda, p.theta, p.eta, 0.0, 1.0, x, h); }

  double step(const CIRJump& p, double x, double h) {
    return cir_with_jumps(p.lambda, p.theta, p.eta, p.lambda * p.beta, 1.0 / p.alpha, x, h);
  }
};

inline void check_times(const Vec& times, double horizon) {
  double prev = 0.0;
  for (double t : times) {
    if (t < prev || t > horizon + 1e-12) fail(ErrorCode::InvalidTime, "simulation times must be sorted in [0, T]");
    prev = t;
  }
}

// Writes one path into out[time * dim + component].
inline void simulate_path(const AffineProcessSpec& spec, const Vec& times, const SimConfig& cfg, long path,
                          double* out) {
  Philox rng(cfg.seed, static_cast<std::uint64_t>(path));
  Stepper st{rng, cfg};
  const std::size_t d = spec.dim();
  for (std::size_t i = 0; i < d; ++i) {
    const Component& c = spec.component(i);
    double x = initial_state(c), t = 0.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
      const double h = times[j] - t;
      if (h > 0.0) x = std::visit([&](const auto& p) { return st.step(p, x, h); }, c);
      t = times[j];
      out[j * d + i] = x;
    }
  }
}

// Pairwise sum in a fixed order.
inline double pairwise_sum(const double* a, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(a, h) + pairwise_sum(a + h, n - h);
}

template <class F>
void parallel_paths(long n, int threads, F&& body) {
  threads = static_cast<int>(std::min<long>(threads, std::max(1L, n)));
  if (threads <= 1) {
    body(0L, n);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (n + threads - 1) / threads;
  for (int w = 0; w < threads; ++w) {
    const long a = w * chunk, b = std::min(n, a + chunk);
    if (a < b) pool.emplace_back([&, a, b] { body(a, b); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

// Paths of every component at `times` (sorted, within [0, T]); result is
// [path][time * dim + component].
inline std::vector<Vec> simulate(const AffineProcessSpec& spec, const Vec& times, const SimConfig& cfg) {
  if (cfg.n_paths < 1 || cfg.steps_per_year < 1) fail(ErrorCode::InvalidInput, "need n_paths >= 1 and steps_per_year >= 1");
  detail::check_times(times, spec.horizon());
  std::vector<Vec> out(cfg.n_paths, Vec(times.size() * spec.dim()));
  detail::parallel_paths(cfg.n_paths, thread_count(cfg.threads), [&](long a, long b) {
    for (long p = a; p < b; ++p) detail::simulate_path(spec, times, cfg, p, out[p].data());
  });
  return out;
}

// Sample means of several payoffs evaluated on the same paths.
inline std::vector<McResult> mc_estimate(const AffineProcessSpec& spec, const Vec& times,
                                         const std::function<void(const PathView&, double*)>& payoffs,
                                         std::size_t n_payoffs, const SimConfig& cfg) {
  if (cfg.n_paths < 1 || cfg.steps_per_year < 1) fail(ErrorCode::InvalidInput, "need n_paths >= 1 and steps_per_year >= 1");
  detail::check_times(times, spec.horizon());
  const long n = cfg.n_paths;
  const std::size_t d = spec.dim();
  std::vector<double> values(n * n_payoffs);
  detail::parallel_paths(n, thread_count(cfg.threads), [&](long a, long b) {
    Vec buf(times.size() * d);
    for (long p = a; p < b; ++p) {
      detail::simulate_path(spec, times, cfg, p, buf.data());
      payoffs(PathView(buf.data(), d), &values[p * n_payoffs]);
    }
  });
  std::vector<McResult> out;
  std::vector<double> col(n);
  for (std::size_t j = 0; j < n_payoffs; ++j) {
    for (long p = 0; p < n; ++p) col[p] = values[p * n_payoffs + j];
    const double mean = detail::pairwise_sum(col.data(), n) / n;
    for (long p = 0; p < n; ++p) col[p] = (col[p] - mean) * (col[p] - mean);
    const double var = n > 1 ? detail::pairwise_sum(col.data(), n) / (n - 1) : 0.0;
    out.push_back({mean, std::sqrt(var / n), n});
  }
  return out;
}

inline McResult mc_price(const AffineProcessSpec& spec, const Vec& times,
                         const std::function<double(const PathView&)>& payoff, const SimConfig& cfg) {
  return mc_estimate(spec, times, [&](const PathView& v, double* out) { out[0] = payoff(v); }, 1, cfg)[0];
}

}  // namespace affm::mc
