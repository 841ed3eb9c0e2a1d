#pragma once

#include <boost/numeric/odeint.hpp>

#include <cmath>

#include "affm/kernel.hpp"

namespace affm {

struct RiccatiOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  double initial_step = 1e-3;
};

namespace detail {

// F and R of one component evaluated at a real psi.
struct Rates {
  double F, R;
};

inline void jump_guard(bool ok, const char* who) {
  if (!ok) fail(ErrorCode::OdeBlowup, std::string(who) + ": psi reached a jump singularity");
}

inline Rates rates(const BrownianDrift& p, double y) {
  return {0.5 * p.sigma * p.sigma * y * y + p.mu * y, 0.0};
}
inline Rates rates(const GaussOU& p, double y) {
  return {0.5 * p.sigma * p.sigma * y * y + p.lambda * p.theta * y, -p.lambda * y};
}
inline Rates rates(const DoubleGammaOUBM& p, double y) {
  jump_guard(y < p.alpha_plus && y > -p.alpha_minus, "DoubleGammaOUBM");
  double F = 0.5 * p.sigma * p.sigma * y * y + p.lambda * p.theta * y;
  F += p.lambda * p.beta_plus * y / (p.alpha_plus - y);
  F -= p.lambda * p.beta_minus * y / (p.alpha_minus + y);
  return {F, -p.lambda * y};
}
inline Rates rates(const CIR& p, double y) {
  return {p.lambda * p.theta * y, -p.lambda * y + 2.0 * p.eta * p.eta * y * y};
}
inline Rates rates(const CIRJump& p, double y) {
  jump_guard(y < p.alpha, "CIRJump");
  return {p.lambda * p.theta * y + p.lambda * p.beta * y / (p.alpha - y),
          -p.lambda * y + 2.0 * p.eta * p.eta * y * y};
}

}  // namespace detail

// Integrates d(phi)/dt = F(psi), d(psi)/dt = R(psi) from (0, u) up to t with a
// controlled Dormand-Prince 5(4) stepper. Used as an independent check of
// the closed forms in kernel.hpp.
inline PhiPsi riccati_integrate(const AffineProcessSpec& spec, double t, const Vec& u,
                                const RiccatiOptions& opt = {}) {
  using State = std::vector<double>;
  namespace ode = boost::numeric::odeint;
  detail::check_time(t, spec.horizon());
  const std::size_t d = spec.dim();
  if (u.size() != d) fail(ErrorCode::InvalidInput, "argument dimension mismatch");
  if (!in_domain(spec, t, CVec(u.begin(), u.end())))
    fail(ErrorCode::DomainError, "riccati_integrate: u outside the moment domain");

  State y(d + 1, 0.0);
  for (std::size_t i = 0; i < d; ++i) y[i + 1] = u[i];

  auto rhs = [&](const State& s, State& ds, double) {
    ds[0] = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double v = s[i + 1];
      if (!std::isfinite(v) || std::abs(v) > 1e12)
        fail(ErrorCode::OdeBlowup, "psi left every bounded set");
      auto r = std::visit([v](const auto& p) { return detail::rates(p, v); }, spec.component(i));
      ds[0] += r.F;
      ds[i + 1] = r.R;
    }
  };

  if (t > 0.0) {
    auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(opt.abs_tol, opt.rel_tol);
    ode::integrate_adaptive(stepper, rhs, y, 0.0, t, std::min(opt.initial_step, t));
  }
  PhiPsi out{y[0], CVec(d)};
  for (std::size_t i = 0; i < d; ++i) out.psi[i] = y[i + 1];
  return out;
}

}  // namespace affm
