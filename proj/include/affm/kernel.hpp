#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

#include "affm/numeric/special.hpp"
#include "affm/process.hpp"

namespace affm {

struct Interval {
  double lo = -numeric::kInf;
  double hi = numeric::kInf;
  bool contains(double x) const { return x > lo && x < hi; }
};

// Real parts u for which E[exp(u X_t)] is finite, per component: at the
// requested horizon and uniformly over [0, spec.horizon()].
struct MomentDomain {
  std::vector<Interval> at_t;
  std::vector<Interval> uniform;
};

struct PhiPsi {
  cplx phi;
  CVec psi;
};

struct PhiPsi1 {
  cplx phi;
  cplx psi;
};

namespace detail {

inline void check_time(double t, double horizon) {
  if (!(t >= 0.0) || t > horizon * (1.0 + 1e-12) + 1e-14) {
    std::ostringstream os;
    os << "time " << t << " outside [0, " << horizon << "]";
    fail(ErrorCode::InvalidTime, os.str());
  }
}

// 1 - exp(-x) for x >= 0
inline double one_minus_exp(double x) { return -std::expm1(-x); }

inline double cir_upper(double lambda, double eta, double t) {
  const double ome = one_minus_exp(lambda * t);
  if (ome == 0.0) return numeric::kInf;
  return lambda / (2.0 * eta * eta * ome);
}

inline Interval domain_of(const BrownianDrift&, double) { return {}; }
inline Interval domain_of(const GaussOU&, double) { return {}; }
inline Interval domain_of(const DoubleGammaOUBM& p, double) {
  return {-p.alpha_minus, p.alpha_plus};
}
inline Interval domain_of(const CIR& p, double t) {
  return {-numeric::kInf, cir_upper(p.lambda, p.eta, t)};
}
inline Interval domain_of(const CIRJump& p, double t) {
  const double E = std::exp(-p.lambda * t);
  const double c = 2.0 * p.eta * p.eta / p.lambda;
  const double jump_hi = p.alpha / (E + (1.0 - E) * p.alpha * c);
  return {-numeric::kInf, std::min({cir_upper(p.lambda, p.eta, t), jump_hi, p.alpha})};
}

inline PhiPsi1 eval(const BrownianDrift& p, double t, cplx u) {
  return {0.5 * p.sigma * p.sigma * u * u * t + p.mu * u * t, u};
}

inline PhiPsi1 eval(const GaussOU& p, double t, cplx u) {
  const double E = std::exp(-p.lambda * t);
  const double ome = one_minus_exp(p.lambda * t);
  const double ome2 = one_minus_exp(2.0 * p.lambda * t);
  return {p.sigma * p.sigma * u * u * ome2 / (4.0 * p.lambda) + p.theta * u * ome, E * u};
}

inline PhiPsi1 eval(const DoubleGammaOUBM& p, double t, cplx u) {
  const double E = std::exp(-p.lambda * t);
  const double ome = one_minus_exp(p.lambda * t);
  const double ome2 = one_minus_exp(2.0 * p.lambda * t);
  cplx phi = p.sigma * p.sigma * u * u * ome2 / (4.0 * p.lambda) + p.theta * u * ome;
  if (p.beta_plus != 0.0) phi += p.beta_plus * numeric::log1p(ome * u / (p.alpha_plus - u));
  if (p.beta_minus != 0.0) phi += p.beta_minus * numeric::log1p(-ome * u / (p.alpha_minus + u));
  return {phi, E * u};
}

inline PhiPsi1 cir_part(double lambda, double theta, double eta, double t, cplx u) {
  const double E = std::exp(-lambda * t);
  const double ome = one_minus_exp(lambda * t);
  const double c = 2.0 * eta * eta / lambda;
  const cplx z = -c * ome * u;
  return {-(theta / c) * numeric::log1p(z), E * u / (1.0 + z)};
}

inline PhiPsi1 eval(const CIR& p, double t, cplx u) {
  return cir_part(p.lambda, p.theta, p.eta, t, u);
}

inline PhiPsi1 eval(const CIRJump& p, double t, cplx u) {
  auto r = cir_part(p.lambda, p.theta, p.eta, t, u);
  if (p.beta != 0.0) {
    const double ome = one_minus_exp(p.lambda * t);
    const double c = 2.0 * p.eta * p.eta / p.lambda;
    const cplx w = u * ome / (p.alpha - u);
    r.phi += p.beta * w * numeric::log1p_over((1.0 - p.alpha * c) * w);
  }
  return r;
}

}  // namespace detail

inline Interval domain(const Component& c, double t) {
  return std::visit([t](const auto& p) { return detail::domain_of(p, t); }, c);
}

inline MomentDomain moment_domain(const AffineProcessSpec& spec, double t) {
  detail::check_time(t, spec.horizon());
  MomentDomain d;
  for (const auto& c : spec.components()) {
    d.at_t.push_back(domain(c, t));
    d.uniform.push_back(domain(c, spec.horizon()));
  }
  return d;
}

// phi_t(u), psi_t(u) for a single component. Throws DomainError when Re u is
// outside the moment domain at horizon t.
inline PhiPsi1 phi_psi(const Component& c, double t, cplx u) {
  if (u == cplx(0.0)) return {0.0, 0.0};
  const auto dom = domain(c, t);
  if (!dom.contains(u.real())) {
    std::ostringstream os;
    os << variant_name(c) << ": Re u = " << u.real() << " outside (" << dom.lo << ", " << dom.hi
       << ") at t = " << t;
    fail(ErrorCode::DomainError, os.str());
  }
  return std::visit([&](const auto& p) { return detail::eval(p, t, u); }, c);
}

inline PhiPsi phi_psi(const AffineProcessSpec& spec, double t, const CVec& u) {
  detail::check_time(t, spec.horizon());
  if (u.size() != spec.dim()) fail(ErrorCode::InvalidInput, "argument dimension mismatch");
  PhiPsi out{0.0, CVec(u.size())};
  for (std::size_t i = 0; i < u.size(); ++i) {
    auto r = phi_psi(spec.component(i), t, u[i]);
    out.phi += r.phi;
    out.psi[i] = r.psi;
  }
  return out;
}

inline PhiPsi phi_psi(const AffineProcessSpec& spec, double t, const Vec& u) {
  return phi_psi(spec, t, CVec(u.begin(), u.end()));
}

inline bool in_domain(const AffineProcessSpec& spec, double t, const CVec& u) {
  if (u.size() != spec.dim()) return false;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] != cplx(0.0) && !domain(spec.component(i), t).contains(u[i].real())) return false;
  return true;
}

inline cplx dot(const CVec& a, const Vec& x) {
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
  return s;
}

// E[exp(u . X_t) | X_0 = x]
inline cplx mgf(const AffineProcessSpec& spec, double t, const CVec& u, const Vec& x) {
  auto r = phi_psi(spec, t, u);
  return std::exp(r.phi + dot(r.psi, x));
}

inline cplx mgf(const AffineProcessSpec& spec, double t, const CVec& u) {
  return mgf(spec, t, u, spec.initial_state());
}

// E[exp(u . X_t) | X_s = x]
inline cplx mgf(const AffineProcessSpec& spec, double s, double t, const CVec& u, const Vec& x) {
  detail::check_time(s, spec.horizon());
  detail::check_time(t, spec.horizon());
  if (s > t) fail(ErrorCode::InvalidTime, "conditioning time after the evaluation time");
  return mgf(spec, t - s, u, x);
}

// Point mass of X_t (started at x0) that does not come from a density: the
// no-jump path of a pure-jump OU process, or the whole law when there is no
// noise at all.
struct Atom {
  double probability = 0.0;
  double location = 0.0;
};

inline Atom atom(const Component& c, double t) {
  if (const auto* b = std::get_if<BrownianDrift>(&c))
    return b->sigma == 0.0 ? Atom{1.0, b->x0 + b->mu * t} : Atom{};
  if (const auto* o = std::get_if<GaussOU>(&c)) {
    if (o->sigma != 0.0) return {};
    const double E = std::exp(-o->lambda * t);
    return {1.0, o->x0 * E + o->theta * (1.0 - E)};
  }
  if (const auto* d = std::get_if<DoubleGammaOUBM>(&c)) {
    if (d->sigma != 0.0) return {};
    const double E = std::exp(-d->lambda * t);
    return {std::exp(-d->lambda * (d->beta_plus + d->beta_minus) * t), d->x0 * E + d->theta * (1.0 - E)};
  }
  return {};
}

// Var(X_t | X_0 = x0) of one component, from a Richardson-extrapolated
// central difference of the log-mgf at 0.
inline double variance(const Component& c, double t) {
  if (t < 0.0) fail(ErrorCode::InvalidTime, "negative time");
  if (t == 0.0) return 0.0;
  const auto dom = domain(c, t);
  double r = std::min(-dom.lo, dom.hi);
  if (!std::isfinite(r)) r = 1.0;
  const double h = 1e-4 * std::max(1.0, std::min(r, 10.0));
  if (h >= r) fail(ErrorCode::DomainError, "difference stencil leaves the moment domain");
  const double x0 = initial_state(c);
  auto logm = [&](double u) {
    auto v = phi_psi(c, t, cplx(u));
    return v.phi.real() + v.psi.real() * x0;
  };
  auto d2 = [&](double step) { return (logm(step) - 2.0 * logm(0.0) + logm(-step)) / (step * step); };
  return (4.0 * d2(0.5 * h) - d2(h)) / 3.0;
}

inline Vec variance(const AffineProcessSpec& spec, double t) {
  detail::check_time(t, spec.horizon());
  Vec v;
  for (const auto& c : spec.components()) v.push_back(variance(c, t));
  return v;
}

}  // namespace affm
