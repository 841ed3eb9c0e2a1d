#pragma once

#include <cmath>
#include <string>
#include <variant>
#include <vector>

#include "affm/core.hpp"

namespace affm {

// dX = mu dt + sigma dW
struct BrownianDrift {
  double sigma = 1.0, mu = 0.0, x0 = 0.0;
};

// dX = -lambda (X - theta) dt + sigma dW
struct GaussOU {
  double lambda = 1.0, theta = 0.0, sigma = 1.0, x0 = 0.0;
};

// OU driven by Brownian motion plus a two-sided compound Poisson process:
// upward jumps Exp(mean 1/alpha_plus) at rate lambda*beta_plus, downward jumps
// Exp(mean 1/alpha_minus) at rate lambda*beta_minus.
struct DoubleGammaOUBM {
  double lambda = 1.0, theta = 0.0, sigma = 0.0;
  double alpha_plus = 1.0, alpha_minus = 1.0, beta_plus = 0.0, beta_minus = 0.0;
  double x0 = 0.0;
};

// dX = -lambda (X - theta) dt + 2 eta sqrt(X) dW
struct CIR {
  double lambda = 1.0, theta = 0.0, eta = 1.0, x0 = 0.0;
};

// CIR plus upward jumps Exp(mean 1/alpha) at rate lambda*beta
struct CIRJump {
  double lambda = 1.0, theta = 0.0, eta = 1.0, alpha = 1.0, beta = 0.0, x0 = 0.0;
};

using Component = std::variant<BrownianDrift, GaussOU, DoubleGammaOUBM, CIR, CIRJump>;

inline bool is_nonnegative(const Component& c) {
  return std::holds_alternative<CIR>(c) || std::holds_alternative<CIRJump>(c);
}

inline const char* variant_name(const Component& c) {
  static const char* names[] = {"BrownianDrift", "GaussOU", "DoubleGammaOUBM", "CIR", "CIRJump"};
  return names[c.index()];
}

inline double initial_state(const Component& c) {
  return std::visit([](const auto& p) { return p.x0; }, c);
}

inline void set_initial_state(Component& c, double x0) {
  std::visit([x0](auto& p) { p.x0 = x0; }, c);
}

namespace detail {

inline void require(bool ok, const std::string& msg) {
  if (!ok) fail(ErrorCode::InvalidSpec, msg);
}

inline bool finite_all(std::initializer_list<double> xs) {
  for (double x : xs)
    if (!std::isfinite(x)) return false;
  return true;
}

inline void validate(const BrownianDrift& p) {
  require(finite_all({p.sigma, p.mu, p.x0}), "BrownianDrift: non-finite parameter");
  require(p.sigma >= 0.0, "BrownianDrift: sigma must be >= 0");
}
inline void validate(const GaussOU& p) {
  require(finite_all({p.lambda, p.theta, p.sigma, p.x0}), "GaussOU: non-finite parameter");
  require(p.lambda > 0.0, "GaussOU: lambda must be > 0");
  require(p.sigma >= 0.0, "GaussOU: sigma must be >= 0");
}
inline void validate(const DoubleGammaOUBM& p) {
  require(finite_all({p.lambda, p.theta, p.sigma, p.alpha_plus, p.alpha_minus, p.beta_plus,
                      p.beta_minus, p.x0}),
          "DoubleGammaOUBM: non-finite parameter");
  require(p.lambda > 0.0, "DoubleGammaOUBM: lambda must be > 0");
  require(p.sigma >= 0.0, "DoubleGammaOUBM: sigma must be >= 0");
  require(p.alpha_plus > 0.0 && p.alpha_minus > 0.0, "DoubleGammaOUBM: alphas must be > 0");
  require(p.beta_plus >= 0.0 && p.beta_minus >= 0.0, "DoubleGammaOUBM: betas must be >= 0");
}
inline void validate(const CIR& p) {
  require(finite_all({p.lambda, p.theta, p.eta, p.x0}), "CIR: non-finite parameter");
  require(p.lambda > 0.0, "CIR: lambda must be > 0");
  require(p.theta >= 0.0, "CIR: theta must be >= 0");
  require(p.eta > 0.0, "CIR: eta must be > 0");
  require(p.x0 >= 0.0, "CIR: x0 must be >= 0");
}
inline void validate(const CIRJump& p) {
  require(finite_all({p.lambda, p.theta, p.eta, p.alpha, p.beta, p.x0}),
          "CIRJump: non-finite parameter");
  require(p.lambda > 0.0, "CIRJump: lambda must be > 0");
  require(p.theta >= 0.0, "CIRJump: theta must be >= 0");
  require(p.eta > 0.0, "CIRJump: eta must be > 0");
  require(p.alpha > 0.0, "CIRJump: alpha must be > 0");
  require(p.beta >= 0.0, "CIRJump: beta must be >= 0");
  require(p.x0 >= 0.0, "CIRJump: x0 must be >= 0");
}

}  // namespace detail

// A (possibly multi-dimensional) affine process on [0, horizon]. A single
// component is a one-dimensional process; several components form a product
// of independent processes, nonnegative ones first.
class AffineProcessSpec {
 public:
  AffineProcessSpec() = default;

  AffineProcessSpec(Component c, double horizon)
      : components_{std::move(c)}, horizon_(horizon), product_(false) {
    validate();
  }

  AffineProcessSpec(std::vector<Component> cs, double horizon, bool product = true)
      : components_(std::move(cs)), horizon_(horizon), product_(product || components_.size() != 1) {
    validate();
  }

  // Concatenate independent processes in order.
  static AffineProcessSpec product(const std::vector<AffineProcessSpec>& parts, double horizon) {
    std::vector<Component> cs;
    for (const auto& p : parts)
      cs.insert(cs.end(), p.components().begin(), p.components().end());
    return AffineProcessSpec(std::move(cs), horizon, true);
  }

  std::size_t dim() const { return components_.size(); }
  double horizon() const { return horizon_; }
  bool is_product() const { return product_; }
  const std::vector<Component>& components() const { return components_; }
  const Component& component(std::size_t i) const { return components_.at(i); }

  Vec initial_state() const {
    Vec x(dim());
    for (std::size_t i = 0; i < dim(); ++i) x[i] = affm::initial_state(components_[i]);
    return x;
  }

  AffineProcessSpec with_component(std::size_t i, Component c) const {
    auto cs = components_;
    cs.at(i) = std::move(c);
    return AffineProcessSpec(std::move(cs), horizon_, product_);
  }

  AffineProcessSpec with_horizon(double T) const {
    return AffineProcessSpec(components_, T, product_);
  }

 private:
  void validate() const {
    detail::require(!components_.empty(), "process needs at least one component");
    detail::require(std::isfinite(horizon_) && horizon_ > 0.0, "horizon must be > 0");
    bool seen_real = false;
    for (const auto& c : components_) {
      std::visit([](const auto& p) { detail::validate(p); }, c);
      if (is_nonnegative(c))
        detail::require(!seen_real, "nonnegative components must precede real-valued ones");
      else
        seen_real = true;
    }
  }

  std::vector<Component> components_;
  double horizon_ = 1.0;
  bool product_ = false;
};

}  // namespace affm
