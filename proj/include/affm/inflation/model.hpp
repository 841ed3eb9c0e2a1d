#pragma once

#include <cmath>
#include <sstream>

#include "affm/inflation/layout.hpp"
#include "affm/kernel.hpp"
#include "affm/tenor.hpp"

namespace affm::inflation {

// A(t, v, u) + B(t, v, u) . x = log M_t^v(x) - log M_t^u(x)
struct Loading {
  double A = 0.0;
  Vec B;
};

// Affine inflation market model on the semiannual grid T_k = k/2, k = 1..2M:
//   P(t,T_k)/P(t,T)     = M_t^{u_k},
//   P_ILB(t,T_k)/P(t,T) = M_t^{v_k},
// with M_t^w = E[exp(w . X_T) | F_t] under the terminal measure.
class InflationModel {
 public:
  InflationModel() = default;

  InflationModel(AffineProcessSpec spec, ParamLayout layout, double P0T)
      : spec_(std::move(spec)), layout_(std::move(layout)), P0T_(P0T) {
    const int M = layout_.M;
    if (static_cast<int>(spec_.dim()) != 2 * M + 1)
      fail(ErrorCode::InvalidSpec, "inflation model needs 2M+1 process components");
    if (std::abs(spec_.horizon() - M) > 1e-12) fail(ErrorCode::InvalidInput, "process horizon must equal M years");
    if (!(P0T_ > 0.0)) fail(ErrorCode::InvalidInput, "P(0,T) must be > 0");
    for (int i = 1; i <= M; ++i)
      if (!is_nonnegative(spec_.component(i)) || !is_nonnegative(spec_.component(0)))
        fail(ErrorCode::InvalidSpec, "common and nominal factors must be nonnegative processes");
    grid_ = TenorGrid::regular(0.5, 2 * M);
    vec_ = assemble_vectors(layout_);
    const int N = size();
    psi_u_.assign(N + 1, Vec(dim(), 0.0));
    psi_v_.assign(N + 1, Vec(dim(), 0.0));
    index_load_.assign(N + 1, Loading{0.0, Vec(dim(), 0.0)});
    for (int k = 1; k <= N; ++k) {
      const double tau = horizon() - grid_.T(k);
      for (std::size_t i = 0; i < dim(); ++i) {
        check_exponent(i, vec_.u[k][i], k, "u");
        check_exponent(i, vec_.v[k][i], k, "v");
        auto a = phi_psi(spec_.component(i), tau, cplx(vec_.u[k][i]));
        auto b = phi_psi(spec_.component(i), tau, cplx(vec_.v[k][i]));
        psi_u_[k][i] = a.psi.real();
        psi_v_[k][i] = b.psi.real();
        index_load_[k].A += b.phi.real() - a.phi.real();
        index_load_[k].B[i] = b.psi.real() - a.psi.real();
      }
    }
  }

  const AffineProcessSpec& spec() const { return spec_; }
  const ParamLayout& layout() const { return layout_; }
  const TenorGrid& grid() const { return grid_; }
  int years() const { return layout_.M; }
  int size() const { return layout_.size(); }
  std::size_t dim() const { return spec_.dim(); }
  double horizon() const { return static_cast<double>(layout_.M); }
  double P0T() const { return P0T_; }
  Vec x0() const { return spec_.initial_state(); }
  double T(int k) const { return grid_.T(k); }

  const Vec& u(int k) const { return vec_.u.at(k); }
  const Vec& v(int k) const { return vec_.v.at(k); }
  // psi_{T-T_k}(u_k), psi_{T-T_k}(v_k)
  const Vec& psi_u(int k) const { return psi_u_.at(k); }
  const Vec& psi_v(int k) const { return psi_v_.at(k); }
  // log I(T_k) = A_I^k + B_I^k . X_{T_k}; zero for k = 0 since I(0) = 1
  const Loading& index_loading(int k) const { return index_load_.at(k); }

  // log M_t^w(x)
  double log_martingale(double t, const Vec& w, const Vec& x) const {
    affm::detail::check_time(t, horizon());
    double s = 0.0;
    for (std::size_t i = 0; i < dim(); ++i) {
      if (w[i] == 0.0) continue;
      auto r = phi_psi(spec_.component(i), horizon() - t, cplx(w[i]));
      s += r.phi.real() + r.psi.real() * x[i];
    }
    return s;
  }

  Loading loading(double t, const Vec& v, const Vec& u) const {
    affm::detail::check_time(t, horizon());
    Loading out{0.0, Vec(dim(), 0.0)};
    for (std::size_t i = 0; i < dim(); ++i) {
      if (v[i] == u[i]) continue;
      auto a = phi_psi(spec_.component(i), horizon() - t, cplx(v[i]));
      auto b = phi_psi(spec_.component(i), horizon() - t, cplx(u[i]));
      out.A += a.phi.real() - b.phi.real();
      out.B[i] = a.psi.real() - b.psi.real();
    }
    return out;
  }

  // P(0, T_k); k = 0 gives 1
  double discount(int k) const { return k == 0 ? 1.0 : P0T_ * std::exp(log_martingale(0.0, u(k), x0())); }
  // P_ILB(0, T_k)
  double ilb_price(int k) const { return k == 0 ? 1.0 : P0T_ * std::exp(log_martingale(0.0, v(k), x0())); }

  // forward CPI I(t, T_k) in state x
  double forward_cpi(double t, int k, const Vec& x) const {
    if (k < 1 || k > size()) fail(ErrorCode::InvalidInput, "forward CPI index out of range");
    if (t > T(k) + 1e-12) fail(ErrorCode::InvalidTime, "forward CPI observed after its maturity");
    auto l = loading(t, v(k), u(k));
    double s = l.A;
    for (std::size_t i = 0; i < dim(); ++i) s += l.B[i] * x[i];
    return std::exp(s);
  }
  double forward_cpi(int k) const { return forward_cpi(0.0, k, x0()); }

  // Simple nominal forward rate over [T_{k-1}, T_k]. F^1 is fixed at time 0.
  double forward_rate(int k, double t, const Vec& x) const {
    if (k < 1 || k > size()) fail(ErrorCode::InvalidInput, "forward index out of range");
    if (k == 1) {
      if (t != 0.0) fail(ErrorCode::InvalidTime, "first forward is fixed at time 0");
      return (1.0 / discount(1) - 1.0) / grid_.delta(1);
    }
    return std::expm1(log_martingale(t, u(k - 1), x) - log_martingale(t, u(k), x)) / grid_.delta(k);
  }
  double forward_rate(int k) const { return forward_rate(k, 0.0, x0()); }

  InflationModel with_component(std::size_t i, const Component& c) const {
    return InflationModel(spec_.with_component(i, c), layout_, P0T_);
  }
  InflationModel with_layout(ParamLayout L) const { return InflationModel(spec_, std::move(L), P0T_); }

 private:
  // exponents must lie in the moment domain uniformly up to the horizon
  void check_exponent(std::size_t i, double w, int k, const char* which) const {
    const auto dom = domain(spec_.component(i), horizon());
    if (w != 0.0 && !dom.contains(w)) {
      std::ostringstream os;
      os << "exponent " << which << "_" << k << " component " << i << " = " << w << " outside ("
         << dom.lo << ", " << dom.hi << ")";
      fail(ErrorCode::DomainError, os.str());
    }
  }

  AffineProcessSpec spec_;
  ParamLayout layout_;
  double P0T_ = 1.0;
  TenorGrid grid_;
  ExponentVectors vec_;
  std::vector<Vec> psi_u_, psi_v_;
  std::vector<Loading> index_load_;
};

}  // namespace affm::inflation
