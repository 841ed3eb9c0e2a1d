#pragma once

#include <cmath>
#include <string>

#include "affm/core.hpp"

namespace affm {

// 0 = T_0 < T_1 < ... < T_N. Index 0 is the valuation date.
class TenorGrid {
 public:
  TenorGrid() = default;

  explicit TenorGrid(const Vec& maturities) : T_{0.0} {
    if (maturities.empty()) fail(ErrorCode::InvalidInput, "tenor grid is empty");
    for (double t : maturities) {
      if (!(t > T_.back())) fail(ErrorCode::InvalidInput, "tenor dates must be strictly increasing and > 0");
      T_.push_back(t);
    }
  }

  static TenorGrid regular(double step, int n) {
    Vec m;
    for (int k = 1; k <= n; ++k) m.push_back(step * k);
    return TenorGrid(m);
  }

  int size() const { return static_cast<int>(T_.size()) - 1; }
  double T(int k) const { return T_.at(k); }
  double last() const { return T_.back(); }
  double delta(int k) const {
    if (k < 1 || k > size()) fail(ErrorCode::InvalidInput, "accrual index out of range");
    return T_[k] - T_[k - 1];
  }
  Vec maturities() const { return Vec(T_.begin() + 1, T_.end()); }

  // index k with T_k == t, or -1
  int find(double t, double tol = 1e-9) const {
    for (int k = 0; k <= size(); ++k)
      if (std::abs(T_[k] - t) <= tol) return k;
    return -1;
  }

 private:
  Vec T_{0.0};
};

}  // namespace affm
