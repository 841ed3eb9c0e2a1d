#pragma once

#include <sstream>

#include "affm/core.hpp"

namespace affm::inflation {

// Exponent vectors of the inflation model over 2M+1 independent components
// ordered as: common factor, M nominal factors, M inflation factors. The
// tenor grid is semiannual with N = 2M dates; index k below runs over 1..N.
struct ParamLayout {
  int M = 0;
  Vec tilde_u;  // common-factor loading of u_k
  Vec bar_u;    // yearly nominal-factor loading of u_k
  Vec tilde_v;  // common-factor loading of v_k
  Vec bar_v;    // yearly inflation-factor loading of v_k

  int size() const { return 2 * M; }
  int dim() const { return 2 * M + 1; }

  static ParamLayout zeros(int M) {
    return {M, Vec(2 * M, 0.0), Vec(2 * M, 0.0), Vec(2 * M, 0.0), Vec(2 * M, 0.0)};
  }
};

struct ExponentVectors {
  std::vector<Vec> u;  // u[k] for k = 0..N; u[0] = v[0] = 0 stands for the index at T_0
  std::vector<Vec> v;
};

// Year (1-based) whose factors carry the tenor index k.
inline int year_of(int k) { return (k + 1) / 2; }

inline void check_layout(const ParamLayout& L) {
  const int N = L.size();
  if (L.M < 1) fail(ErrorCode::LayoutError, "layout needs at least one year");
  for (const Vec* p : {&L.tilde_u, &L.bar_u, &L.tilde_v, &L.bar_v})
    if (static_cast<int>(p->size()) != N) fail(ErrorCode::LayoutError, "layout vectors must have 2M entries");
  for (int i = 0; i < N; ++i) {
    if (!(L.tilde_u[i] >= 0.0) || !(L.bar_u[i] >= 0.0)) {
      std::ostringstream os;
      os << "nominal loadings must be >= 0 (index " << i + 1 << ")";
      fail(ErrorCode::LayoutError, os.str());
    }
    if (!std::isfinite(L.tilde_v[i]) || !std::isfinite(L.bar_v[i])) fail(ErrorCode::LayoutError, "non-finite loading");
  }
  // P(t, T_N) / P(t, T) = 1 since T_N = T
  if (L.tilde_u[N - 1] != 0.0 || L.bar_u[N - 1] != 0.0) fail(ErrorCode::LayoutError, "u_N must vanish");
  for (int i = 1; i < N; ++i)
    if (L.tilde_u[i] > L.tilde_u[i - 1]) {
      std::ostringstream os;
      os << "common loadings must be nonincreasing (index " << i + 1 << ")";
      fail(ErrorCode::LayoutError, os.str());
    }
  // within each year the semiannual loading may not exceed the annual one
  for (int l = 1; l <= L.M; ++l)
    if (L.bar_u[2 * l - 1] > L.bar_u[2 * l - 2]) {
      std::ostringstream os;
      os << "nominal loading of T_" << 2 * l << " exceeds that of T_" << 2 * l - 1;
      fail(ErrorCode::LayoutError, os.str());
    }
}

inline ExponentVectors assemble_vectors(const ParamLayout& L) {
  check_layout(L);
  const int N = L.size(), M = L.M, d = L.dim();
  ExponentVectors out;
  out.u.assign(N + 1, Vec(d, 0.0));
  out.v.assign(N + 1, Vec(d, 0.0));
  for (int k = 1; k <= N; ++k) {
    Vec& u = out.u[k];
    const int y = year_of(k);
    u[0] = L.tilde_u[k - 1];
    u[y] = L.bar_u[k - 1];
    for (int l = y + 1; l <= M; ++l) u[l] = L.bar_u[2 * l - 2];
    Vec& v = out.v[k];
    v = u;
    v[0] = L.tilde_v[k - 1];
    v[M + y] = L.bar_v[k - 1];
  }
  return out;
}

}  // namespace affm::inflation
