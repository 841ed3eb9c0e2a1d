// Caplet implied volatilities of the one-factor cosh LIBOR model driven by an
// OU process with two-sided gamma jumps, on a flat 3.5% semiannual curve.
#include <cstdio>

#include "affm/cosh/pricing.hpp"

using namespace affm;

namespace {

void print_surface(const char* title, const DoubleGammaOUBM& p) {
  Vec P;
  for (int k = 1; k <= 20; ++k) P.push_back(std::pow(1.0175, -k));
  const auto m = cosh::fit_u_sequence(AffineProcessSpec(p, 10.0), TenorGrid::regular(0.5, 20), P);
  Vec strikes;
  for (int i = 0; i <= 10; ++i) strikes.push_back(0.02 + 0.005 * i);
  std::vector<int> resets;
  for (int k = 1; k <= 10; ++k) resets.push_back(k);
  const auto surface = cosh::caplet_surface(m, resets, strikes);

  std::printf("%s\n expiry", title);
  for (double K : strikes) std::printf("  %5.3f", K);
  std::printf("\n");
  for (std::size_t i = 0; i < surface.size(); ++i) {
    if (i % strikes.size() == 0) std::printf("%7.1f", surface[i].expiry);
    if (surface[i].implied_vol) std::printf("  %5.3f", *surface[i].implied_vol);
    else std::printf("      -");
    if (i % strikes.size() == strikes.size() - 1) std::printf("\n");
  }
  std::printf("lower bound of F_2 at time 0: %.4f\n\n", cosh::forward_rate_lower_bound(m, 2, 0.0));
}

}  // namespace

int main() {
  print_surface("skew", DoubleGammaOUBM{0.02, 0.5, 0.3, 12.0, 10.0, 50.0, 5.0, 0.7});
  print_surface("smile", DoubleGammaOUBM{0.02, 0.0, 0.0, 50.0, 5.0, 50.0, 10.0, 1.0});
}
