#pragma once

// Moment constants of the ranked cycle lengths Lambda_r of a random mapping
// (units of sqrt(n)) and the mode/median of Lambda_1.

#include <array>
#include <vector>

#include "rmap/distributions.hpp"

namespace rmap::moments {

/// G_{r,h} = 1/(h! (r-1)!) int_0^inf x^{h-1} E(x)^{r-1} e^{-E(x)-x} dx.
double g_constant(int r, int h, double tol = 1e-13);

struct RankMoments {
  int r = 0;
  double g1 = 0.0;
  double g2 = 0.0;
  double mean = 0.0;      // lim E(Lambda_r)/sqrt(n)
  double variance = 0.0;  // lim V(Lambda_r)/n
  double corr_n = 0.0;    // lim corr(Lambda_r, N)
};

struct MomentReport {
  dist::Regime regime;
  std::vector<RankMoments> ranks;  // r = 1..4
  double mode = 0.0;    // of Lambda_1; 0 for halfnormal (boundary mode)
  double median = 0.0;  // of Lambda_1
  // corr(Lambda_r, Lambda_s), r < s, indexed [r-1][s-1]; empty unless requested.
  std::vector<std::vector<double>> cross;
};

/// Moment table for the rayleigh or halfnormal regime.
MomentReport moment_table(const dist::Regime& regime, double tol = 1e-13, bool cross = false);

/// E(L_r L_s) for the scaled ranked cycle lengths L of a random permutation,
/// r < s. Mapping cross moments follow by multiplying with E(N^2)/n.
double permutation_cross_moment(int r, int s, double tol = 1e-11);

/// d/dlambda P{Lambda_1 > lambda} residual of the rayleigh mode equation:
/// (1/lambda^2) int [-rho(nu/lambda - 1) + nu/(nu - lambda) rho(nu/lambda - 2)] nu e^{-nu^2/2} dnu
///   - e^{-lambda^2/2}.
double mode_residual(double lambda);

/// Mode of Lambda_1 under the rayleigh regime, bracketed on [0.1, 1.5].
double mode_lambda1(const dist::Regime& regime);

/// Density of Lambda_r/sqrt(n): int_lambda^inf f_r(lambda, nu) dnu.
double lambda_density(double lambda, int r, const dist::Regime& regime);

/// Root of P{Lambda_r <= lambda sqrt(n)} = 1/2.
double median_lambda(int r, const dist::Regime& regime);

/// Mean and variance of the half-normal law by direct quadrature.
struct HalfNormalMoments {
  double mean = 0.0;
  double variance = 0.0;
};
HalfNormalMoments halfnormal_moments(double tol = 1e-14);

}  // namespace rmap::moments
