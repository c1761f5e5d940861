#pragma once

// Limiting laws for cycles and components of random permutations and
// mappings. Lengths are scaled by n (permutations, components) or sqrt(n)
// (mapping cycles).

#include <memory>
#include <string>
#include <vector>

#include "rmap/dde.hpp"

namespace rmap::dist {

struct Regime {
  enum class Tag { rayleigh, halfnormal, pavlov, connected };
  Tag tag = Tag::rayleigh;
  double c = 0.5;  // pavlov only

  static Regime rayleigh() { return {Tag::rayleigh, 0.5}; }
  static Regime halfnormal() { return {Tag::halfnormal, 0.0}; }
  static Regime pavlov(double c);
  // Connected mappings: N = Lambda_1 is itself half-normal.
  static Regime connected() { return {Tag::connected, 0.0}; }

  std::string name() const;
};

struct JointPoint {
  double lambda = 0.0;
  double nu = 0.0;
};

/// rho_1..rho_r on [0, x_max] with x_max >= x_needed, shared process-wide.
/// Solutions are rebuilt (to a doubled range) only when a caller needs more.
std::shared_ptr<const std::vector<dde::PiecewiseSolution>> rho_ranks(int r, double x_needed = 64.0);

/// rho_r(x) for any x >= 0, extending the cached solution as needed. rho_1
/// beyond a range where it has fallen under 1e-30 is returned as 0.
double rho_r(int r, double x);

/// Watterson sigma, cached.
const dde::PiecewiseSolution& sigma_solution();

/// lim P{Lambda_r <= a n} for the r-th longest permutation cycle: rho_r(1/a).
double perm_longest_cycle_cdf(double a, int r = 1);

/// lim P{largest component <= a n} = sigma_tilde(1/a).
double largest_component_cdf(double a);

/// Density of (largest component)/n at t in (0, 1): sigma((1-t)/t) / (2 t^{3/2}).
double largest_component_density(double t);

/// Density of N / sqrt(n).
double cyclic_points_density(double nu, const Regime& regime);

/// lim P{Lambda_r <= b sqrt(n)} = int w(nu) rho_r(nu/b) dnu.
double mapping_longest_cycle_cdf(double b, int r, const Regime& regime, double tol = 1e-10);

/// Joint density of (Lambda_r, N)/sqrt(n): w(nu)/lambda [rho_r - rho_{r-1}](nu/lambda - 1).
/// Zero for nu <= lambda. Not defined for the connected regime.
double joint_density(const JointPoint& p, int r, const Regime& regime);

}  // namespace rmap::dist
