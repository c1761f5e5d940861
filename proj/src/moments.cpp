#include "rmap/moments.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>

#include <boost/math/tools/roots.hpp>

#include "rmap/error.hpp"
#include "rmap/quadrature.hpp"
#include "rmap/specfun.hpp"

namespace rmap::moments {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNuMax = 10.0;  // e^{-50}: past every Gaussian weight used here
constexpr double kXMax = 50.0;   // e^{-50} tail of the G integrands

double factorial(int n) { return std::tgamma(n + 1.0); }

// int_0^inf phi(x) dx as int_0^inf e^{-u} phi(e^{-u}) du over (0, 1] plus a
// plain integral over [1, kXMax]; the log singularity at 0 becomes a
// polynomial factor in u.
template <class F>
double half_line(const F& phi, double tol) {
  auto near = [&](double u) {
    const double x = std::exp(-u);
    return x * phi(x);
  };
  const double a = quad::integrate(near, 0.0, 40.0, {tol / 4.0, 1e-15}).value;
  const double b = quad::integrate(near, 40.0, 200.0, {tol / 4.0, 0.0}).value;
  const double c = quad::integrate(phi, 1.0, kXMax, {tol / 4.0, 1e-15}).value;
  return a + b + c;
}

void check_rh(int r, int h) {
  if (r < 1 || r > 4) throw DomainError("g_constant: r must lie in [1, 4]");
  if (h < 1 || h > 2) throw DomainError("g_constant: h must be 1 or 2");
}

bool is_table_regime(const dist::Regime& g) {
  return g.tag == dist::Regime::Tag::rayleigh || g.tag == dist::Regime::Tag::halfnormal;
}

template <class F>
double bracket_root(F f, double lo, double hi, const char* what) {
  double flo = f(lo), fhi = f(hi);
  if (flo * fhi > 0.0) throw AccuracyError(std::string(what) + ": root not bracketed");
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(45), iters);
  return 0.5 * (a + b);
}

}  // namespace

double g_constant(int r, int h, double tol) {
  check_rh(r, h);
  if (!(tol > 0.0)) throw DomainError("g_constant: tol must be positive");
  auto phi = [r, h](double x) {
    const double e = specfun::e1(x);
    return std::pow(x, h - 1) * std::pow(e, r - 1) * std::exp(-e - x);
  };
  return half_line(phi, tol) / (factorial(h) * factorial(r - 1));
}

double permutation_cross_moment(int r, int s, double tol) {
  if (r < 1 || s <= r) throw DomainError("permutation_cross_moment: need 1 <= r < s");
  // Gamma-subordinator picture: points of intensity e^{-t}/t, total S ~ Exp(1)
  // independent of L = X/S, so E(X_r X_s) = E(S^2) E(L_r L_s) = 2 E(L_r L_s), and
  // E(X_r X_s) = 1/((r-1)! (s-r-1)!) int_0^inf dy e^{-y-E(y)}
  //              int_y^inf e^{-x} E(x)^{r-1} (E(y) - E(x))^{s-r-1} dx.
  const double norm = factorial(r - 1) * factorial(s - r - 1);
  auto outer = [&](double y) {
    const double ey = specfun::e1(y);
    auto inner = [&](double x) {
      const double ex = specfun::e1(x);
      return std::exp(-x) * std::pow(ex, r - 1) * std::pow(ey - ex, s - r - 1) / norm;
    };
    double in = 0.0;
    if (y < kXMax) in = quad::integrate(inner, y, kXMax, {tol * 1e-2, 1e-13}).value;
    return std::exp(-y - ey) * in;
  };
  return 0.5 * half_line(outer, tol);
}

MomentReport moment_table(const dist::Regime& regime, double tol, bool cross) {
  if (!is_table_regime(regime)) throw DomainError("moment_table: regime must be rayleigh or halfnormal");
  const bool ray = regime.tag == dist::Regime::Tag::rayleigh;
  // E(N)/sqrt(n) and E(N^2)/n of the regime.
  const double m1 = ray ? std::sqrt(kPi / 2.0) : std::sqrt(2.0 / kPi);
  const double m2 = ray ? 2.0 : 1.0;
  const double var_n = m2 - m1 * m1;
  MomentReport rep;
  rep.regime = regime;
  for (int r = 1; r <= 4; ++r) {
    RankMoments m;
    m.r = r;
    m.g1 = g_constant(r, 1, tol);
    m.g2 = g_constant(r, 2, tol);
    m.mean = m1 * m.g1;
    m.variance = m2 * m.g2 - m1 * m1 * m.g1 * m.g1;
    // E(Lambda_r N) = E(N^2) G_{r,1}, so cov = var(N) G_{r,1}.
    m.corr_n = std::sqrt(var_n) * m.g1 / std::sqrt(m.variance);
    rep.ranks.push_back(m);
  }
  rep.mode = ray ? mode_lambda1(regime) : 0.0;
  rep.median = median_lambda(1, regime);
  if (cross) {
    rep.cross.assign(4, std::vector<double>(4, 0.0));
    for (int r = 1; r <= 4; ++r) {
      rep.cross[r - 1][r - 1] = 1.0;
      for (int s = r + 1; s <= 4; ++s) {
        const auto& a = rep.ranks[r - 1];
        const auto& b = rep.ranks[s - 1];
        const double cov = m2 * permutation_cross_moment(r, s) - a.mean * b.mean;
        const double c = cov / std::sqrt(a.variance * b.variance);
        rep.cross[r - 1][s - 1] = c;
        rep.cross[s - 1][r - 1] = c;
      }
    }
  }
  return rep;
}

double mode_residual(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("mode_residual: lambda must be positive");
  const auto ranks = dist::rho_ranks(1, kNuMax / lambda);
  const auto& rho = ranks->front();
  auto integrand = [&](double nu) {
    const double y = nu / lambda - 1.0;
    double v = -rho(y);
    if (nu > 2.0 * lambda) v += nu / (nu - lambda) * rho(y - 1.0);
    return v * nu * std::exp(-0.5 * nu * nu);
  };
  std::vector<double> cuts;
  for (double k = 1.0; k * lambda < kNuMax; k += 1.0) cuts.push_back(k * lambda);
  cuts.push_back(kNuMax);
  const double integral = quad::integrate_pieces(integrand, cuts, {1e-13, 0.0}).value;
  return integral / (lambda * lambda) - std::exp(-0.5 * lambda * lambda);
}

double mode_lambda1(const dist::Regime& regime) {
  if (regime.tag != dist::Regime::Tag::rayleigh) {
    throw DomainError("mode_lambda1: the mode equation is stated for the rayleigh regime");
  }
  return bracket_root([](double l) { return mode_residual(l); }, 0.1, 1.5, "mode_lambda1");
}

double lambda_density(double lambda, int r, const dist::Regime& regime) {
  if (!(lambda > 0.0)) throw DomainError("lambda_density: lambda must be positive");
  if (regime.tag == dist::Regime::Tag::connected) {
    return r == 1 ? dist::cyclic_points_density(lambda, regime) : 0.0;
  }
  const double top = kNuMax + std::sqrt(2.0 * regime.c);
  if (lambda >= top) return 0.0;
  dist::rho_ranks(r, top / lambda);
  std::vector<double> cuts{lambda};
  for (double k = 2.0; k * lambda < top; k += 1.0) cuts.push_back(k * lambda);
  cuts.push_back(top);
  auto f = [&](double nu) { return dist::joint_density({lambda, nu}, r, regime); };
  return quad::integrate_pieces(f, cuts, {1e-12, 0.0}).value;
}

double median_lambda(int r, const dist::Regime& regime) {
  if (r < 1) throw DomainError("median_lambda: rank must be >= 1");
  auto f = [&](double b) { return dist::mapping_longest_cycle_cdf(b, r, regime) - 0.5; };
  double lo = 0.05, hi = 2.0;
  while (f(lo) > 0.0) {
    lo *= 0.5;
    if (lo < 1e-4) throw AccuracyError("median_lambda: no bracket");
  }
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 64.0) throw AccuracyError("median_lambda: no bracket");
  }
  return bracket_root(f, lo, hi, "median_lambda");
}

HalfNormalMoments halfnormal_moments(double tol) {
  const auto hn = dist::Regime::halfnormal();
  auto w = [&](double v) { return dist::cyclic_points_density(v, hn); };
  auto w1 = [&](double v) { return v * w(v); };
  auto w2 = [&](double v) { return v * v * w(v); };
  const double top = 40.0;
  HalfNormalMoments m;
  m.mean = quad::integrate(w1, 0.0, top, {tol, 0.0}).value;
  const double second = quad::integrate(w2, 0.0, top, {tol, 0.0}).value;
  m.variance = second - m.mean * m.mean;
  return m;
}

}  // namespace rmap::moments
