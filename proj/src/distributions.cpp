#include "rmap/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "rmap/error.hpp"
#include "rmap/quadrature.hpp"

namespace rmap::dist {

namespace {

constexpr double kBaseRange = 64.0;
constexpr double kNegligible = 1e-30;

struct RankCache {
  std::mutex mutex;
  std::shared_ptr<const std::vector<dde::PiecewiseSolution>> ranks;
};

RankCache& cache() {
  static RankCache c;
  return c;
}

double weight_exponent(const Regime& g) {
  switch (g.tag) {
    case Regime::Tag::rayleigh: return 0.5;
    case Regime::Tag::pavlov: return g.c;
    default: return 0.0;
  }
}

// P{N <= x}: N^2/2 is Gamma(c + 1/2) for the weight nu^{2c} e^{-nu^2/2}.
double weight_cdf(double x, double c) {
  if (x <= 0.0) return 0.0;
  return boost::math::gamma_p(c + 0.5, 0.5 * x * x);
}

void check_rank(int r) {
  if (r < 1) throw DomainError("rank must be >= 1");
}

}  // namespace

Regime Regime::pavlov(double c) {
  if (!(c >= 0.0 && std::isfinite(c))) throw DomainError("pavlov regime: c must be >= 0");
  return {Tag::pavlov, c};
}

std::string Regime::name() const {
  switch (tag) {
    case Tag::rayleigh: return "rayleigh";
    case Tag::halfnormal: return "halfnormal";
    case Tag::connected: return "connected";
    case Tag::pavlov: {
      std::ostringstream os;
      os << "pavlov(" << c << ")";
      return os.str();
    }
  }
  return "unknown";
}

std::shared_ptr<const std::vector<dde::PiecewiseSolution>> rho_ranks(int r, double x_needed) {
  check_rank(r);
  if (!(x_needed >= 0.0) || !std::isfinite(x_needed)) throw DomainError("rho_ranks: bad range");
  auto& c = cache();
  std::lock_guard lock(c.mutex);
  if (c.ranks && static_cast<int>(c.ranks->size()) >= r && c.ranks->front().x_max() >= x_needed) {
    return c.ranks;
  }
  int have = c.ranks ? static_cast<int>(c.ranks->size()) : 0;
  double range = c.ranks ? c.ranks->front().x_max() : kBaseRange;
  while (range < x_needed) range *= 2.0;
  auto spec = dde::DdeSpec::generalized_dickman(std::max(r, have), range);
  c.ranks = std::make_shared<const std::vector<dde::PiecewiseSolution>>(
      dde::solve_generalized_dickman_ranks(spec));
  return c.ranks;
}

double rho_r(int r, double x) {
  check_rank(r);
  if (std::isnan(x)) throw DomainError("rho_r: NaN argument");
  if (x <= 1.0) return x < 0.0 ? 0.0 : 1.0;
  if (r == 1 && x > kBaseRange) {
    auto base = rho_ranks(1, kBaseRange);
    const auto& rho = base->front();
    if (rho(rho.x_max()) < kNegligible) return 0.0;
  }
  auto ranks = rho_ranks(r, x);
  return (*ranks)[r - 1](x);
}

const dde::PiecewiseSolution& sigma_solution() {
  static const dde::PiecewiseSolution sigma = dde::solve(dde::DdeSpec::theta_family(0.5));
  return sigma;
}

double perm_longest_cycle_cdf(double a, int r) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("perm_longest_cycle_cdf: a must lie in (0, 1]");
  check_rank(r);
  return rho_r(r, 1.0 / a);
}

double largest_component_cdf(double a) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("largest_component_cdf: a must lie in (0, 1]");
  const auto& sigma = sigma_solution();
  const double x = 1.0 / a;
  if (x > sigma.x_max()) {
    if (sigma(sigma.x_max()) < kNegligible) return 0.0;
    throw OutOfRangeError("largest_component_cdf: a too small");
  }
  return dde::sigma_tilde(sigma, x);
}

double largest_component_density(double t) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("largest_component_density: t must lie in (0, 1)");
  const auto& sigma = sigma_solution();
  const double x = (1.0 - t) / t;
  if (x > sigma.x_max()) return 0.0;
  return sigma(x) / (2.0 * t * std::sqrt(t));
}

double cyclic_points_density(double nu, const Regime& regime) {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw DomainError("cyclic_points_density: nu must be >= 0");
  const double g = std::exp(-0.5 * nu * nu);
  switch (regime.tag) {
    case Regime::Tag::rayleigh:
      return nu * g;
    case Regime::Tag::halfnormal:
    case Regime::Tag::connected:
      return std::sqrt(2.0 / std::numbers::pi) * g;
    case Regime::Tag::pavlov: {
      const double c = regime.c;
      if (c == 0.0) return std::sqrt(2.0 / std::numbers::pi) * g;
      if (nu == 0.0) return 0.0;
      // 2^c Gamma(c) / (sqrt(2 pi) Gamma(2c)) nu^{2c} e^{-nu^2/2}
      const double log_coef = c * std::numbers::ln2 + std::lgamma(c) - std::lgamma(2.0 * c) -
                              0.5 * std::log(2.0 * std::numbers::pi);
      return std::exp(log_coef + 2.0 * c * std::log(nu) - 0.5 * nu * nu);
    }
  }
  return 0.0;
}

double mapping_longest_cycle_cdf(double b, int r, const Regime& regime, double tol) {
  if (!(b > 0.0) || !std::isfinite(b)) throw DomainError("mapping_longest_cycle_cdf: b must be positive");
  check_rank(r);
  if (regime.tag == Regime::Tag::connected) {
    return r == 1 ? std::erf(b / std::numbers::sqrt2) : 1.0;
  }
  const double c = weight_exponent(regime);
  const double nu_max = 9.0 + std::sqrt(2.0 * c);
  // rho_r(nu/b) = 1 for nu <= r b.
  const double flat = std::min(r * b, nu_max);
  double total = weight_cdf(flat, c);
  if (flat >= nu_max) return std::min(total, 1.0);

  double top = nu_max;
  if (r == 1) top = std::min(top, kBaseRange * b);  // rho beyond 64 is below 1e-130
  auto ranks = rho_ranks(r, top / b);
  const auto& rho = (*ranks)[r - 1];
  std::vector<double> cuts{flat};
  for (double k = std::floor(flat / b) + 1.0; k * b < top; k += 1.0) cuts.push_back(k * b);
  cuts.push_back(top);
  auto integrand = [&](double nu) { return cyclic_points_density(nu, regime) * rho(nu / b); };
  total += quad::integrate_pieces(integrand, cuts, {tol, 0.0}).value;
  return std::min(total, 1.0);
}

double joint_density(const JointPoint& p, int r, const Regime& regime) {
  if (!(p.lambda > 0.0 && p.nu > 0.0)) throw DomainError("joint_density: coordinates must be positive");
  check_rank(r);
  if (regime.tag == Regime::Tag::connected) {
    throw DomainError("joint_density: degenerate for connected mappings (N = Lambda)");
  }
  if (p.nu <= p.lambda) return 0.0;
  const double x = p.nu / p.lambda - 1.0;
  const double bracket = rho_r(r, x) - (r >= 2 ? rho_r(r - 1, x) : 0.0);
  if (bracket == 0.0) return 0.0;
  return cyclic_points_density(p.nu, regime) / p.lambda * bracket;
}

}  // namespace rmap::dist
