#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracle_values.hpp"
#include "rmap/dde.hpp"
#include "rmap/distributions.hpp"
#include "rmap/error.hpp"
#include "rmap/laplace.hpp"
#include "rmap/specfun.hpp"

using namespace rmap;
using namespace rmap::laplace;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("forward transforms") {
  auto hn = [](double x) { return std::sqrt(2.0 / kPi) * std::exp(-0.5 * x * x); };
  CHECK(std::abs(forward_laplace(hn, 1.0).real() - oracle::halfnormal_lt_1) < 1e-10);
  CHECK(std::abs(forward_laplace([](double) { return 1.0; }, 2.0).real() - 0.5) < 1e-10);
  const auto rho = dde::solve(dde::DdeSpec::theta_family(1.0));
  auto r = [&](double x) { return x > 64.0 ? 0.0 : rho(x); };
  CHECK(std::abs(forward_laplace(r, 1.0).real() - oracle::rho_lt_1) < 1e-10);
  // complex argument: transform of e^{-x} is 1/(1 + eta)
  const cplx eta(0.5, 2.0);
  CHECK(std::abs(forward_laplace([](double x) { return std::exp(-x); }, eta) - 1.0 / (1.0 + eta)) < 1e-10);
  CHECK_THROWS_AS(forward_laplace(hn, cplx(-1.0, 0.0)), DomainError);
}

TEST_CASE("Rayleigh transform identity") {
  auto ray = [](double x) { return x * std::exp(-0.5 * x * x); };
  for (double eta : {0.5, 1.0, 2.0}) {
    const double exact = 1.0 - std::sqrt(kPi / 2.0) * eta * std::exp(0.5 * eta * eta) * std::erfc(eta / std::sqrt(2.0));
    CHECK(std::abs(forward_laplace(ray, eta).real() - exact) <= 1e-9);
    CHECK(std::abs(TransformSpec::rayleigh()(eta).real() - exact) <= 1e-13);
  }
}

TEST_CASE("inversion examples") {
  CHECK(invert(TransformSpec::dickman(), 2.0).value == doctest::Approx(oracle::rho_2).epsilon(1e-10));
  CHECK(invert(TransformSpec::erfc_gauss(), 1.0).value == doctest::Approx(oracle::erfc_gauss_inv_1).epsilon(1e-9));
  const auto sigma = dde::solve(dde::DdeSpec::theta_family(0.5));
  CHECK(std::abs(invert(TransformSpec::watterson(), 1.5).value - sigma(1.5)) <= 1e-7);
  for (double xi : {0.3, 1.0, 2.0}) {
    CHECK(std::abs(invert(TransformSpec::halfnormal(), xi).value - std::sqrt(2.0 / kPi) * std::exp(-0.5 * xi * xi)) < 1e-8);
    CHECK(std::abs(invert(TransformSpec::rayleigh(), xi).value - xi * std::exp(-0.5 * xi * xi)) < 1e-8);
  }
}

TEST_CASE("method must match analyticity") {
  CHECK_THROWS_AS(invert(TransformSpec::erfc_gauss(), 1.0, Method::talbot), MethodMismatchError);
  CHECK_THROWS_AS(invert(TransformSpec::dickman(), 1.0, Method::bromwich), MethodMismatchError);
  CHECK_THROWS_AS(invert(TransformSpec::dickman(), -1.0), DomainError);
  CHECK_THROWS_AS(TransformSpec::cycle_cdf(0.0), DomainError);
}

TEST_CASE("round trips on [0.25, 6]") {
  struct Case {
    TransformSpec spec;
    double theta;
  };
  const Case cases[] = {{TransformSpec::dickman(), 1.0},
                        {TransformSpec::watterson(), 0.5},
                        {TransformSpec::theta_family(0.5), 0.5},
                        {TransformSpec::theta_family(1.0), 1.0},
                        {TransformSpec::theta_family(1.5), 1.5}};
  for (const auto& c : cases) {
    const auto g = dde::solve(dde::DdeSpec::theta_family(c.theta, 8.0));
    double worst = 0.0;
    for (double xi = 0.25; xi <= 6.0 + 1e-12; xi += 0.0625) {
      worst = std::max(worst, std::abs(invert(c.spec, xi).value - g(xi)));
    }
    INFO(c.spec.name());
    CHECK(worst <= 1e-7);
  }
}

TEST_CASE("h_k closed forms and convolutions") {
  CHECK(hk_closed_form(0, 0.3) == 1.0);
  CHECK(hk_closed_form(1, std::numbers::e) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(hk_closed_form(2, 2.0)) < 1e-15);
  CHECK(hk_closed_form(2, 3.0) == doctest::Approx(oracle::hk2_3).epsilon(1e-14));
  CHECK(hk_closed_form(2, 4.0) == doctest::Approx(oracle::hk2_4).epsilon(1e-14));
  CHECK_THROWS_AS(hk_closed_form(3, 4.0), DomainError);
  for (double xi : {2.5, 3.0, 4.0}) CHECK(std::abs(convolve_h_cumulative(2, xi) - hk_closed_form(2, xi)) <= 1e-9);
  CHECK(convolve_h(1, 0.5) == 0.0);
  for (int k = 1; k <= 4; ++k) CHECK(convolve_h(k, k - 1e-9) == 0.0);
  CHECK(convolve_h(2, 3.0) == doctest::Approx(2.0 * std::log(2.0) / 3.0).epsilon(1e-12));
  CHECK(convolve_h(3, 3.5) == doctest::Approx(oracle::h3_3p5).epsilon(1e-10));
}

TEST_CASE("h_3 against Monte Carlo") {
  // h_3(xi) = area * E[1/(t1 t2 (xi - t1 - t2))] over the triangle t1, t2 >= 1, t1 + t2 <= xi - 1
  const double xi = 3.5, side = xi - 3.0;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, side);
  double s = 0.0, s2 = 0.0;
  int n = 0;
  while (n < 200000) {
    const double a = u(rng), b = u(rng);
    if (a + b > side) continue;
    const double t1 = 1.0 + a, t2 = 1.0 + b;
    const double v = 1.0 / (t1 * t2 * (xi - t1 - t2));
    s += v;
    s2 += v * v;
    ++n;
  }
  const double area = 0.5 * side * side;
  const double mean = s / n;
  const double se = area * std::sqrt((s2 / n - mean * mean) / n);
  const double h3 = convolve_h(3, xi);
  CHECK(h3 > 0.0);
  CHECK(std::abs(h3 - area * mean) <= 3.0 * se);
}

TEST_CASE("Stepanov and Mutafchiev series") {
  CHECK(stepanov_series(1.0, SeriesKind::permutation) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(stepanov_series(0.45, SeriesKind::permutation) == doctest::Approx(dde::rho_closed_form(1.0 / 0.45)).epsilon(1e-12));
  CHECK(stepanov_series(0.6, SeriesKind::component) == doctest::Approx(oracle::component_0p6).epsilon(1e-12));
  for (double a = 0.34; a <= 1.0; a += 0.01) {
    CHECK(std::abs(stepanov_series(a, SeriesKind::permutation) - dde::rho_closed_form(1.0 / a)) <= 1e-10);
  }
  for (double a = 0.505; a <= 1.0; a += 0.01) {
    const double x = 1.0 / a;
    CHECK(std::abs(stepanov_series(a, SeriesKind::component) - std::sqrt(x) * dde::sigma_closed_form(x)) <= 1e-10);
  }
  // beyond the closed forms, against the DDE
  CHECK(std::abs(stepanov_series(0.2, SeriesKind::permutation) - oracle::rho_5) <= 1e-10);
  const auto sigma = dde::solve(dde::DdeSpec::theta_family(0.5));
  CHECK(std::abs(stepanov_series(0.25, SeriesKind::component) - dde::sigma_tilde(sigma, 4.0)) <= 1e-10);
}

TEST_CASE("contour representation of the cycle CDF") {
  CHECK(std::abs(cycle_cdf_contour(0.6842) - 0.5) <= 2e-4);
  CHECK(std::abs(cycle_cdf_contour(20.0) - 1.0) <= 1e-6);
  for (double b : {0.5, 0.6842, 1.0}) {
    CHECK(std::abs(cycle_cdf_contour(b) - dist::mapping_longest_cycle_cdf(b, 1, dist::Regime::rayleigh())) <= 1e-6);
  }
  double prev = 0.0;
  for (double b = 0.1; b <= 4.0; b += 0.1) {
    const double v = cycle_cdf_contour(b);
    CHECK(v >= prev - 1e-12);
    prev = v;
  }
}

TEST_CASE("divisibility report") {
  std::vector<double> grid;
  for (int i = 1; i <= 1000; ++i) grid.push_back(20.0 * i / 1000.0);
  const auto rep = divisibility_report(grid);
  CHECK(rep.rows.size() == 1000);
  CHECK(rep.all_bounds_hold);
  for (const auto& r : rep.rows) {
    CHECK(r.lower < r.center);
    CHECK(r.center < r.upper);
  }
  CHECK(rep.max_approx_rel_error < 0.005);
  CHECK(rep.max_inverse_error <= 1e-8);
  CHECK(rep.root_inverse_small >= 5.0 * rep.root_inverse_one);
}
