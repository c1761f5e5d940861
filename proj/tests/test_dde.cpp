#include <doctest.h>

#include <cmath>
#include <random>

#include "oracle_values.hpp"
#include "rmap/dde.hpp"
#include "rmap/error.hpp"
#include "rmap/laplace.hpp"
#include "rmap/specfun.hpp"

using namespace rmap;
using namespace rmap::dde;

namespace {

const PiecewiseSolution& rho() {
  static const auto s = solve(DdeSpec::theta_family(1.0));
  return s;
}
const PiecewiseSolution& sigma() {
  static const auto s = solve(DdeSpec::theta_family(0.5));
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("spec validation") {
  CHECK_THROWS_AS(DdeSpec::theta_family(0.0).validate(), DomainError);
  CHECK_THROWS_AS(DdeSpec::theta_family(1.0, 0.5).validate(), DomainError);
  CHECK_THROWS_AS(DdeSpec::theta_family(1.0, 64.0, 1e-5).validate(), DomainError);
  CHECK_THROWS_AS(DdeSpec::generalized_dickman(0).validate(), DomainError);
  CHECK_THROWS_AS(rho()(65.0), OutOfRangeError);
}

TEST_CASE("initial conditions and closed forms") {
  CHECK(rho()(0.5) == 1.0);
  CHECK(rho()(1.0) == 1.0);
  CHECK(rho()(-1.0) == 0.0);
  CHECK(sigma()(-1.0) == 0.0);
  CHECK(sigma()(0.5) == doctest::Approx(1.0 / std::sqrt(0.5)).epsilon(1e-15));
  CHECK(rho()(2.0) == doctest::Approx(oracle::rho_2).epsilon(1e-12));
  CHECK(rho()(3.0) == doctest::Approx(oracle::rho_3).epsilon(1e-11));
  CHECK(sigma()(2.0) == doctest::Approx(oracle::sigma_2).epsilon(1e-11));
  CHECK(rho_closed_form(2.5) == doctest::Approx(oracle::rho_2p5).epsilon(1e-13));
  CHECK(sigma_closed_form(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sigma_tilde(sigma(), 2.0) == doctest::Approx(oracle::sigma_tilde_2).epsilon(1e-11));
}

TEST_CASE("solver agrees with closed forms on a dense grid") {
  double worst_rho = 0.0, worst_sigma = 0.0;
  for (int i = 0; i <= 2000; ++i) {
    const double x = 1.0 + 2.0 * i / 2000.0;
    worst_rho = std::max(worst_rho, std::abs(rho()(x) - rho_closed_form(x)));
    const double y = 1.0 + i / 2000.0;
    worst_sigma = std::max(worst_sigma, std::abs(sigma()(y) - sigma_closed_form(y)));
  }
  CHECK(worst_rho <= 1e-10);
  CHECK(worst_sigma <= 1e-10);
}

TEST_CASE("relative accuracy far into the tail") {
  CHECK(rel(rho()(4.0), oracle::rho_4) < 1e-10);
  CHECK(rel(rho()(5.0), oracle::rho_5) < 1e-10);
  CHECK(rel(rho()(6.0), oracle::rho_6) < 1e-10);
  CHECK(rel(rho()(10.0), oracle::rho_10) < 1e-9);
  CHECK(rel(rho()(20.0), oracle::rho_20) < 1e-8);
  CHECK(rel(sigma()(1.5), oracle::sigma_1p5) < 1e-11);
  CHECK(rel(sigma()(3.0), oracle::sigma_3) < 1e-10);
  CHECK(rel(sigma()(5.5), oracle::sigma_5p5) < 1e-10);
  CHECK(rel(sigma()(10.0), oracle::sigma_10) < 1e-9);
  const auto g15 = solve(DdeSpec::theta_family(1.5, 8.0));
  CHECK(g15(0.5) == doctest::Approx(oracle::g_theta1p5_0p5).epsilon(1e-15));
  CHECK(rel(g15(2.5), oracle::g_theta1p5_2p5) < 1e-11);
  CHECK(rel(g15(4.0), oracle::g_theta1p5_4) < 1e-10);
  const auto g03 = solve(DdeSpec::theta_family(0.3, 8.0));
  CHECK(rel(g03(2.5), oracle::g_theta0p3_2p5) < 1e-10);
  CHECK(rel(g03(6.0), oracle::g_theta0p3_6) < 1e-9);
}

TEST_CASE("residual, continuity and the Dickman derivative identity") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(1.0, 64.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng);
    const double d = rho().derivative(x) + rho()(x - 1.0) / x;
    worst = std::max(worst, std::abs(d));
  }
  CHECK(worst <= 1e-9);
  for (double x = 1.05; x < 20.0; x += 0.37) {
    CHECK(std::abs(rho().residual(x)) <= 100 * 1e-12);
    CHECK(std::abs(sigma().residual(x)) <= 100 * 1e-12);
  }
  CHECK(rho().continuity_defect() <= 10 * 1e-12);
  CHECK(sigma().continuity_defect() <= 10 * 1e-12);
}

TEST_CASE("generalized Dickman functions") {
  const auto ranks = solve_generalized_dickman_ranks(DdeSpec::generalized_dickman(4, 40.0));
  CHECK(ranks[1](1.7) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ranks[0](3.0) == doctest::Approx(oracle::rho_3).epsilon(1e-11));
  CHECK(ranks[1](2.5) == doctest::Approx(oracle::rho2_2p5).epsilon(1e-12));
  for (std::size_t r = 0; r < ranks.size(); ++r) {
    double prev = 1.0;
    for (double x = 0.0; x <= 40.0; x += 0.1) {
      const double v = ranks[r](x);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0 + 1e-14);
      CHECK(v <= prev + 1e-14);
      if (r > 0) CHECK(v >= ranks[r - 1](x) - 1e-14);
      prev = v;
    }
  }
  const auto single = solve_generalized_dickman(DdeSpec::generalized_dickman(3, 40.0));
  CHECK(single(7.3) == doctest::Approx(ranks[2](7.3)).epsilon(1e-14));
  CHECK(std::abs(ranks[2].residual(7.3, &ranks[1])) <= 1e-10);
}

TEST_CASE("sigma-tilde derivative identity") {
  // d/dx sigma_tilde(1/x) = sigma((1-x)/x) / (2 x^{3/2}) on (0.1, 0.9)
  const double h = 1e-6;  // truncation error is O(h^2) and largest near x = 0.1
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = 0.1 + 0.8 * (i + 0.5) / 100.0;
    const double fd = (sigma_tilde(sigma(), 1.0 / (x + h)) - sigma_tilde(sigma(), 1.0 / (x - h))) / (2.0 * h);
    const double exact = sigma()((1.0 - x) / x) / (2.0 * x * std::sqrt(x));
    worst = std::max(worst, std::abs(fd - exact) / std::abs(exact));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("forward transform of the solved theta family") {
  for (double theta : {0.5, 1.0, 1.5}) {
    const auto g = solve(DdeSpec::theta_family(theta, 64.0));
    for (double eta : {0.5, 1.0, 2.0}) {
      const auto f = laplace::forward_laplace([&](double x) { return x > 64.0 ? 0.0 : g(x); }, eta, 1e-11);
      const double exact = std::tgamma(theta) * std::exp(-theta * rmap::specfun::e1(eta)) / std::pow(eta, theta);
      CHECK(std::abs(f.real() - exact) <= 1e-8);
    }
  }
}
