#include <doctest.h>

#include <cmath>

#include "rmap/error.hpp"
#include "rmap/gfseries.hpp"

using namespace rmap;
using namespace rmap::gf;

TEST_CASE("tree function") {
  const auto tau = tree_function_series(16);
  CHECK(tau.coeff(0) == 0);
  CHECK(tau.coeff(1) == 1);
  CHECK(tau.coeff(3) == Rational(3, 2));
  for (int n = 1; n <= 16; ++n) {
    BigInt num = 1, den = 1;
    for (int k = 0; k < n - 1; ++k) num *= n;
    for (int k = 2; k <= n; ++k) den *= k;
    CHECK(tau.coeff(n) == Rational(num, den));
  }
  CHECK(tree_function_residual(tau).is_zero());
  CHECK_THROWS_AS(tree_function_series(0), DomainError);
  CHECK_THROWS_AS(tree_function_series(17), DomainError);
}

TEST_CASE("series arithmetic") {
  RationalSeries a(3), b(4);
  CHECK_THROWS_AS(a + b, DomainError);
  a.coeff(1) = 1;
  const auto e = a.exp_x();
  CHECK(e.coeff(3) == Rational(1, 6));
  a.coeff(1, 1) = 1;
  CHECK_THROWS_AS(a.exp_x(), DomainError);
}

TEST_CASE("component cycle EGF") {
  const auto e1 = component_cycle_egf(1, 2);
  CHECK(e1.coeff(2, 1) * 2 == 2);
  CHECK(e1.coeff(2, 2) * 2 == 1);
  const auto e2 = component_cycle_egf(2, 2);
  CHECK(e2.coeff(2, 2) * 2 == 1);
  CHECK(e2.coeff(2, 1) == 0);
  CHECK_THROWS_AS(component_cycle_egf(3, 2), DomainError);
  CHECK_THROWS_AS(component_cycle_egf(1, 13), DomainError);
}

TEST_CASE("a_nml") {
  CHECK(a_count(1, 1, 1) == 1);
  CHECK(a_count(2, 1, 1) == 2);
  CHECK(a_count(2, 1, 2) == 1);
  CHECK(a_count(2, 2, 2) == 1);
  std::int64_t sum = 0;
  for (int m = 1; m <= 3; ++m)
    for (int l = 0; l <= 3; ++l) sum += a_count(3, m, l);
  CHECK(sum == 27);
  for (int n = 1; n <= 10; ++n) {
    const auto t = count_table(n);
    CHECK(t.total() == static_cast<std::int64_t>(std::llround(std::pow(n, n))));
    for (int m = 0; m <= n; ++m)
      for (int l = 0; l <= n; ++l)
        if (!(n >= l && l >= m && m >= 1)) CHECK(t.at(m, l) == 0);
  }
  const auto t7 = count_table(7);
  for (int m = 1; m <= 7; ++m)
    for (int l = 0; l <= 7; ++l) CHECK(a_count(7, m, l) == t7.at(m, l));
  // fixed points only: a_{n,n,n} = 1
  CHECK(count_table(12).at(12, 12) == 1);
}

TEST_CASE("trend report") {
  const auto rows = weighted_sum_trend(12);
  CHECK(rows.size() == 3 * 11 - 1);  // n = 2 has no m = 3
  for (const auto& r : rows) {
    CHECK(r.weighted > 0.0);
    CHECK(std::isfinite(r.ratio));
  }
}
