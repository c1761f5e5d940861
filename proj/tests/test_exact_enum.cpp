#include <doctest.h>

#include <cmath>

#include "rmap/error.hpp"
#include "rmap/exact_enum.hpp"
#include "rmap/gfseries.hpp"
#include "rmap/mapping_sim.hpp"

using namespace rmap;

TEST_CASE("small cases by hand") {
  const auto t1 = exact::enumerate_all(1);
  CHECK(t1.total == 1);
  CHECK(t1.counts.at(1, 1) == 1);
  CHECK(t1.connected_count == 1);
  CHECK(t1.mean_lambda1() == 1.0);

  // n = 2: identity {1},{2}; swap; two constant maps.
  const auto t2 = exact::enumerate_all(2);
  CHECK(t2.total == 4);
  CHECK(t2.counts.at(2, 2) == 1);
  CHECK(t2.counts.at(1, 2) == 1);
  CHECK(t2.counts.at(1, 1) == 2);
  CHECK(t2.connected_count == 3);
  CHECK(t2.mean_lambda1() == doctest::Approx(5.0 / 4.0));

  // n = 3: 27 mappings, 17 connected, 6 permutations.
  const auto t3 = exact::enumerate_all(3, 2);
  CHECK(t3.total == 27);
  CHECK(t3.connected_count == 17);
  std::int64_t perms = 0;
  for (int m = 1; m <= 3; ++m) perms += t3.counts.at(m, 3);
  CHECK(perms == 6);
  CHECK(t3.counts.at(3, 3) == 1);
  CHECK(t3.counts.at(1, 1) == 9);
  CHECK(t3.interplay_probability() == 1.0);

  CHECK_THROWS_AS(exact::enumerate_all(0), DomainError);
  CHECK_THROWS_AS(exact::enumerate_all(8), DomainError);
  CHECK_THROWS_AS(exact::enumerate_all(3, 0), DomainError);
}

TEST_CASE("enumeration agrees with the generating function") {
  for (int n = 1; n <= 7; ++n) {
    INFO("n = " << n);
    const auto e = exact::enumerate_all(n, 4);
    const auto g = gf::count_table(n);
    CHECK(e.counts.a == g.a);
    CHECK(e.total == g.total());
  }
}

TEST_CASE("worker count does not change the tallies") {
  const auto a = exact::enumerate_all(6, 1), b = exact::enumerate_all(6, 5);
  CHECK(a.counts.a == b.counts.a);
  CHECK(a.joint == b.joint);
  CHECK(a.interplay_count == b.interplay_count);
}

TEST_CASE("connected fraction times sqrt(2n/pi) increases toward 1") {
  const std::int64_t expected[] = {3, 17, 142, 1569, 21576, 355081};
  double prev = 0.0;
  for (int n = 2; n <= 7; ++n) {
    const auto e = exact::enumerate_all(n, 4);
    CHECK(e.connected_count == expected[n - 2]);
    const double scaled = static_cast<double>(e.connected_count) / static_cast<double>(e.total) *
                          std::sqrt(2.0 * n / M_PI);
    if (n >= 3) CHECK(scaled > prev);
    CHECK(scaled < 1.0);
    prev = scaled;
  }
}

TEST_CASE("simulation at n = 7 matches exact moments") {
  const auto e = exact::enumerate_all(7, 4);
  sim::SimConfig cfg;
  cfg.n = 7;
  cfg.trials = 1000000;
  cfg.seed = 7;
  cfg.workers = 4;
  const auto s = sim::simulate(cfg);
  const double r7 = std::sqrt(7.0);
  const auto& l1 = s.get("lambda1");
  CHECK(std::abs(l1.mean * r7 - e.mean_lambda1()) <= 4.0 * l1.std_error * r7);
  const auto& ip = s.get("interplay");
  CHECK(std::abs(ip.mean - e.interplay_probability()) <= 4.0 * ip.std_error);

  const auto est = sim::interplay_estimate(6, 200000, 11, 2);
  CHECK(std::abs(est.value - exact::enumerate_all(6).interplay_probability()) <= 3.0 * est.std_error);
}

TEST_CASE("constrained sampler at n = 7 matches exact conditional mean") {
  const auto e = exact::enumerate_all(7, 4);
  double num = 0.0, den = 0.0;
  for (int l = 0; l <= 7; ++l) {
    num += l * static_cast<double>(e.counts.at(2, l));
    den += static_cast<double>(e.counts.at(2, l));
  }
  sim::SimConfig cfg;
  cfg.n = 7;
  cfg.trials = 200000;
  cfg.constraint = sim::Constraint::components(2);
  cfg.seed = 21;
  cfg.workers = 2;
  const auto s = sim::simulate(cfg);
  const auto& nc = s.get("cyclic_points");
  const double r7 = std::sqrt(7.0);
  CHECK(std::abs(nc.mean * r7 - num / den) <= 4.0 * nc.std_error * r7);
  CHECK(std::abs(s.acceptance_rate - den / static_cast<double>(e.total)) < 0.01);
}
