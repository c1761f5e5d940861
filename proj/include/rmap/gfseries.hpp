#pragma once

// Exact truncated bivariate power series over the rationals, used to expand
// (1/m!) ln(1/(1 - y tau(x)))^m with tau = x e^tau the Cayley tree function.

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace rmap::gf {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// Coefficients c[n][l] of x^n y^l for n, l <= order.
class RationalSeries {
 public:
  explicit RationalSeries(int order);

  int order() const { return order_; }
  const Rational& coeff(int n, int l = 0) const { return c_[n][l]; }
  Rational& coeff(int n, int l = 0) { return c_[n][l]; }

  RationalSeries operator+(const RationalSeries& o) const;
  RationalSeries operator*(const RationalSeries& o) const;  // truncated at order in x
  RationalSeries scaled(const Rational& s) const;
  bool is_zero() const;

  /// exp of a series in x alone with zero constant term.
  RationalSeries exp_x() const;
  /// Multiplication by x (shift), truncated.
  RationalSeries times_x() const;

 private:
  void check_order(const RationalSeries& o) const;

  int order_;
  std::vector<std::vector<Rational>> c_;
};

/// tau(x) through x^n_max, by the fixed-point iteration tau <- x exp(tau)
/// (each pass fixes one more coefficient). 1 <= n_max <= 16.
RationalSeries tree_function_series(int n_max);

/// x exp(tau) - tau, truncated; zero for the tree function.
RationalSeries tree_function_residual(const RationalSeries& tau);

/// (1/m!) ln(1/(1 - y tau(x)))^m through x^n_max; m <= n_max <= 12.
RationalSeries component_cycle_egf(int m, int n_max);

/// a[m][l]: number of n-mappings with m components and l cyclic points.
struct CountTable {
  int n = 0;
  std::vector<std::vector<std::int64_t>> a;  // (n+1) x (n+1)
  std::int64_t total() const;
  std::int64_t at(int m, int l) const { return a[m][l]; }
};

/// n! [x^n y^l] of component_cycle_egf(m, n); throws std::logic_error if the
/// coefficient is not an integer. n <= 12.
std::int64_t a_count(int n, int m, int l);

/// All a_{n m l} for one n from a single expansion of ln(1/(1 - y tau)).
CountTable count_table(int n);

struct TrendRow {
  int n = 0;
  int m = 0;
  double weighted = 0.0;   // sum_l l a_{nml} / n^n
  double asymptote = 0.0;  // ln(n)^{m-1} / (2^{m-1} (m-1)!)
  double ratio = 0.0;
};

/// weighted / asymptote for n = 2..n_max and m = 1, 2, 3.
std::vector<TrendRow> weighted_sum_trend(int n_max);

}  // namespace rmap::gf
