#include "rmap/gfseries.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rmap/error.hpp"

namespace rmap::gf {

namespace {

constexpr int kTreeMax = 16;
constexpr int kEgfMax = 12;

Rational factorial(int n) {
  BigInt f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return Rational(f);
}

std::int64_t to_count(const Rational& q, int n, int m, int l) {
  if (denominator(q) != 1) {
    throw std::logic_error("a_count: non-integer coefficient at n=" + std::to_string(n) +
                           " m=" + std::to_string(m) + " l=" + std::to_string(l));
  }
  return numerator(q).convert_to<std::int64_t>();
}

// ln(1/(1 - y tau)) = sum_j y^j tau^j / j, truncated at x-order n.
RationalSeries log_cycle_series(int n) {
  const auto tau = tree_function_series(n);
  RationalSeries out(n);
  RationalSeries power = tau;
  for (int j = 1; j <= n; ++j) {
    for (int i = 0; i <= n; ++i) {
      if (power.coeff(i) != 0) out.coeff(i, j) += power.coeff(i) / j;
    }
    if (j < n) power = power * tau;
  }
  return out;
}

void check_egf_order(int n_max) {
  if (n_max < 1 || n_max > kEgfMax) {
    throw DomainError("component_cycle_egf: n_max must lie in [1, 12]");
  }
}

}  // namespace

RationalSeries::RationalSeries(int order) : order_(order) {
  if (order < 0) throw DomainError("RationalSeries: negative order");
  c_.assign(order + 1, std::vector<Rational>(order + 1));
}

void RationalSeries::check_order(const RationalSeries& o) const {
  if (o.order_ != order_) throw DomainError("RationalSeries: truncation orders differ");
}

RationalSeries RationalSeries::operator+(const RationalSeries& o) const {
  check_order(o);
  RationalSeries out(*this);
  for (int n = 0; n <= order_; ++n)
    for (int l = 0; l <= order_; ++l) out.c_[n][l] += o.c_[n][l];
  return out;
}

RationalSeries RationalSeries::operator*(const RationalSeries& o) const {
  check_order(o);
  RationalSeries out(order_);
  for (int i = 0; i <= order_; ++i) {
    for (int j = 0; j <= order_; ++j) {
      const Rational& a = c_[i][j];
      if (a == 0) continue;
      for (int p = 0; i + p <= order_; ++p) {
        for (int q = 0; j + q <= order_; ++q) {
          const Rational& b = o.c_[p][q];
          if (b != 0) out.c_[i + p][j + q] += a * b;
        }
      }
    }
  }
  return out;
}

RationalSeries RationalSeries::scaled(const Rational& s) const {
  RationalSeries out(*this);
  for (auto& row : out.c_)
    for (auto& v : row) v *= s;
  return out;
}

bool RationalSeries::is_zero() const {
  for (const auto& row : c_)
    for (const auto& v : row)
      if (v != 0) return false;
  return true;
}

RationalSeries RationalSeries::exp_x() const {
  if (c_[0][0] != 0) throw DomainError("exp_x: constant term must vanish");
  for (int n = 0; n <= order_; ++n)
    for (int l = 1; l <= order_; ++l)
      if (c_[n][l] != 0) throw DomainError("exp_x: series must not involve y");
  // E' = A' E: e_n = (1/n) sum_{k=1}^n k a_k e_{n-k}.
  RationalSeries e(order_);
  e.c_[0][0] = 1;
  for (int n = 1; n <= order_; ++n) {
    Rational s = 0;
    for (int k = 1; k <= n; ++k) s += k * c_[k][0] * e.c_[n - k][0];
    e.c_[n][0] = s / n;
  }
  return e;
}

RationalSeries RationalSeries::times_x() const {
  RationalSeries out(order_);
  for (int n = 0; n < order_; ++n) out.c_[n + 1] = c_[n];
  return out;
}

RationalSeries tree_function_series(int n_max) {
  if (n_max < 1 || n_max > kTreeMax) throw DomainError("tree_function_series: n_max must lie in [1, 16]");
  RationalSeries tau(n_max);
  for (int pass = 0; pass < n_max; ++pass) tau = tau.exp_x().times_x();
  return tau;
}

RationalSeries tree_function_residual(const RationalSeries& tau) {
  return tau.exp_x().times_x() + tau.scaled(-1);
}

RationalSeries component_cycle_egf(int m, int n_max) {
  check_egf_order(n_max);
  if (m < 1 || m > n_max) throw DomainError("component_cycle_egf: need 1 <= m <= n_max");
  const auto log_series = log_cycle_series(n_max);
  RationalSeries p = log_series;
  for (int k = 2; k <= m; ++k) p = p * log_series;
  return p.scaled(1 / factorial(m));
}

std::int64_t CountTable::total() const {
  std::int64_t s = 0;
  for (const auto& row : a)
    for (auto v : row) s += v;
  return s;
}

std::int64_t a_count(int n, int m, int l) {
  check_egf_order(n);
  if (m < 1 || l < 0) throw DomainError("a_count: need m >= 1 and l >= 0");
  if (m > n || l > n) return 0;
  const auto egf = component_cycle_egf(m, n);
  return to_count(egf.coeff(n, l) * factorial(n), n, m, l);
}

CountTable count_table(int n) {
  check_egf_order(n);
  CountTable t;
  t.n = n;
  t.a.assign(n + 1, std::vector<std::int64_t>(n + 1, 0));
  const auto log_series = log_cycle_series(n);
  const Rational nf = factorial(n);
  RationalSeries p = log_series;
  Rational mf = 1;
  for (int m = 1; m <= n; ++m) {
    if (m > 1) p = p * log_series;
    mf *= m;
    for (int l = 0; l <= n; ++l) t.a[m][l] = to_count(p.coeff(n, l) * nf / mf, n, m, l);
  }
  return t;
}

std::vector<TrendRow> weighted_sum_trend(int n_max) {
  check_egf_order(n_max);
  std::vector<TrendRow> rows;
  for (int n = 2; n <= n_max; ++n) {
    const auto t = count_table(n);
    const double nn = std::pow(static_cast<double>(n), n);
    for (int m = 1; m <= 3 && m <= n; ++m) {
      std::int64_t s = 0;
      for (int l = 0; l <= n; ++l) s += l * t.a[m][l];
      TrendRow r;
      r.n = n;
      r.m = m;
      r.weighted = static_cast<double>(s) / nn;
      r.asymptote = std::pow(std::log(static_cast<double>(n)), m - 1) /
                    (std::pow(2.0, m - 1) * std::tgamma(static_cast<double>(m)));
      r.ratio = r.weighted / r.asymptote;
      rows.push_back(r);
    }
  }
  return rows;
}

}  // namespace rmap::gf
