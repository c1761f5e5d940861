#pragma once

// Adaptive Gauss-Kronrod (10/21) quadrature and Gauss-Legendre rules.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <span>
#include <vector>

#include "rmap/error.hpp"

namespace rmap::quad {

struct Tolerance {
  double abs = 1e-12;
  double rel = 0.0;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

struct Rule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// Gauss-Legendre rule with n points on [-1, 1]. Rules are computed once and
/// cached; the returned reference stays valid for the program lifetime.
const Rule& gauss_legendre(int n);

/// Fixed-order Gauss-Legendre on [a, b].
template <class F>
auto fixed(F&& f, double a, double b, const Rule& rule) {
  using T = decltype(f(a));
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  T sum{};
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(c + h * rule.nodes[i]);
  }
  return T(sum * h);
}

namespace detail {

inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980525755, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class F>
auto kronrod21(F& f, double a, double b) {
  using T = decltype(f(a));
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * kWgk[10];
  T gauss{};
  for (int j = 0; j < 10; ++j) {
    const double dx = h * kXgk[j];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    kron += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) gauss += kWg[j / 2] * (f1 + f2);
  }
  kron *= h;
  gauss *= h;
  return Segment<T>{a, b, kron, magnitude(kron - gauss)};
}

}  // namespace detail

/// Globally adaptive G10/K21 on a finite interval. The error estimate is the
/// raw Kronrod-Gauss difference summed over segments. Throws AccuracyError if
/// the segment budget runs out before the tolerance is met.
template <class F>
auto integrate(F&& f, double a, double b, Tolerance tol = {},
               int max_segments = 4000) {
  using T = decltype(f(a));
  Result<T> out;
  if (a == b) return out;
  std::priority_queue<detail::Segment<T>> heap;
  auto first = detail::kronrod21(f, a, b);
  T total = first.value;
  double err = first.error;
  heap.push(first);
  int segments = 1;
  auto target = [&] {
    return std::max(tol.abs, tol.rel * detail::magnitude(total));
  };
  while (err > target()) {
    if (segments >= max_segments) {
      throw AccuracyError("adaptive quadrature: segment budget exhausted");
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw AccuracyError("adaptive quadrature: interval underflow");
    }
    auto left = detail::kronrod21(f, worst.a, mid);
    auto right = detail::kronrod21(f, mid, worst.b);
    total += (left.value + right.value) - worst.value;
    err += (left.error + right.error) - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }
  // Re-sum from the leaves to shed accumulated cancellation in `total`.
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = esum;
  out.evaluations = 21 * (2 * segments - 1);
  return out;
}

/// Integrates over consecutive intervals [p0,p1], [p1,p2], ... so that known
/// kinks or jumps of the integrand fall on segment boundaries. The absolute
/// tolerance is shared evenly across pieces.
template <class F>
auto integrate_pieces(F&& f, std::span<const double> points, Tolerance tol = {},
                      int max_segments = 4000) {
  using T = decltype(f(points[0]));
  Result<T> out;
  if (points.size() < 2) return out;
  Tolerance piece = tol;
  piece.abs = tol.abs / static_cast<double>(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] <= points[i]) continue;
    auto r = integrate(f, points[i], points[i + 1], piece, max_segments);
    out.value += r.value;
    out.error += r.error;
    out.evaluations += r.evaluations;
  }
  return out;
}

}  // namespace rmap::quad
