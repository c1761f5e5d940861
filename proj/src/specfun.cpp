#include "rmap/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>

#include "rmap/error.hpp"

namespace rmap::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 20000;

// -gamma - log z - sum (-z)^k / (k k!)
template <class T, class LogT>
T e1_series(T z, LogT logz) {
  T term = 1.0;
  T sum = 0.0;
  for (int k = 1; k < kMaxIter; ++k) {
    term *= -z / static_cast<double>(k);
    const T add = term / static_cast<double>(k);
    sum += add;
    if (std::abs(add) <= kEps * 0.25 * std::abs(sum)) break;
  }
  return -kEulerGamma - logz - sum;
}

// e^z E(z) = 1/(z+1- 1/(z+3- 4/(z+5- ...))) by modified Lentz.
template <class T>
T e1_scaled_cf(T z) {
  if (std::abs(z) > 1e4) {
    // Asymptotic series; the first omitted term is below 1e-27 relative.
    T term = 1.0 / z;
    T sum = term;
    for (int n = 1; n <= 6; ++n) {
      term *= -static_cast<double>(n) / z;
      sum += term;
    }
    return sum;
  }
  T b = z + 1.0;
  T c = 1.0 / kTiny;
  T d = 1.0 / b;
  T h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * i;
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const T del = c * d;
    h *= del;
    if (std::abs(del - 1.0) <= 2.0 * kEps) return h;
  }
  throw AccuracyError("exponential integral: continued fraction did not converge");
}

bool use_cf(cplx z) { return std::abs(z) > 4.0 || z.real() > 1.0; }

void check_cut(cplx z) {
  if (z.imag() == 0.0 && z.real() <= 0.0) {
    throw DomainError("exponential integral: argument on the branch cut (-inf, 0]");
  }
}

double dilog_series(double x) {
  double sum = 0.0;
  double p = 1.0;
  for (int k = 1; k < 2000; ++k) {
    p *= x;
    const double add = p / (static_cast<double>(k) * k);
    sum += add;
    if (std::abs(add) <= kEps * 0.25 * std::abs(sum)) break;
  }
  return sum;
}

// Weideman's rational approximation to w(z) = e^{-z^2} erfc(-iz), Im z >= 0.
struct Faddeeva {
  static constexpr int N = 40;
  double L = 0.0;
  std::array<double, N> a{};

  Faddeeva() {
    constexpr int M = 2 * N;
    constexpr int M2 = 2 * M;
    L = std::sqrt(N / std::numbers::sqrt2);
    // f sampled at theta_k = k pi / M, k = -M+1..M-1, with f(-pi) = 0,
    // stored in fft-shifted order, then a_n = Re DFT_n / M2.
    std::array<double, M2> f{};
    for (int k = -M + 1; k <= M - 1; ++k) {
      const double t = L * std::tan(0.5 * k * std::numbers::pi / M);
      const double v = std::exp(-t * t) * (L * L + t * t);
      f[(k + M2) % M2] = v;
    }
    for (int n = 1; n <= N; ++n) {
      double s = 0.0;
      for (int j = 0; j < M2; ++j) {
        s += f[j] * std::cos(2.0 * std::numbers::pi * n * j / M2);
      }
      a[n - 1] = s / M2;
    }
  }

  cplx operator()(cplx z) const {
    const cplx iz(-z.imag(), z.real());
    const cplx denom = L - iz;
    const cplx Z = (L + iz) / denom;
    cplx p = a[N - 1];
    for (int n = N - 2; n >= 0; --n) p = p * Z + a[n];
    return 2.0 * p / (denom * denom) + (1.0 / std::sqrt(std::numbers::pi)) / denom;
  }
};

const Faddeeva& faddeeva() {
  static const Faddeeva w;
  return w;
}

}  // namespace

double e1(double x) {
  if (!(x > 0.0)) throw DomainError("e1: argument must be positive");
  if (x <= 1.0) return e1_series(x, std::log(x));
  return e1_scaled_cf(x) * std::exp(-x);
}

cplx e1(cplx z) {
  check_cut(z);
  if (use_cf(z)) return e1_scaled_cf(z) * std::exp(-z);
  return e1_series(z, std::log(z));
}

cplx e1_scaled(cplx z) {
  check_cut(z);
  if (use_cf(z)) return e1_scaled_cf(z);
  return std::exp(z) * e1_series(z, std::log(z));
}

double dilog(double x) {
  constexpr double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  if (x > 1.0 || std::isnan(x)) throw DomainError("dilog: argument must be <= 1");
  if (x == 1.0) return zeta2;
  if (std::abs(x) <= 0.5) return dilog_series(x);
  if (x > 0.5) return zeta2 - std::log(x) * std::log1p(-x) - dilog_series(1.0 - x);
  if (x >= -1.0) {
    // Landen: maps [-1, -1/2) into [1/3, 1/2].
    const double l = std::log1p(-x);
    return -dilog_series(x / (x - 1.0)) - 0.5 * l * l;
  }
  const double l = std::log(-x);
  return -zeta2 - 0.5 * l * l - dilog(1.0 / x);
}

double erfc(double x) { return std::erfc(x); }

double arctanh(double x) {
  if (!(std::abs(x) < 1.0)) throw DomainError("arctanh: |x| must be < 1");
  return std::atanh(x);
}

cplx erfcx(cplx z) {
  // erfcx(z) = w(iz); the rational form is accurate for Im(iz) = Re z >= 0.
  const auto& w = faddeeva();
  if (z.real() >= 0.0) return w(cplx(-z.imag(), z.real()));
  return 2.0 * std::exp(z * z) - w(cplx(z.imag(), -z.real()));
}

}  // namespace rmap::specfun
