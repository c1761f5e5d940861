#pragma once

// Scalar special functions: exponential integral, dilogarithm, error
// functions. All routines are pure and thread-safe.

#include <complex>
#include <numbers>

namespace rmap::specfun {

using cplx = std::complex<double>;

inline constexpr double kEulerGamma = std::numbers::egamma;

/// E(x) = \int_x^\infty e^{-t}/t dt for x > 0.
/// Power series for x <= 1, Lentz continued fraction above.
double e1(double x);

/// Principal branch of E on C \ (-inf, 0]. Series for |z| <= 4 (unless
/// Re z > 1), continued fraction otherwise.
cplx e1(cplx z);

/// e^z E(z), evaluated without forming e^z when |z| is large, so it stays
/// bounded where E itself overflows (Re z << 0 off the cut).
cplx e1_scaled(cplx z);

/// Li_2(x) = sum_{k>=1} x^k / k^2 for x <= 1.
double dilog(double x);

double erfc(double x);

/// Inverse hyperbolic tangent on (-1, 1).
double arctanh(double x);

/// Scaled complementary error function e^{z^2} erfc(z), entire in z.
/// Uses a 40-term rational (Weideman) approximation of the Faddeeva function.
cplx erfcx(cplx z);

}  // namespace rmap::specfun
