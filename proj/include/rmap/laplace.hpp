#pragma once

// Forward Laplace transforms, contour inversion, the truncated convolution
// series for exp(-E(eta)) and the erfc-type transform identities.

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace rmap::laplace {

using cplx = std::complex<double>;

enum class TransformId {
  dickman,         // e^{-E(eta)} / eta
  watterson,       // sqrt(pi) e^{-E(eta)/2} / sqrt(eta)
  theta_family,    // Gamma(theta) e^{-theta E(eta)} / eta^theta
  cycle_cdf,       // e^{-E(sqrt(2 b eta))} / sqrt(eta)
  halfnormal,      // e^{eta^2/2} erfc(eta/sqrt 2)
  rayleigh,        // 1 - sqrt(pi/2) eta e^{eta^2/2} erfc(eta/sqrt 2)
  erfc_gauss,      // e^{eta^2/pi} erfc(eta/sqrt pi)
  halfnormal_root, // principal square root of the halfnormal transform
  custom,
};

enum class Analyticity {
  branch_cut,  // analytic off (-inf, 0], bounded growth to the left
  entire,      // entire, Gaussian growth outside a sector around Re eta > 0
};

enum class Method { automatic, talbot, bromwich };

struct TransformSpec {
  TransformId id = TransformId::dickman;
  double theta = 1.0;  // theta_family
  double b = 1.0;      // cycle_cdf
  Analyticity analyticity = Analyticity::branch_cut;
  std::function<cplx(cplx)> fn;  // custom only

  static TransformSpec dickman();
  static TransformSpec watterson();
  static TransformSpec theta_family(double theta);
  static TransformSpec cycle_cdf(double b);
  static TransformSpec halfnormal();
  static TransformSpec rayleigh();
  static TransformSpec erfc_gauss();
  static TransformSpec halfnormal_root();
  static TransformSpec custom(std::function<cplx(cplx)> fn, Analyticity a);

  std::string name() const;
  cplx operator()(cplx eta) const;
};

struct Inversion {
  double value = 0.0;
  double error = 0.0;  // difference between two node counts
  int nodes = 0;
  Method method = Method::talbot;
};

/// int_0^inf e^{-eta xi} f(xi) d xi over dyadic panels in both directions
/// from xi = 1. Throws AccuracyError when the panel contributions fail to die
/// out. f may have an integrable singularity at 0.
cplx forward_laplace(const std::function<double(double)>& f, cplx eta, double tol = 1e-10);

/// Inverse transform at xi > 0. Talbot contour for branch-cut transforms,
/// hyperbolic Bromwich contour for the entire ones; `automatic` picks by
/// analyticity. A method that does not match the growth throws
/// MethodMismatchError; an error estimate above tol throws AccuracyError.
Inversion invert(const TransformSpec& spec, double xi, Method method = Method::automatic,
                 double tol = 1e-8);

/// L^{-1}[E(eta)^k / eta](xi) for k = 0, 1, 2.
double hk_closed_form(int k, double xi);

/// k-fold self-convolution h_k of h(xi) = [xi >= 1] / xi, tabulated as
/// Chebyshev panels on [k, xi_max]. Immutable after construction.
class ConvolutionKernel {
 public:
  static constexpr int kDegree = 28;

  ConvolutionKernel(int k_max, double xi_max);

  int k_max() const { return k_max_; }
  double xi_max() const { return xi_max_; }

  /// h_k(xi); 0 for xi < k.
  double h(int k, double xi) const;
  /// int_0^xi h_k = L^{-1}[E^k / eta](xi).
  double cumulative(int k, double xi) const;
  /// sqrt(pi xi) L^{-1}[E^k / sqrt(eta)](xi) = 2 sqrt(xi) int_0^{sqrt(xi-k)} h_k(xi - u^2) du.
  double half_order(int k, double xi) const;

 private:
  struct Table {
    std::vector<std::vector<double>> panels;  // panel j covers [k + j, k + j + 1]
  };
  double eval(const Table& t, int k, double xi) const;

  int k_max_;
  double xi_max_;
  std::vector<Table> tables_;  // index k - 1
};

/// h_k(xi) by iterated Gauss-Legendre convolution.
double convolve_h(int k, double xi);

/// L^{-1}[E^k / eta](xi) = int_0^xi h_k, the quantity hk_closed_form gives for k <= 2.
double convolve_h_cumulative(int k, double xi);

enum class SeriesKind { permutation, component };

/// Truncated alternating series at xi = 1/a, summed over k = 0..floor(1/a).
/// permutation: sum (-1)^k/k! L^{-1}[E^k/eta];
/// component: sqrt(pi xi) sum (-1)^k/(2^k k!) L^{-1}[E^k/sqrt(eta)].
double stepanov_series(double a, SeriesKind kind);

/// sqrt(pi/b) L^{-1}[e^{-E(sqrt(2 b eta))}/sqrt(eta)] at xi = 1/b.
double cycle_cdf_contour(double b);

struct DivisibilityRow {
  double eta = 0.0;
  double lower = 0.0;   // pi / (sqrt(2 pi) + pi eta)
  double center = 0.0;  // sqrt(pi/2) e^{eta^2/2} erfc(eta/sqrt 2)
  double upper = 0.0;   // pi / (sqrt(2 pi) + 2 eta)
  bool bounds_hold = false;
  double approx_rel_error = 0.0;  // sqrt(rayleigh) vs erfc_gauss
  double lower_inverse_error = 0.0;  // |forward(L^{-1}[lower root]) - lower root|
  double upper_inverse_error = 0.0;
};

struct DivisibilityReport {
  std::vector<DivisibilityRow> rows;
  bool all_bounds_hold = true;
  double max_approx_rel_error = 0.0;
  double max_inverse_error = 0.0;
  double root_inverse_small = 0.0;  // L^{-1}[sqrt(halfnormal)] at xi = 0.01
  double root_inverse_one = 0.0;    // ... at xi = 1
  double root_ratio = 0.0;
};

/// Bound chain, approximation error and inverse-bound round trips on eta_grid;
/// the square-root probe is evaluated once. Failures are reported, not thrown.
DivisibilityReport divisibility_report(const std::vector<double>& eta_grid);

}  // namespace rmap::laplace
