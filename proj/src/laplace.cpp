#include "rmap/laplace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rmap/error.hpp"
#include "rmap/quadrature.hpp"
#include "rmap/specfun.hpp"

namespace rmap::laplace {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kTalbotNodes = 32;
constexpr int kTalbotCheck = 24;
constexpr int kHyperNodes = 32;
constexpr int kHyperCheck = 24;
constexpr double kRootTol = 1e-4;  // the square-root probe is demonstration quality

// Weideman's fixed Talbot contour
//   z(th) = (n/t)(-0.6122 + 0.5017 th cot(0.6407 th) + 0.2645 i th),
// midpoint rule on (-pi, pi); conjugate symmetry halves the work.
template <class F>
double talbot(const F& fn, double t, int n) {
  cplx sum = 0.0;
  const double scale = n / t;
  for (int k = n / 2; k < n; ++k) {
    const double th = -kPi + (k + 0.5) * 2.0 * kPi / n;
    const double c = 0.6407 * th;
    const double cot = std::cos(c) / std::sin(c);
    const double sn = std::sin(c);
    const cplx z = scale * cplx(-0.6122 + 0.5017 * th * cot, 0.2645 * th);
    const cplx dz = scale * cplx(0.5017 * cot - 0.5017 * c / (sn * sn), 0.2645);
    sum += std::exp(z * t) * fn(z) * dz;
  }
  return 2.0 / n * sum.imag();
}

// Hyperbolic contour z(u) = mu (1 + sin(iu - alpha)), u in [-3, 3], trapezoid
// rule with 2n + 1 nodes. The asymptotic angle pi/2 + alpha stays inside the
// sector where e^{z^2} decays, so erfc-type transforms are admissible.
template <class F>
double hyperbolic(const F& fn, double t, int n, double alpha) {
  const double h = 3.0 / n;
  const double mu = 0.2 * n / t;
  auto term = [&](double u) {
    const cplx w(-alpha, u);  // iu - alpha
    const cplx z = mu * (1.0 + std::sin(w));
    const cplx dz = cplx(0.0, mu) * std::cos(w);
    return std::exp(z * t) * fn(z) * dz;
  };
  double sum = term(0.0).imag();
  for (int k = 1; k <= n; ++k) sum += 2.0 * term(k * h).imag();
  return h / (2.0 * kPi) * sum;
}

cplx erfcx_scaled(cplx eta, double s) { return specfun::erfcx(eta / s); }

// Inverse of Gamma(theta) eta^{-theta} e^{-theta E(eta)} at xi. Writing
// E = e^{-eta} S with S = e^eta E bounded off the cut, the k-th term of the
// exponential series is a shift by k of L^{-1}[Gamma(theta) eta^{-theta} S^k],
// which Talbot handles. Only k <= xi contribute.
double theta_talbot(double theta, double xi, int n) {
  const double g = std::tgamma(theta);
  double total = 0.0;
  double coef = 1.0;
  for (int k = 0; k <= static_cast<int>(std::floor(xi)); ++k) {
    if (k > 0) coef *= -theta / k;
    const double t = xi - k;
    if (t <= 0.0) break;
    auto fn = [&](cplx eta) {
      cplx v = g * std::pow(eta, -theta);
      if (k > 0) v *= std::pow(specfun::e1_scaled(eta), k);
      return v;
    };
    total += coef * talbot(fn, t, n);
  }
  return total;
}

}  // namespace

TransformSpec TransformSpec::dickman() { return {}; }

TransformSpec TransformSpec::watterson() {
  TransformSpec s;
  s.id = TransformId::watterson;
  s.theta = 0.5;
  return s;
}

TransformSpec TransformSpec::theta_family(double theta) {
  if (!(theta > 0.0 && std::isfinite(theta))) throw DomainError("theta transform: theta must be positive");
  TransformSpec s;
  s.id = TransformId::theta_family;
  s.theta = theta;
  return s;
}

TransformSpec TransformSpec::cycle_cdf(double b) {
  if (!(b > 0.0 && std::isfinite(b))) throw DomainError("cycle-cdf transform: b must be positive");
  TransformSpec s;
  s.id = TransformId::cycle_cdf;
  s.b = b;
  return s;
}

TransformSpec TransformSpec::halfnormal() {
  TransformSpec s;
  s.id = TransformId::halfnormal;
  s.analyticity = Analyticity::entire;
  return s;
}

TransformSpec TransformSpec::rayleigh() {
  TransformSpec s;
  s.id = TransformId::rayleigh;
  s.analyticity = Analyticity::entire;
  return s;
}

TransformSpec TransformSpec::erfc_gauss() {
  TransformSpec s;
  s.id = TransformId::erfc_gauss;
  s.analyticity = Analyticity::entire;
  return s;
}

TransformSpec TransformSpec::halfnormal_root() {
  TransformSpec s;
  s.id = TransformId::halfnormal_root;
  s.analyticity = Analyticity::entire;
  return s;
}

TransformSpec TransformSpec::custom(std::function<cplx(cplx)> fn, Analyticity a) {
  if (!fn) throw DomainError("custom transform: empty function");
  TransformSpec s;
  s.id = TransformId::custom;
  s.fn = std::move(fn);
  s.analyticity = a;
  return s;
}

std::string TransformSpec::name() const {
  std::ostringstream os;
  switch (id) {
    case TransformId::dickman: return "dickman";
    case TransformId::watterson: return "watterson";
    case TransformId::theta_family: os << "theta(" << theta << ")"; return os.str();
    case TransformId::cycle_cdf: os << "cycle-cdf(" << b << ")"; return os.str();
    case TransformId::halfnormal: return "halfnormal";
    case TransformId::rayleigh: return "rayleigh";
    case TransformId::erfc_gauss: return "erfc-gauss";
    case TransformId::halfnormal_root: return "halfnormal-root";
    case TransformId::custom: return "custom";
  }
  return "unknown";
}

cplx TransformSpec::operator()(cplx eta) const {
  const double r2 = std::numbers::sqrt2;
  switch (id) {
    case TransformId::dickman:
      return std::exp(-specfun::e1(eta)) / eta;
    case TransformId::watterson:
      return std::sqrt(kPi) * std::exp(-0.5 * specfun::e1(eta)) / std::sqrt(eta);
    case TransformId::theta_family:
      return std::tgamma(theta) * std::exp(-theta * specfun::e1(eta)) * std::pow(eta, -theta);
    case TransformId::cycle_cdf:
      return std::exp(-specfun::e1(std::sqrt(2.0 * b * eta))) / std::sqrt(eta);
    case TransformId::halfnormal:
      return erfcx_scaled(eta, r2);
    case TransformId::rayleigh:
      return 1.0 - std::sqrt(kPi / 2.0) * eta * erfcx_scaled(eta, r2);
    case TransformId::erfc_gauss:
      return erfcx_scaled(eta, std::sqrt(kPi));
    case TransformId::halfnormal_root:
      return std::sqrt(erfcx_scaled(eta, r2));
    case TransformId::custom:
      return fn(eta);
  }
  return 0.0;
}

cplx forward_laplace(const std::function<double(double)>& f, cplx eta, double tol) {
  if (!(eta.real() > 0.0)) throw DomainError("forward_laplace: Re eta must be positive");
  if (!(tol > 0.0)) throw DomainError("forward_laplace: tol must be positive");
  auto integrand = [&](double x) { return std::exp(-eta * x) * f(x); };
  const quad::Tolerance panel_tol{tol / 512.0, 1e-14};
  auto panel = [&](double a, double b) {
    return quad::integrate(integrand, a, b, panel_tol, 2000).value;
  };
  const double small = tol / 100.0;

  // Toward 0: [2^-j-1, 2^-j], stopping once the contributions fall off
  // geometrically below the tolerance.
  cplx total = 0.0;
  double prev = -1.0;
  bool done = false;
  for (int j = 0; j < 400 && !done; ++j) {
    const double b = std::ldexp(1.0, -j);
    const cplx c = panel(0.5 * b, b);
    total += c;
    const double mag = std::abs(c);
    if (mag < small) {
      const double q = prev > 0.0 ? mag / prev : 0.0;
      if (q < 0.95 && mag * q / (1.0 - q) < small) done = true;
    }
    prev = mag;
  }
  if (!done) throw AccuracyError("forward_laplace: no convergence at the origin");

  // Toward infinity: [2^j, 2^j+1] until both the contribution and the
  // e^{-Re(eta) x} envelope are negligible.
  done = false;
  for (int j = 0; j < 60 && !done; ++j) {
    const double a = std::ldexp(1.0, j);
    const cplx c = panel(a, 2.0 * a);
    total += c;
    const double envelope = std::exp(-eta.real() * 2.0 * a) / eta.real();
    if (std::abs(c) < small && envelope < small) done = true;
  }
  if (!done) throw AccuracyError("forward_laplace: tail does not decay");
  return total;
}

Inversion invert(const TransformSpec& spec, double xi, Method method, double tol) {
  if (!(xi > 0.0 && std::isfinite(xi))) throw DomainError("invert: xi must be positive");
  if (method == Method::automatic) {
    method = spec.analyticity == Analyticity::branch_cut ? Method::talbot : Method::bromwich;
  }
  if (method == Method::talbot && spec.analyticity == Analyticity::entire) {
    throw MethodMismatchError("invert: " + spec.name() +
                              " grows like exp(eta^2) on the negative axis; Talbot diverges");
  }
  if (method == Method::bromwich && spec.analyticity == Analyticity::branch_cut) {
    throw MethodMismatchError("invert: " + spec.name() +
                              " has a branch cut on the negative axis; use Talbot");
  }

  Inversion out;
  out.method = method;
  double hi = 0.0, lo = 0.0;
  if (method == Method::talbot) {
    out.nodes = kTalbotNodes;
    switch (spec.id) {
      case TransformId::dickman:
      case TransformId::watterson:
      case TransformId::theta_family:
        hi = theta_talbot(spec.theta, xi, kTalbotNodes);
        lo = theta_talbot(spec.theta, xi, kTalbotCheck);
        break;
      default:
        hi = talbot(spec, xi, kTalbotNodes);
        lo = talbot(spec, xi, kTalbotCheck);
    }
  } else {
    const bool root = spec.id == TransformId::halfnormal_root;
    // erfc has zeros near arg z = +-3pi/4; the square root needs a narrower
    // hyperbola to keep its branch points outside.
    const double alpha = root ? kPi / 8.0 : 3.0 * kPi / 16.0;
    out.nodes = 2 * kHyperNodes + 1;
    hi = hyperbolic(spec, xi, kHyperNodes, alpha);
    lo = hyperbolic(spec, xi, kHyperCheck, alpha);
    if (root) tol = std::max(tol, kRootTol);
  }
  out.value = hi;
  out.error = std::abs(hi - lo);
  if (!std::isfinite(hi) || out.error > tol) {
    std::ostringstream msg;
    msg << "invert: " << spec.name() << " at xi = " << xi << " error estimate " << out.error
        << " exceeds " << tol;
    throw AccuracyError(msg.str());
  }
  return out;
}

double hk_closed_form(int k, double xi) {
  if (k < 0 || k > 2) throw DomainError("hk_closed_form: only k = 0, 1, 2 are available");
  if (!(xi >= 0.0)) throw DomainError("hk_closed_form: xi must be >= 0");
  if (k == 0) return 1.0;
  if (xi < k) return 0.0;
  const double l = std::log(xi);
  if (k == 1) return l;
  return -kPi * kPi / 6.0 + l * l + 2.0 * specfun::dilog(1.0 / xi);
}

// ---------------------------------------------------------------------------

namespace {

constexpr int D = ConvolutionKernel::kDegree;
constexpr int kGauss = 24;

double cheb_node(double a, double b, int j) {
  return 0.5 * (a + b) + 0.5 * (b - a) * std::cos(kPi * j / D);
}

std::vector<double> cheb_coeffs(const std::vector<double>& f) {
  std::vector<double> c(D + 1);
  for (int m = 0; m <= D; ++m) {
    double s = 0.5 * (f[0] + (m % 2 == 0 ? f[D] : -f[D]));
    for (int j = 1; j < D; ++j) s += f[j] * std::cos(kPi * m * j / D);
    c[m] = 2.0 * s / D;
  }
  c[0] *= 0.5;
  c[D] *= 0.5;
  return c;
}

double cheb_eval(const std::vector<double>& c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (int m = D; m >= 1; --m) {
    const double b0 = 2.0 * t * b1 - b2 + c[m];
    b2 = b1;
    b1 = b0;
  }
  return c[0] + t * b1 - b2;
}

// Gauss-Legendre over [a, b] split at the given interior points.
template <class F>
double gl_split(const F& f, double a, double b, std::vector<double> cuts) {
  const auto& rule = quad::gauss_legendre(kGauss);
  cuts.push_back(a);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = std::max(cuts[i], a), hi = std::min(cuts[i + 1], b);
    if (hi > lo) sum += quad::fixed(f, lo, hi, rule);
  }
  return sum;
}

}  // namespace

ConvolutionKernel::ConvolutionKernel(int k_max, double xi_max) : k_max_(k_max), xi_max_(xi_max) {
  if (k_max < 1) throw DomainError("convolution kernel: k_max must be >= 1");
  if (!(xi_max >= 0.0 && std::isfinite(xi_max))) throw DomainError("convolution kernel: bad xi_max");
  tables_.resize(k_max);
  for (int k = 2; k <= k_max; ++k) {
    const int count = std::max(0, static_cast<int>(std::ceil(xi_max)) - k);
    Table& t = tables_[k - 1];
    t.panels.reserve(count);
    for (int j = 0; j < count; ++j) {
      const double a = k + j, b = a + 1.0;
      std::vector<double> f(D + 1);
      for (int i = 0; i <= D; ++i) {
        const double x = cheb_node(a, b, i);
        // h_k(x) = int_1^{x-k+1} h_{k-1}(x - t) / t dt; h_{k-1} is tabulated
        // per unit interval, so split where x - t is an integer.
        std::vector<double> cuts;
        for (int m = k; m < x - 1.0; ++m) cuts.push_back(x - m);
        f[i] = gl_split([&](double s) { return h(k - 1, x - s) / s; }, 1.0, x - k + 1.0, cuts);
      }
      t.panels.push_back(cheb_coeffs(f));
    }
  }
}

double ConvolutionKernel::eval(const Table& t, int k, double xi) const {
  auto j = static_cast<std::size_t>(std::floor(xi - k));
  if (j >= t.panels.size()) j = t.panels.size() - 1;
  const double a = k + static_cast<double>(j);
  return cheb_eval(t.panels[j], std::clamp(2.0 * (xi - a) - 1.0, -1.0, 1.0));
}

double ConvolutionKernel::h(int k, double xi) const {
  if (k < 1 || k > k_max_) throw DomainError("convolution kernel: k out of range");
  if (xi < k) return 0.0;
  if (k == 1) return 1.0 / xi;
  if (xi > std::max(xi_max_, static_cast<double>(k))) {
    throw OutOfRangeError("convolution kernel: xi beyond the tabulated range");
  }
  if (xi == k) return 0.0;
  return eval(tables_[k - 1], k, xi);
}

double ConvolutionKernel::cumulative(int k, double xi) const {
  if (k == 0) return xi >= 0.0 ? 1.0 : 0.0;
  if (xi <= k) return 0.0;
  if (k == 1) return std::log(xi);
  std::vector<double> cuts;
  for (int m = k + 1; m < xi; ++m) cuts.push_back(m);
  return gl_split([&](double s) { return h(k, s); }, k, xi, cuts);
}

double ConvolutionKernel::half_order(int k, double xi) const {
  if (k == 0) return 1.0;
  if (xi <= k) return 0.0;
  // Substituting t = xi - u^2 removes the (xi - t)^{-1/2} singularity.
  std::vector<double> cuts;
  for (int m = k + 1; m < xi; ++m) cuts.push_back(std::sqrt(xi - m));
  const double top = std::sqrt(xi - k);
  return 2.0 * std::sqrt(xi) * gl_split([&](double u) { return h(k, xi - u * u); }, 0.0, top, cuts);
}

double convolve_h(int k, double xi) {
  if (k < 1) throw DomainError("convolve_h: k must be >= 1");
  if (xi < k) return 0.0;
  if (k == 1) return 1.0 / xi;
  return ConvolutionKernel(k, xi).h(k, xi);
}

double convolve_h_cumulative(int k, double xi) {
  if (k < 0) throw DomainError("convolve_h_cumulative: k must be >= 0");
  if (k == 0) return xi >= 0.0 ? 1.0 : 0.0;
  if (xi <= k) return 0.0;
  return ConvolutionKernel(k, xi).cumulative(k, xi);
}

double stepanov_series(double a, SeriesKind kind) {
  if (!(a > 0.0 && a <= 1.0)) throw DomainError("stepanov_series: a must lie in (0, 1]");
  const double xi = 1.0 / a;
  const int top = static_cast<int>(std::floor(xi));
  if (top > 64) throw DomainError("stepanov_series: a below 1/64 is not supported");
  const ConvolutionKernel kernel(std::max(top, 1), xi);
  double sum = 0.0;
  double coef = 1.0;
  for (int k = 0; k <= top; ++k) {
    if (k > 0) coef *= (kind == SeriesKind::permutation ? -1.0 : -0.5) / k;
    sum += coef * (kind == SeriesKind::permutation ? kernel.cumulative(k, xi)
                                                   : kernel.half_order(k, xi));
  }
  return sum;
}

double cycle_cdf_contour(double b) {
  if (!(b > 0.0 && std::isfinite(b))) throw DomainError("cycle_cdf_contour: b must be positive");
  const auto inv = invert(TransformSpec::cycle_cdf(b), 1.0 / b, Method::talbot, 1e-9);
  return std::sqrt(kPi / b) * inv.value;
}

DivisibilityReport divisibility_report(const std::vector<double>& eta_grid) {
  DivisibilityReport rep;
  const double sp2 = std::sqrt(kPi / 2.0);
  const double s2p = std::sqrt(2.0 / kPi);
  auto lower_inv = [&](double x) {
    return x > 0.0 ? std::pow(2.0, 0.25) / (std::pow(kPi, 0.75) * std::sqrt(x)) * std::exp(-s2p * x)
                   : 0.0;
  };
  auto upper_inv = [&](double x) {
    return x > 0.0 ? 1.0 / (std::pow(2.0 * kPi, 0.25) * std::sqrt(x)) * std::exp(-sp2 * x) : 0.0;
  };
  for (double eta : eta_grid) {
    if (!(eta > 0.0)) throw DomainError("divisibility_report: grid values must be positive");
    DivisibilityRow row;
    row.eta = eta;
    const double hn = specfun::erfcx(cplx(eta / std::numbers::sqrt2, 0.0)).real();
    row.lower = kPi / (std::sqrt(2.0 * kPi) + kPi * eta);
    row.center = sp2 * hn;
    row.upper = kPi / (std::sqrt(2.0 * kPi) + 2.0 * eta);
    row.bounds_hold = row.lower < row.center && row.center < row.upper;
    const double ray = 1.0 - sp2 * eta * hn;
    const double approx = specfun::erfcx(cplx(eta / std::sqrt(kPi), 0.0)).real();
    const double exact = std::sqrt(ray);
    row.approx_rel_error = std::abs(approx - exact) / exact;
    const double lo_t = 1.0 / std::sqrt(1.0 + sp2 * eta);
    const double up_t = 1.0 / std::sqrt(1.0 + s2p * eta);
    row.lower_inverse_error = std::abs(forward_laplace(lower_inv, eta, 1e-10) - lo_t);
    row.upper_inverse_error = std::abs(forward_laplace(upper_inv, eta, 1e-10) - up_t);
    rep.all_bounds_hold = rep.all_bounds_hold && row.bounds_hold;
    rep.max_approx_rel_error = std::max(rep.max_approx_rel_error, row.approx_rel_error);
    rep.max_inverse_error =
        std::max({rep.max_inverse_error, row.lower_inverse_error, row.upper_inverse_error});
    rep.rows.push_back(row);
  }
  const auto root = TransformSpec::halfnormal_root();
  rep.root_inverse_small = invert(root, 0.01, Method::bromwich).value;
  rep.root_inverse_one = invert(root, 1.0, Method::bromwich).value;
  rep.root_ratio = rep.root_inverse_small / rep.root_inverse_one;
  return rep;
}

}  // namespace rmap::laplace
