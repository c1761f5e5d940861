#include "rmap/dde.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "rmap/error.hpp"
#include "rmap/quadrature.hpp"
#include "rmap/specfun.hpp"

namespace rmap::dde {

namespace {

constexpr int N = PiecewiseSolution::kDegree;
using Coeffs = std::array<double, N + 1>;
using Piece = PiecewiseSolution::Piece;
using Panel = PiecewiseSolution::Panel;

constexpr double kUnderflow = 1e-300;
constexpr int kGeometricLevels = 27;  // first panel [0, 2^-27] is below double resolution in x
constexpr int kMaxPanels = 2000;

// Chebyshev-Lobatto points cos(pi j / N) mapped to [a, b], j = 0..N.
double lobatto(double a, double b, int j) {
  return 0.5 * (a + b) + 0.5 * (b - a) * std::cos(std::numbers::pi * j / N);
}

Coeffs cheb_fit(const std::array<double, N + 1>& f) {
  Coeffs c{};
  for (int m = 0; m <= N; ++m) {
    double s = 0.5 * (f[0] + (m % 2 == 0 ? f[N] : -f[N]));
    for (int j = 1; j < N; ++j) s += f[j] * std::cos(std::numbers::pi * m * j / N);
    c[m] = 2.0 * s / N;
  }
  c[0] *= 0.5;
  c[N] *= 0.5;
  return c;
}

double clenshaw(const Coeffs& c, double t) {
  double b1 = 0.0, b2 = 0.0;
  for (int m = N; m >= 1; --m) {
    const double b0 = 2.0 * t * b1 - b2 + c[m];
    b2 = b1;
    b1 = b0;
  }
  return c[0] + t * b1 - b2;
}

double clenshaw_derivative(const Coeffs& c, double t) {
  Coeffs d{};
  // d_{m-1} = d_{m+1} + 2 m c_m
  double next = 0.0, next2 = 0.0;
  for (int m = N; m >= 1; --m) {
    const double v = next2 + 2.0 * m * c[m];
    d[m - 1] = v;
    next2 = next;
    next = v;
  }
  d[0] *= 0.5;
  return clenshaw(d, t);
}

std::vector<double> default_breaks() {
  std::vector<double> b;
  b.push_back(0.0);
  for (int j = kGeometricLevels; j >= 1; --j) b.push_back(std::ldexp(1.0, -j));
  b.push_back(0.75);
  b.push_back(1.0);
  return b;
}

std::size_t panel_index(const std::vector<double>& breaks, double s) {
  auto it = std::upper_bound(breaks.begin(), breaks.end(), s);
  std::size_t idx = it == breaks.begin() ? 0 : static_cast<std::size_t>(it - breaks.begin()) - 1;
  return std::min(idx, breaks.size() - 2);
}

double piece_value(const Piece& piece, double s) {
  if (piece.zero) return 0.0;
  const auto& p = piece.panels[panel_index(piece.breaks, s)];
  const double t = (2.0 * s - p.s0 - p.s1) / (p.s1 - p.s0);
  return clenshaw(p.coeffs, std::clamp(t, -1.0, 1.0));
}

// Evaluator for g on the previous unit interval [k-1, k] in terms of
// s = sqrt(t - k), where t - 1 = (k - 1) + s^2.
struct History {
  const Piece* piece = nullptr;  // nullptr: head segment [0, 1]
  std::function<double(double)> head;  // head(y) for y in [0, 1]
  double operator()(double s) const {
    return piece ? piece_value(*piece, s) : head(s * s);
  }
  std::vector<double> breaks() const {
    return piece ? piece->breaks : std::vector<double>{0.0, 1.0};
  }
};

quad::Tolerance inner_tol(double scale) {
  return {std::max(1e-17 * scale, 1e-305), 2e-15};
}

class StepBuilder {
 public:
  StepBuilder(const DdeSpec& spec, double tol) : spec_(spec), tol_(tol) {}

  // Builds the piece on [k, k+1] given g(k) and the history evaluators.
  Piece build(int k, double gk, const History& g_prev, const History* q_prev) {
    const double theta = spec_.equation_theta();
    const bool analytic_head =
        k == 1 && spec_.kind == DdeKind::theta_family;

    std::function<double(double)> value;
    std::vector<double> cb;
    std::vector<double> left_sum;
    std::vector<double> right_sum;
    std::function<double(double)> forcing;
    std::function<double(double)> weighted;
    const double fscale = std::abs(gk) + 1e-300;
    auto merged_breaks = [&] {
      cb = g_prev.breaks();
      if (q_prev) {
        auto qb = q_prev->breaks();
        cb.insert(cb.end(), qb.begin(), qb.end());
        std::sort(cb.begin(), cb.end());
        cb.erase(std::unique(cb.begin(), cb.end()), cb.end());
      }
    };
    auto integral = [&](const std::function<double(double)>& f, double a, double b) {
      return quad::integrate(f, a, b, inner_tol(fscale), 20000).value;
    };
    if (analytic_head) {
      // g(x) = x^{theta-1} [1 - J((x-1)^theta)],
      // J(Y) = int_0^Y (1 + y^{1/theta})^{-theta} dy.
      value = [theta](double s) {
        const double x = 1.0 + s * s;
        const double upper = std::pow(s * s, theta);
        double j = 0.0;
        if (upper > 0.0) {
          auto f = [theta](double y) { return std::pow(1.0 + std::pow(y, 1.0 / theta), -theta); };
          j = quad::integrate(f, 0.0, upper, inner_tol(upper), 20000).value;
        }
        return std::pow(x, theta - 1.0) * (1.0 - j);
      };
    } else if (!q_prev && k >= 2) {
      // With q = 0 the quantity x g(x) - theta int_{x-1}^x g is conserved and
      // equals 0, which gives the positive-weight form
      //   g(x) = theta x^{theta-1} [k^{-theta} int_{x-1}^k g
      //                             + int_{k-1}^{x-1} (k^{-theta} - (u+1)^{-theta}) g(u) du].
      // No subtraction occurs, so relative accuracy survives the
      // super-exponential decay.
      merged_breaks();
      const double kpow = std::pow(static_cast<double>(k), -theta);
      forcing = [&g_prev](double u) { return g_prev(u) * 2.0 * u; };
      weighted = [&g_prev, k, theta, kpow](double u) {
        const double w = -std::expm1(-theta * std::log1p(u * u / k));
        return kpow * w * g_prev(u) * 2.0 * u;
      };
      left_sum.assign(cb.size(), 0.0);
      right_sum.assign(cb.size(), 0.0);
      for (std::size_t j = 1; j < cb.size(); ++j) {
        left_sum[j] = left_sum[j - 1] + integral(weighted, cb[j - 1], cb[j]);
      }
      for (std::size_t j = cb.size() - 1; j >= 1; --j) {
        right_sum[j - 1] = right_sum[j] + integral(forcing, cb[j - 1], cb[j]);
      }
      value = [&, theta, kpow](double s) {
        const std::size_t j = panel_index(cb, s);
        double lower = left_sum[j];
        double upper = right_sum[j + 1];
        if (s > cb[j]) lower += integral(weighted, cb[j], s);
        if (s < cb[j + 1]) upper += integral(forcing, s, cb[j + 1]);
        const double x = k + s * s;
        return theta * std::pow(x, theta - 1.0) * (kpow * upper + lower);
      };
    } else {
      // Integrating factor: g(x) = x^{theta-1} [k^{1-theta} g(k)
      //   - theta int_k^x t^{-theta} (g(t-1) - q(t-1)) dt].
      forcing = [=, &g_prev](double u) {
        const double hist = g_prev(u) - (q_prev ? (*q_prev)(u) : 0.0);
        if (hist == 0.0) return 0.0;
        return std::pow(k + u * u, -theta) * hist * 2.0 * u;
      };
      merged_breaks();
      left_sum.assign(cb.size(), 0.0);
      for (std::size_t j = 1; j < cb.size(); ++j) {
        left_sum[j] = left_sum[j - 1] + integral(forcing, cb[j - 1], cb[j]);
      }
      const double base = std::pow(static_cast<double>(k), 1.0 - theta) * gk;
      value = [&, base, theta](double s) {
        const std::size_t j = panel_index(cb, s);
        double acc = left_sum[j];
        if (s > cb[j]) acc += integral(forcing, cb[j], s);
        const double x = k + s * s;
        return std::pow(x, theta - 1.0) * (base - theta * acc);
      };
    }

    Piece piece;
    piece.k = k;
    auto breaks = default_breaks();
    std::vector<Panel> panels;
    // Work list of [s0, s1] panels processed left to right.
    std::vector<std::pair<double, double>> todo;
    for (std::size_t i = breaks.size() - 1; i >= 1; --i) todo.emplace_back(breaks[i - 1], breaks[i]);
    while (!todo.empty()) {
      auto [a, b] = todo.back();
      todo.pop_back();
      std::array<double, N + 1> f{};
      double panel_scale = 0.0;
      for (int j = 0; j <= N; ++j) {
        f[j] = value(lobatto(a, b, j));
        panel_scale = std::max(panel_scale, std::abs(f[j]));
      }
      Panel p{a, b, cheb_fit(f)};
      const double tail = std::abs(p.coeffs[N]) + std::abs(p.coeffs[N - 1]);
      const double xwidth = b * b - a * a;
      const bool resolvable = xwidth > 4.0 * std::numeric_limits<double>::epsilon() * (k + 1);
      if (resolvable && tail > tol_ * panel_scale && panel_scale > kUnderflow) {
        if (static_cast<int>(panels.size() + todo.size()) >= kMaxPanels || b - a < 1e-12) {
          std::ostringstream msg;
          msg << "dde solver: tolerance " << tol_ << " not achieved on [" << k << ", " << k + 1
              << "]";
          throw AccuracyError(msg.str());
        }
        const double m = 0.5 * (a + b);
        todo.emplace_back(m, b);
        todo.emplace_back(a, m);
        continue;
      }
      piece.scale = std::max(piece.scale, panel_scale);
      panels.push_back(p);
    }
    piece.breaks.clear();
    for (const auto& p : panels) piece.breaks.push_back(p.s0);
    piece.breaks.push_back(1.0);
    piece.panels = std::move(panels);
    piece.zero = piece.scale < kUnderflow;
    return piece;
  }

 private:
  const DdeSpec& spec_;
  double tol_;
};

std::vector<Piece> solve_pieces(const DdeSpec& spec, const std::vector<Piece>* lower) {
  const int count = static_cast<int>(std::ceil(spec.x_max)) - 1;
  std::vector<Piece> pieces;
  pieces.reserve(std::max(count, 0));
  const double theta = spec.equation_theta();
  const bool has_lower = spec.kind == DdeKind::generalized_dickman && spec.rank >= 2;
  StepBuilder builder(spec, spec.tol);

  History g_prev;
  History q_prev;
  g_prev.head = spec.kind == DdeKind::theta_family
                    ? std::function<double(double)>([theta](double y) { return std::pow(y, theta - 1.0); })
                    : std::function<double(double)>([](double) { return 1.0; });
  q_prev.head = [](double) { return 1.0; };

  double gk = 1.0;
  for (int k = 1; k <= count; ++k) {
    if (!pieces.empty() && pieces.back().zero && !has_lower) {
      Piece z;
      z.k = k;
      z.breaks = {0.0, 1.0};
      z.panels = {Panel{0.0, 1.0, Coeffs{}}};
      z.zero = true;
      pieces.push_back(std::move(z));
      continue;
    }
    if (k >= 2) g_prev.piece = &pieces[k - 2];
    if (has_lower && k >= 2) q_prev.piece = &(*lower)[k - 2];
    Piece piece = builder.build(k, gk, g_prev, has_lower ? &q_prev : nullptr);
    gk = piece_value(piece, 1.0);
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

}  // namespace

DdeSpec DdeSpec::theta_family(double theta, double x_max, double tol) {
  DdeSpec s;
  s.kind = DdeKind::theta_family;
  s.theta = theta;
  s.x_max = x_max;
  s.tol = tol;
  return s;
}

DdeSpec DdeSpec::generalized_dickman(int rank, double x_max, double tol) {
  DdeSpec s;
  s.kind = DdeKind::generalized_dickman;
  s.rank = rank;
  s.theta = 1.0;
  s.x_max = x_max;
  s.tol = tol;
  return s;
}

void DdeSpec::validate() const {
  if (!(x_max >= 1.0) || !std::isfinite(x_max)) throw DomainError("dde: x_max must be >= 1");
  if (!(tol > 0.0 && tol <= 1e-6)) throw DomainError("dde: tol must lie in (0, 1e-6]");
  if (kind == DdeKind::theta_family && !(theta > 0.0 && std::isfinite(theta))) {
    throw DomainError("dde: theta must be positive");
  }
  if (kind == DdeKind::generalized_dickman && rank < 1) throw DomainError("dde: rank must be >= 1");
}

PiecewiseSolution::PiecewiseSolution(DdeSpec spec, std::vector<Piece> pieces)
    : spec_(spec), pieces_(std::move(pieces)) {}

double PiecewiseSolution::head(double x) const {
  if (x < 0.0) return 0.0;
  if (spec_.kind == DdeKind::generalized_dickman) return 1.0;
  const double theta = spec_.theta;
  if (x == 0.0) {
    if (theta < 1.0) return std::numeric_limits<double>::infinity();
    return theta == 1.0 ? 1.0 : 0.0;
  }
  return theta == 1.0 ? 1.0 : std::pow(x, theta - 1.0);
}

std::string PiecewiseSolution::head_description() const {
  std::ostringstream os;
  if (spec_.kind == DdeKind::generalized_dickman) {
    os << "rho_" << spec_.rank << "(x) = 1 on [0, 1]";
  } else {
    os << "g(x) = x^(" << spec_.theta << " - 1) on (0, 1]";
  }
  return os.str();
}

double PiecewiseSolution::eval_piece(const Piece& piece, double s) const {
  return piece_value(piece, s);
}

double PiecewiseSolution::eval_piece_ds(const Piece& piece, double s) const {
  if (piece.zero) return 0.0;
  const auto& p = piece.panels[panel_index(piece.breaks, s)];
  const double t = (2.0 * s - p.s0 - p.s1) / (p.s1 - p.s0);
  return clenshaw_derivative(p.coeffs, std::clamp(t, -1.0, 1.0)) * 2.0 / (p.s1 - p.s0);
}

double PiecewiseSolution::operator()(double x) const {
  if (std::isnan(x)) throw DomainError("dde eval: NaN argument");
  if (x > spec_.x_max) {
    std::ostringstream msg;
    msg << "dde eval: x = " << x << " exceeds x_max = " << spec_.x_max;
    throw OutOfRangeError(msg.str());
  }
  if (x <= 1.0) return head(x);
  auto k = static_cast<std::size_t>(std::floor(x));
  if (k > pieces_.size()) k = pieces_.size();
  const double s = std::sqrt(std::min(x - static_cast<double>(k), 1.0));
  return eval_piece(pieces_[k - 1], s);
}

double PiecewiseSolution::derivative(double x) const {
  if (x > spec_.x_max) throw OutOfRangeError("dde derivative: beyond x_max");
  if (x < 0.0) return 0.0;
  if (x < 1.0) {
    if (spec_.kind == DdeKind::generalized_dickman) return 0.0;
    return (spec_.theta - 1.0) * std::pow(x, spec_.theta - 2.0);
  }
  auto k = static_cast<std::size_t>(std::floor(x));
  if (k > pieces_.size()) k = pieces_.size();
  const double s = std::sqrt(std::min(x - static_cast<double>(k), 1.0));
  if (s == 0.0) throw DomainError("dde derivative: undefined at the integer knots");
  return eval_piece_ds(pieces_[k - 1], s) / (2.0 * s);
}

double PiecewiseSolution::continuity_defect() const {
  double worst = 0.0;
  double left = head(1.0);
  for (const auto& piece : pieces_) {
    worst = std::max(worst, std::abs(eval_piece(piece, 0.0) - left));
    for (std::size_t i = 1; i < piece.panels.size(); ++i) {
      const auto& a = piece.panels[i - 1];
      const auto& b = piece.panels[i];
      worst = std::max(worst, std::abs(clenshaw(a.coeffs, 1.0) - clenshaw(b.coeffs, -1.0)));
    }
    left = eval_piece(piece, 1.0);
  }
  return worst;
}

double PiecewiseSolution::residual(double x, const PiecewiseSolution* lower_rank) const {
  const double theta = spec_.equation_theta();
  double q = 0.0;
  if (spec_.kind == DdeKind::generalized_dickman && spec_.rank >= 2) {
    if (!lower_rank) throw DomainError("dde residual: rank > 1 needs the lower-rank solution");
    q = (*lower_rank)(x - 1.0);
  }
  return x * derivative(x) + (1.0 - theta) * (*this)(x) + theta * ((*this)(x - 1.0) - q);
}

PiecewiseSolution solve_theta_dde(const DdeSpec& spec) {
  if (spec.kind != DdeKind::theta_family) throw DomainError("solve_theta_dde: wrong spec kind");
  spec.validate();
  return PiecewiseSolution(spec, solve_pieces(spec, nullptr));
}

std::vector<PiecewiseSolution> solve_generalized_dickman_ranks(const DdeSpec& spec) {
  if (spec.kind != DdeKind::generalized_dickman) {
    throw DomainError("solve_generalized_dickman: wrong spec kind");
  }
  spec.validate();
  std::vector<PiecewiseSolution> out;
  out.reserve(spec.rank);
  for (int r = 1; r <= spec.rank; ++r) {
    auto s = DdeSpec::generalized_dickman(r, spec.x_max, spec.tol);
    const std::vector<Piece>* lower = r >= 2 ? &out.back().pieces() : nullptr;
    out.emplace_back(s, solve_pieces(s, lower));
  }
  return out;
}

PiecewiseSolution solve_generalized_dickman(const DdeSpec& spec) {
  auto all = solve_generalized_dickman_ranks(spec);
  return std::move(all.back());
}

PiecewiseSolution solve(const DdeSpec& spec) {
  return spec.kind == DdeKind::theta_family ? solve_theta_dde(spec)
                                            : solve_generalized_dickman(spec);
}

double rho_closed_form(double x) {
  if (!(x >= 0.0 && x <= 3.0)) throw DomainError("rho_closed_form: x must lie in [0, 3]");
  if (x <= 1.0) return 1.0;
  const double l = std::log(x);
  if (x <= 2.0) return 1.0 - l;
  return 1.0 - std::numbers::pi * std::numbers::pi / 12.0 - l + 0.5 * l * l +
         specfun::dilog(1.0 / x);
}

double sigma_closed_form(double x) {
  if (!(x > 0.0 && x <= 2.0)) throw DomainError("sigma_closed_form: x must lie in (0, 2]");
  if (x <= 1.0) return 1.0 / std::sqrt(x);
  return (1.0 - specfun::arctanh(std::sqrt(1.0 - 1.0 / x))) / std::sqrt(x);
}

double sigma_tilde(const PiecewiseSolution& sigma, double x) {
  const auto& s = sigma.spec();
  if (s.kind != DdeKind::theta_family || s.theta != 0.5) {
    throw DomainError("sigma_tilde: needs the theta = 1/2 solution");
  }
  if (x < 0.0) return 0.0;
  if (x == 0.0) return 1.0;
  return std::sqrt(x) * sigma(x);
}

}  // namespace rmap::dde
