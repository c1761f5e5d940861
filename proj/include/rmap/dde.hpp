#pragma once

// Method-of-steps solver for the delay equations
//
//   x g'(x) + (1 - theta) g(x) + theta (g(x - 1) - q(x - 1)) = 0,   x > 1,
//
// covering the theta family (q = 0, g = x^{theta-1} on (0, 1]; theta = 1 is
// Dickman's rho, theta = 1/2 is Watterson's sigma) and the generalized Dickman
// functions rho_r (theta = 1, q = rho_{r-1}, rho_r = 1 on [0, 1], rho_0 = 0).

#include <array>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

namespace rmap::dde {

enum class DdeKind { theta_family, generalized_dickman };

struct DdeSpec {
  DdeKind kind = DdeKind::theta_family;
  double theta = 1.0;  // theta family only
  int rank = 1;        // generalized Dickman only
  double x_max = 64.0;
  double tol = 1e-12;

  static DdeSpec theta_family(double theta, double x_max = 64.0, double tol = 1e-12);
  static DdeSpec generalized_dickman(int rank, double x_max = 64.0, double tol = 1e-12);

  /// Throws DomainError unless x_max >= 1, tol in (0, 1e-6], theta > 0, rank >= 1.
  void validate() const;
  /// Effective theta of the equation (1 for generalized Dickman).
  double equation_theta() const { return kind == DdeKind::theta_family ? theta : 1.0; }
};

/// A solved delay equation. Each unit interval [k, k+1] is stored in the
/// variable s = sqrt(x - k) as a list of panels carrying degree-16 Chebyshev
/// interpolants; the head (0, 1] is evaluated from the initial condition.
/// Immutable once built.
class PiecewiseSolution {
 public:
  static constexpr int kDegree = 16;

  struct Panel {
    double s0 = 0.0;
    double s1 = 0.0;
    std::array<double, kDegree + 1> coeffs{};
  };

  struct Piece {
    int k = 0;               // covers [k, k + 1]
    std::vector<double> breaks;  // panel boundaries in s, breaks.front() = 0, back() = 1
    std::vector<Panel> panels;
    double scale = 0.0;      // max |g| over the piece
    bool zero = false;       // underflowed below 1e-300
  };

  PiecewiseSolution(DdeSpec spec, std::vector<Piece> pieces);

  const DdeSpec& spec() const { return spec_; }
  double x_max() const { return spec_.x_max; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// g(x): 0 for x < 0, the initial condition on [0, 1], interpolant beyond.
  /// Throws OutOfRangeError for x > x_max.
  double operator()(double x) const;
  double eval(double x) const { return (*this)(x); }

  /// g'(x) from the interpolant (x > 1), or from the head on (0, 1).
  double derivative(double x) const;

  /// Value of the head g on (0, 1].
  double head(double x) const;
  std::string head_description() const;

  /// Largest jump between neighbouring pieces and panels.
  double continuity_defect() const;

  /// x g'(x) + (1 - theta) g(x) + theta (g(x-1) - q(x-1)); needs q for ranks > 1.
  double residual(double x, const PiecewiseSolution* lower_rank = nullptr) const;

 private:
  double eval_piece(const Piece& piece, double s) const;
  double eval_piece_ds(const Piece& piece, double s) const;

  DdeSpec spec_;
  std::vector<Piece> pieces_;
};

PiecewiseSolution solve_theta_dde(const DdeSpec& spec);

/// rho_r for spec.rank; lower ranks are solved internally.
PiecewiseSolution solve_generalized_dickman(const DdeSpec& spec);

/// All ranks 1..spec.rank, index i holding rho_{i+1}.
std::vector<PiecewiseSolution> solve_generalized_dickman_ranks(const DdeSpec& spec);

PiecewiseSolution solve(const DdeSpec& spec);

/// Dickman rho on [0, 3] from its elementary and dilogarithm pieces.
double rho_closed_form(double x);

/// Watterson sigma on (0, 2].
double sigma_closed_form(double x);

/// sqrt(x) sigma(x) from a theta = 1/2 solution.
double sigma_tilde(const PiecewiseSolution& sigma, double x);

}  // namespace rmap::dde
