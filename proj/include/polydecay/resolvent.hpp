#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "json.hpp"
#include "polydecay/common.hpp"
#include "polydecay/zoo.hpp"

namespace polydecay::resolvent {

/// Evaluates R(z, A) = (z - A)^{-1} repeatedly. A is split into its
/// irreducible diagonal blocks and each block is reduced once to complex
/// Schur form Q T Q*, so every subsequent evaluation only touches triangular
/// factors. All norms are spectral (ℓ²) norms.
class ResolventEvaluator {
 public:
  explicit ResolventEvaluator(const ComplexMatrix& a);

  Index dim() const { return dim_; }

  /// ‖R(z, A)‖ = max over blocks of 1/σ_min(z - T_b).
  double norm(Complex z) const;

  /// R(z, A)^k X, in the original coordinates.
  ComplexMatrix apply_power(Complex z, int k, const ComplexMatrix& x) const;

  /// 1/min |z - λ| over the spectrum.
  double normal_lower_bound(Complex z) const;

  const ComplexVector& eigenvalues() const { return eigs_; }

 private:
  struct Block {
    std::vector<Index> indices;
    ComplexMatrix q;  // Schur vectors
    ComplexMatrix t;  // upper triangular
    bool diagonal = false;
  };
  double block_norm(const Block& b, Complex z) const;

  Index dim_ = 0;
  std::vector<Block> blocks_;
  ComplexVector eigs_;
};

struct EnvelopeFit {
  double beta = 0.0;
  double c = 1.0;
  double residual = 0.0;
};

/// One-sided envelope fit log n_j <= log c + β log(1+|ξ_j|). β minimizes the
/// mean height of the log-envelope over the selection window (the slope of the
/// upper convex hull at the window midpoint); c is then the smallest constant
/// making the envelope dominate every sample passed in.
/// `window_max` restricts the β selection to 1 <= |ξ| <= window_max (falls
/// back to |ξ| >= 1 when the window holds fewer than two distinct abscissae).
EnvelopeFit fit_growth_exponent(std::span<const double> xi, std::span<const double> norms,
                                double window_max = std::numeric_limits<double>::infinity());

/// Generic variant used for time-domain growth fits: log y_j <= log c + β u_j
/// with abscissae u already transformed. β is constrained to [beta_min, ∞).
EnvelopeFit fit_envelope(std::span<const double> u, std::span<const double> log_y, double beta_min);

struct ResolventProfile {
  std::vector<double> xi_grid;
  std::vector<double> norms;
  std::vector<double> norms_lower;  // equals norms when exact (space_p = 2)
  bool exact = true;
  bool fitted = true;  // false when the grid has < 8 points with |ξ| >= 1
  double beta_hat = 0.0;
  double c_hat = 1.0;
  double fit_residual = 0.0;
  double window_max = 0.0;  // upper end of the β-selection window

  double envelope(double xi) const;
  void write_csv(std::ostream& os) const;
  nlohmann::json to_json() const;
};

/// Default axis grid: linear on [-2, 2], ±logspace(-1, 4) with 64 points per
/// decade and the spectral ordinates Im λ with |Im λ| <= 1e4.
std::vector<double> default_grid(const ComplexVector& eigenvalues);

struct SweepOptions {
  bool refine = true;       // trisection near local maxima
  double refine_tol = 0.05;  // neighbour relative difference target
  int max_rounds = 12;
  std::size_t max_points = 40000;
};

ResolventProfile sweep_imaginary_axis(const zoo::GeneratorModel& model, std::vector<double> grid,
                                      const SweepOptions& opts = {});
ResolventProfile sweep_imaginary_axis(const zoo::GeneratorModel& model, const SweepOptions& opts = {});

struct HalfPlaneReport {
  double max_ratio = 0.0;
  Complex worst_lambda{0.0, 0.0};
  std::size_t samples = 0;
  bool pass = false;  // max_ratio <= 1.05
};

/// Samples λ in {0 < Re λ <= 1e3, |λ| <= 1e4} on vertical lines, arcs and
/// near spectral ordinates, and compares ‖R(λ, A)‖ against c(1+|λ|)^β.
HalfPlaneReport verify_half_plane_bound(const zoo::GeneratorModel& model, double beta, double c,
                                        std::size_t sample_count, std::uint64_t seed);

struct RateTable {
  double beta = 0.0;
  double p = 2.0;
  double rho = 0.0;
  double tau_main = 0.0;
  double tau_old = 0.0;  // open threshold: rates need τ > tau_old
  double tau_log = 0.0;
  double sigma_log_threshold = 0.0;  // log(t)^σ loss requires σ > this
  double tau_bounded = 0.0;
  double bounded_log_exponent = 0.0;  // equals ρ; only for bounded semigroups

  nlohmann::json to_json() const;
};

RateTable predict_decay_rates(double beta, double p, double rho);

}  // namespace polydecay::resolvent
