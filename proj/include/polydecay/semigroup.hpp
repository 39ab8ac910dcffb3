#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "polydecay/common.hpp"
#include "polydecay/linalg.hpp"
#include "polydecay/zoo.hpp"

namespace polydecay::semigroup {

/// n points geometrically spaced on [t0, t1].
std::vector<double> geometric_grid(double t0, double t1, std::size_t n);

/// e^{tA} kept in block form. Propagates batches of vectors along a time
/// grid by chaining the step exponentials e^{(t_{j+1}-t_j)A}.
class Propagator {
 public:
  explicit Propagator(const zoo::GeneratorModel& model);

  /// Norms ‖T(t_j) x_c‖ in the model's ambient ℓ^p, indexed [j][c].
  std::vector<std::vector<double>> orbit_norms(const ComplexMatrix& x, const std::vector<double>& t_grid) const;

  /// ‖T(t_j)‖ (spectral norm; exact ℓ^1/ℓ^∞ norms for space_p ∈ {1, ∞}).
  std::vector<double> operator_norms(const std::vector<double>& t_grid) const;

  const linalg::BlockDiagonal& blocks() const { return blocks_; }

 private:
  linalg::BlockDiagonal blocks_;
  double space_p_;
};

struct OrbitRecord {
  std::vector<double> t_grid;
  std::string vector_id;
  std::vector<double> norms;
  double rho_hat = 0.0;
  bool rho_defined = true;  // false for the zero orbit (rho_hat is NaN then)
  double crosscheck_error = 0.0;  // max relative deviation from the ODE integrator
  std::size_t crosscheck_points = 0;

  void write_csv(std::ostream& os, double rho = 0.0) const;  // t, norm, scaled_norm = t^rho norm
  nlohmann::json to_json() const;
};

/// Default time grid: 64 geometric points on [1, 100].
std::vector<double> default_t_grid();

OrbitRecord orbit(const zoo::GeneratorModel& model, const ComplexVector& x, const std::vector<double>& t_grid,
                  const std::string& vector_id = "x", bool crosscheck = true);

struct GrowthBound {
  double omega_hat = 0.0;
  double m_hat = 1.0;
  double poly_gamma_hat = 0.0;
  double poly_m_hat = 1.0;
  std::vector<double> t_grid;
  std::vector<double> norms;
};

GrowthBound growth_bound_estimate(const zoo::GeneratorModel& model, const std::vector<double>& t_grid);

/// K(t, x; X, D(A^m)) with ‖b‖_{D(A^m)} = ‖b‖ + ‖A^m b‖. The operator data
/// (A^m and the eigendecomposition of (A^m)*A^m per block) is set up once.
class KFunctional {
 public:
  KFunctional(const zoo::GeneratorModel& model, int m);

  struct Result {
    double value = 0.0;
    double relaxation_value = 0.0;  // sum-form value at the quadratic minimizer
    std::vector<double> history;    // sum-form values along the refinement
    bool approximate = false;       // non-Hilbert ambient norm
  };

  Result evaluate(double t, const ComplexVector& x) const;
  double operator()(double t, const ComplexVector& x) const { return evaluate(t, x).value; }

  /// ‖x‖ + ‖A^m x‖.
  double domain_norm(const ComplexVector& x) const;
  int m() const { return m_; }
  double space_p() const { return space_p_; }

 private:
  struct Block {
    std::vector<Index> indices;
    ComplexMatrix am;  // A^m restricted to the block
    ComplexMatrix v;   // eigenvectors of (A^m)*A^m
    RealVector g;      // its eigenvalues
  };
  Result evaluate_hilbert(double t, const ComplexVector& y, const RealVector& g) const;
  Result evaluate_general(double t, const ComplexVector& x) const;
  ComplexVector to_eigen(const ComplexVector& x) const;
  ComplexVector from_eigen(const ComplexVector& y) const;
  RealVector all_g() const;

  double space_p_;
  int m_;
  Index dim_;
  std::vector<Block> blocks_;
};

/// Discrete norm of D_A(τ, q) built on the dyadic samples K(2^{-j}, x),
/// j = -40..40, with m = ceil(τ)+1 and weights 2^{jτ/m}.
class InterpolationNorm {
 public:
  InterpolationNorm(const zoo::GeneratorModel& model, double tau, int m = 0);

  static constexpr int kJ = 40;

  std::vector<double> dyadic_k(const ComplexVector& x) const;       // K(2^{-j}, x), j = -J..J
  double aggregate(const std::vector<double>& k, double q) const;   // weighted ℓ^q
  double operator()(const ComplexVector& x, double q) const { return aggregate(dyadic_k(x), q); }
  double truncation_bound(const ComplexVector& x) const;

  double tau() const { return tau_; }
  int m() const { return k_.m(); }
  const KFunctional& k_functional() const { return k_; }

 private:
  double tau_;
  KFunctional k_;
};

struct InterpolationResult {
  double value = 0.0;
  int m = 0;
  double truncation_bound = 0.0;
  double reiteration_ratio = 1.0;  // value(m) / value(m+1) when checked
  bool reiteration_ok = true;      // ratio within [1/4, 4]
};

double k_functional(const zoo::GeneratorModel& model, int m, double t, const ComplexVector& x);
InterpolationResult interpolation_norm(const zoo::GeneratorModel& model, double tau, double q, const ComplexVector& x,
                                       bool check_reiteration = true);
double fractional_domain_norm(const zoo::GeneratorModel& model, double tau, const ComplexVector& x);

/// Norm used to measure initial data in the decay checks.
struct InterpNorm {
  double q = 2.0;
};
struct FractionalNorm {};
using NormKind = std::variant<InterpNorm, FractionalNorm>;
std::string describe(const NormKind& kind);

struct DecayOptions {
  double rho = 0.0;
  double p = 2.0;
  NormKind norm = InterpNorm{2.0};
  std::size_t sample_count = 250;
  std::uint64_t seed = 1;
  std::vector<double> t_grid = default_t_grid();
  std::optional<double> beta;       // defaults to beta_analytic, else a fitted value
  std::optional<double> tau_override;
};

struct DecayReport {
  std::string model_tag;
  double rho = 0.0;
  double p = 2.0;
  double beta = 0.0;
  double tau_used = 0.0;
  std::string norm_kind;
  double sup_constant = 0.0;
  std::string worst_vector;
  double worst_t = 0.0;
  std::vector<double> ladder_trend;
  std::vector<int> ladder_dims;
  std::vector<double> ladder_ratios;
  std::string verdict;  // pass | fail | diverging
  std::vector<double> worst_orbit;  // t^0 norms of the worst sample over t_grid, normalized by its Z-norm
  std::vector<double> t_grid;

  void write_csv(std::ostream& os) const;  // t, norm, scaled_norm
  nlohmann::json to_json() const;
};

DecayReport decay_verification(const zoo::GeneratorModel& model, const DecayOptions& opts);

/// Runs decay_verification on each model and classifies the trend of the
/// sup constants across consecutive rungs: pass iff every ratio <= 2,
/// diverging iff every ratio >= 1.5 (and not pass), else fail.
DecayReport decay_ladder(const std::vector<zoo::GeneratorModel>& models, const DecayOptions& opts);

struct SharpnessRow {
  double fraction = 1.0;
  double tau = 0.0;
  std::vector<double> sup_constants;
  std::vector<double> ratios;
  std::string classification;  // diverging | bounded | inconclusive
};

struct SharpnessReport {
  zoo::FamilySpec family;
  std::vector<int> dims;
  double beta = 0.0;
  double tau_full = 0.0;
  std::string norm_kind;
  std::vector<SharpnessRow> rows;
  nlohmann::json to_json() const;
};

/// ρ = 0, p = 2. For each fraction φ the smoothness exponent is φ·τ with
/// τ = β̂ fitted on the largest rung; diverging iff every consecutive ratio
/// >= 1.5, bounded iff every ratio <= 1.25.
SharpnessReport sharpness_probe(const zoo::FamilySpec& family, const std::vector<double>& fractions,
                                const std::vector<int>& dims, const NormKind& norm = FractionalNorm{},
                                std::size_t sample_count = 250, std::uint64_t seed = 1);

struct ResolventPowerReport {
  std::string model_tag;
  double beta = 0.0;
  int n = 0;
  double q = 2.0;
  double tau = 0.0;
  std::vector<double> sup_ratio_per_k;  // k = 0..n+1
  nlohmann::json to_json() const;
};

ResolventPowerReport verify_resolvent_powers(const zoo::GeneratorModel& model, double beta, int n, double q,
                                             std::size_t sample_vectors, std::uint64_t seed);

struct ResolventPowerLadder {
  std::vector<int> dims;
  std::vector<ResolventPowerReport> rungs;
  std::vector<double> max_ratio_per_k;  // max over consecutive rungs of sup_k(d_{i+1}) / sup_k(d_i)
  bool stable = false;                  // every per-k trend ratio within factor 2
  nlohmann::json to_json() const;
};

ResolventPowerLadder resolvent_power_ladder(const std::vector<zoo::GeneratorModel>& models, double beta, int n,
                                            double q, std::size_t sample_vectors, std::uint64_t seed);

/// Initial-vector panel: canonical vectors, seeded Gaussians and smoothed
/// vectors (-A)^{-τ} e_j, each normalized in ℓ². Columns carry ids.
struct Panel {
  ComplexMatrix vectors;
  std::vector<std::string> ids;
};
Panel make_panel(const zoo::GeneratorModel& model, double tau, std::size_t count, std::uint64_t seed);

}  // namespace polydecay::semigroup
