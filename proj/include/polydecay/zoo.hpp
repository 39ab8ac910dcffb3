#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "polydecay/common.hpp"

namespace polydecay::zoo {

/// A finite-section generator A together with what is known about it
/// analytically. `beta_analytic` is the exponent in ‖R(λ,A)‖ ≲ (1+|λ|)^β on
/// the closed right half-plane, `omega_analytic` the exponential growth bound.
struct GeneratorModel {
  ComplexMatrix matrix;
  std::string family;
  std::map<std::string, double> params;
  std::optional<double> beta_analytic;
  std::optional<double> omega_analytic;
  bool is_normal = false;
  double space_p = 2.0;  // ambient ℓ^p norm

  Index dim() const { return matrix.rows(); }
  std::string tag() const;  // family plus dimension, for reports
};

GeneratorModel make_diagonal(std::span<const Complex> eigs, double space_p = 2.0);

/// λ_k = -k^{-α} + ik, k = 1..n: a normal contraction semigroup whose resolvent
/// grows like |ξ|^α along the imaginary axis.
GeneratorModel make_borichev_tomilov(double alpha, int n);

/// n upper-triangular 2×2 blocks [[iμ_k - a_k, c_k], [0, iμ_k - a_k]] with
/// μ_k = k·mu_spacing, a_k = k^{-a_decay}, c_k = k^{c_gain}. Non-normal; the
/// block resolvent peaks at c_k / a_k² near iμ_k and the orbits grow like
/// c_k t e^{-a_k t} before decaying.
GeneratorModel make_jordan_growth(double mu_spacing, double a_decay, double c_gain, int n);

/// Finite-difference damped wave [[0, I], [Δ_h, -diag(a)]] on n interior points
/// of (0, 1) with Dirichlet conditions. `damping` holds a(x_j), x_j = j/(n+1).
GeneratorModel make_damped_wave(int n, std::span<const double> damping);
GeneratorModel make_damped_wave(int n, const std::function<double(double)>& damping);

/// Named family with parameters, buildable at any truncation dimension.
/// Families: "diagonal" (uses `eigs`, ignores dim), "borichev_tomilov"
/// {alpha}, "jordan_growth" {mu_spacing, a_decay, c_gain},
/// "damped_wave" {damping_const, damping_amp}: a(x) = const + amp·sin(2πx).
struct FamilySpec {
  std::string family;
  std::map<std::string, double> params;
  std::vector<Complex> eigs;
  double space_p = 2.0;
};

GeneratorModel build(const FamilySpec& spec, int dim);
std::vector<GeneratorModel> truncation_ladder(const FamilySpec& spec, std::span<const int> dims);
std::vector<GeneratorModel> truncation_ladder(const std::function<GeneratorModel(int)>& ctor,
                                              std::span<const int> dims);

/// Dense eigenvalues (no structure assumed).
ComplexVector eigenvalues(const ComplexMatrix& a);

/// Spectral abscissa max Re λ from a dense eigensolve.
double spectral_abscissa(const ComplexMatrix& a);

nlohmann::json to_json(const GeneratorModel& model);
GeneratorModel model_from_json(const nlohmann::json& doc);

}  // namespace polydecay::zoo
