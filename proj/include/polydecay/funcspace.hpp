#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "json.hpp"
#include "polydecay/common.hpp"
#include "polydecay/zoo.hpp"

namespace polydecay::funcspace {

enum class Domain { Time, Frequency };

/// Uniform samples of f: [-h, h) -> C^n at points -h + j·(2h/N), j = 0..N-1,
/// with N a power of two. A frequency-domain function lives on the dual grid
/// ξ_k = -π/dx + k·π/L, i.e. h = π/dx.
struct SampledFunction {
  double half_width = 1.0;
  ComplexMatrix samples;  // N × n
  double ambient_p = 2.0;  // norm on C^n
  Domain domain = Domain::Time;

  Index count() const { return samples.rows(); }
  Index dim() const { return samples.cols(); }
  double spacing() const { return 2.0 * half_width / static_cast<double>(count()); }
  double point(Index j) const { return -half_width + static_cast<double>(j) * spacing(); }
  RealVector grid() const;
  double pointwise_norm(Index j) const;

  void write_csv(std::ostream& os) const;  // t (or xi), Re f1, Im f1, ...
};

using VectorFunction = std::function<ComplexVector(double)>;

SampledFunction sample(double half_width, Index count, const VectorFunction& f, Index dim, double ambient_p = 2.0);
SampledFunction sample_scalar(double half_width, Index count, const std::function<Complex(double)>& f);

SampledFunction discrete_fourier(const SampledFunction& f);
SampledFunction inverse_fourier(const SampledFunction& fhat);

/// 1_{(0,∞)} f, with the midpoint value f(0)/2 at the jump.
SampledFunction truncate_positive(const SampledFunction& f);

/// (∫ ‖f‖^p dx)^{1/p} by the trapezoidal rule on the periodic grid; max for p = ∞.
double lp_norm(const SampledFunction& f, double p);

/// (∫ ‖f(x)‖^p |x|^γ dx)^{1/p}. The origin sample is dropped and replaced by
/// the Navot end corrections -2ζ(-γ)·dx^{1+γ}·g(0) - ζ(-γ-2)·dx^{3+γ}·g''(0),
/// g = ‖f‖^p, with g'' from central differences.
double weighted_lp_norm(const SampledFunction& f, double p, double gamma);

/// Smooth dyadic partition of unity on the given frequencies. χ = 1 on
/// [-1, 1], 0 outside (-2, 2), with the exp(-1/x) glued transition between;
/// φ_0(ξ) = χ(2ξ), φ_k(ξ) = χ(2^{1-k}ξ) - χ(2^{2-k}ξ). Enough blocks are
/// returned for the sum to be exactly one on the grid.
std::vector<RealVector> littlewood_paley_sequence(const RealVector& xi);
double lp_bump(double xi, int k);  // φ_k(ξ)

struct BesovOptions {
  double overflow_fraction = 1e-2;  // NyquistOverflow above this tail energy
  double flag_fraction = 1e-8;      // truncated flag above this
};

struct BesovProfile {
  double s = 0.0;
  double p = 2.0;
  double q = 2.0;
  std::vector<double> block_norms;
  double value = 0.0;
  double tail_fraction = 0.0;  // spectral energy with |ξ| > π/(2dx)
  bool truncated = false;
  nlohmann::json to_json() const;
};

BesovProfile besov_norm(const SampledFunction& f, double s, double p, double q, const BesovOptions& opts = {});

/// ‖F^{-1} φ_k‖_{L^1} on the grid of f, k = 0..K: the constants in the
/// discrete Young inequality ‖φ_k(D) g‖_p <= κ_k ‖g‖_p.
std::vector<double> lp_kernel_constants(const SampledFunction& like);

struct GrowthCap {
  double c = 1.0;
  double alpha = 0.0;  // ‖m(ξ)‖ <= c (1+|ξ|)^α
};

using MatrixSymbol = std::function<ComplexMatrix(double)>;
/// Applies m(ξ) to a frequency vector; used when m is only available as an action.
using SymbolAction = std::function<ComplexVector(double, const ComplexVector&)>;

SampledFunction apply_multiplier(const MatrixSymbol& symbol, const SampledFunction& f, const GrowthCap& cap);
SampledFunction apply_multiplier_action(const SymbolAction& symbol, const SampledFunction& f, Index out_dim);

/// Refinement-stability record: one sup ratio per resolution.
struct StabilityReport {
  std::vector<Index> resolutions;
  std::vector<double> sup_ratio;
  double drift = 0.0;  // max relative change between consecutive resolutions
  bool pass = false;   // finite and drift <= 0.1
  nlohmann::json to_json() const;
};

/// Parameters of a sum of modulated Gaussians; reproducible from the seed.
struct PanelFunction {
  struct Bump {
    ComplexVector amplitude;
    double center;
    double width;
    double frequency;
  };
  std::vector<Bump> bumps;
  ComplexVector operator()(double t) const;
};
std::vector<PanelFunction> gaussian_panel(std::size_t count, Index dim, std::uint64_t seed, double max_frequency = 4.0,
                                          double center_spread = 2.0);

enum class HLVariant { Type, Cotype };

/// Type (p ∈ (1, 2]): ‖Ff‖_{L^p(w_{p-2})} / ‖f‖_{L^p}.
/// Cotype (p >= 2):    ‖Ff‖_{L^p} / ‖f‖_{L^p(w_{p-2})}.
StabilityReport verify_hardy_littlewood(double p, std::size_t trial_count, std::uint64_t seed,
                                        const std::vector<Index>& resolutions, HLVariant variant = HLVariant::Type,
                                        Index vector_dim = 1);

enum class MultiplierTarget { LpConjugate, Linf };

struct MultiplierOptions {
  int power = 1;           // k in R(iξ, A)^k
  double p = 2.0;
  double s = 0.0;          // Besov smoothness of the input
  std::optional<double> tau;  // smoothing exponent; defaults to k·β of the model
  MultiplierTarget target = MultiplierTarget::LpConjugate;
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  std::vector<Index> resolutions{1024, 2048};
  double half_width = 16.0;
};

/// sup over the panel of ‖T_m g‖_target / ‖g‖_{B^s_{p,p}}, with
/// m(ξ) = R(iξ, A)^k (-A)^{-τ}: the Y-valued input f = (-A)^{-τ} g is
/// measured through g, so the check reduces to X-valued computations.
StabilityReport verify_multiplier_bound(const zoo::GeneratorModel& model, const MultiplierOptions& opts);

struct TruncationOrbitReport {
  StabilityReport truncation;
  StabilityReport orbit;
  double half_width_used = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};

struct TruncationOptions {
  double s = 0.25;
  double p = 2.0;
  double q = 2.0;
  std::optional<double> omega;  // defaults to max(0, omega_analytic + 1)
  std::size_t samples = 20;
  std::uint64_t seed = 1;
  std::vector<Index> resolutions{2048, 4096};  // sample counts at half width 16
  double overflow_fraction = 0.1;
};

/// (a) ‖1_{(0,∞)} f‖_{B^s_{p,q}} / ‖f‖_{B^s_{p,q}} over a Gaussian panel;
/// (b) ‖1_{(0,∞)}(t) e^{-ωt} T(t) x‖_{B^s_{p,q}} / ‖x‖_{D_A(s,q)} over a vector panel.
TruncationOrbitReport verify_truncation_and_orbit(const zoo::GeneratorModel& model, const TruncationOptions& opts);

}  // namespace polydecay::funcspace
