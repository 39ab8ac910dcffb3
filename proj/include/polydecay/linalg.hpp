#pragma once

#include <cstdint>
#include <vector>

#include "polydecay/common.hpp"

namespace polydecay::linalg {

struct SingularTriple {
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  int iterations = 0;  // Jacobi sweeps
};

/// Solves (zI - A) X = B with a partial-pivoted LU factorization.
/// Throws SingularShift when the reciprocal condition estimate of zI - A
/// falls below 1e-14, i.e. z is numerically in the spectrum of A.
ComplexMatrix solve_shifted(const ComplexMatrix& a, Complex z, const ComplexMatrix& b);

/// Largest and smallest singular values by one-sided (Hestenes) Jacobi.
SingularTriple singular_extremes(const ComplexMatrix& m);

/// e^{tA}. Block-diagonal structure is detected and exploited; normal blocks
/// use their Schur (= eigen) decomposition, the rest scaling-and-squaring
/// with the degree 13 diagonal Padé approximant.
ComplexMatrix matrix_exponential(const ComplexMatrix& a, double t);

/// Principal power (-A)^tau given aneg = -A, via complex Schur form and a
/// blocked Parlett recurrence on the triangular factor.
ComplexMatrix fractional_power(const ComplexMatrix& aneg, double tau);

/// Degree 13 Padé with scaling and squaring, no structure detection.
ComplexMatrix expm_pade13(const ComplexMatrix& a);

/// f(T) = T^tau for upper triangular T with spectrum off the closed negative axis.
ComplexMatrix triangular_power(const ComplexMatrix& t, double tau);

bool is_normal(const ComplexMatrix& a, double rel_tol = 1e-12);
double commutator_defect(const ComplexMatrix& a);  // ‖A*A - AA*‖_F / ‖A‖_F²

double spectral_norm(const ComplexMatrix& m);
double norm_1(const ComplexMatrix& m);    // max column sum
double norm_inf(const ComplexMatrix& m);  // max row sum
double lp_vector_norm(const ComplexVector& v, double p);
RealVector column_lp_norms(const ComplexMatrix& m, double p);

// ℓ^p operator norm. Exact for p ∈ {1, 2, ∞}; otherwise a certified upper
// bound by Riesz–Thorin and a Monte-Carlo lower bound.
struct NormInterval {
  double lower = 0.0;
  double upper = 0.0;
  bool exact() const { return lower == upper; }
};
NormInterval lp_operator_norm(const ComplexMatrix& m, double p, std::uint64_t seed = 0x5eed,
                              int samples = 200);

/// Integrates u' = Au, u(0) = x0 to time t by Taylor-series stepping with
/// h‖A‖_1 <= 1, using only sparse products with A. Independent of the Padé
/// path; used as the cross-check oracle for matrix_exponential and orbits.
ComplexMatrix integrate_linear_ode(const ComplexMatrix& a, const ComplexMatrix& x0, double t);

/// A square matrix stored as its irreducible diagonal blocks (after a
/// symmetric permutation). Matrix functions act block by block.
class BlockDiagonal {
 public:
  struct Block {
    std::vector<Index> indices;  // ascending
    ComplexMatrix matrix;
  };

  BlockDiagonal() = default;
  BlockDiagonal(Index dim, std::vector<Block> blocks);

  /// Splits `a` into connected components of its (symmetrized) sparsity graph.
  static BlockDiagonal decompose(const ComplexMatrix& a);

  Index dim() const { return dim_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t max_block_size() const;

  template <class F>
  BlockDiagonal map(F&& f) const {
    std::vector<Block> out;
    out.reserve(blocks_.size());
    for (const auto& b : blocks_) out.push_back({b.indices, f(b.matrix)});
    return BlockDiagonal(dim_, std::move(out));
  }

  ComplexMatrix dense() const;
  ComplexMatrix apply(const ComplexMatrix& x) const;
  double spectral_norm() const;

  /// Gathers rows of x belonging to block k.
  ComplexMatrix gather(std::size_t k, const ComplexMatrix& x) const;
  void scatter(std::size_t k, const ComplexMatrix& part, ComplexMatrix& x) const;

 private:
  Index dim_ = 0;
  std::vector<Block> blocks_;
};

/// Block-level variants of the matrix functions above, for callers that keep
/// the block structure across many evaluations.
BlockDiagonal matrix_exponential(const BlockDiagonal& a, double t);
BlockDiagonal fractional_power(const BlockDiagonal& aneg, double tau);

}  // namespace polydecay::linalg
