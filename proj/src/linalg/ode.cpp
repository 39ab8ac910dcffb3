#include <cmath>
#include <vector>

#include <Eigen/Sparse>

#include "polydecay/linalg.hpp"

namespace polydecay::linalg {

namespace {

Eigen::SparseMatrix<Complex> sparse_of(const ComplexMatrix& a, double scale) {
  std::vector<Eigen::Triplet<Complex>> nz;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != Complex(0.0, 0.0)) nz.emplace_back(i, j, scale * a(i, j));
  Eigen::SparseMatrix<Complex> out(a.rows(), a.cols());
  out.setFromTriplets(nz.begin(), nz.end());
  return out;
}

constexpr double kStepNorm = 4.0;  // h‖A‖_1 per step; rounding grows like e^{kStepNorm}

}  // namespace

ComplexMatrix integrate_linear_ode(const ComplexMatrix& a, const ComplexMatrix& x0, double t) {
  require(a.rows() == a.cols(), ErrorKind::NonSquare, "integrate_linear_ode: A must be square");
  require(x0.rows() == a.rows(), ErrorKind::DimensionMismatch, "integrate_linear_ode: x0 row count");
  require(t >= 0.0, ErrorKind::DomainError, "integrate_linear_ode: t must be >= 0");
  if (t == 0.0) return x0;

  const double norm = norm_1(a);
  const auto steps = static_cast<long>(std::max(1.0, std::ceil(t * norm / kStepNorm)));
  const double h = t / static_cast<double>(steps);
  const Eigen::SparseMatrix<Complex> ha = sparse_of(a, h);

  ComplexMatrix x = x0;
  ComplexMatrix term(x0.rows(), x0.cols());
  ComplexMatrix next(x0.rows(), x0.cols());
  for (long s = 0; s < steps; ++s) {
    // Taylor series of e^{hA} x with h‖A‖_1 <= kStepNorm.
    term = x;
    ComplexMatrix sum = x;
    const double scale = x.cwiseAbs().maxCoeff();
    for (int k = 1; k < 120; ++k) {
      next.noalias() = ha * term;
      term = next / static_cast<double>(k);
      sum += term;
      const double tn = term.cwiseAbs().maxCoeff();
      if (tn <= 1e-18 * scale || tn == 0.0) break;
    }
    x = std::move(sum);
  }
  if (!all_finite(x)) fail(ErrorKind::Overflow, "integrate_linear_ode: solution not representable");
  return x;
}

}  // namespace polydecay::linalg
