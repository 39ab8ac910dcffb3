#include <algorithm>
#include <cmath>
#include <limits>

#include "polydecay/linalg.hpp"

namespace polydecay::linalg {

namespace {
constexpr int kMaxSweeps = 60;
constexpr double kOrthogonalityTol = 1e-15;
}  // namespace

SingularTriple singular_extremes(const ComplexMatrix& m) {
  require(m.size() > 0, ErrorKind::DimensionMismatch, "singular_extremes: empty matrix");
  require(all_finite(m), ErrorKind::DomainError, "singular_extremes: non-finite entries");

  // Work on the tall orientation so the columns carry the singular values.
  ComplexMatrix u = m.rows() >= m.cols() ? ComplexMatrix(m) : ComplexMatrix(m.adjoint());
  const double scale = u.cwiseAbs().maxCoeff();
  if (scale == 0.0) return {0.0, 0.0, 0};
  u /= scale;

  const Index n = u.cols();
  RealVector sq(n);
  for (Index j = 0; j < n; ++j) sq(j) = u.col(j).squaredNorm();

  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    bool rotated = false;
    for (Index i = 0; i < n - 1; ++i) {
      for (Index j = i + 1; j < n; ++j) {
        const double alpha = sq(i);
        const double beta = sq(j);
        if (alpha == 0.0 || beta == 0.0) continue;
        const Complex gamma = u.col(i).dot(u.col(j));  // u_i^H u_j
        const double g = std::abs(gamma);
        if (g <= kOrthogonalityTol * std::sqrt(alpha * beta)) continue;
        rotated = true;
        const double zeta = (beta - alpha) / (2.0 * g);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        const Complex phase = std::conj(gamma) / g;  // e^{-i arg gamma}
        for (Index r = 0; r < u.rows(); ++r) {
          const Complex ui = u(r, i);
          const Complex uj = phase * u(r, j);
          u(r, i) = c * ui - s * uj;
          u(r, j) = s * ui + c * uj;
        }
        sq(i) = u.col(i).squaredNorm();
        sq(j) = u.col(j).squaredNorm();
      }
    }
    if (!rotated) break;
  }
  if (sweep == kMaxSweeps) {
    fail(ErrorKind::ConvergenceFailure,
         "one-sided Jacobi did not converge in " + std::to_string(kMaxSweeps) + " sweeps");
  }

  double smax = 0.0;
  double smin = std::numeric_limits<double>::infinity();
  for (Index j = 0; j < n; ++j) {
    const double s = std::sqrt(sq(j));
    smax = std::max(smax, s);
    smin = std::min(smin, s);
  }
  return {smax * scale, smin * scale, sweep + 1};
}

}  // namespace polydecay::linalg
