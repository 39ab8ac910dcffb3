#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "polydecay/linalg.hpp"

namespace polydecay::linalg {

namespace {

// Diagonal entries closer than this (relative) are treated as one cluster and
// handled by a Taylor expansion instead of the Parlett division.
constexpr double kClusterTol = 1e-3;
constexpr int kMaxTaylorTerms = 400;

Complex principal_power(Complex z, double tau) { return std::exp(tau * std::log(z)); }

// (b^tau - a^tau) / (b - a) without cancellation for b close to a. Both
// arguments lie in the open right half-plane, so log b - log a has no
// unwinding term.
Complex power_divided_difference(Complex a, Complex b, double tau) {
  if (a == b) return tau * principal_power(a, tau - 1.0);
  const Complex diff = b - a;
  if (std::abs(diff) > 0.5 * std::min(std::abs(a), std::abs(b))) {
    return (principal_power(b, tau) - principal_power(a, tau)) / diff;
  }
  const Complex w = 2.0 * std::atanh(diff / (b + a));  // log b - log a
  const Complex mid = 0.5 * (std::log(a) + std::log(b));
  return std::exp(tau * mid) * 2.0 * std::sinh(0.5 * tau * w) / diff;
}

ComplexMatrix cluster_power(const ComplexMatrix& t, double tau) {
  const Index n = t.rows();
  const Complex sigma = t.diagonal().mean();
  const ComplexMatrix shift = t - sigma * ComplexMatrix::Identity(n, n);
  ComplexMatrix term = principal_power(sigma, tau) * ComplexMatrix::Identity(n, n);
  ComplexMatrix sum = term;
  int small_streak = 0;
  for (int k = 1; k <= kMaxTaylorTerms; ++k) {
    term = (term * shift) * ((tau - (k - 1)) / (static_cast<double>(k) * sigma));
    sum += term;
    const double tn = term.cwiseAbs().maxCoeff();
    if (k >= n && tn <= 1e-17 * sum.cwiseAbs().maxCoeff()) {
      if (++small_streak >= 2) return sum;
    } else {
      small_streak = 0;
    }
    if (tn == 0.0 && k >= n) return sum;
  }
  fail(ErrorKind::ConvergenceFailure, "fractional power: Taylor series in a cluster did not converge");
}

// Solves A X - X B = C for upper triangular A (p×p) and B (q×q).
ComplexMatrix solve_triangular_sylvester(const ComplexMatrix& a, const ComplexMatrix& b,
                                         const ComplexMatrix& c) {
  const Index p = a.rows(), q = b.rows();
  ComplexMatrix x(p, q);
  for (Index col = 0; col < q; ++col) {
    ComplexVector rhs = c.col(col);
    for (Index l = 0; l < col; ++l) rhs += x.col(l) * b(l, col);
    ComplexMatrix shifted = a;
    shifted.diagonal().array() -= b(col, col);
    x.col(col) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return x;
}

ComplexMatrix power_block(const ComplexMatrix& aneg, double tau) {
  if (aneg.rows() == 1) {
    require(aneg(0, 0).real() > 0.0, ErrorKind::SpectrumOnCut,
            "fractional_power: eigenvalue with nonpositive real part");
    return ComplexMatrix::Constant(1, 1, principal_power(aneg(0, 0), tau));
  }
  Eigen::ComplexSchur<ComplexMatrix> schur(aneg);
  require(schur.info() == Eigen::Success, ErrorKind::ConvergenceFailure, "fractional_power: Schur failed");
  const ComplexMatrix& q = schur.matrixU();
  return q * triangular_power(schur.matrixT(), tau) * q.adjoint();
}

}  // namespace

ComplexMatrix triangular_power(const ComplexMatrix& t, double tau) {
  const Index n = t.rows();
  for (Index i = 0; i < n; ++i) {
    require(t(i, i).real() > 0.0, ErrorKind::SpectrumOnCut,
            "fractional_power: eigenvalue (" + std::to_string(t(i, i).real()) + ", " +
                std::to_string(t(i, i).imag()) + ") has nonpositive real part");
  }

  // Contiguous runs of nearly equal diagonal entries.
  std::vector<Index> start{0};
  for (Index i = 1; i < n; ++i) {
    const double gap = std::abs(t(i, i) - t(i - 1, i - 1));
    if (gap > kClusterTol * std::max(std::abs(t(i, i)), std::abs(t(i - 1, i - 1)))) start.push_back(i);
  }
  start.push_back(n);
  const std::size_t runs = start.size() - 1;
  auto len = [&](std::size_t r) { return start[r + 1] - start[r]; };
  auto blk = [&](const ComplexMatrix& m, std::size_t r, std::size_t c) {
    return m.block(start[r], start[c], len(r), len(c));
  };

  ComplexMatrix f = ComplexMatrix::Zero(n, n);
  for (std::size_t r = 0; r < runs; ++r) {
    f.block(start[r], start[r], len(r), len(r)) =
        len(r) == 1 ? ComplexMatrix::Constant(1, 1, principal_power(t(start[r], start[r]), tau))
                    : cluster_power(blk(t, r, r), tau);
  }

  for (std::size_t j = 1; j < runs; ++j) {
    for (std::size_t ii = j; ii-- > 0;) {
      ComplexMatrix sum = ComplexMatrix::Zero(len(ii), len(j));
      for (std::size_t k = ii + 1; k < j; ++k) sum += blk(f, ii, k) * blk(t, k, j) - blk(t, ii, k) * blk(f, k, j);
      ComplexMatrix fij;
      if (len(ii) == 1 && len(j) == 1) {
        const Complex tii = t(start[ii], start[ii]);
        const Complex tjj = t(start[j], start[j]);
        fij = ComplexMatrix::Constant(
            1, 1, t(start[ii], start[j]) * power_divided_difference(tii, tjj, tau) + sum(0, 0) / (tii - tjj));
      } else {
        const ComplexMatrix rhs = blk(f, ii, ii) * blk(t, ii, j) - blk(t, ii, j) * blk(f, j, j) + sum;
        fij = solve_triangular_sylvester(blk(t, ii, ii), blk(t, j, j), rhs);
      }
      f.block(start[ii], start[j], len(ii), len(j)) = fij;
    }
  }
  return f;
}

ComplexMatrix fractional_power(const ComplexMatrix& aneg, double tau) {
  require(aneg.rows() == aneg.cols(), ErrorKind::NonSquare, "fractional_power: matrix must be square");
  require(std::isfinite(tau), ErrorKind::DomainError, "fractional_power: tau must be finite");
  if (tau == 0.0) {
    // Still validate the spectrum so the contract does not depend on tau.
    BlockDiagonal::decompose(aneg).map([](const ComplexMatrix& b) { return power_block(b, 0.0); });
    return ComplexMatrix::Identity(aneg.rows(), aneg.cols());
  }
  return fractional_power(BlockDiagonal::decompose(aneg), tau).dense();
}

BlockDiagonal fractional_power(const BlockDiagonal& aneg, double tau) {
  require(std::isfinite(tau), ErrorKind::DomainError, "fractional_power: tau must be finite");
  return aneg.map([tau](const ComplexMatrix& b) {
    ComplexMatrix f = power_block(b, tau);
    if (tau == 0.0) f = ComplexMatrix::Identity(b.rows(), b.cols());
    if (!all_finite(f)) fail(ErrorKind::Overflow, "fractional_power: result not representable");
    return f;
  });
}

}  // namespace polydecay::linalg
