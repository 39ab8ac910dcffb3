#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "polydecay/linalg.hpp"
#include "polydecay/resolvent.hpp"

namespace polydecay::resolvent {

namespace {

constexpr std::size_t kJacobiMax = 48;
constexpr int kLanczosMax = 120;

// σ_min of a 2×2 matrix: |det| / σ_max, with σ_max² the larger root of
// s² - ‖M‖_F² s + |det|² = 0.
double sigma_min_2x2(Complex a, Complex b, Complex c, Complex d) {
  const double f = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
  const double det = std::abs(a * d - b * c);
  if (f == 0.0) return 0.0;
  const double disc = std::sqrt(std::max(0.0, (f - 2.0 * det) * (f + 2.0 * det)));
  const double smax2 = 0.5 * (f + disc);
  return det / std::sqrt(smax2);
}

// Largest eigenvalue of M^{-*} M^{-1} for upper triangular M by Lanczos with
// full reorthogonalization; returns 1/sqrt of it.
double lanczos_sigma_min(const ComplexMatrix& m) {
  const Index n = m.rows();
  const int kmax = static_cast<int>(std::min<Index>(n, kLanczosMax));
  const auto upper = m.triangularView<Eigen::Upper>();
  const ComplexMatrix mh = m.adjoint();
  const auto lower = mh.triangularView<Eigen::Lower>();

  ComplexMatrix v(n, kmax + 1);
  ComplexVector start(n);
  for (Index i = 0; i < n; ++i) start(i) = Complex(1.0 + 0.5 * std::sin(0.7 * i + 0.3), 0.25 * std::cos(1.3 * i));
  v.col(0) = start.normalized();

  std::vector<double> alpha, beta;
  double theta = 0.0;
  ComplexVector w(n);
  for (int k = 0; k < kmax; ++k) {
    w = upper.solve(v.col(k));
    w = lower.solve(w);
    const double a = v.col(k).dot(w).real();
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass) {
      const ComplexVector coeff = v.leftCols(k + 1).adjoint() * w;
      w -= v.leftCols(k + 1) * coeff;
    }
    const double b = w.norm();

    Eigen::VectorXd diag = Eigen::Map<Eigen::VectorXd>(alpha.data(), k + 1);
    double next;
    if (k == 0) {
      next = diag(0);
    } else {
      Eigen::VectorXd sub = Eigen::Map<Eigen::VectorXd>(beta.data(), k);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
      next = tri.eigenvalues().maxCoeff();
    }
    const bool settled = k > 0 && std::abs(next - theta) <= 1e-14 * next;
    theta = next;
    if (settled || b <= 1e-13 * std::abs(theta)) break;
    beta.push_back(b);
    v.col(k + 1) = w / b;
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) return 0.0;
  return 1.0 / std::sqrt(theta);
}

}  // namespace

ResolventEvaluator::ResolventEvaluator(const ComplexMatrix& a) : dim_(a.rows()) {
  require(a.rows() == a.cols(), ErrorKind::NonSquare, "ResolventEvaluator: A must be square");
  require(all_finite(a), ErrorKind::DomainError, "ResolventEvaluator: non-finite entry");
  const auto bd = linalg::BlockDiagonal::decompose(a);
  eigs_.resize(dim_);
  Index filled = 0;
  for (const auto& src : bd.blocks()) {
    Block b;
    b.indices = src.indices;
    const Index n = src.matrix.rows();
    if (n == 1) {
      b.q = ComplexMatrix::Identity(1, 1);
      b.t = src.matrix;
      b.diagonal = true;
    } else {
      Eigen::ComplexSchur<ComplexMatrix> schur(src.matrix);
      require(schur.info() == Eigen::Success, ErrorKind::ConvergenceFailure, "ResolventEvaluator: Schur failed");
      b.q = schur.matrixU();
      b.t = schur.matrixT();
      const double scale = b.t.cwiseAbs().maxCoeff();
      b.diagonal = b.t.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().cwiseAbs().maxCoeff() <=
                   1e-13 * std::max(scale, 1e-300);
    }
    for (Index i = 0; i < n; ++i) eigs_(filled++) = b.t(i, i);
    blocks_.push_back(std::move(b));
  }
}

double ResolventEvaluator::block_norm(const Block& b, Complex z) const {
  const Index n = b.t.rows();
  double smin;
  double scale = std::abs(z);
  if (b.diagonal) {
    smin = std::numeric_limits<double>::infinity();
    for (Index i = 0; i < n; ++i) {
      smin = std::min(smin, std::abs(z - b.t(i, i)));
      scale = std::max(scale, std::abs(b.t(i, i)));
    }
  } else {
    ComplexMatrix m = -b.t;
    m.diagonal().array() += z;
    scale = std::max(scale, b.t.cwiseAbs().maxCoeff());
    if (n == 2) {
      smin = sigma_min_2x2(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
    } else if (static_cast<std::size_t>(n) <= kJacobiMax) {
      smin = linalg::singular_extremes(m).sigma_min;
    } else {
      smin = lanczos_sigma_min(m);
    }
  }
  if (!(smin > 1e-14 * std::max(1.0, scale))) {
    fail(ErrorKind::SingularShift, "resolvent: z = (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                                       ") lies in the numerical spectrum");
  }
  return 1.0 / smin;
}

double ResolventEvaluator::norm(Complex z) const {
  double best = 0.0;
  for (const auto& b : blocks_) best = std::max(best, block_norm(b, z));
  return best;
}

ComplexMatrix ResolventEvaluator::apply_power(Complex z, int k, const ComplexMatrix& x) const {
  require(x.rows() == dim_, ErrorKind::DimensionMismatch, "apply_power: row count");
  require(k >= 0, ErrorKind::DomainError, "apply_power: k must be >= 0");
  if (k == 0) return x;
  ComplexMatrix out(x.rows(), x.cols());
  for (const auto& b : blocks_) {
    const Index n = static_cast<Index>(b.indices.size());
    ComplexMatrix part(n, x.cols());
    for (Index i = 0; i < n; ++i) part.row(i) = x.row(b.indices[i]);
    ComplexMatrix m = -b.t;
    m.diagonal().array() += z;
    ComplexMatrix y = b.q.adjoint() * part;
    for (int j = 0; j < k; ++j) y = m.triangularView<Eigen::Upper>().solve(y);
    part = b.q * y;
    for (Index i = 0; i < n; ++i) out.row(b.indices[i]) = part.row(i);
  }
  if (!all_finite(out)) fail(ErrorKind::SingularShift, "apply_power: resolvent power not representable");
  return out;
}

double ResolventEvaluator::normal_lower_bound(Complex z) const {
  double d = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < eigs_.size(); ++i) d = std::min(d, std::abs(z - eigs_(i)));
  return 1.0 / d;
}

}  // namespace polydecay::resolvent
