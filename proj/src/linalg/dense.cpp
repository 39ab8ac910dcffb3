#include <cmath>

#include <Eigen/LU>

#include "polydecay/linalg.hpp"

namespace polydecay {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularShift: return "SingularShift";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ConvergenceFailure: return "ConvergenceFailure";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::SpectrumOnCut: return "SpectrumOnCut";
    case ErrorKind::NonSquare: return "NonSquare";
    case ErrorKind::UnstableEigenvalue: return "UnstableEigenvalue";
    case ErrorKind::UnstableDamping: return "UnstableDamping";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::UnsupportedSpace: return "UnsupportedSpace";
    case ErrorKind::NyquistOverflow: return "NyquistOverflow";
    case ErrorKind::NonIntegrableWeight: return "NonIntegrableWeight";
    case ErrorKind::SymbolOverflow: return "SymbolOverflow";
    case ErrorKind::PreconditionViolation: return "PreconditionViolation";
    case ErrorKind::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

bool all_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

namespace linalg {

namespace {
constexpr double kSingularConditionThreshold = 1e14;
}

ComplexMatrix solve_shifted(const ComplexMatrix& a, Complex z, const ComplexMatrix& b) {
  require(a.rows() == a.cols(), ErrorKind::NonSquare, "solve_shifted: A must be square");
  require(b.rows() == a.rows(), ErrorKind::DimensionMismatch,
          "solve_shifted: B has " + std::to_string(b.rows()) + " rows, A has " +
              std::to_string(a.rows()));
  ComplexMatrix shifted = -a;
  shifted.diagonal().array() += z;
  Eigen::PartialPivLU<ComplexMatrix> lu(shifted);
  const double rcond = lu.rcond();
  if (!(rcond * kSingularConditionThreshold > 1.0)) {
    fail(ErrorKind::SingularShift, "zI - A has condition estimate " +
                                       (rcond > 0 ? std::to_string(1.0 / rcond) : std::string("inf")) +
                                       " at z = (" + std::to_string(z.real()) + ", " +
                                       std::to_string(z.imag()) + ")");
  }
  ComplexMatrix x = lu.solve(b);
  if (!all_finite(x)) fail(ErrorKind::SingularShift, "non-finite solution of shifted system");
  return x;
}

double commutator_defect(const ComplexMatrix& a) {
  const double n2 = a.squaredNorm();
  if (n2 == 0.0) return 0.0;
  const ComplexMatrix c = a.adjoint() * a - a * a.adjoint();
  return c.norm() / n2;
}

bool is_normal(const ComplexMatrix& a, double rel_tol) { return commutator_defect(a) <= rel_tol; }

double norm_1(const ComplexMatrix& m) {
  double best = 0.0;
  for (Index j = 0; j < m.cols(); ++j) best = std::max(best, m.col(j).cwiseAbs().sum());
  return best;
}

double norm_inf(const ComplexMatrix& m) {
  double best = 0.0;
  for (Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).cwiseAbs().sum());
  return best;
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_extremes(m).sigma_max;
}

}  // namespace linalg
}  // namespace polydecay
