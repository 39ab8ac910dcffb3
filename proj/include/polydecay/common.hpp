#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace polydecay {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorKind {
  SingularShift,
  DimensionMismatch,
  ConvergenceFailure,
  Overflow,
  SpectrumOnCut,
  NonSquare,
  UnstableEigenvalue,
  UnstableDamping,
  InsufficientData,
  DomainError,
  UnsupportedSpace,
  NyquistOverflow,
  NonIntegrableWeight,
  SymbolOverflow,
  PreconditionViolation,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

// Every failure in the library is reported through this type; `kind()` is the
// machine-readable tag, `what()` carries the human context.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Throws DimensionMismatch / NonSquare / DomainError style errors with a short message.
[[noreturn]] void fail(ErrorKind kind, const std::string& message);

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

bool all_finite(const ComplexMatrix& m);

// Hölder conjugate reciprocal 1/p' = 1 - 1/p, with p = 1 giving 0.
inline double conjugate_reciprocal(double p) { return 1.0 - 1.0 / p; }

}  // namespace polydecay
