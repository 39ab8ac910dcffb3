#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "polydecay/linalg.hpp"

namespace polydecay::linalg {

namespace {

constexpr double kTheta13 = 5.371920351148152;
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};

ComplexMatrix expm_normal(const ComplexMatrix& a) {
  Eigen::ComplexSchur<ComplexMatrix> schur(a);
  const ComplexMatrix& q = schur.matrixU();
  const ComplexMatrix& t = schur.matrixT();
  ComplexVector d(t.rows());
  for (Index i = 0; i < t.rows(); ++i) d(i) = std::exp(t(i, i));
  return q * d.asDiagonal() * q.adjoint();
}

ComplexMatrix expm_block(const ComplexMatrix& ta) {
  if (ta.rows() == 1) return ComplexMatrix::Constant(1, 1, std::exp(ta(0, 0)));
  if (is_normal(ta)) return expm_normal(ta);
  return expm_pade13(ta);
}

}  // namespace

ComplexMatrix expm_pade13(const ComplexMatrix& a) {
  require(a.rows() == a.cols(), ErrorKind::NonSquare, "expm: matrix must be square");
  const Index n = a.rows();
  const double norm = norm_1(a);
  int squarings = 0;
  if (norm > kTheta13) squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  const ComplexMatrix as = a / std::ldexp(1.0, squarings);

  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = as * as;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const auto& b = kPade13;

  const ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                                b[3] * a2 + b[1] * id;
  const ComplexMatrix u = as * u_inner;
  const ComplexMatrix v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;

  ComplexMatrix r = Eigen::PartialPivLU<ComplexMatrix>(v - u).solve(v + u);
  for (int k = 0; k < squarings; ++k) r = r * r;
  return r;
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a, double t) {
  require(a.rows() == a.cols(), ErrorKind::NonSquare, "matrix_exponential: matrix must be square");
  require(t >= 0.0 && std::isfinite(t), ErrorKind::DomainError, "matrix_exponential: t must be finite and >= 0");
  if (t == 0.0) return ComplexMatrix::Identity(a.rows(), a.cols());

  return matrix_exponential(BlockDiagonal::decompose(a), t).dense();
}

BlockDiagonal matrix_exponential(const BlockDiagonal& a, double t) {
  require(t >= 0.0 && std::isfinite(t), ErrorKind::DomainError, "matrix_exponential: t must be finite and >= 0");
  return a.map([t](const ComplexMatrix& b) {
    if (t == 0.0) return ComplexMatrix::Identity(b.rows(), b.cols()).eval();
    ComplexMatrix e = expm_block(t * b);
    if (!all_finite(e)) fail(ErrorKind::Overflow, "e^{tA} is not representable at t = " + std::to_string(t));
    return e;
  });
}

}  // namespace polydecay::linalg
