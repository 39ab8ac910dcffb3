#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "polydecay/linalg.hpp"

namespace polydecay::linalg {

double lp_vector_norm(const ComplexVector& v, double p) {
  if (std::isinf(p)) return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  if (p == 2.0) return v.norm();
  if (p == 1.0) return v.cwiseAbs().sum();
  const double scale = v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
  if (scale == 0.0) return 0.0;
  return scale * std::pow((v.cwiseAbs() / scale).array().pow(p).sum(), 1.0 / p);
}

RealVector column_lp_norms(const ComplexMatrix& m, double p) {
  RealVector out(m.cols());
  for (Index j = 0; j < m.cols(); ++j) out(j) = lp_vector_norm(m.col(j), p);
  return out;
}

NormInterval lp_operator_norm(const ComplexMatrix& m, double p, std::uint64_t seed, int samples) {
  require(p >= 1.0, ErrorKind::DomainError, "lp_operator_norm: p must be >= 1");
  if (p == 1.0) {
    const double v = norm_1(m);
    return {v, v};
  }
  if (p == 2.0) {
    const double v = spectral_norm(m);
    return {v, v};
  }
  if (std::isinf(p)) {
    const double v = norm_inf(m);
    return {v, v};
  }

  const double two = spectral_norm(m);
  double upper;
  if (p < 2.0) {
    const double theta = 2.0 / p - 1.0;
    upper = std::pow(norm_1(m), theta) * std::pow(two, 1.0 - theta);
  } else {
    const double theta = 1.0 - 2.0 / p;
    upper = std::pow(norm_inf(m), theta) * std::pow(two, 1.0 - theta);
  }

  double lower = 0.0;
  for (Index j = 0; j < m.cols(); ++j) lower = std::max(lower, lp_vector_norm(m.col(j), p));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  ComplexVector x(m.cols());
  for (int s = 0; s < samples; ++s) {
    for (Index i = 0; i < x.size(); ++i) x(i) = Complex(gauss(rng), gauss(rng));
    const double nx = lp_vector_norm(x, p);
    if (nx == 0.0) continue;
    lower = std::max(lower, lp_vector_norm(m * x, p) / nx);
  }
  return {std::min(lower, upper), upper};
}

}  // namespace polydecay::linalg
