#include <cmath>
#include <sstream>

#include "polydecay/funcspace.hpp"
#include "polydecay/linalg.hpp"

namespace polydecay::funcspace {

SampledFunction apply_multiplier_action(const SymbolAction& symbol, const SampledFunction& f, Index out_dim) {
  require(f.domain == Domain::Time, ErrorKind::PreconditionViolation, "apply_multiplier: input must be time-domain");
  const SampledFunction fhat = discrete_fourier(f);
  SampledFunction ghat;
  ghat.half_width = fhat.half_width;
  ghat.ambient_p = fhat.ambient_p;
  ghat.domain = Domain::Frequency;
  ghat.samples.resize(fhat.count(), out_dim);
  for (Index k = 0; k < fhat.count(); ++k) {
    const ComplexVector v = symbol(fhat.point(k), fhat.samples.row(k).transpose());
    require(v.size() == out_dim, ErrorKind::PreconditionViolation, "apply_multiplier: symbol output has wrong dimension");
    ghat.samples.row(k) = v.transpose();
  }
  return inverse_fourier(ghat);
}

SampledFunction apply_multiplier(const MatrixSymbol& symbol, const SampledFunction& f, const GrowthCap& cap) {
  require(cap.c > 0.0, ErrorKind::PreconditionViolation, "apply_multiplier: growth constant must be > 0");
  Index out_dim = -1;
  auto action = [&](double xi, const ComplexVector& v) -> ComplexVector {
    const ComplexMatrix m = symbol(xi);
    require(m.cols() == v.size(), ErrorKind::PreconditionViolation, "apply_multiplier: symbol has wrong column count");
    require(all_finite(m), ErrorKind::SymbolOverflow, "apply_multiplier: symbol is not finite");
    const double bound = cap.c * std::pow(1.0 + std::abs(xi), cap.alpha);
    const double norm = linalg::spectral_norm(m);
    if (norm > bound * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "apply_multiplier: |m(" << xi << ")| = " << norm << " exceeds the growth cap " << bound;
      fail(ErrorKind::SymbolOverflow, msg.str());
    }
    return m * v;
  };
  out_dim = symbol(0.0).rows();
  return apply_multiplier_action(action, f, out_dim);
}

}  // namespace polydecay::funcspace
