#include <algorithm>
#include <cmath>
#include <numbers>

#include "polydecay/funcspace.hpp"

namespace polydecay::funcspace {

namespace {

double smooth_step(double y) {
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / y), b = std::exp(-1.0 / (1.0 - y));
  return a / (a + b);
}

double chi(double x) {
  const double ax = std::abs(x);
  if (ax <= 1.0) return 1.0;
  if (ax >= 2.0) return 0.0;
  return smooth_step(2.0 - ax);
}

int block_count(double max_abs_xi) {
  int k = 1;
  while (std::ldexp(1.0, k - 1) < max_abs_xi) ++k;
  return k + 1;  // blocks 0..k
}

nlohmann::json number_or_inf(double v) { return std::isinf(v) ? nlohmann::json("inf") : nlohmann::json(v); }

}  // namespace

double lp_bump(double xi, int k) {
  if (k == 0) return chi(2.0 * xi);
  return chi(std::ldexp(xi, 1 - k)) - chi(std::ldexp(xi, 2 - k));
}

std::vector<RealVector> littlewood_paley_sequence(const RealVector& xi) {
  const double top = xi.size() ? xi.cwiseAbs().maxCoeff() : 0.0;
  const int blocks = block_count(top);
  std::vector<RealVector> out;
  for (int k = 0; k < blocks; ++k) {
    RealVector phi(xi.size());
    for (Index i = 0; i < xi.size(); ++i) phi(i) = lp_bump(xi(i), k);
    out.push_back(std::move(phi));
  }
  return out;
}

nlohmann::json BesovProfile::to_json() const {
  return {{"s", s},
          {"p", number_or_inf(p)},
          {"q", number_or_inf(q)},
          {"block_norms", block_norms},
          {"value", value},
          {"tail_fraction", tail_fraction},
          {"truncated", truncated}};
}

BesovProfile besov_norm(const SampledFunction& f, double s, double p, double q, const BesovOptions& opts) {
  require(p >= 1.0 && q >= 1.0, ErrorKind::DomainError, "besov_norm: p and q must be in [1, inf]");
  require(std::isfinite(s), ErrorKind::DomainError, "besov_norm: s must be finite");
  const SampledFunction fhat = discrete_fourier(f);
  const RealVector xi = fhat.grid();

  BesovProfile prof;
  prof.s = s;
  prof.p = p;
  prof.q = q;

  const double cut = 0.5 * fhat.half_width;
  double total = 0.0, tail = 0.0;
  for (Index k = 0; k < fhat.count(); ++k) {
    const double e = fhat.samples.row(k).squaredNorm();
    total += e;
    if (std::abs(xi(k)) > cut) tail += e;
  }
  prof.tail_fraction = total > 0.0 ? tail / total : 0.0;
  if (prof.tail_fraction > opts.overflow_fraction) {
    fail(ErrorKind::NyquistOverflow, "besov_norm: spectral energy near the Nyquist frequency exceeds " +
                                         std::to_string(opts.overflow_fraction) + " of the total");
  }
  prof.truncated = prof.tail_fraction > opts.flag_fraction;

  const auto phis = littlewood_paley_sequence(xi);
  double acc = 0.0;
  for (std::size_t k = 0; k < phis.size(); ++k) {
    SampledFunction block = fhat;
    for (Index i = 0; i < block.count(); ++i) block.samples.row(i) *= phis[k](i);
    const double b = lp_norm(inverse_fourier(block), p);
    prof.block_norms.push_back(b);
    const double w = std::exp2(s * static_cast<double>(k)) * b;
    acc = std::isinf(q) ? std::max(acc, w) : acc + std::pow(w, q);
  }
  prof.value = std::isinf(q) ? acc : std::pow(acc, 1.0 / q);
  return prof;
}

std::vector<double> lp_kernel_constants(const SampledFunction& like) {
  SampledFunction hat;
  hat.half_width = std::numbers::pi / like.spacing();
  hat.domain = Domain::Frequency;
  hat.samples = ComplexMatrix::Zero(like.count(), 1);
  const auto phis = littlewood_paley_sequence(hat.grid());
  std::vector<double> out;
  for (const auto& phi : phis) {
    hat.samples.col(0) = phi.cast<Complex>();
    out.push_back(lp_norm(inverse_fourier(hat), 1.0));
  }
  return out;
}

}  // namespace polydecay::funcspace
