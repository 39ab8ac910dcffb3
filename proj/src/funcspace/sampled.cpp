#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <mutex>
#include <numbers>
#include <ostream>

#include "polydecay/funcspace.hpp"
#include "polydecay/linalg.hpp"

namespace polydecay::funcspace {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool power_of_two(Index n) { return n >= 2 && (n & (n - 1)) == 0; }

// Unnormalized DFT of every column (sign -1 forward, +1 backward). Data goes
// through fftw_malloc buffers so the planner always sees the same alignment.
ComplexMatrix fft_columns(const ComplexMatrix& in, int sign) {
  const int n = static_cast<int>(in.rows());
  const int howmany = static_cast<int>(in.cols());
  const auto total = static_cast<std::size_t>(in.size());
  auto* buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * std::max<std::size_t>(total, 1)));
  require(buf != nullptr, ErrorKind::PreconditionViolation, "fft: allocation failed");
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_many_dft(1, &n, howmany, buf, nullptr, 1, n, buf, nullptr, 1, n, sign, FFTW_ESTIMATE);
  }
  if (plan == nullptr) {
    fftw_free(buf);
    fail(ErrorKind::PreconditionViolation, "fft: planner failed");
  }
  std::memcpy(buf, in.data(), sizeof(fftw_complex) * total);
  fftw_execute(plan);
  ComplexMatrix out(in.rows(), in.cols());
  std::memcpy(static_cast<void*>(out.data()), buf, sizeof(fftw_complex) * total);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(buf);
  return out;
}

}  // namespace

RealVector SampledFunction::grid() const {
  RealVector g(count());
  for (Index j = 0; j < count(); ++j) g(j) = point(j);
  return g;
}

double SampledFunction::pointwise_norm(Index j) const {
  return linalg::lp_vector_norm(samples.row(j).transpose(), ambient_p);
}

void SampledFunction::write_csv(std::ostream& os) const {
  os << (domain == Domain::Time ? "t" : "xi");
  for (Index c = 0; c < dim(); ++c) os << ",re" << c + 1 << ",im" << c + 1;
  os << '\n';
  os.precision(17);
  for (Index j = 0; j < count(); ++j) {
    os << point(j);
    for (Index c = 0; c < dim(); ++c) os << ',' << samples(j, c).real() << ',' << samples(j, c).imag();
    os << '\n';
  }
}

SampledFunction sample(double half_width, Index count, const VectorFunction& f, Index dim, double ambient_p) {
  require(half_width > 0.0, ErrorKind::PreconditionViolation, "sample: half width must be > 0");
  require(power_of_two(count), ErrorKind::PreconditionViolation, "sample: count must be a power of two");
  require(dim >= 1, ErrorKind::PreconditionViolation, "sample: dim must be >= 1");
  SampledFunction s;
  s.half_width = half_width;
  s.ambient_p = ambient_p;
  s.samples.resize(count, dim);
  for (Index j = 0; j < count; ++j) {
    const ComplexVector v = f(s.point(j));
    require(v.size() == dim, ErrorKind::PreconditionViolation, "sample: function returned wrong dimension");
    s.samples.row(j) = v.transpose();
  }
  require(all_finite(s.samples), ErrorKind::PreconditionViolation, "sample: non-finite samples");
  return s;
}

SampledFunction sample_scalar(double half_width, Index count, const std::function<Complex(double)>& f) {
  return sample(half_width, count, [&](double t) { return ComplexVector::Constant(1, f(t)); }, 1);
}

// F(ξ_k) = dx Σ_j f(t_j) e^{-iξ_k t_j}, ξ_k = -π/dx + kπ/L. With t_j = -L + j·dx
// the kernel factors as e^{iξ_k L} (-1)^j e^{-2πi jk/N}.
SampledFunction discrete_fourier(const SampledFunction& f) {
  require(f.domain == Domain::Time, ErrorKind::PreconditionViolation, "discrete_fourier: input must be time-domain");
  require(power_of_two(f.count()), ErrorKind::PreconditionViolation, "discrete_fourier: count must be a power of two");
  const Index n = f.count();
  const double dx = f.spacing(), l = f.half_width;
  ComplexMatrix work = f.samples;
  for (Index j = 1; j < n; j += 2) work.row(j) *= -1.0;
  ComplexMatrix out = fft_columns(work, FFTW_FORWARD);
  SampledFunction g;
  g.half_width = std::numbers::pi / dx;
  g.ambient_p = f.ambient_p;
  g.domain = Domain::Frequency;
  for (Index k = 0; k < n; ++k) {
    const double xi = -std::numbers::pi / dx + static_cast<double>(k) * std::numbers::pi / l;
    out.row(k) *= dx * std::polar(1.0, xi * l);
  }
  g.samples = std::move(out);
  return g;
}

SampledFunction inverse_fourier(const SampledFunction& fhat) {
  require(fhat.domain == Domain::Frequency, ErrorKind::PreconditionViolation,
          "inverse_fourier: input must be frequency-domain");
  require(power_of_two(fhat.count()), ErrorKind::PreconditionViolation, "inverse_fourier: count must be a power of two");
  const Index n = fhat.count();
  const double dx = std::numbers::pi / fhat.half_width;
  const double l = 0.5 * static_cast<double>(n) * dx;
  ComplexMatrix work = fhat.samples;
  for (Index k = 0; k < n; ++k) work.row(k) *= std::polar(1.0 / (dx * static_cast<double>(n)), -fhat.point(k) * l);
  ComplexMatrix out = fft_columns(work, FFTW_BACKWARD);
  for (Index j = 1; j < n; j += 2) out.row(j) *= -1.0;
  SampledFunction f;
  f.half_width = l;
  f.ambient_p = fhat.ambient_p;
  f.domain = Domain::Time;
  f.samples = std::move(out);
  return f;
}

double lp_norm(const SampledFunction& f, double p) {
  require(p >= 1.0, ErrorKind::DomainError, "lp_norm: p must be in [1, inf]");
  double acc = 0.0;
  if (std::isinf(p)) {
    for (Index j = 0; j < f.count(); ++j) acc = std::max(acc, f.pointwise_norm(j));
    return acc;
  }
  for (Index j = 0; j < f.count(); ++j) acc += std::pow(f.pointwise_norm(j), p);
  return std::pow(f.spacing() * acc, 1.0 / p);
}

double weighted_lp_norm(const SampledFunction& f, double p, double gamma) {
  require(p >= 1.0 && std::isfinite(p), ErrorKind::DomainError, "weighted_lp_norm: p must be finite and >= 1");
  require(std::isfinite(gamma), ErrorKind::DomainError, "weighted_lp_norm: gamma must be finite");
  const double dx = f.spacing();
  const Index origin = f.count() / 2;  // -h + (N/2)·dx = 0
  const double f0 = std::pow(f.pointwise_norm(origin), p);
  if (gamma <= -1.0 && f0 > 0.0) {
    fail(ErrorKind::NonIntegrableWeight, "weighted_lp_norm: |x|^gamma with gamma <= -1 against f(0) != 0");
  }
  double acc = 0.0;
  for (Index j = 0; j < f.count(); ++j) {
    if (j == origin) continue;
    acc += std::pow(f.pointwise_norm(j), p) * std::pow(std::abs(f.point(j)), gamma);
  }
  acc *= dx;
  if (f0 > 0.0) {
    // Two-sided Navot expansion through the second-derivative term.
    const double gm = std::pow(f.pointwise_norm(origin - 1), p), gp = std::pow(f.pointwise_norm(origin + 1), p);
    const double g2 = (gm - 2.0 * f0 + gp) / (dx * dx);
    acc -= 2.0 * std::riemann_zeta(-gamma) * std::pow(dx, 1.0 + gamma) * f0;
    acc -= std::riemann_zeta(-gamma - 2.0) * std::pow(dx, 3.0 + gamma) * g2;
  }
  return std::pow(std::max(acc, 0.0), 1.0 / p);
}

}  // namespace polydecay::funcspace
