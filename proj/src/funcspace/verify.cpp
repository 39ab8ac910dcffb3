#include <algorithm>
#include <cmath>
#include <random>

#include "polydecay/funcspace.hpp"
#include "polydecay/linalg.hpp"
#include "polydecay/parallel.hpp"
#include "polydecay/resolvent.hpp"
#include "polydecay/semigroup.hpp"

namespace polydecay::funcspace {

namespace {

constexpr double kBaseHalfWidth = 16.0;

void require_window_decay(const SampledFunction& f, const char* who) {
  double peak = 0.0, edge = 0.0;
  for (Index j = 0; j < f.count(); ++j) peak = std::max(peak, f.pointwise_norm(j));
  const Index n = f.count();
  for (Index j : {Index(0), Index(1), n - 2, n - 1}) edge = std::max(edge, f.pointwise_norm(j));
  require(edge <= 1e-10 * peak, ErrorKind::PreconditionViolation,
          std::string(who) + ": sample function does not decay below 1e-10 at the window edge");
}

StabilityReport finish(std::vector<Index> res, std::vector<double> ratios) {
  StabilityReport rep;
  rep.resolutions = std::move(res);
  rep.sup_ratio = std::move(ratios);
  bool finite = true;
  for (std::size_t i = 0; i < rep.sup_ratio.size(); ++i) {
    finite = finite && std::isfinite(rep.sup_ratio[i]);
    if (i > 0) rep.drift = std::max(rep.drift, std::abs(rep.sup_ratio[i] - rep.sup_ratio[i - 1]) / rep.sup_ratio[i - 1]);
  }
  rep.pass = finite && rep.drift <= 0.1;
  return rep;
}

double sup_over(std::size_t n, const std::function<double(std::size_t)>& ratio) {
  std::vector<double> r(n);
  parallel_for(n, [&](std::size_t i) { r[i] = ratio(i); });
  return r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
}

}  // namespace

SampledFunction truncate_positive(const SampledFunction& f) {
  require(f.domain == Domain::Time, ErrorKind::PreconditionViolation, "truncate_positive: input must be time-domain");
  SampledFunction g = f;
  const Index origin = g.count() / 2;
  g.samples.topRows(origin).setZero();
  g.samples.row(origin) *= 0.5;
  return g;
}

nlohmann::json StabilityReport::to_json() const {
  return {{"resolutions", resolutions}, {"sup_ratio", sup_ratio}, {"drift", drift}, {"pass", pass}};
}

nlohmann::json TruncationOrbitReport::to_json() const {
  return {{"truncation", truncation.to_json()},
          {"orbit", orbit.to_json()},
          {"half_width_used", half_width_used},
          {"pass", pass}};
}

ComplexVector PanelFunction::operator()(double t) const {
  ComplexVector v = ComplexVector::Zero(bumps.front().amplitude.size());
  for (const auto& b : bumps) {
    const double u = (t - b.center) / b.width;
    v += b.amplitude * std::polar(std::exp(-0.5 * u * u), b.frequency * t);
  }
  return v;
}

std::vector<PanelFunction> gaussian_panel(std::size_t count, Index dim, std::uint64_t seed, double max_frequency,
                                          double center_spread) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<PanelFunction> out(count);
  for (auto& f : out) {
    const int bumps = 1 + static_cast<int>(unit(rng) * 3.0);
    for (int b = 0; b < bumps; ++b) {
      PanelFunction::Bump bump;
      bump.amplitude.resize(dim);
      for (Index i = 0; i < dim; ++i) bump.amplitude(i) = Complex(gauss(rng), gauss(rng));
      bump.amplitude /= bump.amplitude.norm();
      bump.center = center_spread * (2.0 * unit(rng) - 1.0);
      bump.width = 0.3 + 1.2 * unit(rng);
      bump.frequency = max_frequency * (2.0 * unit(rng) - 1.0);
      f.bumps.push_back(std::move(bump));
    }
  }
  return out;
}

StabilityReport verify_hardy_littlewood(double p, std::size_t trial_count, std::uint64_t seed,
                                        const std::vector<Index>& resolutions, HLVariant variant, Index vector_dim) {
  if (variant == HLVariant::Type) {
    require(p > 1.0 && p <= 2.0, ErrorKind::DomainError, "verify_hardy_littlewood: type variant needs p in (1, 2]");
  } else {
    require(p >= 2.0 && std::isfinite(p), ErrorKind::DomainError, "verify_hardy_littlewood: cotype variant needs p in [2, inf)");
  }
  require(trial_count > 0 && !resolutions.empty(), ErrorKind::PreconditionViolation,
          "verify_hardy_littlewood: need trials and resolutions");
  const auto panel = gaussian_panel(trial_count, vector_dim, seed);
  std::vector<double> sups;
  for (Index n : resolutions) {
    sups.push_back(sup_over(panel.size(), [&](std::size_t i) {
      const SampledFunction f = sample(kBaseHalfWidth, n, panel[i], vector_dim);
      require_window_decay(f, "verify_hardy_littlewood");
      const SampledFunction fhat = discrete_fourier(f);
      if (variant == HLVariant::Type) return weighted_lp_norm(fhat, p, p - 2.0) / lp_norm(f, p);
      return lp_norm(fhat, p) / weighted_lp_norm(f, p, p - 2.0);
    }));
  }
  return finish(resolutions, std::move(sups));
}

StabilityReport verify_multiplier_bound(const zoo::GeneratorModel& model, const MultiplierOptions& opts) {
  require(opts.power >= 1, ErrorKind::PreconditionViolation, "verify_multiplier_bound: power must be >= 1");
  require(opts.p >= 1.0 && std::isfinite(opts.p), ErrorKind::DomainError, "verify_multiplier_bound: p must be finite and >= 1");
  require(opts.samples > 0 && !opts.resolutions.empty(), ErrorKind::PreconditionViolation,
          "verify_multiplier_bound: need samples and resolutions");
  double tau = 0.0;
  if (opts.tau) {
    tau = *opts.tau;
  } else {
    const double beta = model.beta_analytic ? *model.beta_analytic : resolvent::sweep_imaginary_axis(model).beta_hat;
    tau = opts.power * beta;
  }
  require(tau >= 0.0, ErrorKind::PreconditionViolation, "verify_multiplier_bound: tau must be >= 0");

  const resolvent::ResolventEvaluator ev(model.matrix);
  const auto smoothing = linalg::fractional_power(linalg::BlockDiagonal::decompose(-model.matrix), -tau);
  const SymbolAction symbol = [&](double xi, const ComplexVector& v) -> ComplexVector {
    return ev.apply_power(Complex(0.0, xi), opts.power, smoothing.apply(v)).col(0);
  };
  const double target_p = opts.target == MultiplierTarget::Linf ? INFINITY : (opts.p == 1.0 ? INFINITY : opts.p / (opts.p - 1.0));
  const Index d = model.dim();
  const auto panel = gaussian_panel(opts.samples, d, opts.seed);

  std::vector<double> sups;
  for (Index n : opts.resolutions) {
    sups.push_back(sup_over(panel.size(), [&](std::size_t i) {
      const SampledFunction g = sample(opts.half_width, n, panel[i], d, model.space_p);
      require_window_decay(g, "verify_multiplier_bound");
      const double denom = besov_norm(g, opts.s, opts.p, opts.p).value;
      return lp_norm(apply_multiplier_action(symbol, g, d), target_p) / denom;
    }));
  }
  return finish(opts.resolutions, std::move(sups));
}

TruncationOrbitReport verify_truncation_and_orbit(const zoo::GeneratorModel& model, const TruncationOptions& opts) {
  require(opts.p >= 1.0 && std::isfinite(opts.p), ErrorKind::DomainError, "verify_truncation_and_orbit: p must be finite and >= 1");
  require(opts.s > 0.0 && opts.s < 1.0 / opts.p, ErrorKind::DomainError, "verify_truncation_and_orbit: s must lie in (0, 1/p)");
  require(opts.q >= 1.0, ErrorKind::DomainError, "verify_truncation_and_orbit: q must be in [1, inf]");
  require(opts.samples > 0 && !opts.resolutions.empty(), ErrorKind::PreconditionViolation,
          "verify_truncation_and_orbit: need samples and resolutions");
  const BesovOptions bopts{opts.overflow_fraction, 1e-8};
  TruncationOrbitReport rep;

  // (a) truncation at the origin on a scalar-pair Gaussian panel.
  {
    const auto panel = gaussian_panel(opts.samples, 2, opts.seed, 4.0, 1.0);
    std::vector<double> sups;
    for (Index n : opts.resolutions) {
      sups.push_back(sup_over(panel.size(), [&](std::size_t i) {
        const SampledFunction f = sample(kBaseHalfWidth, n, panel[i], 2);
        require_window_decay(f, "verify_truncation_and_orbit");
        return besov_norm(truncate_positive(f), opts.s, opts.p, opts.q, bopts).value /
               besov_norm(f, opts.s, opts.p, opts.q, bopts).value;
      }));
    }
    rep.truncation = finish(opts.resolutions, std::move(sups));
  }

  // (b) damped orbits t -> 1_{(0,∞)} e^{-ωt} T(t) x.
  {
    const double omega = opts.omega ? *opts.omega : std::max(0.0, model.omega_analytic.value_or(0.0) + 1.0);
    const semigroup::Propagator prop(model);
    double l = kBaseHalfWidth;
    int doublings = 0;
    while (std::exp(-omega * l) * prop.operator_norms({l}).front() > 1e-10) {
      require(++doublings <= 8, ErrorKind::PreconditionViolation,
              "verify_truncation_and_orbit: orbit does not decay inside the window; increase omega");
      l *= 2.0;
    }
    rep.half_width_used = l;
    const auto scale = static_cast<Index>(l / kBaseHalfWidth);

    const auto panel = semigroup::make_panel(model, opts.s, opts.samples, opts.seed);
    const semigroup::InterpolationNorm znorm(model, opts.s);
    const auto cols = static_cast<std::size_t>(panel.vectors.cols());
    std::vector<double> z(cols);
    parallel_for(cols, [&](std::size_t c) { z[c] = znorm(panel.vectors.col(static_cast<Index>(c)), opts.q); });

    std::vector<double> sups;
    for (Index base : opts.resolutions) {
      const Index n = base * scale;
      const double dx = 2.0 * l / static_cast<double>(n);
      const auto step = linalg::matrix_exponential(prop.blocks(), dx);
      const double damp = std::exp(-omega * dx);
      std::vector<SampledFunction> orbits(cols);
      for (auto& g : orbits) {
        g.half_width = l;
        g.ambient_p = model.space_p;
        g.samples = ComplexMatrix::Zero(n, model.dim());
      }
      ComplexMatrix y = panel.vectors;
      for (Index j = n / 2; j < n; ++j) {
        if (j > n / 2) y = damp * step.apply(y);
        for (std::size_t c = 0; c < cols; ++c) orbits[c].samples.row(j) = y.col(static_cast<Index>(c)).transpose();
      }
      for (auto& g : orbits) g.samples.row(n / 2) *= 0.5;
      sups.push_back(sup_over(cols, [&](std::size_t c) {
        return besov_norm(orbits[c], opts.s, opts.p, opts.q, bopts).value / z[c];
      }));
    }
    rep.orbit = finish(opts.resolutions, std::move(sups));
  }
  rep.pass = rep.truncation.pass && rep.orbit.pass;
  return rep;
}

}  // namespace polydecay::funcspace
