#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>

#include "polydecay/linalg.hpp"
#include "polydecay/parallel.hpp"
#include "polydecay/resolvent.hpp"

namespace polydecay::resolvent {

namespace {

struct NormPair {
  double upper;
  double lower;
};

// Norm of R(z, A) in the model's ambient ℓ^p.
NormPair resolvent_norm(const zoo::GeneratorModel& model, const ResolventEvaluator& ev, Complex z) {
  if (model.space_p == 2.0) {
    const double v = ev.norm(z);
    return {v, v};
  }
  const ComplexMatrix r = linalg::solve_shifted(model.matrix, z, ComplexMatrix::Identity(model.dim(), model.dim()));
  const auto iv = linalg::lp_operator_norm(r, model.space_p);
  return {iv.upper, iv.lower};
}

void evaluate(const zoo::GeneratorModel& model, const ResolventEvaluator& ev, const std::vector<double>& xi,
              std::vector<double>& upper, std::vector<double>& lower) {
  upper.assign(xi.size(), 0.0);
  lower.assign(xi.size(), 0.0);
  parallel_for(xi.size(), [&](std::size_t j) {
    const auto n = resolvent_norm(model, ev, Complex(0.0, xi[j]));
    upper[j] = n.upper;
    lower[j] = n.lower;
  });
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(a, b); }

}  // namespace

double ResolventProfile::envelope(double xi) const { return c_hat * std::pow(1.0 + std::abs(xi), beta_hat); }

void ResolventProfile::write_csv(std::ostream& os) const {
  os << "xi,norm,envelope\n";
  os.precision(17);
  for (std::size_t j = 0; j < xi_grid.size(); ++j) os << xi_grid[j] << ',' << norms[j] << ',' << envelope(xi_grid[j]) << '\n';
}

nlohmann::json ResolventProfile::to_json() const {
  return {{"points", xi_grid.size()},   {"exact", exact}, {"fitted", fitted},
          {"beta_hat", beta_hat},       {"c_hat", c_hat},
          {"fit_residual", fit_residual}, {"window_max", window_max}};
}

std::vector<double> default_grid(const ComplexVector& eigenvalues) {
  std::vector<double> grid;
  for (int j = 0; j <= 40; ++j) grid.push_back(-2.0 + 0.1 * j);
  const int per_decade = 64;
  for (int j = 0; j <= 5 * per_decade; ++j) {
    const double v = std::pow(10.0, -1.0 + static_cast<double>(j) / per_decade);
    grid.push_back(v);
    grid.push_back(-v);
  }
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const double im = eigenvalues(i).imag();
    if (std::abs(im) <= 1e4) grid.push_back(im);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)); }),
             grid.end());
  return grid;
}

ResolventProfile sweep_imaginary_axis(const zoo::GeneratorModel& model, std::vector<double> grid, const SweepOptions& opts) {
  require(!grid.empty(), ErrorKind::PreconditionViolation, "sweep_imaginary_axis: empty grid");
  require(std::is_sorted(grid.begin(), grid.end()), ErrorKind::PreconditionViolation, "sweep_imaginary_axis: grid must be sorted");

  const ResolventEvaluator ev(model.matrix);
  ResolventProfile prof;
  prof.exact = model.space_p == 1.0 || model.space_p == 2.0 || std::isinf(model.space_p);
  prof.xi_grid = std::move(grid);
  evaluate(model, ev, prof.xi_grid, prof.norms, prof.norms_lower);

  if (opts.refine) {
    for (int round = 0; round < opts.max_rounds && prof.xi_grid.size() < opts.max_points; ++round) {
      const auto& x = prof.xi_grid;
      const auto& n = prof.norms;
      std::vector<double> extra;
      for (std::size_t j = 1; j + 1 < x.size(); ++j) {
        if (!(n[j] >= n[j - 1] && n[j] >= n[j + 1])) continue;
        for (std::size_t nb : {j - 1, j + 1}) {
          const double gap = x[j] - x[nb];
          if (relative_gap(n[j], n[nb]) <= opts.refine_tol) continue;
          if (std::abs(gap) <= 1e-12 * std::max(1.0, std::abs(x[j]))) continue;
          extra.push_back(x[j] - gap / 3.0);
          extra.push_back(x[j] - 2.0 * gap / 3.0);
        }
      }
      if (extra.empty()) break;
      std::sort(extra.begin(), extra.end());
      extra.erase(std::unique(extra.begin(), extra.end()), extra.end());
      std::vector<double> eu, el;
      evaluate(model, ev, extra, eu, el);

      std::vector<double> nx, nu, nl;
      nx.reserve(x.size() + extra.size());
      std::size_t a = 0, b = 0;
      while (a < x.size() || b < extra.size()) {
        if (b >= extra.size() || (a < x.size() && x[a] <= extra[b])) {
          nx.push_back(x[a]);
          nu.push_back(prof.norms[a]);
          nl.push_back(prof.norms_lower[a]);
          ++a;
        } else {
          nx.push_back(extra[b]);
          nu.push_back(eu[b]);
          nl.push_back(el[b]);
          ++b;
        }
      }
      prof.xi_grid = std::move(nx);
      prof.norms = std::move(nu);
      prof.norms_lower = std::move(nl);
    }
  }

  double window = 0.0;
  for (Index i = 0; i < ev.eigenvalues().size(); ++i) window = std::max(window, std::abs(ev.eigenvalues()(i).imag()));
  prof.window_max = window;
  std::size_t tail = 0;
  for (double x : prof.xi_grid) tail += std::abs(x) >= 1.0 ? 1 : 0;
  if (tail < 8) {
    // Too few axis points for an envelope: report the norms only.
    prof.fitted = false;
    prof.beta_hat = prof.c_hat = prof.fit_residual = std::numeric_limits<double>::quiet_NaN();
    return prof;
  }
  const auto fit = fit_growth_exponent(prof.xi_grid, prof.norms, window);
  prof.beta_hat = fit.beta;
  prof.c_hat = fit.c;
  prof.fit_residual = fit.residual;
  return prof;
}

ResolventProfile sweep_imaginary_axis(const zoo::GeneratorModel& model, const SweepOptions& opts) {
  return sweep_imaginary_axis(model, default_grid(zoo::eigenvalues(model.matrix)), opts);
}

HalfPlaneReport verify_half_plane_bound(const zoo::GeneratorModel& model, double beta, double c, std::size_t sample_count,
                                        std::uint64_t seed) {
  require(sample_count > 0, ErrorKind::PreconditionViolation, "verify_half_plane_bound: sample_count must be > 0");
  require(c > 0.0 && beta >= 0.0, ErrorKind::DomainError, "verify_half_plane_bound: need c > 0, beta >= 0");
  const ResolventEvaluator ev(model.matrix);

  std::vector<double> ordinates;
  for (Index i = 0; i < ev.eigenvalues().size(); ++i) {
    const double im = ev.eigenvalues()(i).imag();
    if (std::abs(im) <= 1e4) ordinates.push_back(im);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, unit(rng)); };

  std::vector<Complex> lambdas;
  lambdas.reserve(sample_count);
  const std::size_t n_lines = 24;
  for (std::size_t s = 0; s < sample_count; ++s) {
    Complex z;
    switch (s % 3) {
      case 0: {  // vertical lines Re λ = 10^{-4..3}
        const double re = std::pow(10.0, -4.0 + 7.0 * static_cast<double>(s / 3 % n_lines) / (n_lines - 1));
        const double im = log_uniform(1e-2, 1e4) * (unit(rng) < 0.5 ? -1.0 : 1.0);
        z = Complex(re, im);
        break;
      }
      case 1: {  // arcs |λ| = r
        const double r = log_uniform(1e-2, 1e4);
        const double phi = (unit(rng) - 0.5) * std::numbers::pi;
        z = std::polar(r, phi);
        break;
      }
      default: {  // close to spectral ordinates
        const double re = log_uniform(1e-6, 1.0);
        double im = log_uniform(1e-2, 1e4);
        if (!ordinates.empty()) {
          const auto k = static_cast<std::size_t>(unit(rng) * ordinates.size()) % ordinates.size();
          im = ordinates[k] + (unit(rng) - 0.5) * 1e-2;
        }
        z = Complex(re, im);
      }
    }
    if (z.real() <= 0.0) z.real(1e-8);
    z.real(std::min(z.real(), 1e3));
    if (std::abs(z) > 1e4) z *= 1e4 / std::abs(z);
    lambdas.push_back(z);
  }

  std::vector<double> ratio(lambdas.size());
  parallel_for(lambdas.size(), [&](std::size_t j) {
    const double n = resolvent_norm(model, ev, lambdas[j]).upper;
    ratio[j] = n / (c * std::pow(1.0 + std::abs(lambdas[j]), beta));
  });

  HalfPlaneReport rep;
  rep.samples = lambdas.size();
  for (std::size_t j = 0; j < ratio.size(); ++j) {
    if (ratio[j] > rep.max_ratio) {
      rep.max_ratio = ratio[j];
      rep.worst_lambda = lambdas[j];
    }
  }
  rep.pass = rep.max_ratio <= 1.05;
  return rep;
}

}  // namespace polydecay::resolvent
