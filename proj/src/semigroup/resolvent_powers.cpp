#include <algorithm>
#include <cmath>

#include "polydecay/parallel.hpp"
#include "polydecay/resolvent.hpp"
#include "polydecay/semigroup.hpp"

namespace polydecay::semigroup {

nlohmann::json ResolventPowerReport::to_json() const {
  return {{"model", model_tag}, {"beta", beta}, {"n", n}, {"q", std::isinf(q) ? nlohmann::json("inf") : nlohmann::json(q)},
          {"tau", tau}, {"sup_ratio_per_k", sup_ratio_per_k}};
}

nlohmann::json ResolventPowerLadder::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rungs) rs.push_back(r.to_json());
  return {{"dims", dims}, {"rungs", rs}, {"max_ratio_per_k", max_ratio_per_k}, {"stable", stable}};
}

ResolventPowerReport verify_resolvent_powers(const zoo::GeneratorModel& model, double beta, int n, double q,
                                             std::size_t sample_vectors, std::uint64_t seed) {
  require(n >= 0, ErrorKind::PreconditionViolation, "verify_resolvent_powers: n must be >= 0");
  require(beta >= 0.0 && std::isfinite(beta), ErrorKind::PreconditionViolation, "verify_resolvent_powers: beta must be >= 0");
  require(q >= 1.0, ErrorKind::DomainError, "verify_resolvent_powers: q must be in [1, inf]");

  ResolventPowerReport rep;
  rep.model_tag = model.tag();
  rep.beta = beta;
  rep.n = n;
  rep.q = q;
  rep.tau = (n + 1) * beta;

  const Panel panel = make_panel(model, rep.tau, sample_vectors, seed);
  const auto ncols = static_cast<std::size_t>(panel.vectors.cols());
  std::vector<double> z(ncols);
  if (rep.tau > 0.0) {
    const InterpolationNorm znorm(model, rep.tau);
    parallel_for(ncols, [&](std::size_t c) { z[c] = znorm(panel.vectors.col(static_cast<Index>(c)), q); });
  } else {
    // τ = 0: the smoothness scale degenerates to X itself.
    const RealVector nx = linalg::column_lp_norms(panel.vectors, model.space_p);
    for (std::size_t c = 0; c < ncols; ++c) z[c] = nx(static_cast<Index>(c));
  }

  const resolvent::ResolventEvaluator ev(model.matrix);
  const auto grid = resolvent::default_grid(ev.eigenvalues());
  const int kmax = n + 1;

  // per_xi[i][k]: max over the panel of ‖R(iξ_i)^k x‖ / ‖x‖_Z.
  std::vector<std::vector<double>> per_xi(grid.size(), std::vector<double>(kmax + 1, 0.0));
  parallel_for(grid.size(), [&](std::size_t i) {
    ComplexMatrix y = panel.vectors;
    for (int k = 0; k <= kmax; ++k) {
      if (k > 0) y = ev.apply_power(Complex(0.0, grid[i]), 1, y);
      const RealVector nrm = linalg::column_lp_norms(y, model.space_p);
      double best = 0.0;
      for (std::size_t c = 0; c < ncols; ++c) best = std::max(best, nrm(static_cast<Index>(c)) / z[c]);
      per_xi[i][k] = best;
    }
  });
  rep.sup_ratio_per_k.assign(kmax + 1, 0.0);
  for (const auto& row : per_xi)
    for (int k = 0; k <= kmax; ++k) rep.sup_ratio_per_k[k] = std::max(rep.sup_ratio_per_k[k], row[k]);
  return rep;
}

ResolventPowerLadder resolvent_power_ladder(const std::vector<zoo::GeneratorModel>& models, double beta, int n,
                                            double q, std::size_t sample_vectors, std::uint64_t seed) {
  require(!models.empty(), ErrorKind::PreconditionViolation, "resolvent_power_ladder: no models");
  ResolventPowerLadder lad;
  for (const auto& m : models) {
    lad.dims.push_back(static_cast<int>(m.dim()));
    lad.rungs.push_back(verify_resolvent_powers(m, beta, n, q, sample_vectors, seed));
  }
  lad.max_ratio_per_k.assign(n + 2, 0.0);
  lad.stable = true;
  for (int k = 0; k <= n + 1; ++k) {
    for (std::size_t i = 1; i < lad.rungs.size(); ++i) {
      const double r = lad.rungs[i].sup_ratio_per_k[k] / lad.rungs[i - 1].sup_ratio_per_k[k];
      lad.max_ratio_per_k[k] = std::max(lad.max_ratio_per_k[k], r);
      lad.stable = lad.stable && std::isfinite(r) && r <= 2.0;
    }
  }
  return lad;
}

}  // namespace polydecay::semigroup
