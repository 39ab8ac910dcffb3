#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <set>

#include "polydecay/parallel.hpp"
#include "polydecay/resolvent.hpp"
#include "polydecay/semigroup.hpp"

namespace polydecay::semigroup {

namespace {

double resolve_beta(const zoo::GeneratorModel& model, const std::optional<double>& beta) {
  if (beta) return *beta;
  if (model.beta_analytic) return *model.beta_analytic;
  return resolvent::sweep_imaginary_axis(model).beta_hat;
}

// Indices 0..7, the last index, then an even spread.
std::vector<Index> spread_indices(Index dim, std::size_t count) {
  const auto want = std::min<std::size_t>(count, static_cast<std::size_t>(dim));
  std::set<Index> pick;
  for (Index j = 0; j < std::min<Index>(8, dim) && pick.size() < want; ++j) pick.insert(j);
  if (pick.size() < want) pick.insert(dim - 1);
  for (std::size_t k = 0; k < want && pick.size() < want; ++k)
    pick.insert(static_cast<Index>(k * static_cast<std::size_t>(dim - 1) / std::max<std::size_t>(want - 1, 1)));
  for (Index j = 0; pick.size() < want; ++j) pick.insert(j);
  return {pick.begin(), pick.end()};
}

}  // namespace

std::string describe(const NormKind& kind) {
  if (const auto* i = std::get_if<InterpNorm>(&kind)) {
    return std::isinf(i->q) ? "interp(q=inf)" : "interp(q=" + nlohmann::json(i->q).dump() + ")";
  }
  return "fractional";
}

Panel make_panel(const zoo::GeneratorModel& model, double tau, std::size_t count, std::uint64_t seed) {
  require(count > 0, ErrorKind::PreconditionViolation, "make_panel: sample count must be > 0");
  const Index d = model.dim();
  const auto idx = spread_indices(d, std::max<std::size_t>(1, count / 4));
  const bool smooth = tau > 0.0;
  std::vector<ComplexVector> cols;
  Panel panel;
  for (Index j : idx) {
    ComplexVector e = ComplexVector::Zero(d);
    e(j) = 1.0;
    cols.push_back(e);
    panel.ids.push_back("e" + std::to_string(j));
  }
  if (smooth) {
    const auto inv = linalg::fractional_power(linalg::BlockDiagonal::decompose(-model.matrix), -tau);
    for (Index j : idx) {
      if (cols.size() >= count) break;
      ComplexMatrix e = ComplexMatrix::Zero(d, 1);
      e(j, 0) = 1.0;
      ComplexVector s = inv.apply(e).col(0);
      s /= s.norm();
      cols.push_back(s);
      panel.ids.push_back("smooth" + std::to_string(j));
    }
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t g = 0; cols.size() < count; ++g) {
    ComplexVector v(d);
    for (Index i = 0; i < d; ++i) v(i) = Complex(gauss(rng), gauss(rng));
    cols.push_back(v / v.norm());
    panel.ids.push_back("gauss" + std::to_string(g));
  }
  if (cols.size() > count) {
    cols.resize(count);
    panel.ids.resize(count);
  }
  panel.vectors.resize(d, static_cast<Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) panel.vectors.col(static_cast<Index>(c)) = cols[c];
  return panel;
}

void DecayReport::write_csv(std::ostream& os) const {
  os << "t,norm,scaled_norm\n";
  os.precision(17);
  for (std::size_t j = 0; j < t_grid.size(); ++j) os << t_grid[j] << ',' << worst_orbit[j] << ',' << std::pow(t_grid[j], rho) * worst_orbit[j] << '\n';
}

nlohmann::json DecayReport::to_json() const {
  return {{"model", model_tag},         {"rho", rho},
          {"p", p},                     {"beta", beta},
          {"tau_used", tau_used},       {"norm_kind", norm_kind},
          {"sup_constant", sup_constant}, {"worst_vector", worst_vector},
          {"worst_t", worst_t},         {"ladder_dims", ladder_dims},
          {"ladder_trend", ladder_trend}, {"ladder_ratios", ladder_ratios},
          {"verdict", verdict}};
}

DecayReport decay_verification(const zoo::GeneratorModel& model, const DecayOptions& opts) {
  require(opts.rho >= 0.0, ErrorKind::PreconditionViolation, "decay_verification: rho must be >= 0");
  require(opts.p >= 1.0 && opts.p <= 2.0, ErrorKind::DomainError, "decay_verification: p must lie in [1, 2]");
  require(!opts.t_grid.empty(), ErrorKind::PreconditionViolation, "decay_verification: empty time grid");

  DecayReport rep;
  rep.model_tag = model.tag();
  rep.rho = opts.rho;
  rep.p = opts.p;
  rep.beta = resolve_beta(model, opts.beta);
  rep.tau_used = opts.tau_override ? *opts.tau_override : resolvent::predict_decay_rates(rep.beta, opts.p, opts.rho).tau_main;
  rep.norm_kind = describe(opts.norm);
  rep.t_grid = opts.t_grid;

  const Panel panel = make_panel(model, rep.tau_used, opts.sample_count, opts.seed);
  const auto ncols = static_cast<std::size_t>(panel.vectors.cols());
  std::vector<double> z(ncols);
  if (const auto* in = std::get_if<InterpNorm>(&opts.norm)) {
    require(rep.tau_used > 0.0, ErrorKind::PreconditionViolation, "decay_verification: interpolation norm needs tau > 0");
    const InterpolationNorm norm(model, rep.tau_used);
    parallel_for(ncols, [&](std::size_t c) { z[c] = norm(panel.vectors.col(static_cast<Index>(c)), in->q); });
  } else {
    const auto pw = linalg::fractional_power(linalg::BlockDiagonal::decompose(-model.matrix), rep.tau_used);
    const ComplexMatrix image = pw.apply(panel.vectors);
    const RealVector a = linalg::column_lp_norms(panel.vectors, model.space_p);
    const RealVector b = linalg::column_lp_norms(image, model.space_p);
    for (std::size_t c = 0; c < ncols; ++c) z[c] = a(static_cast<Index>(c)) + b(static_cast<Index>(c));
  }

  const auto norms = Propagator(model).orbit_norms(panel.vectors, opts.t_grid);
  std::size_t worst_c = 0;
  for (std::size_t j = 0; j < opts.t_grid.size(); ++j) {
    const double w = std::pow(opts.t_grid[j], opts.rho);
    for (std::size_t c = 0; c < ncols; ++c) {
      const double v = w * norms[j][c] / z[c];
      if (v > rep.sup_constant) {
        rep.sup_constant = v;
        rep.worst_t = opts.t_grid[j];
        worst_c = c;
      }
    }
  }
  rep.worst_vector = panel.ids[worst_c];
  for (std::size_t j = 0; j < opts.t_grid.size(); ++j) rep.worst_orbit.push_back(norms[j][worst_c] / z[worst_c]);
  rep.verdict = std::isfinite(rep.sup_constant) ? "pass" : "fail";
  return rep;
}

DecayReport decay_ladder(const std::vector<zoo::GeneratorModel>& models, const DecayOptions& opts) {
  require(!models.empty(), ErrorKind::PreconditionViolation, "decay_ladder: no models");
  DecayOptions o = opts;
  if (!o.beta) o.beta = resolve_beta(models.back(), std::nullopt);
  DecayReport last;
  std::vector<double> trend;
  std::vector<int> dims;
  bool finite = true;
  for (const auto& m : models) {
    last = decay_verification(m, o);
    trend.push_back(last.sup_constant);
    dims.push_back(static_cast<int>(m.dim()));
    finite = finite && std::isfinite(last.sup_constant);
  }
  last.ladder_trend = trend;
  last.ladder_dims = dims;
  bool bounded = finite, diverging = finite && trend.size() > 1;
  for (std::size_t i = 1; i < trend.size(); ++i) {
    const double r = trend[i] / trend[i - 1];
    last.ladder_ratios.push_back(r);
    bounded = bounded && r <= 2.0;
    diverging = diverging && r >= 1.5;
  }
  last.verdict = bounded ? "pass" : (diverging ? "diverging" : "fail");
  return last;
}

nlohmann::json SharpnessReport::to_json() const {
  nlohmann::json rs = nlohmann::json::array();
  for (const auto& r : rows) {
    rs.push_back({{"fraction", r.fraction},
                  {"tau", r.tau},
                  {"sup_constants", r.sup_constants},
                  {"ratios", r.ratios},
                  {"classification", r.classification}});
  }
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : family.params) params[k] = v;
  return {{"family", family.family}, {"params", params}, {"dims", dims}, {"beta", beta},
          {"tau_full", tau_full},    {"norm_kind", norm_kind}, {"rows", rs}};
}

SharpnessReport sharpness_probe(const zoo::FamilySpec& family, const std::vector<double>& fractions,
                                const std::vector<int>& dims, const NormKind& norm, std::size_t sample_count,
                                std::uint64_t seed) {
  require(!dims.empty(), ErrorKind::PreconditionViolation, "sharpness_probe: dims must be nonempty");
  for (double f : fractions) require(f > 0.0 && f <= 1.0, ErrorKind::PreconditionViolation, "sharpness_probe: fractions must lie in (0, 1]");
  const auto models = zoo::truncation_ladder(family, dims);

  SharpnessReport rep;
  rep.family = family;
  rep.dims = dims;
  rep.beta = resolvent::sweep_imaginary_axis(models.back()).beta_hat;
  rep.tau_full = resolvent::predict_decay_rates(rep.beta, 2.0, 0.0).tau_main;
  rep.norm_kind = describe(norm);

  for (double f : fractions) {
    SharpnessRow row;
    row.fraction = f;
    row.tau = f * rep.tau_full;
    DecayOptions o;
    o.rho = 0.0;
    o.p = 2.0;
    o.norm = norm;
    o.sample_count = sample_count;
    o.seed = seed;
    o.beta = rep.beta;
    o.tau_override = row.tau;
    for (const auto& m : models) row.sup_constants.push_back(decay_verification(m, o).sup_constant);
    bool div = row.sup_constants.size() > 1, bnd = row.sup_constants.size() > 1;
    for (std::size_t i = 1; i < row.sup_constants.size(); ++i) {
      const double r = row.sup_constants[i] / row.sup_constants[i - 1];
      row.ratios.push_back(r);
      div = div && r >= 1.5;
      bnd = bnd && r <= 1.25;
    }
    row.classification = div ? "diverging" : (bnd ? "bounded" : "inconclusive");
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace polydecay::semigroup
