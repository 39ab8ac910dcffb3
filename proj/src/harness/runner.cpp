#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "polydecay/funcspace.hpp"
#include "polydecay/harness.hpp"
#include "polydecay/linalg.hpp"
#include "polydecay/parallel.hpp"
#include "polydecay/resolvent.hpp"
#include "polydecay/semigroup.hpp"
#include "polydecay/zoo.hpp"

namespace polydecay::harness {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Checks = std::vector<CheckRecord>;

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json nums(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

double read_number(const json& v) {
  if (v.is_string()) return INFINITY;  // validated to be "inf"
  return v.get<double>();
}

double pnum(const json& params, const char* key, double def) {
  return params.contains(key) ? read_number(params[key]) : def;
}

std::vector<double> pnums(const json& params, const char* key, std::vector<double> def) {
  if (!params.contains(key)) return def;
  std::vector<double> out;
  for (const auto& v : params[key]) out.push_back(read_number(v));
  return out;
}

std::vector<Index> pints(const json& params, const char* key, std::vector<Index> def) {
  if (!params.contains(key)) return def;
  std::vector<Index> out;
  for (const auto& v : params[key]) out.push_back(v.get<Index>());
  return out;
}

zoo::FamilySpec family_of(const json& model) {
  zoo::FamilySpec f;
  f.family = model.at("family").get<std::string>();
  if (model.contains("params")) {
    for (const auto& [k, v] : model["params"].items()) f.params[k] = v.get<double>();
  }
  if (model.contains("eigs")) {
    for (const auto& e : model["eigs"]) f.eigs.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  if (model.contains("space_p")) f.space_p = read_number(model["space_p"]);
  return f;
}

std::vector<int> dims_of(const json& model, std::vector<int> def) {
  if (!model.is_object() || !model.contains("dims") || model["dims"].empty()) return def;
  return model["dims"].get<std::vector<int>>();
}

std::vector<zoo::GeneratorModel> ladder_of(const json& model, std::vector<int> def = {16}) {
  const auto spec = family_of(model);
  if (spec.family == "diagonal") return {zoo::build(spec, 0)};
  const auto dims = dims_of(model, std::move(def));
  return zoo::truncation_ladder(spec, dims);
}

std::vector<int> matrix_dims(const std::vector<zoo::GeneratorModel>& models) {
  std::vector<int> d;
  for (const auto& m : models) d.push_back(static_cast<int>(m.dim()));
  return d;
}

void add(Checks& cs, const std::string& name, const std::string& anchor,
         const std::function<bool(json& measured, json& threshold)>& body) {
  CheckRecord r{name, anchor, json::object(), json::object(), ""};
  try {
    r.verdict = body(r.measured, r.threshold) ? "pass" : "fail";
  } catch (const Error& e) {
    r.verdict = "error";
    r.measured = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
  }
  cs.push_back(std::move(r));
}

double resolve_beta(const json& params, const zoo::GeneratorModel& model) {
  if (params.contains("beta")) return params["beta"].get<double>();
  if (model.beta_analytic) return *model.beta_analytic;
  return resolvent::sweep_imaginary_axis(model).beta_hat;
}

// Consecutive ratios within `factor` and all values finite.
bool ladder_stable(const std::vector<double>& v, double factor, std::vector<double>& ratios) {
  bool ok = true;
  for (double x : v) ok = ok && std::isfinite(x) && x > 0.0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    ratios.push_back(v[i] / v[i - 1]);
    ok = ok && ratios.back() <= factor;
  }
  return ok;
}

std::string csv_rows(const std::vector<std::string>& header, const std::vector<std::vector<double>>& cols) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  const std::size_t n = cols.empty() ? 0 : cols.front().size();
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c][r];
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------- rates

void run_rates(const ExperimentConfig& cfg, const fs::path&, Checks& cs) {
  const double beta = pnum(cfg.params, "beta", 1.0), p = pnum(cfg.params, "p", 2.0), rho = pnum(cfg.params, "rho", 0.0);
  add(cs, "rate table", "main decay exponent", [&](json& m, json& t) {
    const auto r = resolvent::predict_decay_rates(beta, p, rho);
    const double expected = (rho + 1.0) * beta + (2.0 / p - 1.0);
    m = r.to_json();
    t = {{"tau_main", expected}, {"abs_tol", 1e-15}};
    return std::abs(r.tau_main - expected) <= 1e-15 * std::max(1.0, std::abs(expected));
  });
  add(cs, "comparison rates", "comparison decay rates", [&](json& m, json& t) {
    const auto r = resolvent::predict_decay_rates(beta, p, rho);
    m = {{"tau_main", r.tau_main}, {"tau_old", r.tau_old}, {"tau_log", r.tau_log}, {"tau_bounded", r.tau_bounded},
         {"sigma_log_threshold", r.sigma_log_threshold}};
    t = {{"order", "tau_bounded <= tau_main <= tau_old"}};
    return r.tau_bounded <= r.tau_main && r.tau_main <= r.tau_old;
  });
}

// ---------------------------------------------------------------- sweep

void run_sweep(const ExperimentConfig& cfg, const fs::path& out, Checks& cs) {
  const auto models = ladder_of(cfg.model);
  const auto hp_samples = static_cast<std::size_t>(pnum(cfg.params, "half_plane_samples", 1000));
  for (const auto& model : models) {
    const std::string tag = model.tag();
    resolvent::ResolventProfile prof;
    const bool wave = model.family == "damped_wave";
    add(cs, "resolvent growth fit " + tag, wave ? "damped wave equation" : "resolvent growth hypothesis",
        [&](json& m, json& t) {
          prof = resolvent::sweep_imaginary_axis(model);
          std::ofstream csv(out / ("resolvent_" + std::to_string(model.dim()) + ".csv"));
          prof.write_csv(csv);
          std::vector<double> x, y, e;
          for (std::size_t i = 0; i < prof.xi_grid.size(); ++i) {
            if (prof.xi_grid[i] <= 0.0) continue;
            x.push_back(prof.xi_grid[i]);
            y.push_back(prof.norms[i]);
            e.push_back(prof.envelope(prof.xi_grid[i]));
          }
          write_text(out / ("resolvent_" + std::to_string(model.dim()) + ".svg"),
                     svg_plot("resolvent norm on the imaginary axis, " + tag,
                              {{"norm", x, y, false}, {"fitted envelope", x, e, true}}, true, true, "xi", "norm"));
          m = {{"beta_hat", prof.beta_hat}, {"c_hat", prof.c_hat}, {"fit_residual", prof.fit_residual},
               {"grid_points", prof.xi_grid.size()}};
          if (model.beta_analytic) {
            m["beta_analytic"] = *model.beta_analytic;
            t = {{"abs_beta_error_max", 0.1}};
            return std::abs(prof.beta_hat - *model.beta_analytic) <= 0.1;
          }
          t = {{"fit_residual", "finite"}};
          return std::isfinite(prof.beta_hat) && std::isfinite(prof.fit_residual);
        });
    add(cs, "half-plane envelope " + tag, "resolvent growth hypothesis", [&](json& m, json& t) {
      require(!prof.xi_grid.empty(), ErrorKind::PreconditionViolation, "half-plane check needs a successful sweep");
      const auto hp = resolvent::verify_half_plane_bound(model, prof.beta_hat, prof.c_hat, hp_samples, cfg.seed);
      m = {{"max_ratio", hp.max_ratio}, {"worst_lambda", {hp.worst_lambda.real(), hp.worst_lambda.imag()}}, {"samples", hp.samples}};
      t = {{"max_ratio", 1.05}};
      return hp.pass;
    });
  }
}

// ---------------------------------------------------------------- decay

semigroup::DecayOptions decay_options(const json& params, std::uint64_t seed) {
  semigroup::DecayOptions o;
  o.rho = pnum(params, "rho", 0.0);
  o.p = pnum(params, "p", 2.0);
  o.sample_count = static_cast<std::size_t>(pnum(params, "samples", 250));
  o.seed = seed;
  const std::string norm = params.value("norm", "interp");
  if (norm == "fractional") o.norm = semigroup::FractionalNorm{};
  else o.norm = semigroup::InterpNorm{pnum(params, "q", 2.0)};
  o.t_grid = semigroup::geometric_grid(pnum(params, "t_min", 1.0), pnum(params, "t_max", 100.0),
                                       static_cast<std::size_t>(pnum(params, "t_points", 64)));
  if (params.contains("beta")) o.beta = params["beta"].get<double>();
  if (params.contains("tau")) o.tau_override = params["tau"].get<double>();
  return o;
}

void decay_extended(const ExperimentConfig& cfg, const std::vector<zoo::GeneratorModel>& models, Checks& cs) {
  const double beta = resolve_beta(cfg.params, models.back());
  const auto samples = static_cast<std::size_t>(pnum(cfg.params, "samples", 250));
  const int n = static_cast<int>(pnum(cfg.params, "n", 0));
  const auto dims = matrix_dims(models);

  for (double q : pnums(cfg.params, "q_values", {1.0, 2.0, INFINITY})) {
    add(cs, "resolvent powers n=" + std::to_string(n) + " q=" + num(q).dump(), "resolvent powers on interpolation spaces",
        [&](json& m, json& t) {
          const auto lad = semigroup::resolvent_power_ladder(models, beta, n, q, samples, cfg.seed);
          m = lad.to_json();
          t = {{"max_ratio_per_k", 2.0}};
          return lad.stable;
        });
  }

  add(cs, "K-functional closed form", "interpolation space via K-functional", [&](json& m, json& t) {
    const std::vector<Complex> eig{{-1.0, 0.0}};
    const auto scalar = zoo::make_diagonal(eig);
    const ComplexVector one = ComplexVector::Ones(1);
    double worst = 0.0;
    for (int j = -10; j < 10; ++j) {
      const double tt = std::ldexp(1.0, j);
      worst = std::max(worst, std::abs(semigroup::k_functional(scalar, 1, tt, one) - std::min(1.0, 2.0 * tt)));
    }
    bool monotone = true;
    const semigroup::KFunctional k(models.front(), 1);
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> g;
    for (int inst = 0; inst < 10; ++inst) {
      ComplexVector x(models.front().dim());
      for (Index i = 0; i < x.size(); ++i) x(i) = Complex(g(rng), g(rng));
      const auto r = k.evaluate(std::exp2(4.0 * g(rng)), x);
      for (std::size_t i = 1; i < r.history.size(); ++i) monotone = monotone && r.history[i] <= r.history[i - 1];
      monotone = monotone && r.value <= r.relaxation_value;
    }
    m = {{"max_abs_error", worst}, {"refinement_monotone", monotone}};
    t = {{"max_abs_error", 1e-6}, {"refinement_monotone", true}};
    return worst <= 1e-6 && monotone;
  });

  add(cs, "interpolation sandwich", "interpolation and fractional domain sandwich", [&](json& m, json& t) {
    const double tau = pnum(cfg.params, "tau", beta);
    std::vector<double> lower, upper;
    for (const auto& model : models) {
      const auto panel = semigroup::make_panel(model, tau, samples, cfg.seed);
      const semigroup::InterpolationNorm in(model, tau);
      const auto cols = static_cast<std::size_t>(panel.vectors.cols());
      std::vector<double> r1(cols), r2(cols);
      parallel_for(cols, [&](std::size_t c) {
        const ComplexVector x = panel.vectors.col(static_cast<Index>(c));
        const auto kk = in.dyadic_k(x);
        const double frac = semigroup::fractional_domain_norm(model, tau, x);
        r1[c] = frac / in.aggregate(kk, 1.0);
        r2[c] = in.aggregate(kk, INFINITY) / frac;
      });
      lower.push_back(*std::max_element(r1.begin(), r1.end()));
      upper.push_back(*std::max_element(r2.begin(), r2.end()));
    }
    std::vector<double> ra, rb;
    const bool ok = ladder_stable(lower, 2.0, ra) && ladder_stable(upper, 2.0, rb);
    m = {{"dims", dims}, {"tau", tau}, {"frac_over_interp_q1", nums(lower)}, {"interp_qinf_over_frac", nums(upper)},
         {"ratios_q1", nums(ra)}, {"ratios_qinf", nums(rb)}};
    t = {{"ladder_ratio_max", 2.0}};
    return ok;
  });

  add(cs, "sectorial resolvent bound", "sectoriality of the negative generator", [&](json& m, json& t) {
    std::vector<double> sups;
    const double half = std::numbers::pi / 2.0 - 0.1;
    for (const auto& model : models) {
      const resolvent::ResolventEvaluator ev(model.matrix);
      std::vector<double> rows(17, 0.0);
      parallel_for(17, [&](std::size_t a) {
        const double theta = -half + 2.0 * half * static_cast<double>(a) / 16.0;
        for (int i = 0; i <= 60; ++i) {
          const double r = std::pow(10.0, -2.0 + 0.1 * i);
          const Complex lam = std::polar(r, theta);
          rows[a] = std::max(rows[a], r * ev.norm(lam));
        }
      });
      sups.push_back(*std::max_element(rows.begin(), rows.end()));
    }
    std::vector<double> ratios;
    const bool ok = ladder_stable(sups, 2.0, ratios);
    m = {{"dims", dims}, {"sup_lambda_resolvent", nums(sups)}, {"ratios", nums(ratios)}, {"half_angle", half}};
    t = {{"ladder_ratio_max", 2.0}};
    return ok;
  });

  add(cs, "matrix exponential cross-check", kPlumbing, [&](json& m, json& t) {
    double worst = 0.0;
    int checked = 0;
    for (const auto& model : models) {
      if (model.dim() > 128) continue;
      for (double tt : {1.0, 10.0}) {
        const ComplexMatrix e = linalg::matrix_exponential(model.matrix, tt);
        const ComplexMatrix ode = linalg::integrate_linear_ode(model.matrix, ComplexMatrix::Identity(model.dim(), model.dim()), tt);
        worst = std::max(worst, (e - ode).norm() / e.norm());
        ++checked;
      }
    }
    m = {{"max_relative_error", worst}, {"cases", checked}};
    t = {{"max_relative_error", 1e-8}};
    return checked > 0 && worst <= 1e-8;
  });
}

void run_decay(const ExperimentConfig& cfg, const fs::path& out, Checks& cs) {
  const auto models = ladder_of(cfg.model);
  const auto opts = decay_options(cfg.params, cfg.seed);
  const bool fractional = std::holds_alternative<semigroup::FractionalNorm>(opts.norm);
  std::string anchor = "decay in real interpolation norm";
  if (fractional) anchor = "decay in fractional domain norm";
  else if (opts.rho >= 1.0 && std::floor(opts.rho) == opts.rho) anchor = "integer-order decay";

  std::ostringstream name;
  name << "decay ladder " << models.front().family << " rho=" << num(opts.rho).dump() << ' ' << semigroup::describe(opts.norm);
  add(cs, name.str(), anchor, [&](json& m, json& t) {
    const auto rep = semigroup::decay_ladder(models, opts);
    std::ofstream csv(out / "decay.csv");
    rep.write_csv(csv);
    std::vector<double> guide;
    for (double tt : rep.t_grid) guide.push_back(rep.sup_constant * std::pow(tt, -rep.rho));
    write_text(out / "decay.svg", svg_plot("orbit of the worst panel vector, " + rep.model_tag,
                                          {{"||T(t)x|| / ||x||_Z", rep.t_grid, rep.worst_orbit, false},
                                           {"C t^-rho", rep.t_grid, guide, true}},
                                          true, true, "t", "norm"));
    m = rep.to_json();
    m["sup_constant"] = num(rep.sup_constant);
    m["ladder_trend"] = nums(rep.ladder_trend);
    m["ladder_ratios"] = nums(rep.ladder_ratios);
    t = {{"ladder_ratio_max", 2.0}, {"sup_constant", "finite"}};
    return rep.verdict == "pass";
  });
  if (cfg.params.value("extended", false)) decay_extended(cfg, models, cs);
}

// ---------------------------------------------------------------- sharpness

void run_sharpness(const ExperimentConfig& cfg, const fs::path& out, Checks& cs) {
  const auto spec = family_of(cfg.model);
  const auto dims = dims_of(cfg.model, {});
  const auto fractions = pnums(cfg.params, "fractions", {0.5, 1.0});
  const auto samples = static_cast<std::size_t>(pnum(cfg.params, "samples", 250));
  semigroup::NormKind norm = semigroup::FractionalNorm{};
  if (cfg.params.value("norm", "fractional") == "interp") norm = semigroup::InterpNorm{pnum(cfg.params, "q", 2.0)};

  semigroup::SharpnessReport rep;
  bool ran = false;
  add(cs, "sharpness probe", "Wrobel sharpness example", [&](json& m, json& t) {
    rep = semigroup::sharpness_probe(spec, fractions, dims, norm, samples, cfg.seed);
    ran = true;
    m = {{"beta_hat", rep.beta}, {"tau_full", rep.tau_full}, {"rows", rep.rows.size()}};
    t = {{"rows", fractions.size()}};
    return rep.rows.size() == fractions.size();
  });
  if (!ran) return;
  std::vector<std::vector<double>> cols(3);
  std::vector<PlotSeries> series;
  std::vector<int> mdims;
  for (int d : dims) mdims.push_back(static_cast<int>(zoo::build(spec, d).dim()));
  for (const auto& row : rep.rows) {
    PlotSeries s{"fraction " + num(row.fraction).dump(), {}, row.sup_constants, false};
    for (std::size_t i = 0; i < row.sup_constants.size(); ++i) {
      cols[0].push_back(row.fraction);
      cols[1].push_back(mdims[i]);
      cols[2].push_back(row.sup_constants[i]);
      s.x.push_back(mdims[i]);
    }
    series.push_back(std::move(s));
    const std::string expect = row.fraction < 1.0 ? "diverging" : "bounded";
    add(cs, "sharpness fraction " + num(row.fraction).dump(), "Wrobel sharpness example", [&](json& m, json& t) {
      m = {{"tau", row.tau}, {"dims", mdims}, {"sup_constants", nums(row.sup_constants)}, {"ratios", nums(row.ratios)},
           {"classification", row.classification}};
      t = {{"expected", expect}, {"diverging_ratio_min", 1.5}, {"bounded_ratio_max", 1.25}};
      return row.classification == expect;
    });
  }
  write_text(out / "sharpness.csv", csv_rows({"fraction", "dim", "sup_constant"}, cols));
  write_text(out / "sharpness.svg", svg_plot("sup constants along the ladder", series, true, true, "dimension", "sup constant"));
}

// ---------------------------------------------------------------- funcspace

void run_funcspace(const ExperimentConfig& cfg, const fs::path& out, Checks& cs) {
  using namespace funcspace;
  const auto res = pints(cfg.params, "resolutions", {1024, 2048});
  const auto trials = static_cast<std::size_t>(pnum(cfg.params, "hl_trials", 100));
  const double p_type = pnum(cfg.params, "p_type", 1.5), q_cot = pnum(cfg.params, "q_cotype", 3.0);
  const double s = pnum(cfg.params, "s", 0.25);
  const auto msamples = static_cast<std::size_t>(pnum(cfg.params, "multiplier_samples", 10));
  const json model_json = cfg.model.is_null() ? json{{"family", "borichev_tomilov"}, {"params", {{"alpha", 1.0}}}, {"dims", {16}}}
                                              : cfg.model;
  const auto models = ladder_of(model_json);
  const auto& model = models.front();

  add(cs, "partition of unity", "Besov embeddings", [&](json& m, json& t) {
    const SampledFunction like = sample_scalar(16.0, 1 << 14, [](double) { return Complex(0.0, 0.0); });
    RealVector xi = discrete_fourier(like).grid();
    const auto phis = littlewood_paley_sequence(xi);
    RealVector sum = RealVector::Zero(xi.size());
    for (const auto& ph : phis) sum += ph;
    const double resid = (sum.array() - 1.0).abs().maxCoeff();
    m = {{"residual", resid}, {"blocks", phis.size()}};
    t = {{"residual", 1e-12}};
    return resid <= 1e-12;
  });

  add(cs, "single-block identity", "Besov embeddings", [&](json& m, json& t) {
    SampledFunction hat;
    hat.half_width = std::numbers::pi / (32.0 / 1024.0);
    hat.domain = Domain::Frequency;
    hat.samples = ComplexMatrix::Zero(1024, 1);
    for (Index k = 0; k < 1024; ++k) {
      const double x = hat.point(k);
      if (std::abs(x) < 0.45) hat.samples(k, 0) = Complex(std::cos(x) + 0.3, 0.2 * x);
    }
    const SampledFunction f = inverse_fourier(hat);
    double worst = 0.0;
    for (double p : {1.0, 2.0, 3.0}) {
      const double l = lp_norm(f, p);
      worst = std::max(worst, std::abs(besov_norm(f, 0.7, p, 2.0).value - l) / l);
    }
    m = {{"max_relative_error", worst}};
    t = {{"max_relative_error", 1e-8}};
    return worst <= 1e-8;
  });

  add(cs, "embedding chain", "Besov embeddings", [&](json& m, json& t) {
    const auto panel = gaussian_panel(20, 2, cfg.seed);
    double upper = 0.0, lower = 0.0, kappa = 0.0;
    for (const auto& pf : panel) {
      const SampledFunction f = sample(16.0, 2048, pf, 2);
      if (kappa == 0.0) {
        const auto ks = lp_kernel_constants(f);
        kappa = *std::max_element(ks.begin(), ks.end());
      }
      for (double p : {1.5, 2.0, 3.0}) {
        const double l = lp_norm(f, p);
        upper = std::max(upper, besov_norm(f, 0.0, p, INFINITY).value / (kappa * l));
        lower = std::max(lower, l / besov_norm(f, 0.0, p, 1.0).value);
      }
    }
    m = {{"kappa", kappa}, {"max_binf_over_kappa_lp", upper}, {"max_lp_over_b1", lower}};
    t = {{"max_ratio", 1.0 + 1e-12}};
    return upper <= 1.0 + 1e-12 && lower <= 1.0 + 1e-12;
  });

  add(cs, "Plancherel constant", "Hardy-Littlewood type and cotype", [&](json& m, json& t) {
    const auto panel = gaussian_panel(20, 2, cfg.seed);
    double worst = 0.0;
    for (const auto& pf : panel) {
      const SampledFunction f = sample(16.0, 2048, pf, 2);
      worst = std::max(worst, std::abs(lp_norm(discrete_fourier(f), 2.0) / lp_norm(f, 2.0) - std::sqrt(2.0 * std::numbers::pi)));
    }
    m = {{"max_abs_deviation", worst}};
    t = {{"max_abs_deviation", 1e-8}};
    return worst <= 1e-8;
  });

  add(cs, "Hardy-Littlewood type p=" + num(p_type).dump(), "Hardy-Littlewood type and cotype", [&](json& m, json& t) {
    const auto r = verify_hardy_littlewood(p_type, trials, cfg.seed, res, HLVariant::Type);
    m = r.to_json();
    t = {{"drift", 0.1}};
    return r.pass;
  });
  add(cs, "Hardy-Littlewood cotype q=" + num(q_cot).dump(), "Hardy-Littlewood type and cotype", [&](json& m, json& t) {
    const auto r = verify_hardy_littlewood(q_cot, trials, cfg.seed, res, HLVariant::Cotype, 2);
    m = r.to_json();
    t = {{"drift", 0.1}};
    return r.pass;
  });

  add(cs, "power weight quadrature", "power weight", [&](json& m, json& t) {
    const SampledFunction g = sample_scalar(16.0, 1024, [](double x) { return Complex(std::exp(-0.5 * x * x), 0.0); });
    const double v = std::pow(weighted_lp_norm(g, 2.0, -0.5), 2.0), exact = std::tgamma(0.25);
    m = {{"value", v}, {"reference", exact}, {"relative_error", std::abs(v - exact) / exact}};
    t = {{"relative_error", 1e-6}};
    return std::abs(v - exact) <= 1e-6 * exact;
  });

  TruncationOrbitReport tr;
  bool tr_ok = false;
  std::string tr_error;
  try {
    TruncationOptions o;
    o.s = s;
    o.p = o.q = 2.0;
    o.samples = msamples;
    o.seed = cfg.seed;
    if (cfg.params.contains("omega")) o.omega = cfg.params["omega"].get<double>();
    std::vector<Index> r2;
    for (Index r : res) r2.push_back(2 * r);
    o.resolutions = r2;
    tr = verify_truncation_and_orbit(model, o);
    tr_ok = true;
  } catch (const Error& e) {
    tr_error = e.what();
  }
  auto from_tr = [&](const StabilityReport& r) {
    return [&, r](json& m, json& t) {
      if (!tr_ok) fail(ErrorKind::PreconditionViolation, tr_error);
      m = r.to_json();
      m["model"] = model.tag();
      m["half_width_used"] = tr.half_width_used;
      t = {{"drift", 0.1}};
      return r.pass;
    };
  };
  add(cs, "truncation at the origin", "truncation in Besov spaces", from_tr(tr.truncation));
  add(cs, "damped orbit " + model.tag(), "damped orbit in Besov space", from_tr(tr.orbit));

  auto multiplier = [&](MultiplierTarget target, double smooth) {
    return [&, target, smooth](json& m, json& t) {
      MultiplierOptions o;
      o.power = 1;
      o.p = 2.0;
      o.s = smooth;
      o.target = target;
      o.samples = msamples;
      o.seed = cfg.seed;
      o.resolutions = res;
      if (cfg.params.contains("tau")) o.tau = cfg.params["tau"].get<double>();
      const auto r = verify_multiplier_bound(model, o);
      m = r.to_json();
      m["model"] = model.tag();
      m["s"] = smooth;
      t = {{"drift", 0.1}};
      return r.pass;
    };
  };
  add(cs, "resolvent multiplier into L^2", "resolvent multiplier into L^p'", multiplier(MultiplierTarget::LpConjugate, 0.0));
  add(cs, "resolvent multiplier into L^inf", "resolvent multiplier into L^inf", multiplier(MultiplierTarget::Linf, 0.51));

  add(cs, "smoothed resolvent symbol", "multiplier symbol growth", [&](json& m, json& t) {
    std::vector<zoo::GeneratorModel> lad = models;
    if (lad.size() < 2 && model.family != "diagonal") {
      lad = zoo::truncation_ladder(family_of(model_json), std::vector<int>{16, 32, 64});
    }
    const double beta = resolve_beta(cfg.params, lad.back());
    std::vector<double> sups;
    for (const auto& md : lad) {
      const resolvent::ResolventEvaluator ev(md.matrix);
      const ComplexMatrix smooth =
          linalg::fractional_power(linalg::BlockDiagonal::decompose(-md.matrix), -beta).dense();
      const auto grid = resolvent::default_grid(ev.eigenvalues());
      std::vector<double> v(grid.size());
      parallel_for(grid.size(), [&](std::size_t i) {
        v[i] = linalg::spectral_norm(ev.apply_power(Complex(0.0, grid[i]), 1, smooth));
      });
      sups.push_back(*std::max_element(v.begin(), v.end()));
    }
    std::vector<double> ratios;
    const bool ok = ladder_stable(sups, 2.0, ratios);
    m = {{"dims", matrix_dims(lad)}, {"beta", beta}, {"sup_symbol_norm", nums(sups)}, {"ratios", nums(ratios)}};
    t = {{"ladder_ratio_max", 2.0}};
    return ok;
  });

  std::ofstream csv(out / "funcspace_sample.csv");
  sample(16.0, 256, gaussian_panel(1, 2, cfg.seed).front(), 2).write_csv(csv);
}

// ---------------------------------------------------------------- full suite

json builtin_suite() {
  const json bt = {{"family", "borichev_tomilov"}, {"params", {{"alpha", 1.0}}}};
  auto with_dims = [](json m, std::vector<int> d) {
    m["dims"] = d;
    return m;
  };
  return json::array({
      {{"kind", "rates"}, {"params", {{"beta", 1.0}, {"p", 2.0}, {"rho", 0.0}}}},
      {{"kind", "sweep"}, {"model", with_dims(bt, {64})}, {"params", {{"half_plane_samples", 500}}}},
      {{"kind", "sweep"},
       {"model", {{"family", "damped_wave"}, {"params", {{"damping_const", 1.0}, {"damping_amp", 0.5}}}, {"dims", {16}}}},
       {"params", {{"half_plane_samples", 500}}}},
      {{"kind", "decay"}, {"model", with_dims(bt, {16, 32, 64})},
       {"params", {{"rho", 0.0}, {"norm", "interp"}, {"samples", 40}, {"extended", true}}}},
      {{"kind", "decay"}, {"model", with_dims(bt, {16, 32, 64})}, {"params", {{"rho", 1.0}, {"norm", "interp"}, {"samples", 40}}}},
      {{"kind", "decay"}, {"model", with_dims(bt, {16, 32, 64})}, {"params", {{"rho", 0.0}, {"norm", "fractional"}, {"samples", 40}}}},
      {{"kind", "sharpness"},
       {"model", {{"family", "jordan_growth"}, {"params", {{"mu_spacing", 1.0}, {"a_decay", 0.5}, {"c_gain", 2.0}}}, {"dims", {16, 32, 64}}}},
       {"params", {{"fractions", {0.5, 1.0}}, {"samples", 60}}}},
      {{"kind", "funcspace"}, {"model", with_dims(bt, {16})}, {"params", {{"hl_trials", 20}, {"multiplier_samples", 8}}}},
  });
}

void run_kind(const ExperimentConfig& cfg, const fs::path& out, Checks& cs);

void run_suite(const ExperimentConfig& cfg, const fs::path& out, Checks& cs) {
  const json list = cfg.raw.contains("experiments") ? cfg.raw["experiments"] : builtin_suite();
  // Sub-experiments run one after another; parallelism lives inside each.
  for (std::size_t i = 0; i < list.size(); ++i) {
    json sub = list[i];
    if (!sub.contains("seed")) sub["seed"] = cfg.seed;
    const ExperimentConfig sc = parse_config(sub);
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%02zu_", i);
    const std::string tag = prefix + sc.kind;
    const fs::path dir = out / tag;
    fs::create_directories(dir);
    Checks sub_checks;
    run_kind(sc, dir, sub_checks);
    Report sub_rep{sc.raw, sub_checks, environment_stamp()};
    write_text(dir / "report.json", sub_rep.dump());
    for (auto& c : sub_checks) {
      c.name = tag + "/" + c.name;
      cs.push_back(std::move(c));
    }
  }
  add(cs, "anchor coverage", kPlumbing, [&](json& m, json& t) {
    std::set<std::string> seen;
    for (const auto& c : cs) seen.insert(c.anchor);
    json missing = json::array();
    for (const auto& a : required_anchors()) {
      if (!seen.count(a)) missing.push_back(a);
    }
    m = {{"covered", required_anchors().size() - missing.size()}, {"missing", missing}};
    t = {{"required", required_anchors().size()}};
    return missing.empty();
  });
}

void run_kind(const ExperimentConfig& cfg, const fs::path& out, Checks& cs) {
  if (cfg.kind == "rates") run_rates(cfg, out, cs);
  else if (cfg.kind == "sweep") run_sweep(cfg, out, cs);
  else if (cfg.kind == "decay") run_decay(cfg, out, cs);
  else if (cfg.kind == "sharpness") run_sharpness(cfg, out, cs);
  else if (cfg.kind == "funcspace") run_funcspace(cfg, out, cs);
  else if (cfg.kind == "full-suite") run_suite(cfg, out, cs);
  else fail(ErrorKind::ConfigError, "config /kind: unknown kind " + cfg.kind);
}

}  // namespace

Report run(const ExperimentConfig& config, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  Report rep;
  rep.config = config.raw;
  rep.environment = environment_stamp();
  run_kind(config, out_dir, rep.checks);
  write_text(out_dir / "report.json", rep.dump());
  return rep;
}

}  // namespace polydecay::harness
