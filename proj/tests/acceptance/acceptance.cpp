// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "polydecay/funcspace.hpp"
#include "polydecay/harness.hpp"
#include "polydecay/linalg.hpp"
#include "polydecay/parallel.hpp"
#include "polydecay/resolvent.hpp"
#include "polydecay/semigroup.hpp"
#include "polydecay/zoo.hpp"

using namespace polydecay;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string join(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt(v[i]);
  return s + "]";
}

ComplexMatrix random_stable(Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) a(i, j) = Complex(g(rng), g(rng)) / std::sqrt(static_cast<double>(n));
  a.diagonal().array() -= zoo::spectral_abscissa(a) + 0.5;
  return a;
}

zoo::FamilySpec bt(double alpha) { return {"borichev_tomilov", {{"alpha", alpha}}, {}, 2.0}; }
zoo::FamilySpec jordan(double mu, double a, double c) {
  return {"jordan_growth", {{"mu_spacing", mu}, {"a_decay", a}, {"c_gain", c}}, {}, 2.0};
}

const std::vector<int> kLadder{64, 128, 256};

double fitted_beta(const zoo::FamilySpec& fam, int dim) {
  return resolvent::sweep_imaginary_axis(zoo::build(fam, dim)).beta_hat;
}

// ---------------------------------------------------------------------------

Outcome resolvent_identity() {
  std::mt19937_64 rng(20240101);
  std::uniform_real_distribution<double> re(1e-3, 5.0), im(-20.0, 20.0);
  const ComplexMatrix id = ComplexMatrix::Identity(16, 16);
  double worst = 0.0;
  for (int m = 0; m < 20; ++m) {
    const ComplexMatrix a = random_stable(16, rng);
    for (int k = 0; k < 5; ++k) {
      const Complex z(re(rng), im(rng)), w(re(rng), im(rng));
      const ComplexMatrix rz = linalg::solve_shifted(a, z, id), rw = linalg::solve_shifted(a, w, id);
      const double resid = linalg::spectral_norm(rz - rw - (w - z) * rz * rw);
      const double scale = 1.0 + linalg::spectral_norm(rz) * linalg::spectral_norm(rw);
      worst = std::max(worst, resid / scale);
    }
  }
  return {worst <= 1e-10, "max residual/(1+|R(z)||R(w)|) = " + fmt(worst)};
}

Outcome beta_recovery() {
  std::vector<double> err;
  bool ok = true;
  std::string d;
  for (double alpha : {0.5, 1.0, 2.0}) {
    const double b = fitted_beta(bt(alpha), 512);
    ok = ok && std::abs(b - alpha) <= 0.1;
    d += "alpha " + fmt(alpha) + " -> " + fmt(b) + "; ";
  }
  return {ok, d};
}

Outcome half_plane() {
  std::vector<zoo::GeneratorModel> models;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> re(-2.0, -0.05), im(-50.0, 50.0);
  std::vector<Complex> eigs;
  for (int i = 0; i < 64; ++i) eigs.emplace_back(re(rng), im(rng));
  models.push_back(zoo::make_diagonal(eigs));
  for (double alpha : {0.5, 1.0, 2.0}) models.push_back(zoo::build(bt(alpha), 256));
  models.push_back(zoo::build(jordan(1.0, 1.0, 0.0), 128));
  models.push_back(zoo::build(jordan(1.0, 0.5, 2.0), 128));
  models.push_back(zoo::build({"damped_wave", {{"damping_const", 1.0}}, {}, 2.0}, 16));
  models.push_back(zoo::build({"damped_wave", {{"damping_const", 1.0}, {"damping_amp", 0.5}}, {}, 2.0}, 16));
  bool ok = true;
  std::string d;
  for (const auto& m : models) {
    const auto prof = resolvent::sweep_imaginary_axis(m);
    // 10x the harness default of 1000 samples.
    const auto hp = resolvent::verify_half_plane_bound(m, prof.beta_hat, prof.c_hat, 10000, 7);
    ok = ok && hp.max_ratio <= 1.05;
    d += m.tag() + " " + fmt(hp.max_ratio) + "; ";
  }
  return {ok, "max_ratio per model: " + d};
}

Outcome decay_check(bool fractional) {
  bool ok = true;
  std::string d;
  for (const auto& fam : {bt(1.0), jordan(1.0, 1.0, 0.0)}) {
    const double beta = fitted_beta(fam, kLadder.back());
    const auto models = zoo::truncation_ladder(fam, kLadder);
    const std::vector<double> rhos = fractional ? std::vector<double>{0.0} : std::vector<double>{0.0, 1.0, 2.0};
    for (double rho : rhos) {
      semigroup::DecayOptions o;
      o.rho = rho;
      o.p = 2.0;
      o.beta = beta;
      o.sample_count = 250;
      o.seed = 11;
      if (fractional) {
        o.norm = semigroup::FractionalNorm{};
      } else {
        o.norm = semigroup::InterpNorm{2.0};
      }
      const auto r = semigroup::decay_ladder(models, o);
      bool finite = true;
      for (double c : r.ladder_trend) finite = finite && std::isfinite(c);
      ok = ok && finite && r.verdict == "pass";
      d += fam.family + " rho=" + fmt(rho) + " tau=" + fmt(r.tau_used) + " sup " + join(r.ladder_trend) + " " + r.verdict + "; ";
    }
  }
  return {ok, d};
}

// Dense per-block oracle for S(d) = max_t ‖e^{tA}(-A)^{-τ}‖ on a jordan ladder,
// computed with Eigen's matrix functions on each 2x2 block.
std::vector<double> sharpness_oracle(const zoo::FamilySpec& fam, double tau) {
  std::vector<double> out;
  const auto grid = semigroup::default_t_grid();
  for (int d : kLadder) {
    const auto m = zoo::build(fam, d);
    double s = 0.0;
    for (Index b = 0; b < m.dim(); b += 2) {
      const Eigen::Matrix2cd a = m.matrix.block<2, 2>(b, b);
      const Eigen::Matrix2cd smooth = Eigen::Matrix2cd(-a).pow(-tau);
      for (double t : grid) {
        const Eigen::Matrix2cd e = Eigen::Matrix2cd(a * t).exp() * smooth;
        s = std::max(s, Eigen::JacobiSVD<Eigen::Matrix2cd>(e).singularValues()(0));
      }
    }
    out.push_back(s);
  }
  return out;
}

std::string classify(const std::vector<double>& v) {
  bool div = v.size() > 1, bnd = v.size() > 1;
  for (std::size_t i = 1; i < v.size(); ++i) {
    div = div && v[i] / v[i - 1] >= 1.5;
    bnd = bnd && v[i] / v[i - 1] <= 1.25;
  }
  return div ? "diverging" : (bnd ? "bounded" : "inconclusive");
}

Outcome sharpness() {
  const auto fam = jordan(1.0, 0.5, 2.0);
  const auto r = semigroup::sharpness_probe(fam, {0.5, 1.0}, kLadder, semigroup::FractionalNorm{}, 250, 1);
  const std::string want[2] = {"diverging", "bounded"};
  bool ok = r.rows.size() == 2;
  std::string d = "jordan_growth(1,0.5,2) tau=" + fmt(r.tau_full) + "; ";
  for (std::size_t i = 0; ok && i < 2; ++i) {
    const auto& row = r.rows[i];
    const auto oracle = sharpness_oracle(fam, row.tau);
    const std::string oc = classify(oracle);
    ok = ok && row.classification == want[i] && oc == want[i];
    d += "sigma=" + fmt(row.fraction) + "tau: ratios " + join(row.ratios) + " " + row.classification + ", oracle " +
         join(oracle) + " " + oc + "; ";
  }
  // The (1,1,0) ladder is reported only: its orbits stay bounded already at σ = τ/2.
  const auto ref = semigroup::sharpness_probe(jordan(1.0, 1.0, 0.0), {0.5}, kLadder, semigroup::FractionalNorm{}, 250, 1);
  d += "[info] jordan_growth(1,1,0) sigma=0.5tau ratios " + join(ref.rows[0].ratios) + " " + ref.rows[0].classification;
  return {ok, d};
}

Outcome resolvent_powers() {
  const double beta = fitted_beta(bt(1.0), kLadder.back());
  const auto models = zoo::truncation_ladder(bt(1.0), kLadder);
  bool ok = true;
  std::string d = "beta_hat=" + fmt(beta) + "; ";
  for (int n : {0, 1}) {
    for (double q : {1.0, 2.0, std::numeric_limits<double>::infinity()}) {
      const auto lad = semigroup::resolvent_power_ladder(models, beta, n, q, 200, 5);
      ok = ok && lad.stable;
      d += "n=" + std::to_string(n) + " q=" + fmt(q) + " max trend " + join(lad.max_ratio_per_k) + "; ";
    }
  }
  return {ok, d};
}

Outcome expm_crosscheck() {
  std::vector<zoo::GeneratorModel> models;
  const std::vector<Complex> eigs{-1.0, Complex(-0.5, 3.0), Complex(-0.1, -7.0)};
  models.push_back(zoo::make_diagonal(eigs));
  models.push_back(zoo::build(bt(1.0), 128));
  models.push_back(zoo::build(jordan(1.0, 1.0, 0.0), 64));
  models.push_back(zoo::build(jordan(1.0, 0.5, 2.0), 64));
  // The explicit integrator needs ~t·‖A‖ steps, and ‖A‖ grows like N² for the wave.
  models.push_back(zoo::build({"damped_wave", {{"damping_const", 1.0}}, {}, 2.0}, 32));
  models.push_back(zoo::build({"damped_wave", {{"damping_const", 1.0}, {"damping_amp", 0.5}}, {}, 2.0}, 32));
  double worst = 0.0;
  std::string d;
  for (const auto& m : models) {
    const ComplexMatrix id = ComplexMatrix::Identity(m.dim(), m.dim());
    for (double t : {1.0, 10.0}) {
      const ComplexMatrix e = linalg::matrix_exponential(m.matrix, t);
      const ComplexMatrix ode = linalg::integrate_linear_ode(m.matrix, id, t);
      const double rel = linalg::spectral_norm(e - ode) / linalg::spectral_norm(e);
      worst = std::max(worst, rel);
    }
    d += m.tag() + " ";
  }
  return {worst <= 1e-8, "max relative deviation " + fmt(worst) + " over " + d};
}

Outcome k_functional() {
  const std::vector<Complex> minus_one{-1.0};
  const auto scalar = zoo::make_diagonal(minus_one);
  ComplexVector one(1);
  one(0) = 1.0;
  double worst = 0.0;
  for (int j = -10; j < 10; ++j) {
    const double t = std::ldexp(1.0, j);
    worst = std::max(worst, std::abs(semigroup::k_functional(scalar, 1, t, one) - std::min(1.0, 2.0 * t)));
  }
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> dim(4, 48), mm(1, 3);
  std::uniform_real_distribution<double> lt(-8.0, 8.0);
  std::normal_distribution<double> g;
  int monotone = 0, improved = 0;
  for (int i = 0; i < 50; ++i) {
    const auto model = (i % 2 == 0) ? zoo::build(bt(1.0 + (i % 3)), dim(rng)) : zoo::build(jordan(1.0, 0.5, 1.0), dim(rng) / 2);
    const semigroup::KFunctional k(model, mm(rng));
    ComplexVector x(model.dim());
    for (Index r = 0; r < x.size(); ++r) x(r) = Complex(g(rng), g(rng));
    const auto res = k.evaluate(std::exp2(lt(rng)), x);
    bool mono = !res.history.empty() && res.history.front() <= res.relaxation_value * (1 + 1e-12);
    for (std::size_t h = 1; h < res.history.size(); ++h) mono = mono && res.history[h] <= res.history[h - 1] * (1 + 1e-12);
    mono = mono && res.value <= res.relaxation_value * (1 + 1e-12);
    monotone += mono ? 1 : 0;
    improved += res.value < res.relaxation_value ? 1 : 0;
  }
  return {worst <= 1e-6 && monotone == 50,
          "scalar max error " + fmt(worst) + "; monotone refinement on " + std::to_string(monotone) +
              "/50 instances (strict improvement on " + std::to_string(improved) + ")"};
}

Outcome besov() {
  using namespace funcspace;
  // Partition of unity on a fine dual grid.
  const auto fh = discrete_fourier(sample_scalar(8.0, 8192, [](double t) { return Complex(std::exp(-t * t)); }));
  const auto phis = littlewood_paley_sequence(fh.grid());
  double pou = 0.0;
  for (Index i = 0; i < fh.count(); ++i) {
    double s = 0.0;
    for (const auto& p : phis) s += p(i);
    pou = std::max(pou, std::abs(s - 1.0));
  }
  // Single-block identity on a band-limited function.
  SampledFunction spec = discrete_fourier(sample_scalar(64.0, 2048, [](double) { return Complex(0.0); }));
  for (Index k = 0; k < spec.count(); ++k) {
    const double xi = spec.point(k);
    spec.samples(k, 0) = std::abs(xi) < 0.45 ? Complex(std::pow(std::cos(xi * std::numbers::pi / 0.9), 2), xi) : 0.0;
  }
  const auto band = inverse_fourier(spec);
  double single = 0.0;
  for (double p : {1.0, 2.0, 4.0})
    for (double s : {-0.5, 0.0, 1.0})
      for (double q : {1.0, 2.0, std::numeric_limits<double>::infinity()})
        single = std::max(single, std::abs(besov_norm(band, s, p, q).value / lp_norm(band, p) - 1.0));
  // Embedding chain and Plancherel on a 20-function panel.
  int chain = 0;
  double planch = 0.0;
  for (const auto& g : gaussian_panel(20, 2, 77)) {
    const auto f = sample(16.0, 2048, g, 2);
    const auto kap = lp_kernel_constants(f);
    const double kmax = *std::max_element(kap.begin(), kap.end());
    bool ok = true;
    for (double p : {1.5, 2.0, 3.0}) {
      const double lp = lp_norm(f, p);
      ok = ok && besov_norm(f, 0.0, p, std::numeric_limits<double>::infinity()).value <= kmax * lp * (1 + 1e-12);
      ok = ok && lp <= besov_norm(f, 0.0, p, 1.0).value * (1 + 1e-12);
    }
    chain += ok ? 1 : 0;
    planch = std::max(planch, std::abs(lp_norm(discrete_fourier(f), 2.0) / lp_norm(f, 2.0) - std::sqrt(2.0 * std::numbers::pi)));
  }
  const bool ok = pou <= 1e-12 && single <= 1e-8 && chain == 20 && planch <= 1e-8;
  return {ok, "partition residual " + fmt(pou) + "; single-block deviation " + fmt(single) + "; embedding chain " +
                  std::to_string(chain) + "/20; Plancherel deviation " + fmt(planch)};
}

Outcome hardy_littlewood() {
  using namespace funcspace;
  const auto t = verify_hardy_littlewood(1.5, 100, 31, {1024, 2048}, HLVariant::Type);
  const auto c = verify_hardy_littlewood(3.0, 100, 31, {1024, 2048}, HLVariant::Cotype);
  return {t.pass && c.pass, "type p=1.5 sup " + join(t.sup_ratio) + " drift " + fmt(t.drift) + "; cotype q=3 sup " +
                                join(c.sup_ratio) + " drift " + fmt(c.drift)};
}

Outcome truncation() {
  using namespace funcspace;
  TruncationOptions o;
  o.s = 0.25;
  o.p = o.q = 2.0;
  const std::vector<Complex> eigs{-1.0, -2.0};
  bool ok = true;
  std::string d;
  for (const auto& m : {zoo::make_diagonal(eigs), zoo::build(bt(1.0), 16)}) {
    const auto r = verify_truncation_and_orbit(m, o);
    ok = ok && r.pass;
    d += m.tag() + ": truncation " + join(r.truncation.sup_ratio) + " drift " + fmt(r.truncation.drift) + ", orbit " +
         join(r.orbit.sup_ratio) + " drift " + fmt(r.orbit.drift) + "; ";
  }
  return {ok, d};
}

Outcome rate_table() {
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> b(0.0, 10.0), p(1.0, 2.0), r(0.0, 10.0);
  double worst = 0.0;
  bool p2 = true;
  for (int i = 0; i < 1000; ++i) {
    const double beta = b(rng), pp = p(rng), rho = r(rng);
    const long double exact = (static_cast<long double>(rho) + 1.0L) * beta + (2.0L / pp - 1.0L);
    const double got = resolvent::predict_decay_rates(beta, pp, rho).tau_main;
    worst = std::max(worst, static_cast<double>(std::abs(got - exact) / std::max(1.0L, std::abs(exact))));
    p2 = p2 && resolvent::predict_decay_rates(beta, 2.0, rho).tau_main == (rho + 1.0) * beta;
  }
  const double eps = std::numeric_limits<double>::epsilon();
  return {worst <= 4.0 * eps && p2, "max relative deviation " + fmt(worst / eps) + " eps; p=2 bitwise " + (p2 ? "yes" : "no")};
}

Outcome determinism() {
  const auto cfg = harness::parse_config(nlohmann::json{{"kind", "full-suite"}, {"seed", 2024}});
  const fs::path base = fs::temp_directory_path() / "polydecay_acceptance";
  fs::remove_all(base);
  set_thread_count(1);
  const auto a = harness::run(cfg, base / "threads1");
  set_thread_count(4);
  const auto b = harness::run(cfg, base / "threads4");
  set_thread_count(0);
  auto read = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string ra = read(base / "threads1" / "report.json"), rb = read(base / "threads4" / "report.json");
  const bool same = !ra.empty() && ra == rb;
  return {same, std::string("report.json ") + (same ? "byte-identical" : "differs") + " (" +
                    std::to_string(ra.size()) + " bytes, " + std::to_string(a.checks.size()) + " checks, all pass: " +
                    (a.all_pass() && b.all_pass() ? "yes" : "no") + ")"};
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criterion ids; default runs all.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  struct Criterion {
    int id;
    const char* title;
    double budget_s;  // runtime limit, 0 when none
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria{
      {1, "resolvent identity", 1.0, resolvent_identity},
      {2, "growth exponent recovery", 30.0, beta_recovery},
      {3, "half-plane envelope", 0.0, half_plane},
      {4, "decay in interpolation norm", 300.0, [] { return decay_check(false); }},
      {5, "decay in fractional domain norm", 0.0, [] { return decay_check(true); }},
      {6, "sharpness probe", 0.0, sharpness},
      {7, "resolvent powers on interpolation spaces", 0.0, resolvent_powers},
      {8, "matrix exponential cross-check", 0.0, expm_crosscheck},
      {9, "K-functional exactness", 0.0, k_functional},
      {10, "Besov machinery", 0.0, besov},
      {11, "Hardy-Littlewood type and cotype", 60.0, hardy_littlewood},
      {12, "truncation and damped orbit", 0.0, truncation},
      {13, "rate table", 0.0, rate_table},
      {14, "determinism", 0.0, determinism},
  };
  int failed = 0;
  int ran = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += " [over the " + fmt(c.budget_s) + " s budget]";
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s  criterion %2d: %s (%.2f s) -- %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failed, ran);
  return failed == 0 ? 0 : 1;
}
