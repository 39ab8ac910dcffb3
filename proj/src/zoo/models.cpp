#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "polydecay/linalg.hpp"
#include "polydecay/zoo.hpp"

namespace polydecay::zoo {

std::string GeneratorModel::tag() const { return family + "[" + std::to_string(dim()) + "]"; }

ComplexVector eigenvalues(const ComplexMatrix& a) {
  require(a.rows() == a.cols(), ErrorKind::NonSquare, "eigenvalues: matrix must be square");
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(a, false);
  require(solver.info() == Eigen::Success, ErrorKind::ConvergenceFailure, "eigenvalues: solver failed");
  return solver.eigenvalues();
}

double spectral_abscissa(const ComplexMatrix& a) {
  const ComplexVector ev = eigenvalues(a);
  double best = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < ev.size(); ++i) best = std::max(best, ev(i).real());
  return best;
}

GeneratorModel make_diagonal(std::span<const Complex> eigs, double space_p) {
  require(!eigs.empty(), ErrorKind::PreconditionViolation, "make_diagonal: empty eigenvalue list");
  require(space_p >= 1.0, ErrorKind::DomainError, "make_diagonal: space_p must be in [1, inf]");
  GeneratorModel m;
  m.family = "diagonal";
  m.matrix = ComplexMatrix::Zero(static_cast<Index>(eigs.size()), static_cast<Index>(eigs.size()));
  for (std::size_t k = 0; k < eigs.size(); ++k) {
    if (!(eigs[k].real() < 0.0)) {
      fail(ErrorKind::UnstableEigenvalue, "make_diagonal: eigenvalue " + std::to_string(k) +
                                              " has real part " + std::to_string(eigs[k].real()));
    }
    m.matrix(static_cast<Index>(k), static_cast<Index>(k)) = eigs[k];
  }
  // Finitely many eigenvalues strictly left of the axis: the resolvent is
  // bounded on the closed right half-plane.
  m.beta_analytic = 0.0;
  double abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& e : eigs) abscissa = std::max(abscissa, e.real());
  m.omega_analytic = abscissa;
  m.is_normal = true;
  m.space_p = space_p;
  return m;
}

GeneratorModel make_borichev_tomilov(double alpha, int n) {
  require(alpha > 0.0, ErrorKind::PreconditionViolation, "make_borichev_tomilov: alpha must be > 0");
  require(n >= 2, ErrorKind::PreconditionViolation, "make_borichev_tomilov: N must be >= 2");
  GeneratorModel m;
  m.family = "borichev_tomilov";
  m.params = {{"alpha", alpha}};
  m.matrix = ComplexMatrix::Zero(n, n);
  for (int k = 1; k <= n; ++k) m.matrix(k - 1, k - 1) = Complex(-std::pow(k, -alpha), k);
  m.beta_analytic = alpha;
  m.omega_analytic = 0.0;
  m.is_normal = true;
  return m;
}

GeneratorModel make_jordan_growth(double mu_spacing, double a_decay, double c_gain, int n) {
  require(mu_spacing > 0.0, ErrorKind::PreconditionViolation, "make_jordan_growth: mu_spacing must be > 0");
  require(a_decay > 0.0, ErrorKind::PreconditionViolation, "make_jordan_growth: a_decay must be > 0");
  require(n >= 1, ErrorKind::PreconditionViolation, "make_jordan_growth: N must be >= 1");
  GeneratorModel m;
  m.family = "jordan_growth";
  m.params = {{"mu_spacing", mu_spacing}, {"a_decay", a_decay}, {"c_gain", c_gain}};
  m.matrix = ComplexMatrix::Zero(2 * n, 2 * n);
  for (int k = 1; k <= n; ++k) {
    const double a = std::pow(k, -a_decay);
    if (!(a > 0.0)) fail(ErrorKind::UnstableEigenvalue, "make_jordan_growth: a_k underflowed to 0");
    const Complex lambda(-a, k * mu_spacing);
    const Index i = 2 * (k - 1);
    m.matrix(i, i) = lambda;
    m.matrix(i + 1, i + 1) = lambda;
    m.matrix(i, i + 1) = std::pow(k, c_gain);
  }
  // Block resolvent ≈ [[1/d, c/d²], [0, 1/d]] with |d| >= a_k, attained at iμ_k.
  m.beta_analytic = std::max(c_gain + 2.0 * a_decay, a_decay);
  m.omega_analytic = 0.0;
  m.is_normal = false;
  return m;
}

GeneratorModel make_damped_wave(int n, std::span<const double> damping) {
  require(n >= 4, ErrorKind::PreconditionViolation, "make_damped_wave: N must be >= 4");
  require(static_cast<int>(damping.size()) == n, ErrorKind::DimensionMismatch,
          "make_damped_wave: need one damping sample per interior point");
  for (double a : damping) require(std::isfinite(a), ErrorKind::DomainError, "make_damped_wave: non-finite damping");

  const double h = 1.0 / (n + 1);
  const double inv_h2 = 1.0 / (h * h);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    a(j, n + j) = 1.0;
    a(n + j, j) = -2.0 * inv_h2;
    if (j > 0) a(n + j, j - 1) = inv_h2;
    if (j + 1 < n) a(n + j, j + 1) = inv_h2;
    a(n + j, n + j) = -damping[j];
  }

  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  require(solver.info() == Eigen::Success, ErrorKind::ConvergenceFailure, "make_damped_wave: eigensolve failed");
  const double tol = 1e-10 * a.cwiseAbs().colwise().sum().maxCoeff();
  for (Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const Complex ev = solver.eigenvalues()(i);
    if (ev.real() >= -tol) {
      fail(ErrorKind::UnstableDamping, "make_damped_wave: eigenvalue (" + std::to_string(ev.real()) + ", " +
                                           std::to_string(ev.imag()) + ") is not in the open left half-plane");
    }
  }

  GeneratorModel m;
  m.family = "damped_wave";
  m.matrix = a.cast<Complex>();
  m.is_normal = false;
  return m;
}

GeneratorModel make_damped_wave(int n, const std::function<double(double)>& damping) {
  std::vector<double> samples(static_cast<std::size_t>(std::max(n, 0)));
  for (int j = 0; j < n; ++j) samples[j] = damping((j + 1.0) / (n + 1.0));
  return make_damped_wave(n, samples);
}

namespace {

double param(const FamilySpec& spec, const std::string& name, std::optional<double> fallback = std::nullopt) {
  if (auto it = spec.params.find(name); it != spec.params.end()) return it->second;
  if (fallback) return *fallback;
  fail(ErrorKind::ConfigError, "family '" + spec.family + "' requires parameter '" + name + "'");
}

}  // namespace

GeneratorModel build(const FamilySpec& spec, int dim) {
  if (spec.family == "diagonal") return make_diagonal(spec.eigs, spec.space_p);
  if (spec.family == "borichev_tomilov") return make_borichev_tomilov(param(spec, "alpha"), dim);
  if (spec.family == "jordan_growth") {
    return make_jordan_growth(param(spec, "mu_spacing", 1.0), param(spec, "a_decay"), param(spec, "c_gain"), dim);
  }
  if (spec.family == "damped_wave") {
    const double c0 = param(spec, "damping_const", 1.0);
    const double amp = param(spec, "damping_amp", 0.0);
    GeneratorModel m = make_damped_wave(
        dim, [=](double x) { return c0 + amp * std::sin(2.0 * std::numbers::pi * x); });
    m.params = {{"damping_const", c0}, {"damping_amp", amp}};
    return m;
  }
  fail(ErrorKind::ConfigError, "unknown family '" + spec.family + "'");
}

std::vector<GeneratorModel> truncation_ladder(const std::function<GeneratorModel(int)>& ctor,
                                              std::span<const int> dims) {
  for (std::size_t i = 1; i < dims.size(); ++i) {
    require(dims[i] > dims[i - 1], ErrorKind::PreconditionViolation,
            "truncation_ladder: dims must be strictly increasing");
  }
  std::vector<GeneratorModel> out;
  out.reserve(dims.size());
  for (int d : dims) out.push_back(ctor(d));
  return out;
}

std::vector<GeneratorModel> truncation_ladder(const FamilySpec& spec, std::span<const int> dims) {
  return truncation_ladder([&spec](int d) { return build(spec, d); }, dims);
}

}  // namespace polydecay::zoo
