#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "polydecay/parallel.hpp"
#include "polydecay/resolvent.hpp"
#include "polydecay/semigroup.hpp"

namespace polydecay::semigroup {

namespace {

double sigma_max_2x2(const ComplexMatrix& m) {
  const double f = m.squaredNorm();
  const double det = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  const double disc = std::sqrt(std::max(0.0, (f - 2.0 * det) * (f + 2.0 * det)));
  return std::sqrt(0.5 * (f + disc));
}

// Largest singular value via Lanczos on M*M with full reorthogonalization.
double sigma_max_lanczos(const ComplexMatrix& m) {
  const Index n = m.cols();
  const int kmax = static_cast<int>(std::min<Index>(n, 80));
  ComplexMatrix v(n, kmax + 1);
  ComplexVector start(n);
  for (Index i = 0; i < n; ++i) start(i) = Complex(1.0 + 0.5 * std::sin(0.9 * i + 0.1), 0.3 * std::cos(0.4 * i));
  v.col(0) = start.normalized();
  std::vector<double> alpha, beta;
  double theta = 0.0;
  for (int k = 0; k < kmax; ++k) {
    ComplexVector w = m.adjoint() * (m * v.col(k));
    alpha.push_back(v.col(k).dot(w).real());
    for (int pass = 0; pass < 2; ++pass) w -= v.leftCols(k + 1) * (v.leftCols(k + 1).adjoint() * w);
    const double b = w.norm();
    double next;
    if (k == 0) {
      next = alpha[0];
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      tri.computeFromTridiagonal(Eigen::Map<Eigen::VectorXd>(alpha.data(), k + 1),
                                 Eigen::Map<Eigen::VectorXd>(beta.data(), k), Eigen::EigenvaluesOnly);
      next = tri.eigenvalues().maxCoeff();
    }
    const bool settled = k > 0 && std::abs(next - theta) <= 1e-14 * next;
    theta = next;
    if (settled || b <= 1e-13 * theta) break;
    beta.push_back(b);
    v.col(k + 1) = w / b;
  }
  return std::sqrt(std::max(theta, 0.0));
}

double block_operator_norm(const ComplexMatrix& e, double p) {
  if (e.rows() == 1) return std::abs(e(0, 0));
  if (p == 1.0) return linalg::norm_1(e);
  if (std::isinf(p)) return linalg::norm_inf(e);
  if (p == 2.0) {
    if (e.rows() == 2) return sigma_max_2x2(e);
    if (e.rows() <= 48) return linalg::singular_extremes(e).sigma_max;
    return sigma_max_lanczos(e);
  }
  return linalg::lp_operator_norm(e, p).upper;
}

void check_grid(const std::vector<double>& t_grid) {
  require(!t_grid.empty(), ErrorKind::PreconditionViolation, "time grid is empty");
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    require(t_grid[j] > 0.0 && std::isfinite(t_grid[j]), ErrorKind::PreconditionViolation, "time grid must be positive");
    if (j > 0) require(t_grid[j] > t_grid[j - 1], ErrorKind::PreconditionViolation, "time grid must be strictly increasing");
  }
}

}  // namespace

std::vector<double> geometric_grid(double t0, double t1, std::size_t n) {
  require(t0 > 0.0 && t1 > t0 && n >= 2, ErrorKind::PreconditionViolation, "geometric_grid: need 0 < t0 < t1, n >= 2");
  std::vector<double> g(n);
  for (std::size_t j = 0; j < n; ++j) g[j] = t0 * std::pow(t1 / t0, static_cast<double>(j) / (n - 1));
  g.back() = t1;
  return g;
}

std::vector<double> default_t_grid() { return geometric_grid(1.0, 100.0, 64); }

Propagator::Propagator(const zoo::GeneratorModel& model)
    : blocks_(linalg::BlockDiagonal::decompose(model.matrix)), space_p_(model.space_p) {}

std::vector<std::vector<double>> Propagator::orbit_norms(const ComplexMatrix& x, const std::vector<double>& t_grid) const {
  check_grid(t_grid);
  require(x.rows() == blocks_.dim(), ErrorKind::DimensionMismatch, "orbit: vector dimension mismatch");
  std::vector<std::vector<double>> out(t_grid.size());
  ComplexMatrix y = x;
  double t_prev = 0.0;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    y = linalg::matrix_exponential(blocks_, t_grid[j] - t_prev).apply(y);
    t_prev = t_grid[j];
    if (!all_finite(y)) fail(ErrorKind::Overflow, "orbit: T(t)x not representable at t = " + std::to_string(t_prev));
    const RealVector n = linalg::column_lp_norms(y, space_p_);
    out[j].assign(n.data(), n.data() + n.size());
  }
  return out;
}

std::vector<double> Propagator::operator_norms(const std::vector<double>& t_grid) const {
  check_grid(t_grid);
  std::vector<ComplexMatrix> cum;
  for (const auto& b : blocks_.blocks()) cum.push_back(ComplexMatrix::Identity(b.matrix.rows(), b.matrix.cols()));
  std::vector<double> out(t_grid.size());
  double t_prev = 0.0;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const auto step = linalg::matrix_exponential(blocks_, t_grid[j] - t_prev);
    t_prev = t_grid[j];
    std::vector<double> per(cum.size());
    parallel_for(cum.size(), [&](std::size_t k) {
      cum[k] = step.blocks()[k].matrix * cum[k];
      per[k] = block_operator_norm(cum[k], space_p_);
    });
    out[j] = *std::max_element(per.begin(), per.end());
    if (!std::isfinite(out[j])) fail(ErrorKind::Overflow, "‖T(t)‖ not representable at t = " + std::to_string(t_prev));
  }
  return out;
}

void OrbitRecord::write_csv(std::ostream& os, double rho) const {
  os << "t,norm,scaled_norm\n";
  os.precision(17);
  for (std::size_t j = 0; j < t_grid.size(); ++j) os << t_grid[j] << ',' << norms[j] << ',' << std::pow(t_grid[j], rho) * norms[j] << '\n';
}

nlohmann::json OrbitRecord::to_json() const {
  nlohmann::json j{{"vector_id", vector_id},
                   {"t_grid", t_grid},
                   {"norms", norms},
                   {"rho_defined", rho_defined},
                   {"crosscheck_error", crosscheck_error},
                   {"crosscheck_points", crosscheck_points}};
  j["rho_hat"] = rho_defined ? nlohmann::json(rho_hat) : nlohmann::json(nullptr);
  return j;
}

OrbitRecord orbit(const zoo::GeneratorModel& model, const ComplexVector& x, const std::vector<double>& t_grid,
                  const std::string& vector_id, bool crosscheck) {
  const Propagator prop(model);
  const auto all = prop.orbit_norms(x, t_grid);
  OrbitRecord rec;
  rec.t_grid = t_grid;
  rec.vector_id = vector_id;
  for (const auto& row : all) rec.norms.push_back(row[0]);

  // Least-squares slope of log norm against log t over the final half.
  const std::size_t start = t_grid.size() / 2;
  double su = 0, sy = 0, suu = 0, suy = 0;
  std::size_t cnt = 0;
  bool ok = true;
  for (std::size_t j = start; j < t_grid.size(); ++j) {
    if (!(rec.norms[j] > 0.0)) {
      ok = false;
      break;
    }
    const double u = std::log(t_grid[j]);
    const double y = std::log(rec.norms[j]);
    su += u;
    sy += y;
    suu += u * u;
    suy += u * y;
    ++cnt;
  }
  const double den = cnt * suu - su * su;
  if (ok && cnt >= 2 && den > 0.0) {
    rec.rho_hat = -(cnt * suy - su * sy) / den;
  } else {
    rec.rho_defined = false;
    rec.rho_hat = std::numeric_limits<double>::quiet_NaN();
  }

  if (crosscheck) {
    const double a1 = linalg::norm_1(model.matrix);
    for (std::size_t j = 0; j < t_grid.size(); j += 10) {
      if (t_grid[j] * a1 > 2e4) continue;
      const ComplexMatrix ref = linalg::integrate_linear_ode(model.matrix, x, t_grid[j]);
      const double rn = linalg::lp_vector_norm(ref.col(0), model.space_p);
      const double err = std::abs(rn - rec.norms[j]) / std::max(rn, std::numeric_limits<double>::min());
      rec.crosscheck_error = std::max(rec.crosscheck_error, rn == 0.0 && rec.norms[j] == 0.0 ? 0.0 : err);
      ++rec.crosscheck_points;
    }
  }
  return rec;
}

GrowthBound growth_bound_estimate(const zoo::GeneratorModel& model, const std::vector<double>& t_grid) {
  check_grid(t_grid);
  require(t_grid.front() <= 0.1 + 1e-12 && t_grid.back() >= 50.0 - 1e-12, ErrorKind::PreconditionViolation,
          "growth_bound_estimate: t_grid must cover [0.1, 50]");
  GrowthBound g;
  g.t_grid = t_grid;
  g.norms = Propagator(model).operator_norms(t_grid);
  std::vector<double> logn(t_grid.size()), u(t_grid.size());
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    logn[j] = std::log(g.norms[j]);
    u[j] = std::log1p(t_grid[j]);
  }
  const double ninf = -std::numeric_limits<double>::infinity();
  const auto exp_fit = resolvent::fit_envelope(t_grid, logn, ninf);
  g.omega_hat = exp_fit.beta;
  g.m_hat = exp_fit.c;
  const auto poly_fit = resolvent::fit_envelope(u, logn, ninf);
  g.poly_gamma_hat = poly_fit.beta;
  g.poly_m_hat = poly_fit.c;
  return g;
}

}  // namespace polydecay::semigroup
