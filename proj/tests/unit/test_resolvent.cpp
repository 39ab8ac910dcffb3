#include <cmath>
#include <random>

#include "polydecay/resolvent.hpp"
#include "polydecay/zoo.hpp"
#include "test_support.hpp"

using namespace polydecay;
using namespace polydecay::resolvent;

namespace {

zoo::GeneratorModel diag12() {
  const std::vector<Complex> e{-1.0, -2.0};
  return zoo::make_diagonal(e);
}

SweepOptions no_refine() {
  SweepOptions o;
  o.refine = false;
  return o;
}

}  // namespace

TEST(Sweep, SinglePointExamples) {
  auto p = sweep_imaginary_axis(diag12(), {0.0}, no_refine());
  ASSERT_EQ(p.norms.size(), 1u);
  EXPECT_NEAR(p.norms[0], 1.0, 1e-14);
  EXPECT_FALSE(p.fitted);
  p = sweep_imaginary_axis(diag12(), {2.0}, no_refine());
  EXPECT_NEAR(p.norms[0], 0.4472135955, 1e-10);
}

TEST(Sweep, NormalModelMatchesSpectralDistance) {
  const auto m = zoo::make_borichev_tomilov(1.0, 64);
  const auto p = sweep_imaginary_axis(m);
  const ComplexVector ev = zoo::eigenvalues(m.matrix);
  for (std::size_t j = 0; j < p.xi_grid.size(); ++j) {
    double dist = INFINITY;
    for (Index i = 0; i < ev.size(); ++i) dist = std::min(dist, std::abs(Complex(0.0, p.xi_grid[j]) - ev(i)));
    ASSERT_NEAR(p.norms[j] * dist, 1.0, 1e-9) << "xi=" << p.xi_grid[j];
  }
}

TEST(Sweep, NonNormalMatchesDenseSvd) {
  const auto m = zoo::make_jordan_growth(1.0, 0.5, 1.0, 6);
  std::vector<double> grid;
  for (int j = -40; j <= 40; ++j) grid.push_back(0.25 * j);
  const auto p = sweep_imaginary_axis(m, grid, no_refine());
  const ComplexMatrix id = ComplexMatrix::Identity(m.dim(), m.dim());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const ComplexMatrix shifted = Complex(0.0, grid[j]) * id - m.matrix;
    const double smin = Eigen::JacobiSVD<ComplexMatrix>(shifted).singularValues().minCoeff();
    EXPECT_NEAR(p.norms[j] * smin, 1.0, 1e-9);
  }
}

TEST(Fit, ConstantNorms) {
  std::vector<double> xi, n;
  for (int j = -30; j <= 30; ++j) xi.push_back(0.5 * j), n.push_back(1.0);
  const auto f = fit_growth_exponent(xi, n);
  EXPECT_NEAR(f.beta, 0.0, 1e-12);
  EXPECT_NEAR(f.c, 1.0, 1e-12);
}

TEST(Fit, ExactPowerEnvelope) {
  std::vector<double> xi, n;
  for (int j = 0; j <= 60; ++j) {
    const double x = std::pow(10.0, -1.0 + 0.08 * j);
    xi.push_back(x);
    n.push_back((1.0 + x) * (1.0 + x));
  }
  const auto f = fit_growth_exponent(xi, n);
  EXPECT_NEAR(f.beta, 2.0, 1e-9);
  EXPECT_NEAR(f.c, 1.0, 1e-9);
  EXPECT_LE(f.residual, 1e-9);
}

TEST(Fit, EnvelopeDominatesSamples) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  std::vector<double> xi, n;
  for (int j = 0; j < 80; ++j) {
    const double x = 1.0 + j * 0.7;
    xi.push_back(x);
    n.push_back(u(rng) * std::sqrt(1.0 + x));
  }
  const auto f = fit_growth_exponent(xi, n);
  EXPECT_GE(f.beta, 0.0);
  for (std::size_t j = 0; j < xi.size(); ++j) EXPECT_LE(std::log(n[j]), std::log(f.c) + f.beta * std::log1p(xi[j]) + 1e-9);
}

TEST(Fit, Errors) {
  std::vector<double> xi{1, 2, 3}, n{1, 1, 1};
  EXPECT_ERROR_KIND(fit_growth_exponent(xi, n), ErrorKind::InsufficientData);
  std::vector<double> n2{1, 1};
  EXPECT_ERROR_KIND(fit_growth_exponent(xi, n2), ErrorKind::DimensionMismatch);
}

class BorichevTomilovSweep : public ::testing::TestWithParam<double> {};

TEST_P(BorichevTomilovSweep, RecoversExponent) {
  const double alpha = GetParam();
  const auto m = zoo::make_borichev_tomilov(alpha, 512);
  const auto p = sweep_imaginary_axis(m);
  EXPECT_NEAR(p.beta_hat, alpha, 0.1 * alpha);
  // Axis extension: the fitted envelope covers every grid point.
  for (std::size_t j = 0; j < p.xi_grid.size(); ++j) EXPECT_LE(p.norms[j] / p.envelope(p.xi_grid[j]), 1.0 + 1e-6);
}

INSTANTIATE_TEST_SUITE_P(Alphas, BorichevTomilovSweep, ::testing::Values(1.0, 2.0));

TEST(HalfPlane, BoundedCase) {
  const std::vector<Complex> e{-1.0};
  const auto m = zoo::make_diagonal(e);
  const auto r = verify_half_plane_bound(m, 0.0, 1.0, 500, 1);
  EXPECT_LE(r.max_ratio, 1.0 + 1e-12);
  EXPECT_TRUE(r.pass);
  const auto h = verify_half_plane_bound(m, 0.0, 0.5, 500, 1);
  EXPECT_GT(h.max_ratio, 1.0);
  EXPECT_FALSE(h.pass);
}

TEST(HalfPlane, FittedEnvelopeCoversHalfPlane) {
  const auto m = zoo::make_borichev_tomilov(1.0, 128);
  const auto p = sweep_imaginary_axis(m);
  const auto r = verify_half_plane_bound(m, p.beta_hat, p.c_hat, 1000, 3);
  EXPECT_TRUE(r.pass) << r.max_ratio;
  EXPECT_GT(r.worst_lambda.real(), 0.0);
}

TEST(Rates, Examples) {
  auto r = predict_decay_rates(1.0, 2.0, 0.0);
  EXPECT_DOUBLE_EQ(r.tau_main, 1.0);
  r = predict_decay_rates(1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(r.tau_main, 3.0);
  EXPECT_DOUBLE_EQ(r.tau_old, 3.0);
  r = predict_decay_rates(2.0, 2.0, 1.0);
  EXPECT_DOUBLE_EQ(r.tau_bounded, 2.0);
  EXPECT_DOUBLE_EQ(r.bounded_log_exponent, 1.0);
}

TEST(Rates, FormulaAndMonotonicity) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> b(0.0, 5.0), p(1.0, 2.0), r(0.0, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double beta = b(rng), pp = p(rng), rho = r(rng);
    const auto t = predict_decay_rates(beta, pp, rho);
    EXPECT_NEAR(t.tau_main, (rho + 1.0) * beta + 2.0 / pp - 1.0, 1e-13);
    EXPECT_LE(t.tau_main, t.tau_old);
    EXPECT_LT(t.tau_main, predict_decay_rates(beta, pp, rho + 0.1).tau_main);
    EXPECT_LT(t.tau_main, predict_decay_rates(beta + 0.1, pp, rho).tau_main);
    EXPECT_EQ(predict_decay_rates(beta, 2.0, rho).tau_main, (rho + 1.0) * beta);
  }
}

TEST(Rates, Errors) {
  EXPECT_ERROR_KIND(predict_decay_rates(1.0, 2.5, 0.0), ErrorKind::DomainError);
  EXPECT_ERROR_KIND(predict_decay_rates(1.0, 0.5, 0.0), ErrorKind::DomainError);
  EXPECT_ERROR_KIND(predict_decay_rates(-1.0, 2.0, 0.0), ErrorKind::DomainError);
  const auto j = predict_decay_rates(1.0, 2.0, 0.0).to_json();
  EXPECT_EQ(j["tau_main"], 1.0);
}

TEST(Evaluator, PowersMatchRepeatedSolve) {
  const auto m = zoo::make_jordan_growth(1.0, 0.5, 1.0, 5);
  const ResolventEvaluator ev(m.matrix);
  std::mt19937_64 rng(6);
  const ComplexMatrix x = testing_support::random_matrix(m.dim(), 3, rng);
  const Complex z(0.0, 2.3);
  const ComplexMatrix shifted = z * ComplexMatrix::Identity(m.dim(), m.dim()) - m.matrix;
  const ComplexMatrix ref = shifted.inverse() * (shifted.inverse() * x);
  EXPECT_LT(testing_support::rel_diff(ev.apply_power(z, 2, x), ref), 1e-12);
}
