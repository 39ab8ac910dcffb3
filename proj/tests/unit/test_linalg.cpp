#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

#include "polydecay/linalg.hpp"
#include "polydecay/parallel.hpp"
#include "test_support.hpp"

using namespace polydecay;
using namespace polydecay::linalg;
using testing_support::random_matrix;
using testing_support::random_stable;
using testing_support::rel_diff;

namespace {

ComplexMatrix diag(std::initializer_list<Complex> d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Index>(d.size()), static_cast<Index>(d.size()));
  Index i = 0;
  for (auto v : d) m(i, i) = v, ++i;
  return m;
}

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(SolveShifted, DiagonalInverse) {
  const ComplexMatrix x = solve_shifted(diag({-1.0, -2.0}), 0.0, ComplexMatrix::Identity(2, 2));
  EXPECT_NEAR(rel_diff(x, diag({1.0, 0.5})), 0.0, 1e-15);
}

TEST(SolveShifted, EigenvalueShiftIsSingular) {
  EXPECT_ERROR_KIND(solve_shifted(diag({-1.0, -2.0}), -1.0, ComplexMatrix::Identity(2, 2)), ErrorKind::SingularShift);
}

TEST(SolveShifted, NilpotentClosedForm) {
  const ComplexMatrix x = solve_shifted(mat2(0, 1, 0, 0), 1.0, ComplexMatrix::Identity(2, 2));
  EXPECT_LT(rel_diff(x, mat2(1, 1, 0, 1)), 1e-15);
}

TEST(SolveShifted, DimensionMismatch) {
  EXPECT_ERROR_KIND(solve_shifted(diag({-1.0, -2.0}), 0.0, ComplexMatrix::Identity(3, 3)), ErrorKind::DimensionMismatch);
}

TEST(SolveShifted, ResolventIdentityOnRandomStableMatrices) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> re(0.0, 3.0), im(-10.0, 10.0);
  const ComplexMatrix id = ComplexMatrix::Identity(16, 16);
  for (int m = 0; m < 20; ++m) {
    const ComplexMatrix a = random_stable(16, rng);
    for (int k = 0; k < 5; ++k) {
      const Complex z(re(rng), im(rng)), w(re(rng), im(rng));
      const ComplexMatrix rz = solve_shifted(a, z, id), rw = solve_shifted(a, w, id);
      const double resid = (rz - rw - (w - z) * rz * rw).norm();
      EXPECT_LE(resid, 1e-10 * (1.0 + spectral_norm(rz) * spectral_norm(rw)));
    }
  }
}

TEST(SingularExtremes, Examples) {
  auto s = singular_extremes(diag({3.0, 1.0}));
  EXPECT_NEAR(s.sigma_max, 3.0, 1e-14);
  EXPECT_NEAR(s.sigma_min, 1.0, 1e-14);
  s = singular_extremes(mat2(1, 1, 0, 1));
  EXPECT_NEAR(s.sigma_max, (1.0 + std::sqrt(5.0)) / 2.0, 1e-10);
  EXPECT_NEAR(s.sigma_min, (std::sqrt(5.0) - 1.0) / 2.0, 1e-10);
  s = singular_extremes(ComplexMatrix::Zero(2, 2));
  EXPECT_EQ(s.sigma_max, 0.0);
  EXPECT_EQ(s.sigma_min, 0.0);
}

TEST(SingularExtremes, MatchesIndependentEigensolve) {
  std::mt19937_64 rng(7);
  for (Index n : {1, 2, 5, 16, 33, 64}) {
    const ComplexMatrix m = random_matrix(n, n, rng);
    const auto s = singular_extremes(m);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m.adjoint() * m);
    const double smax = std::sqrt(es.eigenvalues().maxCoeff());
    EXPECT_NEAR(s.sigma_max / smax, 1.0, 1e-9) << "n=" << n;
    const double smin = Eigen::BDCSVD<ComplexMatrix>(m).singularValues().minCoeff();
    EXPECT_NEAR(s.sigma_min / smin, 1.0, 1e-8) << "n=" << n;
    EXPECT_GE(s.sigma_max, s.sigma_min);
  }
}

TEST(MatrixExponential, Examples) {
  EXPECT_LT(rel_diff(matrix_exponential(mat2(0, 1, 0, 0), 1.0), mat2(1, 1, 0, 1)), 1e-14);
  EXPECT_NEAR(matrix_exponential(diag({-1.0}), 2.0)(0, 0).real(), 0.1353352832366127, 1e-15);
  const ComplexMatrix r = matrix_exponential(diag({Complex(0, 1)}), std::numbers::pi);
  EXPECT_NEAR(std::abs(r(0, 0) - Complex(-1, 0)), 0.0, 1e-14);
}

TEST(MatrixExponential, AgreesWithReferenceImplementation) {
  std::mt19937_64 rng(3);
  for (Index n : {3, 8, 20}) {
    const ComplexMatrix a = random_stable(n, rng) * 3.0;
    for (double t : {0.0, 0.5, 4.0}) {
      const ComplexMatrix ref = (a * t).exp();
      EXPECT_LT(rel_diff(matrix_exponential(a, t), ref), 1e-10);
      EXPECT_LT(rel_diff(expm_pade13(a * t), ref), 1e-10);
    }
  }
}

TEST(MatrixExponential, AgreesWithOdeIntegrator) {
  std::mt19937_64 rng(5);
  const ComplexMatrix a = random_stable(12, rng);
  const ComplexMatrix id = ComplexMatrix::Identity(12, 12);
  for (double t : {1.0, 10.0}) EXPECT_LT(rel_diff(integrate_linear_ode(a, id, t), matrix_exponential(a, t)), 1e-10);
}

TEST(MatrixExponential, SemigroupLaw) {
  std::mt19937_64 rng(11);
  const ComplexMatrix a = random_stable(24, rng);
  for (double s : {0.0, 1.3, 4.0})
    for (double t : {0.7, 2.0, 4.0}) {
      const ComplexMatrix est = matrix_exponential(a, s + t);
      EXPECT_LE((est - matrix_exponential(a, s) * matrix_exponential(a, t)).norm(), 1e-9 * est.norm());
    }
}

TEST(MatrixExponential, OverflowAndBadInput) {
  EXPECT_ERROR_KIND(matrix_exponential(diag({1000.0}), 1.0), ErrorKind::Overflow);
  EXPECT_ERROR_KIND(matrix_exponential(ComplexMatrix::Zero(2, 3), 1.0), ErrorKind::NonSquare);
  EXPECT_ERROR_KIND(matrix_exponential(diag({-1.0}), -1.0), ErrorKind::DomainError);
}

TEST(FractionalPower, Examples) {
  EXPECT_LT(rel_diff(fractional_power(diag({4.0, 9.0}), 0.5), diag({2.0, 3.0})), 1e-14);
  EXPECT_LT(rel_diff(fractional_power(mat2(1, 1, 0, 1), 0.5), mat2(1, 0.5, 0, 1)), 1e-14);
  EXPECT_NEAR(std::abs(fractional_power(diag({4.0}), -1.0)(0, 0) - 0.25), 0.0, 1e-15);
}

TEST(FractionalPower, ConsistencyAndAdditivity) {
  std::mt19937_64 rng(9);
  for (Index n : {4, 16, 40}) {
    const ComplexMatrix aneg = -random_stable(n, rng);
    EXPECT_LT(rel_diff(fractional_power(aneg, 1.0), aneg), 1e-12);
    EXPECT_LT((fractional_power(aneg, 0.0) - ComplexMatrix::Identity(n, n)).norm(), 1e-12);
    for (auto [a, b] : {std::pair{0.3, 0.45}, std::pair{1.2, -0.7}, std::pair{-0.5, 2.25}}) {
      EXPECT_LT(rel_diff(fractional_power(aneg, a) * fractional_power(aneg, b), fractional_power(aneg, a + b)), 1e-8);
    }
  }
}

TEST(FractionalPower, AgreesWithReferenceImplementation) {
  std::mt19937_64 rng(13);
  const ComplexMatrix aneg = -random_stable(10, rng);
  for (double tau : {0.25, 0.5, 1.75}) EXPECT_LT(rel_diff(fractional_power(aneg, tau), aneg.pow(tau)), 1e-9);
}

TEST(FractionalPower, Errors) {
  EXPECT_ERROR_KIND(fractional_power(diag({1.0, -1.0}), 0.5), ErrorKind::SpectrumOnCut);
  EXPECT_ERROR_KIND(fractional_power(diag({0.0}), 0.5), ErrorKind::SpectrumOnCut);
  EXPECT_ERROR_KIND(fractional_power(ComplexMatrix::Ones(2, 3), 0.5), ErrorKind::NonSquare);
}

TEST(Norms, ExactCases) {
  const ComplexMatrix m = mat2(1, -2, Complex(0, 3), 4);
  EXPECT_DOUBLE_EQ(norm_1(m), 6.0);
  EXPECT_DOUBLE_EQ(norm_inf(m), 7.0);
  for (double p : {1.0, 2.0, (double)INFINITY}) EXPECT_TRUE(lp_operator_norm(m, p).exact());
  EXPECT_NEAR(lp_operator_norm(m, 2.0).upper, Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0), 1e-12);
}

TEST(Norms, IntervalBracketsDiagonalNorm) {
  const ComplexMatrix d = diag({3.0, -1.0, 0.5});
  const auto iv = lp_operator_norm(d, 1.5);
  EXPECT_LE(iv.lower, 3.0 + 1e-12);
  EXPECT_GE(iv.upper, 3.0 - 1e-12);
  EXPECT_LE(iv.lower, iv.upper);
  std::mt19937_64 rng(1);
  const ComplexMatrix m = random_matrix(6, 6, rng);
  const auto iv2 = lp_operator_norm(m, 1.3);
  EXPECT_LE(iv2.lower, iv2.upper * (1 + 1e-12));
}

TEST(Norms, VectorNorms) {
  ComplexVector v(3);
  v << 3.0, Complex(0, -4), 0.0;
  EXPECT_DOUBLE_EQ(lp_vector_norm(v, 1.0), 7.0);
  EXPECT_DOUBLE_EQ(lp_vector_norm(v, 2.0), 5.0);
  EXPECT_DOUBLE_EQ(lp_vector_norm(v, INFINITY), 4.0);
}

TEST(BlockDiagonal, DecomposeRoundTrip) {
  ComplexMatrix a = ComplexMatrix::Zero(6, 6);
  a(0, 0) = -1.0;
  a(1, 1) = a(3, 3) = -2.0;
  a(1, 3) = 5.0;
  a(2, 2) = -3.0;
  a(4, 4) = a(5, 5) = Complex(-1, 1);
  a(5, 4) = 0.5;
  const auto bd = BlockDiagonal::decompose(a);
  EXPECT_EQ(bd.blocks().size(), 4u);
  EXPECT_EQ(bd.max_block_size(), 2u);
  EXPECT_LT(rel_diff(bd.dense(), a), 1e-16);
  std::mt19937_64 rng(2);
  const ComplexMatrix x = random_matrix(6, 3, rng);
  EXPECT_LT(rel_diff(bd.apply(x), a * x), 1e-15);
  EXPECT_LT(rel_diff(matrix_exponential(bd, 1.5).dense(), (a * 1.5).exp()), 1e-12);
  EXPECT_NEAR(bd.spectral_norm(), Eigen::JacobiSVD<ComplexMatrix>(a).singularValues()(0), 1e-12);
}

TEST(Normality, Detection) {
  EXPECT_TRUE(is_normal(diag({Complex(-1, 2), -3.0})));
  EXPECT_FALSE(is_normal(mat2(-1, 1, 0, -1)));
  EXPECT_GT(commutator_defect(mat2(-1, 1, 0, -1)), 0.1);
}

TEST(Parallel, DeterministicAcrossThreadCounts) {
  std::vector<double> a(1000), b(1000);
  set_thread_count(1);
  parallel_for(a.size(), [&](std::size_t i) { a[i] = std::sin(static_cast<double>(i)); });
  set_thread_count(4);
  parallel_for(b.size(), [&](std::size_t i) { b[i] = std::sin(static_cast<double>(i)); });
  set_thread_count(0);
  EXPECT_EQ(a, b);
}

TEST(Parallel, PropagatesExceptions) {
  set_thread_count(3);
  EXPECT_ERROR_KIND(parallel_for(10, [](std::size_t i) {
    if (i == 7) fail(ErrorKind::DomainError, "boom");
  }), ErrorKind::DomainError);
  set_thread_count(0);
}
