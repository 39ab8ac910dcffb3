#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "polydecay/semigroup.hpp"

namespace polydecay::semigroup {

namespace {

constexpr double kGolden = 0.6180339887498949;

template <class F>
double golden_min(F&& f, double lo, double hi, int iters, double& arg) {
  double a = lo, b = hi;
  double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kGolden * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kGolden * (b - a);
      fd = f(d);
    }
  }
  if (fc <= fd) {
    arg = c;
    return fc;
  }
  arg = d;
  return fd;
}

}  // namespace

KFunctional::KFunctional(const zoo::GeneratorModel& model, int m)
    : space_p_(model.space_p), m_(m), dim_(model.dim()) {
  require(m > 0, ErrorKind::PreconditionViolation, "k_functional: m must be positive");
  const auto bd = linalg::BlockDiagonal::decompose(model.matrix);
  for (const auto& src : bd.blocks()) {
    Block b;
    b.indices = src.indices;
    b.am = src.matrix;
    for (int k = 1; k < m; ++k) b.am = (b.am * src.matrix).eval();
    require(all_finite(b.am), ErrorKind::Overflow, "k_functional: A^m not representable");
    if (b.am.rows() == 1) {
      b.v = ComplexMatrix::Identity(1, 1);
      b.g = RealVector::Constant(1, std::norm(b.am(0, 0)));
    } else {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(b.am.adjoint() * b.am);
      require(es.info() == Eigen::Success, ErrorKind::ConvergenceFailure, "k_functional: eigensolve failed");
      b.v = es.eigenvectors();
      b.g = es.eigenvalues().cwiseMax(0.0);
    }
    blocks_.push_back(std::move(b));
  }
}

ComplexVector KFunctional::to_eigen(const ComplexVector& x) const {
  ComplexVector y(dim_);
  Index off = 0;
  for (const auto& b : blocks_) {
    const Index n = static_cast<Index>(b.indices.size());
    ComplexVector part(n);
    for (Index i = 0; i < n; ++i) part(i) = x(b.indices[i]);
    y.segment(off, n) = b.v.adjoint() * part;
    off += n;
  }
  return y;
}

ComplexVector KFunctional::from_eigen(const ComplexVector& y) const {
  ComplexVector x(dim_);
  Index off = 0;
  for (const auto& b : blocks_) {
    const Index n = static_cast<Index>(b.indices.size());
    const ComplexVector part = b.v * y.segment(off, n);
    for (Index i = 0; i < n; ++i) x(b.indices[i]) = part(i);
    off += n;
  }
  return x;
}

RealVector KFunctional::all_g() const {
  RealVector g(dim_);
  Index off = 0;
  for (const auto& b : blocks_) {
    g.segment(off, b.g.size()) = b.g;
    off += b.g.size();
  }
  return g;
}

double KFunctional::domain_norm(const ComplexVector& x) const {
  require(x.size() == dim_, ErrorKind::DimensionMismatch, "domain_norm: vector dimension mismatch");
  ComplexVector ax(dim_);
  for (const auto& b : blocks_) {
    const Index n = static_cast<Index>(b.indices.size());
    ComplexVector part(n);
    for (Index i = 0; i < n; ++i) part(i) = x(b.indices[i]);
    const ComplexVector r = b.am * part;
    for (Index i = 0; i < n; ++i) ax(b.indices[i]) = r(i);
  }
  return linalg::lp_vector_norm(x, space_p_) + linalg::lp_vector_norm(ax, space_p_);
}

KFunctional::Result KFunctional::evaluate(double t, const ComplexVector& x) const {
  require(t > 0.0 && std::isfinite(t), ErrorKind::DomainError, "k_functional: t must be positive");
  require(x.size() == dim_, ErrorKind::DimensionMismatch, "k_functional: vector dimension mismatch");
  if (x.cwiseAbs().maxCoeff() == 0.0) return {};
  if (space_p_ == 2.0) return evaluate_hilbert(t, to_eigen(x), all_g());
  return evaluate_general(t, x);
}

// In eigen-coordinates of G = (A^m)*A^m every term is a weighted ℓ² norm:
// ‖a‖ = ‖y - β‖, ‖b‖ = ‖β‖, ‖A^m b‖ = ‖√g β‖.
KFunctional::Result KFunctional::evaluate_hilbert(double t, const ComplexVector& y, const RealVector& g) const {
  const RealVector sg = g.cwiseSqrt();
  auto value = [&](const ComplexVector& beta) {
    return (y - beta).norm() + t * (beta.norm() + sg.cwiseProduct(beta).norm());
  };

  Result r;
  const double t2 = t * t;
  ComplexVector beta(y.size());
  for (Index i = 0; i < y.size(); ++i) beta(i) = y(i) / (1.0 + t2 * (1.0 + g(i)));
  r.relaxation_value = value(beta);
  r.history.push_back(r.relaxation_value);
  double best = r.relaxation_value;

  // Scalar line search along the relaxed minimizer.
  double s_opt = 1.0;
  const ComplexVector dir = beta;
  const double ls = golden_min([&](double s) { return value(s * dir); }, 0.0, 2.0, 80, s_opt);
  if (ls < best) {
    beta = s_opt * dir;
    best = ls;
    r.history.push_back(best);
  }

  // Majorize-minimize: each norm ‖v‖ is majorized by (‖v‖²/‖v_k‖ + ‖v_k‖)/2.
  const double ynorm = y.norm();
  for (int it = 0; it < 500; ++it) {
    const double na = (y - beta).norm();
    const double nb = beta.norm();
    const double ng = sg.cwiseProduct(beta).norm();
    if (na <= 1e-15 * ynorm || nb <= 1e-15 * ynorm || ng <= 1e-300) break;
    const double w1 = 1.0 / na, w2 = t / nb, w3 = t / ng;
    ComplexVector next(y.size());
    for (Index i = 0; i < y.size(); ++i) next(i) = w1 * y(i) / (w1 + w2 + w3 * g(i));
    const double v = value(next);
    if (!(v < best)) break;
    const bool small = best - v <= 1e-14 * best;
    beta = std::move(next);
    best = v;
    r.history.push_back(best);
    if (small) break;
  }

  const double zero_b = ynorm;
  const double zero_a = t * (ynorm + sg.cwiseProduct(y).norm());
  const double corner = std::min(zero_b, zero_a);
  if (corner < best) {
    best = corner;
    r.history.push_back(best);
  }
  r.value = best;
  return r;
}

// Non-Hilbert ambient norm: search the two-parameter family
// b(u, v) = V diag(1/(1+u+v g)) V* x, which contains the Hilbert minimizer.
KFunctional::Result KFunctional::evaluate_general(double t, const ComplexVector& x) const {
  const ComplexVector y = to_eigen(x);
  const RealVector g = all_g();
  const double p = space_p_;
  auto split_value = [&](const ComplexVector& b) {
    ComplexVector ab(dim_);
    for (const auto& blk : blocks_) {
      const Index n = static_cast<Index>(blk.indices.size());
      ComplexVector part(n);
      for (Index i = 0; i < n; ++i) part(i) = b(blk.indices[i]);
      const ComplexVector out = blk.am * part;
      for (Index i = 0; i < n; ++i) ab(blk.indices[i]) = out(i);
    }
    return linalg::lp_vector_norm(x - b, p) + t * (linalg::lp_vector_norm(b, p) + linalg::lp_vector_norm(ab, p));
  };
  auto family = [&](double lu, double lv) {
    ComplexVector beta(y.size());
    const double u = std::exp(lu), v = std::exp(lv);
    for (Index i = 0; i < y.size(); ++i) beta(i) = y(i) / (1.0 + u + v * g(i));
    return split_value(from_eigen(beta));
  };

  Result r;
  r.approximate = true;
  double lu = 2.0 * std::log(t), lv = 2.0 * std::log(t);
  r.relaxation_value = family(lu, lv);
  double best = r.relaxation_value;
  r.history.push_back(best);
  for (int it = 0; it < 100; ++it) {
    const double prev = best;
    double arg = lu;
    double v = golden_min([&](double a) { return family(a, lv); }, lu - 12.0, lu + 12.0, 50, arg);
    if (v < best) {
      best = v;
      lu = arg;
    }
    arg = lv;
    v = golden_min([&](double a) { return family(lu, a); }, lv - 12.0, lv + 12.0, 50, arg);
    if (v < best) {
      best = v;
      lv = arg;
    }
    r.history.push_back(best);
    if (prev - best <= 1e-4 * prev) break;
  }
  const double zero_b = linalg::lp_vector_norm(x, p);
  const double zero_a = t * domain_norm(x);
  best = std::min({best, zero_b, zero_a});
  r.value = best;
  return r;
}

InterpolationNorm::InterpolationNorm(const zoo::GeneratorModel& model, double tau, int m)
    : tau_(tau), k_(model, m > 0 ? m : static_cast<int>(std::ceil(tau)) + 1) {
  require(tau > 0.0 && tau < k_.m(), ErrorKind::PreconditionViolation, "interpolation_norm: need 0 < tau < m");
}

std::vector<double> InterpolationNorm::dyadic_k(const ComplexVector& x) const {
  std::vector<double> k(2 * kJ + 1);
  for (int j = -kJ; j <= kJ; ++j) k[j + kJ] = k_(std::ldexp(1.0, -j), x);
  return k;
}

double InterpolationNorm::aggregate(const std::vector<double>& k, double q) const {
  require(q >= 1.0, ErrorKind::DomainError, "interpolation_norm: q must be in [1, inf]");
  const double theta = tau_ / k_.m();
  std::vector<double> terms(k.size());
  double mx = 0.0;
  for (int j = -kJ; j <= kJ; ++j) {
    terms[j + kJ] = std::exp2(j * theta) * k[j + kJ];
    mx = std::max(mx, terms[j + kJ]);
  }
  if (std::isinf(q) || mx == 0.0) return mx;
  double s = 0.0;
  for (double v : terms) s += std::pow(v / mx, q);
  return mx * std::pow(s, 1.0 / q);
}

double InterpolationNorm::truncation_bound(const ComplexVector& x) const {
  const double theta = tau_ / k_.m();
  const double xd = k_.domain_norm(x);
  const double xn = linalg::lp_vector_norm(x, k_.space_p());
  return xd * std::exp2(-(kJ + 1) * (1.0 - theta)) / (1.0 - std::exp2(-(1.0 - theta))) +
         xn * std::exp2(-(kJ + 1) * theta) / (1.0 - std::exp2(-theta));
}

double k_functional(const zoo::GeneratorModel& model, int m, double t, const ComplexVector& x) {
  require(model.space_p == 2.0, ErrorKind::UnsupportedSpace, "k_functional: exact mode requires a Hilbert ambient norm");
  return KFunctional(model, m)(t, x);
}

InterpolationResult interpolation_norm(const zoo::GeneratorModel& model, double tau, double q, const ComplexVector& x,
                                       bool check_reiteration) {
  const InterpolationNorm norm(model, tau);
  InterpolationResult r;
  r.m = norm.m();
  r.value = norm(x, q);
  r.truncation_bound = norm.truncation_bound(x);
  if (check_reiteration && r.value > 0.0) {
    const InterpolationNorm next(model, tau, norm.m() + 1);
    const double v2 = next(x, q);
    r.reiteration_ratio = r.value / v2;
    r.reiteration_ok = r.reiteration_ratio <= 4.0 && r.reiteration_ratio >= 0.25;
  }
  return r;
}

double fractional_domain_norm(const zoo::GeneratorModel& model, double tau, const ComplexVector& x) {
  require(x.size() == model.dim(), ErrorKind::DimensionMismatch, "fractional_domain_norm: dimension mismatch");
  const auto aneg = linalg::BlockDiagonal::decompose(-model.matrix);
  const auto pw = linalg::fractional_power(aneg, tau);
  return linalg::lp_vector_norm(x, model.space_p) + linalg::lp_vector_norm(pw.apply(x), model.space_p);
}

}  // namespace polydecay::semigroup
