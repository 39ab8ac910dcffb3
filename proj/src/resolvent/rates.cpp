#include <cmath>

#include "polydecay/resolvent.hpp"

namespace polydecay::resolvent {

RateTable predict_decay_rates(double beta, double p, double rho) {
  require(p >= 1.0 && p <= 2.0, ErrorKind::DomainError, "predict_decay_rates: p must lie in [1, 2]");
  require(beta >= 0.0 && std::isfinite(beta), ErrorKind::DomainError, "predict_decay_rates: beta must be >= 0");
  require(rho >= 0.0 && std::isfinite(rho), ErrorKind::DomainError, "predict_decay_rates: rho must be >= 0");
  RateTable r;
  r.beta = beta;
  r.p = p;
  r.rho = rho;
  const double gap = 1.0 / p - conjugate_reciprocal(p);
  r.tau_main = (rho + 1.0) * beta + gap;
  r.tau_old = (rho + 1.0) * beta + 1.0;
  r.tau_log = r.tau_main;
  r.sigma_log_threshold = gap;
  r.tau_bounded = rho * beta;
  r.bounded_log_exponent = rho;
  return r;
}

nlohmann::json RateTable::to_json() const {
  return {{"beta", beta},
          {"p", p},
          {"rho", rho},
          {"tau_main", tau_main},
          {"tau_old", {{"threshold", tau_old}, {"strict", true}}},
          {"tau_log", {{"tau", tau_log}, {"sigma_greater_than", sigma_log_threshold}}},
          {"tau_bounded", {{"tau", tau_bounded}, {"log_exponent", bounded_log_exponent}, {"requires_bounded_semigroup", true}}}};
}

}  // namespace polydecay::resolvent
