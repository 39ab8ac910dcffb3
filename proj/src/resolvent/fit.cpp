#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <tuple>

#include "polydecay/resolvent.hpp"

namespace polydecay::resolvent {

namespace {

struct Point {
  double u;
  double y;
};

// Upper convex hull of points sorted by u (duplicates in u keep the larger y).
std::vector<Point> upper_hull(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.u < b.u || (a.u == b.u && a.y > b.y); });
  std::vector<Point> uniq;
  for (const auto& p : pts) {
    if (!uniq.empty() && uniq.back().u == p.u) continue;
    uniq.push_back(p);
  }
  std::vector<Point> hull;
  for (const auto& p : uniq) {
    while (hull.size() >= 2) {
      const Point& o = hull[hull.size() - 2];
      const Point& a = hull.back();
      const double cross = (a.u - o.u) * (p.y - o.y) - (a.y - o.y) * (p.u - o.u);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(p);
  }
  return hull;
}

double hull_slope_at(const std::vector<Point>& hull, double mid) {
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    if (mid < hull[i + 1].u || i + 2 == hull.size()) {
      return (hull[i + 1].y - hull[i].y) / (hull[i + 1].u - hull[i].u);
    }
  }
  return 0.0;
}

}  // namespace

EnvelopeFit fit_envelope(std::span<const double> u, std::span<const double> log_y, double beta_min) {
  require(u.size() == log_y.size(), ErrorKind::DimensionMismatch, "fit_envelope: length mismatch");
  std::vector<Point> pts;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (std::isfinite(log_y[j])) pts.push_back({u[j], log_y[j]});
  }
  require(!pts.empty(), ErrorKind::InsufficientData, "fit_envelope: no finite samples");

  const auto hull = upper_hull(pts);
  double beta = 0.0;
  if (hull.size() >= 2) beta = hull_slope_at(hull, 0.5 * (hull.front().u + hull.back().u));
  if (std::isfinite(beta_min)) beta = std::max(beta, beta_min);

  double logc = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) logc = std::max(logc, p.y - beta * p.u);
  double residual = 0.0;
  for (const auto& h : hull) residual = std::max(residual, logc + beta * h.u - h.y);

  return {beta, std::exp(logc), residual};
}

EnvelopeFit fit_growth_exponent(std::span<const double> xi, std::span<const double> norms, double window_max) {
  require(xi.size() == norms.size(), ErrorKind::DimensionMismatch, "fit_growth_exponent: length mismatch");
  std::size_t tail = 0;
  for (double x : xi) tail += std::abs(x) >= 1.0 ? 1 : 0;
  require(tail >= 8, ErrorKind::InsufficientData,
          "fit_growth_exponent: need >= 8 grid points with |xi| >= 1, got " + std::to_string(tail));
  for (double n : norms) require(n > 0.0 && std::isfinite(n), ErrorKind::DomainError, "fit_growth_exponent: norms must be finite and positive");

  auto select = [&](double hi) {
    std::vector<double> u, y;
    for (std::size_t j = 0; j < xi.size(); ++j) {
      const double a = std::abs(xi[j]);
      if (a >= 1.0 && a <= hi) {
        u.push_back(std::log1p(a));
        y.push_back(std::log(norms[j]));
      }
    }
    return std::pair{u, y};
  };

  auto [u, y] = select(window_max);
  std::vector<double> distinct = u;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) std::tie(u, y) = select(std::numeric_limits<double>::infinity());

  EnvelopeFit fit = fit_envelope(u, y, 0.0);

  // Re-maximize c over every sample so the envelope dominates the whole grid.
  double logc = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < xi.size(); ++j) logc = std::max(logc, std::log(norms[j]) - fit.beta * std::log1p(std::abs(xi[j])));
  fit.residual += logc - std::log(fit.c);
  fit.c = std::exp(logc);
  return fit;
}

}  // namespace polydecay::resolvent
