#include "circleprev/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "circleprev/error.hpp"

namespace circleprev {

namespace {

constexpr int kBisectionSteps = 40;
constexpr int kNewtonSteps = 5;
constexpr double kCriticalTol = 1e-10;
constexpr double kPeriodicTol = 1e-10;
constexpr double kDegeneracyTol = 1e-6;

void require_period(int n) {
  if (n < 1) throw Error(Errc::kInvalidArgument, "period must be >= 1");
}

double reduce_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

void require_window_in_domain(const Probe& p, const Interval& w) {
  if (!(w.lo <= w.hi) || !std::isfinite(w.lo) || !std::isfinite(w.hi)) {
    throw Error(Errc::kWindowOutsideDomain, "window must be a finite interval");
  }
  const Interval& d = p.domain();
  const double tol = 1e-12 * std::max(1.0, std::max(std::abs(w.lo), std::abs(w.hi)));
  if (w.lo < d.lo - tol || w.hi > d.hi + tol) {
    throw Error(Errc::kWindowOutsideDomain,
                "window [" + std::to_string(w.lo) + ", " + std::to_string(w.hi) +
                    "] leaves the probe domain");
  }
}

}  // namespace

OrbitJet orbit_jet(const Probe& p, double lambda, double x, int n) {
  require_period(n);
  const Lifting a = alpha_at(p, lambda);
  OrbitJet jet;
  jet.min_slope = std::numeric_limits<double>::infinity();
  double y = x;
  for (int k = 0; k < n; ++k) {
    const auto [next, slope] = eval_with_slope(a, y);
    jet.d_lambda = slope * jet.d_lambda + p.gap().value(y);
    jet.d_x *= slope;
    jet.min_slope = std::min(jet.min_slope, slope);
    y = next;
  }
  jet.end = y;
  return jet;
}

double orbit_derivative_x(const Lifting& a, double x, int n) {
  require_period(n);
  double d = 1.0;
  for (int k = 0; k < n; ++k) {
    const auto [next, slope] = eval_with_slope(a, x);
    d *= slope;
    x = next;
  }
  return d;
}

double orbit_derivative_lambda(const Probe& p, double lambda, double x, int n) {
  return orbit_jet(p, lambda, x, n).d_lambda;
}

std::optional<EvaluationPoint> eval_map_solve(const Probe& p, double x, int n,
                                              int branch, Interval window) {
  require_period(n);
  require_window_in_domain(p, window);

  auto g = [&](double lambda) {
    return iterate(alpha_at(p, lambda), x, n) - x - branch;
  };

  double lo = window.lo;
  double hi = window.hi;
  double g_lo = g(lo);
  double g_hi = g(hi);
  if (std::signbit(g_lo) == std::signbit(g_hi) && g_lo != 0.0 && g_hi != 0.0) {
    return std::nullopt;
  }

  double root;
  double g_root;
  if (g_lo == 0.0) {
    root = lo;
    g_root = 0.0;
  } else if (g_hi == 0.0) {
    root = hi;
    g_root = 0.0;
  } else {
    const bool increasing = g_lo < 0.0;
    for (int i = 0; i < kBisectionSteps; ++i) {
      const double mid = 0.5 * (lo + hi);
      const double gm = g(mid);
      if (gm == 0.0) {
        lo = hi = mid;
        break;
      }
      if ((gm < 0.0) == increasing) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    root = 0.5 * (lo + hi);
    g_root = g(root);
    for (int i = 0; i < kNewtonSteps && g_root != 0.0; ++i) {
      const double slope = orbit_derivative_lambda(p, root, x, n);
      if (slope == 0.0) break;
      double next = root - g_root / slope;
      if (!(next >= window.lo && next <= window.hi)) break;
      const double g_next = g(next);
      if (std::abs(g_next) >= std::abs(g_root)) break;
      root = next;
      g_root = g_next;
    }
  }

  const OrbitJet jet = orbit_jet(p, root, x, n);
  EvaluationPoint pt;
  pt.x = reduce_unit(x);
  pt.n = n;
  pt.branch = branch;
  pt.lambda = root;
  pt.d_x = jet.d_x;
  pt.d_lambda = jet.d_lambda;
  pt.min_orbit_slope = jet.min_slope;
  pt.residual = g_root;
  pt.delta_prime = eval_map_derivative(p, pt);
  return pt;
}

std::optional<EvaluationPoint> eval_map_solve(const Probe& p, double x, int n,
                                              int branch) {
  return eval_map_solve(p, x, n, branch, default_window(p));
}

double eval_map_derivative(const Probe& p, const EvaluationPoint& pt) {
  require_period(pt.n);
  const Lifting a = alpha_at(p, pt.lambda);
  // prefix = d alpha^{k+1}/dx along the orbit.
  double prefix = 1.0;
  double weighted = 0.0;
  double y = pt.x;
  for (int k = 0; k < pt.n; ++k) {
    const auto [next, slope] = eval_with_slope(a, y);
    const double gap = p.gap().value(y);
    prefix *= slope;
    weighted += gap / prefix;
    y = next;
  }
  const double d_x = prefix;
  const double denom = d_x * weighted;
  if (denom == 0.0 || !std::isfinite(denom)) {
    throw Error(Errc::kZeroLambdaDerivative,
                "lambda derivative of the orbit vanishes at x = " + std::to_string(pt.x));
  }
  return (1.0 - d_x) / denom;
}

std::vector<int> default_branches(const Probe& p, int n, Interval window) {
  require_period(n);
  require_window_in_domain(p, window);
  constexpr int kCoarse = 64;
  const Lifting lo = alpha_at(p, window.lo);
  const Lifting hi = alpha_at(p, window.hi);
  double min_disp = std::numeric_limits<double>::infinity();
  double max_disp = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < kCoarse; ++j) {
    const double x = static_cast<double>(j) / kCoarse;
    for (const Lifting* a : {&lo, &hi}) {
      const double d = iterate(*a, x, n) - x;
      min_disp = std::min(min_disp, d);
      max_disp = std::max(max_disp, d);
    }
  }
  std::vector<int> out;
  for (int m = static_cast<int>(std::floor(min_disp));
       m <= static_cast<int>(std::ceil(max_disp)); ++m) {
    out.push_back(m);
  }
  return out;
}

std::vector<std::optional<EvaluationPoint>> solve_on_grid(const Probe& p, int n,
                                                          int branch,
                                                          int grid_points,
                                                          Interval window) {
  if (grid_points < 2) {
    throw Error(Errc::kInvalidArgument, "grid_points must be >= 2");
  }
  std::vector<std::optional<EvaluationPoint>> out;
  out.reserve(grid_points);
  for (int j = 0; j < grid_points; ++j) {
    out.push_back(eval_map_solve(p, static_cast<double>(j) / grid_points, n, branch,
                                 window));
  }
  return out;
}

CriticalScan critical_points(const Probe& p, int n, int branch, int grid_points,
                             std::optional<Interval> window) {
  const Interval w = window.value_or(default_window(p));
  auto grid = solve_on_grid(p, n, branch, grid_points, w);
  // Close the circle: x = 1 lies on the same branch as x = 0.
  grid.push_back(eval_map_solve(p, 1.0, n, branch, w));

  CriticalScan scan;
  const bool any_solved =
      std::any_of(grid.begin(), grid.end(), [](const auto& s) { return s.has_value(); });
  const bool all_flat = std::all_of(grid.begin(), grid.end(), [](const auto& s) {
    return !s || std::abs(s->delta_prime) <= 1e-12;
  });
  if (any_solved && all_flat) {
    scan.degenerate_probe = true;
    return scan;
  }

  std::vector<EvaluationPoint> found;
  const double h = 1.0 / grid_points;
  for (int j = 0; j < grid_points; ++j) {
    const auto& left = grid[j];
    const auto& right = grid[j + 1];
    if (!left) continue;
    if (std::abs(left->delta_prime) <= kCriticalTol) {
      found.push_back(*left);
      continue;
    }
    if (!right || std::abs(right->delta_prime) <= kCriticalTol) continue;
    if ((left->delta_prime < 0.0) == (right->delta_prime < 0.0)) continue;

    double a = j * h;
    double b = (j + 1) * h;
    const bool left_negative = left->delta_prime < 0.0;
    std::optional<EvaluationPoint> best;
    for (int it = 0; it < 100 && b - a > 1e-16; ++it) {
      const double mid = 0.5 * (a + b);
      auto s = eval_map_solve(p, mid, n, branch, w);
      if (!s) break;
      if (!best || std::abs(s->delta_prime) < std::abs(best->delta_prime)) best = s;
      if (std::abs(s->delta_prime) <= kCriticalTol) break;
      if ((s->delta_prime < 0.0) == left_negative) {
        a = mid;
      } else {
        b = mid;
      }
    }
    if (best) found.push_back(*best);
  }

  for (const EvaluationPoint& pt : found) {
    if (std::abs(pt.residual) <= kPeriodicTol && std::abs(pt.d_x - 1.0) <= kDegeneracyTol) {
      scan.points.push_back(pt);
    }
  }
  std::sort(scan.points.begin(), scan.points.end(),
            [](const EvaluationPoint& a, const EvaluationPoint& b) { return a.x < b.x; });
  scan.points.erase(std::unique(scan.points.begin(), scan.points.end(),
                                [](const EvaluationPoint& a, const EvaluationPoint& b) {
                                  return std::abs(a.x - b.x) < 1e-9;
                                }),
                    scan.points.end());
  return scan;
}

}  // namespace circleprev
