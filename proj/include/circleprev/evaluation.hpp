#pragma once

#include <optional>
#include <vector>

#include "circleprev/lifting.hpp"
#include "circleprev/probe.hpp"

namespace circleprev {

// Orbit data of x under alpha_lambda after n steps.
struct OrbitJet {
  double end = 0.0;        // alpha^n(x)
  double d_x = 1.0;        // d alpha^n / dx
  double d_lambda = 0.0;   // d alpha^n / d lambda at fixed x
  double min_slope = 0.0;  // min of alpha' over x, alpha(x), ..., alpha^{n-1}(x)
};

OrbitJet orbit_jet(const Probe& p, double lambda, double x, int n);

// prod_{j<n} A'(A^j(x)).
double orbit_derivative_x(const Lifting& a, double x, int n);

// sum_{k<n} [prod_{j=k+1}^{n-1} alpha'(alpha^j x)] (G - F)(alpha^k x), by the
// forward recursion L <- alpha'(y) L + (G - F)(y).
double orbit_derivative_lambda(const Probe& p, double lambda, double x, int n);

// A solution lambda = Delta_n(x) on the lift branch alpha^n(x) - x = branch.
struct EvaluationPoint {
  double x = 0.0;  // reduced to [0, 1)
  int n = 1;
  int branch = 0;
  double lambda = 0.0;
  double d_x = 1.0;
  double d_lambda = 0.0;
  double delta_prime = 0.0;
  double min_orbit_slope = 0.0;
  double residual = 0.0;  // alpha^n(x) - x - branch at the solution
};

// Solves alpha_lambda^n(x) - x - branch = 0 for lambda in the closed window.
// The left side is strictly monotone in lambda on the probe domain, so the
// root is unique: bisection brackets it and Newton steps on d_lambda polish it.
// Returns nullopt when the window holds no root.
// Throws kWindowOutsideDomain if the window leaves the probe domain.
std::optional<EvaluationPoint> eval_map_solve(const Probe& p, double x, int n,
                                              int branch, Interval window);
std::optional<EvaluationPoint> eval_map_solve(const Probe& p, double x, int n,
                                              int branch);

// Delta_n'(x) = (1 - d_x) / (d_x sum_{k<n} (d alpha^{k+1}/dx)^{-1} (G-F)(alpha^k x))
// evaluated along the orbit of pt. Throws kZeroLambdaDerivative if the
// denominator vanishes.
double eval_map_derivative(const Probe& p, const EvaluationPoint& pt);

// Every branch m for which some x in a coarse grid has a root in the window.
std::vector<int> default_branches(const Probe& p, int n, Interval window);

// Solutions at x_j = j / grid_points, j = 0 .. grid_points - 1.
std::vector<std::optional<EvaluationPoint>> solve_on_grid(const Probe& p, int n,
                                                          int branch,
                                                          int grid_points,
                                                          Interval window);

struct CriticalScan {
  std::vector<EvaluationPoint> points;  // sorted by x
  // Delta_n' vanished on the whole grid (e.g. rigid rotations under a Type I
  // probe): every solved point is degenerate and none is isolated.
  bool degenerate_probe = false;
};

// Zeros of Delta_n' on a branch: sign changes on the x-grid refined by
// bisection to |Delta_n'| <= 1e-10. Each point is re-verified to be n-periodic
// with |d_x - 1| <= 1e-6.
CriticalScan critical_points(const Probe& p, int n, int branch, int grid_points,
                             std::optional<Interval> window = std::nullopt);

}  // namespace circleprev
