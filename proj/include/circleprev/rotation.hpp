#pragma once

#include <optional>
#include <string>
#include <vector>

#include "circleprev/lifting.hpp"

namespace circleprev {

// Lift rotation number (F^N(x0) - x0) / N with the classical bound
// |F^N(x) - x - N rho| <= 1, hence error_bound = 1/N.
struct RotationEstimate {
  double value = 0.0;
  double error_bound = 1.0;
  int iterations = 1;
  double x0 = 0.0;
};

// Throws kNotADiffeo unless F is a certified diffeomorphism lift.
RotationEstimate rotation_number(const Lifting& f, int iterations, double x0 = 0.0);

struct Convergent {
  long long p;
  long long q;

  friend bool operator==(const Convergent&, const Convergent&) = default;
};

// Continued-fraction convergents p_j/q_j of rho with q_j <= q_max, increasing
// in q. Partial quotients within 1e-9 of the next integer are snapped to it,
// so values like 0.3 terminate as [0; 3, 3] instead of the rounding-induced
// [0; 3, 2, 1, ...].
std::vector<Convergent> convergents(double rho, long long q_max);

struct Violation {
  long long p;
  long long q;
  double gap;  // |rho - p/q|
};

// Verdict on |rho - p/q| < q^-(2+beta), conditional on the estimate's error
// and the q_max cut-off. Convergents realize the best approximations, so only
// they are enumerated.
struct DiophantineReport {
  double beta = 0.5;
  long long q_max = 1;
  long long q_threshold = 1;
  double value = 0.0;
  double error_bound = 0.0;
  std::vector<Convergent> convergents;
  std::vector<Violation> violations;
  // No violation with q > q_threshold.
  bool satisfied_up_to_qmax = false;
  // value is exactly p/q with q <= q_threshold; the test is bypassed.
  bool rational = false;
  // First convergent within error_bound of the estimate.
  std::optional<Convergent> possibly_rational;
  // Set when beta lies outside (0, 1).
  std::optional<std::string> warning;
};

// q_threshold defaults to max(1, q_max / 10). Throws kInvalidArgument for
// beta <= 0 or q_max < 1.
DiophantineReport check_star_beta(const RotationEstimate& est, double beta,
                                  long long q_max,
                                  std::optional<long long> q_threshold = std::nullopt);

struct PeriodicOrbitCertificate {
  double x;         // F^q(x) = x + p
  double residual;  // |F^q(x) - x - p|
};

// Searches for a point of rotation type p/q by following the Type I evaluation
// map lambda = Delta_q(x) of (F, F + 1) to a zero in x.
std::optional<PeriodicOrbitCertificate> certify_periodic_orbit(
    const Lifting& f, long long p, long long q, int grid_points = 1024);

struct RotationAnalysis {
  RotationEstimate estimate;
  DiophantineReport star_beta;
  std::optional<PeriodicOrbitCertificate> periodic_orbit;
};

// Estimate, (*)_beta report, and a periodic-orbit certificate attempt when the
// estimate is possibly rational.
RotationAnalysis analyze_rotation(const Lifting& f, int iterations, double beta,
                                  long long q_max, double x0 = 0.0);

}  // namespace circleprev
