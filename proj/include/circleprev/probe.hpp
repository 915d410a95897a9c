#pragma once

#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "circleprev/lifting.hpp"

namespace circleprev {

enum class ProbeKind { kTypeI, kTypeII };
std::string_view kind_name(ProbeKind kind);

// Open parameter interval; infinite endpoints encode an unbounded side.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();

  bool bounded() const;
  bool contains(double x) const { return lo < x && x < hi; }
  double width() const { return hi - lo; }
};

inline constexpr Interval kDefaultLambdaClamp{-10.0, 10.0};

// The path alpha_lambda = (1 - lambda) F + lambda G.
//   Type I:  G = F + k with k in (0, 1]; alpha_lambda = F + lambda k.
//   Type II: min |G - F| = sigma > 0 on the circle.
// Construction certifies F as a diffeomorphism lift and caches sigma and the
// maximal interval (a, b) on which alpha_lambda stays one.
class Probe {
 public:
  static Probe type_one(Lifting f, double k, int grid_points = kDefaultGrid);
  static Probe type_two(Lifting f, Lifting g, int grid_points = kDefaultGrid);

  const Lifting& f() const { return f_; }
  const Lifting& g() const { return g_; }
  ProbeKind kind() const { return kind_; }
  // Shift of a Type I probe; 0 for Type II.
  double k() const { return k_; }
  double sigma() const { return sigma_; }
  const Interval& domain() const { return domain_; }
  // G - F.
  const TrigPolynomial& gap() const { return gap_; }
  bool f_has_fixed_point() const { return f_has_fixed_point_; }

 private:
  Probe() = default;

  Lifting f_;
  Lifting g_;
  ProbeKind kind_ = ProbeKind::kTypeII;
  double k_ = 0.0;
  double sigma_ = 0.0;
  Interval domain_;
  TrigPolynomial gap_;
  bool f_has_fixed_point_ = false;
};

Lifting alpha_at(const Probe& p, double lambda);

// Maximal open interval containing [0, 1] with min_x alpha_lambda' > 0.
// alpha_lambda' is affine in lambda, so each grid point contributes a closed
// form half-line; the binding grid point is then polished by a local
// minimization of the ratio F'/(F' - G'). Unbounded for Type I.
// Throws kNotADiffeoPath when F itself is not certified.
Interval domain_interval(const Probe& p, int grid_points = kDefaultGrid);

// Certified lower bound for min_x |G(x) - F(x)|, 0 when G - F may vanish.
double sigma_of(const Lifting& f, const Lifting& g, int grid_points = kDefaultGrid);

struct FoliationSample {
  double lambda;
  std::vector<std::pair<double, double>> samples;  // (x, alpha_lambda(x))
  bool in_h0;
};

std::vector<FoliationSample> foliation_samples(const Probe& p,
                                               std::span<const double> lambdas,
                                               int grid_points);

// Probe domain intersected with the clamp window; the default parameter window
// for scans.
Interval default_window(const Probe& p, Interval clamp = kDefaultLambdaClamp);

}  // namespace circleprev
