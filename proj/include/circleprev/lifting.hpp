#pragma once

#include <initializer_list>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace circleprev {

inline constexpr int kDefaultGrid = 4096;
inline constexpr int kDefaultRegularity = 2;

struct Harmonic {
  int k = 1;
  double sin_coef = 0.0;
  double cos_coef = 0.0;

  friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

// A 1-periodic trigonometric polynomial
//   p(x) = constant + sum_k (s_k sin(2 pi k x) + c_k cos(2 pi k x)).
// Frequencies are positive, distinct and kept sorted.
class TrigPolynomial {
 public:
  TrigPolynomial() = default;
  TrigPolynomial(double constant, std::vector<Harmonic> harmonics);

  double constant() const { return constant_; }
  std::span<const Harmonic> harmonics() const { return harmonics_; }
  bool is_constant() const;

  double value(double x) const;
  // Analytic derivative of the given order; order 0 is value().
  double derivative(double x, int order) const;
  // (p(x), p'(x)) sharing one set of sin/cos evaluations.
  std::pair<double, double> value_and_slope(double x) const;

  // sum_k (2 pi k)^order (|s_k| + |c_k|): a bound on |p^(order)| for order >= 1.
  double derivative_bound(int order) const;

  friend bool operator==(const TrigPolynomial&, const TrigPolynomial&) = default;

 private:
  double constant_ = 0.0;
  std::vector<Harmonic> harmonics_;
};

// Coefficient-wise sum_i weights[i] * polys[i]; missing harmonics count as zero.
TrigPolynomial linear_combination(std::span<const double> weights,
                                  std::span<const TrigPolynomial> polys);

// Rigorous enclosure of a trigonometric polynomial on the circle from a uniform
// grid: the grid extremes widened by |p''|_max h^2 / 8 (linear interpolation
// error on each cell).
struct CertifiedRange {
  double lower;
  double upper;
};
CertifiedRange certified_range(const TrigPolynomial& p, int grid_points);

// Degree-one lift F(x) = x + c0 + sum_k (s_k sin(2 pi k x) + c_k cos(2 pi k x)).
// F(x + 1) = F(x) + 1 holds structurally because only the identity part is
// non-periodic. `regularity` is the order r used by the C^r metric.
class Lifting {
 public:
  Lifting() = default;
  Lifting(double c0, std::vector<Harmonic> harmonics,
          int regularity = kDefaultRegularity);
  Lifting(TrigPolynomial periodic, int regularity);

  static Lifting identity(int regularity = kDefaultRegularity);
  static Lifting rotation(double c0, int regularity = kDefaultRegularity);

  double c0() const { return periodic_.constant(); }
  std::span<const Harmonic> harmonics() const { return periodic_.harmonics(); }
  int regularity() const { return regularity_; }
  const TrigPolynomial& periodic() const { return periodic_; }
  bool is_rigid() const { return periodic_.is_constant(); }

  Lifting shifted(double dc0) const;

  friend bool operator==(const Lifting&, const Lifting&) = default;

 private:
  TrigPolynomial periodic_;
  int regularity_ = kDefaultRegularity;
};

struct Weighted {
  double weight;
  const Lifting& lifting;
};

// sum_i w_i F_i computed coefficient-wise. The identity part is kept as is, so
// the result is the affine combination when the weights sum to one.
// Throws kRegularityMismatch when regularities differ.
Lifting affine_combination(std::span<const Weighted> terms);
Lifting affine_combination(std::initializer_list<Weighted> terms);

// Coefficient-wise comparison, missing harmonics treated as zero.
bool approx_equal(const Lifting& f, const Lifting& g, double tol = 1e-12);

// G - F as a periodic function.
TrigPolynomial difference(const Lifting& g, const Lifting& f);

double eval(const Lifting& f, double x);
double eval_derivative(const Lifting& f, double x, int order);
std::pair<double, double> eval_with_slope(const Lifting& f, double x);
double iterate(const Lifting& f, double x, int n);
double project_circle(const Lifting& f, double x);

enum class CertificateMethod { kGridLipschitz, kCoefficientBound };
std::string_view method_name(CertificateMethod m);

struct DiffeoCertificate {
  bool is_diffeo = false;
  // Rigorous lower bound for F' on the circle.
  double min_derivative = 0.0;
  CertificateMethod method = CertificateMethod::kGridLipschitz;
};

DiffeoCertificate validate_diffeo(const Lifting& f,
                                  int grid_points = kDefaultGrid);

// sum_{i=0}^{r} max over the grid of |F^(i) - G^(i)|.
double cr_metric(const Lifting& f, const Lifting& g,
                 int grid_points = kDefaultGrid);

// True when F(x) - x takes an integer value, i.e. the circle map has a fixed
// point. Decided on the certified range of F(x) - x.
bool has_fixed_point(const Lifting& f, int grid_points = kDefaultGrid);

}  // namespace circleprev
