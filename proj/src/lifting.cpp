#include "circleprev/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>

#include "circleprev/error.hpp"

namespace circleprev {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 2 pi k x with k x reduced mod 1 first, so that shifting x by an integer
// changes the argument by rounding only.
double reduced_angle(int k, double x) {
  double t = static_cast<double>(k) * x;
  t -= std::floor(t);
  return kTwoPi * t;
}

// d^m/dx^m of s sin(theta) + c cos(theta) divided by (2 pi k)^m.
double rotated(double s, double c, double sn, double cs, int m) {
  switch (m % 4) {
    case 0: return s * sn + c * cs;
    case 1: return s * cs - c * sn;
    case 2: return -s * sn - c * cs;
    default: return -s * cs + c * sn;
  }
}

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw Error(Errc::kInvalidLifting, std::string("non-finite ") + what);
  }
}

}  // namespace

TrigPolynomial::TrigPolynomial(double constant, std::vector<Harmonic> harmonics)
    : constant_(constant), harmonics_(std::move(harmonics)) {
  require_finite(constant_, "constant term");
  std::sort(harmonics_.begin(), harmonics_.end(),
            [](const Harmonic& a, const Harmonic& b) { return a.k < b.k; });
  for (std::size_t i = 0; i < harmonics_.size(); ++i) {
    const Harmonic& h = harmonics_[i];
    if (h.k < 1) {
      throw Error(Errc::kInvalidLifting,
                  "harmonic frequency must be positive, got " +
                      std::to_string(h.k));
    }
    if (i > 0 && harmonics_[i - 1].k == h.k) {
      throw Error(Errc::kInvalidLifting,
                  "duplicate harmonic frequency " + std::to_string(h.k));
    }
    require_finite(h.sin_coef, "sine coefficient");
    require_finite(h.cos_coef, "cosine coefficient");
  }
}

bool TrigPolynomial::is_constant() const {
  return std::all_of(harmonics_.begin(), harmonics_.end(), [](const Harmonic& h) {
    return h.sin_coef == 0.0 && h.cos_coef == 0.0;
  });
}

double TrigPolynomial::value(double x) const {
  double sum = 0.0;
  for (const Harmonic& h : harmonics_) {
    const double a = reduced_angle(h.k, x);
    sum += h.sin_coef * std::sin(a) + h.cos_coef * std::cos(a);
  }
  return constant_ + sum;
}

double TrigPolynomial::derivative(double x, int order) const {
  if (order < 0) {
    throw Error(Errc::kOrderOutOfRange, "negative derivative order");
  }
  if (order == 0) return value(x);
  double sum = 0.0;
  for (const Harmonic& h : harmonics_) {
    const double a = reduced_angle(h.k, x);
    const double scale = std::pow(kTwoPi * h.k, order);
    sum += scale * rotated(h.sin_coef, h.cos_coef, std::sin(a), std::cos(a), order);
  }
  return sum;
}

std::pair<double, double> TrigPolynomial::value_and_slope(double x) const {
  double v = 0.0;
  double d = 0.0;
  for (const Harmonic& h : harmonics_) {
    const double a = reduced_angle(h.k, x);
    const double sn = std::sin(a);
    const double cs = std::cos(a);
    v += h.sin_coef * sn + h.cos_coef * cs;
    d += kTwoPi * h.k * (h.sin_coef * cs - h.cos_coef * sn);
  }
  return {constant_ + v, d};
}

double TrigPolynomial::derivative_bound(int order) const {
  double sum = 0.0;
  for (const Harmonic& h : harmonics_) {
    sum += std::pow(kTwoPi * h.k, order) *
           (std::abs(h.sin_coef) + std::abs(h.cos_coef));
  }
  return sum;
}

TrigPolynomial linear_combination(std::span<const double> weights,
                                  std::span<const TrigPolynomial> polys) {
  if (weights.size() != polys.size()) {
    throw Error(Errc::kLengthMismatch, "weights and polynomials differ in length");
  }
  double constant = 0.0;
  std::map<int, Harmonic> merged;
  for (std::size_t i = 0; i < polys.size(); ++i) {
    const double w = weights[i];
    constant += w * polys[i].constant();
    for (const Harmonic& h : polys[i].harmonics()) {
      Harmonic& slot = merged.try_emplace(h.k, Harmonic{h.k, 0.0, 0.0}).first->second;
      slot.sin_coef += w * h.sin_coef;
      slot.cos_coef += w * h.cos_coef;
    }
  }
  std::vector<Harmonic> harmonics;
  harmonics.reserve(merged.size());
  for (const auto& [k, h] : merged) harmonics.push_back(h);
  return TrigPolynomial(constant, std::move(harmonics));
}

CertifiedRange certified_range(const TrigPolynomial& p, int grid_points) {
  if (grid_points < 2) {
    throw Error(Errc::kInvalidArgument, "grid_points must be >= 2");
  }
  double lo = p.value(0.0);
  double hi = lo;
  for (int j = 1; j < grid_points; ++j) {
    const double v = p.value(static_cast<double>(j) / grid_points);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double h = 1.0 / grid_points;
  const double slack = p.derivative_bound(2) * h * h / 8.0;
  return {lo - slack, hi + slack};
}

Lifting::Lifting(double c0, std::vector<Harmonic> harmonics, int regularity)
    : Lifting(TrigPolynomial(c0, std::move(harmonics)), regularity) {}

Lifting::Lifting(TrigPolynomial periodic, int regularity)
    : periodic_(std::move(periodic)), regularity_(regularity) {
  if (regularity_ < 0) {
    throw Error(Errc::kInvalidLifting, "regularity must be non-negative");
  }
}

Lifting Lifting::identity(int regularity) { return Lifting(0.0, {}, regularity); }

Lifting Lifting::rotation(double c0, int regularity) {
  return Lifting(c0, {}, regularity);
}

Lifting Lifting::shifted(double dc0) const {
  return Lifting(TrigPolynomial(c0() + dc0, std::vector<Harmonic>(
                                                 harmonics().begin(), harmonics().end())),
                 regularity_);
}

Lifting affine_combination(std::span<const Weighted> terms) {
  if (terms.empty()) {
    throw Error(Errc::kInvalidArgument, "affine combination of nothing");
  }
  const int r = terms.front().lifting.regularity();
  std::vector<double> weights;
  std::vector<TrigPolynomial> polys;
  weights.reserve(terms.size());
  polys.reserve(terms.size());
  for (const Weighted& t : terms) {
    if (t.lifting.regularity() != r) {
      throw Error(Errc::kRegularityMismatch,
                  "liftings of regularity " + std::to_string(r) + " and " +
                      std::to_string(t.lifting.regularity()));
    }
    weights.push_back(t.weight);
    polys.push_back(t.lifting.periodic());
  }
  return Lifting(linear_combination(weights, polys), r);
}

Lifting affine_combination(std::initializer_list<Weighted> terms) {
  return affine_combination(std::span<const Weighted>(terms.begin(), terms.size()));
}

TrigPolynomial difference(const Lifting& g, const Lifting& f) {
  const double weights[] = {1.0, -1.0};
  const TrigPolynomial polys[] = {g.periodic(), f.periodic()};
  return linear_combination(weights, polys);
}

bool approx_equal(const Lifting& f, const Lifting& g, double tol) {
  if (f.regularity() != g.regularity()) return false;
  const TrigPolynomial d = difference(f, g);
  if (std::abs(d.constant()) > tol) return false;
  return std::all_of(d.harmonics().begin(), d.harmonics().end(),
                     [tol](const Harmonic& h) {
                       return std::abs(h.sin_coef) <= tol && std::abs(h.cos_coef) <= tol;
                     });
}

double eval(const Lifting& f, double x) { return x + f.periodic().value(x); }

double eval_derivative(const Lifting& f, double x, int order) {
  if (order < 0 || order > f.regularity()) {
    throw Error(Errc::kOrderOutOfRange,
                "order " + std::to_string(order) + " outside [0, " +
                    std::to_string(f.regularity()) + "]");
  }
  if (order == 0) return eval(f, x);
  const double d = f.periodic().derivative(x, order);
  return order == 1 ? 1.0 + d : d;
}

std::pair<double, double> eval_with_slope(const Lifting& f, double x) {
  const auto [v, d] = f.periodic().value_and_slope(x);
  return {x + v, 1.0 + d};
}

double iterate(const Lifting& f, double x, int n) {
  if (n < 0) throw Error(Errc::kInvalidArgument, "negative iteration count");
  if (f.is_rigid()) return x + n * f.c0();
  for (int i = 0; i < n; ++i) x = eval(f, x);
  return x;
}

double project_circle(const Lifting& f, double x) {
  const double y = eval(f, x);
  double r = y - std::floor(y);
  // y slightly below an integer can round r up to exactly 1.
  if (r >= 1.0) r = 0.0;
  return r;
}

std::string_view method_name(CertificateMethod m) {
  return m == CertificateMethod::kCoefficientBound ? "coefficient-bound"
                                                   : "grid-plus-Lipschitz";
}

DiffeoCertificate validate_diffeo(const Lifting& f, int grid_points) {
  if (grid_points < 2) {
    throw Error(Errc::kInvalidArgument, "grid_points must be >= 2");
  }
  const TrigPolynomial& p = f.periodic();
  const double slope_sum = p.derivative_bound(1);
  if (slope_sum < 1.0) {
    return {true, 1.0 - slope_sum, CertificateMethod::kCoefficientBound};
  }
  double grid_min = 1.0 + p.derivative(0.0, 1);
  for (int j = 1; j < grid_points; ++j) {
    grid_min = std::min(grid_min,
                        1.0 + p.derivative(static_cast<double>(j) / grid_points, 1));
  }
  const double step = 1.0 / grid_points;
  const double bound = grid_min - 0.5 * step * p.derivative_bound(2);
  return {bound > 0.0, bound, CertificateMethod::kGridLipschitz};
}

double cr_metric(const Lifting& f, const Lifting& g, int grid_points) {
  if (f.regularity() != g.regularity()) {
    throw Error(Errc::kRegularityMismatch,
                "metric between regularities " + std::to_string(f.regularity()) +
                    " and " + std::to_string(g.regularity()));
  }
  if (grid_points < 2) {
    throw Error(Errc::kInvalidArgument, "grid_points must be >= 2");
  }
  // The identity parts cancel in every order, so only G - F matters.
  const TrigPolynomial d = difference(f, g);
  double total = 0.0;
  for (int order = 0; order <= f.regularity(); ++order) {
    double sup = 0.0;
    for (int j = 0; j < grid_points; ++j) {
      sup = std::max(sup, std::abs(d.derivative(static_cast<double>(j) / grid_points,
                                                order)));
    }
    total += sup;
  }
  return total;
}

bool has_fixed_point(const Lifting& f, int grid_points) {
  if (grid_points < 2) {
    throw Error(Errc::kInvalidArgument, "grid_points must be >= 2");
  }
  // Grid values are attained, so an integer between them is hit by continuity.
  const TrigPolynomial& p = f.periodic();
  double lo = p.value(0.0);
  double hi = lo;
  for (int j = 1; j < grid_points; ++j) {
    const double v = p.value(static_cast<double>(j) / grid_points);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return std::ceil(lo) <= std::floor(hi);
}

}  // namespace circleprev
