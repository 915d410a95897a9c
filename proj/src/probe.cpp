#include "circleprev/probe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "circleprev/error.hpp"

namespace circleprev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Minimizes num(x) / den(x) over [lo, hi] where den > 0, returning the smaller
// of the polished minimum and the seed value.
template <class Num, class Den>
double polish_ratio_min(Num num, Den den, double lo, double hi, double seed) {
  auto ratio = [&](double x) {
    const double d = den(x);
    return d > 0.0 ? num(x) / d : std::numeric_limits<double>::max();
  };
  const auto [x, v] = boost::math::tools::brent_find_minima(
      ratio, lo, hi, std::numeric_limits<double>::digits);
  (void)x;
  return std::min(v, seed);
}

}  // namespace

std::string_view kind_name(ProbeKind kind) {
  return kind == ProbeKind::kTypeI ? "I" : "II";
}

bool Interval::bounded() const { return std::isfinite(lo) && std::isfinite(hi); }

Probe Probe::type_one(Lifting f, double k, int grid_points) {
  if (!(k > 0.0 && k <= 1.0)) {
    throw Error(Errc::kInvalidArgument,
                "Type I shift must lie in (0, 1], got " + std::to_string(k));
  }
  Probe p;
  p.g_ = f.shifted(k);
  p.f_ = std::move(f);
  p.kind_ = ProbeKind::kTypeI;
  p.k_ = k;
  p.gap_ = TrigPolynomial(k, {});
  p.sigma_ = k;
  p.domain_ = domain_interval(p, grid_points);
  p.f_has_fixed_point_ = has_fixed_point(p.f_, grid_points);
  return p;
}

Probe Probe::type_two(Lifting f, Lifting g, int grid_points) {
  if (f.regularity() != g.regularity()) {
    throw Error(Errc::kRegularityMismatch, "probe endpoints differ in regularity");
  }
  Probe p;
  p.kind_ = ProbeKind::kTypeII;
  p.sigma_ = sigma_of(f, g, grid_points);
  if (!(p.sigma_ > 0.0)) {
    throw Error(Errc::kSigmaZero, "G - F is not bounded away from zero");
  }
  p.gap_ = difference(g, f);
  p.f_ = std::move(f);
  p.g_ = std::move(g);
  p.domain_ = domain_interval(p, grid_points);
  p.f_has_fixed_point_ = has_fixed_point(p.f_, grid_points);
  return p;
}

Lifting alpha_at(const Probe& p, double lambda) {
  if (p.kind() == ProbeKind::kTypeI) return p.f().shifted(lambda * p.k());
  return affine_combination({{1.0 - lambda, p.f()}, {lambda, p.g()}});
}

Interval domain_interval(const Probe& p, int grid_points) {
  if (grid_points < 2) {
    throw Error(Errc::kInvalidArgument, "grid_points must be >= 2");
  }
  if (!validate_diffeo(p.f(), grid_points).is_diffeo) {
    throw Error(Errc::kNotADiffeoPath, "alpha_0 = F is not a certified diffeomorphism");
  }
  if (p.kind() == ProbeKind::kTypeI) return Interval{};

  const TrigPolynomial& fp = p.f().periodic();
  const TrigPolynomial& gap = p.gap();
  auto f_slope = [&](double x) { return 1.0 + fp.derivative(x, 1); };
  auto gap_slope = [&](double x) { return gap.derivative(x, 1); };

  // alpha' = F' + lambda D' > 0 at a grid point is lambda > -F'/D' when D' > 0
  // and lambda < F'/(-D') when D' < 0.
  double lo = -kInf;
  double hi = kInf;
  int lo_at = -1;
  int hi_at = -1;
  for (int j = 0; j < grid_points; ++j) {
    const double x = static_cast<double>(j) / grid_points;
    const double fs = f_slope(x);
    const double ds = gap_slope(x);
    if (ds > 0.0 && -fs / ds > lo) {
      lo = -fs / ds;
      lo_at = j;
    } else if (ds < 0.0 && fs / -ds < hi) {
      hi = fs / -ds;
      hi_at = j;
    }
  }

  const double h = 1.0 / grid_points;
  if (hi_at >= 0) {
    const double x = hi_at * h;
    hi = polish_ratio_min(f_slope, [&](double y) { return -gap_slope(y); }, x - h,
                          x + h, hi);
  }
  if (lo_at >= 0) {
    const double x = lo_at * h;
    lo = -polish_ratio_min(f_slope, gap_slope, x - h, x + h, -lo);
  }
  return Interval{lo, hi};
}

double sigma_of(const Lifting& f, const Lifting& g, int grid_points) {
  const CertifiedRange r = certified_range(difference(g, f), grid_points);
  if (r.lower > 0.0) return r.lower;
  if (r.upper < 0.0) return -r.upper;
  return 0.0;
}

std::vector<FoliationSample> foliation_samples(const Probe& p,
                                               std::span<const double> lambdas,
                                               int grid_points) {
  if (grid_points < 2) {
    throw Error(Errc::kInvalidArgument, "grid_points must be >= 2");
  }
  std::vector<FoliationSample> out;
  out.reserve(lambdas.size());
  for (const double lambda : lambdas) {
    FoliationSample s{lambda, {}, validate_diffeo(alpha_at(p, lambda)).is_diffeo};
    s.samples.reserve(grid_points);
    for (int j = 0; j < grid_points; ++j) {
      const double x = static_cast<double>(j) / (grid_points - 1);
      s.samples.emplace_back(x, (1.0 - lambda) * eval(p.f(), x) + lambda * eval(p.g(), x));
    }
    out.push_back(std::move(s));
  }
  return out;
}

Interval default_window(const Probe& p, Interval clamp) {
  return Interval{std::max(p.domain().lo, clamp.lo), std::min(p.domain().hi, clamp.hi)};
}

}  // namespace circleprev
