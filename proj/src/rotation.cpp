#include "circleprev/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "circleprev/error.hpp"
#include "circleprev/evaluation.hpp"
#include "circleprev/probe.hpp"

namespace circleprev {

namespace {

constexpr long double kSnap = 1e-9L;
constexpr long long kCertifyMaxPeriod = 256;

}  // namespace

RotationEstimate rotation_number(const Lifting& f, int iterations, double x0) {
  if (iterations < 1) {
    throw Error(Errc::kInvalidArgument, "rotation number needs at least one iteration");
  }
  if (!validate_diffeo(f).is_diffeo) {
    throw Error(Errc::kNotADiffeo, "rotation number of a non-diffeomorphism lift");
  }
  RotationEstimate est;
  est.iterations = iterations;
  est.x0 = x0;
  est.error_bound = 1.0 / iterations;
  // A rigid rotation by c0 has rotation number exactly c0.
  est.value = f.is_rigid() ? f.c0() : (iterate(f, x0, iterations) - x0) / iterations;
  return est;
}

std::vector<Convergent> convergents(double rho, long long q_max) {
  if (q_max < 1) throw Error(Errc::kInvalidArgument, "q_max must be >= 1");
  if (!std::isfinite(rho)) throw Error(Errc::kInvalidArgument, "non-finite rho");
  std::vector<Convergent> out;
  long long p_prev = 1, q_prev = 0;
  long long p_prev2 = 0, q_prev2 = 1;
  long double x = rho;
  while (true) {
    long double a = std::floor(x);
    long double frac = x - a;
    if (1.0L - frac < kSnap) {
      a += 1.0L;
      frac = 0.0L;
    }
    if (a > static_cast<long double>(q_max) + 1.0L && q_prev > 0) break;
    const long long ai = static_cast<long long>(a);
    const long long p = ai * p_prev + p_prev2;
    const long long q = ai * q_prev + q_prev2;
    if (q > q_max) break;
    out.push_back({p, q});
    if (frac < kSnap) break;
    p_prev2 = p_prev;
    q_prev2 = q_prev;
    p_prev = p;
    q_prev = q;
    x = 1.0L / frac;
  }
  return out;
}

DiophantineReport check_star_beta(const RotationEstimate& est, double beta,
                                  long long q_max, std::optional<long long> q_threshold) {
  if (!(beta > 0.0)) throw Error(Errc::kInvalidArgument, "beta must be positive");
  if (q_max < 1) throw Error(Errc::kInvalidArgument, "q_max must be >= 1");

  DiophantineReport rep;
  rep.beta = beta;
  rep.q_max = q_max;
  rep.q_threshold = q_threshold.value_or(std::max(1LL, q_max / 10));
  rep.value = est.value;
  rep.error_bound = est.error_bound;
  if (beta >= 1.0) {
    rep.warning = "BetaOutOfRange: beta = " + std::to_string(beta) +
                  " lies outside (0, 1), where the conjugacy statement applies";
  }
  rep.convergents = convergents(est.value, q_max);

  for (const Convergent& c : rep.convergents) {
    const long double gap = std::abs(static_cast<long double>(est.value) -
                                     static_cast<long double>(c.p) / c.q);
    if (!rep.possibly_rational && gap <= est.error_bound) rep.possibly_rational = c;
    if (c.q <= rep.q_threshold &&
        static_cast<double>(c.p) / static_cast<double>(c.q) == est.value) {
      rep.rational = true;
    }
  }
  if (rep.rational) {
    rep.satisfied_up_to_qmax = false;
    return rep;
  }

  for (const Convergent& c : rep.convergents) {
    const long double gap = std::abs(static_cast<long double>(est.value) -
                                     static_cast<long double>(c.p) / c.q);
    const long double limit = std::pow(static_cast<long double>(c.q), -(2.0L + beta));
    if (gap < limit) rep.violations.push_back({c.p, c.q, static_cast<double>(gap)});
  }
  rep.satisfied_up_to_qmax =
      std::none_of(rep.violations.begin(), rep.violations.end(),
                   [&](const Violation& v) { return v.q > rep.q_threshold; });
  return rep;
}

std::optional<PeriodicOrbitCertificate> certify_periodic_orbit(const Lifting& f,
                                                               long long p, long long q,
                                                               int grid_points) {
  if (q < 1 || q > std::numeric_limits<int>::max()) {
    throw Error(Errc::kInvalidArgument, "period out of range");
  }
  const int n = static_cast<int>(q);
  const int branch = static_cast<int>(p);
  // alpha_lambda = F + lambda; a zero of lambda = Delta_q(x) is a p/q point of F.
  const Probe probe = Probe::type_one(f, 1.0);
  const Interval window{-1.0, 1.0};

  auto lambda_at = [&](double x) -> std::optional<double> {
    auto s = eval_map_solve(probe, x, n, branch, window);
    if (!s) return std::nullopt;
    return s->lambda;
  };
  auto certificate = [&](double x) {
    return PeriodicOrbitCertificate{x, std::abs(iterate(f, x, n) - x - p)};
  };

  std::optional<double> prev = lambda_at(0.0);
  for (int j = 1; j <= grid_points; ++j) {
    const double x1 = static_cast<double>(j) / grid_points;
    const std::optional<double> cur = lambda_at(x1);
    if (prev && *prev == 0.0) return certificate(static_cast<double>(j - 1) / grid_points);
    if (prev && cur && (*prev < 0.0) != (*cur < 0.0)) {
      double a = static_cast<double>(j - 1) / grid_points;
      double b = x1;
      const bool a_negative = *prev < 0.0;
      for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        const std::optional<double> lm = lambda_at(mid);
        if (!lm) break;
        if (*lm == 0.0) {
          a = b = mid;
          break;
        }
        if ((*lm < 0.0) == a_negative) {
          a = mid;
        } else {
          b = mid;
        }
      }
      return certificate(0.5 * (a + b));
    }
    prev = cur;
  }
  return std::nullopt;
}

RotationAnalysis analyze_rotation(const Lifting& f, int iterations, double beta,
                                  long long q_max, double x0) {
  RotationAnalysis out;
  out.estimate = rotation_number(f, iterations, x0);
  out.star_beta = check_star_beta(out.estimate, beta, q_max);
  const auto& cand = out.star_beta.possibly_rational;
  if (cand && cand->q <= kCertifyMaxPeriod) {
    out.periodic_orbit = certify_periodic_orbit(f, cand->p, cand->q, 256);
  }
  return out;
}

}  // namespace circleprev
