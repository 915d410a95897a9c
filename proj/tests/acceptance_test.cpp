// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "circleprev/evaluation.hpp"
#include "circleprev/lifting.hpp"
#include "circleprev/measure_lab.hpp"
#include "circleprev/probe.hpp"
#include "circleprev/qks.hpp"
#include "circleprev/reflection_group.hpp"
#include "circleprev/rotation.hpp"

namespace {

using namespace circleprev;

constexpr double kPi = std::numbers::pi;
const double kAmp = 1.0 / (2.1 * kPi);

Lifting reference_map() { return Lifting(0.1, {{1, kAmp, 0.0}}); }
Probe reference_type_two(int grid = kDefaultGrid) {
  return Probe::type_two(reference_map(), Lifting::rotation(0.2 * kPi), grid);
}

struct Outcome {
  bool ok = true;
  std::ostringstream detail;

  // Records a failed check; the first few are kept in the detail line.
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (ok) detail << " first failure: " << what << ';';
      ok = false;
    }
  }
};

using Seconds = std::chrono::duration<double>;

double elapsed(std::chrono::steady_clock::time_point t0) {
  return Seconds(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// Small random lifts with sum 2 pi k (|s| + |c|) < 0.9.
Lifting random_lifting(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int count = std::uniform_int_distribution<int>(0, 3)(rng);
  std::vector<Harmonic> hs;
  double budget = 0.9;
  for (int k = 1; k <= count; ++k) {
    const double scale = budget / (2.0 * kPi * k) / 2.0;
    const double s = scale * u(rng);
    const double c = scale * u(rng);
    budget -= 2.0 * kPi * k * (std::abs(s) + std::abs(c));
    hs.push_back({k, s, c});
  }
  return Lifting(u(rng), std::move(hs));
}

double random_lambda(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double l;
  do {
    l = u(rng);
  } while (std::abs(l - 1.0) < 0.05 || std::abs(l) < 0.05);
  return l;
}

void probe_domain(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const Interval d = domain_interval(reference_type_two(), 1 << 14);
  const double t = elapsed(t0);
  o.detail << " (a,b)=(" << fmt(d.lo) << ", " << fmt(d.hi) << ") in " << fmt(t) << " s;";
  o.require(std::abs(d.lo + 0.05) <= 1e-6, "a");
  o.require(std::abs(d.hi - 2.05) <= 1e-6, "b");
  o.require(t < 1.0, "runtime");
}

void foliation(Outcome& o) {
  const Probe p = Probe::type_two(Lifting::rotation(0.2 * kPi), Lifting(0.2, {{1, kAmp, 0.0}}));
  double worst = 0.0;
  for (const double lambda : {0.0, 0.5, 1.0}) {
    const Lifting a = alpha_at(p, lambda);
    for (int j = 0; j < 256; ++j) {
      const double x = j / 256.0;
      const double expect =
          x + 0.2 * (kPi + lambda * (1.0 - kPi)) + lambda * kAmp * std::sin(2.0 * kPi * x);
      worst = std::max(worst, std::abs(eval(a, x) - expect));
    }
  }
  o.detail << " max error " << fmt(worst) << ';';
  o.require(worst <= 1e-12, "foliation error");
}

void group_law(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  constexpr int kGrid = 256;
  constexpr double kTol = 1e-9;
  double worst[5] = {};
  for (int trial = 0; trial < 500; ++trial) {
    const Lifting v = random_lifting(rng);
    const Lifting w = random_lifting(rng);
    const Lifting u = random_lifting(rng);
    const Reflection r(random_lambda(rng), w);
    const Reflection s(random_lambda(rng), u);

    worst[0] = std::max(worst[0], cr_metric(apply(GroupElement(), v), v, kGrid));
    worst[1] = std::max(worst[1], cr_metric(apply(inverse(r), apply(r, v)), v, kGrid));
    const GroupElement rs = compose(r, s);
    worst[2] = std::max(worst[2], cr_metric(apply(rs, v), apply(r, apply(s, v)), kGrid));
    const Lifting c = fixed_point(rs);
    worst[3] = std::max(worst[3], cr_metric(apply(rs, c), c, kGrid));
    const Reflection t = solve_transitivity(v, w, random_lambda(rng));
    worst[4] = std::max(worst[4], cr_metric(apply(t, v), w, kGrid));
  }
  const double t = elapsed(t0);
  const char* names[5] = {"identity", "inverse", "composition", "fixed point", "transitivity"};
  for (int i = 0; i < 5; ++i) {
    o.detail << ' ' << names[i] << ' ' << fmt(worst[i]) << ';';
    o.require(worst[i] <= kTol, names[i]);
  }
  o.detail << " " << fmt(t) << " s;";
  o.require(t < 5.0, "runtime");
}

void ccc(Outcome& o) {
  const CCCCoefficients c = ccc_coefficients(10000);
  const double renorm = std::abs(c.coefficient_sum() - 1.0);
  o.detail << " |p-sin1|=" << fmt(c.sin_limit_gap()) << " |sum-1|=" << fmt(renorm) << ';';
  o.require(c.sin_limit_gap() <= 1e-4, "sin(1) limit");
  o.require(renorm <= 1e-4, "renormalization gap");

  std::mt19937_64 rng(7);
  double worst = 0.0;
  for (int n = 1; n <= 6; ++n) {
    const CCCCoefficients cn = ccc_coefficients(n);
    std::vector<Lifting> ws;
    for (int i = 0; i < n; ++i) ws.push_back(random_lifting(rng));
    // The literal composition carries the truncated weights p_{n-1}[1, lambda_j/p_j];
    // compare it against the same weights applied coefficient-wise.
    Lifting literal = ws[0];
    if (n > 1) literal = apply(compose_many(ccc_reflections(cn, ws)), ws[0]);
    const auto lw = cn.literal_weights();
    std::vector<Weighted> terms;
    for (int i = 0; i < n; ++i) terms.push_back({lw[i], ws[i]});
    worst = std::max(worst, cr_metric(literal, affine_combination(terms), 256));
    // ccc_apply renormalizes; the truncated weights already sum to one.
    worst = std::max(worst, cr_metric(ccc_apply(cn, ws), literal, 256));
  }
  o.detail << " literal vs apply " << fmt(worst) << ';';
  o.require(worst <= 1e-10, "literal composition");
}

void evaluation_oracle(Outcome& o) {
  double closed = 0.0;
  for (const double k : {1.0, 0.5}) {
    const Probe p = Probe::type_one(reference_map(), k);
    for (int j = 0; j < 1024; ++j) {
      const double x = j / 1024.0;
      const auto s = eval_map_solve(p, x, 1, 0);
      if (!s) {
        o.require(false, "no solution at x=" + fmt(x));
        continue;
      }
      closed = std::max(closed, std::abs(s->lambda - (x - eval(p.f(), x)) / k));
    }
  }
  o.detail << " closed form " << fmt(closed) << ';';
  o.require(closed <= 1e-11, "closed form");

  const Probe p = reference_type_two();
  const double h = 1e-5;
  double fd_worst = 0.0;
  double implicit = 0.0;
  int compared = 0;
  for (int n = 1; n <= 3; ++n) {
    for (const int branch : default_branches(p, n, default_window(p))) {
      for (int j = 0; j < 256; ++j) {
        const double x = (j + 0.5) / 256.0;
        const auto s = eval_map_solve(p, x, n, branch);
        if (!s) continue;
        implicit = std::max(implicit, std::abs(s->delta_prime * s->d_lambda + s->d_x - 1.0));
        const auto up = eval_map_solve(p, x + h, n, branch);
        const auto down = eval_map_solve(p, x - h, n, branch);
        // Relative comparison is meaningless next to a zero of the derivative.
        if (!up || !down || std::abs(s->delta_prime) < 1e-2) continue;
        const double fd = (up->lambda - down->lambda) / (2.0 * h);
        fd_worst = std::max(fd_worst, std::abs(fd - s->delta_prime) / std::abs(s->delta_prime));
        ++compared;
      }
    }
  }
  o.detail << " finite difference rel " << fmt(fd_worst) << " over " << compared
           << " points; implicit residual " << fmt(implicit) << ';';
  o.require(compared > 0, "no finite-difference comparisons");
  o.require(fd_worst <= 1e-5, "finite difference");
  o.require(implicit <= 1e-8, "implicit identity");
}

void degeneracy(Outcome& o) {
  const Probe p = Probe::type_one(reference_map(), 1.0);
  const CriticalScan scan = critical_points(p, 1, 0, 1024);
  o.require(!scan.degenerate_probe, "probe flagged degenerate");
  o.require(scan.points.size() == 2, "expected two critical points");
  if (scan.points.size() != 2) return;
  // Closed forms: x = 1/4 gives -(0.1 + A), x = 3/4 gives -(0.1 - A), A = 1/(2.1 pi).
  const double expect[2] = {-(0.1 + kAmp), -(0.1 - kAmp)};
  for (int i = 0; i < 2; ++i) {
    const EvaluationPoint& pt = scan.points[i];
    const Lifting a = alpha_at(p, pt.lambda);
    const double fixed = std::abs(eval(a, pt.x) - pt.x);
    const double slope = std::abs(eval_derivative(a, pt.x, 1) - 1.0);
    o.detail << " lambda=" << fmt(pt.lambda) << " (x=" << fmt(pt.x)
             << ", |F-x|=" << fmt(fixed) << ", |F'-1|=" << fmt(slope) << ");";
    o.require(std::abs(pt.lambda - expect[i]) <= 1e-8, "lambda vs closed form");
    o.require(fixed <= 1e-10, "fixed point residual");
    o.require(slope <= 1e-6, "derivative one");
  }
}

void qks(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr int kGrid = 1 << 14;
  const Probe p = reference_type_two(kGrid);
  const double sigma_closed = 0.2 * kPi - 0.1 - kAmp;
  o.detail << " sigma=" << fmt(p.sigma()) << " (closed form " << fmt(sigma_closed) << ");";
  o.require(std::abs(p.sigma() - sigma_closed) <= 1e-6, "sigma");

  const QksReport rep = qks_report(p, 3, {0.01, 0.05, 0.1}, kGrid);
  double worst_ratio = 0.0;
  for (const QksRow& row : rep.rows) {
    worst_ratio = std::max(worst_ratio, row.ratio);
    o.require(row.holds, "bound at n=" + std::to_string(row.n) + " gamma=" + fmt(row.gamma));
  }
  o.require(rep.rows.size() == 9, "nine cells");
  o.detail << " worst measured/bound " << fmt(worst_ratio) << ';';

  for (int n = 1; n <= 3; ++n) {
    const RawScan raw = raw_scan(p, n, kGrid);
    double prev = 0.0;
    double tiny = 0.0;
    double at_001 = 0.0;
    for (const double gamma : {1e-4, 1e-3, 0.01, 0.05, 0.1}) {
      const MeasureEstimate e = measure_Z(filter_E_gamma(raw, gamma));
      o.require(e.measured >= prev, "monotone in gamma at n=" + std::to_string(n));
      prev = e.measured;
      if (gamma == 1e-4) {
        tiny = e.measured;
        // Shrinking gamma shrinks the measure at least as fast as the bound.
        o.require(e.measured <= e.bound * (1.0 + kDefaultBoundSlack),
                  "gamma=1e-4 bound at n=" + std::to_string(n));
      }
      if (gamma == 0.01) at_001 = e.measured;
    }
    o.detail << " n=" << n << " m(1e-4)=" << fmt(tiny) << " m(0.01)=" << fmt(at_001) << ';';
    o.require(tiny <= 0.05 * at_001, "measure does not shrink at n=" + std::to_string(n));
  }
  const double t = elapsed(t0);
  o.detail << ' ' << fmt(t) << " s;";
  o.require(t < 60.0, "runtime");
}

void rotation(Outcome& o) {
  const RotationEstimate rigid = rotation_number(Lifting::rotation(0.3), 10000);
  o.require(rigid.value == 0.3, "rigid rotation not exact");

  const RotationEstimate fixed = rotation_number(reference_map(), 10000);
  o.detail << " rho(reference)=" << fmt(fixed.value) << ';';
  o.require(std::abs(fixed.value) <= 1e-4, "fixed-point map");

  const Probe p = Probe::type_one(reference_map(), 1.0);
  double prev = -INFINITY;
  for (int i = 0; i < 64; ++i) {
    const double lambda = -1.0 + 2.0 * i / 63.0;
    const double rho = rotation_number(alpha_at(p, lambda), 10000).value;
    o.require(rho >= prev, "non-decreasing at lambda=" + fmt(lambda));
    prev = rho;
  }

  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  const DiophantineReport r =
      check_star_beta(rotation_number(Lifting::rotation(golden), 10000), 0.5, 10000);
  long long largest = 0;
  for (const Violation& v : r.violations) largest = std::max(largest, v.q);
  o.detail << " golden violations " << r.violations.size() << " (largest q " << largest << ");";
  o.require(largest <= 10, "golden-mean violation with q > 10");
}

void measure_scaling(Outcome& o) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = std::uniform_int_distribution<int>(1, 4)(rng);
    const int count = std::uniform_int_distribution<int>(1, 6)(rng);
    std::vector<Box> boxes;
    for (int b = 0; b < count; ++b) {
      Box box;
      for (int k = 0; k < dim; ++k) {
        const double lo = -2.0 + 4.0 * u(rng);
        box.push_back({lo, lo + 1.5 * u(rng)});
      }
      boxes.push_back(std::move(box));
    }
    const BoxUnion bu(dim, std::move(boxes));
    double lambda;
    do {
      lambda = -3.0 + 6.0 * u(rng);
    } while (lambda == 1.0);
    std::vector<double> h(dim);
    for (double& v : h) v = -1.0 + 2.0 * u(rng);
    const InvarianceReport r = invariance_check(bu, lambda, h);
    const double expect = std::pow(std::abs(1.0 - lambda), dim) * r.before;
    const double rel = expect == 0.0 ? std::abs(r.after) : std::abs(r.after - expect) / expect;
    worst = std::max(worst, rel);
  }
  o.detail << " worst relative error " << fmt(worst) << ';';
  o.require(worst <= 1e-10, "scaling");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"probe domain (-0.05, 2.05)", probe_domain},
      {"foliation formula", foliation},
      {"group laws", group_law},
      {"CCC convergence", ccc},
      {"evaluation-map oracle", evaluation_oracle},
      {"degeneracy detection", degeneracy},
      {"QKS bound", qks},
      {"rotation numbers", rotation},
      {"measure scaling", measure_scaling},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failures += !o.ok;
    std::printf("%s %zu %s:%s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
