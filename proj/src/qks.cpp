#include "circleprev/qks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "circleprev/error.hpp"

namespace circleprev {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_sigma(const Probe& p) {
  if (!(p.sigma() > 0.0)) {
    throw Error(Errc::kSigmaZero, "probe sigma must be positive");
  }
}

}  // namespace

RawScan raw_scan(const Probe& p, int n, int x_grid, std::vector<int> branches) {
  require_positive_sigma(p);
  if (x_grid < 2) throw Error(Errc::kInvalidArgument, "x_grid must be >= 2");
  const Interval window = default_window(p);
  if (branches.empty()) branches = default_branches(p, n, window);

  RawScan raw;
  raw.n = n;
  raw.x_grid = x_grid;
  raw.sigma = p.sigma();
  raw.domain = p.domain();
  for (const int branch : branches) {
    const auto grid = solve_on_grid(p, n, branch, x_grid, window);
    for (int j = 0; j < x_grid; ++j) {
      if (grid[j]) raw.solutions.push_back({*grid[j], j});
    }
  }
  return raw;
}

HyperbolicityScan filter_E_gamma(const RawScan& raw, double gamma) {
  if (!(gamma > 0.0)) throw Error(Errc::kInvalidArgument, "gamma must be positive");
  HyperbolicityScan scan;
  scan.n = raw.n;
  scan.gamma = gamma;
  scan.x_grid = raw.x_grid;
  scan.sigma = raw.sigma;
  for (const ScanEntry& e : raw.solutions) {
    if (std::abs(e.point.d_x - 1.0) <= gamma && raw.domain.contains(e.point.lambda)) {
      scan.entries.push_back(e);
    }
  }
  return scan;
}

HyperbolicityScan scan_E_gamma(const Probe& p, int n, double gamma, int x_grid,
                               std::vector<int> branches) {
  return filter_E_gamma(raw_scan(p, n, x_grid, std::move(branches)), gamma);
}

double default_merge_gap(const HyperbolicityScan& scan) {
  // (branch, grid index) -> lambda
  std::map<std::pair<int, int>, double> by_cell;
  for (const ScanEntry& e : scan.entries) {
    by_cell[{e.point.branch, e.grid_index}] = e.point.lambda;
  }
  double spread = 0.0;
  for (const auto& [key, lambda] : by_cell) {
    const int next = (key.second + 1) % scan.x_grid;
    const auto it = by_cell.find({key.first, next});
    if (it != by_cell.end()) spread = std::max(spread, std::abs(it->second - lambda));
  }
  return std::max(4.0 * spread, 1e-15);
}

double b_coefficient(double u, int n) {
  double b = 0.0;
  for (int i = 0; i < n; ++i) b += std::pow(u, n - i + 1);
  return b;
}

MeasureEstimate measure_Z(const HyperbolicityScan& scan, double merge_gap) {
  if (!(merge_gap > 0.0)) throw Error(Errc::kInvalidArgument, "merge_gap must be positive");
  MeasureEstimate est;

  std::vector<double> lambdas;
  lambdas.reserve(scan.entries.size());
  est.u = kInf;
  for (const ScanEntry& e : scan.entries) {
    lambdas.push_back(e.point.lambda);
    est.u = std::min(est.u, e.point.min_orbit_slope);
  }
  std::sort(lambdas.begin(), lambdas.end());
  for (std::size_t i = 0; i < lambdas.size();) {
    std::size_t j = i;
    while (j + 1 < lambdas.size() && lambdas[j + 1] - lambdas[j] <= merge_gap) ++j;
    est.intervals.emplace_back(lambdas[i], lambdas[j]);
    est.measured += lambdas[j] - lambdas[i];
    i = j + 1;
  }

  est.b_n = std::isfinite(est.u) ? b_coefficient(est.u, scan.n) : kInf;
  est.c_n = 1.0 / est.b_n;
  est.bound = est.c_n * scan.gamma / scan.sigma;
  return est;
}

MeasureEstimate measure_Z(const HyperbolicityScan& scan) {
  return measure_Z(scan, default_merge_gap(scan));
}

QksReport qks_report(const Probe& p, int n_max, const std::vector<double>& gammas,
                     int x_grid, std::vector<int> branches, double slack) {
  require_positive_sigma(p);
  if (n_max < 1) throw Error(Errc::kInvalidArgument, "n_max must be >= 1");
  if (!(slack >= 0.0)) throw Error(Errc::kInvalidArgument, "slack must be >= 0");

  QksReport report;
  report.sigma = p.sigma();
  report.domain = p.domain();
  report.x_grid = x_grid;
  report.slack = slack;

  std::vector<double> partial(gammas.size(), 0.0);
  for (int n = 1; n <= n_max; ++n) {
    const RawScan raw = raw_scan(p, n, x_grid, branches);
    for (std::size_t g = 0; g < gammas.size(); ++g) {
      const HyperbolicityScan scan = filter_E_gamma(raw, gammas[g]);
      QksRow row{n, gammas[g], scan.entries.size(), measure_Z(scan), 0.0, false, 0.0,
                 false};
      const MeasureEstimate& est = row.estimate;
      if (est.bound > 0.0) {
        row.ratio = est.measured / est.bound;
      } else {
        row.ratio = est.measured == 0.0 ? 0.0 : kInf;
      }
      row.holds = est.measured <= est.bound * (1.0 + slack);
      partial[g] += 1.0 / est.b_n;
      row.inverse_b_partial_sum = partial[g];
      row.u_above_one = est.u > 1.0;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

}  // namespace circleprev
