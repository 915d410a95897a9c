#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "circleprev/evaluation.hpp"
#include "circleprev/probe.hpp"

namespace circleprev {

struct ScanEntry {
  EvaluationPoint point;
  int grid_index;  // x = grid_index / x_grid
};

// Every solvable (x_j, branch) pair of the probe for period n, before any
// hyperbolicity filter. Solved once and filtered per gamma.
struct RawScan {
  int n = 1;
  int x_grid = 0;
  double sigma = 0.0;
  Interval domain;
  std::vector<ScanEntry> solutions;
};

// Entries with |d_x - 1| <= gamma and lambda strictly inside the probe domain.
struct HyperbolicityScan {
  int n = 1;
  double gamma = 0.0;
  int x_grid = 0;
  double sigma = 0.0;
  std::vector<ScanEntry> entries;
};

// Empty branches means default_branches over the default window.
// Throws kSigmaZero when the probe's certified sigma is not positive.
RawScan raw_scan(const Probe& p, int n, int x_grid, std::vector<int> branches = {});
HyperbolicityScan filter_E_gamma(const RawScan& raw, double gamma);
HyperbolicityScan scan_E_gamma(const Probe& p, int n, double gamma, int x_grid,
                               std::vector<int> branches = {});

// 4 times the largest lambda step between kept entries that are x-neighbours on
// the same branch, floored at 1e-15.
double default_merge_gap(const HyperbolicityScan& scan);

struct MeasureEstimate {
  double measured = 0.0;
  std::vector<std::pair<double, double>> intervals;  // disjoint, sorted
  // min alpha' over the orbits of kept entries; +inf for an empty scan, which
  // makes b_n infinite and c_n = bound = 0.
  double u = 0.0;
  double b_n = 0.0;
  double c_n = 0.0;
  double bound = 0.0;
};

// b_n = sum_{i=0}^{n-1} u^{n-i+1}.
double b_coefficient(double u, int n);

MeasureEstimate measure_Z(const HyperbolicityScan& scan, double merge_gap);
MeasureEstimate measure_Z(const HyperbolicityScan& scan);

inline constexpr double kDefaultBoundSlack = 0.05;

struct QksRow {
  int n;
  double gamma;
  std::size_t entries;
  MeasureEstimate estimate;
  double ratio;  // measured / bound
  bool holds;    // measured <= bound (1 + slack)
  // sum_{m <= n} 1 / b_m at this gamma.
  double inverse_b_partial_sum;
  bool u_above_one;
};

struct QksReport {
  double sigma = 0.0;
  Interval domain;
  int x_grid = 0;
  double slack = kDefaultBoundSlack;
  std::vector<QksRow> rows;  // n ascending, then gammas in the given order
};

QksReport qks_report(const Probe& p, int n_max, const std::vector<double>& gammas,
                     int x_grid, std::vector<int> branches = {},
                     double slack = kDefaultBoundSlack);

}  // namespace circleprev
