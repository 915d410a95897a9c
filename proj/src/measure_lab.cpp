#include "circleprev/measure_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "circleprev/error.hpp"

namespace circleprev {

namespace {

void require_terms(const CCCCoefficients& c, std::span<const Lifting> ws) {
  if (ws.size() != static_cast<std::size_t>(c.n_terms)) {
    throw Error(Errc::kLengthMismatch, "expected " + std::to_string(c.n_terms) +
                                           " witnesses, got " + std::to_string(ws.size()));
  }
}

bool interiors_overlap(const Box& a, const Box& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::min(a[k].hi, b[k].hi) <= std::max(a[k].lo, b[k].lo)) return false;
  }
  return true;
}

// Pieces of a outside b, interior-disjoint from b and from each other.
std::vector<Box> subtract(Box a, const Box& b) {
  if (!interiors_overlap(a, b)) return {a};
  std::vector<Box> out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].lo < b[k].lo) {
      Box piece = a;
      piece[k].hi = b[k].lo;
      out.push_back(std::move(piece));
    }
    if (b[k].hi < a[k].hi) {
      Box piece = a;
      piece[k].lo = b[k].hi;
      out.push_back(std::move(piece));
    }
    a[k].lo = std::max(a[k].lo, b[k].lo);
    a[k].hi = std::min(a[k].hi, b[k].hi);
  }
  return out;
}

double merged_length(std::vector<Range> ranges) {
  std::sort(ranges.begin(), ranges.end(),
            [](const Range& a, const Range& b) { return a.lo < b.lo; });
  double total = 0.0;
  std::size_t i = 0;
  while (i < ranges.size()) {
    double lo = ranges[i].lo;
    double hi = ranges[i].hi;
    while (++i < ranges.size() && ranges[i].lo <= hi) hi = std::max(hi, ranges[i].hi);
    total += hi - lo;
  }
  return total;
}

}  // namespace

double CCCCoefficients::coefficient_sum() const {
  double s = 0.0;
  for (const double c : coefficients) s += c;
  return s;
}

double CCCCoefficients::sin_limit_gap() const {
  return std::abs(partial_products.back() - std::sin(1.0));
}

std::vector<double> CCCCoefficients::normalized_weights() const {
  const double s = coefficient_sum();
  std::vector<double> out(coefficients);
  for (double& c : out) c /= s;
  return out;
}

std::vector<double> CCCCoefficients::literal_weights() const {
  const double last = p(n_terms - 1);
  std::vector<double> out;
  out.reserve(n_terms);
  out.push_back(last);
  for (int j = 1; j < n_terms; ++j) out.push_back(last * lambda(j) / p(j));
  return out;
}

CCCCoefficients ccc_coefficients(int n_terms) {
  if (n_terms < 1) throw Error(Errc::kInvalidArgument, "n_terms must be >= 1");
  CCCCoefficients c;
  c.n_terms = n_terms;
  c.lambdas.reserve(n_terms);
  c.partial_products.reserve(n_terms);
  double prod = 1.0;
  for (int i = 1; i <= n_terms; ++i) {
    const double di = i;
    const double lambda = 1.0 / (std::numbers::pi * std::numbers::pi * di * di);
    prod *= 1.0 - lambda;
    c.lambdas.push_back(lambda);
    c.partial_products.push_back(prod);
  }
  const double limit = std::sin(1.0);
  c.coefficients.reserve(n_terms);
  c.coefficients.push_back(limit);
  for (int j = 1; j < n_terms; ++j) {
    c.coefficients.push_back(limit * c.lambda(j) / c.p(j));
  }
  return c;
}

Lifting ccc_apply(const CCCCoefficients& coeffs, std::span<const Lifting> ws) {
  require_terms(coeffs, ws);
  const std::vector<double> weights = coeffs.normalized_weights();
  std::vector<Weighted> terms;
  terms.reserve(ws.size());
  for (std::size_t j = 0; j < ws.size(); ++j) terms.push_back({weights[j], ws[j]});
  return affine_combination(std::span<const Weighted>(terms));
}

std::vector<Reflection> ccc_reflections(const CCCCoefficients& coeffs,
                                        std::span<const Lifting> ws) {
  require_terms(coeffs, ws);
  std::vector<Reflection> out;
  out.reserve(ws.size() - 1);
  for (int j = coeffs.n_terms - 1; j >= 1; --j) out.emplace_back(coeffs.lambda(j), ws[j]);
  return out;
}

BoxUnion::BoxUnion(int dim, std::vector<Box> boxes) : dim_(dim) {
  if (dim < 1) throw Error(Errc::kInvalidArgument, "dim must be >= 1");
  for (Box& b : boxes) {
    if (b.size() != static_cast<std::size_t>(dim)) {
      throw Error(Errc::kLengthMismatch, "box has " + std::to_string(b.size()) +
                                             " coordinates, expected " + std::to_string(dim));
    }
    for (const Range& r : b) {
      if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
        throw Error(Errc::kInvalidArgument, "box coordinate needs finite lo <= hi");
      }
    }
    std::vector<Box> pieces{std::move(b)};
    for (const Box& kept : boxes_) {
      std::vector<Box> next;
      for (Box& piece : pieces) {
        for (Box& rest : subtract(std::move(piece), kept)) next.push_back(std::move(rest));
      }
      pieces = std::move(next);
      if (pieces.empty()) break;
    }
    for (Box& piece : pieces) boxes_.push_back(std::move(piece));
  }
}

BoxUnion reflect_box_union(const BoxUnion& bu, double lambda, std::span<const double> h) {
  if (lambda == 1.0) throw Error(Errc::kInvalidArgument, "lambda must differ from 1");
  if (h.size() != static_cast<std::size_t>(bu.dim())) {
    throw Error(Errc::kLengthMismatch, "h has " + std::to_string(h.size()) +
                                           " coordinates, expected " +
                                           std::to_string(bu.dim()));
  }
  const double scale = 1.0 - lambda;
  std::vector<Box> boxes;
  boxes.reserve(bu.boxes().size());
  for (const Box& b : bu.boxes()) {
    Box out(b.size());
    for (std::size_t k = 0; k < b.size(); ++k) {
      const double a = scale * b[k].lo + lambda * h[k];
      const double c = scale * b[k].hi + lambda * h[k];
      out[k] = scale < 0.0 ? Range{c, a} : Range{a, c};
    }
    boxes.push_back(std::move(out));
  }
  return BoxUnion(bu.dim(), std::move(boxes));
}

double product_projection_measure(const BoxUnion& bu) {
  if (bu.empty()) return 0.0;
  double product = 1.0;
  for (int k = 0; k < bu.dim(); ++k) {
    std::vector<Range> proj;
    proj.reserve(bu.boxes().size());
    for (const Box& b : bu.boxes()) proj.push_back(b[k]);
    product *= merged_length(std::move(proj));
  }
  return product;
}

InvarianceReport invariance_check(const BoxUnion& bu, double lambda,
                                  std::span<const double> h) {
  InvarianceReport r;
  r.before = product_projection_measure(bu);
  r.after = product_projection_measure(reflect_box_union(bu, lambda, h));
  r.expected = std::pow(std::abs(1.0 - lambda), bu.dim());
  r.ratio = r.before > 0.0 ? r.after / r.before : std::numeric_limits<double>::quiet_NaN();
  const double target = r.expected * r.before;
  r.holds = target == 0.0 ? r.after == 0.0
                          : std::abs(r.after - target) <= 1e-10 * std::abs(target);
  return r;
}

}  // namespace circleprev
