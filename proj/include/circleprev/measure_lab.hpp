#pragma once

#include <span>
#include <vector>

#include "circleprev/lifting.hpp"
#include "circleprev/reflection_group.hpp"

namespace circleprev {

// Truncation of the countable convex convolution with lambda_i = 1/(pi^2 i^2):
//   Phi(w_1, ..., w_T) = psi_{lambda_{T-1}, w_T} o ... o psi_{lambda_1, w_2}(w_1).
// Its weights are p_{T-1} [1, lambda_1/p_1, ..., lambda_{T-1}/p_{T-1}] with
// p_n = prod_{i<=n} (1 - lambda_i) -> sin(1), so the limit weights are
// sin(1) [1, lambda_j/p_j].
struct CCCCoefficients {
  int n_terms = 0;
  std::vector<double> lambdas;           // lambda_1 .. lambda_T
  std::vector<double> partial_products;  // p_1 .. p_T
  // [sin(1), sin(1) lambda_1/p_1, ..., sin(1) lambda_{T-1}/p_{T-1}]; the
  // weight of w_{j+1} is coefficients[j].
  std::vector<double> coefficients;

  double lambda(int i) const { return lambdas.at(i - 1); }
  double p(int n) const { return n == 0 ? 1.0 : partial_products.at(n - 1); }

  double coefficient_sum() const;
  // |p_T - sin(1)|.
  double sin_limit_gap() const;
  // coefficients / coefficient_sum(): positive, summing to one.
  std::vector<double> normalized_weights() const;
  // The un-renormalized truncation p_{T-1} [1, lambda_j / p_j], which is what
  // the literal composition produces.
  std::vector<double> literal_weights() const;
};

CCCCoefficients ccc_coefficients(int n_terms);

// sum_j normalized_weights[j] w_{j+1}. Throws kLengthMismatch unless
// ws.size() == n_terms.
Lifting ccc_apply(const CCCCoefficients& coeffs, std::span<const Lifting> ws);

// [psi_{lambda_{T-1}, w_T}, ..., psi_{lambda_1, w_2}], ready for compose_many;
// applying the composite to w_1 gives the literal truncation.
std::vector<Reflection> ccc_reflections(const CCCCoefficients& coeffs,
                                        std::span<const Lifting> ws);

struct Range {
  double lo;
  double hi;

  double length() const { return hi - lo; }
  friend bool operator==(const Range&, const Range&) = default;
};

using Box = std::vector<Range>;

// Finite union of axis-aligned boxes in R^dim, stored with pairwise disjoint
// interiors. Overlapping input boxes are cut into pieces on construction;
// degenerate (zero-width) boxes are kept.
class BoxUnion {
 public:
  explicit BoxUnion(int dim, std::vector<Box> boxes = {});

  int dim() const { return dim_; }
  const std::vector<Box>& boxes() const { return boxes_; }
  bool empty() const { return boxes_.empty(); }

 private:
  int dim_;
  std::vector<Box> boxes_;
};

// Coordinate k maps to (1 - lambda) t + lambda h[k]. Throws kInvalidArgument
// for lambda == 1 and kLengthMismatch unless h.size() == dim.
BoxUnion reflect_box_union(const BoxUnion& bu, double lambda, std::span<const double> h);

// prod_k Leb(pi_k(union)), the product of projection lengths.
double product_projection_measure(const BoxUnion& bu);

struct InvarianceReport {
  double before;
  double after;
  double ratio;     // after / before; NaN when before == 0
  double expected;  // |1 - lambda|^dim
  bool holds;       // after matches expected * before within 1e-10 relative
};

InvarianceReport invariance_check(const BoxUnion& bu, double lambda,
                                  std::span<const double> h);

}  // namespace circleprev
