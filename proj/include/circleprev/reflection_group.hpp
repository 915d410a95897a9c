#pragma once

#include <optional>
#include <span>
#include <vector>

#include "circleprev/lifting.hpp"

namespace circleprev {

// psi_{lambda,w}(v) = (1 - lambda) v + lambda w, lambda != 1.
class Reflection {
 public:
  Reflection(double lambda, Lifting witness);

  double lambda() const { return lambda_; }
  const Lifting& witness() const { return witness_; }

 private:
  double lambda_;
  Lifting witness_;
};

struct Term {
  double a;
  Lifting w;
};

// Flat normal form of a composition of reflections:
//   psi(v) = (1 - delta) v + sum_i a_i w_i,  sum_i a_i = delta != 1.
// Terms are never merged, even when witnesses coincide.
class GroupElement {
 public:
  // The identity: delta = 0, no terms.
  GroupElement() = default;
  GroupElement(double delta, std::vector<Term> terms);
  explicit GroupElement(const Reflection& r);

  double delta() const { return delta_; }
  std::span<const Term> terms() const { return terms_; }
  bool is_identity() const;

 private:
  double delta_ = 0.0;
  std::vector<Term> terms_;
};

Lifting apply(const Reflection& r, const Lifting& v);
Lifting apply(const GroupElement& g, const Lifting& v);

// g o h. Throws kDegenerateComposition if the composite delta rounds to 1.
GroupElement compose(const GroupElement& g, const GroupElement& h);
GroupElement compose(const Reflection& g, const Reflection& h);
// gs[0] o gs[1] o ... o gs[n-1].
GroupElement compose_many(std::span<const Reflection> gs);

// psi_{lambda,w}^{-1} = psi_{lambda/(lambda-1), w}.
Reflection inverse(const Reflection& r);

// Center of mass (1/delta) sum a_i w_i, the unique fixed point of g.
Lifting fixed_point(const GroupElement& g);

// A composite with delta != 0 acts as the single reflection
// psi_{delta, (1/delta) sum a_i w_i}; nullopt when delta == 0.
std::optional<Reflection> as_reflection(const GroupElement& g);

// psi_{lambda,w} with w = (1/lambda) v_to + (1 - 1/lambda) v_from, mapping
// v_from onto v_to.
Reflection solve_transitivity(const Lifting& v_from, const Lifting& v_to,
                              double lambda);

// Membership in the conditional group: every witness is a certified
// diffeomorphism lift.
bool is_conditional(const GroupElement& g, int grid_points = kDefaultGrid);

}  // namespace circleprev
