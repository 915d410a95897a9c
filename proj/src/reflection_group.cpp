#include "circleprev/reflection_group.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "circleprev/error.hpp"

namespace circleprev {

Reflection::Reflection(double lambda, Lifting witness)
    : lambda_(lambda), witness_(std::move(witness)) {
  if (!std::isfinite(lambda_) || lambda_ == 1.0) {
    throw Error(Errc::kInvalidArgument, "reflection parameter must be finite and != 1");
  }
}

GroupElement::GroupElement(double delta, std::vector<Term> terms)
    : delta_(delta), terms_(std::move(terms)) {
  if (!std::isfinite(delta_)) {
    throw Error(Errc::kInvalidArgument, "non-finite delta");
  }
  if (delta_ == 1.0) {
    throw Error(Errc::kDegenerateComposition, "delta = 1 is not a group element");
  }
  double sum = 0.0;
  double scale = 1.0;
  for (const Term& t : terms_) {
    sum += t.a;
    scale = std::max(scale, std::abs(t.a));
  }
  if (std::abs(sum - delta_) > 1e-12 * scale) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "weights sum to " << sum << " but delta is " << delta_;
    throw Error(Errc::kInvalidArgument, msg.str());
  }
  if (!terms_.empty()) {
    const int r = terms_.front().w.regularity();
    for (const Term& t : terms_) {
      if (t.w.regularity() != r) {
        throw Error(Errc::kRegularityMismatch, "witnesses of mixed regularity");
      }
    }
  }
}

GroupElement::GroupElement(const Reflection& r)
    : GroupElement(r.lambda(), {Term{r.lambda(), r.witness()}}) {}

bool GroupElement::is_identity() const {
  return delta_ == 0.0 &&
         std::all_of(terms_.begin(), terms_.end(), [](const Term& t) { return t.a == 0.0; });
}

Lifting apply(const Reflection& r, const Lifting& v) {
  return affine_combination({{1.0 - r.lambda(), v}, {r.lambda(), r.witness()}});
}

Lifting apply(const GroupElement& g, const Lifting& v) {
  std::vector<Weighted> terms;
  terms.reserve(g.terms().size() + 1);
  terms.push_back({1.0 - g.delta(), v});
  for (const Term& t : g.terms()) terms.push_back({t.a, t.w});
  return affine_combination(terms);
}

GroupElement compose(const GroupElement& g, const GroupElement& h) {
  // g(h(v)) = (1-dg)[(1-dh) v + sum b_j u_j] + sum a_i w_i
  const double dg = g.delta();
  const double dh = h.delta();
  const double delta = dg + dh - dg * dh;
  if (delta == 1.0) {
    throw Error(Errc::kDegenerateComposition, "composite delta equals 1");
  }
  std::vector<Term> terms;
  terms.reserve(g.terms().size() + h.terms().size());
  for (const Term& t : h.terms()) terms.push_back({(1.0 - dg) * t.a, t.w});
  for (const Term& t : g.terms()) terms.push_back(t);
  return GroupElement(delta, std::move(terms));
}

GroupElement compose(const Reflection& g, const Reflection& h) {
  const double lambda = g.lambda();
  const double sigma = h.lambda();
  const double delta = lambda + sigma - lambda * sigma;
  if (delta == 1.0) {
    throw Error(Errc::kDegenerateComposition, "composite delta equals 1");
  }
  return GroupElement(delta, {Term{delta - lambda, h.witness()},
                              Term{lambda, g.witness()}});
}

GroupElement compose_many(std::span<const Reflection> gs) {
  if (gs.empty()) {
    throw Error(Errc::kInvalidArgument, "compose_many needs at least one reflection");
  }
  GroupElement acc(gs.back());
  for (auto it = gs.rbegin() + 1; it != gs.rend(); ++it) {
    acc = compose(GroupElement(*it), acc);
  }
  return acc;
}

Reflection inverse(const Reflection& r) {
  const double l = r.lambda();
  return Reflection(l / (l - 1.0), r.witness());
}

Lifting fixed_point(const GroupElement& g) {
  if (g.delta() == 0.0) {
    throw Error(Errc::kIdentityHasAllFixedPoints,
                "delta = 0: no unique center of mass");
  }
  std::vector<Weighted> terms;
  terms.reserve(g.terms().size());
  for (const Term& t : g.terms()) terms.push_back({t.a / g.delta(), t.w});
  return affine_combination(terms);
}

std::optional<Reflection> as_reflection(const GroupElement& g) {
  if (g.delta() == 0.0) return std::nullopt;
  return Reflection(g.delta(), fixed_point(g));
}

Reflection solve_transitivity(const Lifting& v_from, const Lifting& v_to,
                              double lambda) {
  if (lambda == 0.0 || lambda == 1.0 || !std::isfinite(lambda)) {
    throw Error(Errc::kInvalidArgument, "transitivity needs lambda outside {0, 1}");
  }
  const double inv = 1.0 / lambda;
  return Reflection(lambda, affine_combination({{inv, v_to}, {1.0 - inv, v_from}}));
}

bool is_conditional(const GroupElement& g, int grid_points) {
  return std::all_of(g.terms().begin(), g.terms().end(), [grid_points](const Term& t) {
    return validate_diffeo(t.w, grid_points).is_diffeo;
  });
}

}  // namespace circleprev
