#include "circleprev/measure_lab.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "circleprev/error.hpp"
#include "support.hpp"

namespace circleprev {
namespace {

using testing::Gen;
using testing::kPi;
using testing::reference_map;

Box unit_box(int dim) { return Box(dim, Range{0.0, 1.0}); }

TEST(CCC, FirstCoefficientsAndProducts) {
  const CCCCoefficients c = ccc_coefficients(5);
  EXPECT_NEAR(c.p(1), 1.0 - 1.0 / (kPi * kPi), 1e-16);
  EXPECT_NEAR(c.p(1), 0.8986788, 1e-7);
  EXPECT_NEAR(c.coefficients[1], std::sin(1.0) / (kPi * kPi - 1.0), 1e-16);
  EXPECT_NEAR(c.coefficients[1], 0.0948714, 1e-7);
  EXPECT_DOUBLE_EQ(c.coefficients[0], std::sin(1.0));
}

TEST(CCC, ProductsDecreaseTowardsSinOne) {
  const CCCCoefficients c = ccc_coefficients(10000);
  for (int n = 2; n <= c.n_terms; ++n) {
    EXPECT_LT(c.p(n), c.p(n - 1));
    EXPECT_GT(c.p(n), std::sin(1.0));
  }
  EXPECT_LE(c.sin_limit_gap(), 1e-4);
  // Tail of the sine product: p_n - sin(1) ~ sin(1) / (pi^2 n).
  EXPECT_NEAR(c.sin_limit_gap(), std::sin(1.0) / (kPi * kPi * 10000), 1e-8);
}

TEST(CCC, CoefficientSumApproachesOne) {
  const CCCCoefficients c = ccc_coefficients(10000);
  EXPECT_LE(c.coefficient_sum(), 1.0);
  EXPECT_LE(std::abs(c.coefficient_sum() - 1.0), 1e-4);
  double partial = 0.0;
  for (const double a : c.coefficients) {
    partial += a;
    EXPECT_LE(partial, 1.0);
  }
}

TEST(CCC, CoefficientConsistency) {
  const CCCCoefficients c = ccc_coefficients(2000);
  for (int j = 1; j < c.n_terms; ++j) {
    const double lhs = c.coefficients[j] * c.p(j);
    const double rhs = std::sin(1.0) * c.lambda(j);
    EXPECT_NEAR(lhs, rhs, 1e-12 * rhs);
  }
}

TEST(CCC, NormalizedWeightsAreConvex) {
  const CCCCoefficients c = ccc_coefficients(500);
  const auto w = c.normalized_weights();
  double sum = 0.0;
  for (const double x : w) {
    EXPECT_GT(x, 0.0);
    sum += x;
  }
  EXPECT_NEAR(sum, 1.0, 1e-15);
}

TEST(CCCApply, EqualWitnessesAreFixed) {
  const CCCCoefficients c = ccc_coefficients(20);
  const std::vector<Lifting> ws(20, reference_map());
  EXPECT_TRUE(approx_equal(ccc_apply(c, ws), reference_map()));
}

TEST(CCCApply, TwoTermsMatchSingleReflection) {
  const CCCCoefficients c = ccc_coefficients(2);
  const Lifting w1 = reference_map();
  const Lifting w2 = Lifting::rotation(0.4);
  const std::vector<Lifting> ws{w1, w2};
  const std::vector<Reflection> rs{Reflection(c.lambda(1), w2)};
  const Lifting literal = apply(compose_many(rs), w1);
  // The literal composition carries the un-renormalized truncation weights.
  const auto lw = c.literal_weights();
  EXPECT_TRUE(approx_equal(literal, affine_combination({{lw[0], w1}, {lw[1], w2}}), 1e-15));
  EXPECT_TRUE(approx_equal(ccc_apply(c, ws), literal, 1e-14));
}

TEST(CCCApply, MatchesLiteralCompositionForSmallN) {
  Gen gen(51);
  for (int n = 1; n <= 6; ++n) {
    const CCCCoefficients c = ccc_coefficients(n);
    std::vector<Lifting> ws;
    for (int i = 0; i < n; ++i) ws.push_back(gen.lifting());
    const Lifting got = ccc_apply(c, ws);
    Lifting literal = ws[0];
    if (n > 1) literal = apply(compose_many(ccc_reflections(c, ws)), ws[0]);
    EXPECT_LE(cr_metric(got, literal, 256), 1e-10) << "n=" << n;
  }
}

TEST(CCCApply, AlternatingShifts) {
  const int n = 9;
  const CCCCoefficients c = ccc_coefficients(n);
  std::vector<Lifting> ws;
  for (int j = 0; j < n; ++j) ws.push_back(Lifting::rotation(j % 2 == 0 ? 0.0 : 1.0));
  const auto w = c.normalized_weights();
  double odd = 0.0;
  for (int j = 1; j < n; j += 2) odd += w[j];
  EXPECT_NEAR(ccc_apply(c, ws).c0(), odd, 1e-15);
}

TEST(CCCApply, LengthMismatch) {
  const CCCCoefficients c = ccc_coefficients(3);
  const std::vector<Lifting> ws(2, Lifting::identity());
  try {
    ccc_apply(c, ws);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kLengthMismatch);
  }
}

TEST(BoxUnion, OverlapsAreCut) {
  const BoxUnion bu(2, {Box{{0.0, 2.0}, {0.0, 2.0}}, Box{{1.0, 3.0}, {1.0, 3.0}}});
  // Total volume of the pieces equals the union's area, 4 + 4 - 1.
  double volume = 0.0;
  for (const Box& b : bu.boxes()) volume += b[0].length() * b[1].length();
  EXPECT_NEAR(volume, 7.0, 1e-15);
  EXPECT_NEAR(product_projection_measure(bu), 9.0, 1e-15);
}

TEST(BoxUnion, RejectsWrongDimension) {
  EXPECT_THROW(BoxUnion(2, {Box{{0.0, 1.0}}}), Error);
  EXPECT_THROW(BoxUnion(1, {Box{{1.0, 0.0}}}), Error);
}

TEST(ReflectBoxUnion, Examples) {
  const BoxUnion unit(3, {unit_box(3)});
  const std::vector<double> zero(3, 0.0);
  EXPECT_EQ(reflect_box_union(unit, 0.0, zero).boxes(), unit.boxes());

  const BoxUnion half = reflect_box_union(unit, 0.5, zero);
  EXPECT_EQ(half.boxes().front(), Box(3, Range{0.0, 0.5}));

  const BoxUnion line(1, {Box{{0.0, 1.0}}});
  const std::vector<double> h{3.0};
  EXPECT_EQ(reflect_box_union(line, 2.0, h).boxes().front(), (Box{{5.0, 6.0}}));

  EXPECT_THROW(reflect_box_union(line, 1.0, h), Error);
  EXPECT_THROW(reflect_box_union(line, 0.5, zero), Error);
}

TEST(ProductProjectionMeasure, Examples) {
  EXPECT_EQ(product_projection_measure(BoxUnion(3, {unit_box(3)})), 1.0);
  const BoxUnion stacked(3, {unit_box(3), Box{{1.0, 2.0}, {0.0, 1.0}, {0.0, 1.0}}});
  EXPECT_EQ(product_projection_measure(stacked), 2.0);
  EXPECT_EQ(product_projection_measure(BoxUnion(2)), 0.0);
}

TEST(InvarianceCheck, Examples) {
  const BoxUnion unit(2, {unit_box(2)});
  const std::vector<double> h{0.3, -0.2};
  EXPECT_DOUBLE_EQ(invariance_check(unit, 0.0, h).ratio, 1.0);
  const InvarianceReport r = invariance_check(unit, 0.5, h);
  EXPECT_DOUBLE_EQ(r.ratio, 0.25);
  EXPECT_TRUE(r.holds);

  const BoxUnion flat(2, {Box{{0.0, 1.0}, {0.5, 0.5}}});
  const InvarianceReport z = invariance_check(flat, -1.7, h);
  EXPECT_EQ(z.before, 0.0);
  EXPECT_EQ(z.after, 0.0);
  EXPECT_TRUE(z.holds);
}

TEST(MeasureProperty, ScalingLaw) {
  Gen gen(52);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = gen.integer(1, 4);
    std::vector<Box> boxes;
    const int count = gen.integer(1, 5);
    for (int b = 0; b < count; ++b) {
      Box box;
      for (int k = 0; k < dim; ++k) {
        const double lo = gen.uniform(-2.0, 2.0);
        box.push_back({lo, lo + gen.uniform(0.0, 1.5)});
      }
      boxes.push_back(std::move(box));
    }
    const BoxUnion bu(dim, std::move(boxes));
    double lambda = gen.uniform(-3.0, 3.0);
    if (lambda == 1.0) lambda = 0.5;
    std::vector<double> h(dim);
    for (double& v : h) v = gen.uniform(-1.0, 1.0);
    const InvarianceReport r = invariance_check(bu, lambda, h);
    EXPECT_TRUE(r.holds) << "trial " << trial;
    EXPECT_NEAR(r.after, std::pow(std::abs(1.0 - lambda), dim) * r.before,
                1e-10 * std::abs(r.after));
  }
}

}  // namespace
}  // namespace circleprev
