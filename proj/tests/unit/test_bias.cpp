#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "nilprob/bias.hpp"
#include "nilprob/error.hpp"
#include "oracles.hpp"

using namespace nilprob;
using namespace nilprob::bias;

namespace {

algebra::ParamsPtr hyperbolic(unsigned p, std::size_t n) { return algebra::make_params(fieldlin::hyperbolic_form(p, n)); }

/// x_1 y_1 on F_2^a x F_2^b.
DenseMultilinear first_coordinates(std::size_t a, std::size_t b) {
  DenseMultilinear m(2, {a, b}, 1);
  m.mutable_coeffs()[0] = 1;
  return m;
}

std::vector<FpVector> random_args(const std::vector<std::size_t>& dims, unsigned p, std::mt19937_64& rng) {
  std::vector<FpVector> out;
  for (auto d : dims) out.push_back(oracle::random_vector(p, d, rng));
  return out;
}

/// Additivity in every slot on random probes.
template <class Eval>
void expect_multilinear(unsigned p, const std::vector<std::size_t>& dims, Eval eval, std::mt19937_64& rng) {
  for (int t = 0; t < 100; ++t) {
    auto args = random_args(dims, p, rng);
    for (std::size_t s = 0; s < dims.size(); ++s) {
      const auto u = oracle::random_vector(p, dims[s], rng);
      auto a1 = args, a2 = args, a12 = args;
      a2[s] = u;
      a12[s] = args[s] + u;
      ASSERT_EQ(eval(a12), eval(a1) + eval(a2)) << "slot " << s;
      auto scaled = args;
      const auto c = static_cast<fieldlin::Digit>(rng() % p);
      scaled[s] = c * args[s];
      ASSERT_EQ(eval(scaled), c * eval(args));
    }
  }
}

}  // namespace

TEST(DenseMultilinear, EvaluatesRowMajorLayout) {
  // F(x, y) = (x0 y1, 2 x1 y0) over F_3.
  DenseMultilinear m(3, {2, 2}, 2, {0, 1, 0, 0, /*o=1*/ 0, 0, 2, 0});
  const std::vector<FpVector> args{FpVector(3, {1, 2}), FpVector(3, {2, 1})};
  EXPECT_EQ(m.evaluate(args), FpVector(3, {1, 2 * 2 * 2}));
  EXPECT_EQ(m.image_dimension(), 2U);
  EXPECT_THROW(DenseMultilinear(3, {2, 2}, 1, {1, 2}), DimensionMismatch);
  EXPECT_THROW(m.evaluate(std::vector<FpVector>{FpVector(3, 2)}), DimensionMismatch);
}

TEST(DenseMultilinear, FromFormMatchesFormEval) {
  std::mt19937_64 rng(1);
  const auto f = oracle::random_form(5, 3, rng);
  const auto m = DenseMultilinear::from_form(f);
  for (int t = 0; t < 100; ++t) {
    const std::vector<FpVector> args{oracle::random_vector(5, 3, rng), oracle::random_vector(5, 3, rng)};
    EXPECT_EQ(m.evaluate(args)[0], oracle::form_value(f, args[0], args[1]));
  }
  EXPECT_EQ(DenseMultilinear::from_form(fieldlin::BilinearForm(5, 3)).image_dimension(), 0U);
  EXPECT_EQ(DenseMultilinear::from_form(fieldlin::hyperbolic_form(5, 1)).image_dimension(), 1U);
}

TEST(MultilinearMap, ConstructedMapsAreMultilinear) {
  std::mt19937_64 rng(2);
  for (auto [p, n] : {std::pair{2U, 1U}, std::pair{3U, 2U}}) {
    const auto P = hyperbolic(p, n);
    const auto l3 = lie3_map(P);
    const auto l4 = lie4_map(P);
    expect_multilinear(p, l3.dims(), [&](const std::vector<FpVector>& a) { return l3.evaluate(a); }, rng);
    expect_multilinear(p, l4.dims(), [&](const std::vector<FpVector>& a) { return l4.evaluate(a); }, rng);
    const auto quad = family_quad_expression(P);
    expect_multilinear(p, quad.dims(), [&](const std::vector<FpVector>& a) { return quad.evaluate(a); }, rng);
    const auto tri = family_tri_expression(P);
    expect_multilinear(p, tri.dims(), [&](const std::vector<FpVector>& a) { return tri.evaluate(a); }, rng);
  }
}

TEST(BiasProbability, ZeroMapAndFirstCoordinates) {
  EXPECT_EQ(*bias_probability(zero_map(3, {2, 2}, 2)).exact, Rational(1, 1));
  for (auto [a, b] : {std::pair{1U, 1U}, std::pair{2U, 3U}, std::pair{4U, 2U}}) {
    const auto r = bias_probability(MultilinearMap(first_coordinates(a, b)));
    EXPECT_EQ(*r.exact, Rational(3, 4));
    EXPECT_EQ(r.samples, std::uint64_t{1} << (a + b));
  }
}

TEST(BiasProbability, SampledIntervalCoversExact) {
  const MultilinearMap F(first_coordinates(3, 3));
  const auto r = bias_probability(F, {.mode = Mode::sampled, .samples = 20000, .seed = 5});
  EXPECT_EQ(r.kind, stats::StatReport::Kind::monte_carlo);
  EXPECT_LE(*r.ci_low, 0.75);
  EXPECT_GE(*r.ci_high, 0.75);
}

TEST(BiasProbability, ThreadsDoNotChangeExactValue) {
  const auto P = hyperbolic(3, 1);
  EXPECT_EQ(*bias_probability(lie4_map(P), {.threads = 1}).exact, *bias_probability(lie4_map(P), {.threads = 3}).exact);
}

TEST(BiasProbability, CapIsEnforced) {
  EXPECT_THROW(bias_probability(lie4_map(hyperbolic(3, 2))), CapExceeded);
  EXPECT_THROW(bias_probability(lie3_map(hyperbolic(2, 2)), {.cap = 100}), CapExceeded);
}

TEST(Expressions, EmptyExpressionMatchesZeroMap) {
  const StructuredExpression e(2, {2, 2, 2}, 1);
  EXPECT_TRUE(verify_expression(e, zero_map(2, {2, 2, 2}, 1)).verified);
  EXPECT_EQ(e.rank(), 1U);
}

TEST(Expressions, TermValidation) {
  StructuredExpression e(2, {2, 2}, 1);
  const auto form = DenseMultilinear::from_form(fieldlin::hyperbolic_form(2, 1));
  DenseMultilinear id(2, {1}, 1, {1});
  EXPECT_THROW(e.add_term({{}, {0, 1}, DenseMultilinear(2, {2, 2}, 1)}), InvalidArgument);
  EXPECT_THROW(e.add_term({{{{0, 0}, form}}, {}, id}), InvalidArgument);
  EXPECT_THROW(e.add_term({{{{0, 1}, form}}, {1}, DenseMultilinear(2, {1, 2}, 1)}), InvalidArgument);
  EXPECT_THROW(e.add_term({{{{0, 1}, form}}, {}, DenseMultilinear(2, {2}, 1)}), DimensionMismatch);
  EXPECT_THROW(e.add_term({{{{0, 5}, form}}, {}, id}), DimensionMismatch);
  EXPECT_NO_THROW(e.add_term({{{{0, 1}, form}}, {}, id}));
  EXPECT_EQ(e.terms().front().index_set(), (std::vector<std::size_t>{0, 1}));
}

TEST(QuadExpression, SpecificValuesAndRank) {
  const auto P = hyperbolic(2, 1);
  const auto e = family_quad_expression(P);
  EXPECT_EQ(e.rank(), 16U);
  const auto e1 = FpVector::unit(2, 2, 0), e1p = FpVector::unit(2, 2, 1);
  const std::vector<FpVector> args{e1, e1p, e1, e1p};
  EXPECT_EQ(e.evaluate(args)[0], 1);
  EXPECT_EQ(algebra::lie4_closed(*P, e1, e1p, e1, e1p).value, 1);
  std::mt19937_64 rng(3);
  const auto Q = hyperbolic(3, 2);
  const auto eq = family_quad_expression(Q);
  EXPECT_EQ(eq.rank(), 81U);
  for (int t = 0; t < 100; ++t) {
    auto a = random_args(eq.dims(), 3, rng);
    a[1] = a[0];
    EXPECT_TRUE(eq.evaluate(a).is_zero());
  }
}

TEST(QuadExpression, VerifiedAgainstClosedForm) {
  for (std::size_t n : {1U, 2U}) {
    const auto P = hyperbolic(2, n);
    const auto r = verify_expression(family_quad_expression(P), lie4_map(P));
    EXPECT_TRUE(r.verified);
    EXPECT_EQ(r.mode, Mode::exhaustive);
    EXPECT_EQ(r.points, std::uint64_t{1} << (8 * n));
  }
  const auto P6 = hyperbolic(2, 3);
  const auto r = verify_expression(family_quad_expression(P6), lie4_map(P6), {.mode = Mode::sampled, .samples = 20000});
  EXPECT_TRUE(r.verified);
  EXPECT_EQ(r.points, 20000U);
  const auto P3 = hyperbolic(3, 1);
  EXPECT_TRUE(verify_expression(family_quad_expression(P3), lie4_map(P3)).verified);
}

TEST(QuadExpression, PerturbedCertificateIsRejected) {
  const auto P = hyperbolic(2, 2);
  auto e = family_quad_expression(P);
  auto coeffs = e.mutable_terms()[0].inners[0].map.mutable_coeffs();
  coeffs[0] ^= 1;
  const auto F = lie4_map(P);
  for (const auto mode : {Mode::exhaustive, Mode::sampled}) {
    const auto r = verify_expression(e, F, {.mode = mode, .samples = 100000, .seed = 9});
    ASSERT_FALSE(r.verified);
    ASSERT_TRUE(r.counterexample);
    EXPECT_NE(e.evaluate(*r.counterexample), F.evaluate(*r.counterexample));
  }
}

TEST(QuadExpression, RankInvariantUnderTermOrder) {
  std::mt19937_64 rng(4);
  const auto P = hyperbolic(3, 2);
  const auto e = family_quad_expression(P);
  auto reversed = e;
  std::reverse(reversed.mutable_terms().begin(), reversed.mutable_terms().end());
  EXPECT_EQ(e.rank(), reversed.rank());
  for (int t = 0; t < 100; ++t) {
    const auto a = random_args(e.dims(), 3, rng);
    EXPECT_EQ(e.evaluate(a), reversed.evaluate(a));
  }
}

TEST(TrilinearBound, ZeroInnerMapsGiveOne) {
  StructuredExpression e(2, {2, 2, 2}, 2);
  const DenseMultilinear zero(2, {2, 2}, 1);
  const DenseMultilinear outer(2, {1, 2}, 2);
  e.add_term({{{{0, 1}, zero}}, {2}, outer});
  e.add_term({{{{0, 2}, zero}}, {1}, outer});
  e.add_term({{{{1, 2}, zero}}, {0}, outer});
  EXPECT_EQ(trilinear_lower_bound(e), Rational(1, 1));
}

TEST(TrilinearBound, ThreeOneDimensionalCodomainsGiveOneEighth) {
  StructuredExpression e(2, {2, 2, 2}, 1);
  const auto g = DenseMultilinear::from_form(fieldlin::hyperbolic_form(2, 1));
  const DenseMultilinear outer(2, {1, 2}, 1, {1, 0});
  // Terms in a different order from the canonical shape.
  e.add_term({{{{1, 2}, g}}, {0}, outer});
  e.add_term({{{{0, 1}, g}}, {2}, outer});
  e.add_term({{{{0, 2}, g}}, {1}, outer});
  EXPECT_EQ(trilinear_lower_bound(e), Rational(1, 8));
  const MultilinearMap F(2, e.dims(), 1, [&](std::span<const FpVector> a) { return e.evaluate(a); });
  const auto bias = bias_probability(F);
  EXPECT_GE(*bias.exact, Rational(1, 8));
}

TEST(TrilinearBound, WrongShapeIsRejected) {
  const auto P = hyperbolic(2, 1);
  EXPECT_THROW(trilinear_lower_bound(family_quad_expression(P)), InvalidArgument);
  StructuredExpression two_terms(2, {2, 2, 2}, 2);
  const auto g = DenseMultilinear::from_form(fieldlin::hyperbolic_form(2, 1));
  two_terms.add_term({{{{0, 1}, g}}, {2}, DenseMultilinear(2, {1, 2}, 2)});
  two_terms.add_term({{{{0, 2}, g}}, {1}, DenseMultilinear(2, {1, 2}, 2)});
  EXPECT_THROW(trilinear_lower_bound(two_terms), InvalidArgument);
  two_terms.add_term({{{{0, 1}, g}}, {2}, DenseMultilinear(2, {1, 2}, 2)});
  EXPECT_THROW(trilinear_lower_bound(two_terms), InvalidArgument);
}

TEST(TriExpression, RepresentsTripleBracketAndBoundsItsBias) {
  for (auto [p, n] : {std::pair{2U, 1U}, std::pair{3U, 1U}, std::pair{2U, 2U}}) {
    const auto P = hyperbolic(p, n);
    const auto e = family_tri_expression(P);
    const auto F = lie3_map(P);
    ASSERT_TRUE(verify_expression(e, F).verified);
    const auto bound = trilinear_lower_bound(e);
    const auto bias = bias_probability(F);
    EXPECT_GE(*bias.exact, bound) << "p=" << p << " n=" << n;
  }
  const auto P = hyperbolic(2, 1);
  EXPECT_EQ(trilinear_lower_bound(family_tri_expression(P)), Rational(1, 4));
}
