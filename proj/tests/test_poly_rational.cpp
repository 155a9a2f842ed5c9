// Polynomial and rational-function layer.  Fixed expected values were worked
// out by hand over F_2/F_3 and frozen.

#include <gtest/gtest.h>

#include "asdescent/rational.hpp"

using namespace asdescent;

namespace {

Poly P(const Field& F, const std::string& s) { return parse_poly(F, s); }
Rat R(const Field& F, const std::string& s) { return parse_rat(F, s); }

}  // namespace

TEST(Poly, GcdMatchesHandComputation) {
  auto F = Field::make_default(2, 1);
  // t^3 + t = t(t+1)^2 and t^2 + 1 = (t+1)^2, so the gcd is t^2 + 1.
  EXPECT_EQ(poly_gcd(P(*F, "t^3 + t"), P(*F, "t^2 + 1")), P(*F, "t^2 + 1"));
  EXPECT_EQ(poly_gcd(P(*F, "t^2 + t"), P(*F, "t^2 + 1")), P(*F, "t + 1"));
}

TEST(Poly, DivmodAndEgcd) {
  auto F = Field::make_default(3, 1);
  const Poly a = P(*F, "t^4 + 2*t + 1");
  const Poly b = P(*F, "t^2 + 1");
  auto [q, r] = poly_divmod(a, b);
  EXPECT_EQ(q * b + r, a);
  EXPECT_LT(r.deg(), b.deg());
  auto e = poly_egcd(a, b);
  EXPECT_EQ(e.u * a + e.v * b, e.g);
  EXPECT_EQ(e.g, poly_gcd(a, b));
  EXPECT_THROW(poly_divmod(a, poly_zero(*F)), DivisionByZero);
}

TEST(Poly, FrobeniusIsCoefficientwise) {
  auto F = Field::make_default(2, 2);
  const Fq g{F.get(), F->gen_idx()};
  Poly a = poly_monomial(g, 1) + poly_one(*F);  // g t + 1
  Poly sq = poly_frob(a);
  EXPECT_EQ(sq, a * a);
  EXPECT_EQ(sq.coeff(2), g * g);
}

TEST(Poly, FactorAndIrreducibility) {
  auto F = Field::make_default(2, 1);
  EXPECT_TRUE(poly_irreducible(P(*F, "t^2 + t + 1")));
  EXPECT_FALSE(poly_irreducible(P(*F, "t^2 + 1")));
  auto fac = poly_factor(P(*F, "t^3 + t"));
  ASSERT_EQ(fac.size(), 2u);
  EXPECT_EQ(fac[0].irr, P(*F, "t"));
  EXPECT_EQ(fac[0].mult, 1);
  EXPECT_EQ(fac[1].irr, P(*F, "t + 1"));
  EXPECT_EQ(fac[1].mult, 2);
  EXPECT_EQ(poly_ord(P(*F, "t^3 + t"), P(*F, "t + 1")), 2);
}

TEST(Poly, TextRoundTrip) {
  auto F3 = Field::make_default(3, 1);
  for (const char* s : {"t^3 + t + 1", "2*t^2 + 1", "t", "0", "2",
                        "t^5 + 2*t^4 + t^2 + 2"}) {
    EXPECT_EQ(poly_to_string(P(*F3, s)), s);
  }
  auto F4 = Field::make_default(2, 2);
  for (const char* s : {"[0,1]*t + [1,1]", "t^2 + [0,1]", "[1,1]*t^3 + t"}) {
    EXPECT_EQ(poly_to_string(P(*F4, s)), s);
  }
  // The parser also accepts signs and reduces them mod p.
  EXPECT_EQ(P(*F3, "t - 1"), P(*F3, "t + 2"));
}

TEST(Rat, CanonicalForm) {
  auto F = Field::make_default(2, 1);
  const Rat f = rat_make(P(*F, "t^2 + t"), P(*F, "t^2 + 1"));
  // t(t+1)/(t+1)^2 = t/(t+1).
  EXPECT_EQ(f.num, P(*F, "t"));
  EXPECT_EQ(f.den, P(*F, "t + 1"));
  const Rat z = rat_make(poly_zero(*F), P(*F, "t^3"));
  EXPECT_TRUE(z.is_zero());
  EXPECT_TRUE(z.den.is_one());
  EXPECT_THROW(rat_make(P(*F, "t"), poly_zero(*F)), DivisionByZero);

  auto F3 = Field::make_default(3, 1);
  // Non-monic denominators get normalized: t / (2t + 1) = 2t / (t + 2).
  const Rat g = rat_make(P(*F3, "t"), P(*F3, "2*t + 1"));
  EXPECT_EQ(g.den.lc(), fq_one(*F3));
  EXPECT_EQ(g, R(*F3, "2*t / (t + 2)"));
}

TEST(Rat, FieldOps) {
  auto F = Field::make_default(3, 1);
  const Rat f = R(*F, "1 / t");
  const Rat g = R(*F, "t / (t + 1)");
  EXPECT_EQ(f + g, R(*F, "(t^2 + t + 1) / (t^2 + t)"));
  EXPECT_EQ(f * g, R(*F, "1 / (t + 1)"));
  EXPECT_EQ(rat_inv(g), R(*F, "(t + 1) / t"));
  EXPECT_EQ(f - f, rat_zero(*F));
  EXPECT_EQ(rat_pow(f, -2), R(*F, "t^2"));
  EXPECT_THROW(rat_inv(rat_zero(*F)), DivisionByZero);
}

TEST(Rat, FrobeniusAndChartSwap) {
  auto F = Field::make_default(2, 1);
  const Rat f = R(*F, "(t + 1) / t");
  EXPECT_EQ(rat_frob(f), f * f);
  EXPECT_EQ(rat_frob(f), R(*F, "(t^2 + 1) / t^2"));
  // f(1/t) = (1/t + 1) / (1/t) = (1 + t)/1 scaled: (1+t)/t * t = ...
  EXPECT_EQ(rat_chart_swap(f), R(*F, "t + 1"));
  EXPECT_EQ(rat_chart_swap(R(*F, "t^3")), R(*F, "1 / t^3"));
  EXPECT_EQ(rat_chart_swap(rat_chart_swap(R(*F, "(t^2 + 1) / (t^3 + t + 1)"))),
            R(*F, "(t^2 + 1) / (t^3 + t + 1)"));
}

TEST(Rat, TextRoundTrip) {
  auto F = Field::make_default(2, 1);
  for (const char* s : {"1 / t", "(t + 1) / t", "t / (t + 1)",
                        "(t^4 + 1) / t", "t^3 + t + 1", "0", "1"}) {
    EXPECT_EQ(rat_to_string(R(*F, s)), s);
  }
}
