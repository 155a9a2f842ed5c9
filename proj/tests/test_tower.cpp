// Artin-Schreier towers: arithmetic in the quotient rings, extension of
// valuations along layers, uniformizer construction, and the expansion
// defect identity, against hand-derived values and algebraic laws.

#include <gtest/gtest.h>

#include <random>

#include "asdescent/tower.hpp"

using namespace asdescent;

namespace {

Rat R(const Field& F, const std::string& s) { return parse_rat(F, s); }

ASTower simple_tower(FieldPtr F, const std::string& f) {
  const Place P = place_finite(poly_t(*F));
  ASTower T(F, {P});
  return T.extend(T.from_rat(parse_rat(*F, f)));
}

TEST(Tower, ExtendDerivesUniformizerData) {
  // p = 2, f = t^-3: least a with 3a = -1 mod 2 is 1, b = (1+3)/2 = 2.
  FieldPtr F2 = Field::make_default(2, 1);
  ASTower T = simple_tower(F2, "1 / t^3");
  ASSERT_EQ(T.levels(), 1);
  EXPECT_EQ(T.degree(), 2);
  const TowerLayerData& L = T.tracked()[0].layers[0];
  EXPECT_EQ(L.s, 3);
  EXPECT_EQ(L.a, 1);
  EXPECT_EQ(L.b, 2);
  // pi = x * t^2.
  const TowerElement pi = T.mul(T.x(1), T.from_rat(R(*F2, "t^2"), 1));
  EXPECT_TRUE(T.eq(T.uniformizer(0, 1), pi));

  // p = 3, f = t^-2: a = 1, b = 1, pi = x t.
  FieldPtr F3 = Field::make_default(3, 1);
  ASTower T3 = simple_tower(F3, "1 / t^2");
  EXPECT_EQ(T3.tracked()[0].layers[0].s, 2);
  EXPECT_EQ(T3.tracked()[0].layers[0].a, 1);
  EXPECT_EQ(T3.tracked()[0].layers[0].b, 1);
  EXPECT_TRUE(T3.eq(T3.uniformizer(0, 1),
                    T3.mul(T3.x(1), T3.from_rat(R(*F3, "t"), 1))));

  // p = 5, s = 2: 2a = -1 = 4 mod 5 gives a = 2, b = (1 + 4)/5 = 1,
  // pi = x^2 t.
  FieldPtr F5 = Field::make_default(5, 1);
  ASTower T5 = simple_tower(F5, "1 / t^2");
  EXPECT_EQ(T5.tracked()[0].layers[0].a, 2);
  EXPECT_EQ(T5.tracked()[0].layers[0].b, 1);
  EXPECT_TRUE(T5.eq(T5.uniformizer(0, 1),
                    T5.mul(T5.pow(T5.x(1), 2), T5.from_rat(R(*F5, "t"), 1))));
}

TEST(Tower, NormalizedValuations) {
  FieldPtr F = Field::make_default(2, 1);
  ASTower T = simple_tower(F, "1 / t^3");
  // v(pi) = 1, v(t) = p * v_base(t) = 2, v(x) = -s = -3.
  EXPECT_EQ(T.val(T.uniformizer(0, 1), 0), 1);
  EXPECT_EQ(T.val(T.from_rat(R(*F, "t"), 1), 0), 2);
  EXPECT_EQ(T.val(T.x(1), 0), -3);
  EXPECT_FALSE(T.val(T.zero(1), 0).has_value());
}

TEST(Tower, InverseAndFrobeniusGoldens) {
  // In F_2(t)[x]/(x^2 + x + t^-3): x (x + 1) = t^-3, so 1/x = t^3 (x + 1),
  // and frob(x) = x^2 = x + t^-3.
  FieldPtr F = Field::make_default(2, 1);
  ASTower T = simple_tower(F, "1 / t^3");
  const TowerElement x = T.x(1);
  const TowerElement xp1 = T.add(x, T.one(1));
  EXPECT_TRUE(T.eq(T.inv(x), T.mul(T.from_rat(R(*F, "t^3"), 1), xp1)));
  EXPECT_TRUE(T.eq(T.frob(x), T.add(x, T.from_rat(R(*F, "1 / t^3"), 1))));
}

TEST(Tower, ExpansionDefectGrid) {
  // v(pi_0^-m - pi_1^-mp) = (p-1) s - m p whenever p divides neither s nor
  // m: the two inverse uniformizer powers agree to exactly that depth.
  for (int p : {2, 3, 5}) {
    FieldPtr F = Field::make_default(p, 1);
    for (long s = 1; s <= 11; ++s) {
      if (s % p == 0) continue;
      ASTower T = simple_tower(F, "1 / t^" + std::to_string(s));
      for (long m = 1; m <= 7; ++m) {
        if (m % p == 0) continue;
        EXPECT_EQ(T.expansion_defect(0, 1, m).v, (p - 1) * s - m * p)
            << "p=" << p << " s=" << s << " m=" << m;
      }
    }
  }
}

TEST(Tower, DefectWitnessIsExact) {
  FieldPtr F = Field::make_default(2, 1);
  ASTower T = simple_tower(F, "1 / t^3");
  const DefectResult d = T.expansion_defect(0, 1, 1);
  EXPECT_EQ(d.v, 1);
  const TowerElement lhs = T.sub(T.pow(T.from_rat(R(*F, "t"), 1), -1),
                                 T.pow(T.uniformizer(0, 1), -2));
  EXPECT_TRUE(T.eq(d.witness, lhs));
  EXPECT_EQ(T.val(d.witness, 0), 1);
}

TEST(Tower, ExtendRejectsBadSlopes) {
  FieldPtr F = Field::make_default(2, 1);
  const Place P = place_finite(poly_t(*F));
  ASTower T(F, {P});
  // v = -2 divisible by p.
  EXPECT_THROW(T.extend(T.from_rat(R(*F, "1 / t^2"))), NotNegativePrimeToP);
  // v >= 0.
  EXPECT_THROW(T.extend(T.from_rat(R(*F, "t"))), NotNegativePrimeToP);
  // Degree cap p^N <= 125: three layers of F_5 hit it, a fourth must not fit.
  FieldPtr F5 = Field::make_default(5, 1);
  ASTower T5(F5, {place_finite(poly_t(*F5))});
  for (int k = 0; k < 3; ++k)
    T5 = T5.extend(T5.pow(T5.uniformizer(0, T5.levels()), -2));
  EXPECT_EQ(T5.degree(), 125);
  EXPECT_THROW(T5.extend(T5.pow(T5.uniformizer(0, 3), -2)), Error);
}

TEST(Tower, MultiPlaceTracking) {
  // One layer with poles at both tracked places; each gets its own slope
  // and uniformizer.
  FieldPtr F = Field::make_default(2, 1);
  const Place P0 = place_finite(poly_t(*F));
  const Place Pinf = place_inf(*F);
  ASTower T(F, {P0, Pinf});
  T = T.extend(T.from_rat(R(*F, "(t^6 + 1) / t^3")));
  EXPECT_EQ(T.tracked()[0].layers[0].s, 3);
  EXPECT_EQ(T.tracked()[1].layers[0].s, 3);
  EXPECT_EQ(T.val(T.uniformizer(0, 1), 0), 1);
  EXPECT_EQ(T.val(T.uniformizer(0, 1), 1), -7);  // pole over infinity
  EXPECT_EQ(T.val(T.uniformizer(1, 1), 1), 1);
}

TEST(Tower, ArithmeticLaws) {
  std::mt19937_64 rng(20250825);
  for (int p : {2, 3}) {
    FieldPtr F = Field::make_default(p, 1);
    ASTower T = simple_tower(F, "1 / t^" + std::to_string(p + 1));
    T = T.extend(T.pow(T.uniformizer(0, 1), -(p + 1)));

    auto rnd = [&]() {
      TowerElement e = T.zero(2);
      std::uniform_int_distribution<int> dc(0, F->q() - 1);
      std::uniform_int_distribution<int> dd(0, 2);
      for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) {
          Rat c = rat_zero(*F);
          for (int d = -1; d <= dd(rng); ++d)
            c = c + rat_of_fq(Fq{F.get(), static_cast<uint16_t>(dc(rng))}) *
                        rat_pow(rat_of_poly(poly_t(*F)), d);
          e.kids[i].kids[j].base = c;
        }
      return e;
    };

    for (int n = 0; n < 60; ++n) {
      const TowerElement a = rnd(), b = rnd();
      // Frobenius is the p-power ring endomorphism.
      EXPECT_TRUE(T.eq(T.frob(T.mul(a, b)), T.mul(T.frob(a), T.frob(b))));
      EXPECT_TRUE(T.eq(T.frob(T.add(a, b)), T.add(T.frob(a), T.frob(b))));
      EXPECT_TRUE(T.eq(T.frob(a), T.pow(a, p)));
      // Valuation: additive on products, ultrametric on sums.
      const auto va = T.val(a, 0), vb = T.val(b, 0);
      if (va && vb) {
        EXPECT_EQ(*T.val(T.mul(a, b), 0), *va + *vb);
        const auto vs = T.val(T.add(a, b), 0);
        if (vs) EXPECT_GE(*vs, std::min(*va, *vb));
        if (*va != *vb) EXPECT_EQ(*T.val(T.add(a, b), 0),
                                  std::min(*va, *vb));
        // Inverse.
        EXPECT_TRUE(T.eq(T.mul(a, T.inv(a)), T.one(2)));
      }
    }
  }
}

TEST(Tower, ElementTextRoundTrip) {
  FieldPtr F = Field::make_default(2, 1);
  ASTower T = simple_tower(F, "1 / t^3");
  T = T.extend(T.pow(T.uniformizer(0, 1), -3));
  const TowerElement e = T.add(
      T.mul(T.x(2), T.add(T.x(1), T.from_rat(R(*F, "t / (t + 1)"), 1))),
      T.from_rat(R(*F, "1 / t^5"), 2));
  const std::string s = T.to_string(e);
  EXPECT_TRUE(T.eq(T.parse_element(2, s), e));
  EXPECT_EQ(T.to_string(T.parse_element(2, s)), s);
}

TEST(Tower, HigherLayerValuationsStayExact) {
  // Two layers over F_2: v is normalized so v(base uniformizer) = p^2 = 4.
  FieldPtr F = Field::make_default(2, 1);
  ASTower T = simple_tower(F, "1 / t^3");
  T = T.extend(T.pow(T.uniformizer(0, 1), -3));
  EXPECT_EQ(T.val(T.from_rat(R(*F, "t"), 2), 0), 4);
  EXPECT_EQ(T.val(T.uniformizer(0, 2), 0), 1);
  EXPECT_EQ(T.val(T.x(2), 0), -3);          // slope of layer 2 in pi_1
  EXPECT_EQ(T.val(T.lift(T.x(1), 2), 0), -6);  // doubled from level 1
}

}  // namespace
