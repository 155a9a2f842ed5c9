// Normal forms in K/(O_P + K^{p^N}): witnessed decompositions, the
// extendability criterion, slope selection, and the group/vector-space laws
// of the class map.

#include <gtest/gtest.h>

#include <random>

#include "asdescent/qclass.hpp"

using namespace asdescent;

namespace {

Rat R(const Field& F, const std::string& s) { return parse_rat(F, s); }

Rat rebuild(const NormalForm& nf, const Place& P, int N) {
  Rat w = nf.w;
  for (int i = 0; i < N; ++i) w = rat_frob(w);
  Rat back = nf.u + w;
  for (const QTerm& t : nf.cls.terms)
    back = back + rat_of_fq(t.c) * rat_pow(place_uniformizer(P), t.n);
  return back;
}

TEST(QClass, WorkedDecomposition) {
  // a = t^2 + 1 + t^-2 + t^-3 over F_2 at P = (t): the t^-2 part is the
  // square of t^-1, the t^-3 term survives with exponent prime to 2.
  FieldPtr F = Field::make_default(2, 1);
  const Place P = place_finite(poly_t(*F));
  const Rat a = R(*F, "(t^5 + t^3 + t + 1) / t^3");
  ASSERT_TRUE(a == R(*F, "t^2") + R(*F, "1") + R(*F, "1 / t^2") +
                       R(*F, "1 / t^3"));
  const NormalForm nf = normal_form(a, P);
  ASSERT_EQ(nf.cls.terms.size(), 1u);
  EXPECT_EQ(nf.cls.terms[0].n, -3);
  EXPECT_EQ(nf.cls.terms[0].c.v, F->one_idx());
  EXPECT_TRUE(nf.w == R(*F, "1 / t"));
  EXPECT_TRUE(nf.u == R(*F, "t^2 + 1"));
  EXPECT_TRUE(rebuild(nf, P, 1) == a);
}

TEST(QClass, IntegralElementIsTrivial) {
  FieldPtr F = Field::make_default(2, 1);
  const Place P = place_finite(poly_t(*F));
  EXPECT_TRUE(normal_form(R(*F, "t^5"), P).cls.is_extendable());
  EXPECT_TRUE(is_extendable(R(*F, "1 / (t + 1)"), P));
}

TEST(QClass, HigherTorsionStripsDeeper) {
  // t^-4 = (t^-1)^4 is a p^2-th power over F_2: trivial for N = 2 with
  // witness w = t^-1, but its normal form for N = 1 is also empty (4 is
  // divisible by p), while t^-2 survives for N = 2 (2 is not divisible by
  // p^2).
  FieldPtr F = Field::make_default(2, 1);
  const Place P = place_finite(poly_t(*F));
  const NormalForm n4 = normal_form(R(*F, "1 / t^4"), P, 2);
  EXPECT_TRUE(n4.cls.is_extendable());
  EXPECT_TRUE(n4.w == R(*F, "1 / t"));
  EXPECT_TRUE(is_extendable(R(*F, "1 / t^4"), P, 1));
  EXPECT_FALSE(is_extendable(R(*F, "1 / t^2"), P, 2));
  EXPECT_TRUE(is_extendable(R(*F, "1 / t^2"), P, 1));
}

TEST(QClass, ExtendabilityGoldens) {
  FieldPtr F = Field::make_default(2, 1);
  const Place P = place_finite(poly_t(*F));
  EXPECT_TRUE(is_extendable(R(*F, "1 / t^2"), P));
  EXPECT_FALSE(is_extendable(R(*F, "1 / t"), P));
  EXPECT_FALSE(is_extendable(R(*F, "1 / t^3"), P));
}

TEST(QClass, ChooseSlope) {
  // Least s >= 1 with p not dividing s and (p-1) s > m p.
  EXPECT_EQ(choose_s(2, 1), 3);
  EXPECT_EQ(choose_s(2, 3), 7);
  EXPECT_EQ(choose_s(2, 5), 11);
  EXPECT_EQ(choose_s(3, 1), 2);
  EXPECT_EQ(choose_s(3, 2), 4);
  EXPECT_EQ(choose_s(5, 1), 2);
  for (int p : {2, 3, 5, 7})
    for (long m = 1; m <= 9; ++m) {
      const long s = choose_s(p, m);
      EXPECT_NE(s % p, 0);
      EXPECT_GT((p - 1) * s, m * p);
      // Minimality: nothing smaller qualifies.
      for (long s2 = 1; s2 < s; ++s2)
        EXPECT_FALSE(s2 % p != 0 && (p - 1) * s2 > m * p);
    }
}

TEST(QClass, RejectsHigherDegreePlaces) {
  FieldPtr F = Field::make_default(2, 1);
  const Place P = place_finite(parse_poly(*F, "t^2 + t + 1"));
  EXPECT_THROW(normal_form(R(*F, "1 / t"), P), UnsupportedPlaceDegree);
}

TEST(QClass, RandomizedWitnessIdentity) {
  std::mt19937_64 rng(20250825);
  for (int p : {2, 3}) {
    FieldPtr F = Field::make_default(p, 1);
    for (const Place& P : {place_finite(poly_t(*F)), place_inf(*F)}) {
      std::uniform_int_distribution<int> dc(0, p - 1);
      std::uniform_int_distribution<int> de(1, 7);
      std::uniform_int_distribution<int> dn(1, 2);
      for (int n = 0; n < 250; ++n) {
        Rat a = rat_zero(*F);
        for (int k = 0; k < 4; ++k)
          a = a + rat_of_fq(Fq{F.get(), static_cast<uint16_t>(dc(rng))}) *
                      rat_pow(place_uniformizer(P), -de(rng));
        a = a + R(*F, "t");
        const int N = dn(rng);
        const NormalForm nf = normal_form(a, P, N);
        EXPECT_TRUE(rebuild(nf, P, N) == a);
        const auto vu = valuation(nf.u, P);
        EXPECT_TRUE(!vu || *vu >= 0);
        long pN = 1;
        for (int i = 0; i < N; ++i) pN *= p;
        long last = 0;
        for (const QTerm& t : nf.cls.terms) {
          EXPECT_LT(t.n, 0);
          EXPECT_NE(t.n % pN, 0);
          EXPECT_FALSE(t.c.is_zero());
          if (last != 0) EXPECT_LT(t.n, last);  // strictly decreasing
          last = t.n;
        }
      }
    }
  }
}

TEST(QClass, ClassMapIsAdditiveAndLinear) {
  std::mt19937_64 rng(42);
  for (int p : {2, 3}) {
    FieldPtr F = Field::make_default(p, 1);
    const Place P = place_finite(poly_t(*F));
    std::uniform_int_distribution<int> dc(0, p - 1);
    std::uniform_int_distribution<int> de(1, 6);
    auto rnd = [&]() {
      Rat a = rat_zero(*F);
      for (int k = 0; k < 3; ++k)
        a = a + rat_of_fq(Fq{F.get(), static_cast<uint16_t>(dc(rng))}) *
                    rat_pow(place_uniformizer(P), -de(rng));
      return a;
    };
    for (int n = 0; n < 250; ++n) {
      const Rat a = rnd(), b = rnd();
      // Additivity: termwise sum of classes, zero coefficients dropped.
      const auto ta = normal_form(a, P).cls.terms;
      const auto tb = normal_form(b, P).cls.terms;
      const auto ts = normal_form(a + b, P).cls.terms;
      std::vector<QTerm> expect = ta;
      for (const QTerm& t : tb) {
        bool merged = false;
        for (auto& u : expect)
          if (u.n == t.n) {
            u.c = u.c + t.c;
            merged = true;
          }
        if (!merged) expect.push_back(t);
      }
      std::vector<QTerm> nz;
      for (const QTerm& t : expect)
        if (!t.c.is_zero()) nz.push_back(t);
      std::sort(nz.begin(), nz.end(),
                [](const QTerm& x, const QTerm& y) { return x.n > y.n; });
      ASSERT_EQ(nz.size(), ts.size());
      for (size_t i = 0; i < nz.size(); ++i) {
        EXPECT_EQ(nz[i].n, ts[i].n);
        EXPECT_TRUE(nz[i].c == ts[i].c);
      }
      // Scaling by a nonzero constant preserves extendability and support.
      for (int c = 1; c < p; ++c) {
        const Rat ca = rat_of_fq(Fq{F.get(), F->of_int(c)}) * a;
        EXPECT_EQ(is_extendable(ca, P), is_extendable(a, P));
        const auto tc = normal_form(ca, P).cls.terms;
        ASSERT_EQ(tc.size(), ta.size());
        for (size_t i = 0; i < tc.size(); ++i) EXPECT_EQ(tc[i].n, ta[i].n);
      }
    }
  }
}

}  // namespace
