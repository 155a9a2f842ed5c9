#pragma once

// Normal form of a class a mod (regular functions + p^N-th powers) at a
// degree-1 place: split the polar part of a into exponents divisible by p^N
// (absorbed into a p^N-th power witness w) and the obstruction terms that
// survive.  The class extends across the local ring iff no terms survive.

#include <algorithm>
#include <vector>

#include "approx.hpp"

namespace asdescent {

struct QTerm {
  long n;  // polar exponent, n < 0 and not divisible by p^N
  Fq c;
};

struct QClass {
  Place P;
  int N = 1;
  std::vector<QTerm> terms;  // exponents strictly decreasing (-1 > -3 > ...)

  bool is_extendable() const { return terms.empty(); }
};

struct NormalForm {
  QClass cls;
  Rat u;  // regular part at P
  Rat w;  // a = u + w^{p^N} + sum of terms, checked exactly
};

inline NormalForm normal_form(const Rat& a, const Place& P, int N = 1) {
  if (N < 1) throw Error("torsion exponent must be positive");
  const Field& F = *a.field();
  const int p = F.p();
  long pN = 1;
  for (int i = 0; i < N; ++i) pN *= p;

  auto ctx = residue_ctx(P);
  const Rat uP = place_uniformizer(P);
  NormalForm nf{{P, N, {}}, rat_zero(F), rat_zero(F)};
  for (const PolarTerm& t : polar_part(a, ctx)) {
    if (t.e % pN == 0) {
      Fq root = t.c;
      for (int i = 0; i < N; ++i) root = root.pth_root();
      nf.w = nf.w + rat_of_fq(Fq{&F, root.v}) * rat_pow(uP, t.e / pN);
    } else {
      nf.cls.terms.push_back({t.e, t.c});
    }
  }
  std::sort(nf.cls.terms.begin(), nf.cls.terms.end(),
            [](const QTerm& x, const QTerm& y) { return x.n > y.n; });

  Rat wpN = nf.w;
  for (int i = 0; i < N; ++i) wpN = rat_frob(wpN);
  nf.u = a - wpN;
  for (const QTerm& t : nf.cls.terms)
    nf.u = nf.u - rat_of_fq(Fq{&F, t.c.v}) * rat_pow(uP, t.n);
  const auto vu = valuation(nf.u, P);
  if (vu && *vu < 0)
    throw Error("internal: normal form left a polar remainder");
  return nf;
}

// The class of a extends across O_P iff nothing survives the normal form:
// a surviving term c u^n with p^N not dividing n < 0 cannot be u + w^{p^N}
// because its valuation is prime to p^N while v(w^{p^N}) is divisible.
inline bool is_extendable(const Rat& a, const Place& P, int N = 1) {
  return normal_form(a, P, N).cls.is_extendable();
}

// Least layer slope for killing a pole of order m: the smallest s >= 1 with
// p not dividing s and (p-1) s > m p, so the expansion defect out-runs the
// pole being rewritten.
inline long choose_s(int p, long m) {
  for (long s = 1;; ++s) {
    if (s % p == 0) continue;
    if ((p - 1) * s > m * p) return s;
  }
}

}  // namespace asdescent
