#pragma once

// Closed points of the projective line over F_q: finite places given by a
// monic irreducible of F_q[t], plus the place at infinity whose canonical
// uniformizer is 1/t.  Degree-d places carry a residue-field context that
// realizes F_q[t]/(pi) inside F_{q^d}, with an exact lift back.

#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "rational.hpp"

namespace asdescent {

struct Place {
  const Field* F = nullptr;
  bool is_inf = false;
  Poly pi;  // finite places only: monic irreducible

  int degree() const { return is_inf ? 1 : pi.deg(); }
};

inline Place place_inf(const Field& F) { return {&F, true, poly_zero(F)}; }

inline Place place_finite(const Poly& pi) {
  if (pi.deg() < 1 || !pi.lc().is_one() || !poly_irreducible(pi))
    throw Error("a finite place needs a monic irreducible polynomial");
  return {pi.F, false, pi};
}

// The place t - c.
inline Place place_rational(const Fq& c) {
  return place_finite(poly_t(*c.F) - poly_const(c));
}

inline bool operator==(const Place& a, const Place& b) {
  if (!a.F->same(*b.F)) throw FieldMismatch();
  if (a.is_inf != b.is_inf) return false;
  return a.is_inf || a.pi == b.pi;
}
inline bool operator!=(const Place& a, const Place& b) { return !(a == b); }

// Deterministic order: finite places first (by poly_less), infinity last.
inline bool place_less(const Place& a, const Place& b) {
  if (a.is_inf != b.is_inf) return b.is_inf;
  if (a.is_inf) return false;
  return poly_less(a.pi, b.pi);
}

// Canonical uniformizer as a rational function: pi, or 1/t at infinity.
inline Rat place_uniformizer(const Place& P) {
  if (P.is_inf) return rat_make(poly_one(*P.F), poly_t(*P.F));
  return rat_of_poly(P.pi);
}

// v_P(f); nullopt encodes +infinity (f = 0).
inline std::optional<long> valuation(const Rat& f, const Place& P) {
  if (f.is_zero()) return std::nullopt;
  if (P.is_inf) return static_cast<long>(f.den.deg()) - f.num.deg();
  return poly_ord(f.num, P.pi) - poly_ord(f.den, P.pi);
}

// v_P(f) for f known to be nonzero.
inline long valuation_nz(const Rat& f, const Place& P) {
  const auto v = valuation(f, P);
  if (!v) throw ZeroInput("valuation of zero");
  return *v;
}

// Residue-field context.  For degree-1 and infinite places the residue field
// is the base field itself; for degree d >= 2 it is F_{q^d} (capped at 343).
struct ResidueCtx {
  Place P;
  FieldPtr owned;          // set only when an extension was built
  const Field* E;          // residue field
  std::vector<uint16_t> embed;  // base index -> E index
  uint16_t theta = 0;           // image of t (finite places)
  FpMat lift_mat;               // E coordinates -> base coeff vector, deg < d

  Fq embed_base(const Fq& a) const { return {E, embed[a.v]}; }
};

inline ResidueCtx make_residue_ctx(const Place& P) {
  const Field& F = *P.F;
  ResidueCtx ctx;
  ctx.P = P;
  const int d = P.degree();
  if (P.is_inf || d == 1) {
    ctx.E = &F;
    ctx.embed.resize(F.q());
    for (int a = 0; a < F.q(); ++a) ctx.embed[a] = static_cast<uint16_t>(a);
    if (!P.is_inf) ctx.theta = F.neg(P.pi.c[0]);  // root of t - c
    return ctx;
  }
  long qd = 1;
  for (int i = 0; i < d; ++i) {
    qd *= F.q();
    if (qd > 343)
      throw UnsupportedFieldSize("residue field exceeds the size cap");
  }
  ConstantsExtension ext = extend_constants(F, d);
  const Field& E = *ext.big;
  // theta: least root of pi in E.
  bool found = false;
  for (int x = 0; x < E.q() && !found; ++x) {
    uint16_t acc = 0, xp = 1;
    for (int i = 0; i <= P.pi.deg(); ++i) {
      acc = E.add(acc, E.mul(ext.embed_table[P.pi.c[i]], xp));
      xp = E.mul(xp, static_cast<uint16_t>(x));
    }
    if (acc == 0) {
      ctx.theta = static_cast<uint16_t>(x);
      found = true;
    }
  }
  if (!found) throw Error("internal: place polynomial has no root upstairs");
  ctx.owned = ext.big;
  ctx.E = ext.big.get();
  ctx.embed = std::move(ext.embed_table);
  // Lift matrix: F_p-coordinates of embed(g^j) * theta^i for the basis
  // g^j t^i (j < k, i < d) of F_q[t]/(pi).
  const int n = F.k() * d;
  FpMat m(n, FpVec(n, 0));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < F.k(); ++j) {
      const uint16_t gj = F.pow(F.gen_idx(), j);
      uint16_t val = E.mul(ctx.embed[gj], E.pow(ctx.theta, i));
      const auto coords = E.coeffs(val);
      const int col = i * F.k() + j;
      for (int r = 0; r < n; ++r) m[r][col] = coords[r];
    }
  }
  ctx.lift_mat = fp_invert(std::move(m), F.p());
  return ctx;
}

// Evaluates a polynomial at theta inside the residue field.
inline Fq residue_eval(const ResidueCtx& ctx, const Poly& a) {
  const Field& E = *ctx.E;
  uint16_t acc = 0;
  for (int i = a.deg(); i >= 0; --i)
    acc = E.add(E.mul(acc, ctx.theta), ctx.embed[a.c[i]]);
  return {&E, acc};
}

// Residue of f at P; requires v_P(f) >= 0 (returns 0 when v > 0).
inline Fq residue(const ResidueCtx& ctx, const Rat& f) {
  const Field& E = *ctx.E;
  if (f.is_zero()) return fq_zero(E);
  if (ctx.P.is_inf) {
    if (f.num.deg() > f.den.deg()) throw NotAUnit();
    if (f.num.deg() < f.den.deg()) return fq_zero(E);
    return f.num.lc() / f.den.lc();
  }
  const Fq dv = residue_eval(ctx, f.den);
  if (dv.is_zero()) {
    if (valuation_nz(f, ctx.P) >= 0)
      throw Error("internal: canonical form has a spurious denominator zero");
    throw NotAUnit();
  }
  return residue_eval(ctx, f.num) / dv;
}

// Lift: a polynomial (degree < d) whose residue is the given element; for
// degree-1 and infinite places this is the constant itself.
inline Poly residue_lift(const ResidueCtx& ctx, const Fq& a) {
  const Field& F = *ctx.P.F;
  if (ctx.P.is_inf || ctx.P.degree() == 1) return poly_const(Fq{&F, a.v});
  const Field& E = *ctx.E;
  const auto coords = E.coeffs(a.v);
  FpVec rhs(coords.begin(), coords.end());
  const int n = F.k() * ctx.P.degree();
  FpVec sol(n, 0);
  for (int r = 0; r < n; ++r) {
    int acc = 0;
    for (int ccol = 0; ccol < n; ++ccol)
      acc = (acc + ctx.lift_mat[r][ccol] * rhs[ccol]) % F.p();
    sol[r] = acc;
  }
  Poly out = poly_zero(F);
  for (int i = 0; i < ctx.P.degree(); ++i) {
    std::vector<int> cf(F.k());
    for (int j = 0; j < F.k(); ++j) cf[j] = sol[i * F.k() + j];
    out = out + poly_monomial(Fq{&F, F.from_coeffs(cf)}, i);
  }
  return out;
}

// --- text form -------------------------------------------------------------
// "t", "t - c", "irr:<monic irreducible>", or "inf".

inline std::string place_to_string(const Place& P) {
  if (P.is_inf) return "inf";
  if (P.degree() == 1) {
    const Fq c{P.F, P.F->neg(P.pi.c[0])};
    if (c.is_zero()) return "t";
    return "t - " + fq_to_string(c);
  }
  return "irr:" + poly_to_string(P.pi);
}

inline Place parse_place(const Field& F, const std::string& s) {
  size_t i = 0;
  detail::skip_ws(s, i);
  if (s.compare(i, 3, "inf") == 0) {
    i += 3;
    detail::skip_ws(s, i);
    if (i != s.size()) throw ParseError("trailing characters", i);
    return place_inf(F);
  }
  if (s.compare(i, 4, "irr:") == 0) {
    i += 4;
    Poly pi = parse_poly_at(F, s, i);
    detail::skip_ws(s, i);
    if (i != s.size()) throw ParseError("trailing characters", i);
    return place_finite(pi);
  }
  Poly pi = parse_poly_at(F, s, i);
  detail::skip_ws(s, i);
  if (i != s.size()) throw ParseError("trailing characters", i);
  return place_finite(pi);
}

}  // namespace asdescent
