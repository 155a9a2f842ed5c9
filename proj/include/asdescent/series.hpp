#pragma once

// Truncated Laurent expansions at a place, with exact residue-field
// coefficients.  A Series knows its coefficients from `start` up to (not
// including) `prec`; everything at exponent >= prec is unknown.

#include <algorithm>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"
#include "place.hpp"

namespace asdescent {

using ResidueCtxPtr = std::shared_ptr<const ResidueCtx>;

inline ResidueCtxPtr residue_ctx(const Place& P) {
  return std::make_shared<const ResidueCtx>(make_residue_ctx(P));
}

struct Series {
  ResidueCtxPtr ctx;
  long start = 0;             // exponent of c[0]
  std::vector<uint16_t> c;    // residue-field element indices
  long prec = 0;              // exact modulo exponents >= prec

  const Field& E() const { return *ctx->E; }

  void normalize() {
    size_t lead = 0;
    while (lead < c.size() && c[lead] == 0) ++lead;
    if (lead) {
      c.erase(c.begin(), c.begin() + lead);
      start += static_cast<long>(lead);
    }
    while (!c.empty() && start + static_cast<long>(c.size()) > prec)
      c.pop_back();
    while (!c.empty() && c.back() == 0) c.pop_back();
    if (c.empty()) start = prec;
  }

  // Valuation if a nonzero coefficient is known; nullopt means the series
  // is zero to its precision.
  std::optional<long> val() const {
    if (c.empty()) return std::nullopt;
    return start;
  }

  Fq coeff(long e) const {
    if (e < start || e >= start + static_cast<long>(c.size()))
      return fq_zero(E());
    return {&E(), c[e - start]};
  }
};

inline Series series_zero(const ResidueCtxPtr& ctx, long prec) {
  return {ctx, prec, {}, prec};
}

inline Series series_const(const ResidueCtxPtr& ctx, const Fq& a, long prec) {
  Series s{ctx, 0, {}, prec};
  if (!a.is_zero() && prec > 0) s.c.push_back(a.v);
  s.normalize();
  return s;
}

// Single term a * u^e.
inline Series series_term(const ResidueCtxPtr& ctx, const Fq& a, long e,
                          long prec) {
  Series s{ctx, e, {}, prec};
  if (!a.is_zero() && e < prec) s.c.push_back(a.v);
  s.normalize();
  return s;
}

inline void check_same(const Series& a, const Series& b) {
  if (!a.ctx->E->same(*b.ctx->E)) throw FieldMismatch();
}

inline Series operator+(const Series& a, const Series& b) {
  check_same(a, b);
  const long prec = std::min(a.prec, b.prec);
  const long lo = std::min(a.start, b.start);
  Series r{a.ctx, lo, {}, prec};
  if (lo < prec) {
    r.c.assign(prec - lo, 0);
    const Field& E = r.E();
    for (long e = lo; e < prec; ++e)
      r.c[e - lo] = E.add(a.coeff(e).v, b.coeff(e).v);
  }
  r.normalize();
  return r;
}

inline Series operator-(const Series& a) {
  Series r = a;
  for (auto& x : r.c) x = r.E().neg(x);
  return r;
}

inline Series operator-(const Series& a, const Series& b) { return a + (-b); }

inline Series operator*(const Series& a, const Series& b) {
  check_same(a, b);
  const long va = a.c.empty() ? a.prec : a.start;
  const long vb = b.c.empty() ? b.prec : b.start;
  const long prec = std::min(a.prec + vb, b.prec + va);
  Series r{a.ctx, va + vb, {}, prec};
  if (!a.c.empty() && !b.c.empty() && r.start < prec) {
    r.c.assign(prec - r.start, 0);
    const Field& E = r.E();
    for (size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i] == 0) continue;
      for (size_t j = 0; j < b.c.size(); ++j) {
        const long e = a.start + static_cast<long>(i) + b.start +
                       static_cast<long>(j);
        if (e >= prec) break;
        r.c[e - r.start] = E.add(r.c[e - r.start], E.mul(a.c[i], b.c[j]));
      }
    }
  }
  r.normalize();
  return r;
}

// Multiplicative inverse; requires a nonzero known coefficient.
inline Series series_inv(const Series& a) {
  if (a.c.empty()) throw DivisionByZero();
  const Field& E = a.E();
  const long n = a.prec - a.start;  // number of known unit coefficients
  std::vector<uint16_t> u(a.c);
  u.resize(n, 0);
  std::vector<uint16_t> s(n, 0);
  const uint16_t u0i = E.inv(u[0]);
  s[0] = u0i;
  for (long m = 1; m < n; ++m) {
    uint16_t acc = 0;
    for (long j = 1; j <= m; ++j)
      acc = E.add(acc, E.mul(u[j], s[m - j]));
    s[m] = E.neg(E.mul(u0i, acc));
  }
  Series r{a.ctx, -a.start, std::move(s), -a.start + n};
  r.normalize();
  return r;
}

// Exact p-th power: Frobenius on coefficients, exponents times p.  The
// precision improves to p * prec.
inline Series series_frob(const Series& a) {
  const Field& E = a.E();
  const int p = E.p();
  Series r{a.ctx, a.start * p, {}, a.prec * p};
  if (!a.c.empty()) {
    r.c.assign((a.c.size() - 1) * p + 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i)
      r.c[i * p] = E.frob(a.c[i]);
  }
  r.normalize();
  return r;
}

inline Series series_pow(const Series& a, long e) {
  if (e < 0) return series_pow(series_inv(a), -e);
  Series r = series_const(a.ctx, fq_one(a.E()),
                          a.prec + (a.c.empty() ? a.prec : a.start) * e);
  Series base = a;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

// s-th root of a unit expansion by Newton iteration.
// Errors: NotAUnit (valuation is not zero), PNotCoprime (p | s),
// NoResidueRoot (the leading coefficient has no s-th root downstairs).
inline Series hensel_sth_root(const Series& a, long s) {
  if (a.c.empty() || a.start != 0) throw NotAUnit();
  const Field& E = a.E();
  if (s <= 0) throw Error("root exponent must be positive");
  if (s % E.p() == 0) throw PNotCoprime();
  const Fq c0{&E, a.c[0]};
  const auto r0 = sth_root(c0, s);
  if (!r0) throw NoResidueRoot();
  Series r = series_const(a.ctx, *r0, a.prec);
  const Fq sinv = fq_of_int(E, s).inv();
  const Series sinv_series = series_const(a.ctx, sinv, a.prec);
  long iters = 1;
  for (long gain = 1; gain < a.prec; gain *= 2) ++iters;
  for (long it = 0; it < iters + 1; ++it) {
    // r <- r - (r^s - a) / (s r^{s-1})
    const Series rs1 = series_pow(r, s - 1);
    const Series err = rs1 * r - a;
    r = r - sinv_series * err * series_inv(rs1);
  }
  return r;
}

// Solves T^p - T = a for a with positive valuation (unique root with
// positive valuation); used as the split-case oracle.
inline Series wp_root_series(const Series& a) {
  const Field& E = a.E();
  if (!a.c.empty() && a.start <= 0)
    throw Error("wp_root_series needs positive valuation");
  Series t = series_zero(a.ctx, a.prec);
  long iters = 1;
  long reach = 1;
  while (reach < a.prec) {
    reach *= E.p();
    ++iters;
  }
  for (long it = 0; it < iters + 1; ++it) {
    Series err = series_frob(t) - t - a;
    err.prec = std::min(err.prec, a.prec);
    err.normalize();
    t = t + err;
    t.prec = std::min(t.prec, a.prec);
    t.normalize();
  }
  return t;
}

// Expands f at P with the canonical uniformizer, exact up to exponent B.
// Errors: PrecisionNotPositiveOverValuation when f != 0 and B <= v_P(f).
inline Series local_expand(const Rat& f, const ResidueCtxPtr& ctx, long B) {
  const Place& P = ctx->P;
  if (f.is_zero()) return series_zero(ctx, B);
  const long v0 = valuation_nz(f, P);
  if (B <= v0) throw PrecisionNotPositiveOverValuation();
  const Rat u = place_uniformizer(P);
  Series out{ctx, v0, {}, B};
  out.c.assign(B - v0, 0);
  Rat z = f;
  while (!z.is_zero()) {
    const long v = valuation_nz(z, P);
    if (v >= B) break;
    const Fq cv = residue(*ctx, z * rat_pow(u, -v));
    out.c[v - v0] = cv.v;
    z = z - rat_of_poly(residue_lift(*ctx, cv)) * rat_pow(u, v);
  }
  out.normalize();
  return out;
}

inline Series local_expand(const Rat& f, const Place& P, long B) {
  return local_expand(f, residue_ctx(P), B);
}

// Sums the known terms back into an exact rational function.
inline Rat resum(const Series& a) {
  const Field& F = *a.ctx->P.F;
  const Rat u = place_uniformizer(a.ctx->P);
  Rat acc = rat_zero(F);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    const Fq cv{&a.E(), a.c[i]};
    acc = acc + rat_of_poly(residue_lift(*a.ctx, cv)) *
                    rat_pow(u, a.start + static_cast<long>(i));
  }
  return acc;
}

// --- text form -------------------------------------------------------------
// Terms ascend in exponent; a term prints as "c*<u>^e" where <u> is the
// canonical uniformizer of the place ("t", "(t - c)", "(irr)", and powers of
// 1/t at infinity print as negative powers of t).

namespace detail {

inline std::string unif_power_string(const Place& P, long e) {
  std::string base;
  if (P.is_inf) {
    e = -e;  // (1/t)^e = t^(-e)
    base = "t";
  } else if (P.degree() == 1 && P.pi.c[0] == 0) {
    base = "t";
  } else {
    base = "(" + poly_to_string(P.pi) + ")";
  }
  if (e == 0) return "";
  if (e == 1) return base;
  return base + "^" + std::to_string(e);
}

}  // namespace detail

inline std::string series_to_string(const Series& a) {
  std::string s;
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    if (!s.empty()) s += " + ";
    const long e = a.start + static_cast<long>(i);
    const Fq cv{&a.E(), a.c[i]};
    const std::string up = detail::unif_power_string(a.ctx->P, e);
    if (up.empty()) {
      s += fq_to_string(cv);
    } else if (cv.is_one()) {
      s += up;
    } else {
      s += fq_to_string(cv) + "*" + up;
    }
  }
  if (s.empty()) s = "0";
  return s + " + O(" + detail::unif_power_string(a.ctx->P, a.prec) + ")";
}

}  // namespace asdescent
