#pragma once

// Weak-approximation toolbox: polar parts at degree-1 places, simultaneous
// congruence witnesses (CRT on F_q[t] plus corrections at infinity), and
// constructors for functions with prescribed valuations or polar divisors.
// Every returned witness is verified exactly before it leaves.

#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "series.hpp"

namespace asdescent {

struct PolarTerm {
  long e;  // exponent, e < 0
  Fq c;    // residue-field coefficient (base field at degree-1 places)
};

// Polar part of f at a degree-1 (or infinite) place, exponents ascending.
// Throws UnsupportedPlaceDegree on places of degree >= 2.
inline std::vector<PolarTerm> polar_part(const Rat& f, const ResidueCtxPtr& ctx) {
  if (ctx->P.degree() != 1) throw UnsupportedPlaceDegree();
  std::vector<PolarTerm> out;
  if (f.is_zero()) return out;
  if (valuation_nz(f, ctx->P) >= 0) return out;
  const Series s = local_expand(f, ctx, 0);
  for (size_t i = 0; i < s.c.size(); ++i)
    if (s.c[i] != 0)
      out.push_back({s.start + static_cast<long>(i), Fq{s.ctx->E, s.c[i]}});
  return out;
}

inline std::vector<PolarTerm> polar_part(const Rat& f, const Place& P) {
  return polar_part(f, residue_ctx(P));
}

struct ApproxTarget {
  Place P;
  Rat a;
};

namespace detail {

// Smallest monic irreducible (in poly_less order) distinct from every listed
// place polynomial; used as a dumping ground for auxiliary poles.
inline Poly spare_irreducible(const Field& F, const std::vector<Place>& used) {
  for (int d = 1;; ++d) {
    Poly found = poly_zero(F);
    enumerate_monic(F, d, [&](const Poly& m) {
      if (!poly_irreducible(m)) return true;
      for (const Place& P : used)
        if (!P.is_inf && P.pi == m) return true;
      found = m;
      return false;
    });
    if (!found.is_zero()) return found;
    if (d > 8) throw IrreduciblePolynomialNotFound();
  }
}

}  // namespace detail

// Returns f with v_{P_i}(f - a_i) > c for every target (P_i, a_i).
// Construction: truncate each a_i, recombine with CRT indicator polynomials,
// then walk the expansion at infinity down with corrections supported at a
// spare place; the result is verified exactly.
inline Rat approximate(const std::vector<ApproxTarget>& targets, long c) {
  if (targets.empty()) throw ZeroInput("no approximation targets");
  const Field& F = *targets[0].P.F;
  for (size_t i = 0; i < targets.size(); ++i)
    for (size_t j = i + 1; j < targets.size(); ++j)
      if (targets[i].P == targets[j].P)
        throw Error("approximation targets must be at distinct places");

  std::vector<const ApproxTarget*> fin;
  const ApproxTarget* at_inf = nullptr;
  for (const auto& t : targets) {
    if (t.P.is_inf)
      at_inf = &t;
    else
      fin.push_back(&t);
  }

  Rat f = rat_zero(F);
  long maxpole = 0;
  if (!fin.empty()) {
    // Truncations A_i of the finite targets at precision c + 1.
    std::vector<Rat> trunc;
    for (const auto* t : fin) {
      Rat A = rat_zero(F);
      if (!t->a.is_zero() && valuation_nz(t->a, t->P) <= c)
        A = resum(local_expand(t->a, t->P, c + 1));
      trunc.push_back(A);
      if (!A.is_zero()) maxpole = std::max(maxpole, -std::min(0L, valuation_nz(A, t->P)));
    }
    const long K = c + 1 + maxpole;
    Poly M = poly_one(F);
    std::vector<Poly> Mi;
    for (const auto* t : fin) {
      Mi.push_back(poly_pow(t->P.pi, K));
      M = M * Mi.back();
    }
    for (size_t i = 0; i < fin.size(); ++i) {
      if (trunc[i].is_zero()) continue;
      const Poly rest = M / Mi[i];
      const auto e = poly_egcd(rest, Mi[i]);
      if (e.g.deg() != 0)
        throw Error("internal: CRT moduli are not coprime");
      // indicator = rest * (rest^{-1} mod Mi), congruent to 1 mod Mi.
      const Poly indicator = rest * ((e.g.coeff(0).inv() * e.u) % Mi[i]);
      f = f + trunc[i] * rat_of_poly(indicator);
    }
  }

  if (at_inf) {
    // Corrections u = cv * t^a * M / spare^n: they vanish mod every pi_i^K
    // and realize any required valuation at infinity.
    const long K = c + 1 + maxpole;
    Poly M = poly_one(F);
    long degM = 0;
    for (const auto* t : fin) {
      M = M * poly_pow(t->P.pi, K);
    }
    degM = M.deg();
    std::vector<Place> used;
    for (const auto& t : targets) used.push_back(t.P);
    const Poly spare = fin.empty() ? poly_zero(F)
                                   : detail::spare_irreducible(F, used);
    const Place inf = place_inf(F);
    auto infctx = residue_ctx(inf);
    Rat delta = at_inf->a - f;
    int guard = 0;
    while (!delta.is_zero() && valuation_nz(delta, inf) <= c) {
      if (++guard > 4096) throw Error("internal: correction loop diverged");
      const long v = valuation_nz(delta, inf);
      const Fq cv = residue(*infctx, delta * rat_pow(rat_t(F), v));
      Rat u;
      if (fin.empty()) {
        // No finite constraints: plain powers of t (poles at 0/inf only).
        u = rat_of_fq(cv) * rat_pow(rat_t(F), -v);
      } else {
        const long ds = spare.deg();
        long n = 0;
        while (n * ds < v + degM) ++n;
        const long a = n * ds - degM - v;
        u = rat_of_fq(cv) * rat_of_poly(poly_shift(M, static_cast<int>(a))) /
            rat_of_poly(poly_pow(spare, n));
      }
      f = f + u;
      delta = delta - u;
    }
  }

  // Exact verification of every congruence.
  for (const auto& t : targets) {
    const Rat d = f - t.a;
    if (!d.is_zero() && valuation_nz(d, t.P) <= c)
      throw Error("internal: approximation missed a target");
  }
  return f;
}

// f with v_{P_i}(f) = s_i exactly.  All places must have degree 1.
// For all-negative prescriptions the witness is the plain sum of uniformizer
// powers; the unique minimum makes the valuations exact by inspection.
inline Rat prescribe_valuations(const std::vector<Place>& places,
                                const std::vector<long>& s) {
  if (places.empty() || places.size() != s.size())
    throw Error("prescribe_valuations needs one exponent per place");
  const Field& F = *places[0].F;
  for (const Place& P : places)
    if (P.degree() != 1) throw UnsupportedPlaceDegree();
  for (size_t i = 0; i < places.size(); ++i)
    for (size_t j = i + 1; j < places.size(); ++j)
      if (places[i] == places[j]) throw Error("places must be distinct");

  Rat f = rat_zero(F);
  bool all_negative = true;
  for (long v : s) all_negative = all_negative && v < 0;
  if (all_negative) {
    for (size_t i = 0; i < places.size(); ++i)
      f = f + rat_pow(place_uniformizer(places[i]), s[i]);
  } else {
    std::vector<ApproxTarget> targets;
    long c = s[0];
    for (size_t i = 0; i < places.size(); ++i) {
      targets.push_back({places[i], rat_pow(place_uniformizer(places[i]), s[i])});
      c = std::max(c, s[i]);
    }
    f = approximate(targets, c);
  }
  for (size_t i = 0; i < places.size(); ++i)
    if (valuation(f, places[i]) != std::optional<long>(s[i]))
      throw Error("internal: prescribed valuation missed");
  return f;
}

// f whose polar divisor is exactly sum n_i P_i (n_i >= 1, degree-1 places).
inline Rat polar_divisor(const std::vector<Place>& points,
                         const std::vector<long>& n) {
  if (points.size() != n.size() || points.empty())
    throw Error("polar_divisor needs one multiplicity per point");
  for (long m : n)
    if (m < 1) throw Error("polar multiplicities must be positive");
  std::vector<long> s;
  s.reserve(n.size());
  for (long m : n) s.push_back(-m);
  return prescribe_valuations(points, s);
}

}  // namespace asdescent
