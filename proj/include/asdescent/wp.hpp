#pragma once

// Global preimage under the additive map wp(x) = x^p - x on F_q(t):
// strips each pole (finite places first, then infinity) by exact p-th roots
// of leading coefficients, then solves the leftover constant by enumeration.

#include <optional>

#include "approx.hpp"
#include "errors.hpp"
#include "series.hpp"

namespace asdescent {

inline Rat wp_of(const Rat& g) { return rat_frob(g) - g; }

// Least-pole-stripping preimage: returns g with g^p - g = f, or nullopt when
// no global preimage exists.  Exactness: the final identity is checked.
inline std::optional<Rat> wp_preimage(const Rat& f) {
  const Field& F = *f.field();
  const int p = F.p();
  Rat g = rat_zero(F);
  Rat work = f;

  // Finite poles.
  if (!work.is_zero()) {
    for (const auto& fac : poly_factor(work.den)) {
      const Place P = place_finite(fac.irr);
      auto ctx = residue_ctx(P);
      const Rat u = place_uniformizer(P);
      while (!work.is_zero()) {
        const long v = valuation_nz(work, P);
        if (v >= 0) break;
        if (v % p != 0) return std::nullopt;
        const Fq cv = residue(*ctx, work * rat_pow(u, -v));
        const Rat h =
            rat_of_poly(residue_lift(*ctx, cv.pth_root())) * rat_pow(u, v / p);
        g = g + h;
        work = work - wp_of(h);
      }
    }
  }

  // Pole at infinity (polynomial part).
  {
    const Place inf = place_inf(F);
    auto ctx = residue_ctx(inf);
    while (!work.is_zero()) {
      const long v = valuation_nz(work, inf);
      if (v >= 0) break;
      if (v % p != 0) return std::nullopt;
      const Fq cv = residue(*ctx, work * rat_pow(rat_t(F), v));
      const Rat h = rat_of_fq(cv.pth_root()) * rat_pow(rat_t(F), -v / p);
      g = g + h;
      work = work - wp_of(h);
    }
  }

  // No poles anywhere: the remainder is a constant.
  if (!work.is_zero() && (work.den.deg() != 0 || work.num.deg() != 0))
    throw Error("internal: pole stripping left a non-constant");
  const Fq c0 = work.is_zero() ? fq_zero(F) : work.num.coeff(0) / work.den.coeff(0);
  const auto root = wp_root_in_field(c0);
  if (!root) return std::nullopt;
  g = g + rat_of_fq(*root);
  if (wp_of(g) != f) throw Error("internal: wp-preimage verification failed");
  return g;
}

}  // namespace asdescent
