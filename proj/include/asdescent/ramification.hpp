#pragma once

// Splitting behaviour of the degree-p cover y^p - y = f above one place:
// mod-wp reduction at the place and the exact trichotomy
// split / inert / totally ramified, with the global-triviality override.

#include <optional>
#include <string>

#include "errors.hpp"
#include "wp.hpp"

namespace asdescent {

enum class RamCase { Split, Inert, TotallyRamified, Trivial };

inline std::string ram_case_name(RamCase c) {
  switch (c) {
    case RamCase::Split: return "split";
    case RamCase::Inert: return "inert";
    case RamCase::TotallyRamified: return "totally_ramified";
    case RamCase::Trivial: return "trivial";
  }
  return "?";
}

struct AsReduceResult {
  Rat reduced;  // f + wp(witness); negative valuation (if any) prime to p
  Rat witness;
};

// Removes p-divisible pole orders of f at P by subtracting wp-images of
// leading-term roots.  Returns f' = f + wp(g) with v_P(f') either >= 0 or
// negative and prime to p.
inline AsReduceResult as_reduce(const Rat& f, const Place& P) {
  const Field& F = *f.field();
  const int p = F.p();
  auto ctx = residue_ctx(P);
  const Rat u = place_uniformizer(P);
  Rat cur = f;
  Rat g = rat_zero(F);
  while (!cur.is_zero()) {
    const long v = valuation_nz(cur, P);
    if (v >= 0 || v % p != 0) break;
    const Fq cv = residue(*ctx, cur * rat_pow(u, -v));
    const Rat h =
        rat_of_poly(residue_lift(*ctx, cv.pth_root())) * rat_pow(u, v / p);
    cur = cur - wp_of(h);
    g = g - h;
  }
  if (cur != f + wp_of(g))
    throw Error("internal: as_reduce witness verification failed");
  return {cur, g};
}

struct RamificationReport {
  RamCase cls;
  int e, f, g;                      // e * f * g = p
  Rat reduced;                      // representative after as_reduce
  Rat reduce_witness;               // reduced = input + wp(reduce_witness)
  long v;                           // v_P(reduced); 0 for the zero class
  std::optional<Rat> global_witness;  // wp-preimage when cls == Trivial
};

// Classifies the place P in the cover y^p - y = f.
// Errors: UnreducedInput when v_P(f) < 0 is divisible by p.
inline RamificationReport classify_ramification(const Rat& f, const Place& P) {
  const Field& F = *f.field();
  const int p = F.p();

  if (!f.is_zero()) {
    const long v0 = valuation_nz(f, P);
    if (v0 < 0 && v0 % p == 0) throw UnreducedInput();
  }

  RamificationReport rep{RamCase::Split, 1, 1, p,
                         f, rat_zero(F), 0, std::nullopt};

  // Global triviality overrides the local picture.
  if (auto w = wp_preimage(f)) {
    rep.cls = RamCase::Trivial;
    rep.e = rep.f = 1;
    rep.g = p;
    rep.global_witness = w;
    if (!f.is_zero()) rep.v = valuation_nz(f, P);
    return rep;
  }

  if (f.is_zero()) {  // wp_preimage(0) = 0 always exists, handled above
    throw Error("internal: zero class must be trivial");
  }

  const long v = valuation_nz(f, P);
  rep.v = v;
  if (v < 0) {
    rep.cls = RamCase::TotallyRamified;
    rep.e = p;
    rep.f = rep.g = 1;
    return rep;
  }
  if (v > 0) {
    rep.cls = RamCase::Split;  // unique wp-root with positive valuation
    rep.e = rep.f = 1;
    rep.g = p;
    return rep;
  }
  // v == 0: the class is decided by the residue.
  auto ctx = residue_ctx(P);
  const Fq fbar = residue(*ctx, f);
  if (wp_root_in_field(fbar)) {
    rep.cls = RamCase::Split;  // lift the residue root and Hensel takes over
    rep.e = rep.f = 1;
    rep.g = p;
  } else {
    rep.cls = RamCase::Inert;
    rep.e = 1;
    rep.f = p;
    rep.g = 1;
  }
  return rep;
}

}  // namespace asdescent
