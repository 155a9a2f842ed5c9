#pragma once

// Built-in invariant suites at reduced sample counts, callable from the CLI.
// Each suite re-derives a structural property from scratch and reports one
// named pass/fail check; the random seed comes from the caller so runs are
// reproducible.

#include <random>
#include <string>
#include <vector>

#include "brute.hpp"
#include "cover.hpp"

namespace asdescent {
namespace selftest {

using Rng = std::mt19937_64;

inline Fq random_fq(const Field& F, Rng& rng) {
  std::uniform_int_distribution<int> d(0, F.q() - 1);
  return Fq{&F, static_cast<uint16_t>(d(rng))};
}

inline Poly random_poly(const Field& F, int maxdeg, Rng& rng) {
  std::uniform_int_distribution<int> dd(0, maxdeg);
  const int deg = dd(rng);
  std::vector<Fq> cs;
  for (int i = 0; i <= deg; ++i) cs.push_back(random_fq(F, rng));
  return poly_from_coeffs(F, cs);
}

inline Poly random_poly_nonzero(const Field& F, int maxdeg, Rng& rng) {
  for (;;) {
    Poly a = random_poly(F, maxdeg, rng);
    if (!a.is_zero()) return a;
  }
}

inline Rat random_rat(const Field& F, int maxdeg, Rng& rng) {
  return rat_make(random_poly(F, maxdeg, rng),
                  random_poly_nonzero(F, maxdeg, rng));
}

inline Rat random_rat_nonzero(const Field& F, int maxdeg, Rng& rng) {
  for (;;) {
    Rat a = random_rat(F, maxdeg, rng);
    if (!a.is_zero()) return a;
  }
}

// frob and pth_root are mutually inverse bijections, exhaustively.
inline void check_field_roots(VerificationReport& rep) {
  bool ok = true;
  std::string detail;
  try {
    const std::vector<std::pair<int, int>> sizes = {{2, 1}, {2, 2}, {3, 1},
                                                    {3, 2}, {5, 1}, {7, 1}};
    for (const auto& [p, k] : sizes) {
      FieldPtr F = Field::make_default(p, k);
      for (int v = 0; v < F->q(); ++v) {
        const Fq a{F.get(), static_cast<uint16_t>(v)};
        if (!(a.frob().pth_root() == a) || !(a.pth_root().frob() == a))
          throw Error("pth_root does not invert frob over F_" +
                      std::to_string(F->q()));
      }
    }
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  rep.add("field arithmetic: pth_root inverts frob", ok, detail);
}

// Ultrametric inequality and the product formula on random rationals.
inline void check_valuations(VerificationReport& rep, Rng& rng, int samples) {
  bool ok = true;
  std::string detail;
  try {
    for (int p : {2, 3}) {
      FieldPtr F = Field::make_default(p, 1);
      const Place Pt = place_finite(poly_t(*F));
      const Place Pinf = place_inf(*F);
      for (int n = 0; n < samples; ++n) {
        const Rat f = random_rat_nonzero(*F, 4, rng);
        const Rat g = random_rat_nonzero(*F, 4, rng);
        for (const Place& P : {Pt, Pinf}) {
          const auto vf = valuation(f, P), vg = valuation(g, P);
          const auto vs = valuation(f + g, P);
          const long lo = std::min(*vf, *vg);
          if (vs && *vs < lo) throw Error("ultrametric inequality failed");
          if (*vf != *vg && (!vs || *vs != lo))
            throw Error("ultrametric equality failed");
        }
        long total = f.den.deg() - f.num.deg();  // valuation at infinity
        for (const PolyFactor& fac : poly_factor(f.num))
          total += static_cast<long>(fac.mult) * fac.irr.deg();
        for (const PolyFactor& fac : poly_factor(f.den))
          total -= static_cast<long>(fac.mult) * fac.irr.deg();
        if (total != 0) throw Error("product formula failed");
      }
    }
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  rep.add("valuations: ultrametric and product formula", ok, detail);
}

// wp_preimage recovers h from h^p - h exactly.
inline void check_wp(VerificationReport& rep, Rng& rng, int samples) {
  bool ok = true;
  std::string detail;
  try {
    for (int p : {2, 3}) {
      FieldPtr F = Field::make_default(p, 1);
      for (int n = 0; n < samples; ++n) {
        const Rat h = random_rat(*F, 3, rng);
        const Rat f = rat_frob(h) - h;
        const auto g = wp_preimage(f);
        if (!g) throw Error("wp_preimage missed a constructed preimage");
        if (!((rat_frob(*g) - *g) == f))
          throw Error("wp_preimage witness identity failed");
      }
    }
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  rep.add("wp_preimage: witness identity", ok, detail);
}

// Trichotomy shape e f g = p with exactly one factor p, after as_reduce.
inline void check_trichotomy(VerificationReport& rep, Rng& rng, int samples) {
  bool ok = true;
  std::string detail;
  try {
    for (int p : {2, 3}) {
      FieldPtr F = Field::make_default(p, 1);
      const Place Pt = place_finite(poly_t(*F));
      for (int n = 0; n < samples; ++n) {
        const Rat f0 = as_reduce(random_rat(*F, 3, rng), Pt).reduced;
        const RamificationReport r = classify_ramification(f0, Pt);
        if (r.cls == RamCase::Trivial && (r.e != 1 || r.f != 1 || r.g != p))
          throw Error("trivial case must split completely");
        if (r.e * r.f * r.g != p) throw Error("e f g != p");
        const int np = (r.e == p) + (r.f == p) + (r.g == p);
        if (np != 1) throw Error("not exactly one invariant equals p");
      }
    }
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  rep.add("ramification: trichotomy invariants", ok, detail);
}

// Defect identity v(pi_{k-1}^{-m} - pi_k^{-mp}) = (p-1)s - mp on a small
// grid.
inline void check_defect(VerificationReport& rep) {
  bool ok = true;
  std::string detail;
  try {
    for (int p : {2, 3}) {
      FieldPtr F = Field::make_default(p, 1);
      const Place Pt = place_finite(poly_t(*F));
      for (long s = 1; s <= 7; ++s) {
        if (s % p == 0) continue;
        ASTower T(F, {Pt});
        T = T.extend(T.from_rat(rat_inv(rat_pow(rat_of_poly(poly_t(*F)), s))));
        for (long m = 1; m <= 5; ++m) {
          if (m % p == 0) continue;
          if (T.expansion_defect(0, 1, m).v != (p - 1) * s - m * p)
            throw Error("defect identity failed at p=" + std::to_string(p) +
                        " s=" + std::to_string(s) + " m=" + std::to_string(m));
        }
      }
    }
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  rep.add("towers: uniformizer defect identity", ok, detail);
}

// Normal-form witness identity, additivity of the class map, and constant
// scaling preserving extendability.
inline void check_normal_form(VerificationReport& rep, Rng& rng,
                              int samples) {
  bool ok = true;
  std::string detail;
  try {
    for (int p : {2, 3}) {
      FieldPtr F = Field::make_default(p, 1);
      const Place Pt = place_finite(poly_t(*F));
      for (int n = 0; n < samples; ++n) {
        const Rat a = random_rat(*F, 3, rng);
        const Rat b = random_rat(*F, 3, rng);
        const NormalForm na = normal_form(a, Pt);
        Rat back = na.u + rat_frob(na.w);
        for (const QTerm& t : na.cls.terms)
          back = back + rat_of_fq(t.c) * rat_pow(place_uniformizer(Pt), t.n);
        if (!(back == a)) throw Error("normal-form witness identity failed");

        // Additivity: the terms of a+b equal the termwise sums.
        const NormalForm nb = normal_form(b, Pt);
        const NormalForm ns = normal_form(a + b, Pt);
        std::vector<QTerm> expect;
        for (const QTerm& t : na.cls.terms) expect.push_back(t);
        for (const QTerm& t : nb.cls.terms) {
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
        if (nz.size() != ns.cls.terms.size())
          throw Error("class map not additive");
        for (size_t i = 0; i < nz.size(); ++i)
          if (nz[i].n != ns.cls.terms[i].n ||
              !(nz[i].c == ns.cls.terms[i].c))
            throw Error("class map not additive");

        // Nonzero constant scaling preserves the exponent support.
        const Fq c = random_fq(*F, rng);
        if (!c.is_zero()) {
          const NormalForm nc = normal_form(rat_of_fq(c) * a, Pt);
          if (nc.cls.terms.size() != na.cls.terms.size())
            throw Error("constant scaling changed the class support");
          for (size_t i = 0; i < nc.cls.terms.size(); ++i)
            if (nc.cls.terms[i].n != na.cls.terms[i].n)
              throw Error("constant scaling changed the class support");
        }
      }
    }
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  rep.add("normal form: identity, additivity, scaling", ok, detail);
}

// Every produced certificate passes independent verification.
inline void check_killing(VerificationReport& rep, Rng& rng, int samples) {
  bool ok = true;
  std::string detail;
  try {
    for (int p : {2, 3}) {
      FieldPtr F = Field::make_default(p, 1);
      const Place Pt = place_finite(poly_t(*F));
      for (int n = 0; n < samples; ++n) {
        Rat a = random_rat(*F, 2, rng);
        std::uniform_int_distribution<int> de(1, 4);
        a = a + random_rat_nonzero(*F, 1, rng) *
                    rat_pow(place_uniformizer(Pt), -de(rng));
        const ExtensionCertificate cert = kill_class(F, a, Pt);
        const VerificationReport r = verify_certificate(cert);
        if (!r.pass) throw Error("fresh certificate failed verification");
      }
    }
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  rep.add("descent: certificates verify", ok, detail);
}

// A small cover builds and audits cleanly.
inline void check_cover(VerificationReport& rep) {
  bool ok = true;
  std::string detail;
  try {
    FieldPtr F = Field::make_default(2, 1);
    const Place P0 = place_finite(poly_t(*F));
    const Place P1 = place_finite(poly_t(*F) + poly_one(*F));
    TorsorData data;
    data.field = F;
    data.presentation.components = {{1, 1}};
    data.cocycles = {{rat_inv(rat_of_poly(poly_t(*F))) +
                      rat_inv(rat_of_poly(poly_t(*F) + poly_one(*F)))}};
    data.places = {P0, P1};
    BoundarySpec spec;
    spec.boundary = {P0, P1};
    spec.samples = {place_finite(parse_poly(*F, "t^2 + t + 1")),
                    place_inf(*F)};
    const CoverPlan plan = build_cover(data, spec);
    const VerificationReport r = audit_cover(plan);
    if (!r.pass) throw Error("fresh cover plan failed its audit");
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  rep.add("covers: build and audit", ok, detail);
}

}  // namespace selftest

inline VerificationReport run_selftest(uint64_t seed, int samples = 40) {
  selftest::Rng rng(seed);
  VerificationReport rep;
  selftest::check_field_roots(rep);
  selftest::check_valuations(rep, rng, samples);
  selftest::check_wp(rep, rng, samples);
  selftest::check_trichotomy(rep, rng, samples);
  selftest::check_defect(rep);
  selftest::check_normal_form(rep, rng, samples);
  selftest::check_killing(rep, rng, std::max(5, samples / 4));
  selftest::check_cover(rep);
  return rep;
}

}  // namespace asdescent
