// A guided tour of the library on one example over F_2(t):
//
//     a = 1/t,   the place P = (t).
//
// We classify the local Artin-Schreier cover y^2 - y = a, reduce the class
// of a modulo regular functions and p-th powers, build the one-layer tower
// that makes it extendable, and verify the certificate.  Finally we package
// a as the cocycle of an alpha_2-torsor on P^1 minus {0, inf} and plan the
// branched cover that extends it, sampling the fibers at t+1 and t^2+t+1.

#include <iostream>

#include "asdescent/asdescent.hpp"

using namespace asdescent;

int main() {
  FieldPtr F = Field::make_default(2, 1);
  const Place P = place_finite(poly_t(*F));
  const Rat a = parse_rat(*F, "1 / t");

  std::cout << "base field  F_2,  a = " << rat_to_string(a)
            << ",  P = (" << place_to_string(P) << ")\n\n";

  // 1. The local trichotomy.  v_P(a) = -1 is negative and prime to p = 2,
  //    so the cover y^2 - y = a is totally ramified over P.
  const RamificationReport rep = classify_ramification(a, P);
  std::cout << "classify:   " << ram_case_name(rep.cls) << "  (e, f, g) = ("
            << rep.e << ", " << rep.f << ", " << rep.g << ")\n";

  // 2. The obstruction in normal form: which polar terms survive modulo
  //    (regular at P) + (p-th powers)?  Here the single term t^-1 does.
  const NormalForm nf = normal_form(a, P);
  std::cout << "normal form: " << nf.cls.terms.size()
            << " surviving term(s);  extendable over O_P: "
            << (nf.cls.is_extendable() ? "yes" : "no") << "\n";

  // 3. Kill the class: adjoin one Artin-Schreier layer y^2 - y = 1/t^3
  //    (slope s = 3 satisfies (p-1) s > v p with v = 1).  Up the tower,
  //    a = h^2 + g with g regular at the tracked place -- the certificate
  //    records h and g as exact tower elements.
  const ExtensionCertificate cert = kill_class(F, a, P);
  std::cout << "tower:       " << cert.tower.size() << " layer(s), f_1 = "
            << cert.tower[0] << "\n";
  std::cout << "witness:     h = " << cert.entries[0].h << "\n";

  const VerificationReport ver = verify_certificate(cert);
  std::cout << "verify:      " << (ver.pass ? "PASS" : "FAIL") << " ("
            << ver.checks.size() << " checks)\n\n";

  // 4. The same class as an alpha_2-torsor on P^1 minus the boundary
  //    {0, inf}, with its extension planned as a branched cover.
  TorsorData torsor;
  torsor.field = F;
  torsor.presentation.components = {{1, 1}};  // one copy of alpha_2
  torsor.cocycles = {{a}};
  torsor.places = {P};

  BoundarySpec spec;
  spec.boundary = {P, place_inf(*F)};
  spec.samples = {place_finite(parse_poly(*F, "t + 1")),
                  place_finite(parse_poly(*F, "t^2 + t + 1"))};

  const CoverPlan plan = build_cover(torsor, spec);
  std::cout << "cover:       " << plan.certificate.tower.size()
            << " layer(s); ramification over " << plan.table.size()
            << " (layer, place, branch) rows\n";
  for (const CoverRamRow& row : plan.table)
    std::cout << "  layer " << row.layer << "  (" << row.place << ")"
              << "  branch " << row.branch << "  "
              << ram_case_name(row.cls) << "  (e, f, g) = (" << row.e
              << ", " << row.f << ", " << row.g << ")\n";

  const VerificationReport audit = audit_cover(plan);
  std::cout << "audit:       " << (audit.pass ? "PASS" : "FAIL") << "\n";
  return ver.pass && audit.pass ? 0 : 1;
}
