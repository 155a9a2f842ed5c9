#pragma once

// Descent globalized over the projective line: build a ramified-cover plan
// whose tower kills the given torsor classes at every boundary place, with
// layer functions whose poles sit only over the boundary, and audit such a
// plan from scratch.  Interior behaviour is checked on a finite sample set:
// each sample place must stay unramified (split or inert) at every layer.
//
// Layer shape: the first layer is a rational function with prescribed
// boundary valuations; layer k >= 2 uses r(t) * x_{k-1} with r a quotient of
// boundary-supported polynomials.  Poles stay over the boundary inductively
// (x_{k-1} is integral wherever all earlier layer functions are regular),
// and the valuation at boundary place i is  p^{k-1} v_i(r) - s_{k-1,i},
// automatically prime to p.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "approx.hpp"
#include "certificate.hpp"
#include "fiber.hpp"
#include "ramification.hpp"

namespace asdescent {

struct BoundarySpec {
  std::vector<Place> boundary;  // distinct degree-1 places, nonempty
  std::vector<Place> samples;   // disjoint from the boundary; may be empty
};

inline void validate_boundary(const BoundarySpec& spec) {
  if (spec.boundary.empty())
    throw Error("boundary must contain at least one place");
  for (const Place& P : spec.boundary)
    if (P.degree() != 1) throw UnsupportedPlaceDegree();
  for (size_t i = 0; i < spec.boundary.size(); ++i)
    for (size_t j = i + 1; j < spec.boundary.size(); ++j)
      if (spec.boundary[i] == spec.boundary[j])
        throw Error("boundary places must be distinct");
  for (size_t i = 0; i < spec.samples.size(); ++i) {
    for (size_t j = i + 1; j < spec.samples.size(); ++j)
      if (spec.samples[i] == spec.samples[j])
        throw Error("sample places must be distinct");
    for (const Place& B : spec.boundary)
      if (spec.samples[i] == B)
        throw Error("sample places must avoid the boundary");
  }
}

// True iff every pole of a lies on the boundary: all irreducible factors of
// the canonical denominator are boundary primes, and a pole at infinity
// requires infinity on the boundary.
inline bool poles_within_boundary(const Rat& a,
                                  const std::vector<Place>& boundary) {
  if (a.is_zero()) return true;
  bool inf_in = false;
  for (const Place& P : boundary) inf_in = inf_in || P.is_inf;
  if (a.num.deg() > a.den.deg() && !inf_in) return false;
  if (a.den.deg() == 0) return true;
  for (const PolyFactor& f : poly_factor(a.den)) {
    bool found = false;
    for (const Place& P : boundary)
      found = found || (!P.is_inf && P.pi == f.irr);
    if (!found) return false;
  }
  return true;
}

inline void collect_base_coeffs(const TowerElement& e, std::vector<Rat>& out) {
  if (e.level == 0) {
    if (!e.base.is_zero()) out.push_back(e.base);
    return;
  }
  for (const auto& k : e.kids) collect_base_coeffs(k, out);
}

// Layer chooser for covers (see the header comment for the shape).  The
// tracked places of the tower are exactly the boundary.
inline TowerElement cover_layer(const ASTower& T,
                                const std::vector<long>& min_s) {
  const Field& F = T.field();
  const int L = T.levels();
  const int p = T.p();
  std::vector<Place> places;
  for (const auto& tp : T.tracked()) places.push_back(tp.base);

  if (L == 0) {
    std::vector<long> targets;
    for (long s : min_s) targets.push_back(-s);
    return T.from_rat(prescribe_valuations(places, targets));
  }

  long pL = 1;
  for (int i = 0; i < L; ++i) pL *= p;
  // Extra pole orders n_i of the rational cofactor r, so that the slope
  // s_{L,i} + p^L n_i of  r * x_L  reaches the requested minimum.
  std::vector<long> n(places.size(), 0);
  for (size_t i = 0; i < places.size(); ++i) {
    const long have = T.tracked()[i].layers.back().s;
    if (min_s[i] > have) n[i] = (min_s[i] - have + pL - 1) / pL;
  }

  Poly M = poly_one(F);
  long n_inf = 0;
  bool inf_in = false;
  for (size_t i = 0; i < places.size(); ++i) {
    if (places[i].is_inf) {
      inf_in = true;
      n_inf = n[i];
    } else {
      M = M * poly_pow(places[i].pi, n[i]);
    }
  }

  Rat r = rat_make(poly_one(F), M);
  if (inf_in) {
    // Numerator of exact degree deg M + n_inf, unit at every finite
    // boundary place; bump the infinity pole order by p until one exists
    // (only tiny degrees over tiny fields can fail).
    for (long D = M.deg() + n_inf;; D += p) {
      Poly Q = poly_zero(F);
      if (D == 0) {
        Q = poly_one(F);
      } else {
        enumerate_monic(F, static_cast<int>(D), [&](const Poly& cand) {
          for (const Place& P : places) {
            if (P.is_inf) continue;
            const Fq c{&F, F.neg(P.pi.c[0])};
            if (poly_eval(cand, c).is_zero()) return true;
          }
          Q = cand;
          return false;
        });
      }
      if (!Q.is_zero()) {
        r = rat_make(Q, M);
        break;
      }
    }
  }
  return T.mul(T.from_rat(r, L), T.x(L));
}

// --- ramification table ------------------------------------------------

struct CoverRamRow {
  int layer = 1;      // 1-based tower layer
  std::string place;  // base place of the projective line
  int branch = 0;     // fiber point index at the previous level (samples)
  RamCase cls = RamCase::Split;
  int e = 1, f = 1, g = 1;
};

inline bool operator==(const CoverRamRow& a, const CoverRamRow& b) {
  return a.layer == b.layer && a.place == b.place && a.branch == b.branch &&
         a.cls == b.cls && a.e == b.e && a.f == b.f && a.g == b.g;
}

// Fiber classification of every layer over one sample place.  If a layer
// function has a pole at a fiber point the place is ramified there; the row
// records that and the computation stops (the plan is invalid anyway).
inline std::vector<CoverRamRow> sample_ram_rows(const ASTower& T,
                                                const Place& Q) {
  std::vector<CoverRamRow> rows;
  const std::string qs = place_to_string(Q);
  const int p = T.p();
  std::vector<FiberBranch> branches;
  branches.push_back({FiberChain(residue_ctx(Q)), {}});
  for (int k = 1; k <= T.levels(); ++k) {
    std::vector<FiberBranch> next;
    for (size_t bi = 0; bi < branches.size(); ++bi) {
      const FiberBranch& br = branches[bi];
      FiberElem cbar;
      try {
        cbar = eval_at_branch(br, T.defining()[k - 1]);
      } catch (const NotAUnit&) {
        rows.push_back({k, qs, static_cast<int>(bi),
                        RamCase::TotallyRamified, p, 1, 1});
        return rows;
      }
      const auto y = br.chain.wp_solve(cbar);
      if (y) {
        rows.push_back({k, qs, static_cast<int>(bi), RamCase::Split, 1, 1, p});
        for (int i = 0; i < p; ++i) {
          FiberBranch child = br;
          child.xvals.push_back(br.chain.add(
              *y, br.chain.from_fq(Fq{&br.chain.E(),
                                      br.chain.E().of_int(i)})));
          next.push_back(std::move(child));
        }
      } else {
        rows.push_back({k, qs, static_cast<int>(bi), RamCase::Inert, 1, p, 1});
        FiberBranch child{br.chain.extended(cbar), br.xvals};
        child.xvals.push_back(child.chain.gen(child.chain.levels()));
        next.push_back(std::move(child));
      }
      if (next.size() > 512) throw Error("fiber branch count exceeds the cap");
    }
    branches = std::move(next);
  }
  return rows;
}

inline std::vector<CoverRamRow> compute_ram_table(
    const ASTower& T, const std::vector<Place>& samples) {
  std::vector<CoverRamRow> rows;
  const int p = T.p();
  for (const auto& tp : T.tracked())
    for (int k = 1; k <= T.levels(); ++k)
      rows.push_back({k, place_to_string(tp.base), 0,
                      RamCase::TotallyRamified, p, 1, 1});
  for (const Place& Q : samples) {
    const auto qrows = sample_ram_rows(T, Q);
    rows.insert(rows.end(), qrows.begin(), qrows.end());
  }
  return rows;
}

// --- plans ---------------------------------------------------------------

struct CoverPlan {
  TorsorData torsor;
  BoundarySpec spec;
  ExtensionCertificate certificate;
  std::vector<CoverRamRow> table;
};

inline CoverPlan build_cover(const TorsorData& data,
                             const BoundarySpec& spec) {
  validate_torsor(data);
  validate_boundary(spec);
  for (const Place& P : data.places) {
    bool found = false;
    for (const Place& B : spec.boundary) found = found || P == B;
    if (!found) throw Error("torsor place is not on the boundary");
  }
  std::vector<KillInput> inputs;
  for (size_t i = 0; i < data.cocycles.size(); ++i)
    for (const Rat& a : data.cocycles[i]) {
      if (!poles_within_boundary(a, spec.boundary))
        throw Error("cocycle has a pole off the boundary");
      inputs.push_back({a, data.presentation.components[i].N});
    }

  const KillResult kr =
      kill_classes(data.field, spec.boundary, inputs, cover_layer);

  for (const TowerElement& f : kr.tower.defining()) {
    std::vector<Rat> coeffs;
    collect_base_coeffs(f, coeffs);
    for (const Rat& c : coeffs)
      if (!poles_within_boundary(c, spec.boundary))
        throw Error("internal: layer function has poles off the boundary");
  }

  CoverPlan plan{data, spec, make_certificate(kr),
                 compute_ram_table(kr.tower, spec.samples)};
  for (const CoverRamRow& row : plan.table)
    if (row.e != 1 && row.branch == 0 && row.cls != RamCase::TotallyRamified)
      throw Error("internal: inconsistent ramification row");
  for (const CoverRamRow& row : plan.table) {
    bool is_boundary = false;
    for (const Place& B : spec.boundary)
      is_boundary = is_boundary || place_to_string(B) == row.place;
    if (!is_boundary && row.e != 1)
      throw Error("internal: sample place ramified");
  }
  return plan;
}

// --- serialization ---------------------------------------------------------

inline constexpr const char* kCoverFormat = "asdescent-cover/1";

inline RamCase parse_ram_case(const std::string& s) {
  if (s == "split") return RamCase::Split;
  if (s == "inert") return RamCase::Inert;
  if (s == "totally_ramified") return RamCase::TotallyRamified;
  if (s == "trivial") return RamCase::Trivial;
  throw ParseError("unknown ramification case '" + s + "'", 0);
}

inline Json cover_to_json(const CoverPlan& plan) {
  Json rows = Json::array();
  for (const CoverRamRow& r : plan.table)
    rows.push_back(Json{{"layer", r.layer},
                        {"place", r.place},
                        {"branch", r.branch},
                        {"case", ram_case_name(r.cls)},
                        {"e", r.e},
                        {"f", r.f},
                        {"g", r.g}});
  Json boundary = Json::array(), samples = Json::array();
  for (const Place& P : plan.spec.boundary)
    boundary.push_back(place_to_string(P));
  for (const Place& P : plan.spec.samples)
    samples.push_back(place_to_string(P));
  return Json{{"format", kCoverFormat},
              {"torsor", torsor_to_json(plan.torsor)},
              {"boundary", boundary},
              {"samples", samples},
              {"certificate", cert_to_json(plan.certificate)},
              {"ramification_table", rows}};
}

inline CoverPlan cover_from_json(const Json& j) {
  try {
    if (!j.is_object() || j.value("format", "") != kCoverFormat)
      throw ParseError("not an asdescent-cover/1 document", 0);
    CoverPlan plan;
    plan.torsor = torsor_from_json(j.at("torsor"));
    const Field& F = *plan.torsor.field;
    for (const auto& s : j.at("boundary"))
      plan.spec.boundary.push_back(parse_place(F, s.get<std::string>()));
    for (const auto& s : j.at("samples"))
      plan.spec.samples.push_back(parse_place(F, s.get<std::string>()));
    plan.certificate = cert_from_json(j.at("certificate"));
    for (const auto& r : j.at("ramification_table"))
      plan.table.push_back({r.at("layer").get<int>(),
                            r.at("place").get<std::string>(),
                            r.at("branch").get<int>(),
                            parse_ram_case(r.at("case").get<std::string>()),
                            r.at("e").get<int>(), r.at("f").get<int>(),
                            r.at("g").get<int>()});
    return plan;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed cover plan: ") + ex.what(), 0);
  }
}

// --- audit -----------------------------------------------------------------

// Re-derives everything a plan claims: the certificate (tower, witnesses,
// valuations), the agreement between torsor, boundary and certificate, the
// boundary-only pole property of every layer function, and the full
// ramification table including the unramified-sample invariant.
inline VerificationReport audit_cover(const CoverPlan& plan) {
  VerificationReport rep = verify_certificate(plan.certificate);

  {
    bool ok = true;
    std::string detail;
    try {
      validate_torsor(plan.torsor);
      validate_boundary(plan.spec);
      const Field& F = *plan.torsor.field;
      if (F.p() != plan.certificate.p || F.k() != plan.certificate.k ||
          (!plan.certificate.modulus.empty() &&
           F.modulus() != plan.certificate.modulus))
        throw Error("torsor and certificate base fields disagree");
      for (const Place& P : plan.torsor.places) {
        bool found = false;
        for (const Place& B : plan.spec.boundary) found = found || P == B;
        if (!found) throw Error("torsor place is not on the boundary");
      }
      if (plan.certificate.tracked_places.size() != plan.spec.boundary.size())
        throw Error("certificate does not track the boundary");
      for (size_t i = 0; i < plan.spec.boundary.size(); ++i)
        if (plan.certificate.tracked_places[i].place !=
            place_to_string(plan.spec.boundary[i]))
          throw Error("certificate does not track the boundary");
    } catch (const std::exception& ex) {
      ok = false;
      detail = ex.what();
    }
    rep.add("torsor and boundary consistent", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    try {
      std::vector<std::pair<std::string, int>> expect;
      for (size_t i = 0; i < plan.torsor.cocycles.size(); ++i)
        for (const Rat& a : plan.torsor.cocycles[i])
          expect.push_back({rat_to_string(a),
                            plan.torsor.presentation.components[i].N});
      if (expect.size() != plan.certificate.entries.size())
        throw Error("certificate entry count disagrees with the torsor");
      for (size_t i = 0; i < expect.size(); ++i)
        if (expect[i].first != plan.certificate.entries[i].a ||
            expect[i].second != plan.certificate.entries[i].N)
          throw Error("certificate entry " + std::to_string(i) +
                      " does not match its cocycle");
    } catch (const std::exception& ex) {
      ok = false;
      detail = ex.what();
    }
    rep.add("entries match the torsor", ok, detail);
  }

  std::optional<ASTower> T;
  try {
    T = rebuild_tower(plan.certificate);
  } catch (const std::exception&) {
    // Already reported by verify_certificate.
  }

  {
    bool ok = true;
    std::string detail;
    if (!T) {
      ok = false;
      detail = "tower not reconstructed";
    } else {
      try {
        for (const auto& row : plan.torsor.cocycles)
          for (const Rat& a : row)
            if (!poles_within_boundary(a, plan.spec.boundary))
              throw Error("cocycle has a pole off the boundary");
        for (const TowerElement& f : T->defining()) {
          std::vector<Rat> coeffs;
          collect_base_coeffs(f, coeffs);
          for (const Rat& c : coeffs)
            if (!poles_within_boundary(c, plan.spec.boundary))
              throw Error("layer function has poles off the boundary");
        }
      } catch (const std::exception& ex) {
        ok = false;
        detail = ex.what();
      }
    }
    rep.add("poles only over the boundary", ok, detail);
  }

  {
    bool ok = true;
    std::string detail;
    if (!T) {
      ok = false;
      detail = "tower not reconstructed";
    } else {
      try {
        const auto derived = compute_ram_table(*T, plan.spec.samples);
        if (derived.size() != plan.table.size())
          throw Error("ramification table size disagrees");
        for (size_t i = 0; i < derived.size(); ++i)
          if (!(derived[i] == plan.table[i]))
            throw Error("ramification row " + std::to_string(i) +
                        " disagrees with recomputation");
        for (const CoverRamRow& row : derived) {
          bool is_boundary = false;
          for (const Place& B : plan.spec.boundary)
            is_boundary = is_boundary || place_to_string(B) == row.place;
          if (is_boundary && row.cls != RamCase::TotallyRamified)
            throw Error("boundary place not totally ramified at layer " +
                        std::to_string(row.layer));
          if (!is_boundary &&
              !(row.cls == RamCase::Split || row.cls == RamCase::Inert))
            throw Error("sample place " + row.place + " ramified at layer " +
                        std::to_string(row.layer));
        }
      } catch (const std::exception& ex) {
        ok = false;
        detail = ex.what();
      }
    }
    rep.add("ramification table", ok, detail);
  }

  return rep;
}

inline VerificationReport audit_cover(const Json& j) {
  try {
    return audit_cover(cover_from_json(j));
  } catch (const std::exception& ex) {
    VerificationReport rep;
    rep.add("cover plan parses", false, ex.what());
    return rep;
  }
}

}  // namespace asdescent
