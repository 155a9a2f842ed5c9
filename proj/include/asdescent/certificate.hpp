#pragma once

// Extension certificates: the checkable artifact produced by the descent
// engine.  A certificate records the base field, the tower's defining
// elements, the tracked places with their layer data, and per class the
// witnesses h, g with  a = h^{p^N} + g.  Everything is stored as exact text
// in the library syntax; the verifier rebuilds the tower from scratch and
// recomputes every claim, so a certificate never has to be trusted.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kill.hpp"
#include "torsor.hpp"

namespace asdescent {

inline constexpr const char* kCertificateFormat = "asdescent-cert/1";

struct CertTrackedPlace {
  std::string place;
  std::vector<TowerLayerData> layers;
};

struct CertEntry {
  std::string a;
  std::string h;
  std::string g;
  int N = 1;
  // Advisory only: v(g) per tracked place (nullopt encodes +infinity, g = 0).
  // The verifier recomputes these and rejects certificates that disagree.
  std::vector<std::optional<long>> g_valuations;
};

struct ExtensionCertificate {
  int p = 0;
  int k = 1;
  std::vector<int> modulus;
  std::vector<std::string> tower;  // f_k, each parsed at level k-1
  std::vector<CertTrackedPlace> tracked_places;
  std::vector<CertEntry> entries;
};

inline ExtensionCertificate make_certificate(const KillResult& kr) {
  const ASTower& T = kr.tower;
  ExtensionCertificate c;
  c.p = T.field().p();
  c.k = T.field().k();
  c.modulus = T.field().modulus();
  for (const TowerElement& f : T.defining()) c.tower.push_back(T.to_string(f));
  for (const TrackedPlace& tp : T.tracked())
    c.tracked_places.push_back({place_to_string(tp.base), tp.layers});
  for (const KillEntry& e : kr.entries) {
    CertEntry ce{rat_to_string(e.a), T.to_string(e.h), T.to_string(e.g), e.N,
                 {}};
    for (size_t i = 0; i < T.tracked().size(); ++i)
      ce.g_valuations.push_back(T.val(e.g, i));
    c.entries.push_back(std::move(ce));
  }
  return c;
}

inline Json cert_to_json(const ExtensionCertificate& c) {
  Json places = Json::array();
  for (const auto& tp : c.tracked_places) {
    Json layers = Json::array();
    for (const auto& l : tp.layers)
      layers.push_back(Json{{"s", l.s}, {"a", l.a}, {"b", l.b}});
    places.push_back(Json{{"place", tp.place}, {"layers", layers}});
  }
  Json entries = Json::array();
  for (const auto& e : c.entries) {
    Json vals = Json::array();
    for (const auto& v : e.g_valuations) {
      if (v)
        vals.push_back(*v);
      else
        vals.push_back(nullptr);
    }
    entries.push_back(Json{{"a", e.a},
                           {"N", e.N},
                           {"h", e.h},
                           {"g", e.g},
                           {"g_valuations", vals}});
  }
  return Json{{"format", kCertificateFormat},
              {"base_field",
               Json{{"p", c.p}, {"k", c.k}, {"modulus", c.modulus}}},
              {"tower", c.tower},
              {"tracked_places", places},
              {"entries", entries}};
}

inline ExtensionCertificate cert_from_json(const Json& j) {
  try {
    if (!j.is_object() || j.value("format", "") != kCertificateFormat)
      throw ParseError("not an asdescent-cert/1 document", 0);
    ExtensionCertificate c;
    const Json& bf = j.at("base_field");
    c.p = bf.at("p").get<int>();
    c.k = bf.at("k").get<int>();
    if (bf.contains("modulus"))
      c.modulus = bf.at("modulus").get<std::vector<int>>();
    c.tower = j.at("tower").get<std::vector<std::string>>();
    for (const auto& tp : j.at("tracked_places")) {
      CertTrackedPlace ctp{tp.at("place").get<std::string>(), {}};
      for (const auto& l : tp.at("layers"))
        ctp.layers.push_back({l.at("s").get<long>(), l.at("a").get<long>(),
                              l.at("b").get<long>()});
      c.tracked_places.push_back(std::move(ctp));
    }
    for (const auto& e : j.at("entries")) {
      CertEntry ce{e.at("a").get<std::string>(), e.at("h").get<std::string>(),
                   e.at("g").get<std::string>(), e.value("N", 1), {}};
      if (e.contains("g_valuations"))
        for (const auto& v : e.at("g_valuations")) {
          if (v.is_null())
            ce.g_valuations.push_back(std::nullopt);
          else
            ce.g_valuations.push_back(v.get<long>());
        }
      c.entries.push_back(std::move(ce));
    }
    return c;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("malformed certificate: ") + ex.what(), 0);
  }
}

struct VerificationCheck {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct VerificationReport {
  std::vector<VerificationCheck> checks;
  bool pass = true;

  void add(std::string name, bool ok, std::string detail = "") {
    pass = pass && ok;
    checks.push_back({std::move(name), ok, std::move(detail)});
  }
};

// Reconstructs the tower a certificate describes, from scratch: base field,
// tracked places, one extend per recorded layer.  Throws (library errors)
// when the data is inconsistent; in particular the recorded per-place layer
// data (s, a, b) must agree with what extend() re-derives.
inline ASTower rebuild_tower(const ExtensionCertificate& c) {
  FieldPtr F = Field::make(
      c.p, c.k,
      c.modulus.empty() ? Field::default_modulus(c.p, c.k) : c.modulus);
  std::vector<Place> places;
  for (const auto& tp : c.tracked_places)
    places.push_back(parse_place(*F, tp.place));
  ASTower cur(F, places);
  for (size_t k = 0; k < c.tower.size(); ++k)
    cur = cur.extend(cur.parse_element(static_cast<int>(k), c.tower[k]));
  for (size_t i = 0; i < places.size(); ++i) {
    const auto& rec = c.tracked_places[i].layers;
    const auto& der = cur.tracked()[i].layers;
    if (rec.size() != der.size())
      throw Error("recorded layer count disagrees at place " +
                  c.tracked_places[i].place);
    for (size_t k = 0; k < rec.size(); ++k)
      if (rec[k].s != der[k].s || rec[k].a != der[k].a ||
          rec[k].b != der[k].b)
        throw Error("recorded layer data disagrees with recomputation at "
                    "place " +
                    c.tracked_places[i].place);
  }
  return cur;
}

// Re-derives every claim in the certificate.  Hostile input is fine: any
// library error during reconstruction fails the corresponding check instead
// of propagating.
inline VerificationReport verify_certificate(const ExtensionCertificate& c) {
  VerificationReport rep;

  std::optional<ASTower> T;
  std::string fail;
  try {
    T = rebuild_tower(c);
  } catch (const std::exception& ex) {
    fail = ex.what();
  }
  rep.add("tower well-formed", T.has_value(), fail);

  if (!T) {
    rep.add("layer slopes prime to p", false, "tower not reconstructed");
    rep.add("witness identity exact", false, "tower not reconstructed");
    rep.add("witness valuations nonnegative", false, "tower not reconstructed");
    rep.add("tower degree", false, "tower not reconstructed");
    return rep;
  }

  bool slopes_ok = true;
  std::string slopes_detail;
  for (const TrackedPlace& tp : T->tracked())
    for (const TowerLayerData& l : tp.layers)
      if (l.s <= 0 || l.s % T->p() == 0) {
        slopes_ok = false;
        slopes_detail = "slope " + std::to_string(l.s) + " at place " +
                        place_to_string(tp.base);
      }
  rep.add("layer slopes prime to p", slopes_ok, slopes_detail);

  bool ident_ok = true, vals_ok = true;
  std::string ident_detail, vals_detail;
  const int L = T->levels();
  for (size_t e = 0; e < c.entries.size(); ++e) {
    const CertEntry& ce = c.entries[e];
    try {
      if (ce.N < 1) throw Error("entry exponent must be positive");
      const Rat a = parse_rat(T->field(), ce.a);
      const TowerElement h = T->parse_element(L, ce.h);
      const TowerElement g = T->parse_element(L, ce.g);
      const TowerElement diff =
          T->sub(T->sub(T->from_rat(a, L), T->pow_pn(h, ce.N)), g);
      if (!diff.is_zero()) {
        ident_ok = false;
        ident_detail = "entry " + std::to_string(e) +
                       ": a - h^{p^N} - g is nonzero";
      }
      for (size_t i = 0; i < T->tracked().size(); ++i) {
        const auto v = T->val(g, i);
        if (v && *v < 0) {
          vals_ok = false;
          vals_detail = "entry " + std::to_string(e) + ": v(g) = " +
                        std::to_string(*v) + " at place " +
                        place_to_string(T->tracked()[i].base);
        }
        if (i < ce.g_valuations.size() && ce.g_valuations[i] != v) {
          vals_ok = false;
          vals_detail = "entry " + std::to_string(e) +
                        ": recorded valuation disagrees with recomputation";
        }
      }
    } catch (const std::exception& ex) {
      ident_ok = false;
      ident_detail = "entry " + std::to_string(e) + ": " + ex.what();
    }
  }
  rep.add("witness identity exact", ident_ok, ident_detail);
  rep.add("witness valuations nonnegative", vals_ok, vals_detail);

  long deg = 1;
  for (size_t k = 0; k < c.tower.size(); ++k) deg *= T->p();
  rep.add("tower degree", T->degree() == deg,
          T->degree() == deg ? "" : "tower degree mismatch");
  return rep;
}

inline VerificationReport verify_certificate(const Json& j) {
  try {
    return verify_certificate(cert_from_json(j));
  } catch (const std::exception& ex) {
    VerificationReport rep;
    rep.add("certificate parses", false, ex.what());
    return rep;
  }
}

// --- the public descent entry points --------------------------------------

inline ExtensionCertificate kill_class(FieldPtr F, const Rat& a,
                                       const Place& P) {
  return make_certificate(kill_classes(std::move(F), {P}, {{a, 1}}));
}

inline ExtensionCertificate kill_class_multi(FieldPtr F, const Rat& a,
                                             std::vector<Place> places) {
  return make_certificate(
      kill_classes(std::move(F), std::move(places), {{a, 1}}));
}

inline ExtensionCertificate kill_higher(FieldPtr F, const Rat& a, int N,
                                        std::vector<Place> places) {
  return make_certificate(
      kill_classes(std::move(F), std::move(places), {{a, N}}));
}

inline ExtensionCertificate kill_presentation(const TorsorData& d) {
  validate_torsor(d);
  std::vector<KillInput> inputs;
  for (size_t i = 0; i < d.cocycles.size(); ++i)
    for (const Rat& a : d.cocycles[i])
      inputs.push_back({a, d.presentation.components[i].N});
  return make_certificate(kill_classes(d.field, d.places, inputs));
}

}  // namespace asdescent
