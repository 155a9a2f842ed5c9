#pragma once

// Input data for the descent pipeline: a commutative elementary unipotent
// presentation (a product of factors (alpha_{p^N})^r), one cocycle row per
// component, and the places where extension is requested.  Serialized as a
// small versioned JSON document so torsor files can be passed to the CLI.

#include <string>
#include <vector>

#include <json.hpp>

#include "place.hpp"
#include "rational.hpp"

namespace asdescent {

using Json = nlohmann::ordered_json;

struct PresentationComponent {
  int r = 1;  // number of copies
  int N = 1;  // Frobenius-kernel exponent: the factor is (alpha_{p^N})^r
};

struct UnipotentPresentation {
  std::vector<PresentationComponent> components;

  int max_exponent() const {
    int m = 1;
    for (const auto& c : components) m = std::max(m, c.N);
    return m;
  }
};

struct TorsorData {
  FieldPtr field;  // keeps the base field alive for the places and cocycles
  UnipotentPresentation presentation;
  std::vector<std::vector<Rat>> cocycles;  // one row of r entries per component
  std::vector<Place> places;
};

inline void validate_torsor(const TorsorData& d) {
  if (!d.field) throw Error("torsor data has no base field");
  if (d.presentation.components.empty())
    throw Error("presentation has no components");
  if (d.cocycles.size() != d.presentation.components.size())
    throw Error("cocycle rows do not match the presentation");
  for (size_t i = 0; i < d.cocycles.size(); ++i) {
    const auto& comp = d.presentation.components[i];
    if (comp.r < 1 || comp.N < 1)
      throw Error("presentation exponents must be positive");
    if (static_cast<int>(d.cocycles[i].size()) != comp.r)
      throw Error("cocycle row " + std::to_string(i) +
                  " does not have r entries");
  }
  if (d.places.empty()) throw Error("no places listed");
  for (const auto& row : d.cocycles)
    for (const Rat& a : row)
      if (!a.field() || !a.field()->same(*d.field)) throw FieldMismatch();
  for (const Place& P : d.places)
    if (!P.F || !P.F->same(*d.field)) throw FieldMismatch();
  for (size_t i = 0; i < d.places.size(); ++i)
    for (size_t j = i + 1; j < d.places.size(); ++j)
      if (d.places[i] == d.places[j]) throw Error("places must be distinct");
}

inline Json field_to_json(const Field& F) {
  return Json{{"p", F.p()}, {"k", F.k()}, {"modulus", F.modulus()}};
}

inline FieldPtr field_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("p") || !j.contains("k"))
    throw ParseError("base_field needs p and k", 0);
  const int p = j.at("p").get<int>();
  const int k = j.at("k").get<int>();
  if (j.contains("modulus"))
    return Field::make(p, k, j.at("modulus").get<std::vector<int>>());
  return Field::make_default(p, k);
}

inline Json torsor_to_json(const TorsorData& d) {
  validate_torsor(d);
  Json pres = Json::array();
  for (const auto& c : d.presentation.components)
    pres.push_back(Json{{"r", c.r}, {"N", c.N}});
  Json rows = Json::array();
  for (const auto& row : d.cocycles) {
    Json r = Json::array();
    for (const Rat& a : row) r.push_back(rat_to_string(a));
    rows.push_back(std::move(r));
  }
  Json places = Json::array();
  for (const Place& P : d.places) places.push_back(place_to_string(P));
  return Json{{"format", "asdescent-torsor/1"},
              {"base_field", field_to_json(*d.field)},
              {"presentation", pres},
              {"cocycles", rows},
              {"places", places}};
}

inline TorsorData torsor_from_json(const Json& j) {
  if (!j.is_object() || j.value("format", "") != "asdescent-torsor/1")
    throw ParseError("not an asdescent-torsor/1 document", 0);
  TorsorData d;
  d.field = field_from_json(j.at("base_field"));
  for (const auto& c : j.at("presentation"))
    d.presentation.components.push_back(
        {c.at("r").get<int>(), c.at("N").get<int>()});
  for (const auto& row : j.at("cocycles")) {
    std::vector<Rat> r;
    for (const auto& s : row)
      r.push_back(parse_rat(*d.field, s.get<std::string>()));
    d.cocycles.push_back(std::move(r));
  }
  for (const auto& s : j.at("places"))
    d.places.push_back(parse_place(*d.field, s.get<std::string>()));
  validate_torsor(d);
  return d;
}

}  // namespace asdescent
