// Command-line front end: classification, normal forms, certified descent,
// cover plans, verification, and the built-in invariant suites.  Machine
// output is versioned JSON on stdout; an aligned human summary goes to
// stderr.  Exit codes: 0 success, 1 verification failure, 2 usage or parse
// error, 3 computation error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asdescent/asdescent.hpp"

namespace {

using namespace asdescent;

constexpr int kExitVerify = 1;
constexpr int kExitUsage = 2;
constexpr int kExitCompute = 3;

struct FieldArgs {
  int p = 0;
  int k = 1;
  std::string modulus;  // comma-separated coefficients, optional
};

void add_field_options(CLI::App* cmd, FieldArgs* fa) {
  cmd->add_option("--p", fa->p, "Characteristic of the base field")
      ->required();
  cmd->add_option("--k", fa->k, "Extension degree over the prime field");
  cmd->add_option("--modulus", fa->modulus,
                  "Modulus coefficients c0,c1,... (default: least "
                  "irreducible)");
}

FieldPtr make_field(const FieldArgs& fa) {
  if (fa.modulus.empty()) return Field::make_default(fa.p, fa.k);
  std::vector<int> cs;
  std::stringstream ss(fa.modulus);
  std::string item;
  while (std::getline(ss, item, ',')) cs.push_back(std::stoi(item));
  return Field::make(fa.p, fa.k, cs);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const size_t b = item.find_first_not_of(' ');
    const size_t e = item.find_last_not_of(' ');
    if (b == std::string::npos) continue;
    out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

Json fq_json(const Field& F, const Fq& c) {
  Json a = Json::array();
  for (int v : F.coeffs(c.v)) a.push_back(v);
  return a;
}

void emit(const Json& j, const std::string& output) {
  if (output.empty()) {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream f(output);
  if (!f) throw Error("cannot open output file '" + output + "'");
  f << j.dump(2) << "\n";
  std::cerr << "wrote " << output << "\n";
}

void print_row(const std::string& key, const std::string& val) {
  std::cerr << "  " << key;
  for (size_t i = key.size(); i < 22; ++i) std::cerr << ' ';
  std::cerr << val << "\n";
}

int print_report(const VerificationReport& rep, const std::string& output) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"pass", c.pass},
                          {"detail", c.detail}});
    print_row(c.name, c.pass ? "pass" : "FAIL" + (c.detail.empty()
                                                      ? std::string()
                                                      : "  " + c.detail));
  }
  print_row("overall", rep.pass ? "pass" : "FAIL");
  emit(Json{{"pass", rep.pass}, {"checks", checks}}, output);
  return rep.pass ? 0 : kExitVerify;
}

void print_certificate_summary(const ExtensionCertificate& c) {
  print_row("tower layers", std::to_string(c.tower.size()));
  for (size_t i = 0; i < c.tower.size(); ++i)
    print_row("  f_" + std::to_string(i + 1), c.tower[i]);
  for (const auto& tp : c.tracked_places) {
    std::string layers;
    for (const auto& L : tp.layers)
      layers += (layers.empty() ? "" : "  ") + std::string("s=") +
                std::to_string(L.s) + " (a,b)=(" + std::to_string(L.a) + "," +
                std::to_string(L.b) + ")";
    print_row("place " + tp.place, layers.empty() ? "-" : layers);
  }
  for (size_t e = 0; e < c.entries.size(); ++e) {
    print_row("entry " + std::to_string(e + 1),
              "a = " + c.entries[e].a + "   N = " +
                  std::to_string(c.entries[e].N));
    print_row("  h", c.entries[e].h);
    print_row("  g", c.entries[e].g);
    std::string vals;
    for (const auto& v : c.entries[e].g_valuations)
      vals += (vals.empty() ? "" : " ") + (v ? std::to_string(*v) : "+inf");
    print_row("  v(g)", vals.empty() ? "-" : vals);
  }
}

// Shared by kill and kill-multi.  With extend set, a failure caused by
// higher-degree places is retried once over the constant extension that
// makes every listed place rational: the places are replaced by the linear
// factors their polynomials acquire there.
int run_kill(const FieldArgs& fa, const std::string& a_text,
             const std::vector<std::string>& place_texts, int N, bool extend,
             const std::string& output) {
  FieldPtr F = make_field(fa);
  std::vector<Place> places;
  for (const auto& s : place_texts) places.push_back(parse_place(*F, s));

  ExtensionCertificate cert;
  try {
    cert = kill_higher(F, parse_rat(*F, a_text), N, places);
  } catch (const UnsupportedPlaceDegree&) {
    if (!extend) throw;
    if (fa.k != 1 || !fa.modulus.empty())
      throw Error(
          "--extend-constants only supports prime base fields (inputs would "
          "change meaning under a basis change)");
    long d = 1;
    for (const Place& P : places) d = std::lcm(d, long(P.degree()));
    FieldPtr F2 = Field::make_default(fa.p, static_cast<int>(d));
    std::cerr << "extending constants to F_" << F2->q()
              << " to make every place rational\n";
    std::vector<Place> rational;
    for (const auto& s : place_texts) {
      if (s == "inf") {
        rational.push_back(place_inf(*F2));
        continue;
      }
      const Place over_f = parse_place(*F, s);
      const Poly pi2 = parse_poly(*F2, poly_to_string(over_f.pi));
      for (const PolyFactor& fac : poly_factor(pi2))
        if (fac.irr.deg() == 1) rational.push_back(place_finite(fac.irr));
    }
    cert = kill_higher(F2, parse_rat(*F2, a_text), N, rational);
  }

  print_certificate_summary(cert);
  const VerificationReport rep = verify_certificate(cert);
  print_row("self-check", rep.pass ? "pass" : "FAIL");
  if (!rep.pass) throw Error("fresh certificate failed verification");
  emit(cert_to_json(cert), output);
  return 0;
}

int run_classify(const FieldArgs& fa, const std::string& f_text,
                 const std::string& place_text) {
  FieldPtr F = make_field(fa);
  const Place P = parse_place(*F, place_text);
  const AsReduceResult ar = as_reduce(parse_rat(*F, f_text), P);
  RamificationReport rep = classify_ramification(ar.reduced, P);
  rep.reduce_witness = ar.witness;

  print_row("case", ram_case_name(rep.cls));
  print_row("e f g",
            std::to_string(rep.e) + " " + std::to_string(rep.f) + " " +
                std::to_string(rep.g));
  print_row("v(reduced)", std::to_string(rep.v));
  print_row("reduced", rat_to_string(rep.reduced));
  print_row("reduction witness", rat_to_string(rep.reduce_witness));
  if (rep.global_witness)
    print_row("global witness", rat_to_string(*rep.global_witness));

  Json j{{"case", ram_case_name(rep.cls)},
         {"e", rep.e},
         {"f", rep.f},
         {"g", rep.g},
         {"v", rep.v},
         {"reduced", rat_to_string(rep.reduced)},
         {"reduce_witness", rat_to_string(rep.reduce_witness)},
         {"global_witness",
          rep.global_witness ? Json(rat_to_string(*rep.global_witness))
                             : Json(nullptr)}};
  emit(j, "");
  return 0;
}

int run_normal_form(const FieldArgs& fa, const std::string& a_text,
                    const std::string& place_text, int N) {
  FieldPtr F = make_field(fa);
  const Place P = parse_place(*F, place_text);
  const NormalForm nf = normal_form(parse_rat(*F, a_text), P, N);

  Json terms = Json::array();
  std::string human;
  for (const QTerm& t : nf.cls.terms) {
    terms.push_back(Json{{"n", t.n}, {"c", fq_json(*F, t.c)}});
    human += (human.empty() ? "" : " + ") + fq_to_string(t.c) + "*u^" +
             std::to_string(t.n);
  }
  print_row("place", place_to_string(P));
  print_row("N", std::to_string(N));
  print_row("class", nf.cls.terms.empty() ? "0 (extendable)" : human);
  print_row("u", rat_to_string(nf.u));
  print_row("w", rat_to_string(nf.w));

  emit(Json{{"place", place_to_string(P)},
            {"N", N},
            {"extendable", nf.cls.is_extendable()},
            {"terms", terms},
            {"u", rat_to_string(nf.u)},
            {"w", rat_to_string(nf.w)}},
       "");
  return 0;
}

int run_cover(const std::string& torsor_file, const std::string& boundary,
              const std::string& samples, const std::string& output) {
  std::ifstream in(torsor_file);
  if (!in) throw Error("cannot open torsor file '" + torsor_file + "'");
  Json jt;
  try {
    in >> jt;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("torsor file: ") + ex.what(), 0);
  }
  const TorsorData data = torsor_from_json(jt);
  BoundarySpec spec;
  for (const auto& s : split_list(boundary))
    spec.boundary.push_back(parse_place(*data.field, s));
  for (const auto& s : split_list(samples))
    spec.samples.push_back(parse_place(*data.field, s));

  const CoverPlan plan = build_cover(data, spec);
  print_certificate_summary(plan.certificate);
  std::cerr << "  layer  place                 branch  case              e  f  g\n";
  for (const auto& r : plan.table) {
    std::ostringstream row;
    row << "  " << r.layer << "      " << r.place;
    for (size_t i = r.place.size(); i < 22; ++i) row << ' ';
    row << r.branch << "       " << ram_case_name(r.cls);
    for (size_t i = ram_case_name(r.cls).size(); i < 18; ++i) row << ' ';
    row << r.e << "  " << r.f << "  " << r.g;
    std::cerr << row.str() << "\n";
  }
  const VerificationReport rep = audit_cover(plan);
  print_row("self-check", rep.pass ? "pass" : "FAIL");
  if (!rep.pass) throw Error("fresh cover plan failed its audit");
  emit(cover_to_json(plan), output);
  return 0;
}

int run_verify(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error("cannot open '" + file + "'");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("not a JSON document: ") + ex.what(), 0);
  }
  const std::string fmt = j.is_object() ? j.value("format", "") : "";
  if (fmt == kCoverFormat) return print_report(audit_cover(j), "");
  return print_report(verify_certificate(j), "");
}

int run_selftest(int samples) {
  uint64_t seed = 0xa5de5ce;
  if (const char* env = std::getenv("ASDESCENT_SEED")) {
    try {
      seed = std::stoull(env);
    } catch (const std::exception&) {
      throw Error("ASDESCENT_SEED must be an unsigned integer");
    }
  }
  std::cerr << "  seed " << seed << ", " << samples << " samples per suite\n";
  const VerificationReport rep = asdescent::run_selftest(seed, samples);
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(
        Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    print_row(c.name, c.pass ? "pass" : "FAIL  " + c.detail);
  }
  print_row("overall", rep.pass ? "pass" : "FAIL");
  emit(Json{{"seed", seed}, {"pass", rep.pass}, {"checks", checks}}, "");
  return rep.pass ? 0 : kExitVerify;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact Artin-Schreier descent over F_q(t): ramification data, torsor "
      "normal forms, certified extension towers, and ramified-cover plans"};
  app.require_subcommand(1);

  FieldArgs fa;
  std::string a_text, f_text, place_text, places_text, file, boundary,
      samples_list, output;
  int N = 1;
  bool extend = false;
  int st_samples = 40;

  CLI::App* c_classify =
      app.add_subcommand("classify", "Splitting behaviour of y^p - y = f");
  add_field_options(c_classify, &fa);
  c_classify->add_option("--f", f_text, "Defining element")->required();
  c_classify->add_option("--place", place_text, "Place of F_q(t)")
      ->required();

  CLI::App* c_nf = app.add_subcommand(
      "normal-form", "Class of a modulo regular functions and p^N-th powers");
  add_field_options(c_nf, &fa);
  c_nf->add_option("--a", a_text, "Class representative")->required();
  c_nf->add_option("--place", place_text, "Place of F_q(t)")->required();
  c_nf->add_option("--N", N, "Torsion exponent");

  CLI::App* c_kill = app.add_subcommand(
      "kill", "Build a tower certificate killing the class at one place");
  add_field_options(c_kill, &fa);
  c_kill->add_option("--a", a_text, "Class representative")->required();
  c_kill->add_option("--place", place_text, "Place of F_q(t)")->required();
  c_kill->add_option("--N", N, "Torsion exponent");
  c_kill->add_flag("--extend-constants", extend,
                   "Retry over a constant extension if a place has degree "
                   "> 1");
  c_kill->add_option("--output", output, "Write the certificate to a file");

  CLI::App* c_multi = app.add_subcommand(
      "kill-multi", "One shared tower killing the class at several places");
  add_field_options(c_multi, &fa);
  c_multi->add_option("--a", a_text, "Class representative")->required();
  c_multi
      ->add_option("--places", places_text,
                   "Comma-separated places, e.g. \"t,t - 1,inf\"")
      ->required();
  c_multi->add_option("--N", N, "Torsion exponent");
  c_multi->add_flag("--extend-constants", extend,
                    "Retry over a constant extension if a place has degree "
                    "> 1");
  c_multi->add_option("--output", output, "Write the certificate to a file");

  CLI::App* c_cover = app.add_subcommand(
      "cover", "Ramified-cover plan for a torsor file over a boundary");
  c_cover->add_option("--torsor", file, "Torsor JSON file")->required();
  c_cover->add_option("--boundary", boundary, "Comma-separated places")
      ->required();
  c_cover->add_option("--samples", samples_list,
                      "Comma-separated interior sample places");
  c_cover->add_option("--output", output, "Write the plan to a file");

  CLI::App* c_verify = app.add_subcommand(
      "verify", "Re-derive every claim of a certificate or cover plan");
  c_verify->add_option("file", file, "Certificate or plan JSON file")
      ->required();

  CLI::App* c_selftest =
      app.add_subcommand("selftest", "Run the invariant suites");
  c_selftest->add_option("--samples", st_samples,
                         "Randomized samples per suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*c_classify) return run_classify(fa, f_text, place_text);
    if (*c_nf) return run_normal_form(fa, a_text, place_text, N);
    if (*c_kill)
      return run_kill(fa, a_text, {place_text}, N, extend, output);
    if (*c_multi)
      return run_kill(fa, a_text, split_list(places_text), N, extend,
                      output);
    if (*c_cover) return run_cover(file, boundary, samples_list, output);
    if (*c_verify) return run_verify(file);
    if (*c_selftest) return run_selftest(st_samples);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCompute;
  }
  return kExitUsage;
}
