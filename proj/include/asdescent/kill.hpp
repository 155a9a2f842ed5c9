#pragma once

// The descent engine: given classes a with prescribed torsion exponents N
// at a set of degree-1 places, build one Artin-Schreier tower and per-class
// witnesses h, g with  a = h^{p^N} + g  and  v(g) >= 0 at every tracked
// place.  Each round strips the p-divisible polar support (termwise exact
// p-th roots), and one layer with  v_i(f) = -s_i  rewrites the surviving
// prime-to-p polar terms as p-divisible ones at the next level; the slope
// rule (p-1) s > m p makes the rewriting error regular.
//
// The shape of the layer element is pluggable: the default chooser uses the
// canonical monomial sum over tracked uniformizers, while the cover builder
// substitutes elements whose poles stay over a prescribed boundary.  Any
// chooser is sound: the engine re-derives every valuation and verifies the
// final witness identities exactly.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qclass.hpp"
#include "tower.hpp"

namespace asdescent {

struct KillInput {
  Rat a;
  int N = 1;
};

struct KillEntry {
  Rat a;
  int N;
  TowerElement h;  // at the final tower level
  TowerElement g;  // a - h^{p^N}, regular at every tracked place
};

struct KillResult {
  ASTower tower;
  std::vector<KillEntry> entries;
  std::vector<std::string> log;  // layer decisions and retries
};

// Produces the next defining element for the given tower; the returned f
// must satisfy v_i(f) <= -min_s[i] with v_i(f) negative and prime to p at
// every tracked place i (min_s entries are prime to p).
using LayerChooser =
    std::function<TowerElement(const ASTower&, const std::vector<long>&)>;

// Canonical layers: f = sum_i pi_i^{-s_i} over the tracked uniformizers at
// the current level.  Cross terms cannot disturb the valuations: pi_j^{-s}
// has valuation >= 0 at place i for j != i, so v_i(f) = -s_i on the nose.
inline TowerElement canonical_layer(const ASTower& T,
                                    const std::vector<long>& min_s) {
  const int L = T.levels();
  TowerElement f = T.zero(L);
  for (size_t i = 0; i < T.tracked().size(); ++i)
    f = T.add(f, T.pow(T.uniformizer(i, L), -min_s[i]));
  return f;
}

namespace detail {

struct StripOutcome {
  TowerElement h;                                      // p-th roots, exact
  std::vector<std::vector<ASTower::TowerTerm>> resid;  // per place, prime-to-p
};

// Splits the polar support of z: exponents divisible by p are replaced by
// the exact p-th root terms accumulated in h (z - h^p has no p-divisible
// polar exponents left), the rest is reported per place.  Stripping at one
// tracked place cannot disturb another: every subtracted term c pi_i^v has
// nonnegative valuation at the other tracked places.
inline StripOutcome strip_p_part(const ASTower& T, const TowerElement& z) {
  const int L = T.levels();
  StripOutcome out{T.zero(L), {}};
  out.resid.resize(T.tracked().size());
  for (size_t i = 0; i < T.tracked().size(); ++i) {
    const TowerElement& pi = T.uniformizer(i, L);
    TowerElement cur = T.lift(z, L);
    while (!cur.is_zero()) {
      const auto v = T.val(cur, i);
      if (!v || *v >= 0) break;
      const Fq cv = T.residue_at(T.mul(cur, T.pow(pi, -*v)), i);
      cur = T.sub(cur, T.mul(T.lift_const(cv, i, L), T.pow(pi, *v)));
      if (*v % T.p() == 0) {
        out.h = T.add(out.h, T.mul(T.lift_const(cv.pth_root(), i, L),
                                   T.pow(pi, *v / T.p())));
      } else {
        out.resid[i].push_back({*v, cv});
      }
    }
  }
  return out;
}

}  // namespace detail

// Core driver shared by all descent entry points.
inline KillResult kill_classes(FieldPtr F, const std::vector<Place>& places,
                               const std::vector<KillInput>& inputs,
                               const LayerChooser& chooser = canonical_layer) {
  for (const Place& P : places)
    if (P.degree() != 1) throw UnsupportedPlaceDegree();
  if (inputs.empty()) throw ZeroInput("no classes to kill");
  int maxN = 1;
  for (const auto& in : inputs) {
    if (in.N < 1) throw Error("torsion exponent must be positive");
    maxN = std::max(maxN, in.N);
  }

  KillResult res{ASTower(F, places), {}, {}};
  const int p = res.tower.p();
  std::vector<TowerElement> cur;
  for (const auto& in : inputs) cur.push_back(res.tower.from_rat(in.a));

  for (int round = 1; round <= maxN; ++round) {
    std::vector<size_t> active;
    for (size_t e = 0; e < inputs.size(); ++e)
      if (inputs[e].N >= round) active.push_back(e);
    if (active.empty()) break;

    std::vector<long> bump(places.size(), 0);
    for (int attempt = 0;; ++attempt) {
      if (attempt > 8) throw Error("internal: layer retries exhausted");
      std::vector<TowerElement> next_cur = cur;

      // Phase A at the current level.
      std::vector<detail::StripOutcome> pre;
      bool any_resid = false;
      for (size_t e : active) {
        pre.push_back(detail::strip_p_part(res.tower, cur[e]));
        for (const auto& r : pre.back().resid) any_resid |= !r.empty();
      }

      if (!any_resid) {
        for (size_t k = 0; k < active.size(); ++k)
          next_cur[active[k]] = pre[k].h;
        cur = std::move(next_cur);
        break;
      }

      // Slope targets from the worst pole order per place, then one layer.
      std::vector<long> m(places.size(), 0), min_s(places.size(), 1);
      for (size_t i = 0; i < places.size(); ++i) {
        for (const auto& o : pre)
          for (const auto& t : o.resid[i]) m[i] = std::max(m[i], -t.e);
        min_s[i] = (m[i] > 0 ? choose_s(p, m[i]) : 1) + bump[i] * p;
      }
      const TowerElement f = chooser(res.tower, min_s);

      bool layer_ok = !f.is_zero();
      for (size_t i = 0; layer_ok && i < places.size(); ++i) {
        const auto v = res.tower.val(f, i);
        layer_ok = v && *v < 0 && *v % p != 0 && (p - 1) * (-*v) > m[i] * p;
      }
      if (!layer_ok) {
        for (auto& b : bump) ++b;
        res.log.push_back("round " + std::to_string(round) +
                          ": layer rejected, retrying with larger slopes");
        continue;
      }

      ASTower grown = res.tower.extend(f);

      // Phase B: strip the rewritten classes at the new level.  The exact
      // expansion of pi_{k-1}^{-m} in pi_k has p-divisible polar exponents
      // whenever (p-1) s > m p, so residuals here mean the slope was too
      // small for some cross term; retry with larger slopes.
      bool clean = true;
      for (size_t k = 0; k < active.size() && clean; ++k) {
        const size_t e = active[k];
        const TowerElement zp =
            grown.sub(grown.lift(cur[e], grown.levels()),
                      grown.frob(grown.lift(pre[k].h, grown.levels())));
        const auto post = detail::strip_p_part(grown, zp);
        for (const auto& r : post.resid) clean &= r.empty();
        if (clean)
          next_cur[e] = grown.add(grown.lift(pre[k].h, grown.levels()), post.h);
      }
      if (!clean) {
        for (auto& b : bump) ++b;
        res.log.push_back("round " + std::to_string(round) +
                          ": residual after rewrite, retrying with larger "
                          "slopes");
        continue;
      }

      std::string note = "round " + std::to_string(round) + ": layer with s =";
      for (size_t i = 0; i < places.size(); ++i)
        note += " " + std::to_string(grown.tracked()[i].layers.back().s);
      res.log.push_back(note);
      res.tower = std::move(grown);
      cur = std::move(next_cur);
      break;
    }
  }

  // Final witnesses at the top level, verified exactly.
  const int L = res.tower.levels();
  for (size_t e = 0; e < inputs.size(); ++e) {
    KillEntry entry{inputs[e].a, inputs[e].N, res.tower.lift(cur[e], L),
                    res.tower.zero(L)};
    entry.g = res.tower.sub(res.tower.from_rat(inputs[e].a, L),
                            res.tower.pow_pn(entry.h, inputs[e].N));
    for (size_t i = 0; i < places.size(); ++i) {
      const auto v = res.tower.val(entry.g, i);
      if (v && *v < 0) throw Error("internal: residual pole after descent");
    }
    res.entries.push_back(std::move(entry));
  }
  return res;
}

}  // namespace asdescent
