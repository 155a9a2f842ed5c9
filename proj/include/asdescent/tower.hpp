#pragma once

// Artin-Schreier towers over F_q(t).  Layer k adjoins x_k with
// x_k^p - x_k = f_k, where f_k has negative valuation prime to p at every
// tracked place; each tracked place is then totally ramified through the
// whole tower.  Valuations are normalized so the layer-k uniformizer has
// value 1 at level k (the base uniformizer has value p^k).
//
// Elements are exact: a level-k element is a polynomial of degree < p in x_k
// whose coefficients are level-(k-1) elements, bottoming out in rational
// functions.  The valuation of sum c_i x_k^i is min_i(p v(c_i) - s_k i),
// and the minimum is attained once because -s_k i runs over distinct classes
// mod p; this makes the formula exact, not just a bound.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "series.hpp"

namespace asdescent {

struct TowerElement {
  int level = 0;
  Rat base;                        // payload at level 0
  std::vector<TowerElement> kids;  // level >= 1: p coefficients, low to high

  bool is_zero() const {
    if (level == 0) return base.is_zero();
    for (const auto& k : kids)
      if (!k.is_zero()) return false;
    return true;
  }
};

struct TowerLayerData {
  long s = 0;  // -v(f_k) at this place, in level-(k-1) units
  long a = 0;  // pi_k = x_k^a * pi_{k-1}^b with -s a + p b = 1
  long b = 0;
};

struct TrackedPlace {
  Place base;
  std::vector<TowerLayerData> layers;
};

struct DefectResult {
  long v;                // valuation of the witness
  TowerElement witness;  // pi_{k-1}^{-m} - pi_k^{-m p}
};

class ASTower {
 public:
  ASTower(FieldPtr F, std::vector<Place> places) : F_(std::move(F)) {
    for (auto& P : places) {
      for (const auto& t : tracked_)
        if (t.base == P) throw Error("tracked places must be distinct");
      tracked_.push_back({P, {}});
      ctxs_.push_back(residue_ctx(P));
      pis_.push_back({from_rat(place_uniformizer(P))});
    }
    if (tracked_.empty()) throw Error("a tower needs at least one tracked place");
  }

  const Field& field() const { return *F_; }
  FieldPtr field_ptr() const { return F_; }
  int p() const { return F_->p(); }
  int levels() const { return static_cast<int>(fs_.size()); }
  long degree() const {
    long d = 1;
    for (int i = 0; i < levels(); ++i) d *= p();
    return d;
  }
  const std::vector<TowerElement>& defining() const { return fs_; }
  const std::vector<TrackedPlace>& tracked() const { return tracked_; }
  const ResidueCtxPtr& ctx(size_t i) const { return ctxs_.at(i); }

  std::optional<size_t> tracked_index(const Place& P) const {
    for (size_t i = 0; i < tracked_.size(); ++i)
      if (tracked_[i].base == P) return i;
    return std::nullopt;
  }

  // --- element constructors ------------------------------------------------

  TowerElement zero(int level) const {
    if (level == 0) return {0, rat_zero(*F_), {}};
    TowerElement e{level, rat_zero(*F_), {}};
    e.kids.assign(p(), zero(level - 1));
    return e;
  }

  TowerElement from_rat(const Rat& r, int level = 0) const {
    return lift({0, r, {}}, level);
  }

  TowerElement one(int level) const { return from_rat(rat_one(*F_), level); }

  // Generator x_k (a level-k element), k in [1, levels()].
  TowerElement x(int k) const {
    if (k < 1 || k > levels()) throw Error("no such tower layer");
    TowerElement e = zero(k);
    e.kids[1] = one(k - 1);
    return e;
  }

  TowerElement lift(TowerElement e, int level) const {
    if (e.level > level) throw Error("cannot lower a tower element");
    while (e.level < level) {
      TowerElement up{e.level + 1, rat_zero(*F_), {}};
      up.kids.assign(p(), zero(e.level));
      up.kids[0] = std::move(e);
      e = std::move(up);
    }
    return e;
  }

  // --- arithmetic ------------------------------------------------------

  TowerElement add(const TowerElement& a, const TowerElement& b) const {
    const int lv = std::max(a.level, b.level);
    if (a.level != lv) return add(lift(a, lv), b);
    if (b.level != lv) return add(a, lift(b, lv));
    if (lv == 0) return {0, a.base + b.base, {}};
    TowerElement r{lv, rat_zero(*F_), {}};
    r.kids.reserve(p());
    for (int i = 0; i < p(); ++i) r.kids.push_back(add(a.kids[i], b.kids[i]));
    return r;
  }

  TowerElement neg(const TowerElement& a) const {
    if (a.level == 0) return {0, -a.base, {}};
    TowerElement r{a.level, rat_zero(*F_), {}};
    r.kids.reserve(p());
    for (const auto& k : a.kids) r.kids.push_back(neg(k));
    return r;
  }

  TowerElement sub(const TowerElement& a, const TowerElement& b) const {
    return add(a, neg(b));
  }

  TowerElement mul(const TowerElement& a, const TowerElement& b) const {
    const int lv = std::max(a.level, b.level);
    if (a.level != lv) return mul(lift(a, lv), b);
    if (b.level != lv) return mul(a, lift(b, lv));
    if (lv == 0) return {0, a.base * b.base, {}};
    std::vector<TowerElement> out(2 * p() - 1, zero(lv - 1));
    for (int i = 0; i < p(); ++i) {
      if (a.kids[i].is_zero()) continue;
      for (int j = 0; j < p(); ++j) {
        if (b.kids[j].is_zero()) continue;
        out[i + j] = add(out[i + j], mul(a.kids[i], b.kids[j]));
      }
    }
    // Reduce with x^p = x + f (f = defining element of this layer).
    const TowerElement& f = fs_[lv - 1];
    for (int d = 2 * p() - 2; d >= p(); --d) {
      if (out[d].is_zero()) continue;
      out[d - p() + 1] = add(out[d - p() + 1], out[d]);
      out[d - p()] = add(out[d - p()], mul(out[d], f));
      out[d] = zero(lv - 1);
    }
    TowerElement r{lv, rat_zero(*F_), {}};
    r.kids.assign(out.begin(), out.begin() + p());
    return r;
  }

  TowerElement mul_fq(const Fq& c, const TowerElement& a) const {
    return mul(from_rat(rat_of_fq(Fq{F_.get(), c.v}), a.level), a);
  }

  // Inverse via the extended Euclidean algorithm in (level k-1)[X] modulo
  // X^p - X - f_k; the layer polynomial is irreducible, so any nonzero
  // remainder of degree 0 certifies the inverse.
  TowerElement inv(const TowerElement& a) const {
    if (a.is_zero()) throw DivisionByZero();
    if (a.level == 0) return {0, rat_inv(a.base), {}};
    const int lv = a.level;
    using TPoly = std::vector<TowerElement>;  // low to high, level lv-1
    auto trim = [&](TPoly& v) {
      while (!v.empty() && v.back().is_zero()) v.pop_back();
    };
    auto tp_sub = [&](const TPoly& x, const TPoly& y) {
      TPoly r(std::max(x.size(), y.size()), zero(lv - 1));
      for (size_t i = 0; i < r.size(); ++i) {
        const TowerElement xi = i < x.size() ? x[i] : zero(lv - 1);
        const TowerElement yi = i < y.size() ? y[i] : zero(lv - 1);
        r[i] = sub(xi, yi);
      }
      trim(r);
      return r;
    };
    auto tp_mul = [&](const TPoly& x, const TPoly& y) {
      if (x.empty() || y.empty()) return TPoly{};
      TPoly r(x.size() + y.size() - 1, zero(lv - 1));
      for (size_t i = 0; i < x.size(); ++i)
        for (size_t j = 0; j < y.size(); ++j)
          r[i + j] = add(r[i + j], mul(x[i], y[j]));
      trim(r);
      return r;
    };
    auto tp_divmod = [&](TPoly x, const TPoly& y) {
      TPoly q;
      const TowerElement lci = inv(y.back());
      while (x.size() >= y.size() && !x.empty()) {
        const size_t d = x.size() - y.size();
        const TowerElement c = mul(x.back(), lci);
        if (q.size() < d + 1) q.resize(d + 1, zero(lv - 1));
        q[d] = add(q[d], c);
        for (size_t i = 0; i < y.size(); ++i)
          x[d + i] = sub(x[d + i], mul(c, y[i]));
        trim(x);
      }
      return std::pair<TPoly, TPoly>{q, x};
    };

    TPoly A(a.kids.begin(), a.kids.end());
    trim(A);
    TPoly R(p() + 1, zero(lv - 1));  // X^p - X - f
    R[p()] = one(lv - 1);
    R[1] = neg(one(lv - 1));
    R[0] = neg(fs_[lv - 1]);
    TPoly r0 = R, r1 = A;
    TPoly s0{}, s1{one(lv - 1)};
    while (!r1.empty() && r1.size() > 1) {
      auto [q, rem] = tp_divmod(r0, r1);
      TPoly s2 = tp_sub(s0, tp_mul(q, s1));
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    if (r1.empty())
      throw Error("internal: layer polynomial is not irreducible");
    // r1 is a nonzero constant: s1 * A = r1 mod R.
    const TowerElement scale = inv(r1[0]);
    TowerElement out = zero(lv);
    for (size_t i = 0; i < s1.size() && i < static_cast<size_t>(p()); ++i)
      out.kids[i] = mul(s1[i], scale);
    return out;
  }

  TowerElement div(const TowerElement& a, const TowerElement& b) const {
    return mul(a, inv(b));
  }

  TowerElement pow(const TowerElement& a, long e) const {
    if (e < 0) return pow(inv(a), -e);
    TowerElement r = one(a.level);
    TowerElement base = a;
    while (e > 0) {
      if (e & 1) r = mul(r, base);
      base = mul(base, base);
      e >>= 1;
    }
    return r;
  }

  // The p-th power.  frob(x_k) = x_k + f_k by the defining relation, so
  // frob(sum c_i x^i) = sum frob(c_i) (x + f)^i, evaluated by Horner.
  TowerElement frob(const TowerElement& a) const {
    if (a.level == 0) return {0, rat_frob(a.base), {}};
    const int lv = a.level;
    const TowerElement y = add(x_at(lv), lift(fs_[lv - 1], lv));
    TowerElement r = zero(lv);
    for (int i = p() - 1; i >= 0; --i)
      r = add(mul(r, y), lift(frob(a.kids[i]), lv));
    return r;
  }

  TowerElement pow_pn(TowerElement a, int n) const {
    for (int i = 0; i < n; ++i) a = frob(a);
    return a;
  }

  bool eq(const TowerElement& a, const TowerElement& b) const {
    return sub(a, b).is_zero();
  }

  // --- valuations and residues ----------------------------------------

  std::optional<long> val(const TowerElement& e, size_t i) const {
    if (e.level == 0) return valuation(e.base, tracked_.at(i).base);
    const long s = tracked_.at(i).layers.at(e.level - 1).s;
    std::optional<long> best;
    for (int j = 0; j < p(); ++j) {
      const auto vk = val(e.kids[j], i);
      if (!vk) continue;
      const long cand = p() * *vk - s * j;
      if (!best || cand < *best) best = cand;
    }
    return best;
  }

  // Residue of a valuation-0 element: only the x^0 coefficient can carry
  // valuation 0 (the classes -s j mod p are distinct), so recurse on it.
  Fq residue_at(const TowerElement& e, size_t i) const {
    if (e.level == 0) return residue(*ctxs_.at(i), e.base);
    return residue_at(e.kids[0], i);
  }

  // Canonical uniformizer of tracked place i at level k (element of level k).
  const TowerElement& uniformizer(size_t i, int k) const {
    return pis_.at(i).at(k);
  }

  // Constant lift: residue-field element -> tower element of the level.
  TowerElement lift_const(const Fq& c, size_t i, int level) const {
    return from_rat(rat_of_poly(residue_lift(*ctxs_.at(i), c)), level);
  }

  struct TowerTerm {
    long e;
    Fq c;  // residue field of the tracked place
  };

  // Exact finite expansion of e at tracked place i below exponent B: after
  // subtracting the returned terms the remainder has valuation >= B.
  std::vector<TowerTerm> expand(const TowerElement& e, size_t i, long B,
                               TowerElement* remainder = nullptr) const {
    std::vector<TowerTerm> out;
    TowerElement cur = lift(e, levels());
    const TowerElement& pi = pis_.at(i).at(levels());
    while (!cur.is_zero()) {
      const auto v = val(cur, i);
      if (!v || *v >= B) break;
      const Fq cv = residue_at(mul(cur, pow(pi, -*v)), i);
      if (cv.is_zero())
        throw Error("internal: residue of the leading term vanished");
      out.push_back({*v, cv});
      cur = sub(cur, mul(lift_const(cv, i, levels()), pow(pi, *v)));
    }
    if (remainder) *remainder = cur;
    return out;
  }

  // v(pi_{k-1}^{-m} - pi_k^{-m p}) at place i, with the witness element.
  // The two inverse powers agree to leading order; the defect measures how
  // deep the agreement goes ((p-1) s - m p for a layer of slope s).
  DefectResult expansion_defect(size_t i, int layer, long m) const {
    if (layer < 1 || layer > levels()) throw Error("no such tower layer");
    if (m < 1) throw Error("defect order must be positive");
    const TowerElement lo = lift(pis_.at(i).at(layer - 1), layer);
    const TowerElement hi = pis_.at(i).at(layer);
    const TowerElement w = sub(pow(lo, -m), pow(hi, -m * p()));
    const auto v = val(w, i);
    if (!v) throw Error("internal: defect witness vanished");
    return {*v, w};
  }

  // --- growth -----------------------------------------------------------

  // Adjoins a layer with defining element f (level = current top).
  // Errors: NotNegativePrimeToP unless v_i(f) < 0 and prime to p at every
  // tracked place.
  ASTower extend(const TowerElement& f) const {
    if (f.level != levels())
      throw Error("defining element must live at the current top level");
    long newdeg = degree() * p();
    if (newdeg > 125) throw Error("tower degree cap (125) exceeded");
    ASTower next = *this;
    const int k = levels() + 1;
    next.fs_.push_back(f);
    for (size_t i = 0; i < tracked_.size(); ++i) {
      const auto v = val(f, i);
      if (!v || *v >= 0 || (*v % p()) == 0) throw NotNegativePrimeToP();
      const long s = -*v;
      long a = 0;
      for (long cand = 1; cand < p(); ++cand)
        if (((s * cand) % p()) == p() - 1) {
          a = cand;
          break;
        }
      const long b = (1 + s * a) / p();
      next.tracked_[i].layers.push_back({s, a, b});
      const TowerElement pi_new =
          next.mul(next.pow(next.x(k), a),
                   next.pow(next.lift(pis_[i].back(), k), b));
      next.pis_[i].push_back(pi_new);
      const auto vp = next.val(pi_new, i);
      if (!vp || *vp != 1)
        throw Error("internal: layer uniformizer has wrong valuation");
    }
    return next;
  }

  // --- text form --------------------------------------------------------
  // Level 0: rational-function syntax.  Level k: terms from the top power
  // down, "(coef)*xk^i" with the coefficient in level-(k-1) syntax;
  // the constant term prints as "(coef)".

  std::string to_string(const TowerElement& e) const {
    if (e.level == 0) return rat_to_string(e.base);
    std::string s;
    for (int i = p() - 1; i >= 0; --i) {
      if (e.kids[i].is_zero()) continue;
      if (!s.empty()) s += " + ";
      s += "(" + to_string(e.kids[i]) + ")";
      if (i >= 1) {
        s += "*x" + std::to_string(e.level);
        if (i >= 2) s += "^" + std::to_string(i);
      }
    }
    return s.empty() ? "0" : s;
  }

  TowerElement parse_element(int level, const std::string& s) const {
    size_t i = 0;
    TowerElement e = parse_element_at(level, s, i);
    detail::skip_ws(s, i);
    if (i != s.size()) throw ParseError("trailing characters", i);
    return e;
  }

  TowerElement parse_element_at(int level, const std::string& s,
                                size_t& i) const {
    if (level == 0) return {0, parse_rat_at(*F_, s, i), {}};
    detail::skip_ws(s, i);
    TowerElement e = zero(level);
    if (s.compare(i, 1, "0") == 0 &&
        (i + 1 >= s.size() || s[i + 1] == ')' || s[i + 1] == ' ')) {
      ++i;
      return e;
    }
    while (true) {
      detail::skip_ws(s, i);
      if (i >= s.size() || s[i] != '(') throw ParseError("expected '('", i);
      ++i;
      TowerElement coef = parse_element_at(level - 1, s, i);
      detail::skip_ws(s, i);
      if (i >= s.size() || s[i] != ')') throw ParseError("expected ')'", i);
      ++i;
      long deg = 0;
      detail::skip_ws(s, i);
      if (i < s.size() && s[i] == '*') {
        ++i;
        detail::skip_ws(s, i);
        const std::string var = "x" + std::to_string(level);
        if (s.compare(i, var.size(), var) != 0)
          throw ParseError("expected '" + var + "'", i);
        i += var.size();
        deg = 1;
        if (i < s.size() && s[i] == '^') {
          ++i;
          deg = detail::parse_uint(s, i);
        }
      }
      if (deg >= p()) throw ParseError("exponent exceeds p - 1", i);
      e.kids[deg] = add(e.kids[deg], coef);
      detail::skip_ws(s, i);
      if (i < s.size() && s[i] == '+') {
        ++i;
        continue;
      }
      break;
    }
    return e;
  }

 private:
  TowerElement x_at(int k) const { return x(k); }

  FieldPtr F_;
  std::vector<TowerElement> fs_;
  std::vector<TrackedPlace> tracked_;
  std::vector<ResidueCtxPtr> ctxs_;
  std::vector<std::vector<TowerElement>> pis_;
};

}  // namespace asdescent
