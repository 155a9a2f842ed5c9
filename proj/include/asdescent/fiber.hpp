#pragma once

// Exact fibers of an Artin-Schreier tower over a place where the defining
// elements are regular.  Per fiber point we carry a finite field built as a
// chain of AS quotients over the residue field of the base place, together
// with the values of the tower generators at that point.  Layer k then
// either splits (T^p - T = c solvable, p points above) or is inert (no
// root, residue degree multiplied by p); solvability is an F_p-linear
// question, decided exactly by Gaussian elimination.

#include <optional>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "tower.hpp"

namespace asdescent {

struct FiberElem {
  int level = 0;
  Fq c;                         // payload at level 0, element of the residue
                                // field of the base place
  std::vector<FiberElem> kids;  // level >= 1: p coefficients, low to high

  bool is_zero() const {
    if (level == 0) return c.is_zero();
    for (const auto& k : kids)
      if (!k.is_zero()) return false;
    return true;
  }
};

// A finite field presented as a chain of Artin-Schreier quotients
// E[x_1]/(x_1^p - x_1 - d_1)[x_2]/... over the residue field E; every d_k
// is certified to have no root in the previous level, so each quotient is a
// field (for prime p the AS polynomial over a field is split or
// irreducible, nothing between).
class FiberChain {
 public:
  explicit FiberChain(ResidueCtxPtr ctx) : ctx_(std::move(ctx)) {}

  const Field& E() const { return *ctx_->E; }
  const ResidueCtx& ctx() const { return *ctx_; }
  int p() const { return E().p(); }
  int levels() const { return static_cast<int>(defs_.size()); }

  long dim() const {  // F_p-dimension of the top algebra
    long d = E().k();
    for (int i = 0; i < levels(); ++i) d *= p();
    return d;
  }

  FiberElem zero(int level) const {
    if (level == 0) return {0, fq_zero(E()), {}};
    FiberElem e{level, fq_zero(E()), {}};
    e.kids.assign(p(), zero(level - 1));
    return e;
  }

  FiberElem from_fq(const Fq& a, int level = 0) const {
    if (!a.F->same(E())) throw FieldMismatch();
    return lift({0, a, {}}, level);
  }

  FiberElem one(int level) const { return from_fq(fq_one(E()), level); }

  // Generator x_k, as a level-k element (k in [1, levels()]).
  FiberElem gen(int k) const {
    if (k < 1 || k > levels()) throw Error("no such fiber layer");
    FiberElem e = zero(k);
    e.kids[1] = one(k - 1);
    return e;
  }

  FiberElem lift(FiberElem e, int level) const {
    if (e.level > level) throw Error("cannot lower a fiber element");
    while (e.level < level) {
      FiberElem up{e.level + 1, fq_zero(E()), {}};
      up.kids.assign(p(), zero(e.level));
      up.kids[0] = std::move(e);
      e = std::move(up);
    }
    return e;
  }

  FiberElem add(const FiberElem& a, const FiberElem& b) const {
    const int lv = std::max(a.level, b.level);
    if (a.level != lv) return add(lift(a, lv), b);
    if (b.level != lv) return add(a, lift(b, lv));
    if (lv == 0) return {0, a.c + b.c, {}};
    FiberElem r{lv, fq_zero(E()), {}};
    r.kids.reserve(p());
    for (int i = 0; i < p(); ++i) r.kids.push_back(add(a.kids[i], b.kids[i]));
    return r;
  }

  FiberElem neg(const FiberElem& a) const {
    if (a.level == 0) return {0, -a.c, {}};
    FiberElem r{a.level, fq_zero(E()), {}};
    r.kids.reserve(p());
    for (const auto& k : a.kids) r.kids.push_back(neg(k));
    return r;
  }

  FiberElem sub(const FiberElem& a, const FiberElem& b) const {
    return add(a, neg(b));
  }

  FiberElem mul(const FiberElem& a, const FiberElem& b) const {
    const int lv = std::max(a.level, b.level);
    if (a.level != lv) return mul(lift(a, lv), b);
    if (b.level != lv) return mul(a, lift(b, lv));
    if (lv == 0) return {0, a.c * b.c, {}};
    std::vector<FiberElem> out(2 * p() - 1, zero(lv - 1));
    for (int i = 0; i < p(); ++i)
      for (int j = 0; j < p(); ++j)
        out[i + j] = add(out[i + j], mul(a.kids[i], b.kids[j]));
    // Reduce with x^p = x + d, top degree first.
    const FiberElem& d = defs_[lv - 1];
    for (int deg = 2 * p() - 2; deg >= p(); --deg) {
      if (out[deg].is_zero()) continue;
      out[deg - p() + 1] = add(out[deg - p() + 1], out[deg]);
      out[deg - p()] = add(out[deg - p()], mul(out[deg], lift(d, lv - 1)));
      out[deg] = zero(lv - 1);
    }
    FiberElem r{lv, fq_zero(E()), {}};
    r.kids.assign(out.begin(), out.begin() + p());
    return r;
  }

  FiberElem pow_p(const FiberElem& a) const {
    FiberElem r = a;
    for (int i = 1; i < p(); ++i) r = mul(r, a);
    return r;
  }

  FiberElem wp(const FiberElem& a) const { return sub(pow_p(a), a); }

  bool eq(const FiberElem& a, const FiberElem& b) const {
    return sub(a, b).is_zero();
  }

  // F_p-coordinates of an element lifted to the top level; layout matches
  // from_coords (level digits outermost, residue-field coordinates inner).
  FpVec coords(const FiberElem& a) const {
    FpVec out;
    flat(lift(a, levels()), out);
    return out;
  }

  FiberElem from_coords(const FpVec& v) const {
    size_t pos = 0;
    FiberElem e = unflat(levels(), v, pos);
    if (pos != v.size()) throw Error("fiber coordinate size mismatch");
    return e;
  }

  // Solves wp(y) = c in the top algebra; nullopt when the AS layer is
  // inert.  The system is linear because wp is F_p-linear.
  std::optional<FiberElem> wp_solve(const FiberElem& c) const {
    const long n = dim();
    FpMat m(n, FpVec(n, 0));
    for (long j = 0; j < n; ++j) {
      FpVec ej(n, 0);
      ej[j] = 1;
      const FpVec col = coords(wp(from_coords(ej)));
      for (long r = 0; r < n; ++r) m[r][j] = col[r];
    }
    const auto x = fp_solve(std::move(m), coords(lift(c, levels())), p());
    if (!x) return std::nullopt;
    return from_coords(*x);
  }

  // A new chain with one more AS layer x^p - x = def on top.  The caller
  // certifies (via wp_solve) that def has no root at the current top, so
  // the quotient is again a field.
  FiberChain extended(const FiberElem& def) const {
    FiberChain next = *this;
    next.defs_.push_back(lift(def, levels()));
    return next;
  }

 private:
  void flat(const FiberElem& a, FpVec& out) const {
    if (a.level == 0) {
      for (int x : E().coeffs(a.c.v)) out.push_back(x);
      return;
    }
    for (const auto& k : a.kids) flat(k, out);
  }

  FiberElem unflat(int level, const FpVec& v, size_t& pos) const {
    if (level == 0) {
      std::vector<int> cf(E().k());
      for (int i = 0; i < E().k(); ++i) cf[i] = v.at(pos++);
      return {0, Fq{&E(), E().from_coeffs(cf)}, {}};
    }
    FiberElem e{level, fq_zero(E()), {}};
    e.kids.reserve(p());
    for (int i = 0; i < p(); ++i) e.kids.push_back(unflat(level - 1, v, pos));
    return e;
  }

  ResidueCtxPtr ctx_;
  std::vector<FiberElem> defs_;
};

// One point of the fiber over the base place: the field it lives in and the
// values of the tower generators x_1..x_k there.
struct FiberBranch {
  FiberChain chain;
  std::vector<FiberElem> xvals;
};

// Evaluates a tower element at a fiber point.  Throws NotAUnit if some
// coefficient has a pole at the base place (the tower is then ramified or
// worse there, and no fiber value exists).
inline FiberElem eval_at_branch(const FiberBranch& br, const TowerElement& e) {
  if (e.level == 0)
    return br.chain.from_fq(residue(br.chain.ctx(), e.base));
  if (static_cast<size_t>(e.level) > br.xvals.size())
    throw Error("fiber branch is missing a generator value");
  const FiberElem& xv = br.xvals[e.level - 1];
  FiberElem acc = br.chain.zero(0);
  for (int i = static_cast<int>(e.kids.size()) - 1; i >= 0; --i)
    acc = br.chain.add(br.chain.mul(acc, xv), eval_at_branch(br, e.kids[i]));
  return acc;
}

}  // namespace asdescent
