#pragma once

// Dense univariate polynomials over a small finite field.  Coefficients are
// stored low degree first as element indices into the owning Field's tables;
// the vector carries no trailing zeros (the zero polynomial is empty).

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "fq.hpp"

namespace asdescent {

struct Poly {
  const Field* F = nullptr;
  std::vector<uint16_t> c;

  int deg() const { return static_cast<int>(c.size()) - 1; }
  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }
  Fq coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c.size())) return {F, 0};
    return {F, c[i]};
  }
  Fq lc() const { return coeff(deg()); }

  void trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
  }
};

inline void check_same(const Poly& a, const Poly& b) {
  if (!a.F || !b.F || !a.F->same(*b.F)) throw FieldMismatch();
}

inline Poly poly_zero(const Field& F) { return {&F, {}}; }
inline Poly poly_const(const Fq& a) {
  Poly r{a.F, {}};
  if (!a.is_zero()) r.c.push_back(a.v);
  return r;
}
inline Poly poly_one(const Field& F) { return poly_const(fq_one(F)); }
inline Poly poly_t(const Field& F) { return {&F, {0, 1}}; }

inline Poly poly_from_coeffs(const Field& F, const std::vector<Fq>& cs) {
  Poly r{&F, {}};
  r.c.reserve(cs.size());
  for (const Fq& a : cs) {
    if (a.F && !a.F->same(F)) throw FieldMismatch();
    r.c.push_back(a.v);
  }
  r.trim();
  return r;
}

// Monomial a * t^n.
inline Poly poly_monomial(const Fq& a, int n) {
  Poly r{a.F, {}};
  if (a.is_zero()) return r;
  r.c.assign(n + 1, 0);
  r.c[n] = a.v;
  return r;
}

inline Poly operator+(const Poly& a, const Poly& b) {
  check_same(a, b);
  Poly r{a.F, {}};
  r.c.resize(std::max(a.c.size(), b.c.size()), 0);
  for (size_t i = 0; i < r.c.size(); ++i) {
    const uint16_t x = i < a.c.size() ? a.c[i] : 0;
    const uint16_t y = i < b.c.size() ? b.c[i] : 0;
    r.c[i] = a.F->add(x, y);
  }
  r.trim();
  return r;
}

inline Poly operator-(const Poly& a) {
  Poly r = a;
  for (auto& x : r.c) x = a.F->neg(x);
  return r;
}

inline Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

inline Poly operator*(const Poly& a, const Poly& b) {
  check_same(a, b);
  Poly r{a.F, {}};
  if (a.is_zero() || b.is_zero()) return r;
  r.c.assign(a.c.size() + b.c.size() - 1, 0);
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (size_t j = 0; j < b.c.size(); ++j) {
      if (b.c[j] == 0) continue;
      r.c[i + j] = a.F->add(r.c[i + j], a.F->mul(a.c[i], b.c[j]));
    }
  }
  r.trim();
  return r;
}

inline Poly operator*(const Fq& a, const Poly& b) {
  if (b.F && a.F && !a.F->same(*b.F)) throw FieldMismatch();
  Poly r = b;
  for (auto& x : r.c) x = b.F->mul(a.v, x);
  r.trim();
  return r;
}

inline bool operator==(const Poly& a, const Poly& b) {
  check_same(a, b);
  return a.c == b.c;
}
inline bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

inline Poly poly_shift(const Poly& a, int n) {
  if (a.is_zero()) return a;
  Poly r{a.F, std::vector<uint16_t>(a.c.size() + n, 0)};
  std::copy(a.c.begin(), a.c.end(), r.c.begin() + n);
  return r;
}

// Quotient and remainder; throws DivisionByZero on zero divisor.
inline std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  check_same(a, b);
  if (b.is_zero()) throw DivisionByZero();
  Poly q = poly_zero(*a.F);
  Poly r = a;
  const Fq lci = b.lc().inv();
  while (!r.is_zero() && r.deg() >= b.deg()) {
    const int d = r.deg() - b.deg();
    const Fq f = r.lc() * lci;
    q = q + poly_monomial(f, d);
    r = r - poly_shift(f * b, d);
  }
  return {q, r};
}

inline Poly operator/(const Poly& a, const Poly& b) {
  return poly_divmod(a, b).first;
}
inline Poly operator%(const Poly& a, const Poly& b) {
  return poly_divmod(a, b).second;
}

inline Poly poly_monic(const Poly& a) {
  if (a.is_zero()) return a;
  return a.lc().inv() * a;
}

// Monic gcd.
inline Poly poly_gcd(Poly a, Poly b) {
  check_same(a, b);
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return poly_monic(a);
}

// Extended gcd: returns (g, u, v) with u a + v b = g, g monic (or zero).
struct PolyEgcd {
  Poly g, u, v;
};
inline PolyEgcd poly_egcd(const Poly& a, const Poly& b) {
  check_same(a, b);
  Poly r0 = a, r1 = b;
  Poly s0 = poly_one(*a.F), s1 = poly_zero(*a.F);
  Poly t0 = poly_zero(*a.F), t1 = poly_one(*a.F);
  while (!r1.is_zero()) {
    auto [q, r] = poly_divmod(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    Poly s2 = s0 - q * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly t2 = t0 - q * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (!r0.is_zero()) {
    const Fq li = r0.lc().inv();
    r0 = li * r0;
    s0 = li * s0;
    t0 = li * t0;
  }
  return {r0, s0, t0};
}

inline Fq poly_eval(const Poly& a, const Fq& x) {
  Fq acc = fq_zero(*a.F);
  for (int i = a.deg(); i >= 0; --i) acc = acc * x + a.coeff(i);
  return acc;
}

inline Poly poly_pow(Poly a, long e) {
  Poly r = poly_one(*a.F);
  while (e > 0) {
    if (e & 1) r = r * a;
    a = a * a;
    e >>= 1;
  }
  return r;
}

// The p-th power (sum a_i t^i)^p = sum a_i^p t^{p i}.
inline Poly poly_frob(const Poly& a) {
  const int p = a.F->p();
  Poly r{a.F, {}};
  if (a.is_zero()) return r;
  r.c.assign(static_cast<size_t>(a.deg()) * p + 1, 0);
  for (int i = 0; i <= a.deg(); ++i) r.c[static_cast<size_t>(i) * p] = a.F->frob(a.c[i]);
  r.trim();
  return r;
}

// Order of vanishing of a at the monic irreducible pi (a nonzero).
inline long poly_ord(Poly a, const Poly& pi) {
  if (a.is_zero()) throw ZeroInput("ord of zero polynomial");
  long n = 0;
  while (true) {
    auto [q, r] = poly_divmod(a, pi);
    if (!r.is_zero()) return n;
    ++n;
    a = std::move(q);
  }
}

// Deterministic total order: by degree, then coefficient indices from the
// top degree down.
inline bool poly_less(const Poly& a, const Poly& b) {
  if (a.deg() != b.deg()) return a.deg() < b.deg();
  for (int i = a.deg(); i >= 0; --i)
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  return false;
}

// Enumerates monic polynomials of exact degree d in the poly_less order.
// Returns false from the callback to stop early; function returns whether
// the enumeration was stopped.
template <class Fn>
inline bool enumerate_monic(const Field& F, int d, Fn&& fn) {
  long count = 1;
  for (int i = 0; i < d; ++i) {
    count *= F.q();
    if (count > 2000000) throw SearchSpaceTooLarge();
  }
  for (long idx = 0; idx < count; ++idx) {
    Poly m{&F, std::vector<uint16_t>(d + 1, 0)};
    long t = idx;
    // Low-order coefficients vary fastest from the top down so the order
    // matches poly_less.
    for (int i = d - 1; i >= 0; --i) {
      m.c[i] = static_cast<uint16_t>(t % F.q());
      t /= F.q();
    }
    m.c[d] = 1;
    if (!fn(m)) return true;
  }
  return false;
}

inline bool poly_irreducible(const Poly& a) {
  if (a.deg() < 1) return false;
  for (int dd = 1; 2 * dd <= a.deg(); ++dd) {
    bool divisible = false;
    enumerate_monic(*a.F, dd, [&](const Poly& m) {
      if ((a % m).is_zero()) {
        divisible = true;
        return false;
      }
      return true;
    });
    if (divisible) return false;
  }
  return true;
}

// Full factorization into monic irreducibles (with multiplicity), by trial
// division in increasing poly_less order; also returns the unit (lc).
struct PolyFactor {
  Poly irr;
  int mult;
};
inline std::vector<PolyFactor> poly_factor(const Poly& a, Fq* unit = nullptr) {
  if (a.is_zero()) throw ZeroInput("factor of zero polynomial");
  if (unit) *unit = a.lc();
  Poly rest = poly_monic(a);
  std::vector<PolyFactor> out;
  for (int d = 1; rest.deg() >= 1 && d <= rest.deg();) {
    bool hit = false;
    enumerate_monic(*a.F, d, [&](const Poly& m) {
      if (!poly_irreducible(m)) return true;
      if (!(rest % m).is_zero()) return true;
      int mult = 0;
      while ((rest % m).is_zero()) {
        rest = rest / m;
        ++mult;
      }
      out.push_back({m, mult});
      hit = true;
      return false;
    });
    if (!hit) ++d;
  }
  return out;
}

// --- text form -------------------------------------------------------------
// Terms print from the top degree down, joined by " + ".  A coefficient of
// one is left implicit except in the constant term, and the exponent is
// omitted for degrees 0 and 1: "t^3 + t + 1", "2*t^2 + 1", "[1,1]*t".

inline std::string poly_to_string(const Poly& a, const std::string& var = "t") {
  if (a.is_zero()) return "0";
  std::string s;
  for (int i = a.deg(); i >= 0; --i) {
    if (a.c[i] == 0) continue;
    if (!s.empty()) s += " + ";
    const Fq ci = a.coeff(i);
    if (i == 0) {
      s += fq_to_string(ci);
    } else {
      if (!ci.is_one()) {
        s += fq_to_string(ci);
        s += "*";
      }
      s += var;
      if (i >= 2) s += "^" + std::to_string(i);
    }
  }
  return s;
}

namespace detail {

// Parses one product term "coef", "coef*var^d", "var^d", ... at position i.
inline void parse_poly_term(const Field& F, const std::string& s, size_t& i,
                            const std::string& var, Fq& coef, long& deg) {
  skip_ws(s, i);
  coef = fq_one(F);
  deg = 0;
  bool saw_coef = false;
  if (i < s.size() && (s[i] == '[' || (s[i] >= '0' && s[i] <= '9'))) {
    coef = parse_fq_at(F, s, i);
    saw_coef = true;
    skip_ws(s, i);
    if (i < s.size() && s[i] == '*') {
      ++i;
      skip_ws(s, i);
    } else {
      return;  // bare constant
    }
  }
  if (s.compare(i, var.size(), var) != 0) {
    if (saw_coef) throw ParseError("expected '" + var + "'", i);
    throw ParseError("expected a term", i);
  }
  i += var.size();
  deg = 1;
  skip_ws(s, i);
  if (i < s.size() && s[i] == '^') {
    ++i;
    deg = parse_uint(s, i);
  }
}

}  // namespace detail

inline Poly parse_poly_at(const Field& F, const std::string& s, size_t& i,
                          const std::string& var = "t") {
  Poly r = poly_zero(F);
  bool negate = false;
  detail::skip_ws(s, i);
  if (i < s.size() && s[i] == '-') {
    negate = true;
    ++i;
  }
  while (true) {
    Fq coef{&F, 0};
    long d = 0;
    detail::parse_poly_term(F, s, i, var, coef, d);
    if (d > 1000000) throw ParseError("exponent too large", i);
    if (negate) coef = -coef;
    r = r + poly_monomial(coef, static_cast<int>(d));
    detail::skip_ws(s, i);
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      negate = s[i] == '-';
      ++i;
      continue;
    }
    break;
  }
  return r;
}

inline Poly parse_poly(const Field& F, const std::string& s,
                       const std::string& var = "t") {
  size_t i = 0;
  Poly r = parse_poly_at(F, s, i, var);
  detail::skip_ws(s, i);
  if (i != s.size()) throw ParseError("trailing characters", i);
  return r;
}

}  // namespace asdescent
