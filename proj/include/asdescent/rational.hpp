#pragma once

// Rational functions over F_q(t) in canonical form: the denominator is monic,
// gcd(num, den) = 1, and zero is represented as 0/1.

#include <string>
#include <utility>

#include "errors.hpp"
#include "poly.hpp"

namespace asdescent {

struct Rat {
  Poly num, den;

  bool is_zero() const { return num.is_zero(); }
  bool is_one() const { return num.is_one() && den.is_one(); }
  const Field* field() const { return num.F; }
};

inline Rat rat_make(Poly num, Poly den) {
  check_same(num, den);
  if (den.is_zero()) throw DivisionByZero();
  if (num.is_zero()) return {poly_zero(*num.F), poly_one(*num.F)};
  const Poly g = poly_gcd(num, den);
  if (g.deg() > 0) {
    num = num / g;
    den = den / g;
  }
  const Fq li = den.lc().inv();
  return {li * num, li * den};
}

inline Rat rat_zero(const Field& F) { return {poly_zero(F), poly_one(F)}; }
inline Rat rat_one(const Field& F) { return {poly_one(F), poly_one(F)}; }
inline Rat rat_of_poly(const Poly& a) { return {a, poly_one(*a.F)}; }
inline Rat rat_of_fq(const Fq& a) { return rat_of_poly(poly_const(a)); }
inline Rat rat_t(const Field& F) { return rat_of_poly(poly_t(F)); }

inline void check_same(const Rat& a, const Rat& b) { check_same(a.num, b.num); }

inline Rat operator+(const Rat& a, const Rat& b) {
  check_same(a, b);
  return rat_make(a.num * b.den + b.num * a.den, a.den * b.den);
}
inline Rat operator-(const Rat& a) { return {-a.num, a.den}; }
inline Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
inline Rat operator*(const Rat& a, const Rat& b) {
  check_same(a, b);
  return rat_make(a.num * b.num, a.den * b.den);
}
inline Rat rat_inv(const Rat& a) {
  if (a.is_zero()) throw DivisionByZero();
  return rat_make(a.den, a.num);
}
inline Rat operator/(const Rat& a, const Rat& b) { return a * rat_inv(b); }
inline bool operator==(const Rat& a, const Rat& b) {
  check_same(a, b);
  return a.num == b.num && a.den == b.den;
}
inline bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }

inline Rat rat_pow(const Rat& a, long e) {
  if (e < 0) return rat_pow(rat_inv(a), -e);
  Rat r = rat_one(*a.field());
  Rat base = a;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

// The p-th power, computed coefficientwise (exact Frobenius).
inline Rat rat_frob(const Rat& a) {
  return rat_make(poly_frob(a.num), poly_frob(a.den));
}

// f(1/t), written back in canonical form.  Swaps the charts of the line.
inline Rat rat_chart_swap(const Rat& a) {
  const Field& F = *a.field();
  auto rev = [&](const Poly& x) {
    Poly r{&F, std::vector<uint16_t>(x.c.rbegin(), x.c.rend())};
    r.trim();
    return r;
  };
  if (a.is_zero()) return a;
  const int dn = a.num.deg(), dd = a.den.deg();
  Poly n = rev(a.num), d = rev(a.den);
  if (dd > dn)
    n = poly_shift(n, dd - dn);
  else
    d = poly_shift(d, dn - dd);
  return rat_make(n, d);
}

// --- text form -------------------------------------------------------------
// "num / den" with the side parenthesized when it prints several terms;
// a denominator of one is left implicit.

namespace detail {

inline bool poly_multiterm(const Poly& a) {
  int n = 0;
  for (uint16_t x : a.c)
    if (x != 0) ++n;
  return n > 1;
}

}  // namespace detail

inline std::string rat_to_string(const Rat& a, const std::string& var = "t") {
  std::string n = poly_to_string(a.num, var);
  if (a.den.is_one()) return n;
  if (detail::poly_multiterm(a.num)) n = "(" + n + ")";
  std::string d = poly_to_string(a.den, var);
  if (detail::poly_multiterm(a.den)) d = "(" + d + ")";
  return n + " / " + d;
}

inline Poly parse_poly_operand(const Field& F, const std::string& s, size_t& i,
                               const std::string& var) {
  detail::skip_ws(s, i);
  if (i < s.size() && s[i] == '(') {
    ++i;
    Poly r = parse_poly_at(F, s, i, var);
    detail::skip_ws(s, i);
    if (i >= s.size() || s[i] != ')') throw ParseError("expected ')'", i);
    ++i;
    return r;
  }
  return parse_poly_at(F, s, i, var);
}

inline Rat parse_rat_at(const Field& F, const std::string& s, size_t& i,
                        const std::string& var = "t") {
  Poly n = parse_poly_operand(F, s, i, var);
  detail::skip_ws(s, i);
  if (i < s.size() && s[i] == '/') {
    ++i;
    Poly d = parse_poly_operand(F, s, i, var);
    return rat_make(n, d);
  }
  return rat_of_poly(n);
}

inline Rat parse_rat(const Field& F, const std::string& s,
                     const std::string& var = "t") {
  size_t i = 0;
  Rat r = parse_rat_at(F, s, i, var);
  detail::skip_ws(s, i);
  if (i != s.size()) throw ParseError("trailing characters", i);
  return r;
}

}  // namespace asdescent
