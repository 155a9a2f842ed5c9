#pragma once

// Exact arithmetic in small finite fields F_q, q = p^k with p in {2,3,5,7}
// and q <= 343.  A Field precomputes full lookup tables at construction, so
// element operations are table reads on 16-bit indices.  An element index
// encodes the coefficient vector of the residue class in base p:
// idx = sum c_i p^i for the class  sum c_i g^i  (g = class of the generator).

#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace asdescent {

namespace detail {

// Arithmetic on F_p[x] with coefficient vectors (low to high, ints in [0,p)).
inline void fpx_trim(std::vector<int>& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline std::vector<int> fpx_mul(const std::vector<int>& a,
                                const std::vector<int>& b, int p) {
  if (a.empty() || b.empty()) return {};
  std::vector<int> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  fpx_trim(r);
  return r;
}

inline int fp_inv_free(int a, int p) {
  a %= p;
  if (a < 0) a += p;
  int r = 1;
  for (int e = p - 2; e > 0; e >>= 1) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
  }
  return r;
}

inline std::vector<int> fpx_mod(std::vector<int> a, const std::vector<int>& m,
                                int p) {
  fpx_trim(a);
  const int dm = static_cast<int>(m.size()) - 1;
  const int lc_inv = fp_inv_free(m.back(), p);
  while (static_cast<int>(a.size()) - 1 >= dm) {
    const int da = static_cast<int>(a.size()) - 1;
    const int f = a.back() * lc_inv % p;
    for (int i = 0; i <= dm; ++i) {
      const int pos = da - dm + i;
      a[pos] = ((a[pos] - f * m[i]) % p + p) % p;
    }
    fpx_trim(a);
  }
  return a;
}

inline bool fpx_irreducible(const std::vector<int>& m, int p) {
  const int d = static_cast<int>(m.size()) - 1;
  if (d < 1) return false;
  // Trial division by every monic polynomial of degree 1..d/2.
  for (int dd = 1; 2 * dd <= d; ++dd) {
    long count = 1;
    for (int i = 0; i < dd; ++i) count *= p;
    for (long idx = 0; idx < count; ++idx) {
      std::vector<int> div(dd + 1, 0);
      long t = idx;
      for (int i = 0; i < dd; ++i) {
        div[i] = static_cast<int>(t % p);
        t /= p;
      }
      div[dd] = 1;
      if (fpx_mod(m, div, p).empty()) return false;
    }
  }
  return true;
}

}  // namespace detail

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// One finite field F_{p^k}, with all unary/binary operation tables baked in.
class Field {
 public:
  static FieldPtr make(int p, int k, std::vector<int> modulus) {
    return FieldPtr(new Field(p, k, std::move(modulus)));
  }

  static FieldPtr make_default(int p, int k) {
    return make(p, k, default_modulus(p, k));
  }

  // Least monic irreducible of degree k over F_p, ordering the non-leading
  // coefficient vectors (c_0, ..., c_{k-1}) as base-p integers sum c_i p^i.
  static std::vector<int> default_modulus(int p, int k) {
    check_params(p, k);
    if (k == 1) return {0, 1};  // the polynomial x
    long count = 1;
    for (int i = 0; i < k; ++i) count *= p;
    for (long idx = 0; idx < count; ++idx) {
      std::vector<int> m(k + 1, 0);
      long t = idx;
      for (int i = 0; i < k; ++i) {
        m[i] = static_cast<int>(t % p);
        t /= p;
      }
      m[k] = 1;
      if (detail::fpx_irreducible(m, p)) return m;
    }
    throw IrreduciblePolynomialNotFound();
  }

  int p() const { return p_; }
  int k() const { return k_; }
  int q() const { return q_; }
  const std::vector<int>& modulus() const { return modulus_; }

  bool same(const Field& o) const {
    return this == &o ||
           (p_ == o.p_ && k_ == o.k_ && modulus_ == o.modulus_);
  }

  uint16_t add(uint16_t a, uint16_t b) const { return add_[a * q_ + b]; }
  uint16_t sub(uint16_t a, uint16_t b) const { return add_[a * q_ + neg_[b]]; }
  uint16_t neg(uint16_t a) const { return neg_[a]; }
  uint16_t mul(uint16_t a, uint16_t b) const { return mul_[a * q_ + b]; }
  uint16_t inv(uint16_t a) const {
    if (a == 0) throw DivisionByZero();
    return inv_[a];
  }
  uint16_t div(uint16_t a, uint16_t b) const { return mul(a, inv(b)); }
  uint16_t frob(uint16_t a) const { return frob_[a]; }
  uint16_t pth_root(uint16_t a) const { return pth_root_[a]; }

  uint16_t pow(uint16_t a, long e) const {
    if (a == 0) {
      if (e < 0) throw DivisionByZero();
      return e == 0 ? one_idx() : 0;
    }
    if (e < 0) {
      a = inv(a);
      e = -e;
    }
    uint16_t r = one_idx();
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }

  uint16_t zero_idx() const { return 0; }
  uint16_t one_idx() const { return 1; }
  uint16_t gen_idx() const { return k_ > 1 ? static_cast<uint16_t>(p_) : 0; }

  uint16_t of_int(long n) const {
    long r = n % p_;
    if (r < 0) r += p_;
    return static_cast<uint16_t>(r);
  }

  uint16_t from_coeffs(const std::vector<int>& c) const {
    long idx = 0, w = 1;
    for (int i = 0; i < k_; ++i) {
      int ci = i < static_cast<int>(c.size()) ? c[i] : 0;
      ci %= p_;
      if (ci < 0) ci += p_;
      idx += ci * w;
      w *= p_;
    }
    return static_cast<uint16_t>(idx);
  }

  std::vector<int> coeffs(uint16_t a) const {
    std::vector<int> c(k_);
    for (int i = 0; i < k_; ++i) {
      c[i] = a % p_;
      a = static_cast<uint16_t>(a / p_);
    }
    return c;
  }

 private:
  Field(int p, int k, std::vector<int> modulus)
      : p_(p), k_(k), modulus_(std::move(modulus)) {
    check_params(p, k);
    if (static_cast<int>(modulus_.size()) != k_ + 1 || modulus_[k_] != 1)
      throw Error("modulus must be monic of degree k");
    for (int c : modulus_)
      if (c < 0 || c >= p_) throw Error("modulus coefficients must lie in [0,p)");
    if (!detail::fpx_irreducible(modulus_, p_))
      throw Error("modulus is not irreducible");
    q_ = 1;
    for (int i = 0; i < k_; ++i) q_ *= p_;
    build_tables();
  }

  static void check_params(int p, int k) {
    if (p != 2 && p != 3 && p != 5 && p != 7)
      throw UnsupportedFieldSize("characteristic must be one of 2, 3, 5, 7");
    if (k < 1) throw UnsupportedFieldSize("extension degree must be positive");
    long q = 1;
    for (int i = 0; i < k; ++i) {
      q *= p;
      if (q > 343) throw UnsupportedFieldSize("field size exceeds 343");
    }
  }

  void build_tables() {
    add_.resize(static_cast<size_t>(q_) * q_);
    mul_.resize(static_cast<size_t>(q_) * q_);
    neg_.resize(q_);
    inv_.resize(q_);
    frob_.resize(q_);
    pth_root_.resize(q_);

    auto to_vec = [&](int a) {
      std::vector<int> v(k_);
      for (int i = 0; i < k_; ++i) {
        v[i] = a % p_;
        a /= p_;
      }
      return v;
    };
    auto to_idx = [&](const std::vector<int>& v) {
      int idx = 0, w = 1;
      for (int i = 0; i < k_; ++i) {
        idx += (i < static_cast<int>(v.size()) ? v[i] : 0) * w;
        w *= p_;
      }
      return static_cast<uint16_t>(idx);
    };

    for (int a = 0; a < q_; ++a) {
      const auto va = to_vec(a);
      std::vector<int> nv(k_);
      for (int i = 0; i < k_; ++i) nv[i] = (p_ - va[i]) % p_;
      neg_[a] = to_idx(nv);
      for (int b = 0; b < q_; ++b) {
        const auto vb = to_vec(b);
        std::vector<int> s(k_);
        for (int i = 0; i < k_; ++i) s[i] = (va[i] + vb[i]) % p_;
        add_[static_cast<size_t>(a) * q_ + b] = to_idx(s);
        auto prod = detail::fpx_mul(va, vb, p_);
        prod = detail::fpx_mod(std::move(prod), modulus_, p_);
        mul_[static_cast<size_t>(a) * q_ + b] = to_idx(prod);
      }
    }
    inv_[0] = 0;
    for (int a = 1; a < q_; ++a)
      for (int b = 1; b < q_; ++b)
        if (mul_[static_cast<size_t>(a) * q_ + b] == 1) {
          inv_[a] = static_cast<uint16_t>(b);
          break;
        }
    for (int a = 0; a < q_; ++a) {
      uint16_t r = static_cast<uint16_t>(a);
      uint16_t acc = 1;
      // a^p by square and multiply on the already-built mul table.
      int e = p_;
      while (e > 0) {
        if (e & 1) acc = mul_[static_cast<size_t>(acc) * q_ + r];
        r = mul_[static_cast<size_t>(r) * q_ + r];
        e >>= 1;
      }
      frob_[a] = acc;
    }
    // Frobenius is a bijection on a finite field; invert the permutation.
    for (int a = 0; a < q_; ++a) pth_root_[frob_[a]] = static_cast<uint16_t>(a);
    for (int a = 0; a < q_; ++a)
      if (frob_[pth_root_[a]] != a)
        throw Error("internal: Frobenius table is not a permutation");
  }

  int p_, k_, q_;
  std::vector<int> modulus_;
  std::vector<uint16_t> add_, mul_, neg_, inv_, frob_, pth_root_;
};

// A field element: a context pointer plus a table index.  Contexts are owned
// elsewhere (by a FieldPtr living at least as long as every element).
struct Fq {
  const Field* F = nullptr;
  uint16_t v = 0;

  Fq() = default;
  Fq(const Field* f, uint16_t idx) : F(f), v(idx) {}

  bool is_zero() const { return v == 0; }
  bool is_one() const { return v == 1 && F != nullptr; }

  friend void check_same(const Fq& a, const Fq& b) {
    if (!a.F || !b.F || !a.F->same(*b.F)) throw FieldMismatch();
  }

  friend Fq operator+(const Fq& a, const Fq& b) {
    check_same(a, b);
    return {a.F, a.F->add(a.v, b.v)};
  }
  friend Fq operator-(const Fq& a, const Fq& b) {
    check_same(a, b);
    return {a.F, a.F->sub(a.v, b.v)};
  }
  friend Fq operator*(const Fq& a, const Fq& b) {
    check_same(a, b);
    return {a.F, a.F->mul(a.v, b.v)};
  }
  friend Fq operator/(const Fq& a, const Fq& b) {
    check_same(a, b);
    return {a.F, a.F->div(a.v, b.v)};
  }
  Fq operator-() const { return {F, F->neg(v)}; }
  friend bool operator==(const Fq& a, const Fq& b) {
    check_same(a, b);
    return a.v == b.v;
  }
  friend bool operator!=(const Fq& a, const Fq& b) { return !(a == b); }

  Fq inv() const { return {F, F->inv(v)}; }
  Fq frob() const { return {F, F->frob(v)}; }
  Fq pth_root() const { return {F, F->pth_root(v)}; }
  Fq pow(long e) const { return {F, F->pow(v, e)}; }
};

inline Fq fq_zero(const Field& F) { return {&F, 0}; }
inline Fq fq_one(const Field& F) { return {&F, 1}; }
inline Fq fq_of_int(const Field& F, long n) { return {&F, F.of_int(n)}; }

// Least s-th root of a (witness order: increasing element index).
// Throws ZeroInput on a = 0; returns nullopt when no root exists.
inline std::optional<Fq> sth_root(const Fq& a, long s) {
  if (a.is_zero()) throw ZeroInput("sth_root of zero");
  const Field& F = *a.F;
  for (int r = 1; r < F.q(); ++r)
    if (F.pow(static_cast<uint16_t>(r), s) == a.v)
      return Fq{&F, static_cast<uint16_t>(r)};
  return std::nullopt;
}

// Solves x^p - x = a by enumeration; returns the least solution by index.
inline std::optional<Fq> wp_root_in_field(const Fq& a) {
  const Field& F = *a.F;
  for (int r = 0; r < F.q(); ++r) {
    const uint16_t x = static_cast<uint16_t>(r);
    if (F.sub(F.frob(x), x) == a.v) return Fq{&F, x};
  }
  return std::nullopt;
}

// Degree-e constants extension together with the embedding F_q -> F_{q^e}.
struct ConstantsExtension {
  FieldPtr big;
  std::vector<uint16_t> embed_table;  // indexed by small-field element index

  Fq map(const Fq& a) const { return {big.get(), embed_table[a.v]}; }
};

// Builds F_{p^{k e}} with its default modulus and embeds F_{p^k} by sending
// the generator to the least root of the small modulus in the big field.
inline ConstantsExtension extend_constants(const Field& F, int e) {
  if (e < 1) throw UnsupportedFieldSize("extension degree must be positive");
  ConstantsExtension ext;
  ext.big = Field::make_default(F.p(), F.k() * e);
  const Field& E = *ext.big;
  // Image of the small-field generator: least root of the small modulus.
  uint16_t theta = 0;
  bool found = false;
  if (F.k() == 1) {
    theta = 1;  // prime field embeds by 1 -> 1
    found = true;
  } else {
    for (int x = 0; x < E.q() && !found; ++x) {
      uint16_t acc = 0, xp = 1;
      for (int i = 0; i < static_cast<int>(F.modulus().size()); ++i) {
        const uint16_t ci = E.of_int(F.modulus()[i]);
        acc = E.add(acc, E.mul(ci, xp));
        xp = E.mul(xp, static_cast<uint16_t>(x));
      }
      if (acc == 0) {
        theta = static_cast<uint16_t>(x);
        found = true;
      }
    }
    if (!found) throw Error("internal: modulus has no root in the extension");
  }
  ext.embed_table.resize(F.q());
  for (int a = 0; a < F.q(); ++a) {
    const auto c = F.coeffs(static_cast<uint16_t>(a));
    uint16_t acc = 0, tp = 1;
    for (int i = 0; i < F.k(); ++i) {
      acc = E.add(acc, E.mul(E.of_int(c[i]), tp));
      tp = E.mul(tp, theta);
    }
    ext.embed_table[a] = acc;
  }
  return ext;
}

// --- text form -------------------------------------------------------------
// k = 1 prints as the bare integer; k > 1 prints the coefficient vector
// "[c0,c1,...]" (low degree first).

inline std::string fq_to_string(const Fq& a) {
  const Field& F = *a.F;
  if (F.k() == 1) return std::to_string(a.v);
  const auto c = F.coeffs(a.v);
  std::string s = "[";
  for (int i = 0; i < F.k(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  s += "]";
  return s;
}

namespace detail {

inline void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

inline long parse_uint(const std::string& s, size_t& i) {
  detail::skip_ws(s, i);
  if (i >= s.size() || s[i] < '0' || s[i] > '9')
    throw ParseError("expected a digit", i);
  long v = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
    v = v * 10 + (s[i] - '0');
    if (v > 1000000) throw ParseError("integer literal too large", i);
    ++i;
  }
  return v;
}

}  // namespace detail

// Parses an element at position i: either "[c0,c1,...]" or a bare integer
// (reduced mod p, i.e. an element of the prime subfield).
inline Fq parse_fq_at(const Field& F, const std::string& s, size_t& i) {
  detail::skip_ws(s, i);
  if (i < s.size() && s[i] == '[') {
    ++i;
    std::vector<int> c;
    detail::skip_ws(s, i);
    if (i < s.size() && s[i] == ']') {
      ++i;
    } else {
      while (true) {
        const long v = detail::parse_uint(s, i);
        if (v >= F.p()) throw ParseError("coefficient out of range", i);
        c.push_back(static_cast<int>(v));
        detail::skip_ws(s, i);
        if (i < s.size() && s[i] == ',') {
          ++i;
          continue;
        }
        if (i < s.size() && s[i] == ']') {
          ++i;
          break;
        }
        throw ParseError("expected ',' or ']'", i);
      }
    }
    if (static_cast<int>(c.size()) > F.k())
      throw ParseError("too many coefficients for this field", i);
    return {&F, F.from_coeffs(c)};
  }
  const long v = detail::parse_uint(s, i);
  if (v >= F.p()) throw ParseError("element out of range", i);
  return fq_of_int(F, v);
}

inline Fq parse_fq(const Field& F, const std::string& s) {
  size_t i = 0;
  Fq a = parse_fq_at(F, s, i);
  detail::skip_ws(s, i);
  if (i != s.size()) throw ParseError("trailing characters", i);
  return a;
}

}  // namespace asdescent
