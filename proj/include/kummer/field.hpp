#pragma once
// Exact arithmetic over small prime fields F_p, extensions F_{p^k} (k <= 4),
// and truncated Laurent series F_p((e)).  Everything is integer arithmetic;
// no floating point appears anywhere in the library.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kummer {

using i64 = long long;
using u64 = unsigned long long;

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Raised when truncated series arithmetic can no longer certify a value.
struct PrecisionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- prime field

inline i64 mod_norm(i64 a, i64 p) {
  a %= p;
  return a < 0 ? a + p : a;
}

inline i64 mul_mod(i64 a, i64 b, i64 p) {
  return (i64)((__int128)a * b % p);
}

inline i64 pow_mod(i64 a, i64 e, i64 p) {
  a = mod_norm(a, p);
  i64 r = 1 % p;
  while (e > 0) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline i64 inv_mod(i64 a, i64 p) {
  a = mod_norm(a, p);
  if (a == 0) throw FieldError("division by zero mod " + std::to_string(p));
  // extended Euclid
  i64 r0 = p, r1 = a, s0 = 0, s1 = 1;
  while (r1 != 0) {
    i64 q = r0 / r1;
    i64 t = r0 - q * r1; r0 = r1; r1 = t;
    t = s0 - q * s1; s0 = s1; s1 = t;
  }
  if (r0 != 1) throw FieldError("non-invertible element");
  return mod_norm(s0, p);
}

// Legendre symbol: 0, 1 or -1.
inline int legendre(i64 a, i64 p) {
  a = mod_norm(a, p);
  if (a == 0) return 0;
  i64 r = pow_mod(a, (p - 1) / 2, p);
  return r == 1 ? 1 : -1;
}

// Deterministic square root mod p: returns the representative in
// [0, (p-1)/2] when a root exists.  Tonelli-Shanks for large p, direct
// search below 50 (the search is cheaper there and just as exact).
inline std::optional<i64> sqrt_mod(i64 a, i64 p) {
  a = mod_norm(a, p);
  if (a == 0) return 0;
  if (legendre(a, p) != 1) return std::nullopt;
  i64 r = -1;
  if (p < 50) {
    for (i64 x = 1; x <= p / 2; ++x)
      if (mul_mod(x, x, p) == a) { r = x; break; }
  } else if (p % 4 == 3) {
    r = pow_mod(a, (p + 1) / 4, p);
  } else {
    // Tonelli-Shanks
    i64 q = p - 1, s = 0;
    while (q % 2 == 0) { q /= 2; ++s; }
    i64 z = 2;
    while (legendre(z, p) != -1) ++z;
    i64 m = s, c = pow_mod(z, q, p), t = pow_mod(a, q, p),
        x = pow_mod(a, (q + 1) / 2, p);
    while (t != 1) {
      i64 i = 0, tt = t;
      while (tt != 1) { tt = mul_mod(tt, tt, p); ++i; }
      i64 b = pow_mod(c, i64(1) << (m - i - 1), p);
      m = i;
      c = mul_mod(b, b, p);
      t = mul_mod(t, c, p);
      x = mul_mod(x, b, p);
    }
    r = x;
  }
  if (r < 0) return std::nullopt;
  return std::min(r, p - r);
}

// Field interface used by the templated polynomial / linear-algebra code.
struct FpField {
  using Elt = i64;
  i64 p;

  explicit FpField(i64 p_) : p(p_) {}

  Elt zero() const { return 0; }
  Elt one() const { return 1; }
  Elt from_int(i64 a) const { return mod_norm(a, p); }
  bool is_zero(Elt a) const { return a == 0; }
  bool is_unit(Elt a) const { return a != 0; }
  bool eq(Elt a, Elt b) const { return a == b; }
  Elt add(Elt a, Elt b) const { return (a + b) % p; }
  Elt sub(Elt a, Elt b) const { return mod_norm(a - b, p); }
  Elt neg(Elt a) const { return mod_norm(-a, p); }
  Elt mul(Elt a, Elt b) const { return mul_mod(a, b, p); }
  Elt inv(Elt a) const { return inv_mod(a, p); }
  Elt div(Elt a, Elt b) const { return mul_mod(a, inv_mod(b, p), p); }

  static constexpr bool enumerable = true;
  i64 size() const { return p; }
  Elt elt(i64 i) const { return i; }
};

// ------------------------------------------------------------ extension field

// F_{p^k} for k <= 4, as F_p[t] modulo the lexicographically least monic
// irreducible polynomial of degree k (coefficients compared from the top
// coefficient downward).
struct FqField {
  using Elt = std::array<i64, 4>;  // coefficients of 1, t, t^2, t^3
  i64 p;
  int k;
  std::array<i64, 4> modulus;  // coefficients of the monic modulus minus t^k

  FqField(i64 p_, int k_) : p(p_), k(k_) {
    if (k < 1 || k > 4) throw FieldError("extension degree out of range");
    modulus = find_modulus();
  }

  Elt zero() const { return {0, 0, 0, 0}; }
  Elt one() const { return {1 % p, 0, 0, 0}; }
  Elt from_int(i64 a) const { return {mod_norm(a, p), 0, 0, 0}; }
  Elt from_base(i64 a) const { return from_int(a); }
  Elt gen() const {
    Elt g{};
    if (k == 1) return from_int(modulus[0] == 0 ? 0 : mod_norm(-modulus[0], p));
    g[1] = 1;
    return g;
  }
  bool is_zero(const Elt& a) const {
    for (int i = 0; i < k; ++i) if (a[i] != 0) return false;
    return true;
  }
  bool is_unit(const Elt& a) const { return !is_zero(a); }
  bool eq(const Elt& a, const Elt& b) const {
    for (int i = 0; i < k; ++i) if (a[i] != b[i]) return false;
    return true;
  }
  Elt add(const Elt& a, const Elt& b) const {
    Elt r{};
    for (int i = 0; i < k; ++i) r[i] = (a[i] + b[i]) % p;
    return r;
  }
  Elt sub(const Elt& a, const Elt& b) const {
    Elt r{};
    for (int i = 0; i < k; ++i) r[i] = mod_norm(a[i] - b[i], p);
    return r;
  }
  Elt neg(const Elt& a) const {
    Elt r{};
    for (int i = 0; i < k; ++i) r[i] = mod_norm(-a[i], p);
    return r;
  }
  Elt mul(const Elt& a, const Elt& b) const {
    std::array<i64, 7> t{};
    for (int i = 0; i < k; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; j < k; ++j)
        t[i + j] = (t[i + j] + (__int128)a[i] * b[j]) % p;
    }
    // reduce t^m for m >= k using t^k = -modulus
    for (int m = 2 * k - 2; m >= k; --m) {
      i64 c = t[m];
      if (c == 0) continue;
      t[m] = 0;
      for (int j = 0; j < k; ++j)
        t[m - k + j] = mod_norm(t[m - k + j] - mul_mod(c, modulus[j], p), p);
    }
    Elt r{};
    for (int i = 0; i < k; ++i) r[i] = t[i];
    return r;
  }
  Elt pow(Elt a, i64 e) const {
    Elt r = one();
    while (e > 0) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  }
  Elt inv(const Elt& a) const {
    if (is_zero(a)) throw FieldError("division by zero in extension field");
    return pow(a, order() - 2);
  }
  Elt div(const Elt& a, const Elt& b) const { return mul(a, inv(b)); }

  i64 order() const {
    i64 q = 1;
    for (int i = 0; i < k; ++i) q *= p;
    return q;
  }
  bool is_square(const Elt& a) const {
    if (is_zero(a)) return true;
    return eq(pow(a, (order() - 1) / 2), one());
  }

  static constexpr bool enumerable = true;
  i64 size() const { return order(); }
  Elt elt(i64 i) const {
    Elt r{};
    for (int j = 0; j < k; ++j) { r[j] = i % p; i /= p; }
    return r;
  }

 private:
  bool irreducible(const std::array<i64, 4>& low) const {
    // f = t^k + low: irreducible iff gcd-free of roots (k<=3 suffices to
    // check roots for k<=3; for k=4 also exclude quadratic factors).
    auto eval = [&](i64 x) {
      i64 v = 1;  // t^k coefficient
      for (int i = k - 1; i >= 0; --i) v = (mul_mod(v, x, p) + low[i]) % p;
      return v;
    };
    for (i64 x = 0; x < p; ++x)
      if (eval(x) == 0) return false;
    if (k == 4) {
      // exclude monic irreducible quadratic divisors t^2+bt+c
      for (i64 b = 0; b < p; ++b)
        for (i64 c = 0; c < p; ++c) {
          i64 disc = mod_norm(b * b - 4 * c, p);
          if (legendre(disc, p) == 1 || disc == 0) continue;
          // divide t^4 + low by t^2+bt+c and test zero remainder
          // quotient t^2 + q1 t + q0
          i64 q1 = mod_norm(-b, p);
          i64 q0 = mod_norm(low[2] - c - mul_mod(b, q1, p), p);
          i64 r1 = mod_norm(low[1] - mul_mod(b, q0, p) - mul_mod(c, q1, p), p);
          i64 r0 = mod_norm(low[0] - mul_mod(c, q0, p), p);
          if (r1 == 0 && r0 == 0) return false;
        }
    }
    return true;
  }
  std::array<i64, 4> find_modulus() const {
    if (k == 1) return {0, 0, 0, 0};  // t - 0: element = residue itself
    // scan tuples (c_{k-1}, ..., c_0) in lexicographic order
    i64 total = 1;
    for (int i = 0; i < k; ++i) total *= p;
    for (i64 code = 0; code < total; ++code) {
      std::array<i64, 4> cand{};
      i64 c = code;
      for (int i = 0; i < k; ++i) { cand[i] = c % p; c /= p; }
      // cand[0] = least significant digit = c_0, so code order is exactly
      // lexicographic on (c_{k-1}, ..., c_0)
      if (irreducible(cand)) return cand;
    }
    throw FieldError("no irreducible polynomial found");
  }
};

// --------------------------------------------------------- truncated series

// Truncated Laurent series over F_p: sum of c[i] e^{val+i} plus O(e^{aprec}).
// Used for germs of curves on the surface and for transporting fiber
// arithmetic across singular fibers.
struct LSer {
  i64 val = 0;           // valuation of first stored coefficient
  i64 aprec = 0;         // absolute precision: element known mod e^{aprec}
  std::vector<i64> c;    // coefficients starting at e^{val}; c[0] != 0
};

struct SerField {
  using Elt = LSer;
  i64 p;
  i64 prec;  // default relative precision of freshly created series

  SerField(i64 p_, i64 prec_) : p(p_), prec(prec_) {}

  Elt zero() const { return LSer{0, prec, {}}; }
  Elt one() const { return from_int(1); }
  Elt from_int(i64 a) const {
    a = mod_norm(a, p);
    if (a == 0) return LSer{0, prec, {}};
    return LSer{0, prec, {a}};
  }
  // a * e^k
  Elt monomial(i64 a, i64 k) const {
    a = mod_norm(a, p);
    if (a == 0) return LSer{0, k + prec, {}};
    return LSer{k, k + prec, {a}};
  }
  Elt from_coeffs(const std::vector<i64>& coeffs, i64 ap) const {
    LSer r{0, ap, coeffs};
    normalize(r);
    return r;
  }

  void normalize(Elt& a) const {
    size_t lead = 0;
    while (lead < a.c.size() && mod_norm(a.c[lead], p) == 0) ++lead;
    if (lead > 0) {
      a.c.erase(a.c.begin(), a.c.begin() + lead);
      a.val += (i64)lead;
    }
    for (auto& x : a.c) x = mod_norm(x, p);
    if ((i64)a.c.size() > a.aprec - a.val)
      a.c.resize(std::max<i64>(0, a.aprec - a.val));
    while (!a.c.empty() && a.c.back() == 0) a.c.pop_back();
    if (a.c.empty()) a.val = 0;
  }

  bool is_zero(const Elt& a) const { return a.c.empty(); }
  // A series all of whose known coefficients vanish: zero as far as we can
  // see, but if precision window is empty we cannot certify anything.
  bool certified_nonzero(const Elt& a) const { return !a.c.empty(); }
  bool is_unit(const Elt& a) const { return !a.c.empty(); }
  bool eq(const Elt& a, const Elt& b) const { return is_zero(sub(a, b)); }

  Elt add(const Elt& a, const Elt& b) const {
    if (a.c.empty()) { Elt r = b; r.aprec = std::min(a.aprec, b.aprec); normalize(r); return r; }
    if (b.c.empty()) { Elt r = a; r.aprec = std::min(a.aprec, b.aprec); normalize(r); return r; }
    i64 v = std::min(a.val, b.val);
    i64 ap = std::min(a.aprec, b.aprec);
    Elt r{v, ap, {}};
    r.c.assign(std::max<i64>(0, ap - v), 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
      i64 k = a.val + (i64)i - v;
      if (k >= 0 && k < (i64)r.c.size()) r.c[k] = (r.c[k] + a.c[i]) % p;
    }
    for (size_t i = 0; i < b.c.size(); ++i) {
      i64 k = b.val + (i64)i - v;
      if (k >= 0 && k < (i64)r.c.size()) r.c[k] = (r.c[k] + b.c[i]) % p;
    }
    normalize(r);
    return r;
  }
  Elt neg(const Elt& a) const {
    Elt r = a;
    for (auto& x : r.c) x = mod_norm(-x, p);
    return r;
  }
  Elt sub(const Elt& a, const Elt& b) const { return add(a, neg(b)); }
  Elt mul(const Elt& a, const Elt& b) const {
    if (a.c.empty() || b.c.empty()) {
      i64 ap;
      if (a.c.empty() && b.c.empty()) ap = a.aprec + b.aprec;
      else if (a.c.empty()) ap = a.aprec + b.val;
      else ap = b.aprec + a.val;
      return LSer{0, ap, {}};
    }
    i64 v = a.val + b.val;
    i64 ap = std::min(a.aprec + b.val, b.aprec + a.val);
    i64 len = std::max<i64>(0, ap - v);
    Elt r{v, ap, std::vector<i64>((size_t)len, 0)};
    for (size_t i = 0; i < a.c.size(); ++i) {
      if (a.c[i] == 0) continue;
      for (size_t j = 0; j < b.c.size() && (i64)(i + j) < len; ++j)
        r.c[i + j] = (r.c[i + j] + (__int128)a.c[i] * b.c[j]) % p;
    }
    normalize(r);
    return r;
  }
  Elt inv(const Elt& a) const {
    if (a.c.empty())
      throw PrecisionExhausted("inverting a series with no visible terms");
    i64 rel = a.aprec - a.val;
    std::vector<i64> u((size_t)rel, 0);
    i64 u0 = inv_mod(a.c[0], p);
    u[0] = u0;
    for (i64 n = 1; n < rel; ++n) {
      i64 s = 0;
      for (i64 j = 1; j <= n; ++j) {
        i64 aj = (j < (i64)a.c.size()) ? a.c[j] : 0;
        if (aj) s = (s + (__int128)aj * u[n - j]) % p;
      }
      u[n] = mul_mod(mod_norm(-s, p), u0, p);
    }
    Elt r{-a.val, -a.val + rel, u};
    normalize(r);
    return r;
  }
  Elt div(const Elt& a, const Elt& b) const { return mul(a, inv(b)); }

  static constexpr bool enumerable = false;
  i64 size() const { return 0; }
  Elt elt(i64) const { throw FieldError("series field is not enumerable"); }

  // leading coefficient as plain residue (0 for the zero series)
  i64 lead(const Elt& a) const { return a.c.empty() ? 0 : a.c[0]; }
  i64 coeff(const Elt& a, i64 k) const {
    if (k >= a.aprec)
      throw PrecisionExhausted("coefficient beyond stored precision");
    i64 i = k - a.val;
    if (i < 0 || i >= (i64)a.c.size()) return 0;
    return a.c[i];
  }
};

}  // namespace kummer
