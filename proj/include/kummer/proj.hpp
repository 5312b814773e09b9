#pragma once
// Projective points over F_p, Moebius transformations of P^1 (acting on row
// vectors from the right), and fitting of a Moebius map from graphs.

#include <algorithm>
#include <array>
#include <cstdint>

#include "kummer/poly.hpp"

namespace kummer {

struct Inconsistent : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Degenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// point of P^1(F_p), normalized: first nonzero coordinate equals 1
struct P1 {
  i64 a = 0, b = 0;
  friend bool operator==(const P1&, const P1&) = default;
  friend auto operator<=>(const P1&, const P1&) = default;
};

inline P1 p1_make(i64 a, i64 b, i64 p) {
  a = mod_norm(a, p);
  b = mod_norm(b, p);
  if (a != 0) return P1{1, mul_mod(b, inv_mod(a, p), p)};
  if (b != 0) return P1{0, 1};
  throw Degenerate("(0:0) is not a point of P^1");
}

// canonical enumeration of P^1(F_p): (0:1), (1:0), (1:1), ..., (1:p-1)
inline P1 p1_at(i64 idx, i64 /*p*/) {
  if (idx == 0) return P1{0, 1};
  return P1{1, idx - 1};
}
inline i64 p1_index(const P1& u) { return u.a == 0 ? 0 : u.b + 1; }
inline i64 p1_count(i64 p) { return p + 1; }

// point of P^3(F_p), normalized: first nonzero coordinate equals 1
struct P3 {
  std::array<i64, 4> x{};
  friend bool operator==(const P3&, const P3&) = default;
  friend auto operator<=>(const P3&, const P3&) = default;
};

inline P3 p3_make(std::array<i64, 4> v, i64 p) {
  for (auto& c : v) c = mod_norm(c, p);
  int piv = -1;
  for (int i = 0; i < 4; ++i)
    if (v[i] != 0) { piv = i; break; }
  if (piv < 0) throw Degenerate("(0:0:0:0) is not a point of P^3");
  i64 s = inv_mod(v[piv], p);
  for (auto& c : v) c = mul_mod(c, s, p);
  return P3{v};
}

inline int p3_pivot(const P3& q) {
  for (int i = 0; i < 4; ++i)
    if (q.x[i] != 0) return i;
  return -1;
}

// 2x2 matrix acting on row vectors of P^1 from the right:
// (x y) -> (x m00 + y m10, x m01 + y m11)
struct Mobius {
  std::array<std::array<i64, 2>, 2> m{};
};

inline P1 mobius_apply(const Mobius& mb, const P1& u, i64 p) {
  i64 a = mod_norm(u.a * mb.m[0][0] + u.b * mb.m[1][0], p);
  i64 b = mod_norm(u.a * mb.m[0][1] + u.b * mb.m[1][1], p);
  return p1_make(a, b, p);
}

inline i64 mobius_det(const Mobius& mb, i64 p) {
  return mod_norm(mb.m[0][0] * mb.m[1][1] - mb.m[0][1] * mb.m[1][0], p);
}

// Normalize projectively: first nonzero entry (row-major) equals 1.
inline Mobius mobius_normalize(Mobius mb, i64 p) {
  i64 s = 0;
  for (int i = 0; i < 2 && s == 0; ++i)
    for (int j = 0; j < 2 && s == 0; ++j)
      if ((mb.m[i][j] = mod_norm(mb.m[i][j], p)) != 0) s = mb.m[i][j];
  if (s == 0) throw Degenerate("zero matrix");
  i64 t = inv_mod(s, p);
  for (auto& row : mb.m)
    for (auto& c : row) c = mul_mod(c, t, p);
  return mb;
}

inline Mobius mobius_compose(const Mobius& first, const Mobius& then, i64 p) {
  // row-vector action: u (first compose then) = (u first) then
  Mobius r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      i64 s = 0;
      for (int k = 0; k < 2; ++k)
        s = (s + (__int128)first.m[i][k] * then.m[k][j]) % p;
      r.m[i][j] = s;
    }
  return mobius_normalize(r, p);
}

// Fit the Moebius map sending u_i to v_i.  Needs at least three pairs with
// three distinct sources; raises Degenerate when the data does not pin the
// map down, Inconsistent when no invertible matrix fits all pairs.
inline Mobius mobius_fit(const std::vector<std::pair<P1, P1>>& pairs, i64 p) {
  if (pairs.size() < 3)
    throw Degenerate("need at least three pairs to fit a Moebius map");
  FpField f(p);
  std::vector<std::vector<i64>> rows;
  for (auto& [u, v] : pairs) {
    // (u.a m00 + u.b m10) v.b - (u.a m01 + u.b m11) v.a = 0
    rows.push_back({mul_mod(u.a, v.b, p), mod_norm(-mul_mod(u.a, v.a, p), p),
                    mul_mod(u.b, v.b, p), mod_norm(-mul_mod(u.b, v.a, p), p)});
  }
  auto ker = kernel_basis(f, rows);
  if (ker.empty()) throw Inconsistent("no Moebius map fits the pairs");
  if (ker.size() > 1) throw Degenerate("pairs do not determine a unique map");
  Mobius mb{{{{ker[0][0], ker[0][1]}, {ker[0][2], ker[0][3]}}}};
  if (mobius_det(mb, p) == 0)
    throw Inconsistent("fitted matrix is singular");
  mb = mobius_normalize(mb, p);
  for (auto& [u, v] : pairs)
    if (!(mobius_apply(mb, u, p) == v))
      throw Inconsistent("fitted map fails on a supplied pair");
  return mb;
}

// plane in P^3: coefficient row vector, plane = {x : sum a_i x_i = 0}
struct Plane {
  std::array<i64, 4> a{};
};

// plane through three (projectively distinct, non-collinear) points
inline Plane plane_through(const P3& u, const P3& v, const P3& w, i64 p) {
  FpField f(p);
  std::vector<std::vector<i64>> m = {
      {u.x[0], u.x[1], u.x[2], u.x[3]},
      {v.x[0], v.x[1], v.x[2], v.x[3]},
      {w.x[0], w.x[1], w.x[2], w.x[3]},
  };
  auto ker = kernel_basis(f, m);
  if (ker.size() != 1) throw Degenerate("points do not span a plane");
  return Plane{{ker[0][0], ker[0][1], ker[0][2], ker[0][3]}};
}

inline i64 plane_eval(const Plane& pl, const std::array<i64, 4>& x, i64 p) {
  i64 s = 0;
  for (int i = 0; i < 4; ++i) s = (s + (__int128)pl.a[i] * x[i]) % p;
  return s;
}

// A line in P^3 stored by two distinct points; param (s:t) -> s U + t V.
struct LineP3 {
  P3 u, v;

  std::array<i64, 4> at(const P1& st, i64 p) const {
    std::array<i64, 4> r{};
    for (int i = 0; i < 4; ++i)
      r[i] = mod_norm(st.a * u.x[i] + st.b * v.x[i], p);
    return r;
  }
};

}  // namespace kummer
