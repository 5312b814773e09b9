#pragma once
// Smooth conics in P^2 over a field context: rational parametrization by
// lines through a base point, with exact forward and inverse maps.  Works
// both over finite fields and over truncated series coefficients.

#include "kummer/forms.hpp"

namespace kummer {

struct DegenerateConic : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
using Vec3 = std::array<typename F::Elt, 3>;

template <class F>
Vec3<F> cross3(const F& f, const Vec3<F>& a, const Vec3<F>& b) {
  return {f.sub(f.mul(a[1], b[2]), f.mul(a[2], b[1])),
          f.sub(f.mul(a[2], b[0]), f.mul(a[0], b[2])),
          f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0]))};
}

template <class F>
bool vec3_zero(const F& f, const Vec3<F>& a) {
  return f.is_zero(a[0]) && f.is_zero(a[1]) && f.is_zero(a[2]);
}

// symmetric matrix of a ternary quadratic form (odd characteristic)
template <class F>
struct Conic {
  std::array<std::array<typename F::Elt, 3>, 3> m;

  typename F::Elt q(const F& f, const Vec3<F>& v) const {
    typename F::Elt r = f.zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r = f.add(r, f.mul(m[i][j], f.mul(v[i], v[j])));
    return r;
  }
  // polar vector: gradient direction m v
  Vec3<F> polar(const F& f, const Vec3<F>& v) const {
    Vec3<F> r{f.zero(), f.zero(), f.zero()};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r[i] = f.add(r[i], f.mul(m[i][j], v[j]));
    return r;
  }
  typename F::Elt det(const F& f) const {
    auto d = f.mul(m[0][0], f.sub(f.mul(m[1][1], m[2][2]),
                                  f.mul(m[1][2], m[2][1])));
    d = f.sub(d, f.mul(m[0][1], f.sub(f.mul(m[1][0], m[2][2]),
                                      f.mul(m[1][2], m[2][0]))));
    d = f.add(d, f.mul(m[0][2], f.sub(f.mul(m[1][0], m[2][1]),
                                      f.mul(m[1][1], m[2][0]))));
    return d;
  }
};

// build the symmetric matrix from a degree-2 ternary form
template <class F>
Conic<F> conic_from_ter(const F& f, const TerForm<F>& t) {
  if (t.d != 2) throw DegenerateConic("expected a quadratic form");
  Conic<F> c;
  auto half = f.inv(f.from_int(2));
  // coefficients: x^2 -> idx(2,0); y^2 -> idx(0,2); z^2 -> idx(0,0)
  c.m[0][0] = t.c[t.idx(2, 0)];
  c.m[1][1] = t.c[t.idx(0, 2)];
  c.m[2][2] = t.c[t.idx(0, 0)];
  c.m[0][1] = c.m[1][0] = f.mul(t.c[t.idx(1, 1)], half);
  c.m[0][2] = c.m[2][0] = f.mul(t.c[t.idx(1, 0)], half);
  c.m[1][2] = c.m[2][1] = f.mul(t.c[t.idx(0, 1)], half);
  return c;
}

// Degree-2 parametrization P^1 -> conic with the base point at (1:0).
// Lines through the base point meet the conic in one further point; the
// tangent direction recovers the base point itself.
template <class F>
struct ConicParam {
  Vec3<F> base, d1, d2;          // tangent direction and a transverse one
  std::array<BinForm<F>, 3> fwd; // coordinates as binary quadratics in (s,t)

  Vec3<F> at(const F& f, const typename F::Elt& s,
             const typename F::Elt& t) const {
    return {bin_eval(f, fwd[0], s, t), bin_eval(f, fwd[1], s, t),
            bin_eval(f, fwd[2], s, t)};
  }

  // inverse: (s:t) of a conic point, base -> (1:0)
  std::pair<typename F::Elt, typename F::Elt> param_of(
      const F& f, const Vec3<F>& y) const {
    std::vector<std::vector<typename F::Elt>> m(3);
    for (int i = 0; i < 3; ++i) m[i] = {base[i], d1[i], d2[i]};
    std::vector<typename F::Elt> x;
    if (!solve_linear(f, m, {y[0], y[1], y[2]}, x))
      throw DegenerateConic("conic point outside the parametrized frame");
    if (f.is_zero(x[1]) && f.is_zero(x[2]))
      return {f.one(), f.zero()};
    return {x[1], x[2]};
  }
};

template <class F>
ConicParam<F> conic_param(const F& f, const Conic<F>& c, const Vec3<F>& base) {
  if constexpr (F::enumerable) {
    if (f.is_zero(c.det(f)))
      throw DegenerateConic("conic of rank below three");
  }
  if (!f.is_zero(c.q(f, base)))
    throw DegenerateConic("base point does not lie on the conic");
  auto g = c.polar(f, base);
  if (vec3_zero(f, g))
    throw DegenerateConic("base point is singular on the conic");
  ConicParam<F> pr;
  pr.base = base;
  pr.d1 = cross3(f, base, g);
  if (vec3_zero(f, pr.d1)) {
    // base is an eigenvector of the matrix; pick any tangent vector that is
    // visibly independent of base
    std::vector<std::vector<typename F::Elt>> row = {{g[0], g[1], g[2]}};
    auto ker = kernel_basis(f, row);
    bool found = false;
    for (auto& k : ker) {
      Vec3<F> cand{k[0], k[1], k[2]};
      if (!vec3_zero(f, cross3(f, cand, base))) {
        pr.d1 = cand;
        found = true;
        break;
      }
    }
    if (!found) throw DegenerateConic("no tangent direction at base point");
  }
  // transverse direction: first coordinate axis not killed by the polar form
  bool have_d2 = false;
  for (int i = 0; i < 3 && !have_d2; ++i) {
    if (f.is_unit(g[i])) {
      pr.d2 = {f.zero(), f.zero(), f.zero()};
      pr.d2[i] = f.one();
      have_d2 = true;
    }
  }
  if (!have_d2) throw DegenerateConic("polar vector has no unit entry");

  // X(s,t) = 2 b(B,V) V - q(V) B, V = s d1 + t d2
  // b(B,V) = g . V is linear; q(V) quadratic; all exact binary forms.
  auto dot = [&](const Vec3<F>& a, const Vec3<F>& b) {
    return f.add(f.add(f.mul(a[0], b[0]), f.mul(a[1], b[1])),
                 f.mul(a[2], b[2]));
  };
  auto two = f.from_int(2);
  // coefficients of b(B,V): alpha s + beta t
  auto alpha = dot(g, pr.d1);  // zero: d1 is tangent
  auto beta = dot(g, pr.d2);
  // q(V) = q(d1) s^2 + 2 b(d1,d2) s t + q(d2) t^2
  auto q11 = c.q(f, pr.d1);
  auto q22 = c.q(f, pr.d2);
  auto q12 = dot(c.polar(f, pr.d1), pr.d2);
  if constexpr (F::enumerable) {
    if (f.is_zero(q11))
      throw DegenerateConic("tangent direction lies on the conic");
  } else {
    if (!f.is_unit(q11))
      throw PrecisionExhausted("tangent self-pairing is not a visible unit");
  }
  for (int i = 0; i < 3; ++i) {
    BinForm<F> coord = bin_zero(f, 2);
    // 2(alpha s + beta t)(s d1_i + t d2_i)
    coord.c[2] = f.add(coord.c[2], f.mul(two, f.mul(alpha, pr.d1[i])));
    coord.c[1] = f.add(
        coord.c[1], f.mul(two, f.add(f.mul(alpha, pr.d2[i]),
                                     f.mul(beta, pr.d1[i]))));
    coord.c[0] = f.add(coord.c[0], f.mul(two, f.mul(beta, pr.d2[i])));
    // - q(V) B_i ; q(V) coefficients in s^2, st, t^2
    coord.c[2] = f.sub(coord.c[2], f.mul(q11, base[i]));
    coord.c[1] = f.sub(coord.c[1], f.mul(f.mul(two, q12), base[i]));
    coord.c[0] = f.sub(coord.c[0], f.mul(q22, base[i]));
    pr.fwd[i] = coord;
  }
  return pr;
}

}  // namespace kummer
