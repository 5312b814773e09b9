#pragma once
// Dense ternary forms and sparse quaternary forms over a field context,
// with the substitution operations used to restrict surface equations to
// planes, lines and parametrized conics.

#include <cstdint>
#include <vector>

#include "kummer/poly.hpp"

namespace kummer {

// ----------------------------------------------------------- ternary forms

// f(x,y,z) = sum c[idx(i,j)] x^i y^j z^{d-i-j}
template <class F>
struct TerForm {
  int d = 0;
  std::vector<typename F::Elt> c;

  static int count(int d) { return (d + 1) * (d + 2) / 2; }
  int idx(int i, int j) const { return i * (2 * d + 3 - i) / 2 + j; }
};

template <class F>
TerForm<F> ter_zero(const F& f, int d) {
  return TerForm<F>{d, std::vector<typename F::Elt>(
                           (size_t)TerForm<F>::count(d), f.zero())};
}

template <class F>
typename F::Elt ter_eval(const F& f, const TerForm<F>& a,
                         const typename F::Elt& x, const typename F::Elt& y,
                         const typename F::Elt& z) {
  int d = a.d;
  std::vector<typename F::Elt> xp((size_t)d + 1, f.one()),
      yp((size_t)d + 1, f.one()), zp((size_t)d + 1, f.one());
  for (int i = 1; i <= d; ++i) {
    xp[i] = f.mul(xp[i - 1], x);
    yp[i] = f.mul(yp[i - 1], y);
    zp[i] = f.mul(zp[i - 1], z);
  }
  typename F::Elt r = f.zero();
  for (int i = 0; i <= d; ++i)
    for (int j = 0; i + j <= d; ++j) {
      const auto& co = a.c[a.idx(i, j)];
      if (f.is_zero(co)) continue;
      r = f.add(r, f.mul(co, f.mul(xp[i], f.mul(yp[j], zp[d - i - j]))));
    }
  return r;
}

template <class F>
TerForm<F> ter_mul(const F& f, const TerForm<F>& a, const TerForm<F>& b) {
  TerForm<F> r = ter_zero(f, a.d + b.d);
  for (int i = 0; i <= a.d; ++i)
    for (int j = 0; i + j <= a.d; ++j) {
      const auto& ca = a.c[a.idx(i, j)];
      if (f.is_zero(ca)) continue;
      for (int k = 0; k <= b.d; ++k)
        for (int l = 0; k + l <= b.d; ++l) {
          const auto& cb = b.c[b.idx(k, l)];
          if (f.is_zero(cb)) continue;
          auto& rc = r.c[r.idx(i + k, j + l)];
          rc = f.add(rc, f.mul(ca, cb));
        }
    }
  return r;
}

// partial derivatives; var = 0,1,2 for x,y,z
template <class F>
TerForm<F> ter_d(const F& f, const TerForm<F>& a, int var) {
  TerForm<F> r = ter_zero(f, a.d - 1);
  for (int i = 0; i <= a.d; ++i)
    for (int j = 0; i + j <= a.d; ++j) {
      int k = a.d - i - j;
      const auto& co = a.c[a.idx(i, j)];
      if (f.is_zero(co)) continue;
      if (var == 0 && i > 0)
        r.c[r.idx(i - 1, j)] =
            f.add(r.c[r.idx(i - 1, j)], f.mul(co, f.from_int(i)));
      if (var == 1 && j > 0)
        r.c[r.idx(i, j - 1)] =
            f.add(r.c[r.idx(i, j - 1)], f.mul(co, f.from_int(j)));
      if (var == 2 && k > 0)
        r.c[r.idx(i, j)] = f.add(r.c[r.idx(i, j)], f.mul(co, f.from_int(k)));
    }
  return r;
}

// substitute three binary forms of a common degree e for x, y, z
template <class F>
BinForm<F> ter_compose(const F& f, const TerForm<F>& a,
                       const BinForm<F>& sx, const BinForm<F>& sy,
                       const BinForm<F>& sz) {
  int e = sx.degree();
  BinForm<F> r = bin_zero(f, a.d * e);
  std::vector<BinForm<F>> xp, yp, zp;
  xp.push_back(bin_zero(f, 0)); xp[0].c[0] = f.one();
  yp.push_back(xp[0]); zp.push_back(xp[0]);
  for (int i = 1; i <= a.d; ++i) {
    xp.push_back(bin_mul(f, xp[i - 1], sx));
    yp.push_back(bin_mul(f, yp[i - 1], sy));
    zp.push_back(bin_mul(f, zp[i - 1], sz));
  }
  for (int i = 0; i <= a.d; ++i)
    for (int j = 0; i + j <= a.d; ++j) {
      const auto& co = a.c[a.idx(i, j)];
      if (f.is_zero(co)) continue;
      auto term = bin_mul(f, xp[i], bin_mul(f, yp[j], zp[a.d - i - j]));
      for (size_t t = 0; t < term.c.size(); ++t)
        r.c[t] = f.add(r.c[t], f.mul(co, term.c[t]));
    }
  return r;
}

// -------------------------------------------------------- quaternary forms

// sparse homogeneous form in x0..x3
template <class F>
struct Form4 {
  struct Term {
    std::array<uint8_t, 4> e;
    typename F::Elt c;
  };
  std::vector<Term> terms;

  int degree() const {
    if (terms.empty()) return 0;
    int d = 0;
    for (int i = 0; i < 4; ++i) d += terms[0].e[i];
    return d;
  }
};

template <class F>
typename F::Elt form4_eval(const F& f, const Form4<F>& a,
                           const std::array<typename F::Elt, 4>& x) {
  typename F::Elt r = f.zero();
  for (auto& t : a.terms) {
    auto v = t.c;
    for (int i = 0; i < 4; ++i)
      for (int e = 0; e < t.e[i]; ++e) v = f.mul(v, x[i]);
    r = f.add(r, v);
  }
  return r;
}

template <class F>
Form4<F> form4_d(const F& f, const Form4<F>& a, int var) {
  Form4<F> r;
  for (auto& t : a.terms) {
    if (t.e[var] == 0) continue;
    auto nt = t;
    nt.c = f.mul(t.c, f.from_int(t.e[var]));
    nt.e[var] -= 1;
    if (!f.is_zero(nt.c)) r.terms.push_back(nt);
  }
  return r;
}

template <class F>
std::array<typename F::Elt, 4> form4_grad(
    const F& f, const Form4<F>& a, const std::array<typename F::Elt, 4>& x) {
  std::array<typename F::Elt, 4> g{f.zero(), f.zero(), f.zero(), f.zero()};
  for (int v = 0; v < 4; ++v) g[v] = form4_eval(f, form4_d(f, a, v), x);
  return g;
}

// substitute four binary forms of a common degree for the variables
template <class F>
BinForm<F> form4_compose_bin(const F& f, const Form4<F>& a,
                             const std::array<BinForm<F>, 4>& s) {
  int d = a.degree(), e = s[0].degree();
  BinForm<F> r = bin_zero(f, d * e);
  for (auto& t : a.terms) {
    BinForm<F> term = bin_zero(f, 0);
    term.c[0] = t.c;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < t.e[i]; ++k) term = bin_mul(f, term, s[i]);
    // term has degree (sum e_i) * e = d*e
    for (size_t k = 0; k < term.c.size(); ++k)
      r.c[k] = f.add(r.c[k], term.c[k]);
  }
  return r;
}

// substitute four ternary forms of a common degree for the variables
template <class F>
TerForm<F> form4_compose_ter(const F& f, const Form4<F>& a,
                             const std::array<TerForm<F>, 4>& s) {
  int d = a.degree(), e = s[0].d;
  TerForm<F> r = ter_zero(f, d * e);
  for (auto& t : a.terms) {
    TerForm<F> term = ter_zero(f, 0);
    term.c[0] = t.c;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < t.e[i]; ++k) term = ter_mul(f, term, s[i]);
    for (size_t k = 0; k < term.c.size(); ++k)
      r.c[k] = f.add(r.c[k], term.c[k]);
  }
  return r;
}

// re-express integer-coefficient forms in another field context

template <class G>
BinForm<G> bin_cast(const G& g, const BinForm<FpField>& a) {
  BinForm<G> r = bin_zero(g, a.degree());
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = g.from_int(a.c[i]);
  return r;
}

template <class G>
TerForm<G> ter_cast(const G& g, const TerForm<FpField>& a) {
  TerForm<G> r = ter_zero(g, a.d);
  for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = g.from_int(a.c[i]);
  return r;
}

template <class G>
Form4<G> form4_cast(const G& g, const Form4<FpField>& a) {
  Form4<G> r;
  for (auto& t : a.terms) {
    auto c = g.from_int(t.c);
    if (!g.is_zero(c)) r.terms.push_back({t.e, c});
  }
  return r;
}

// convenience builder from integer exponent/coefficient rows
template <class F>
Form4<F> form4_build(
    const F& f,
    const std::vector<std::pair<std::array<int, 4>, i64>>& rows) {
  Form4<F> r;
  for (auto& [e, c] : rows) {
    auto co = f.from_int(c);
    if (f.is_zero(co)) continue;
    r.terms.push_back({{(uint8_t)e[0], (uint8_t)e[1], (uint8_t)e[2],
                        (uint8_t)e[3]},
                       co});
  }
  return r;
}

}  // namespace kummer
