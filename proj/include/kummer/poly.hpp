#pragma once
// Homogeneous binary forms over a field context, root extraction with
// multiplicities, and dense Gaussian elimination helpers shared by the
// geometry code.

#include <utility>
#include <vector>

#include "kummer/field.hpp"

namespace kummer {

struct ZeroForm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// f(x,y) = sum c[i] x^i y^{d-i}, d = c.size()-1.
template <class F>
struct BinForm {
  std::vector<typename F::Elt> c;

  int degree() const { return (int)c.size() - 1; }
};

template <class F>
BinForm<F> bin_zero(const F& f, int deg) {
  return BinForm<F>{std::vector<typename F::Elt>((size_t)deg + 1, f.zero())};
}

template <class F>
bool bin_is_zero(const F& f, const BinForm<F>& a) {
  for (auto& x : a.c)
    if (!f.is_zero(x)) return false;
  return true;
}

template <class F>
typename F::Elt bin_eval(const F& f, const BinForm<F>& a,
                         const typename F::Elt& x, const typename F::Elt& y) {
  // Horner in two stages: powers of x ascending, powers of y descending.
  typename F::Elt r = f.zero(), xp = f.one();
  int d = a.degree();
  std::vector<typename F::Elt> ypow((size_t)d + 1, f.one());
  for (int i = 1; i <= d; ++i) ypow[i] = f.mul(ypow[i - 1], y);
  for (int i = 0; i <= d; ++i) {
    r = f.add(r, f.mul(a.c[i], f.mul(xp, ypow[d - i])));
    xp = f.mul(xp, x);
  }
  return r;
}

template <class F>
BinForm<F> bin_add(const F& f, const BinForm<F>& a, const BinForm<F>& b) {
  BinForm<F> r = a;
  for (size_t i = 0; i < r.c.size(); ++i) r.c[i] = f.add(r.c[i], b.c[i]);
  return r;
}

template <class F>
BinForm<F> bin_scale(const F& f, const BinForm<F>& a,
                     const typename F::Elt& s) {
  BinForm<F> r = a;
  for (auto& x : r.c) x = f.mul(x, s);
  return r;
}

template <class F>
BinForm<F> bin_mul(const F& f, const BinForm<F>& a, const BinForm<F>& b) {
  BinForm<F> r = bin_zero(f, a.degree() + b.degree());
  for (size_t i = 0; i < a.c.size(); ++i)
    for (size_t j = 0; j < b.c.size(); ++j)
      r.c[i + j] = f.add(r.c[i + j], f.mul(a.c[i], b.c[j]));
  return r;
}

template <class F>
BinForm<F> bin_pow(const F& f, BinForm<F> a, int e) {
  BinForm<F> r = bin_zero(f, 0);
  r.c[0] = f.one();
  while (e > 0) {
    if (e & 1) r = bin_mul(f, r, a);
    a = bin_mul(f, a, a);
    e >>= 1;
  }
  return r;
}

// d/dx and d/dy of the form.
template <class F>
BinForm<F> bin_dx(const F& f, const BinForm<F>& a) {
  int d = a.degree();
  BinForm<F> r = bin_zero(f, d - 1);
  for (int i = 1; i <= d; ++i)
    r.c[i - 1] = f.mul(a.c[i], f.from_int(i));
  return r;
}
template <class F>
BinForm<F> bin_dy(const F& f, const BinForm<F>& a) {
  int d = a.degree();
  BinForm<F> r = bin_zero(f, d - 1);
  for (int i = 0; i < d; ++i)
    r.c[i] = f.mul(a.c[i], f.from_int(d - i));
  return r;
}

// Exact division of a by the linear form (b1 x - b0 y), i.e. removal of the
// projective root (b0 : b1).  Returns false when the division is not exact.
template <class F>
bool bin_divide_linear(const F& f, const BinForm<F>& a,
                       const typename F::Elt& b0, const typename F::Elt& b1,
                       BinForm<F>& quot) {
  int d = a.degree();
  if (d < 1) return false;
  quot = bin_zero(f, d - 1);
  if (f.is_unit(b1)) {
    // synthetic division by (x - (b0/b1) y) after scaling by b1
    typename F::Elt inv = f.inv(b1);
    typename F::Elt t = f.mul(b0, inv);  // root of dehomogenization
    // a = (b1 x - b0 y) q  <=>  a/b1 = (x - t y) q
    typename F::Elt carry = f.zero();
    for (int i = d; i >= 1; --i) {
      carry = f.add(f.mul(a.c[i], inv), f.mul(t, carry));
      quot.c[i - 1] = carry;
    }
    typename F::Elt rem = f.add(f.mul(a.c[0], inv), f.mul(t, carry));
    return f.is_zero(rem);
  }
  if (!f.is_unit(b0)) return false;
  // root (1:0): a must have zero x^d coefficient; divide by -b0 y
  if (!f.is_zero(a.c[d])) return false;
  typename F::Elt s = f.neg(f.inv(b0));
  for (int i = 0; i < d; ++i) quot.c[i] = f.mul(a.c[i], s);
  return true;
}

// Projective point of P^1 over an enumerable field, normalized so the first
// nonzero coordinate is 1.
template <class F>
std::pair<typename F::Elt, typename F::Elt> p1_normalize(
    const F& f, typename F::Elt a, typename F::Elt b) {
  if (f.is_unit(a)) return {f.one(), f.mul(b, f.inv(a))};
  return {f.zero(), f.one()};
}

// All projective roots with multiplicities, in the canonical P^1 order
// (0:1), (1:0), (1:t) for t ascending by element index.
template <class F>
std::vector<std::pair<std::pair<typename F::Elt, typename F::Elt>, int>>
roots_with_multiplicity(const F& f, const BinForm<F>& a) {
  static_assert(F::enumerable);
  if (bin_is_zero(f, a))
    throw ZeroForm("root extraction of the identically zero form");
  std::vector<std::pair<std::pair<typename F::Elt, typename F::Elt>, int>> out;
  auto try_root = [&](const typename F::Elt& r0, const typename F::Elt& r1) {
    int m = 0;
    BinForm<F> cur = a, q;
    while (cur.degree() >= 1 && f.is_zero(bin_eval(f, cur, r0, r1)) &&
           bin_divide_linear(f, cur, r0, r1, q)) {
      ++m;
      cur = q;
    }
    if (m > 0) out.push_back({{r0, r1}, m});
  };
  try_root(f.zero(), f.one());
  try_root(f.one(), f.zero());
  for (i64 i = 0; i < f.size(); ++i) {
    auto t = f.elt(i);
    if (f.is_zero(t)) continue;  // (1:0) already handled
    try_root(f.one(), t);
  }
  return out;
}

// ------------------------------------------------------------- linear algebra

// Reduced row echelon form in place; returns pivot column per row.
// For series fields pivots prefer the entry of least valuation.
template <class F>
std::vector<int> rref(const F& f,
                      std::vector<std::vector<typename F::Elt>>& m) {
  std::vector<int> pivots;
  size_t rows = m.size();
  if (rows == 0) return pivots;
  size_t cols = m[0].size();
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t best = rows;
    for (size_t i = r; i < rows; ++i)
      if (f.is_unit(m[i][c])) {
        if (best == rows) best = i;
        else if constexpr (std::is_same_v<F, SerField>) {
          if (m[i][c].val < m[best][c].val) best = i;
        }
      }
    if (best == rows) continue;
    std::swap(m[r], m[best]);
    auto inv = f.inv(m[r][c]);
    for (size_t j = c; j < cols; ++j) m[r][j] = f.mul(m[r][j], inv);
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || f.is_zero(m[i][c])) continue;
      auto factor = m[i][c];
      for (size_t j = c; j < cols; ++j)
        m[i][j] = f.sub(m[i][j], f.mul(factor, m[r][j]));
    }
    pivots.push_back((int)c);
    ++r;
  }
  return pivots;
}

// Basis of the right kernel of m.
template <class F>
std::vector<std::vector<typename F::Elt>> kernel_basis(
    const F& f, std::vector<std::vector<typename F::Elt>> m) {
  size_t cols = m.empty() ? 0 : m[0].size();
  auto pivots = rref(f, m);
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<std::vector<typename F::Elt>> basis;
  for (size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<typename F::Elt> v(cols, f.zero());
    v[c] = f.one();
    for (size_t r = 0; r < pivots.size(); ++r)
      v[pivots[r]] = f.neg(m[r][c]);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Solve m x = rhs (unique expected); returns false if inconsistent or
// underdetermined.
template <class F>
bool solve_linear(const F& f, std::vector<std::vector<typename F::Elt>> m,
                  std::vector<typename F::Elt> rhs,
                  std::vector<typename F::Elt>& x) {
  size_t rows = m.size(), cols = m.empty() ? 0 : m[0].size();
  for (size_t i = 0; i < rows; ++i) m[i].push_back(rhs[i]);
  auto pivots = rref(f, m);
  // inconsistent when a pivot lands in the rhs column
  if (!pivots.empty() && pivots.back() == (int)cols) return false;
  if (pivots.size() != cols) return false;
  x.assign(cols, f.zero());
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = m[r][cols];
  return true;
}

}  // namespace kummer
