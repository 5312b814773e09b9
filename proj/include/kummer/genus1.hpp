#pragma once
// Arithmetic on a double cover u^2 = q4(s) of the projective line: weighted
// points, flips, and the residual point of a degree-3 effective divisor cut
// by the pencil of forms psi(s) - kappa u.  This is the genus-one model in
// which the fiberwise group steps (negation, translation) are computed; it
// is templated over the field context so the same code runs over prime
// fields, extensions, and Laurent-series deformations.

#include <utility>
#include <vector>

#include "kummer/poly.hpp"

namespace kummer {

struct Genus1Degenerate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point of u^2 = q4(sa, sb) in the weighted sense:
// (sa, sb, u) ~ (m sa, m sb, m^2 u) for units m.
template <class F>
struct WPt {
  typename F::Elt sa, sb, u;
};

template <class F>
WPt<F> wpt_flip(const F& f, const WPt<F>& P) {
  return {P.sa, P.sb, f.neg(P.u)};
}

// Scale so the pivot coordinate of (sa : sb) equals one.
template <class F>
WPt<F> wpt_normalize(const F& f, const WPt<F>& P) {
  if (f.is_unit(P.sb)) {
    auto m = f.inv(P.sb);
    return {f.mul(P.sa, m), f.one(), f.mul(P.u, f.mul(m, m))};
  }
  if (f.is_unit(P.sa)) {
    auto m = f.inv(P.sa);
    return {f.one(), f.mul(P.sb, m), f.mul(P.u, f.mul(m, m))};
  }
  throw Genus1Degenerate("weighted point with no visible coordinate");
}

template <class F>
bool wpt_eq(const F& f, const WPt<F>& P, const WPt<F>& Q) {
  auto cross = f.sub(f.mul(P.sa, Q.sb), f.mul(P.sb, Q.sa));
  if (!f.is_zero(cross)) return false;
  // u' sa^2 == u sa'^2 against whichever coordinate pair is usable
  auto da = f.sub(f.mul(Q.u, f.mul(P.sa, P.sa)), f.mul(P.u, f.mul(Q.sa, Q.sa)));
  auto db = f.sub(f.mul(Q.u, f.mul(P.sb, P.sb)), f.mul(P.u, f.mul(Q.sb, Q.sb)));
  if (f.is_unit(P.sa) || f.is_unit(Q.sa)) return f.is_zero(da);
  if (f.is_unit(P.sb) || f.is_unit(Q.sb)) return f.is_zero(db);
  throw Genus1Degenerate("weighted point comparison with no visible pivot");
}

// Merge listed points into (point, multiplicity) pairs, preserving order of
// first appearance.
template <class F>
std::vector<std::pair<WPt<F>, int>> merge_divisor(
    const F& f, const std::vector<WPt<F>>& pts) {
  std::vector<std::pair<WPt<F>, int>> out;
  for (const auto& p : pts) {
    bool found = false;
    for (auto& e : out)
      if (wpt_eq(f, e.first, p)) {
        ++e.second;
        found = true;
        break;
      }
    if (!found) out.push_back({p, 1});
  }
  return out;
}

namespace detail {

// One linear condition on (k0, k1, k2, k3), the coefficients of
// psi = k0 s^2 + k1 s t + k2 t^2 and the cover coordinate factor kappa = k3,
// expressing that psi - kappa u vanishes at P to the requested order.
template <class F>
void append_rows(const F& f, const BinForm<F>& q4, const WPt<F>& praw, int m,
                 std::vector<std::vector<typename F::Elt>>& rows) {
  WPt<F> P = wpt_normalize(f, praw);
  bool ram = f.is_zero(P.u);
  auto zero = f.zero(), one = f.one(), two = f.from_int(2);
  // Vanishing row works in either chart.
  rows.push_back({f.mul(P.sa, P.sa), f.mul(P.sa, P.sb), f.mul(P.sb, P.sb),
                  f.neg(P.u)});
  if (m == 1) return;
  if (ram) {
    if (m >= 3) throw Genus1Degenerate("triple point at a branch point");
    // Double zero at a branch point forces the odd part out entirely.
    rows.push_back({zero, zero, zero, one});
    return;
  }
  if (f.is_unit(P.sb)) {
    // chart s = sa/sb, rep (s, 1, u)
    auto s = P.sa;
    auto qp = bin_eval(f, bin_dx(f, q4), s, one);
    auto up = f.div(qp, f.mul(two, P.u));  // u'(s)
    rows.push_back({f.mul(two, s), one, zero, f.neg(up)});
    if (m >= 3) {
      auto qpp = bin_eval(f, bin_dx(f, bin_dx(f, q4)), s, one);
      // u'' = q''/(2u) - q'^2/(4u^3)
      auto upp = f.sub(f.div(qpp, f.mul(two, P.u)),
                       f.div(f.mul(qp, qp),
                             f.mul(f.from_int(4), f.mul(P.u, f.mul(P.u, P.u)))));
      rows.push_back({two, zero, zero, f.neg(upp)});
    }
  } else {
    // chart t = sb/sa, rep (1, t, u)
    auto t = P.sb;
    auto qp = bin_eval(f, bin_dy(f, q4), one, t);
    auto up = f.div(qp, f.mul(two, P.u));
    rows.push_back({zero, one, f.mul(two, t), f.neg(up)});
    if (m >= 3) {
      auto qpp = bin_eval(f, bin_dy(f, bin_dy(f, q4)), one, t);
      auto upp = f.sub(f.div(qpp, f.mul(two, P.u)),
                       f.div(f.mul(qp, qp),
                             f.mul(f.from_int(4), f.mul(P.u, f.mul(P.u, P.u)))));
      rows.push_back({zero, zero, two, f.neg(upp)});
    }
  }
}

}  // namespace detail

// Residual point of an effective divisor of total degree 3: the unique
// fourth zero of the interpolated section psi - kappa u through the divisor.
// Throws Genus1Degenerate when the interpolation problem is not in general
// position (callers redraw auxiliary points or switch paths).
template <class F>
WPt<F> residual_point(const F& f, const BinForm<F>& q4,
                      const std::vector<std::pair<WPt<F>, int>>& div3) {
  int total = 0;
  for (auto& e : div3) total += e.second;
  if (total != 3) throw Genus1Degenerate("residual divisor degree must be 3");
  for (size_t i = 0; i < div3.size(); ++i)
    for (size_t j = i + 1; j < div3.size(); ++j)
      if (wpt_eq(f, div3[i].first, div3[j].first))
        throw Genus1Degenerate("unmerged duplicate in residual divisor");

  std::vector<std::vector<typename F::Elt>> rows;
  for (auto& e : div3) detail::append_rows(f, q4, e.first, e.second, rows);
  auto basis = kernel_basis(f, rows);
  if (basis.size() != 1)
    throw Genus1Degenerate("interpolation system is not of full rank");
  const auto& k = basis[0];
  BinForm<F> psi{std::vector<typename F::Elt>{k[2], k[1], k[0]}};
  const auto& kappa = k[3];

  if (f.is_unit(kappa)) {
    // Norm form psi^2 - kappa^2 q4 has the divisor's s-coordinates plus the
    // residual root.
    BinForm<F> N = bin_mul(f, psi, psi);
    BinForm<F> kq = bin_scale(f, q4, f.mul(kappa, kappa));
    for (size_t i = 0; i < N.c.size(); ++i) N.c[i] = f.sub(N.c[i], kq.c[i]);
    for (auto& e : div3) {
      WPt<F> P = wpt_normalize(f, e.first);
      for (int j = 0; j < e.second; ++j) {
        BinForm<F> q;
        if (!bin_divide_linear(f, N, P.sa, P.sb, q))
          throw Genus1Degenerate("norm form does not contain input root");
        N = q;
      }
    }
    if (N.degree() != 1) throw Genus1Degenerate("norm degree drop");
    auto ra = f.neg(N.c[0]);
    auto rb = N.c[1];
    if (f.is_zero(ra) && f.is_zero(rb))
      throw Genus1Degenerate("vanishing residual root");
    auto u4 = f.div(bin_eval(f, psi, ra, rb), kappa);
    return {ra, rb, u4};
  }

  // kappa == 0: the section is a pulled-back function, its divisor pairs
  // points with their flips.  The residual is the missing partner.
  if (bin_is_zero(f, psi))
    throw Genus1Degenerate("identically zero interpolation");
  std::vector<std::pair<WPt<F>, int>> cands;
  std::vector<bool> used(div3.size(), false);
  for (size_t i = 0; i < div3.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const auto& P = div3[i].first;
    int mp = div3[i].second;
    if (f.is_zero(P.u)) {
      if (mp % 2 == 1) cands.push_back({P, 1});
      continue;
    }
    WPt<F> Pf = wpt_flip(f, P);
    int mq = 0;
    for (size_t j = i + 1; j < div3.size(); ++j)
      if (!used[j] && wpt_eq(f, div3[j].first, Pf)) {
        used[j] = true;
        mq = div3[j].second;
        break;
      }
    if (mp > mq) cands.push_back({Pf, mp - mq});
    else if (mq > mp) cands.push_back({P, mq - mp});
  }
  if (cands.size() != 1 || cands[0].second != 1)
    throw Genus1Degenerate("flip pairing does not isolate a residual");
  WPt<F> R = cands[0].first;
  if (!f.is_zero(bin_eval(f, psi, R.sa, R.sb)))
    throw Genus1Degenerate("residual misses the interpolated section");
  return R;
}

}  // namespace kummer
