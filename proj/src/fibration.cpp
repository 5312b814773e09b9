// Elliptic pencils on the resolved quartic: the catalog of pencils, the
// classification of the 28 special curves against a pencil, fiberwise values,
// singular-member detection, and the fiberwise group steps (negation and
// translation) together with their structural audits.

#include <kummer/fibration.hpp>
#include <kummer/genus1.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace kummer {

namespace {

// ---------------------------------------------------------------------------
// Small polynomial utilities on dense low-to-high coefficient vectors.
// ---------------------------------------------------------------------------

template <class F>
void uni_strip(const F& f, std::vector<typename F::Elt>& a) {
  while (!a.empty() && f.is_zero(a.back())) a.pop_back();
}

template <class F>
std::vector<typename F::Elt> uni_rem(const F& f,
                                     std::vector<typename F::Elt> a,
                                     const std::vector<typename F::Elt>& b) {
  uni_strip(f, a);
  while (a.size() >= b.size()) {
    auto q = f.div(a.back(), b.back());
    for (size_t i = 0; i < b.size(); ++i) {
      size_t j = a.size() - b.size() + i;
      a[j] = f.sub(a[j], f.mul(q, b[i]));
    }
    a.pop_back();
    uni_strip(f, a);
  }
  return a;
}

template <class F>
std::vector<typename F::Elt> uni_gcd(const F& f,
                                     std::vector<typename F::Elt> a,
                                     std::vector<typename F::Elt> b) {
  uni_strip(f, a);
  uni_strip(f, b);
  while (!b.empty()) {
    auto r = uni_rem(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Whether the binary form has a repeated linear divisor (over the closure).
template <class F>
bool bin_repeated_divisor(const F& f, const BinForm<F>& a) {
  int d = a.degree();
  std::vector<typename F::Elt> u(a.c);
  uni_strip(f, u);
  if (u.empty()) return true;
  int degx = (int)u.size() - 1;
  if (d - degx >= 2) return true;  // y^2 divides
  // strip the power of y (at most one left), then gcd with the derivative
  int low = 0;
  while (low < (int)u.size() && f.is_zero(u[low])) ++low;
  if (low >= 2) return true;  // x^2 divides
  std::vector<typename F::Elt> core(u.begin() + low, u.end());
  std::vector<typename F::Elt> der;
  for (size_t i = 1; i < core.size(); ++i)
    der.push_back(f.mul(f.from_int((i64)i), core[i]));
  auto g = uni_gcd(f, core, der);
  return g.size() >= 2;
}

// gcd of two binary forms, returned as a form dividing both.
template <class F>
BinForm<F> bin_gcd_forms(const F& f, const BinForm<F>& a, const BinForm<F>& b) {
  auto split = [&](const BinForm<F>& v, int& xm, int& ym,
                   std::vector<typename F::Elt>& core) {
    int d = v.degree();
    int lo = 0;
    while (lo <= d && f.is_zero(v.c[lo])) ++lo;
    int hi = d;
    while (hi >= lo && f.is_zero(v.c[hi])) --hi;
    xm = lo;          // power of x dividing
    ym = d - hi;      // power of y dividing
    core.assign(v.c.begin() + lo, v.c.begin() + hi + 1);
  };
  int ax, ay, bx, by;
  std::vector<typename F::Elt> ca, cb;
  split(a, ax, ay, ca);
  split(b, bx, by, cb);
  auto g = uni_gcd(f, ca, cb);
  int gx = std::min(ax, bx), gy = std::min(ay, by);
  BinForm<F> out = bin_zero(f, gx + gy + (int)g.size() - 1);
  for (size_t i = 0; i < g.size(); ++i) out.c[gx + i] = g[i];
  return out;
}

// Exact division of binary forms; throws when the division is not exact.
template <class F>
BinForm<F> bin_div_exact(const F& f, const BinForm<F>& a, const BinForm<F>& b) {
  auto split = [&](const BinForm<F>& v, int& xm, std::vector<typename F::Elt>& core) {
    int d = v.degree();
    int lo = 0;
    while (lo <= d && f.is_zero(v.c[lo])) ++lo;
    int hi = d;
    while (hi >= lo && f.is_zero(v.c[hi])) --hi;
    if (lo > hi) throw FibrationInvariant("division of a vanishing form");
    xm = lo;
    core.assign(v.c.begin() + lo, v.c.begin() + hi + 1);
  };
  int ax, bx;
  std::vector<typename F::Elt> ca, cb;
  split(a, ax, ca);
  split(b, bx, cb);
  if (bx > ax || cb.size() > ca.size())
    throw FibrationInvariant("inexact form division");
  std::vector<typename F::Elt> q(ca.size() - cb.size() + 1, f.zero());
  while (ca.size() >= cb.size()) {
    auto lead = f.div(ca.back(), cb.back());
    q[ca.size() - cb.size()] = lead;
    for (size_t i = 0; i < cb.size(); ++i) {
      size_t j = ca.size() - cb.size() + i;
      ca[j] = f.sub(ca[j], f.mul(lead, cb[i]));
    }
    ca.pop_back();
    while (!ca.empty() && ca.size() >= cb.size() && f.is_zero(ca.back())) ca.pop_back();
  }
  uni_strip(f, ca);
  if (!ca.empty()) throw FibrationInvariant("inexact form division");
  BinForm<F> out = bin_zero(f, a.degree() - b.degree());
  for (size_t i = 0; i < q.size(); ++i) out.c[ax - bx + i] = q[i];
  return out;
}

template <class F>
bool ter_zero_p(const F& f, const TerForm<F>& a) {
  for (const auto& c : a.c)
    if (!f.is_zero(c)) return false;
  return true;
}

template <class F>
TerForm<F> ter_comb(const F& f, const typename F::Elt& ca, const TerForm<F>& a,
                    const typename F::Elt& cb, const TerForm<F>& b) {
  TerForm<F> out = ter_zero(f, a.d);
  for (size_t i = 0; i < a.c.size(); ++i)
    out.c[i] = f.add(f.mul(ca, a.c[i]), f.mul(cb, b.c[i]));
  return out;
}

// Substitute (x, y, z) = u0*b[0] + u1*b[1] + u2*b[2] into a ternary form,
// where the rows b[] are coordinate vectors of length 3.
template <class F>
TerForm<F> ter_subst(const F& f, const TerForm<F>& a,
                     const std::array<Vec3<F>, 3>& b) {
  std::array<TerForm<F>, 3> lin;
  for (int v = 0; v < 3; ++v) {
    lin[v] = ter_zero(f, 1);
    lin[v].c[lin[v].idx(1, 0)] = b[0][v];
    lin[v].c[lin[v].idx(0, 1)] = b[1][v];
    lin[v].c[lin[v].idx(0, 0)] = b[2][v];
  }
  TerForm<F> out = ter_zero(f, a.d);
  for (int i = 0; i <= a.d; ++i)
    for (int j = 0; i + j <= a.d; ++j) {
      const auto& co = a.c[a.idx(i, j)];
      if (f.is_zero(co)) continue;
      TerForm<F> term = ter_zero(f, 0);
      term.c[0] = co;
      for (int r = 0; r < i; ++r) term = ter_mul(f, term, lin[0]);
      for (int r = 0; r < j; ++r) term = ter_mul(f, term, lin[1]);
      for (int r = 0; r < a.d - i - j; ++r) term = ter_mul(f, term, lin[2]);
      for (size_t k = 0; k < out.c.size(); ++k)
        out.c[k] = f.add(out.c[k], term.c[k]);
    }
  return out;
}

// Degree-one ternary substitution forms for a plane basis (three rows of
// ambient 4-vectors): the j-th output is the j-th ambient coordinate.
template <class F>
std::array<TerForm<F>, 4> linear_subs(const F& f,
                                      const std::array<std::array<typename F::Elt, 4>, 3>& bas) {
  std::array<TerForm<F>, 4> s;
  for (int j = 0; j < 4; ++j) {
    s[j] = ter_zero(f, 1);
    s[j].c[s[j].idx(1, 0)] = bas[0][j];
    s[j].c[s[j].idx(0, 1)] = bas[1][j];
    s[j].c[s[j].idx(0, 0)] = bas[2][j];
  }
  return s;
}

// The linear form with root (sa : sb).
template <class F>
BinForm<F> root_form(const F& f, const typename F::Elt& sa, const typename F::Elt& sb) {
  BinForm<F> out = bin_zero(f, 1);
  out.c[0] = f.neg(sa);
  out.c[1] = sb;
  return out;
}

template <class F>
int unit_index3(const F& f, const Vec3<F>& v) {
  for (int i = 0; i < 3; ++i)
    if (f.is_unit(v[i])) return i;
  return -1;
}

template <class F>
typename F::Elt pair_cross(const F& f,
                           const std::pair<typename F::Elt, typename F::Elt>& a,
                           const std::pair<typename F::Elt, typename F::Elt>& b) {
  return f.sub(f.mul(a.first, b.second), f.mul(a.second, b.first));
}

// The member of the pencil at value t, as a single quartic-ambient form:
// tb*q1 - ta*q2.
Form4<FpField> pencil_form(const FpField& f, const Form4<FpField>& q1,
                           const Form4<FpField>& q2, const P1& t) {
  std::map<std::array<uint8_t, 4>, i64> acc;
  auto add = [&](const std::array<uint8_t, 4>& e, i64 c) {
    auto it = acc.find(e);
    if (it == acc.end())
      acc.emplace(e, c);
    else
      it->second = f.add(it->second, c);
  };
  for (const auto& tm : q1.terms) add(tm.e, f.mul(t.b, tm.c));
  for (const auto& tm : q2.terms) add(tm.e, f.neg(f.mul(t.a, tm.c)));
  std::vector<std::pair<std::array<int, 4>, i64>> rows;
  for (const auto& [e, c] : acc)
    rows.push_back({{(int)e[0], (int)e[1], (int)e[2], (int)e[3]}, c});
  return form4_build(f, rows);
}

// Covector of a degree-one quartic-ambient form.
std::array<i64, 4> form4_linear_cov(const FpField& f, const Form4<FpField>& a) {
  std::array<i64, 4> cov{0, 0, 0, 0};
  for (const auto& tm : a.terms)
    for (int i = 0; i < 4; ++i)
      if (tm.e[i] == 1) cov[i] = f.add(cov[i], tm.c);
  return cov;
}

int find_line_id(const SurfaceModel& m, std::array<int, 3> nodes) {
  std::sort(nodes.begin(), nodes.end());
  for (size_t i = 0; i < m.line_nodes.size(); ++i) {
    auto t = m.line_nodes[i];
    std::sort(t.begin(), t.end());
    if (t.size() == 3 && t[0] == nodes[0] && t[1] == nodes[1] &&
        t[2] == nodes[2])
      return (int)i;
  }
  throw ModelCorrupt("no line through the requested nodes");
}

// Whether the point lies on the given line of the configuration.
bool point_on_line(const SurfaceModel& m, int lid, const P3& q) {
  const FpField& f = m.f;
  const LineP3& L = m.lines[lid];
  std::vector<std::vector<i64>> rows(4, std::vector<i64>(2));
  for (int i = 0; i < 4; ++i) {
    rows[i][0] = L.u.x[i];
    rows[i][1] = L.v.x[i];
  }
  std::vector<i64> sol;
  return solve_linear(f, rows, {q.x[0], q.x[1], q.x[2], q.x[3]}, sol);
}

// Parameter of a point on a line, in the line's own (u : v) chart.
P1 line_param_of(const SurfaceModel& m, int lid, const P3& q) {
  const FpField& f = m.f;
  const LineP3& L = m.lines[lid];
  std::vector<std::vector<i64>> rows(4, std::vector<i64>(2));
  for (int i = 0; i < 4; ++i) {
    rows[i][0] = L.u.x[i];
    rows[i][1] = L.v.x[i];
  }
  std::vector<i64> sol;
  if (!solve_linear(f, rows, {q.x[0], q.x[1], q.x[2], q.x[3]}, sol))
    throw FibrationInvariant("point is not on the expected line");
  return p1_make(sol[0], sol[1], f.p);
}

bool proportional4(const FpField& f, const std::array<i64, 4>& a,
                   const std::array<i64, 4>& b) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!f.is_zero(f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i])))) return false;
  return true;
}

template <class F>
bool proportional4_f(const F& f, const std::array<typename F::Elt, 4>& a,
                     const std::array<typename F::Elt, 4>& b) {
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (!f.is_zero(f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i])))) return false;
  return true;
}

// Leading coefficient vector of a tuple of series, read at the minimum
// valuation attained by any visible entry.
std::array<i64, 4> series_lead_vec(const SerField& S, const std::array<LSer, 4>& v) {
  i64 vstar = -1;
  for (const auto& s : v)
    if (!s.c.empty()) {
      if (vstar < 0 || s.val < vstar) vstar = s.val;
    }
  if (vstar < 0) throw PrecisionExhausted("vanishing direction vector");
  std::array<i64, 4> out{};
  for (int i = 0; i < 4; ++i) out[i] = S.coeff(v[i], vstar);
  return out;
}

template <class F>
typename F::Elt det3_cols(const F& f, const std::array<typename F::Elt, 4>& r0,
                          const std::array<typename F::Elt, 4>& r1,
                          const std::array<typename F::Elt, 4>& r2, int a, int b,
                          int c) {
  auto m2 = [&](const std::array<typename F::Elt, 4>& x,
                const std::array<typename F::Elt, 4>& y, int i, int j) {
    return f.sub(f.mul(x[i], y[j]), f.mul(x[j], y[i]));
  };
  auto d = f.mul(r0[a], m2(r1, r2, b, c));
  d = f.sub(d, f.mul(r0[b], m2(r1, r2, a, c)));
  d = f.add(d, f.mul(r0[c], m2(r1, r2, a, b)));
  return d;
}

template <class F>
bool has_unit_minor3(const F& f, const std::array<typename F::Elt, 4>& r0,
                     const std::array<typename F::Elt, 4>& r1,
                     const std::array<typename F::Elt, 4>& r2) {
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      for (int c = b + 1; c < 4; ++c)
        if (f.is_unit(det3_cols(f, r0, r1, r2, a, b, c))) return true;
  return false;
}

// Chart 3-vector of the direction of a configuration line at a node it
// passes through.
Vec3<FpField> line_dir_chart(const SurfaceModel& m, int lid, int nodeid) {
  const FpField& f = m.f;
  const Node& nd = m.nodes[nodeid];
  for (const P3* endp : {&m.lines[lid].u, &m.lines[lid].v}) {
    std::array<i64, 4> d{};
    bool nonzero = false;
    for (int i = 0; i < 4; ++i) {
      d[i] = f.sub(endp->x[i], f.mul(endp->x[nd.pivot], nd.pos.x[i]));
      if (d[i] != 0) nonzero = true;
    }
    if (nonzero) return {d[nd.chart[0]], d[nd.chart[1]], d[nd.chart[2]]};
  }
  throw ModelCorrupt("degenerate line span at a node");
}

// ---------------------------------------------------------------------------
// Taylor expansion of a quartic-ambient form at a node, in cone coordinates
// x = x0 * nu + (chart coordinates).  Output entry k collects the terms of
// degree k in x0, as a ternary form of degree D - k in the chart variables.
// ---------------------------------------------------------------------------

template <class F>
std::vector<TerForm<F>> expand_at_node(const F& f, const Form4<F>& a,
                                       const std::array<typename F::Elt, 4>& nu,
                                       int pivot, const std::array<int, 3>& chart) {
  int D = 0;
  for (const auto& tm : a.terms)
    D = std::max(D, (int)tm.e[0] + tm.e[1] + tm.e[2] + tm.e[3]);
  std::array<int, 4> slot_of{-1, -1, -1, -1};
  for (int k = 0; k < 3; ++k) slot_of[chart[k]] = k;
  slot_of[pivot] = -1;

  // monomial accumulator keyed by (x0 power, chart exponents)
  using Key = std::array<int, 4>;
  std::map<Key, typename F::Elt> acc;
  auto add_to = [&](std::map<Key, typename F::Elt>& mp, const Key& k,
                    const typename F::Elt& v) {
    if (f.is_zero(v)) return;
    auto it = mp.find(k);
    if (it == mp.end())
      mp.emplace(k, v);
    else
      it->second = f.add(it->second, v);
  };

  for (const auto& tm : a.terms) {
    std::map<Key, typename F::Elt> cur;
    cur.emplace(Key{0, 0, 0, 0}, tm.c);
    for (int var = 0; var < 4; ++var) {
      for (int rep = 0; rep < (int)tm.e[var]; ++rep) {
        std::map<Key, typename F::Elt> nxt;
        for (const auto& [k, v] : cur) {
          // x0 * nu[var] branch
          Key kx = k;
          ++kx[0];
          add_to(nxt, kx, f.mul(v, nu[var]));
          // chart-variable branch
          if (var != pivot) {
            Key ku = k;
            ++ku[1 + slot_of[var]];
            add_to(nxt, ku, v);
          }
        }
        cur = std::move(nxt);
      }
    }
    for (const auto& [k, v] : cur) add_to(acc, k, v);
  }

  std::vector<TerForm<F>> out;
  out.reserve(D + 1);
  for (int k = 0; k <= D; ++k) out.push_back(ter_zero(f, D - k));
  for (const auto& [k, v] : acc) {
    auto& t = out[k[0]];
    int pos = t.idx(k[1], k[2]);
    t.c[pos] = f.add(t.c[pos], v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Pencil values through germs (for points where both members of the pencil
// vanish and no special curve determines the value directly).
// ---------------------------------------------------------------------------

std::optional<P1> germ_pencil_value(const SurfaceModel& m, const Fibration& fib,
                                    const Germ& g) {
  SerField S(m.p, g.prec);
  auto q1 = form4_cast(S, fib.q1);
  auto q2 = form4_cast(S, fib.q2);
  LSer y1 = form4_eval(S, q1, g.x);
  LSer y2 = form4_eval(S, q2, g.x);
  bool v1 = !y1.c.empty(), v2 = !y2.c.empty();
  if (!v1 && !v2) return std::nullopt;
  i64 vstar = v1 && v2 ? std::min(y1.val, y2.val) : (v1 ? y1.val : y2.val);
  // a series with no visible term must still certify zero through order vstar
  if ((!v1 && y1.aprec <= vstar) || (!v2 && y2.aprec <= vstar))
    return std::nullopt;
  i64 c1 = S.coeff(y1, vstar);
  i64 c2 = S.coeff(y2, vstar);
  return p1_make(c1, c2, m.p);
}

P1 germ_value(const SurfaceModel& m, const Fibration& fib,
              const ResolvedPoint& rp) {
  for (i64 prec : {(i64)8, (i64)32}) {
    for (int variant = 0; variant < 3; ++variant) {
      try {
        Germ g = germ_at(m, rp, variant, prec);
        auto t = germ_pencil_value(m, fib, g);
        if (t) return *t;
      } catch (const PrecisionExhausted&) {
      } catch (const LiftFailure&) {
      } catch (const OffSurface&) {
      }
    }
  }
  throw UnresolvedComponentMap("pencil value undetermined along every germ");
}

P1 mobius_inverse_apply(const Mobius& mb, const P1& t, i64 p) {
  i64 ua = mod_norm((__int128)t.a * mb.m[1][1] % p - (__int128)t.b * mb.m[1][0] % p, p);
  i64 ub = mod_norm((__int128)t.b * mb.m[0][0] % p - (__int128)t.a * mb.m[0][1] % p, p);
  return p1_make(ua, ub, p);
}

Mobius mobius_canon(const Mobius& mb, i64 p) {
  FpField f(p);
  i64 s = 0;
  for (int i = 0; i < 2 && s == 0; ++i)
    for (int j = 0; j < 2 && s == 0; ++j)
      if (mb.m[i][j] != 0) s = f.inv(mb.m[i][j]);
  Mobius out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.m[i][j] = f.mul(mb.m[i][j], s);
  return out;
}

bool mobius_same(const Mobius& a, const Mobius& b, i64 p) {
  Mobius ca = mobius_canon(a, p), cb = mobius_canon(b, p);
  return ca.m == cb.m;
}

}  // namespace

// ---------------------------------------------------------------------------
// The catalog.
// ---------------------------------------------------------------------------

std::vector<Fibration> fibration_catalog(const SurfaceModel& m) {
  const FpField& f = m.f;
  const i64 la = m.lambda;
  const i64 L = f.sub(la, 1);
  const i64 h2 = inv_mod(2, m.p);
  std::vector<Fibration> cat;

  auto mk_marks = [](std::array<i64, 3> b0, std::array<i64, 3> b0p,
                     std::array<i64, 3> bB, std::array<i64, 3> bC, int nodeB,
                     int nodeC, int sp1, int sm1, int sp2, int sm2) {
    DoubleCoverMarks mk;
    mk.b0 = b0;
    mk.b0p = b0p;
    mk.bB = bB;
    mk.bC = bC;
    mk.nodeB = nodeB;
    mk.nodeC = nodeC;
    mk.sec_plus1 = sp1;
    mk.sec_minus1 = sm1;
    mk.sec_plus2 = sp2;
    mk.sec_minus2 = sm2;
    return mk;
  };

  {
    Fibration fb;
    fb.name = "rho";
    fb.q1 = form4_build(f, {{{0, 1, 0, 0}, 1}, {{0, 0, 0, 1}, -1}});
    fb.q2 = form4_build(f, {{{0, 0, 1, 0}, 1}, {{0, 0, 0, 1}, -1}});
    fb.shape = MemberShape::Plane;
    fb.fixed_lines = {find_line_id(m, {0, 4, 11})};
    fb.full_flags = true;
    cat.push_back(std::move(fb));
  }
  {
    Fibration fb;
    fb.name = "g";
    fb.q1 = form4_build(f, {{{0, 1, 1, 0}, 1}, {{0, 0, 0, 2}, 1}});
    fb.q2 = form4_build(f, {{{0, 1, 0, 1}, 1}, {{0, 0, 1, 1}, 1}});
    fb.shape = MemberShape::NodalQuadric;
    fb.vertex = 0;
    fb.fixed_lines = {find_line_id(m, {0, 6, 9}), find_line_id(m, {0, 7, 8})};
    fb.marks = mk_marks({1, -1, 1}, {1, -1, -1}, {1, 0, 0}, {0, 1, 0}, 1, 2, 6,
                        9, 7, 8);
    fb.full_flags = true;
    cat.push_back(std::move(fb));
  }
  {
    Fibration fb;
    fb.name = "h";
    fb.q1 = form4_build(f, {{{0, 0, 1, 1}, 1}, {{0, 2, 0, 0}, 1}});
    fb.q2 = form4_build(f, {{{0, 1, 1, 0}, 1}, {{0, 1, 0, 1}, 1}});
    fb.shape = MemberShape::NodalQuadric;
    fb.vertex = 0;
    fb.fixed_lines = {find_line_id(m, {0, 6, 9}), find_line_id(m, {0, 5, 10})};
    fb.marks = mk_marks({1, -1, 1}, {1, 1, -1}, {0, 1, 0}, {0, 0, 1}, 2, 3, 6,
                        9, 5, 10);
    fb.full_flags = true;
    cat.push_back(std::move(fb));
  }
  {
    Fibration fb;
    fb.name = "i";
    fb.q1 = form4_build(f, {{{0, 1, 0, 1}, 1}, {{0, 0, 2, 0}, 1}});
    fb.q2 = form4_build(f, {{{0, 1, 1, 0}, 1}, {{0, 0, 1, 1}, 1}});
    fb.shape = MemberShape::NodalQuadric;
    fb.vertex = 0;
    fb.fixed_lines = {find_line_id(m, {0, 7, 8}), find_line_id(m, {0, 5, 10})};
    fb.marks = mk_marks({1, -1, -1}, {1, 1, -1}, {1, 0, 0}, {0, 0, 1}, 1, 3, 7,
                        8, 5, 10);
    fb.full_flags = true;
    cat.push_back(std::move(fb));
  }
  {
    Fibration fb;
    fb.name = "j";
    fb.q1 = form4_build(
        f, {{{1, 3, 0, 0}, la},  {{0, 3, 1, 0}, la},  {{1, 1, 2, 0}, -la},
            {{0, 1, 3, 0}, -la}, {{1, 2, 0, 1}, la},  {{0, 2, 1, 1}, la},
            {{1, 0, 2, 1}, -la}, {{0, 0, 3, 1}, -la}});
    fb.q2 = form4_build(
        f, {{{1, 2, 1, 0}, 1},
            {{0, 2, 2, 0}, f.mul(f.add(la, 2), h2)},
            {{0, 0, 4, 0}, f.neg(f.mul(la, h2))},
            {{0, 3, 0, 1}, la},
            {{1, 1, 1, 1}, 2},
            {{0, 1, 2, 1}, f.neg(f.sub(la, 2))},
            {{0, 2, 0, 2}, f.mul(la, h2)},
            {{1, 0, 1, 2}, 1},
            {{0, 0, 2, 2}, f.neg(f.mul(f.sub(la, 2), h2))}});
    fb.shape = MemberShape::Quartic;
    cat.push_back(std::move(fb));
  }
  {
    Fibration fb;
    fb.name = "k";
    fb.q1 = form4_build(
        f,
        {{{1, 3, 0, 0}, L},
         {{1, 2, 1, 0}, f.sub(la, 2)},
         {{0, 3, 1, 0}, -1},
         {{1, 1, 2, 0}, f.mul(-2, la)},
         {{0, 2, 2, 0}, -2},
         {{2, 1, 0, 1}, f.mul(2, L)},
         {{1, 2, 0, 1}, f.sub(f.mul(2, la), 1)},
         {{0, 3, 0, 1}, la},
         {{2, 0, 1, 1}, f.mul(2, la)},
         {{1, 1, 1, 1}, f.sub(f.mul(6, la), 4)},
         {{0, 2, 1, 1}, L},
         {{0, 1, 2, 1}, f.mul(2, L)},
         {{2, 0, 0, 2}, -2},
         {{1, 1, 0, 2}, f.neg(L)},
         {{0, 2, 0, 2}, f.mul(2, la)},
         {{1, 0, 1, 2}, f.sub(la, 2)},
         {{0, 1, 1, 2}, f.neg(f.sub(f.mul(2, la), 1))},
         {{1, 0, 0, 3}, 1},
         {{0, 1, 0, 3}, la},
         {{0, 0, 1, 3}, f.neg(L)}});
    fb.q2 = form4_build(
        f, {{{2, 1, 1, 0}, L},        {{1, 2, 1, 0}, L},
            {{1, 1, 2, 0}, L},        {{0, 2, 2, 0}, L},
            {{2, 1, 0, 1}, f.neg(L)}, {{1, 2, 0, 1}, f.neg(L)},
            {{2, 0, 1, 1}, L},        {{0, 2, 1, 1}, f.neg(L)},
            {{1, 0, 2, 1}, L},        {{0, 1, 2, 1}, L},
            {{2, 0, 0, 2}, f.neg(L)}, {{1, 1, 0, 2}, f.neg(L)},
            {{1, 0, 1, 2}, f.neg(L)}, {{0, 1, 1, 2}, f.neg(L)}});
    fb.shape = MemberShape::Quartic;
    cat.push_back(std::move(fb));
  }
  {
    Fibration fb;
    fb.name = "l";
    fb.q1 = form4_build(
        f, {{{0, 4, 0, 0}, L},
            {{1, 2, 1, 0}, f.mul(-2, la)},
            {{0, 3, 1, 0}, f.mul(-2, la)},
            {{1, 1, 2, 0}, f.mul(-2, la)},
            {{0, 2, 2, 0}, f.neg(f.add(la, 1))},
            {{1, 2, 0, 1}, f.mul(-2, la)},
            {{0, 3, 0, 1}, f.mul(-2, la)},
            {{1, 1, 1, 1}, f.mul(-4, la)},
            {{0, 2, 1, 1}, f.neg(f.add(f.mul(2, la), 2))},
            {{1, 1, 0, 2}, f.mul(-2, la)},
            {{0, 2, 0, 2}, f.neg(f.sub(f.mul(3, la), 1))},
            {{1, 0, 1, 2}, f.mul(2, la)},
            {{0, 1, 1, 2}, f.mul(2, la)},
            {{0, 0, 2, 2}, f.neg(L)},
            {{1, 0, 0, 3}, f.mul(2, la)},
            {{0, 1, 0, 3}, f.mul(2, la)},
            {{0, 0, 1, 3}, f.mul(-2, L)}});
    fb.q2 = form4_build(f, {{{1, 2, 1, 0}, L},
                            {{0, 3, 1, 0}, L},
                            {{1, 2, 0, 1}, L},
                            {{0, 3, 0, 1}, L},
                            {{1, 0, 1, 2}, f.neg(L)},
                            {{0, 1, 1, 2}, f.neg(L)},
                            {{1, 0, 0, 3}, f.neg(L)},
                            {{0, 1, 0, 3}, f.neg(L)}});
    fb.shape = MemberShape::Quartic;
    cat.push_back(std::move(fb));
  }
  {
    Fibration fb;
    fb.name = "pi";
    fb.q1 = form4_build(f, {{{1, 1, 0, 0}, 1},
                            {{1, 0, 0, 1}, -1},
                            {{0, 1, 1, 0}, -1},
                            {{0, 0, 1, 1}, 1}});
    fb.q2 = form4_build(f, {{{1, 0, 1, 0}, 1},
                            {{1, 0, 0, 1}, -1},
                            {{0, 1, 1, 0}, -1},
                            {{0, 1, 0, 1}, 1}});
    fb.shape = MemberShape::NodalQuadric;
    fb.vertex = 4;
    fb.fixed_lines = {find_line_id(m, {3, 4, 5}), find_line_id(m, {1, 4, 8}),
                      find_line_id(m, {2, 4, 6}), find_line_id(m, {0, 4, 11})};
    fb.full_flags = true;
    cat.push_back(std::move(fb));
  }
  {
    Fibration fb;
    fb.name = "ae";
    fb.q1 = form4_build(f, {{{0, 0, 1, 0}, 1}});
    fb.q2 = form4_build(f, {{{0, 0, 0, 1}, 1}});
    fb.shape = MemberShape::Plane;
    fb.full_flags = true;
    cat.push_back(std::move(fb));
  }
  {
    Fibration fb;
    fb.name = "abga";
    fb.q1 = form4_build(f, {{{2, 0, 0, 0}, 1},
                            {{0, 1, 1, 0}, 1},
                            {{0, 1, 0, 1}, 1},
                            {{0, 0, 1, 1}, 1}});
    fb.q2 = form4_build(f, {{{1, 1, 0, 0}, L},
                            {{0, 2, 0, 0}, L},
                            {{1, 0, 1, 0}, f.neg(la)},
                            {{0, 1, 1, 0}, -1},
                            {{0, 0, 2, 0}, f.neg(la)},
                            {{1, 0, 0, 1}, 1},
                            {{0, 1, 0, 1}, la},
                            {{0, 0, 1, 1}, f.neg(L)},
                            {{0, 0, 0, 2}, 1}});
    fb.shape = MemberShape::Quadric;
    cat.push_back(std::move(fb));
  }
  {
    Fibration fb;
    fb.name = "dj";
    fb.q1 = form4_build(f, {{{1, 2, 0, 0}, 2},
                            {{1, 0, 2, 0}, -1},
                            {{0, 0, 3, 0}, 1},
                            {{1, 1, 0, 1}, 2},
                            {{0, 1, 1, 1}, 2},
                            {{1, 0, 0, 2}, 1},
                            {{0, 0, 1, 2}, 1}});
    fb.q2 = form4_build(f, {{{0, 2, 1, 0}, 2},
                            {{1, 0, 2, 0}, 1},
                            {{0, 0, 3, 0}, -1},
                            {{1, 1, 0, 1}, 2},
                            {{0, 1, 1, 1}, 2},
                            {{1, 0, 0, 2}, 1},
                            {{0, 0, 1, 2}, 1}});
    fb.shape = MemberShape::Cubic;
    cat.push_back(std::move(fb));
  }
  {
    Fibration fb;
    fb.name = "vertical";
    fb.q1 = form4_build(f, {{{1, 1, 0, 0}, 1},
                            {{1, 0, 0, 1}, 1},
                            {{0, 1, 1, 0}, 1},
                            {{0, 0, 1, 1}, 1}});
    fb.q2 = form4_build(f, {{{1, 1, 0, 0}, 1},
                            {{1, 0, 1, 0}, -1},
                            {{0, 1, 0, 1}, -1},
                            {{0, 0, 1, 1}, 1}});
    fb.shape = MemberShape::NodalQuadric;
    fb.vertex = 10;
    fb.fixed_lines = {find_line_id(m, {1, 6, 10}), find_line_id(m, {3, 10, 11}),
                      find_line_id(m, {2, 8, 10}), find_line_id(m, {0, 5, 10})};
    fb.full_flags = true;
    cat.push_back(std::move(fb));
  }
  return cat;
}

const Fibration& find_fibration(const std::vector<Fibration>& cat,
                                const std::string& name) {
  for (const auto& fb : cat)
    if (fb.name == name) return fb;
  throw std::out_of_range("unknown fibration name: " + name);
}

// ---------------------------------------------------------------------------
// Classification of the special curves.
// ---------------------------------------------------------------------------

namespace {

CurveClass classify_pair(const FpField& f, const BinForm<FpField>& b1in,
                         const BinForm<FpField>& b2in) {
  CurveClass cc;
  bool z1 = bin_is_zero(f, b1in), z2 = bin_is_zero(f, b2in);
  if (z1 && z2) throw FibrationInvariant("classify_pair on a base curve");
  if (z1) {
    cc.role = CurveRole::Fibral;
    cc.value = p1_make(0, 1, f.p);
    cc.degree = 0;
    return cc;
  }
  if (z2) {
    cc.role = CurveRole::Fibral;
    cc.value = p1_make(1, 0, f.p);
    cc.degree = 0;
    return cc;
  }
  BinForm<FpField> b1 = b1in, b2 = b2in;
  auto g = bin_gcd_forms(f, b1, b2);
  if (g.degree() >= 1) {
    b1 = bin_div_exact(f, b1, g);
    b2 = bin_div_exact(f, b2, g);
  }
  int d = b1.degree();
  if (d == 0) {
    cc.role = CurveRole::Fibral;
    cc.value = p1_make(b1.c[0], b2.c[0], f.p);
    cc.degree = 0;
    return cc;
  }
  if (d == 1) {
    cc.role = CurveRole::Section;
    Mobius mb;
    mb.m[0][0] = b1.c[1];
    mb.m[1][0] = b1.c[0];
    mb.m[0][1] = b2.c[1];
    mb.m[1][1] = b2.c[0];
    cc.mob = mobius_canon(mb, f.p);
    cc.degree = 1;
    return cc;
  }
  cc.role = CurveRole::Multisection;
  cc.r1 = b1;
  cc.r2 = b2;
  cc.degree = d;
  return cc;
}

CurveClass base_component_class(const SurfaceModel& m, const Fibration& fib,
                                const std::vector<ResolvedPoint>& samples) {
  CurveClass cc;
  cc.role = CurveRole::BaseComponent;
  std::vector<P1> vals;
  for (const auto& rp : samples) {
    if ((int)vals.size() >= 2) break;
    try {
      vals.push_back(germ_value(m, fib, rp));
    } catch (const UnresolvedComponentMap&) {
    }
  }
  if (vals.empty())
    throw UnresolvedComponentMap("no usable germ sample on a base curve");
  if (vals.size() == 1 || vals[0] == vals[1]) {
    cc.degree = 0;
    cc.value = vals[0];
  } else {
    cc.degree = -1;
  }
  return cc;
}

CurveClass classify_line(const SurfaceModel& m, const Fibration& fib, int lid) {
  const FpField& f = m.f;
  const LineP3& L = m.lines[lid];
  std::array<BinForm<FpField>, 4> subs;
  for (int j = 0; j < 4; ++j) {
    subs[j] = bin_zero(f, 1);
    subs[j].c[1] = L.u.x[j];
    subs[j].c[0] = L.v.x[j];
  }
  auto b1 = form4_compose_bin(f, fib.q1, subs);
  auto b2 = form4_compose_bin(f, fib.q2, subs);
  if (!(bin_is_zero(f, b1) && bin_is_zero(f, b2)))
    return classify_pair(f, b1, b2);
  // base line: sample germ values at smooth points of the line
  std::vector<ResolvedPoint> samples;
  for (i64 i = 0; i <= f.p && (int)samples.size() < 3; ++i) {
    P1 par = p1_at(i, f.p);
    std::array<i64, 4> X;
    for (int j = 0; j < 4; ++j)
      X[j] = f.add(f.mul(par.a, L.u.x[j]), f.mul(par.b, L.v.x[j]));
    P3 q = p3_make(X, f.p);
    if (m.node_index(q) >= 0) continue;
    samples.push_back(ResolvedPoint{false, q, -1, {}});
  }
  return base_component_class(m, fib, samples);
}

CurveClass classify_node_curve(const SurfaceModel& m, const Fibration& fib,
                               int nid) {
  const FpField& f = m.f;
  const Node& nd = m.nodes[nid];
  i64 v1 = form4_eval(f, fib.q1, nd.pos.x);
  i64 v2 = form4_eval(f, fib.q2, nd.pos.x);
  if (!(f.is_zero(v1) && f.is_zero(v2))) {
    CurveClass cc;
    cc.role = CurveRole::Fibral;
    cc.value = p1_make(v1, v2, f.p);
    cc.degree = 0;
    return cc;
  }
  auto T1 = expand_at_node(f, fib.q1, nd.pos.x, nd.pivot, nd.chart);
  auto T2 = expand_at_node(f, fib.q2, nd.pos.x, nd.pivot, nd.chart);
  if (T1.size() != T2.size())
    throw FibrationInvariant("pencil members of unequal degree");
  int D = (int)T1.size() - 1;
  const auto& fwd = nd.param.fwd;
  auto stage = [&](int k) {
    return std::pair<BinForm<FpField>, BinForm<FpField>>{
        ter_compose(f, T1[k], fwd[0], fwd[1], fwd[2]),
        ter_compose(f, T2[k], fwd[0], fwd[1], fwd[2])};
  };
  auto [b1, b2] = stage(D - 1);
  if (!(bin_is_zero(f, b1) && bin_is_zero(f, b2)))
    return classify_pair(f, b1, b2);
  if (D >= 2) {
    auto [c1, c2] = stage(D - 2);
    if (!(bin_is_zero(f, c1) && bin_is_zero(f, c2)))
      return classify_pair(f, c1, c2);
  }
  std::vector<ResolvedPoint> samples;
  for (i64 i = 0; i < 3; ++i)
    samples.push_back(ResolvedPoint{true, nd.pos, nid, p1_at(i, f.p)});
  return base_component_class(m, fib, samples);
}

}  // namespace

SpecialClassification classify_special_curves(const SurfaceModel& m,
                                              const Fibration& fib) {
  SpecialClassification cls;
  for (int n = 0; n < 12; ++n)
    cls.node_curves[n] = classify_node_curve(m, fib, n);
  for (int l = 0; l < 16; ++l) cls.lines[l] = classify_line(m, fib, l);
  return cls;
}

// ---------------------------------------------------------------------------
// Value of the fibration at a point.
// ---------------------------------------------------------------------------

P1 fibration_value(const SurfaceModel& m, const Fibration& fib,
                   const SpecialClassification& cls, const ResolvedPoint& rp) {
  const FpField& f = m.f;
  if (!rp.exceptional) {
    i64 v1 = form4_eval(f, fib.q1, rp.pt.x);
    i64 v2 = form4_eval(f, fib.q2, rp.pt.x);
    if (!(f.is_zero(v1) && f.is_zero(v2))) return p1_make(v1, v2, f.p);
    // point of the base locus: a special curve through it carries the value
    for (int l = 0; l < 16; ++l) {
      if (!point_on_line(m, l, rp.pt)) continue;
      const CurveClass& cc = cls.lines[l];
      if (cc.role == CurveRole::Fibral ||
          (cc.role == CurveRole::BaseComponent && cc.degree == 0))
        return cc.value;
      if (cc.role == CurveRole::Section)
        return mobius_apply(cc.mob, line_param_of(m, l, rp.pt), f.p);
      if (cc.role == CurveRole::Multisection) {
        P1 u = line_param_of(m, l, rp.pt);
        i64 w1 = bin_eval(f, cc.r1, u.a, u.b);
        i64 w2 = bin_eval(f, cc.r2, u.a, u.b);
        if (!(f.is_zero(w1) && f.is_zero(w2))) return p1_make(w1, w2, f.p);
      }
      return germ_value(m, fib, rp);
    }
    return germ_value(m, fib, rp);
  }
  const CurveClass& cc = cls.node_curves[rp.node];
  if (cc.role == CurveRole::Fibral ||
      (cc.role == CurveRole::BaseComponent && cc.degree == 0))
    return cc.value;
  if (cc.role == CurveRole::Section) return mobius_apply(cc.mob, rp.dir, f.p);
  if (cc.role == CurveRole::Multisection) {
    i64 w1 = bin_eval(f, cc.r1, rp.dir.a, rp.dir.b);
    i64 w2 = bin_eval(f, cc.r2, rp.dir.a, rp.dir.b);
    if (!(f.is_zero(w1) && f.is_zero(w2))) return p1_make(w1, w2, f.p);
  }
  return germ_value(m, fib, rp);
}

P1 fibration_value(const SurfaceModel& m, const Fibration& fib,
                   const ResolvedPoint& rp) {
  auto cls = classify_special_curves(m, fib);
  return fibration_value(m, fib, cls, rp);
}

// ---------------------------------------------------------------------------
// Double-cover engine for the marked nodal-quadric pencils: members are
// cones over the vertex; the quartic cuts a genus-one double cover
// u^2 = q4(s) of the ruling line of the member cone.
// ---------------------------------------------------------------------------

namespace {

template <class F>
struct VsCtx {
  ConicParam<F> par;                                     // member cone ruling
  BinForm<F> P2, Q2, q4, lB, lC;                         // factored data
  std::pair<typename F::Elt, typename F::Elt> s1, s2;    // fixed rulings
  std::pair<typename F::Elt, typename F::Elt> sB, sC;    // marked node rulings
  typename F::Elt usec1{}, usec2{};                      // positive-sheet values
};

template <class F>
VsCtx<F> make_vs_ctx(const SurfaceModel& m, const F& f, const Fibration& fib,
                     const typename F::Elt& ta, const typename F::Elt& tb) {
  const DoubleCoverMarks& mk = *fib.marks;
  const Node& nd = m.nodes[fib.vertex];
  std::array<typename F::Elt, 4> nu;
  for (int i = 0; i < 4; ++i) nu[i] = f.from_int(nd.pos.x[i]);
  auto T1 = expand_at_node(f, form4_cast(f, fib.q1), nu, nd.pivot, nd.chart);
  auto T2 = expand_at_node(f, form4_cast(f, fib.q2), nu, nd.pivot, nd.chart);
  auto TK = expand_at_node(f, form4_cast(f, m.K), nu, nd.pivot, nd.chart);
  if (!ter_zero_p(f, T1[1]) || !ter_zero_p(f, T2[1]) ||
      !f.is_zero(T1[2].c[0]) || !f.is_zero(T2[2].c[0]))
    throw FibrationInvariant("pencil members are not cones at the vertex");
  if (!ter_zero_p(f, TK[3]) || !ter_zero_p(f, TK[1]) ||
      !f.is_zero(TK[4].c[0]))
    throw FibrationInvariant("surface expansion at the vertex is not even");

  auto C2 = ter_comb(f, tb, T1[0], f.neg(ta), T2[0]);
  auto conic = conic_from_ter(f, C2);
  auto cvt = [&](const std::array<i64, 3>& v) {
    return Vec3<F>{f.from_int(v[0]), f.from_int(v[1]), f.from_int(v[2])};
  };

  VsCtx<F> cx;
  cx.par = conic_param(f, conic, cvt(mk.b0));
  cx.s1 = {f.one(), f.zero()};
  cx.s2 = cx.par.param_of(f, cvt(mk.b0p));
  cx.sB = cx.par.param_of(f, cvt(mk.bB));
  cx.sC = cx.par.param_of(f, cvt(mk.bC));
  const std::array<std::pair<typename F::Elt, typename F::Elt>, 4> ss{
      cx.s1, cx.s2, cx.sB, cx.sC};
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if (f.is_zero(pair_cross(f, ss[i], ss[j])))
        throw DegenerateConic("marked rulings collide");

  auto TKf = [&](int k) {
    return ter_compose(f, TK[k], cx.par.fwd[0], cx.par.fwd[1], cx.par.fwd[2]);
  };
  auto A4 = TKf(2);
  auto B8 = TKf(0);
  cx.lB = root_form(f, cx.sB.first, cx.sB.second);
  cx.lC = root_form(f, cx.sC.first, cx.sC.second);
  auto divide1 = [&](BinForm<F>& a,
                     const std::pair<typename F::Elt, typename F::Elt>& s) {
    BinForm<F> q;
    if (!bin_divide_linear(f, a, s.first, s.second, q))
      throw FibrationInvariant("expected ruling factor is missing");
    a = q;
  };
  divide1(A4, cx.s1);
  divide1(A4, cx.s2);
  cx.P2 = A4;  // degree 2
  divide1(B8, cx.s1);
  divide1(B8, cx.s2);
  divide1(B8, cx.sB);
  divide1(B8, cx.sB);
  divide1(B8, cx.sC);
  divide1(B8, cx.sC);
  cx.Q2 = B8;  // degree 2
  cx.q4 = bin_scale(f, bin_mul(f, cx.P2, cx.Q2), f.neg(f.one()));

  auto usec = [&](const std::pair<typename F::Elt, typename F::Elt>& s,
                  const Vec3<F>& b) {
    auto at = cx.par.at(f, s.first, s.second);
    int ui = unit_index3(f, b);
    if (ui < 0) throw FibrationInvariant("degenerate ruling mark");
    auto mu = f.div(at[ui], b[ui]);
    auto den = f.mul(bin_eval(f, cx.lB, s.first, s.second),
                     bin_eval(f, cx.lC, s.first, s.second));
    return f.div(f.mul(mu, bin_eval(f, cx.P2, s.first, s.second)), den);
  };
  cx.usec1 = usec(cx.s1, cvt(mk.b0));
  cx.usec2 = usec(cx.s2, cvt(mk.b0p));
  return cx;
}

template <class F>
WPt<F> marked_section_wpt(const F& f, const DoubleCoverMarks& mk,
                          const VsCtx<F>& cx, int node) {
  if (node == mk.sec_plus1) return {cx.s1.first, cx.s1.second, cx.usec1};
  if (node == mk.sec_minus1)
    return {cx.s1.first, cx.s1.second, f.neg(cx.usec1)};
  if (node == mk.sec_plus2) return {cx.s2.first, cx.s2.second, cx.usec2};
  if (node == mk.sec_minus2)
    return {cx.s2.first, cx.s2.second, f.neg(cx.usec2)};
  throw FibrationInvariant("negation nodes must be marked sections");
}

// Leading ambient displacement of the cover point (s, u) arriving at the
// marked node B (atC=false) or C (atC=true), homogeneous in the scaling of
// (s, u) so callers may pass unnormalized cover points on the node ruling.
template <class F>
std::array<typename F::Elt, 4> vs_cover_node_vec(
    const SurfaceModel& m, const F& f, const Fibration& fib,
    const VsCtx<F>& cx, bool atC,
    const std::pair<typename F::Elt, typename F::Elt>& s,
    const typename F::Elt& u) {
  const DoubleCoverMarks& mk = *fib.marks;
  const Node& vx = m.nodes[fib.vertex];
  const Node& tgt = m.nodes[atC ? mk.nodeC : mk.nodeB];
  const BinForm<F>& lN = atC ? cx.lC : cx.lB;
  const BinForm<F>& lOther = atC ? cx.lB : cx.lC;
  // transverse direction in the ruling parameter
  std::pair<typename F::Elt, typename F::Elt> delta =
      f.is_unit(s.second) ? std::pair<typename F::Elt, typename F::Elt>{f.one(), f.zero()}
                          : std::pair<typename F::Elt, typename F::Elt>{f.zero(), f.one()};
  auto lN_delta = bin_eval(f, lN, delta.first, delta.second);
  auto xr = f.div(
      f.mul(u, f.mul(lN_delta, bin_eval(f, lOther, s.first, s.second))),
      bin_eval(f, cx.P2, s.first, s.second));
  std::array<typename F::Elt, 4> disp;
  for (int i = 0; i < 4; ++i) disp[i] = f.mul(xr, f.from_int(vx.pos.x[i]));
  for (int k = 0; k < 3; ++k) {
    auto d = f.add(f.mul(delta.first, bin_eval(f, bin_dx(f, cx.par.fwd[k]),
                                               s.first, s.second)),
                   f.mul(delta.second, bin_eval(f, bin_dy(f, cx.par.fwd[k]),
                                                s.first, s.second)));
    disp[vx.chart[k]] = f.add(disp[vx.chart[k]], d);
  }
  std::array<typename F::Elt, 4> v;
  for (int i = 0; i < 4; ++i)
    v[i] = f.sub(disp[i], f.mul(disp[tgt.pivot], f.from_int(tgt.pos.x[i])));
  return v;
}

// Map a resolved point of a smooth fiber to the double cover.
WPt<FpField> vs_toW_fp(const SurfaceModel& m, const Fibration& fib,
                       const VsCtx<FpField>& cx, const ResolvedPoint& P) {
  const FpField& f = m.f;
  const DoubleCoverMarks& mk = *fib.marks;
  const Node& nd = m.nodes[fib.vertex];
  if (P.exceptional) {
    if (P.node == fib.vertex) {
      auto dv = nd.dir_vec(f, P.dir);
      Vec3<FpField> v3{dv[nd.chart[0]], dv[nd.chart[1]], dv[nd.chart[2]]};
      std::pair<i64, i64> s;
      try {
        s = cx.par.param_of(f, v3);
      } catch (const DegenerateConic&) {
        throw FibrationInvariant("vertex direction off the member cone");
      }
      if (!f.is_zero(bin_eval(f, cx.P2, s.first, s.second)))
        throw FibrationInvariant("vertex direction misses the branch locus");
      return {s.first, s.second, f.zero()};
    }
    if (P.node == mk.nodeB || P.node == mk.nodeC) {
      bool atC = P.node == mk.nodeC;
      const auto& sN = atC ? cx.sC : cx.sB;
      i64 qv = bin_eval(f, cx.q4, sN.first, sN.second);
      auto r = sqrt_mod(qv, f.p);
      if (!r)
        throw FibrationInvariant("cover value is not a square at the node");
      if (*r == 0) return {sN.first, sN.second, 0};
      for (i64 u : {*r, f.neg(*r)}) {
        auto v = vs_cover_node_vec(m, f, fib, cx, atC, sN, u);
        if (m.nodes[P.node].dir_param(f, v) == P.dir)
          return {sN.first, sN.second, u};
      }
      throw FibrationInvariant("node direction matches neither cover sheet");
    }
    if (P.node == mk.sec_plus1) return {cx.s1.first, cx.s1.second, cx.usec1};
    if (P.node == mk.sec_minus1)
      return {cx.s1.first, cx.s1.second, f.neg(cx.usec1)};
    if (P.node == mk.sec_plus2) return {cx.s2.first, cx.s2.second, cx.usec2};
    if (P.node == mk.sec_minus2)
      return {cx.s2.first, cx.s2.second, f.neg(cx.usec2)};
    throw FibrationInvariant("exceptional point is not carried by the cover");
  }
  i64 x0 = P.pt.x[nd.pivot];
  Vec3<FpField> v3;
  for (int k = 0; k < 3; ++k)
    v3[k] = f.sub(P.pt.x[nd.chart[k]], f.mul(x0, nd.pos.x[nd.chart[k]]));
  if (vec3_zero(f, v3))
    throw FibrationInvariant("fiber point at the cone vertex");
  std::pair<i64, i64> s;
  try {
    s = cx.par.param_of(f, v3);
  } catch (const DegenerateConic&) {
    throw FibrationInvariant("fiber point off the member cone");
  }
  auto c = cx.par.at(f, s.first, s.second);
  int ui = unit_index3(f, c);
  if (ui < 0) throw FibrationInvariant("degenerate ruling direction");
  i64 rho = f.div(v3[ui], c[ui]);
  i64 x0n = f.div(x0, rho);
  i64 den = f.mul(bin_eval(f, cx.lB, s.first, s.second),
                  bin_eval(f, cx.lC, s.first, s.second));
  if (f.is_zero(den))
    throw FibrationInvariant("smooth fiber point on a node ruling");
  i64 u = f.div(f.mul(x0n, bin_eval(f, cx.P2, s.first, s.second)), den);
  return {s.first, s.second, u};
}

// Map a cover point back to a resolved point of the fiber over t.
ResolvedPoint vs_fromW_fp(const SurfaceModel& m, const Fibration& fib,
                          const SpecialClassification& cls,
                          const VsCtx<FpField>& cx, const WPt<FpField>& Q,
                          const P1& t) {
  const FpField& f = m.f;
  const DoubleCoverMarks& mk = *fib.marks;
  auto sec_rp = [&](int node) {
    const CurveClass& cc = cls.node_curves[node];
    if (cc.role != CurveRole::Section)
      throw FibrationInvariant("marked node is not a section");
    return ResolvedPoint{true, m.nodes[node].pos, node,
                         mobius_inverse_apply(cc.mob, t, f.p)};
  };
  std::pair<i64, i64> qs{Q.sa, Q.sb};
  if (f.is_zero(pair_cross(f, qs, cx.s1))) {
    if (wpt_eq(f, Q, WPt<FpField>{cx.s1.first, cx.s1.second, cx.usec1}))
      return sec_rp(mk.sec_plus1);
    if (wpt_eq(f, Q, WPt<FpField>{cx.s1.first, cx.s1.second, f.neg(cx.usec1)}))
      return sec_rp(mk.sec_minus1);
    throw FibrationInvariant("cover point on ruling one misses its sections");
  }
  if (f.is_zero(pair_cross(f, qs, cx.s2))) {
    if (wpt_eq(f, Q, WPt<FpField>{cx.s2.first, cx.s2.second, cx.usec2}))
      return sec_rp(mk.sec_plus2);
    if (wpt_eq(f, Q, WPt<FpField>{cx.s2.first, cx.s2.second, f.neg(cx.usec2)}))
      return sec_rp(mk.sec_minus2);
    throw FibrationInvariant("cover point on ruling two misses its sections");
  }
  if (f.is_zero(bin_eval(f, cx.lB, Q.sa, Q.sb))) {
    auto v = vs_cover_node_vec(m, f, fib, cx, false, qs, Q.u);
    return ResolvedPoint{true, m.nodes[mk.nodeB].pos, mk.nodeB,
                         m.nodes[mk.nodeB].dir_param(f, v)};
  }
  if (f.is_zero(bin_eval(f, cx.lC, Q.sa, Q.sb))) {
    auto v = vs_cover_node_vec(m, f, fib, cx, true, qs, Q.u);
    return ResolvedPoint{true, m.nodes[mk.nodeC].pos, mk.nodeC,
                         m.nodes[mk.nodeC].dir_param(f, v)};
  }
  const Node& nd = m.nodes[fib.vertex];
  if (f.is_zero(bin_eval(f, cx.P2, Q.sa, Q.sb))) {
    if (!f.is_zero(Q.u))
      throw FibrationInvariant("vertex ruling with a nonzero cover value");
    auto c = cx.par.at(f, Q.sa, Q.sb);
    std::array<i64, 4> v{};
    for (int k = 0; k < 3; ++k) v[nd.chart[k]] = c[k];
    return ResolvedPoint{true, nd.pos, fib.vertex, nd.dir_param(f, v)};
  }
  i64 x0 = f.div(f.mul(Q.u, f.mul(bin_eval(f, cx.lB, Q.sa, Q.sb),
                                  bin_eval(f, cx.lC, Q.sa, Q.sb))),
                 bin_eval(f, cx.P2, Q.sa, Q.sb));
  auto c = cx.par.at(f, Q.sa, Q.sb);
  std::array<i64, 4> X;
  for (int i = 0; i < 4; ++i) X[i] = f.mul(x0, nd.pos.x[i]);
  for (int k = 0; k < 3; ++k) X[nd.chart[k]] = f.add(X[nd.chart[k]], c[k]);
  P3 q = p3_make(X, f.p);
  if (m.node_index(q) >= 0)
    throw FibrationInvariant("cover chart hit an unmarked node");
  if (!f.is_zero(m.k_eval(q.x)))
    throw FibrationInvariant("cover chart left the quartic");
  return ResolvedPoint{false, q, -1, {}};
}

// Cover coordinates of a germ (series arc) on a nearby smooth member.
WPt<SerField> vs_toW_germ(const SurfaceModel& m, const SerField& S,
                          const Fibration& fib, const VsCtx<SerField>& cx,
                          const std::array<LSer, 4>& X) {
  const Node& nd = m.nodes[fib.vertex];
  LSer x0 = X[nd.pivot];
  Vec3<SerField> v3;
  for (int k = 0; k < 3; ++k)
    v3[k] = S.sub(X[nd.chart[k]],
                  S.mul(x0, S.from_int(nd.pos.x[nd.chart[k]])));
  auto s = cx.par.param_of(S, v3);
  auto c = cx.par.at(S, s.first, s.second);
  int ui = unit_index3(S, c);
  if (ui < 0) throw PrecisionExhausted("invisible ruling direction");
  LSer rho = S.div(v3[ui], c[ui]);
  LSer x0n = S.div(x0, rho);
  LSer den = S.mul(bin_eval(S, cx.lB, s.first, s.second),
                   bin_eval(S, cx.lC, s.first, s.second));
  LSer u = S.div(S.mul(x0n, bin_eval(S, cx.P2, s.first, s.second)), den);
  return {s.first, s.second, u};
}

// Resolve the limit of a series cover point across a singular fiber.
ResolvedPoint vs_fromW_ser(const SurfaceModel& m, const SerField& S,
                           const Fibration& fib,
                           const SpecialClassification& cls,
                           const VsCtx<SerField>& cx, const WPt<SerField>& Q,
                           const P1& t, i64 prec) {
  const FpField& fp = m.f;
  const DoubleCoverMarks& mk = *fib.marks;
  auto sec_rp = [&](int node) {
    const CurveClass& cc = cls.node_curves[node];
    if (cc.role != CurveRole::Section)
      throw FibrationInvariant("marked node is not a section");
    return ResolvedPoint{true, m.nodes[node].pos, node,
                         mobius_inverse_apply(cc.mob, t, fp.p)};
  };
  std::pair<LSer, LSer> qs{Q.sa, Q.sb};
  if (S.is_zero(pair_cross(S, qs, cx.s1))) {
    if (wpt_eq(S, Q, WPt<SerField>{cx.s1.first, cx.s1.second, cx.usec1}))
      return sec_rp(mk.sec_plus1);
    if (wpt_eq(S, Q,
               WPt<SerField>{cx.s1.first, cx.s1.second, S.neg(cx.usec1)}))
      return sec_rp(mk.sec_minus1);
    throw FibrationInvariant("series cover point misses ruling-one sections");
  }
  if (S.is_zero(pair_cross(S, qs, cx.s2))) {
    if (wpt_eq(S, Q, WPt<SerField>{cx.s2.first, cx.s2.second, cx.usec2}))
      return sec_rp(mk.sec_plus2);
    if (wpt_eq(S, Q,
               WPt<SerField>{cx.s2.first, cx.s2.second, S.neg(cx.usec2)}))
      return sec_rp(mk.sec_minus2);
    throw FibrationInvariant("series cover point misses ruling-two sections");
  }
  if (S.is_zero(bin_eval(S, cx.lB, Q.sa, Q.sb))) {
    auto v = vs_cover_node_vec(m, S, fib, cx, false, qs, Q.u);
    auto lead = series_lead_vec(S, v);
    return ResolvedPoint{true, m.nodes[mk.nodeB].pos, mk.nodeB,
                         m.nodes[mk.nodeB].dir_param(fp, lead)};
  }
  if (S.is_zero(bin_eval(S, cx.lC, Q.sa, Q.sb))) {
    auto v = vs_cover_node_vec(m, S, fib, cx, true, qs, Q.u);
    auto lead = series_lead_vec(S, v);
    return ResolvedPoint{true, m.nodes[mk.nodeC].pos, mk.nodeC,
                         m.nodes[mk.nodeC].dir_param(fp, lead)};
  }
  const Node& nd = m.nodes[fib.vertex];
  if (S.is_zero(bin_eval(S, cx.P2, Q.sa, Q.sb))) {
    if (!S.is_zero(Q.u))
      throw FibrationInvariant("vertex ruling with a nonzero cover value");
    auto c = cx.par.at(S, Q.sa, Q.sb);
    std::array<LSer, 4> v;
    for (int i = 0; i < 4; ++i) v[i] = S.zero();
    for (int k = 0; k < 3; ++k) v[nd.chart[k]] = c[k];
    auto lead = series_lead_vec(S, v);
    return ResolvedPoint{true, nd.pos, fib.vertex, nd.dir_param(fp, lead)};
  }
  LSer x0 = S.div(S.mul(Q.u, S.mul(bin_eval(S, cx.lB, Q.sa, Q.sb),
                                   bin_eval(S, cx.lC, Q.sa, Q.sb))),
                  bin_eval(S, cx.P2, Q.sa, Q.sb));
  auto c = cx.par.at(S, Q.sa, Q.sb);
  std::array<LSer, 4> X;
  for (int i = 0; i < 4; ++i) X[i] = S.mul(x0, S.from_int(nd.pos.x[i]));
  for (int k = 0; k < 3; ++k) X[nd.chart[k]] = S.add(X[nd.chart[k]], c[k]);
  return resolve_germ(m, X, prec);
}

// Quartic of the double cover for the unmarked quadric-cone pencils,
// obtained by projecting the member cone from its vertex.  The fixed lines
// through the vertex supply the ruling parameters to strip.
BinForm<FpField> cb_q4(const SurfaceModel& m, const Fibration& fib,
                       const P1& t) {
  const FpField& f = m.f;
  const Node& nd = m.nodes[fib.vertex];
  auto T1 = expand_at_node(f, fib.q1, nd.pos.x, nd.pivot, nd.chart);
  auto T2 = expand_at_node(f, fib.q2, nd.pos.x, nd.pivot, nd.chart);
  auto TK = expand_at_node(f, m.K, nd.pos.x, nd.pivot, nd.chart);
  if (!ter_zero_p(f, T1[1]) || !ter_zero_p(f, T2[1]) ||
      !f.is_zero(T1[2].c[0]) || !f.is_zero(T2[2].c[0]))
    throw FibrationInvariant("pencil members are not cones at the vertex");
  if (!ter_zero_p(f, TK[3]) || !f.is_zero(TK[4].c[0]))
    throw FibrationInvariant("vertex is not a node of the surface");
  auto C2 = ter_comb(f, f.from_int(t.b), T1[0], f.neg(f.from_int(t.a)), T2[0]);
  auto conic = conic_from_ter(f, C2);
  auto base = line_dir_chart(m, fib.fixed_lines[0], fib.vertex);
  auto par = conic_param(f, conic, base);  // DegenerateConic => singular
  std::vector<std::pair<i64, i64>> sig;
  for (int lid : fib.fixed_lines)
    sig.push_back(par.param_of(f, line_dir_chart(m, lid, fib.vertex)));
  auto cmp = [&](int k) {
    return ter_compose(f, TK[k], par.fwd[0], par.fwd[1], par.fwd[2]);
  };
  auto A4 = cmp(2);
  auto C6 = cmp(1);
  auto B8 = cmp(0);
  for (const auto& s : sig) {
    BinForm<FpField> q;
    if (!bin_divide_linear(f, A4, s.first, s.second, q))
      throw FibrationInvariant("fixed ruling does not divide the cone trace");
    A4 = q;
    if (!bin_divide_linear(f, C6, s.first, s.second, q))
      throw FibrationInvariant("fixed ruling does not divide the odd trace");
    C6 = q;
    if (!bin_divide_linear(f, B8, s.first, s.second, q))
      throw FibrationInvariant("fixed ruling does not divide the base trace");
    B8 = q;
  }
  if (A4.degree() != 0)
    throw FibrationInvariant("unexpected residual cone trace degree");
  i64 alpha = A4.c[0];
  if (f.is_zero(alpha))
    throw DegenerateConic("member cone touches the surface cone");
  return bin_add(f, bin_mul(f, C6, C6),
                 bin_scale(f, B8, f.mul(f.from_int(-4), alpha)));
}

// ---------------------------------------------------------------------------
// Chord engine for the plane pencil with a fixed base line: members are
// planes, the fiber is the residual cubic, and the group steps are chords.
// ---------------------------------------------------------------------------

template <class F>
struct ChordCtx {
  std::array<std::array<typename F::Elt, 4>, 3> bas;  // rows span the plane
  TerForm<F> cubic;                                   // fiber in plane coords

  std::array<typename F::Elt, 3> toPlane(
      const F& f, const std::array<typename F::Elt, 4>& X) const {
    std::vector<std::vector<typename F::Elt>> rows(
        4, std::vector<typename F::Elt>(3));
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 3; ++c) rows[r][c] = bas[c][r];
    std::vector<typename F::Elt> sol;
    if (!solve_linear(f, rows, {X[0], X[1], X[2], X[3]}, sol))
      throw Genus1Degenerate("point misses the member plane");
    return {sol[0], sol[1], sol[2]};
  }

  // third intersection of the line through A and B (tangent when A == B)
  std::array<typename F::Elt, 3> chord(
      const F& f, const std::array<typename F::Elt, 3>& A,
      const std::array<typename F::Elt, 3>& B) const {
    Vec3<F> a{A[0], A[1], A[2]}, b{B[0], B[1], B[2]};
    std::array<typename F::Elt, 3> dir;
    bool tangent = vec3_zero(f, cross3(f, a, b));
    if (tangent) {
      Vec3<F> gr{ter_eval(f, ter_d(f, cubic, 0), A[0], A[1], A[2]),
                 ter_eval(f, ter_d(f, cubic, 1), A[0], A[1], A[2]),
                 ter_eval(f, ter_d(f, cubic, 2), A[0], A[1], A[2])};
      if (vec3_zero(f, gr))
        throw Genus1Degenerate("tangent chord at a singular cubic point");
      int j = -1;
      for (int i = 0; i < 3; ++i)
        if (f.is_unit(gr[i])) {
          j = i;
          break;
        }
      if (j < 0) throw Genus1Degenerate("invisible cubic gradient");
      bool found = false;
      for (int i = 0; i < 3 && !found; ++i) {
        if (i == j) continue;
        Vec3<F> cand{f.zero(), f.zero(), f.zero()};
        cand[i] = f.one();
        cand[j] = f.neg(f.div(gr[i], gr[j]));
        if (!vec3_zero(f, cross3(f, cand, a))) {
          dir = {cand[0], cand[1], cand[2]};
          found = true;
        }
      }
      if (!found) throw Genus1Degenerate("tangent line is radial");
    } else {
      dir = B;
    }
    std::array<BinForm<F>, 3> span;
    for (int i = 0; i < 3; ++i) {
      span[i] = bin_zero(f, 1);
      span[i].c[1] = A[i];
      span[i].c[0] = dir[i];
    }
    auto r3 = ter_compose(f, cubic, span[0], span[1], span[2]);
    BinForm<F> q;
    if (!bin_divide_linear(f, r3, f.one(), f.zero(), q))
      throw Genus1Degenerate("chord misses the cubic at its first point");
    if (tangent) {
      BinForm<F> q2;
      if (!bin_divide_linear(f, q, f.one(), f.zero(), q2))
        throw Genus1Degenerate("tangent chord is not doubly tangent");
      q = q2;
    } else {
      BinForm<F> q2;
      if (!bin_divide_linear(f, q, f.zero(), f.one(), q2))
        throw Genus1Degenerate("chord misses the cubic at its second point");
      q = q2;
    }
    if (q.degree() != 1) throw Genus1Degenerate("chord of unexpected degree");
    auto ra = f.neg(q.c[0]);
    auto rb = q.c[1];
    if (f.is_zero(ra) && f.is_zero(rb))
      throw Genus1Degenerate("vanishing residual chord point");
    std::array<typename F::Elt, 3> out;
    for (int i = 0; i < 3; ++i)
      out[i] = f.add(f.mul(ra, A[i]), f.mul(rb, dir[i]));
    return out;
  }
};

template <class F>
ChordCtx<F> make_chord_ctx(const SurfaceModel& m, const F& f,
                           const Fibration& fib, const typename F::Elt& ta,
                           const typename F::Elt& tb) {
  auto cov1 = form4_linear_cov(m.f, fib.q1);
  auto cov2 = form4_linear_cov(m.f, fib.q2);
  std::array<typename F::Elt, 4> ell;
  for (int i = 0; i < 4; ++i)
    ell[i] = f.sub(f.mul(tb, f.from_int(cov1[i])),
                   f.mul(ta, f.from_int(cov2[i])));
  ChordCtx<F> cx;
  const LineP3& L = m.lines[fib.fixed_lines[0]];
  for (int i = 0; i < 4; ++i) {
    cx.bas[0][i] = f.from_int(L.u.x[i]);
    cx.bas[1][i] = f.from_int(L.v.x[i]);
  }
  int j = -1;
  for (int i = 0; i < 4; ++i)
    if (f.is_unit(ell[i])) {
      j = i;
      break;
    }
  if (j < 0) throw Degenerate("pencil member plane is degenerate");
  bool found = false;
  for (int i = 0; i < 4 && !found; ++i) {
    if (i == j) continue;
    std::array<typename F::Elt, 4> cand;
    for (int k = 0; k < 4; ++k) cand[k] = f.zero();
    cand[i] = f.one();
    cand[j] = f.neg(f.div(ell[i], ell[j]));
    if (has_unit_minor3(f, cx.bas[0], cx.bas[1], cand)) {
      cx.bas[2] = cand;
      found = true;
    }
  }
  if (!found) throw Degenerate("no transversal in the member plane");
  auto T = form4_compose_ter(f, form4_cast(f, m.K), linear_subs(f, cx.bas));
  cx.cubic = ter_zero(f, 3);
  for (int i = 0; i <= 4; ++i)
    for (int jj = 0; i + jj <= 4; ++jj) {
      const auto& co = T.c[T.idx(i, jj)];
      if (i + jj == 4) {
        if (!f.is_zero(co))
          throw FibrationInvariant("base line escapes the member");
      } else {
        cx.cubic.c[cx.cubic.idx(i, jj)] = co;
      }
    }
  return cx;
}

// ---------------------------------------------------------------------------
// Exact singular-member tests for the plane pencils.
// ---------------------------------------------------------------------------

bool rho_plane_singular(const SurfaceModel& m, const Fibration& fib,
                        const P1& t) {
  const FpField& f = m.f;
  auto cx = make_chord_ctx(m, f, fib, t.a, t.b);
  auto w0 = cx.toPlane(f, m.nodes[0].pos.x);
  if (!f.is_zero(w0[2]))
    throw FibrationInvariant("node zero left the base line");
  std::array<Vec3<FpField>, 3> nb;
  if (!f.is_zero(w0[0])) {
    nb[0] = {0, 1, 0};
    nb[1] = {0, 0, 1};
  } else {
    nb[0] = {1, 0, 0};
    nb[1] = {0, 0, 1};
  }
  nb[2] = {w0[0], w0[1], w0[2]};
  auto C3w = ter_subst(f, cx.cubic, nb);
  if (!f.is_zero(C3w.c[C3w.idx(0, 0)]))
    throw FibrationInvariant("node zero escaped the fiber cubic");
  BinForm<FpField> c1 = bin_zero(f, 1), c2 = bin_zero(f, 2),
                   c3 = bin_zero(f, 3);
  for (int i = 0; i <= 1; ++i) c1.c[i] = C3w.c[C3w.idx(i, 1 - i)];
  for (int i = 0; i <= 2; ++i) c2.c[i] = C3w.c[C3w.idx(i, 2 - i)];
  for (int i = 0; i <= 3; ++i) c3.c[i] = C3w.c[C3w.idx(i, 3 - i)];
  if (bin_is_zero(f, c1)) return true;
  auto disc = bin_add(f, bin_mul(f, c2, c2),
                      bin_scale(f, bin_mul(f, c1, c3), f.from_int(-4)));
  return bin_repeated_divisor(f, disc);
}

bool ae_plane_singular(const SurfaceModel& m, const Fibration& fib,
                       const P1& t) {
  const FpField& f = m.f;
  auto cov1 = form4_linear_cov(f, fib.q1);
  auto cov2 = form4_linear_cov(f, fib.q2);
  std::array<i64, 4> ell;
  for (int i = 0; i < 4; ++i)
    ell[i] = f.sub(f.mul(t.b, cov1[i]), f.mul(t.a, cov2[i]));
  std::vector<std::vector<i64>> prow{{ell[0], ell[1], ell[2], ell[3]}};
  auto kb = kernel_basis(f, prow);
  if (kb.size() != 3) return true;
  std::vector<int> on;
  for (int n = 0; n < 12; ++n) {
    i64 s = 0;
    for (int i = 0; i < 4; ++i)
      s = f.add(s, f.mul(ell[i], m.nodes[n].pos.x[i]));
    if (f.is_zero(s)) on.push_back(n);
  }
  if (on.size() != 2) return true;
  const std::array<i64, 4>& pos0 = m.nodes[on[0]].pos.x;
  const std::array<i64, 4>& pos1 = m.nodes[on[1]].pos.x;
  auto coords_in = [&](const std::array<std::array<i64, 4>, 3>& rowsrc,
                       const std::array<i64, 4>& X) {
    std::vector<std::vector<i64>> rows(4, std::vector<i64>(3));
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 3; ++c) rows[r][c] = rowsrc[c][r];
    std::vector<i64> sol;
    if (!solve_linear(f, rows, {X[0], X[1], X[2], X[3]}, sol))
      throw FibrationInvariant("node missed its member plane");
    return sol;
  };
  std::array<std::array<i64, 4>, 3> kbr{};
  for (int i = 0; i < 3; ++i)
    for (int jj = 0; jj < 4; ++jj) kbr[i][jj] = kb[i][jj];
  auto w0 = coords_in(kbr, pos0);
  int k = 0;
  while (k < 3 && f.is_zero(w0[k])) ++k;
  if (k == 3) throw FibrationInvariant("degenerate node coordinates");
  std::array<std::array<i64, 4>, 3> nb{};
  int r = 0;
  for (int i = 0; i < 3; ++i) {
    if (i == k) continue;
    for (int jj = 0; jj < 4; ++jj) nb[r][jj] = kb[i][jj];
    ++r;
  }
  for (int jj = 0; jj < 4; ++jj) nb[2][jj] = pos0[jj];
  auto Q4w = form4_compose_ter(f, m.K, linear_subs(f, nb));
  if (!f.is_zero(Q4w.c[Q4w.idx(0, 0)]) || !f.is_zero(Q4w.c[Q4w.idx(1, 0)]) ||
      !f.is_zero(Q4w.c[Q4w.idx(0, 1)]))
    throw FibrationInvariant("node is not a double point of the section");
  BinForm<FpField> c2 = bin_zero(f, 2), c3 = bin_zero(f, 3),
                   c4 = bin_zero(f, 4);
  for (int i = 0; i <= 2; ++i) c2.c[i] = Q4w.c[Q4w.idx(i, 2 - i)];
  for (int i = 0; i <= 3; ++i) c3.c[i] = Q4w.c[Q4w.idx(i, 3 - i)];
  for (int i = 0; i <= 4; ++i) c4.c[i] = Q4w.c[Q4w.idx(i, 4 - i)];
  if (bin_is_zero(f, c2) || bin_repeated_divisor(f, c2)) return true;
  auto w1 = coords_in(nb, pos1);
  if (f.is_zero(w1[0]) && f.is_zero(w1[1]))
    throw FibrationInvariant("coincident nodes in the member plane");
  auto disc = bin_add(f, bin_mul(f, c3, c3),
                      bin_scale(f, bin_mul(f, c2, c4), f.from_int(-4)));
  BinForm<FpField> q;
  if (!bin_divide_linear(f, disc, w1[0], w1[1], q)) return true;
  disc = q;
  if (!bin_divide_linear(f, disc, w1[0], w1[1], q)) return true;
  if (f.is_zero(bin_eval(f, q, w1[0], w1[1]))) return true;
  return bin_repeated_divisor(f, q);
}

}  // namespace

bool is_singular_fiber(const SurfaceModel& m, const Fibration& fib,
                       const SpecialClassification& cls, const P1& t) {
  const FpField& f = m.f;
  auto flagged = [&](const CurveClass& cc) {
    return (cc.role == CurveRole::Fibral ||
            (cc.role == CurveRole::BaseComponent && cc.degree == 0)) &&
           cc.value == t;
  };
  for (const auto& cc : cls.node_curves)
    if (flagged(cc)) return true;
  for (const auto& cc : cls.lines)
    if (flagged(cc)) return true;
  switch (fib.shape) {
    case MemberShape::Plane:
      return fib.fixed_lines.empty() ? ae_plane_singular(m, fib, t)
                                     : rho_plane_singular(m, fib, t);
    case MemberShape::NodalQuadric:
      try {
        BinForm<FpField> q4 =
            fib.marks ? make_vs_ctx(m, f, fib, t.a, t.b).q4 : cb_q4(m, fib, t);
        return bin_repeated_divisor(f, q4);
      } catch (const DegenerateConic&) {
        return true;
      }
    default:
      return false;  // metadata shapes: reducible fibers are flagged above
  }
}

FiberTable fiber_partition(const SurfaceModel& m, const Fibration& fib,
                           const SpecialClassification& cls,
                           const PointTable& table) {
  FiberTable ft;
  for (i64 i = 0; i <= m.p; ++i) ft.values.push_back(p1_at(i, m.p));
  ft.members.resize(ft.values.size());
  ft.value_of.resize(table.pts.size());
  for (size_t idx = 0; idx < table.pts.size(); ++idx) {
    P1 t = fibration_value(m, fib, cls, table.pts[idx]);
    i64 vi = p1_index(t);
    ft.value_of[idx] = (int)vi;
    ft.members[vi].push_back((int)idx);
  }
  ft.singular.resize(ft.values.size());
  ft.orders.resize(ft.values.size());
  for (size_t vi = 0; vi < ft.values.size(); ++vi) {
    ft.singular[vi] = is_singular_fiber(m, fib, cls, ft.values[vi]);
    ft.orders[vi] = (i64)ft.members[vi].size();
  }
  return ft;
}

FiberPlan make_fiber_plan(const SurfaceModel& m, const Fibration& fib,
                          const PointTable& table) {
  FiberPlan pl;
  pl.cls = classify_special_curves(m, fib);
  pl.table = fiber_partition(m, fib, pl.cls, table);
  return pl;
}

i64 lcm_fiber_orders(const SurfaceModel& m, const FiberTable& ft) {
  (void)m;
  i64 l = 1;
  for (size_t vi = 0; vi < ft.values.size(); ++vi)
    if (!ft.singular[vi] && ft.orders[vi] > 0)
      l = std::lcm(l, ft.orders[vi]);
  return l;
}

ResolvedPoint section_point(const SurfaceModel& m, const Fibration& fib,
                            const SpecialClassification& cls,
                            const SectionRef& ref, const P1& t) {
  (void)fib;
  const FpField& f = m.f;
  if (!ref.is_line) {
    const CurveClass& cc = cls.node_curves[ref.id];
    if (cc.role != CurveRole::Section)
      throw FibrationInvariant("referenced node curve is not a section");
    return ResolvedPoint{true, m.nodes[ref.id].pos, ref.id,
                         mobius_inverse_apply(cc.mob, t, f.p)};
  }
  const CurveClass& cc = cls.lines[ref.id];
  if (cc.role != CurveRole::Section)
    throw FibrationInvariant("referenced line is not a section");
  P1 u = mobius_inverse_apply(cc.mob, t, f.p);
  const LineP3& L = m.lines[ref.id];
  std::array<i64, 4> X;
  for (int j = 0; j < 4; ++j)
    X[j] = f.add(f.mul(u.a, L.u.x[j]), f.mul(u.b, L.v.x[j]));
  P3 q = p3_make(X, f.p);
  int n = m.node_index(q);
  if (n < 0) return ResolvedPoint{false, q, -1, {}};
  P1 u2 = p1_at(0, f.p) == u ? p1_at(1, f.p) : p1_at(0, f.p);
  std::array<i64, 4> A;
  for (int j = 0; j < 4; ++j)
    A[j] = f.add(f.mul(u2.a, L.u.x[j]), f.mul(u2.b, L.v.x[j]));
  const Node& nd = m.nodes[n];
  std::array<i64, 4> d;
  for (int j = 0; j < 4; ++j)
    d[j] = f.sub(A[j], f.mul(A[nd.pivot], nd.pos.x[j]));
  return ResolvedPoint{true, nd.pos, n, nd.dir_param(f, d)};
}

// ---------------------------------------------------------------------------
// Plane-section residual arithmetic on the quadric-cone pencils.
// ---------------------------------------------------------------------------

namespace {

Plane plane_from_points(const FpField& f,
                        const std::array<const ResolvedPoint*, 3>& pts) {
  std::vector<std::vector<i64>> rows;
  for (const ResolvedPoint* rp : pts)
    rows.push_back({rp->pt.x[0], rp->pt.x[1], rp->pt.x[2], rp->pt.x[3]});
  auto kb = kernel_basis(f, rows);
  if (kb.size() != 1)
    throw Degenerate("plane through the divisor is not unique");
  return Plane{{kb[0][0], kb[0][1], kb[0][2], kb[0][3]}};
}

}  // namespace

ResolvedPoint plane_residual(const SurfaceModel& m, const Fibration& fib,
                             const SpecialClassification& cls, const P1& t,
                             const Plane& plane,
                             const std::vector<ResolvedPoint>& known) {
  const FpField& f = m.f;
  if (fib.shape != MemberShape::NodalQuadric || fib.marks)
    throw FibrationInvariant("plane residuals need an unmarked cone pencil");
  if (f.is_zero(plane_eval(plane, m.nodes[fib.vertex].pos.x, f.p)))
    throw DegenerateConfiguration("section plane passes through the vertex");

  std::vector<std::vector<i64>> prow(
      1, {plane.a[0], plane.a[1], plane.a[2], plane.a[3]});
  auto kb = kernel_basis(f, prow);
  if (kb.size() != 3)
    throw DegenerateConfiguration("degenerate section plane");
  std::array<std::array<i64, 4>, 3> bas{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 4; ++j) bas[i][j] = kb[i][j];

  auto coords = [&](const std::array<i64, 4>& X) {
    std::vector<std::vector<i64>> rows(4, std::vector<i64>(3));
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 3; ++c) rows[r][c] = bas[c][r];
    std::vector<i64> sol;
    if (!solve_linear(f, rows, {X[0], X[1], X[2], X[3]}, sol))
      throw DegenerateConfiguration("divisor point misses the section plane");
    return Vec3<FpField>{sol[0], sol[1], sol[2]};
  };

  auto Vt = pencil_form(f, fib.q1, fib.q2, t);
  auto conic2 = form4_compose_ter(f, Vt, linear_subs(f, bas));

  // crossing points of the plane with the fixed lines of the pencil
  std::vector<std::array<i64, 4>> crossings;
  for (int lid : fib.fixed_lines) {
    const LineP3& L = m.lines[lid];
    i64 r1 = 0, r2 = 0;
    for (int i = 0; i < 4; ++i) {
      r1 = f.add(r1, f.mul(plane.a[i], L.u.x[i]));
      r2 = f.add(r2, f.mul(plane.a[i], L.v.x[i]));
    }
    if (r1 == 0 && r2 == 0)
      throw DegenerateConfiguration("section plane contains a fixed line");
    std::array<i64, 4> X;
    for (int i = 0; i < 4; ++i)
      X[i] = f.sub(f.mul(r2, L.u.x[i]), f.mul(r1, L.v.x[i]));
    crossings.push_back(X);
  }

  ConicParam<FpField> par;
  try {
    par = conic_param(f, conic_from_ter(f, conic2), coords(crossings.at(0)));
  } catch (const DegenerateConic&) {
    throw DegenerateConfiguration("plane section of the member degenerates");
  }
  auto param_at = [&](const std::array<i64, 4>& X) {
    try {
      return par.param_of(f, coords(X));
    } catch (const DegenerateConic&) {
      throw DegenerateConfiguration("divisor point left the plane conic");
    }
  };

  std::array<BinForm<FpField>, 4> amb;
  for (int j = 0; j < 4; ++j) {
    amb[j] = bin_zero(f, 2);
    for (int i = 0; i < 3; ++i)
      amb[j] = bin_add(f, amb[j], bin_scale(f, par.fwd[i], bas[i][j]));
  }
  auto B8 = form4_compose_bin(f, m.K, amb);

  auto divide1 = [&](const std::pair<i64, i64>& s) {
    BinForm<FpField> q;
    if (!bin_divide_linear(f, B8, s.first, s.second, q))
      throw DegenerateConfiguration("expected divisor root is missing");
    B8 = q;
  };
  for (const auto& X : crossings) divide1(param_at(X));
  for (const auto& rp : known) divide1(param_at(rp.pt.x));
  if (B8.degree() != 1)
    throw FibrationInvariant("plane residual of unexpected degree");
  i64 ra = f.neg(B8.c[0]), rb = B8.c[1];
  if (ra == 0 && rb == 0)
    throw DegenerateConfiguration("vanishing residual root");
  std::array<i64, 4> X;
  bool nz = false;
  for (int j = 0; j < 4; ++j) {
    X[j] = bin_eval(f, amb[j], ra, rb);
    if (X[j] != 0) nz = true;
  }
  if (!nz) throw DegenerateConfiguration("residual point degenerates");
  P3 q = p3_make(X, f.p);
  int n = m.node_index(q);
  if (n >= 0) {
    const CurveClass& cc = cls.node_curves[n];
    if (cc.role != CurveRole::Section)
      throw FibrationInvariant("residual landed on a non-section node");
    return ResolvedPoint{true, m.nodes[n].pos, n,
                         mobius_inverse_apply(cc.mob, t, f.p)};
  }
  if (!f.is_zero(m.k_eval(q.x)))
    throw FibrationInvariant("residual point left the quartic");
  return ResolvedPoint{false, q, -1, {}};
}

// ---------------------------------------------------------------------------
// Smooth-fiber group steps.
// ---------------------------------------------------------------------------

namespace {

ResolvedPoint chord_translate_fp(const SurfaceModel& m, const Fibration& fib,
                                 const SpecialClassification& cls,
                                 const SectionRef& S, const SectionRef& Sp,
                                 const ResolvedPoint& P) {
  const FpField& f = m.f;
  P1 t = fibration_value(m, fib, cls, P);
  auto cx = make_chord_ctx(m, f, fib, t.a, t.b);
  auto S_pt = section_point(m, fib, cls, S, t);
  auto Sp_pt = section_point(m, fib, cls, Sp, t);
  auto Ph = cx.toPlane(f, P.pt.x);
  auto Sh = cx.toPlane(f, S_pt.pt.x);
  auto Sph = cx.toPlane(f, Sp_pt.pt.x);
  auto Rh = cx.chord(f, Ph, Sph);
  auto Qh = cx.chord(f, Rh, Sh);
  std::array<i64, 4> X{};
  for (int j = 0; j < 4; ++j)
    for (int i = 0; i < 3; ++i)
      X[j] = f.add(X[j], f.mul(Qh[i], cx.bas[i][j]));
  P3 q = p3_make(X, f.p);
  int n = m.node_index(q);
  ResolvedPoint out;
  if (n >= 0) {
    const CurveClass& cc = cls.node_curves[n];
    if (cc.role != CurveRole::Section)
      throw FibrationInvariant("chord landed on a non-section node");
    out = ResolvedPoint{true, m.nodes[n].pos, n,
                        mobius_inverse_apply(cc.mob, t, f.p)};
  } else {
    if (!f.is_zero(m.k_eval(q.x)))
      throw FibrationInvariant("chord point left the quartic");
    out = ResolvedPoint{false, q, -1, {}};
  }
  if (!(fibration_value(m, fib, cls, out) == t))
    throw FibrationInvariant("chord translation left the fiber");
  return out;
}

ResolvedPoint plane_translate(const SurfaceModel& m, const Fibration& fib,
                              const SpecialClassification& cls,
                              const SectionRef& S, const SectionRef& Sp,
                              const ResolvedPoint& P, const PointTable& table,
                              const std::vector<int>& fiber_members,
                              int aux_salt, bool allow_hop) {
  const FpField& f = m.f;
  P1 t = fibration_value(m, fib, cls, P);
  auto S_pt = section_point(m, fib, cls, S, t);
  auto Sp_pt = section_point(m, fib, cls, Sp, t);
  if (S_pt == Sp_pt) return P;

  std::vector<const ResolvedPoint*> elig;
  for (int idx : fiber_members) {
    const ResolvedPoint& c = table.pts[idx];
    if (c == P || c == S_pt || c == Sp_pt) continue;
    elig.push_back(&c);
  }
  size_t start = aux_salt > 0 ? (size_t)aux_salt - 1 : 0;
  for (size_t i = start; i < elig.size(); ++i) {
    const ResolvedPoint& A = *elig[i];
    try {
      Plane pl1 = plane_from_points(f, {&P, &Sp_pt, &A});
      auto R1 = plane_residual(m, fib, cls, t, pl1, {P, Sp_pt, A});
      Plane pl2 = plane_from_points(f, {&R1, &S_pt, &A});
      auto Q = plane_residual(m, fib, cls, t, pl2, {R1, S_pt, A});
      if (!(fibration_value(m, fib, cls, Q) == t))
        throw DegenerateConfiguration("translation left the fiber");
      return Q;
    } catch (const DegenerateConfiguration&) {
    } catch (const Degenerate&) {
    } catch (const DegenerateConic&) {
    } catch (const Genus1Degenerate&) {
    }
  }
  if (allow_hop) {
    for (int mid = 0; mid < 12; ++mid) {
      if (cls.node_curves[mid].role != CurveRole::Section) continue;
      if (!S.is_line && S.id == mid) continue;
      if (!Sp.is_line && Sp.id == mid) continue;
      SectionRef M{false, mid};
      try {
        auto Q1 = plane_translate(m, fib, cls, S, M, P, table, fiber_members,
                                  0, false);
        return plane_translate(m, fib, cls, M, Sp, Q1, table, fiber_members,
                               0, false);
      } catch (const DegenerateConfiguration&) {
      } catch (const Degenerate&) {
      } catch (const DegenerateConic&) {
      } catch (const Genus1Degenerate&) {
      }
    }
  }
  throw DegenerateConfiguration("plane translation exhausted its auxiliaries");
}

}  // namespace

ResolvedPoint negate_on_fiber(const SurfaceModel& m, const Fibration& fib,
                              const SpecialClassification& cls, int nodeN,
                              int nodeNp, const ResolvedPoint& P,
                              const PointTable& table,
                              const std::vector<int>& fiber_members,
                              int aux_salt) {
  const FpField& f = m.f;
  if (!fib.marks)
    throw FibrationInvariant("negation requires a marked double cover");
  P1 t = fibration_value(m, fib, cls, P);
  auto cx = make_vs_ctx(m, f, fib, t.a, t.b);
  auto Pw = vs_toW_fp(m, fib, cx, P);
  auto Nw = marked_section_wpt(f, *fib.marks, cx, nodeN);
  auto Npw = marked_section_wpt(f, *fib.marks, cx, nodeNp);

  std::vector<WPt<FpField>> elig;
  for (int idx : fiber_members) {
    auto W = vs_toW_fp(m, fib, cx, table.pts[idx]);
    if (wpt_eq(f, W, Pw) || wpt_eq(f, W, Nw) || wpt_eq(f, W, Npw)) continue;
    elig.push_back(W);
  }

  std::optional<WPt<FpField>> Q;
  if (aux_salt <= 0) {
    try {
      auto R1 = residual_point(f, cx.q4, merge_divisor(f, {Nw, Npw, Pw}));
      Q = residual_point(f, cx.q4, merge_divisor(f, {R1, Pw, Pw}));
    } catch (const Genus1Degenerate&) {
    }
  }
  size_t start = aux_salt > 0 ? (size_t)aux_salt - 1 : 0;
  for (size_t i = start; !Q && i < elig.size(); ++i) {
    try {
      auto R1 = residual_point(f, cx.q4, merge_divisor(f, {Nw, Npw, elig[i]}));
      Q = residual_point(f, cx.q4, merge_divisor(f, {R1, elig[i], Pw}));
    } catch (const Genus1Degenerate&) {
    }
  }
  if (!Q)
    throw DegenerateConfiguration("negation exhausted its auxiliaries");
  auto out = vs_fromW_fp(m, fib, cls, cx, *Q, t);
  if (!(fibration_value(m, fib, cls, out) == t))
    throw FibrationInvariant("negation left the fiber");
  return out;
}

ResolvedPoint translate_on_fiber(const SurfaceModel& m, const Fibration& fib,
                                 const SpecialClassification& cls,
                                 const SectionRef& S, const SectionRef& Sp,
                                 const ResolvedPoint& P,
                                 const PointTable& table,
                                 const std::vector<int>& fiber_members,
                                 int aux_salt) {
  if (fib.shape == MemberShape::Plane) {
    if (!fib.fixed_lines.empty()) return chord_translate_fp(m, fib, cls, S, Sp, P);
    throw AmbientDegenerate("plane pencil without a base line has no chord law");
  }
  if (fib.shape == MemberShape::NodalQuadric && !fib.marks)
    return plane_translate(m, fib, cls, S, Sp, P, table, fiber_members,
                           aux_salt, true);
  throw FibrationInvariant("no translation rule for this pencil");
}

// ---------------------------------------------------------------------------
// Singular-fiber transport along transverse germs.
// ---------------------------------------------------------------------------

namespace {

struct GermPencil {
  Germ g;
  LSer Y1, Y2;  // member parameter along the germ, normalized to order zero
};

std::optional<GermPencil> germ_member_parameter(const SurfaceModel& m,
                                                const Fibration& fib,
                                                const ResolvedPoint& P,
                                                int variant, i64 prec,
                                                const P1& t) {
  Germ g = germ_at(m, P, variant, prec);
  SerField S(m.p, g.prec);
  LSer Y1 = form4_eval(S, form4_cast(S, fib.q1), g.x);
  LSer Y2 = form4_eval(S, form4_cast(S, fib.q2), g.x);
  bool v1 = !Y1.c.empty(), v2 = !Y2.c.empty();
  if (!v1 && !v2) return std::nullopt;
  i64 vstar = v1 && v2 ? std::min(Y1.val, Y2.val) : (v1 ? Y1.val : Y2.val);
  if ((!v1 && Y1.aprec <= vstar) || (!v2 && Y2.aprec <= vstar))
    return std::nullopt;
  if (!(p1_make(S.coeff(Y1, vstar), S.coeff(Y2, vstar), m.p) == t))
    return std::nullopt;
  LSer cross = S.sub(S.mul(Y1, S.from_int(t.b)), S.mul(Y2, S.from_int(t.a)));
  if (S.is_zero(cross)) return std::nullopt;  // cannot certify transversality
  auto shift = [&](LSer y) {
    y.aprec -= vstar;
    if (!y.c.empty()) y.val -= vstar;
    return y;
  };
  return GermPencil{std::move(g), shift(Y1), shift(Y2)};
}

ResolvedPoint vs_singular_negate(const SurfaceModel& m, const Fibration& fib,
                                 const SpecialClassification& cls, int nodeN,
                                 int nodeNp, const ResolvedPoint& P) {
  if (!fib.marks)
    throw FibrationInvariant("negation requires a marked double cover");
  const DoubleCoverMarks& mk = *fib.marks;
  P1 t = fibration_value(m, fib, cls, P);
  for (i64 prec : {(i64)8, (i64)32}) {
    for (int variant = 0; variant < 3; ++variant) {
      try {
        auto gp = germ_member_parameter(m, fib, P, variant, prec, t);
        if (!gp) continue;
        SerField S(m.p, gp->g.prec);
        auto cx = make_vs_ctx(m, S, fib, gp->Y1, gp->Y2);
        auto Pw = vs_toW_germ(m, S, fib, cx, gp->g.x);
        auto Nw = marked_section_wpt(S, mk, cx, nodeN);
        auto Npw = marked_section_wpt(S, mk, cx, nodeNp);
        std::optional<WPt<SerField>> Q;
        try {
          auto R1 =
              residual_point(S, cx.q4, merge_divisor(S, {Nw, Npw, Pw}));
          Q = residual_point(S, cx.q4, merge_divisor(S, {R1, Pw, Pw}));
        } catch (const Genus1Degenerate&) {
        }
        if (!Q) {
          for (int anode :
               {mk.sec_plus1, mk.sec_minus1, mk.sec_plus2, mk.sec_minus2}) {
            if (anode == nodeN || anode == nodeNp) continue;
            try {
              auto Aw = marked_section_wpt(S, mk, cx, anode);
              if (wpt_eq(S, Aw, Pw)) continue;
              auto R1 =
                  residual_point(S, cx.q4, merge_divisor(S, {Nw, Npw, Aw}));
              Q = residual_point(S, cx.q4, merge_divisor(S, {R1, Aw, Pw}));
              break;
            } catch (const Genus1Degenerate&) {
            }
          }
        }
        if (!Q) continue;
        auto out = vs_fromW_ser(m, S, fib, cls, cx, *Q, t, gp->g.prec);
        if (fibration_value(m, fib, cls, out) == t) return out;
      } catch (const PrecisionExhausted&) {
      } catch (const DegenerateConic&) {
      } catch (const Genus1Degenerate&) {
      } catch (const Degenerate&) {
      } catch (const Inconsistent&) {
      } catch (const OffSurface&) {
      } catch (const LiftFailure&) {
      } catch (const DegenerateConfiguration&) {
      } catch (const ZeroForm&) {
      }
    }
  }
  throw UnresolvedComponentMap(
      "negation limit undetermined along every germ");
}

ResolvedPoint chord_singular_translate(const SurfaceModel& m,
                                       const Fibration& fib,
                                       const SpecialClassification& cls,
                                       const SectionRef& Sref,
                                       const SectionRef& Spref,
                                       const ResolvedPoint& P) {
  P1 t = fibration_value(m, fib, cls, P);
  for (i64 prec : {(i64)8, (i64)32}) {
    for (int variant = 0; variant < 3; ++variant) {
      try {
        auto gp = germ_member_parameter(m, fib, P, variant, prec, t);
        if (!gp) continue;
        SerField S(m.p, gp->g.prec);
        auto cx = make_chord_ctx(m, S, fib, gp->Y1, gp->Y2);
        auto secW = [&](const SectionRef& ref) {
          if (!ref.is_line) {
            const CurveClass& cc = cls.node_curves[ref.id];
            if (cc.role != CurveRole::Section)
              throw FibrationInvariant(
                  "referenced node curve is not a section");
            std::array<LSer, 4> X;
            for (int i = 0; i < 4; ++i)
              X[i] = S.from_int(m.nodes[ref.id].pos.x[i]);
            return cx.toPlane(S, X);
          }
          const CurveClass& cc = cls.lines[ref.id];
          if (cc.role != CurveRole::Section)
            throw FibrationInvariant("referenced line is not a section");
          const auto& mb = cc.mob.m;
          LSer ua = S.sub(S.mul(gp->Y1, S.from_int(mb[1][1])),
                          S.mul(gp->Y2, S.from_int(mb[1][0])));
          LSer ub = S.sub(S.mul(gp->Y2, S.from_int(mb[0][0])),
                          S.mul(gp->Y1, S.from_int(mb[0][1])));
          const LineP3& L = m.lines[ref.id];
          std::array<LSer, 4> X;
          for (int i = 0; i < 4; ++i)
            X[i] = S.add(S.mul(ua, S.from_int(L.u.x[i])),
                         S.mul(ub, S.from_int(L.v.x[i])));
          return cx.toPlane(S, X);
        };
        auto Sw = secW(Sref);
        auto Spw = secW(Spref);
        auto Pw = cx.toPlane(S, gp->g.x);
        auto Rw = cx.chord(S, Pw, Spw);
        auto Qw = cx.chord(S, Rw, Sw);
        std::array<LSer, 4> X;
        for (int j = 0; j < 4; ++j) {
          X[j] = S.zero();
          for (int i = 0; i < 3; ++i)
            X[j] = S.add(X[j], S.mul(Qw[i], cx.bas[i][j]));
        }
        auto out = resolve_germ(m, X, gp->g.prec);
        if (fibration_value(m, fib, cls, out) == t) return out;
      } catch (const PrecisionExhausted&) {
      } catch (const DegenerateConic&) {
      } catch (const Genus1Degenerate&) {
      } catch (const Degenerate&) {
      } catch (const Inconsistent&) {
      } catch (const OffSurface&) {
      } catch (const LiftFailure&) {
      } catch (const DegenerateConfiguration&) {
      } catch (const ZeroForm&) {
      }
    }
  }
  throw UnresolvedComponentMap(
      "translation limit undetermined along every germ");
}

}  // namespace

ResolvedPoint singular_fiber_action(const SurfaceModel& m,
                                    const Fibration& fib,
                                    const SpecialClassification& cls,
                                    const GroupStep& step,
                                    const ResolvedPoint& P) {
  if (fib.marks && step.kind == StepKind::Negate)
    return vs_singular_negate(m, fib, cls, step.nodeN, step.nodeNp, P);
  if (fib.shape == MemberShape::Plane && !fib.fixed_lines.empty() &&
      step.kind == StepKind::Translate)
    return chord_singular_translate(m, fib, cls, step.S, step.Sp, P);
  throw UnresolvedComponentMap("no transport rule for this fiber step");
}

ResolvedPoint apply_fiber_step(const SurfaceModel& m, const Fibration& fib,
                               const FiberPlan& plan, const PointTable& table,
                               const GroupStep& step, const ResolvedPoint& P) {
  P1 t = fibration_value(m, fib, plan.cls, P);
  i64 vi = p1_index(t);
  if (plan.table.singular[vi])
    return singular_fiber_action(m, fib, plan.cls, step, P);
  if (step.kind == StepKind::Negate)
    return negate_on_fiber(m, fib, plan.cls, step.nodeN, step.nodeNp, P,
                           table, plan.table.members[vi], 0);
  return translate_on_fiber(m, fib, plan.cls, step.S, step.Sp, P, table,
                            plan.table.members[vi], 0);
}

// ---------------------------------------------------------------------------
// Second quadric through a fiber, fitted from its points over small
// extension fields.
// ---------------------------------------------------------------------------

Form4<FpField> second_quadric(const SurfaceModel& m, const Fibration& fib,
                              const P1& t) {
  const FpField& fp = m.f;
  if (fib.shape != MemberShape::Plane &&
      fib.shape != MemberShape::NodalQuadric)
    throw AmbientDegenerate("pencil members cannot carry a second quadric");

  static const std::array<std::array<int, 4>, 10> kExps{{{2, 0, 0, 0},
                                                         {1, 1, 0, 0},
                                                         {1, 0, 1, 0},
                                                         {1, 0, 0, 1},
                                                         {0, 2, 0, 0},
                                                         {0, 1, 1, 0},
                                                         {0, 1, 0, 1},
                                                         {0, 0, 2, 0},
                                                         {0, 0, 1, 1},
                                                         {0, 0, 0, 2}}};
  auto vt = pencil_form(fp, fib.q1, fib.q2, t);
  std::array<i64, 10> vt10{};
  for (const auto& tm : vt.terms)
    for (int i = 0; i < 10; ++i)
      if ((int)tm.e[0] == kExps[i][0] && (int)tm.e[1] == kExps[i][1] &&
          (int)tm.e[2] == kExps[i][2] && (int)tm.e[3] == kExps[i][3])
        vt10[i] = tm.c;

  // member-plane data reused across levels for the plane shapes
  std::array<std::array<i64, 4>, 3> basI{};
  bool skip_base = false;
  if (fib.shape == MemberShape::Plane) {
    if (!fib.fixed_lines.empty()) {
      basI = make_chord_ctx(m, fp, fib, t.a, t.b).bas;
      skip_base = true;
    } else {
      auto cov1 = form4_linear_cov(fp, fib.q1);
      auto cov2 = form4_linear_cov(fp, fib.q2);
      std::vector<std::vector<i64>> prow(1, std::vector<i64>(4));
      for (int i = 0; i < 4; ++i)
        prow[0][i] = fp.sub(fp.mul(t.b, cov1[i]), fp.mul(t.a, cov2[i]));
      auto kb = kernel_basis(fp, prow);
      if (kb.size() != 3)
        throw AmbientDegenerate("member plane is degenerate");
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) basI[i][j] = kb[i][j];
    }
  }

  std::vector<std::vector<i64>> rows;
  for (int level : {1, 2, 4}) {
    FqField F(m.p, level);
    std::vector<std::array<FqField::Elt, 4>> pts;
    const i64 q = F.size();
    const size_t kMaxPts = 60;

    if (fib.shape == MemberShape::NodalQuadric) {
      const Node& nd = m.nodes[fib.vertex];
      std::array<FqField::Elt, 4> nuF;
      for (int i = 0; i < 4; ++i) nuF[i] = F.from_int(nd.pos.x[i]);
      auto T1 = expand_at_node(F, form4_cast(F, fib.q1), nuF, nd.pivot,
                               nd.chart);
      auto T2 = expand_at_node(F, form4_cast(F, fib.q2), nuF, nd.pivot,
                               nd.chart);
      auto TK = expand_at_node(F, form4_cast(F, m.K), nuF, nd.pivot,
                               nd.chart);
      auto C2 = ter_comb(F, F.from_int(t.b), T1[0], F.neg(F.from_int(t.a)),
                         T2[0]);
      Vec3<FpField> baseI =
          fib.marks ? Vec3<FpField>{fib.marks->b0[0], fib.marks->b0[1],
                                    fib.marks->b0[2]}
                    : line_dir_chart(m, fib.fixed_lines[0], fib.vertex);
      Vec3<FqField> baseF{F.from_int(baseI[0]), F.from_int(baseI[1]),
                          F.from_int(baseI[2])};
      auto par = conic_param(F, conic_from_ter(F, C2), baseF);
      std::vector<std::pair<FqField::Elt, FqField::Elt>> excl;
      for (int lid : fib.fixed_lines) {
        auto d = line_dir_chart(m, lid, fib.vertex);
        excl.push_back(par.param_of(
            F, {F.from_int(d[0]), F.from_int(d[1]), F.from_int(d[2])}));
      }
      for (i64 si = 0; si <= q && pts.size() < kMaxPts; ++si) {
        std::pair<FqField::Elt, FqField::Elt> s =
            si == 0 ? std::pair<FqField::Elt, FqField::Elt>{F.zero(), F.one()}
                    : std::pair<FqField::Elt, FqField::Elt>{F.one(),
                                                            F.elt(si - 1)};
        bool ex = false;
        for (const auto& e : excl)
          if (F.is_zero(pair_cross(F, s, e))) {
            ex = true;
            break;
          }
        if (ex) continue;
        auto c = par.at(F, s.first, s.second);
        auto t2 = ter_eval(F, TK[2], c[0], c[1], c[2]);
        auto t1v = ter_eval(F, TK[1], c[0], c[1], c[2]);
        auto t0v = ter_eval(F, TK[0], c[0], c[1], c[2]);
        for (i64 xi = 0; xi < q && pts.size() < kMaxPts; ++xi) {
          auto x0 = F.elt(xi);
          auto val = F.add(F.mul(F.add(F.mul(x0, t2), t1v), x0), t0v);
          if (!F.is_zero(val)) continue;
          std::array<FqField::Elt, 4> X;
          for (int j = 0; j < 4; ++j) X[j] = F.mul(x0, nuF[j]);
          for (int k = 0; k < 3; ++k)
            X[nd.chart[k]] = F.add(X[nd.chart[k]], c[k]);
          pts.push_back(X);
        }
      }
    } else {
      auto KF = form4_cast(F, m.K);
      std::array<std::array<FqField::Elt, 4>, 3> basF;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) basF[i][j] = F.from_int(basI[i][j]);
      i64 iters = 0;
      const i64 kIterCap = 400000;
      auto consider = [&](const FqField::Elt& w0, const FqField::Elt& w1,
                          const FqField::Elt& w2) {
        if (pts.size() >= kMaxPts) return;
        std::array<FqField::Elt, 4> X;
        for (int j = 0; j < 4; ++j)
          X[j] = F.add(F.add(F.mul(w0, basF[0][j]), F.mul(w1, basF[1][j])),
                       F.mul(w2, basF[2][j]));
        if (!F.is_zero(form4_eval(F, KF, X))) return;
        pts.push_back(X);
      };
      for (i64 a = 0; a < q && pts.size() < kMaxPts && iters < kIterCap; ++a)
        for (i64 b = 0; b < q && pts.size() < kMaxPts && iters < kIterCap;
             ++b) {
          ++iters;
          if (skip_base && b == 0) continue;
          consider(F.one(), F.elt(a), F.elt(b));
        }
      for (i64 b = 0; b < q && pts.size() < kMaxPts && iters < kIterCap;
           ++b) {
        ++iters;
        if (skip_base && b == 0) continue;
        consider(F.zero(), F.one(), F.elt(b));
      }
      if (!skip_base && pts.size() < kMaxPts)
        consider(F.zero(), F.zero(), F.one());
    }

    for (const auto& X : pts) {
      std::vector<std::vector<i64>> prow(level, std::vector<i64>(10));
      for (int im = 0; im < 10; ++im) {
        FqField::Elt mv = F.one();
        for (int var = 0; var < 4; ++var)
          for (int rep = 0; rep < kExps[im][var]; ++rep)
            mv = F.mul(mv, X[var]);
        for (int j = 0; j < level; ++j) prow[j][im] = mv[j];
      }
      for (auto& r : prow) rows.push_back(std::move(r));
    }

    auto kb = kernel_basis(fp, rows);
    if (kb.size() <= 1)
      throw AmbientDegenerate("fiber admits no second quadric");
    if (kb.size() == 2) {
      for (const auto& w : kb) {
        bool prop = true;
        for (int i = 0; i < 10 && prop; ++i)
          for (int j = i + 1; j < 10 && prop; ++j)
            if (fp.sub(fp.mul(w[i], vt10[j]), fp.mul(w[j], vt10[i])) != 0)
              prop = false;
        if (!prop) {
          std::vector<std::pair<std::array<int, 4>, i64>> bits;
          for (int i = 0; i < 10; ++i) bits.push_back({kExps[i], w[i]});
          return form4_build(fp, bits);
        }
      }
      throw AmbientDegenerate("second kernel vector matches the member");
    }
  }
  throw AmbientDegenerate("quadrics through the fiber stay ambiguous");
}

// ---------------------------------------------------------------------------
// Structural claims.
// ---------------------------------------------------------------------------

namespace {

std::optional<Mobius> fit_value_action(const SurfaceModel& m,
                                       const FiberTable& ft,
                                       const std::vector<int>& perm) {
  size_t n = std::min(perm.size(), ft.value_of.size());
  std::map<int, int> img;
  for (size_t idx = 0; idx < n; ++idx) {
    int a = ft.value_of[idx];
    int b = ft.value_of[(size_t)perm[idx]];
    auto it = img.find(a);
    if (it == img.end())
      img.emplace(a, b);
    else if (it->second != b)
      return std::nullopt;
  }
  if (img.size() < 3) return std::nullopt;
  std::vector<std::pair<P1, P1>> pairs;
  for (const auto& [a, b] : img)
    pairs.push_back({ft.values[a], ft.values[b]});
  try {
    return mobius_fit(pairs, m.p);
  } catch (const Degenerate&) {
    return std::nullopt;
  } catch (const Inconsistent&) {
    return std::nullopt;
  }
}

std::string p1_str(const P1& u) {
  std::ostringstream os;
  os << "(" << u.a << ":" << u.b << ")";
  return os.str();
}

std::string mobius_str(const Mobius& mb) {
  std::ostringstream os;
  os << "[[" << mb.m[0][0] << "," << mb.m[0][1] << "],[" << mb.m[1][0] << ","
     << mb.m[1][1] << "]]";
  return os.str();
}

// Exhaustive smoothness scan of the fibers flagged smooth, over the
// quadratic extension: no point of the residual curve may be a singular
// point of the member-surface intersection.
bool scan_smooth_fibers(const SurfaceModel& m, const Fibration& fib,
                        const FiberTable& ft) {
  const FpField& fp = m.f;
  FqField F(m.p, 2);
  const Node& nd = m.nodes[fib.vertex];
  std::array<FqField::Elt, 4> nuF;
  for (int i = 0; i < 4; ++i) nuF[i] = F.from_int(nd.pos.x[i]);
  auto KF = form4_cast(F, m.K);
  auto TK = expand_at_node(F, KF, nuF, nd.pivot, nd.chart);
  auto T1 = expand_at_node(F, form4_cast(F, fib.q1), nuF, nd.pivot, nd.chart);
  auto T2 = expand_at_node(F, form4_cast(F, fib.q2), nuF, nd.pivot, nd.chart);
  Vec3<FpField> baseI =
      fib.marks ? Vec3<FpField>{fib.marks->b0[0], fib.marks->b0[1],
                                fib.marks->b0[2]}
                : line_dir_chart(m, fib.fixed_lines[0], fib.vertex);
  Vec3<FqField> baseF{F.from_int(baseI[0]), F.from_int(baseI[1]),
                      F.from_int(baseI[2])};
  std::vector<Vec3<FqField>> excl_dirs;
  for (int lid : fib.fixed_lines) {
    auto d = line_dir_chart(m, lid, fib.vertex);
    excl_dirs.push_back({F.from_int(d[0]), F.from_int(d[1]), F.from_int(d[2])});
  }
  std::array<std::array<FqField::Elt, 4>, 12> nposF;
  for (int nn = 0; nn < 12; ++nn)
    for (int i = 0; i < 4; ++i) nposF[nn][i] = F.from_int(m.nodes[nn].pos.x[i]);
  const i64 q = F.size();
  for (size_t vi = 0; vi < ft.values.size(); ++vi) {
    if (ft.singular[vi]) continue;
    const P1& t = ft.values[vi];
    auto VtF = form4_cast(F, pencil_form(fp, fib.q1, fib.q2, t));
    auto C2 = ter_comb(F, F.from_int(t.b), T1[0], F.neg(F.from_int(t.a)),
                       T2[0]);
    std::vector<std::pair<FqField::Elt, FqField::Elt>> excl;
    std::optional<ConicParam<FqField>> par;
    try {
      par = conic_param(F, conic_from_ter(F, C2), baseF);
      for (const auto& d : excl_dirs) excl.push_back(par->param_of(F, d));
    } catch (const DegenerateConic&) {
      return false;  // flagged smooth, but the member cone degenerates
    }
    for (i64 si = 0; si <= q; ++si) {
      std::pair<FqField::Elt, FqField::Elt> s =
          si == 0 ? std::pair<FqField::Elt, FqField::Elt>{F.zero(), F.one()}
                  : std::pair<FqField::Elt, FqField::Elt>{F.one(),
                                                          F.elt(si - 1)};
      bool ex = false;
      for (const auto& e : excl)
        if (F.is_zero(pair_cross(F, s, e))) {
          ex = true;
          break;
        }
      if (ex) continue;
      auto c = par->at(F, s.first, s.second);
      auto t2 = ter_eval(F, TK[2], c[0], c[1], c[2]);
      auto t1v = ter_eval(F, TK[1], c[0], c[1], c[2]);
      auto t0v = ter_eval(F, TK[0], c[0], c[1], c[2]);
      for (i64 xi = 0; xi < q; ++xi) {
        auto x0 = F.elt(xi);
        auto val = F.add(F.mul(F.add(F.mul(x0, t2), t1v), x0), t0v);
        if (!F.is_zero(val)) continue;
        std::array<FqField::Elt, 4> X;
        for (int j = 0; j < 4; ++j) X[j] = F.mul(x0, nuF[j]);
        for (int k = 0; k < 3; ++k) X[nd.chart[k]] = F.add(X[nd.chart[k]], c[k]);
        bool isnode = false;
        for (int nn = 0; nn < 12 && !isnode; ++nn)
          if (proportional4_f(F, X, nposF[nn])) isnode = true;
        if (isnode) continue;
        auto gk = form4_grad(F, KF, X);
        auto gv = form4_grad(F, VtF, X);
        bool sing = true;
        for (int a = 0; a < 4 && sing; ++a)
          for (int b = a + 1; b < 4 && sing; ++b)
            if (!F.is_zero(F.sub(F.mul(gk[a], gv[b]), F.mul(gk[b], gv[a]))))
              sing = false;
        if (sing) return false;
      }
    }
  }
  return true;
}

// Count the points over the quadratic extension that lie on the surface and
// on the member over (0:1) but off the member over (1:0).
i64 reducibility_witness_count(const SurfaceModel& m, const Fibration& fib) {
  FqField F(m.p, 2);
  auto KF = form4_cast(F, m.K);
  auto q1F = form4_cast(F, fib.q1);
  auto q2F = form4_cast(F, fib.q2);
  const i64 q = F.size();
  i64 count = 0;
  auto consider = [&](const std::array<FqField::Elt, 4>& X) {
    if (!F.is_zero(form4_eval(F, KF, X))) return;
    if (!F.is_zero(form4_eval(F, q1F, X))) return;
    if (F.is_zero(form4_eval(F, q2F, X))) return;
    ++count;
  };
  for (i64 a = 0; a < q; ++a)
    for (i64 b = 0; b < q; ++b)
      for (i64 c = 0; c < q; ++c)
        consider({F.one(), F.elt(a), F.elt(b), F.elt(c)});
  for (i64 b = 0; b < q; ++b)
    for (i64 c = 0; c < q; ++c)
      consider({F.zero(), F.one(), F.elt(b), F.elt(c)});
  for (i64 c = 0; c < q; ++c)
    consider({F.zero(), F.zero(), F.one(), F.elt(c)});
  consider({F.zero(), F.zero(), F.zero(), F.one()});
  return count;
}

}  // namespace

ClaimReport verify_fibration_claims(
    const SurfaceModel& m, const Fibration& fib, const PointTable& table,
    const std::map<std::string, const std::vector<int>*>& word_perms) {
  const FpField& f = m.f;
  ClaimReport rep;
  rep.fibration = fib.name;
  auto cls = classify_special_curves(m, fib);
  auto ft = fiber_partition(m, fib, cls, table);
  auto add = [&](const std::string& s, bool ok) {
    rep.checks.emplace_back(s, ok);
  };
  auto note = [&](const std::string& s) { rep.notes.push_back(s); };
  auto v = [&](i64 a, i64 b) { return p1_make(a, b, m.p); };

  {
    size_t tot = 0;
    for (const auto& mv : ft.members) tot += mv.size();
    add("pencil-covers-surface", tot == table.pts.size());
  }
  if (fib.full_flags) {
    bool ok = true;
    for (size_t vi = 0; vi < ft.values.size(); ++vi) {
      if (ft.singular[vi]) continue;
      i64 d = ft.orders[vi] - (m.p + 1);
      if (d * d > 4 * m.p) ok = false;
    }
    add("smooth-class-hasse-bound", ok);
  }

  auto node_is = [&](int n, CurveRole r) {
    return cls.node_curves[n].role == r;
  };
  auto node_fibral_at = [&](int n, const P1& val) {
    return cls.node_curves[n].role == CurveRole::Fibral &&
           cls.node_curves[n].value == val;
  };
  auto line_fibral_at = [&](std::array<int, 3> tri, const P1& val) {
    const CurveClass& cc = cls.lines[find_line_id(m, tri)];
    return cc.role == CurveRole::Fibral && cc.value == val;
  };
  auto singular_values = [&]() {
    std::set<std::pair<i64, i64>> s;
    for (size_t vi = 0; vi < ft.values.size(); ++vi)
      if (ft.singular[vi]) s.insert({ft.values[vi].a, ft.values[vi].b});
    return s;
  };
  auto section_nodes = [&]() {
    std::set<int> s;
    for (int n = 0; n < 12; ++n)
      if (cls.node_curves[n].role == CurveRole::Section) s.insert(n);
    return s;
  };
  auto fibral_special_count = [&](const P1& val) {
    int c = 0;
    for (const auto& cc : cls.node_curves)
      if (cc.role == CurveRole::Fibral && cc.value == val) ++c;
    for (const auto& cc : cls.lines)
      if (cc.role == CurveRole::Fibral && cc.value == val) ++c;
    return c;
  };
  auto first_smooth_members = [&](size_t want) {
    std::vector<std::pair<size_t, int>> out;
    for (size_t vi = 0; vi < ft.values.size() && out.size() < want; ++vi) {
      if (ft.singular[vi]) continue;
      for (int idx : ft.members[vi]) {
        out.push_back({vi, idx});
        if (out.size() >= want) break;
      }
    }
    return out;
  };
  auto roundtrip = [&](const SectionRef& A, const SectionRef& B) {
    bool ok = true, any = false;
    try {
      for (const auto& [vi, idx] : first_smooth_members(3)) {
        any = true;
        const ResolvedPoint& P = table.pts[idx];
        auto Q =
            translate_on_fiber(m, fib, cls, A, B, P, table, ft.members[vi], 0);
        if (!(fibration_value(m, fib, cls, Q) == ft.values[vi])) ok = false;
        auto bk =
            translate_on_fiber(m, fib, cls, B, A, Q, table, ft.members[vi], 0);
        if (!(bk == P)) ok = false;
      }
    } catch (const std::exception&) {
      ok = false;
    }
    return ok && any;
  };
  auto marks_ok = [&]() {
    if (!fib.marks) return false;
    const auto& mk = *fib.marks;
    for (int n : {mk.sec_plus1, mk.sec_minus1, mk.sec_plus2, mk.sec_minus2})
      if (!node_is(n, CurveRole::Section)) return false;
    return node_is(fib.vertex, CurveRole::Multisection) &&
           node_is(mk.nodeB, CurveRole::Multisection) &&
           node_is(mk.nodeC, CurveRole::Multisection);
  };

  const i64 la = m.lambda;
  if (fib.name == "rho") {
    P1 v10 = v(1, 0), v01 = v(0, 1), v11 = v(1, 1);
    add("fibral-nodes", node_fibral_at(1, v10) && node_fibral_at(7, v10) &&
                            node_fibral_at(8, v10) && node_fibral_at(2, v01) &&
                            node_fibral_at(6, v01) && node_fibral_at(9, v01) &&
                            node_fibral_at(3, v11) && node_fibral_at(5, v11) &&
                            node_fibral_at(10, v11));
    add("fibral-lines",
        line_fibral_at({1, 7, 11}, v10) && line_fibral_at({0, 7, 8}, v10) &&
            line_fibral_at({1, 4, 8}, v10) && line_fibral_at({0, 6, 9}, v01) &&
            line_fibral_at({2, 9, 11}, v01) &&
            line_fibral_at({2, 4, 6}, v01) &&
            line_fibral_at({3, 10, 11}, v11) &&
            line_fibral_at({0, 5, 10}, v11) && line_fibral_at({3, 4, 5}, v11));
    add("section-nodes", section_nodes() == std::set<int>{0, 4, 11});
    {
      int nsec = 0;
      for (const auto& cc : cls.lines)
        if (cc.role == CurveRole::Section) ++nsec;
      add("section-lines",
          nsec == 6 &&
              cls.lines[find_line_id(m, {3, 8, 9})].role ==
                  CurveRole::Section);
    }
    if (m.p == 3) {
      bool all = true;
      for (size_t vi = 0; vi < ft.values.size(); ++vi)
        if (!ft.singular[vi]) all = false;
      add("all-fibers-singular-at-p3", all);
    } else {
      add("section-roundtrip",
          roundtrip(SectionRef{false, 0},
                    SectionRef{true, find_line_id(m, {3, 8, 9})}));
    }
  } else if (fib.name == "g") {
    P1 v10 = v(1, 0), v11 = v(1, 1), vm1 = v(f.sub(0, 1), 1);
    P1 w1 = v(f.sub(1, f.mul(2, la)), 1), w2 = v(f.sub(f.mul(2, la), 1), 1);
    {
      std::set<std::pair<i64, i64>> want;
      for (const P1& x : {v10, v11, vm1, w1, w2}) want.insert({x.a, x.b});
      add("singular-set", singular_values() == want);
    }
    add("fibral-count-at-1-0", fibral_special_count(v10) == 3);
    add("fibral-count-at-1-1", fibral_special_count(v11) == 7);
    add("fibral-count-at-minus-1", fibral_special_count(vm1) == 7);
    {
      std::multiset<std::pair<i64, i64>> got, want;
      bool roles = true;
      for (int lid : fib.fixed_lines) {
        const CurveClass& cc = cls.lines[lid];
        if (cc.role != CurveRole::BaseComponent || cc.degree != 0)
          roles = false;
        else
          got.insert({cc.value.a, cc.value.b});
      }
      want.insert({w1.a, w1.b});
      want.insert({w2.a, w2.b});
      add("fixed-line-values", roles && got == want);
    }
    add("marked-sections", marks_ok());
    if (m.p <= 13)
      add("smooth-fibers-scan-clean", scan_smooth_fibers(m, fib, ft));
  } else if (fib.name == "h" || fib.name == "i") {
    add("marked-sections", marks_ok());
  } else if (fib.name == "pi") {
    P1 v10 = v(1, 0), v01 = v(0, 1), v11 = v(1, 1), vlm = v(la, f.sub(la, 1));
    {
      std::set<std::pair<i64, i64>> want{{v10.a, v10.b},
                                         {v01.a, v01.b},
                                         {v11.a, v11.b},
                                         {vlm.a, vlm.b}};
      add("singular-set", singular_values() == want);
    }
    add("halffiber-at-1-0",
        node_fibral_at(7, v10) && line_fibral_at({0, 7, 8}, v10) &&
            line_fibral_at({3, 6, 7}, v10) &&
            line_fibral_at({1, 7, 11}, v10) && line_fibral_at({2, 5, 7}, v10));
    add("halffiber-at-0-1",
        node_fibral_at(9, v01) && line_fibral_at({0, 6, 9}, v01) &&
            line_fibral_at({3, 8, 9}, v01) && line_fibral_at({1, 5, 9}, v01) &&
            line_fibral_at({2, 9, 11}, v01));
    add("halffiber-at-1-1",
        node_fibral_at(10, v11) && line_fibral_at({0, 5, 10}, v11) &&
            line_fibral_at({3, 10, 11}, v11) &&
            line_fibral_at({1, 6, 10}, v11) &&
            line_fibral_at({2, 8, 10}, v11));
    add("fibral-node-at-lambda", node_fibral_at(4, vlm));
    add("section-nodes",
        section_nodes() == std::set<int>{0, 1, 2, 3, 5, 6, 8, 11});
    {
      bool ok = true;
      for (size_t vi = 0; vi < ft.values.size(); ++vi) {
        if (ft.singular[vi]) continue;
        int exc = 0;
        for (int idx : ft.members[vi])
          if (table.pts[idx].exceptional) ++exc;
        if (exc != 8) ok = false;
      }
      add("smooth-fiber-node-points", ok);
    }
    if (!first_smooth_members(1).empty()) {
      add("section-roundtrip",
          roundtrip(SectionRef{false, 0}, SectionRef{false, 11}));
      {
        bool ok = true;
        try {
          for (const auto& [vi, idx] : first_smooth_members(2)) {
            const ResolvedPoint& P = table.pts[idx];
            auto Q0 = translate_on_fiber(m, fib, cls, SectionRef{false, 0},
                                         SectionRef{false, 11}, P, table,
                                         ft.members[vi], 0);
            auto Q1 = translate_on_fiber(m, fib, cls, SectionRef{false, 0},
                                         SectionRef{false, 11}, P, table,
                                         ft.members[vi], 1);
            auto Q2 = translate_on_fiber(m, fib, cls, SectionRef{false, 0},
                                         SectionRef{false, 11}, P, table,
                                         ft.members[vi], 2);
            if (!(Q0 == Q1) || !(Q0 == Q2)) ok = false;
          }
        } catch (const std::exception&) {
          ok = false;
        }
        add("auxiliary-independence", ok);
      }
    }
    if (m.p <= 13)
      add("smooth-fibers-scan-clean", scan_smooth_fibers(m, fib, ft));
  } else if (fib.name == "vertical") {
    {
      int nsing = 0;
      for (size_t vi = 0; vi < ft.values.size(); ++vi)
        if (ft.singular[vi]) ++nsing;
      add("singular-count", nsing == 4);
    }
    add("fibral-nodes", node_fibral_at(4, v(1, 0)) &&
                            node_fibral_at(7, v(0, 1)) &&
                            node_fibral_at(9, v(1, 1)));
    add("double-section-node",
        cls.node_curves[10].role == CurveRole::Multisection &&
            cls.node_curves[10].degree == 2);
    add("section-count", (int)section_nodes().size() == 8);
    {
      std::multiset<i64> tw, so;
      for (i64 u = 0; u < m.p; ++u) {
        i64 g3 = f.mul(f.mul(u, f.sub(u, 1)), f.sub(u, la));
        if (g3 == 0) continue;
        tw.insert(m.p + 1 - legendre(g3, m.p) * m.a_p);
      }
      for (size_t vi = 0; vi < ft.values.size(); ++vi)
        if (!ft.singular[vi]) so.insert(ft.orders[vi]);
      add("twisted-orders", tw == so);
    }
  } else if (fib.name == "ae") {
    P1 v10 = v(1, 0), v01 = v(0, 1), v11 = v(1, 1), vm1 = v(f.sub(0, 1), 1);
    {
      std::set<std::pair<i64, i64>> want{{v10.a, v10.b},
                                         {v01.a, v01.b},
                                         {v11.a, v11.b},
                                         {vm1.a, vm1.b}};
      if (legendre(la, m.p) == 1) {
        i64 r = *sqrt_mod(la, m.p);
        i64 ri = f.inv(r);
        for (i64 x : {r, f.neg(r), ri, f.neg(ri)}) {
          P1 u = v(x, 1);
          want.insert({u.a, u.b});
        }
      }
      add("singular-set", singular_values() == want);
    }
    add("fibral-nodes", node_fibral_at(2, v10) && node_fibral_at(3, v01));
    add("double-section-nodes",
        cls.node_curves[0].role == CurveRole::Multisection &&
            cls.node_curves[0].degree == 2 &&
            cls.node_curves[1].role == CurveRole::Multisection &&
            cls.node_curves[1].degree == 2);
  } else if (fib.name == "dj") {
    add("section-nodes-6-11", node_is(6, CurveRole::Section) &&
                                  node_is(11, CurveRole::Section));
    i64 alpha = f.div(f.add(la, 1), f.sub(la, 1));
    i64 scal = f.sub(f.mul(alpha, alpha), 1);
    add("involution-scalar-unit", scal != 0);
    Mobius M;
    M.m[0][0] = alpha;
    M.m[0][1] = 1;
    M.m[1][0] = f.sub(0, 1);
    M.m[1][1] = f.neg(alpha);
    {
      std::vector<P1> fixed;
      for (const P1& u : ft.values)
        if (mobius_apply(M, u, m.p) == u) fixed.push_back(u);
      add("fixed-value-count",
          (int)fixed.size() == (legendre(la, m.p) == 1 ? 2 : 0));
      bool ord4 = true;
      for (const P1& u : fixed)
        if (ft.orders[p1_index(u)] % 4 != 0) ord4 = false;
      add("fixed-class-orders", ord4);
    }
    {
      std::vector<P1> flagged;
      for (size_t vi = 0; vi < ft.values.size(); ++vi)
        if (ft.singular[vi]) flagged.push_back(ft.values[vi]);
      bool ok = flagged.size() == 0 || flagged.size() == 2;
      for (const P1& u : flagged) {
        P1 im = mobius_apply(M, u, m.p);
        bool found = false;
        for (const P1& w : flagged)
          if (w == im) found = true;
        if (!found) ok = false;
      }
      add("flagged-values-swapped", ok);
    }
    if (auto it = word_perms.find("d"); it != word_perms.end()) {
      auto mb = fit_value_action(m, ft, *it->second);
      note(mb ? "base action of d: " + mobius_str(*mb)
              : "base action of d: unfitted");
    }
  } else if (fib.name == "j") {
    add("section-lines",
        cls.lines[find_line_id(m, {0, 7, 8})].role == CurveRole::Section &&
            cls.lines[find_line_id(m, {0, 5, 10})].role ==
                CurveRole::Section &&
            cls.lines[find_line_id(m, {1, 5, 9})].role ==
                CurveRole::Section &&
            cls.lines[find_line_id(m, {1, 4, 8})].role ==
                CurveRole::Section);
    if (auto it = word_perms.find("d"); it != word_perms.end()) {
      auto mb = fit_value_action(m, ft, *it->second);
      Mobius want;
      want.m[0][0] = 1;
      want.m[0][1] = 0;
      want.m[1][0] = 0;
      want.m[1][1] = m.p - 1;
      add("pencil-action-of-d", mb.has_value() && mobius_same(*mb, want, m.p));
    }
    if (m.p <= 13) {
      i64 c = reducibility_witness_count(m, fib);
      add("value-0-1-overfull", c > m.p * m.p + 1 + 2 * m.p);
      note("extension points of the member over (0:1): " + std::to_string(c));
    }
  } else if (fib.name == "k" || fib.name == "l") {
    {
      std::ostringstream os;
      os << "base components:";
      for (int n = 0; n < 12; ++n) {
        const CurveClass& cc = cls.node_curves[n];
        if (cc.role != CurveRole::BaseComponent) continue;
        os << " node" << n;
        if (cc.degree == 0)
          os << "@" << p1_str(cc.value);
        else
          os << "(moving)";
      }
      for (int l = 0; l < 16; ++l) {
        const CurveClass& cc = cls.lines[l];
        if (cc.role != CurveRole::BaseComponent) continue;
        os << " line" << l;
        if (cc.degree == 0)
          os << "@" << p1_str(cc.value);
        else
          os << "(moving)";
      }
      note(os.str());
    }
    const char* wname = fib.name == "k" ? "cd" : "c";
    if (auto it = word_perms.find(wname); it != word_perms.end()) {
      auto mb = fit_value_action(m, ft, *it->second);
      note(std::string("base action of ") + wname + ": " +
           (mb ? mobius_str(*mb) : "unfitted"));
    }
  } else if (fib.name == "abga") {
    bool has12 = false, has5 = false;
    std::ostringstream os;
    os << "special-curve multiplicity by value:";
    for (const P1& val : ft.values) {
      int c = fibral_special_count(val);
      if (c == 12) has12 = true;
      if (c == 5) has5 = true;
      if (c > 0) os << " " << p1_str(val) << "x" << c;
    }
    add("has-value-with-12-specials", has12);
    add("has-value-with-5-specials", has5);
    note(os.str());
  }

  return rep;
}

}  // namespace kummer
