#include "kummer/surface.hpp"

#include <algorithm>
#include <sstream>

namespace kummer {

namespace {

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

// the quartic: (L-1)x^2y^2 - L x^2z^2 + y^2z^2 + x^2w^2 - L y^2w^2
//              + (L-1) z^2w^2
Form4<FpField> quartic(const FpField& f, i64 L) {
  return form4_build<FpField>(
      f, {{{2, 2, 0, 0}, L - 1},
          {{2, 0, 2, 0}, -L},
          {{0, 2, 2, 0}, 1},
          {{2, 0, 0, 2}, 1},
          {{0, 2, 0, 2}, -L},
          {{0, 0, 2, 2}, L - 1}});
}

// canonical scan order of P^2(F_p): (0:0:1), (0:1:t), (1:s:t)
template <class Fn>
void scan_p2(i64 p, Fn&& fn) {
  if (fn(std::array<i64, 3>{0, 0, 1})) return;
  for (i64 t = 0; t < p; ++t)
    if (fn(std::array<i64, 3>{0, 1, t})) return;
  for (i64 s = 0; s < p; ++s)
    for (i64 t = 0; t < p; ++t)
      if (fn(std::array<i64, 3>{1, s, t})) return;
}

Node make_node(const SurfaceModel& m, const P3& pos) {
  Node n;
  n.pos = pos;
  n.pivot = p3_pivot(pos);
  int j = 0;
  for (int i = 0; i < 4; ++i)
    if (i != n.pivot) n.chart[j++] = i;

  const FpField& f = m.f;
  if (m.k_eval(pos.x) != 0 || m.k_grad(pos.x) != std::array<i64, 4>{0, 0, 0, 0})
    throw ModelCorrupt("listed node is not a singular surface point");

  // tangent cone: restricted Hessian / 2
  auto half = f.inv(f.from_int(2));
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      auto dd = form4_d(f, m.dK[n.chart[a]], n.chart[b]);
      n.cone.m[a][b] = f.mul(half, form4_eval(f, dd, pos.x));
    }
  if (f.is_zero(n.cone.det(f)))
    throw DegenerateCone("tangent cone has rank below three");

  // first rational point of the cone conic in canonical order
  bool found = false;
  Vec3<FpField> base{};
  scan_p2(f.p, [&](std::array<i64, 3> v) {
    if (f.is_zero(n.cone.q(f, {v[0], v[1], v[2]}))) {
      base = {v[0], v[1], v[2]};
      found = true;
      return true;
    }
    return false;
  });
  if (!found) throw DegenerateCone("tangent cone conic has no rational point");
  n.param = conic_param(f, n.cone, base);
  return n;
}

}  // namespace

i64 trace_of_frobenius(i64 p, i64 lambda) {
  i64 s = 0;
  for (i64 x = 0; x < p; ++x) {
    i64 v = mul_mod(mul_mod(x, mod_norm(x - 1, p), p),
                    mod_norm(x - lambda, p), p);
    s += legendre(v, p);
  }
  return -s;
}

SurfaceModel build_model(i64 p, i64 lambda) {
  if (p < 3 || !is_prime(p))
    throw BadPrime("need an odd prime, got " + std::to_string(p));
  lambda = mod_norm(lambda, p);
  if (lambda == 0 || lambda == 1)
    throw BadLambda("lambda must avoid 0 and 1 mod p");

  SurfaceModel m;
  m.p = p;
  m.lambda = lambda;
  m.f = FpField(p);
  m.K = quartic(m.f, lambda);
  for (int i = 0; i < 4; ++i) m.dK[i] = form4_d(m.f, m.K, i);
  m.a_p = trace_of_frobenius(p, lambda);
  m.expected_count = p * p + 18 * p + 1 + m.a_p * m.a_p;

  // the twelve nodes: four coordinate points, then (1:s1:s2:s3) over the
  // sign patterns in binary order (+ = 1, - = p-1)
  std::vector<P3> npos;
  npos.push_back(p3_make({1, 0, 0, 0}, p));
  npos.push_back(p3_make({0, 1, 0, 0}, p));
  npos.push_back(p3_make({0, 0, 1, 0}, p));
  npos.push_back(p3_make({0, 0, 0, 1}, p));
  for (int bits = 0; bits < 8; ++bits) {
    i64 s1 = (bits & 4) ? -1 : 1;
    i64 s2 = (bits & 2) ? -1 : 1;
    i64 s3 = (bits & 1) ? -1 : 1;
    npos.push_back(p3_make({1, s1, s2, s3}, p));
  }
  for (auto& q : npos) m.nodes.push_back(make_node(m, q));

  // lines: collinear node triples, each verified to lie on the quartic
  auto on_quartic = [&](const LineP3& ln) {
    // restrict K to s U + t V: must be the zero binary quartic
    std::array<BinForm<FpField>, 4> sub;
    for (int i = 0; i < 4; ++i) {
      sub[i] = bin_zero(m.f, 1);
      sub[i].c[1] = ln.u.x[i];
      sub[i].c[0] = ln.v.x[i];
    }
    return bin_is_zero(m.f, form4_compose_bin(m.f, m.K, sub));
  };
  auto collinear = [&](const P3& a, const P3& b, const P3& c) {
    std::vector<std::vector<i64>> rows = {
        {a.x[0], a.x[1], a.x[2], a.x[3]},
        {b.x[0], b.x[1], b.x[2], b.x[3]},
        {c.x[0], c.x[1], c.x[2], c.x[3]}};
    return kernel_basis(m.f, rows).size() == 2;
  };
  std::vector<std::array<int, 3>> triples;
  for (int i = 0; i < 12; ++i)
    for (int j = i + 1; j < 12; ++j)
      for (int k = j + 1; k < 12; ++k)
        if (collinear(m.nodes[i].pos, m.nodes[j].pos, m.nodes[k].pos))
          triples.push_back({i, j, k});
  for (auto& t : triples) {
    LineP3 ln{m.nodes[t[0]].pos, m.nodes[t[1]].pos};
    if (!on_quartic(ln))
      throw ModelCorrupt("collinear node triple spans a line off the quartic");
    m.lines.push_back(ln);
    m.line_nodes.push_back({t[0], t[1], t[2]});
  }
  if (m.lines.size() != 16)
    throw ModelCorrupt("expected sixteen lines, found " +
                       std::to_string(m.lines.size()));
  std::array<int, 12> per_node{};
  for (auto& t : m.line_nodes)
    for (int id : t) per_node[id]++;
  for (int c : per_node)
    if (c != 4) throw ModelCorrupt("node does not lie on four lines");
  return m;
}

PointTable enumerate_points(const SurfaceModel& m) {
  const i64 p = m.p;
  PointTable t;
  auto push = [&](ResolvedPoint rp) {
    t.index.emplace(PointTable::key(rp), (int)t.pts.size());
    t.pts.push_back(std::move(rp));
  };
  auto consider = [&](std::array<i64, 4> x) {
    if (m.k_eval(x) != 0) return;
    P3 q{x};  // already normalized by construction
    if (m.node_index(q) >= 0) return;
    if (m.k_grad(x) == std::array<i64, 4>{0, 0, 0, 0})
      throw ModelCorrupt("unexpected singular point off the node list");
    push(ResolvedPoint{false, q, -1, {}});
  };
  // lexicographic enumeration of normalized representatives
  consider({0, 0, 0, 1});
  for (i64 t3 = 0; t3 < p; ++t3) consider({0, 0, 1, t3});
  for (i64 t2 = 0; t2 < p; ++t2)
    for (i64 t3 = 0; t3 < p; ++t3) consider({0, 1, t2, t3});
  for (i64 t1 = 0; t1 < p; ++t1)
    for (i64 t2 = 0; t2 < p; ++t2)
      for (i64 t3 = 0; t3 < p; ++t3) consider({1, t1, t2, t3});
  t.smooth_count = t.size();
  for (int n = 0; n < (int)m.nodes.size(); ++n)
    for (i64 i = 0; i < p1_count(p); ++i)
      push(ResolvedPoint{true, m.nodes[n].pos, n, p1_at(i, p)});
  if (t.size() != m.expected_count)
    throw CountMismatch("point count " + std::to_string(t.size()) +
                        " does not match the trace formula value " +
                        std::to_string(m.expected_count));
  return t;
}

std::vector<int> line_points(const SurfaceModel& m, const PointTable& t,
                             int line_id) {
  const auto& ln = m.lines[line_id];
  const FpField& f = m.f;
  std::vector<int> out;
  for (i64 i = 0; i < p1_count(m.p); ++i) {
    P1 st = p1_at(i, m.p);
    auto raw = ln.at(st, m.p);
    P3 q = p3_make(raw, m.p);
    int nd = m.node_index(q);
    if (nd < 0) {
      out.push_back(t.at(ResolvedPoint{false, q, -1, {}}));
      continue;
    }
    // direction of the line at the node
    const Node& node = m.nodes[nd];
    auto other = (st == P1{1, 0}) ? ln.v.x : ln.u.x;
    if (raw[node.pivot] == 0)
      throw ModelCorrupt("node representative vanishes at its pivot");
    i64 scale = f.div(other[node.pivot], raw[node.pivot]);
    std::array<i64, 4> dir{};
    for (int k = 0; k < 4; ++k)
      dir[k] = f.sub(other[k], f.mul(scale, raw[k]));
    P1 dp = node.dir_param(f, dir);
    out.push_back(t.at(ResolvedPoint{true, q, nd, dp}));
  }
  return out;
}

Germ germ_at(const SurfaceModel& m, const ResolvedPoint& rp, int variant,
             i64 prec) {
  const FpField& f = m.f;
  SerField S(m.p, prec);
  std::array<i64, 4> c{};
  std::array<i64, 4> v{0, 0, 0, 0};
  int jstar = -1;
  i64 offset = 0;

  if (!rp.exceptional) {
    c = rp.pt.x;
    auto grad = m.k_grad(c);
    int piv = p3_pivot(rp.pt);
    std::array<int, 3> chart{};
    int j = 0;
    for (int i = 0; i < 4; ++i)
      if (i != piv) chart[j++] = i;
    std::vector<std::vector<i64>> row = {
        {grad[chart[0]], grad[chart[1]], grad[chart[2]]}};
    auto ker = kernel_basis(f, row);
    if (ker.size() != 2)
      throw LiftFailure("tangent space of unexpected dimension");
    Vec3<FpField> v3{};
    if (variant == 0) v3 = {ker[0][0], ker[0][1], ker[0][2]};
    else if (variant == 1) v3 = {ker[1][0], ker[1][1], ker[1][2]};
    else
      v3 = {f.add(ker[0][0], ker[1][0]), f.add(ker[0][1], ker[1][1]),
            f.add(ker[0][2], ker[1][2])};
    for (int i = 0; i < 3; ++i) v[chart[i]] = v3[i];
    for (int i = 0; i < 3; ++i)
      if (grad[chart[i]] != 0) { jstar = chart[i]; break; }
    offset = 0;
  } else {
    const Node& node = m.nodes[rp.node];
    c = node.pos.x;
    v = node.dir_vec(f, rp.dir);
    // polar functional of the direction on the cone
    Vec3<FpField> d3{v[node.chart[0]], v[node.chart[1]], v[node.chart[2]]};
    auto g3 = node.cone.polar(f, d3);
    for (int i = 0; i < 3; ++i)
      if (g3[i] != 0) { jstar = node.chart[i]; break; }
    offset = 1;
  }
  if (jstar < 0) throw LiftFailure("no transverse solve coordinate");

  Germ g;
  g.prec = prec;
  for (int i = 0; i < 4; ++i) {
    std::vector<i64> coeffs = {c[i], v[i]};
    g.x[i] = S.from_coeffs(coeffs, prec);
  }
  if (rp.exceptional && variant > 0) {
    // displacement at order two, chosen in the kernel of the polar
    // functional so the leading solve is untouched, and transverse to the
    // direction itself so the germ is not a reparametrization
    const Node& node = m.nodes[rp.node];
    Vec3<FpField> d3{v[node.chart[0]], v[node.chart[1]], v[node.chart[2]]};
    auto g3 = node.cone.polar(f, d3);
    std::vector<std::vector<i64>> row = {{g3[0], g3[1], g3[2]}};
    auto ker = kernel_basis(f, row);
    auto prop_to_d = [&](const std::vector<i64>& k) {
      for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
          if (f.sub(f.mul(k[i], d3[j]), f.mul(k[j], d3[i])) != 0) return false;
      return true;
    };
    std::vector<std::vector<i64>> cand;
    for (auto& k : ker)
      if (!prop_to_d(k)) cand.push_back(k);
    if (ker.size() == 2) {
      std::vector<i64> sum(3), diff(3);
      for (int i = 0; i < 3; ++i) {
        sum[i] = f.add(ker[0][i], ker[1][i]);
        diff[i] = f.sub(ker[0][i], ker[1][i]);
      }
      if (!prop_to_d(sum)) cand.push_back(sum);
      if (!prop_to_d(diff)) cand.push_back(diff);
    }
    if (cand.empty()) throw LiftFailure("no transverse displacement");
    const auto& kv = cand[(size_t)(variant - 1) % cand.size()];
    for (int i = 0; i < 3; ++i)
      g.x[node.chart[i]] = S.add(g.x[node.chart[i]], S.monomial(kv[i], 2));
  }

  auto KS = form4_cast(S, m.K);
  auto residual = [&]() { return form4_eval(S, KS, g.x); };
  // linear response of the residual to a bump at order two
  {
    auto base = residual();
    auto probe = g;
    probe.x[jstar] = S.add(probe.x[jstar], S.monomial(1, 2));
    auto shifted = form4_eval(S, KS, probe.x);
    i64 a = mod_norm(S.coeff(shifted, 2 + offset) - S.coeff(base, 2 + offset),
                     m.p);
    if (a == 0) throw LiftFailure("degenerate transverse response");
    i64 ainv = inv_mod(a, m.p);
    for (i64 guard = 0; guard <= prec; ++guard) {
      auto r = residual();
      if (S.is_zero(r)) break;
      i64 kk = r.val - offset;  // bump order that cancels this residual
      if (kk < 2) throw LiftFailure("residual below expected order");
      if (kk >= prec) break;
      i64 rk = S.coeff(r, r.val);
      g.x[jstar] = S.add(
          g.x[jstar],
          S.monomial(mul_mod(mod_norm(-rk, m.p), ainv, m.p), kk));
    }
  }
  auto fin = residual();
  if (!S.is_zero(fin) && fin.val < prec)
    throw LiftFailure("germ does not satisfy the surface equation");
  return g;
}

std::array<i64, 4> germ_direction_at_node(const SurfaceModel& m,
                                          const Germ& g, i64 lead_order,
                                          const Node& node) {
  SerField S(m.p, g.prec);
  const FpField& f = m.f;
  std::array<i64, 4> X0{};
  for (int i = 0; i < 4; ++i) X0[i] = S.coeff(g.x[i], lead_order);
  i64 piv = node.pivot;
  if (X0[piv] == 0) throw OffSurface("germ center misses the node pivot");
  i64 pinv = inv_mod(X0[piv], m.p);
  i64 maxk = g.prec;
  for (int i = 0; i < 4; ++i) maxk = std::min(maxk, g.x[i].aprec);
  for (i64 k = 1; lead_order + k < maxk; ++k) {
    std::array<i64, 4> D{}, v{};
    for (int i = 0; i < 4; ++i) D[i] = S.coeff(g.x[i], lead_order + k);
    i64 s = mul_mod(D[piv], pinv, m.p);
    bool nz = false;
    for (int i = 0; i < 4; ++i) {
      v[i] = f.sub(D[i], f.mul(s, X0[i]));
      nz = nz || v[i] != 0;
    }
    if (!nz) continue;
    Vec3<FpField> v3{v[node.chart[0]], v[node.chart[1]], v[node.chart[2]]};
    if (!f.is_zero(node.cone.q(f, v3)))
      throw OffSurface("arrival direction misses the tangent cone");
    return v;
  }
  throw PrecisionExhausted("no non-radial coefficient within precision");
}

ResolvedPoint resolve_germ(const SurfaceModel& m, const std::array<LSer, 4>& x,
                           i64 prec) {
  SerField S(m.p, prec);
  i64 lead = -1;
  for (int i = 0; i < 4; ++i)
    if (!S.is_zero(x[i])) lead = lead < 0 ? x[i].val : std::min(lead, x[i].val);
  if (lead < 0)
    throw PrecisionExhausted("arc vanishes to working precision");
  std::array<i64, 4> X0{};
  for (int i = 0; i < 4; ++i) X0[i] = S.coeff(x[i], lead);
  P3 q = p3_make(X0, m.p);
  int nd = m.node_index(q);
  if (nd < 0) {
    if (m.k_eval(q.x) != 0)
      throw OffSurface("arc limit misses the quartic");
    return ResolvedPoint{false, q, -1, {}};
  }
  Germ img;
  img.prec = prec;
  img.x = x;
  auto v = germ_direction_at_node(m, img, lead, m.nodes[nd]);
  P1 dp = m.nodes[nd].dir_param(m.f, v);
  return ResolvedPoint{true, q, nd, dp};
}

ResolvedPoint push_germ(const SurfaceModel& m,
                        const std::array<Form4<FpField>, 4>& forms,
                        const Germ& g) {
  SerField S(m.p, g.prec);
  std::array<LSer, 4> Y;
  for (int i = 0; i < 4; ++i)
    Y[i] = form4_eval(S, form4_cast(S, forms[i]), g.x);
  return resolve_germ(m, Y, g.prec);
}

std::string table_csv(const SurfaceModel& m, const PointTable& t) {
  std::ostringstream os;
  os << "index,kind,x0,x1,x2,x3,node,dir_a,dir_b\n";
  for (size_t i = 0; i < t.pts.size(); ++i) {
    const auto& rp = t.pts[i];
    os << i << ',' << (rp.exceptional ? "exceptional" : "smooth");
    for (int k = 0; k < 4; ++k) os << ',' << rp.pt.x[k];
    if (rp.exceptional)
      os << ',' << rp.node << ',' << rp.dir.a << ',' << rp.dir.b;
    else
      os << ",,,";
    os << '\n';
  }
  (void)m;
  return os.str();
}

}  // namespace kummer
