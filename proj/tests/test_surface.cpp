#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "kummer/surface.hpp"

using namespace kummer;

namespace {

// brute-force count of affine points on y^2 = x(x-1)(x-L)
i64 curve_affine_count(i64 p, i64 L) {
  i64 n = 0;
  for (i64 x = 0; x < p; ++x)
    for (i64 y = 0; y < p; ++y) {
      i64 lhs = mul_mod(y, y, p);
      i64 rhs = mul_mod(mul_mod(x, mod_norm(x - 1, p), p),
                        mod_norm(x - L, p), p);
      if (lhs == rhs) ++n;
    }
  return n;
}

std::array<Form4<FpField>, 4> linear_map(const FpField& f,
                                         std::array<std::array<i64, 4>, 4> a) {
  std::array<Form4<FpField>, 4> out;
  for (int r = 0; r < 4; ++r) {
    std::vector<std::pair<std::array<int, 4>, i64>> rows;
    for (int c = 0; c < 4; ++c) {
      std::array<int, 4> e{0, 0, 0, 0};
      e[c] = 1;
      rows.push_back({e, a[r][c]});
    }
    out[r] = form4_build(f, rows);
  }
  return out;
}

const std::array<std::array<i64, 4>, 4> kMapA = {{{1, 1, 1, 1},
                                                  {1, 1, -1, -1},
                                                  {1, -1, 1, -1},
                                                  {1, -1, -1, 1}}};

}  // namespace

TEST_CASE("trace of frobenius matches brute-force curve counts") {
  // affine count is p - a_p
  for (i64 p : {3, 5, 7, 11, 13}) {
    for (i64 L = 2; L < p; ++L) {
      CHECK(curve_affine_count(p, L) == p - trace_of_frobenius(p, L));
    }
  }
  CHECK(trace_of_frobenius(5, 2) == -2);
  CHECK(trace_of_frobenius(3, 2) == 0);
  CHECK(trace_of_frobenius(7, 3) == 4);
}

TEST_CASE("model construction validates input") {
  CHECK_THROWS_AS(build_model(4, 2), BadPrime);
  CHECK_THROWS_AS(build_model(2, 1), BadPrime);
  CHECK_THROWS_AS(build_model(9, 2), BadPrime);
  CHECK_THROWS_AS(build_model(5, 0), BadLambda);
  CHECK_THROWS_AS(build_model(5, 6), BadLambda);
  CHECK_THROWS_AS(build_model(7, 8), BadLambda);
  CHECK_NOTHROW(build_model(5, 2));
}

TEST_CASE("twelve nodes and sixteen lines in canonical order") {
  auto m = build_model(5, 2);
  REQUIRE(m.nodes.size() == 12);
  CHECK(m.nodes[0].pos == p3_make({1, 0, 0, 0}, 5));
  CHECK(m.nodes[1].pos == p3_make({0, 1, 0, 0}, 5));
  CHECK(m.nodes[2].pos == p3_make({0, 0, 1, 0}, 5));
  CHECK(m.nodes[3].pos == p3_make({0, 0, 0, 1}, 5));
  CHECK(m.nodes[4].pos == p3_make({1, 1, 1, 1}, 5));
  CHECK(m.nodes[5].pos == p3_make({1, 1, 1, -1}, 5));
  CHECK(m.nodes[11].pos == p3_make({1, -1, -1, -1}, 5));

  REQUIRE(m.lines.size() == 16);
  REQUIRE(m.line_nodes.size() == 16);
  std::array<int, 12> per_node{};
  std::set<std::vector<int>> triples;
  for (auto& t : m.line_nodes) {
    REQUIRE(t.size() == 3);
    for (int id : t) per_node[id]++;
    auto s = t;
    std::sort(s.begin(), s.end());
    triples.insert(s);
  }
  CHECK(triples.size() == 16);
  for (int c : per_node) CHECK(c == 4);
  // the line x free, (y,z,w) = (s,-s,s) joins the first coordinate node to
  // the nodes (1:1:-1:1) and (1:-1:1:-1)
  CHECK(triples.count({0, 6, 9}) == 1);

  // the three listed nodes really sit on each line
  for (size_t i = 0; i < m.lines.size(); ++i) {
    for (int id : m.line_nodes[i]) {
      bool hit = false;
      for (i64 k = 0; k < p1_count(5); ++k) {
        auto pt = p3_make(m.lines[i].at(p1_at(k, 5), 5), 5);
        if (pt == m.nodes[id].pos) hit = true;
      }
      CHECK(hit);
    }
  }
}

TEST_CASE("point counts match the trace formula") {
  struct Row {
    i64 p, L, n;
  };
  for (auto [p, L, n] : {Row{3, 2, 64}, Row{5, 2, 120}, Row{7, 3, 192}}) {
    auto m = build_model(p, L);
    CHECK(m.expected_count == n);
    auto t = enumerate_points(m);
    CHECK(t.size() == n);
    CHECK(t.smooth_count == n - 12 * (p + 1));
    CHECK((i64)t.index.size() == n);
    // exceptional block: grouped by node, directions in index order
    for (int nd = 0; nd < 12; ++nd)
      for (i64 i = 0; i < p + 1; ++i) {
        const auto& rp = t.pts[t.smooth_count + nd * (p + 1) + i];
        CHECK(rp.exceptional);
        CHECK(rp.node == nd);
        CHECK(rp.dir == p1_at(i, p));
      }
  }
  auto m = build_model(5, 2);
  auto t = enumerate_points(m);
  CHECK(t.pts[0].pt == p3_make({0, 1, 1, 1}, 5));
  CHECK_FALSE(t.pts[0].exceptional);
}

TEST_CASE("every lambda counts correctly at p = 13") {
  for (i64 L = 2; L < 13; ++L) {
    auto m = build_model(13, L);
    auto t = enumerate_points(m);
    CHECK(t.size() == m.expected_count);
    CHECK(t.size() % 8 == 0);
  }
}

TEST_CASE("line points cover the line once") {
  auto m = build_model(5, 2);
  auto t = enumerate_points(m);
  int line_id = -1;
  for (size_t i = 0; i < m.line_nodes.size(); ++i) {
    auto s = m.line_nodes[i];
    std::sort(s.begin(), s.end());
    if (s == std::vector<int>{0, 6, 9}) line_id = (int)i;
  }
  REQUIRE(line_id >= 0);
  auto pts = line_points(m, t, line_id);
  REQUIRE(pts.size() == 6);
  std::set<int> uniq(pts.begin(), pts.end());
  CHECK(uniq.size() == 6);
  int exceptional = 0;
  for (int id : pts)
    if (t.pts[id].exceptional) ++exceptional;
  CHECK(exceptional == 3);
}

TEST_CASE("smooth germ pushes forward along a linear automorphism") {
  auto m = build_model(5, 2);
  auto t = enumerate_points(m);
  ResolvedPoint base{false, p3_make({0, 1, 1, 1}, 5), -1, {}};
  auto ident = linear_map(m.f, {{{1, 0, 0, 0},
                                 {0, 1, 0, 0},
                                 {0, 0, 1, 0},
                                 {0, 0, 0, 1}}});
  auto mapa = linear_map(m.f, kMapA);
  auto rev = linear_map(m.f, {{{0, 0, 0, 1},
                               {0, 0, 1, 0},
                               {0, 1, 0, 0},
                               {1, 0, 0, 0}}});
  for (int variant = 0; variant < 3; ++variant) {
    auto g = germ_at(m, base, variant, 8);
    CHECK(push_germ(m, ident, g) == base);
    auto ia = push_germ(m, mapa, g);
    CHECK(ia == ResolvedPoint{false, p3_make({3, -1, -1, -1}, 5), -1, {}});
    auto ir = push_germ(m, rev, g);
    CHECK(ir == ResolvedPoint{false, p3_make({1, 1, 1, 0}, 5), -1, {}});
    CHECK(t.at(ia) >= 0);
  }
}

TEST_CASE("exceptional germs travel between nodes consistently") {
  auto m = build_model(5, 2);
  auto ident = linear_map(m.f, {{{1, 0, 0, 0},
                                 {0, 1, 0, 0},
                                 {0, 0, 1, 0},
                                 {0, 0, 0, 1}}});
  auto flipx = linear_map(m.f, {{{-1, 0, 0, 0},
                                 {0, 1, 0, 0},
                                 {0, 0, 1, 0},
                                 {0, 0, 0, 1}}});
  auto mapa = linear_map(m.f, kMapA);
  std::set<P1> images;
  for (i64 i = 0; i < 6; ++i) {
    ResolvedPoint rp{true, m.nodes[0].pos, 0, p1_at(i, 5)};
    auto g0 = germ_at(m, rp, 0, 8);
    auto g1 = germ_at(m, rp, 1, 8);
    CHECK(push_germ(m, ident, g0) == rp);
    CHECK(push_germ(m, ident, g1) == rp);
    CHECK(push_germ(m, flipx, g0) == rp);
    auto a0 = push_germ(m, mapa, g0);
    auto a1 = push_germ(m, mapa, g1);
    CHECK(a0 == a1);
    CHECK(a0.exceptional);
    CHECK(a0.node == 4);
    images.insert(a0.dir);
  }
  CHECK(images.size() == 6);
}

TEST_CASE("push failures are reported") {
  auto m = build_model(5, 2);
  auto t = enumerate_points(m);
  ResolvedPoint base{false, p3_make({0, 1, 1, 1}, 5), -1, {}};
  auto off = linear_map(m.f, {{{1, 0, 0, 0},
                               {0, 1, 0, 0},
                               {0, 0, 1, 0},
                               {1, 1, 1, 1}}});
  auto g = germ_at(m, base, 0, 8);
  CHECK_THROWS_AS(push_germ(m, off, g), OffSurface);

  // variant 1 of this germ keeps the first coordinate identically zero
  auto allx = linear_map(m.f, {{{1, 0, 0, 0},
                                {1, 0, 0, 0},
                                {1, 0, 0, 0},
                                {1, 0, 0, 0}}});
  auto g1 = germ_at(m, base, 1, 8);
  CHECK_THROWS_AS(push_germ(m, allx, g1), PrecisionExhausted);

  CHECK_THROWS_AS(t.at(ResolvedPoint{false, p3_make({1, 2, 3, 4}, 5), -1, {}}),
                  ModelCorrupt);
}

TEST_CASE("csv export lists every resolved point") {
  auto m = build_model(3, 2);
  auto t = enumerate_points(m);
  auto csv = table_csv(m, t);
  CHECK(csv.rfind("index,kind,x0,x1,x2,x3,node,dir_a,dir_b\n", 0) == 0);
  i64 lines = (i64)std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == t.size() + 1);
}
