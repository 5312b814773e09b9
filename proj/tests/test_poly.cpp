#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kummer/poly.hpp"

using namespace kummer;

namespace {
BinForm<FpField> lin(const FpField& f, i64 a, i64 b) {
  // a x + b y
  BinForm<FpField> r = bin_zero(f, 1);
  r.c[1] = f.from_int(a);
  r.c[0] = f.from_int(b);
  return r;
}
}  // namespace

TEST_CASE("binary form multiplication and evaluation") {
  FpField f(7);
  auto a = lin(f, 1, -1);            // x - y
  auto b = lin(f, 1, 1);             // x + y
  auto prod = bin_mul(f, a, b);      // x^2 - y^2
  CHECK(prod.c == std::vector<i64>{6, 0, 1});
  CHECK(bin_eval(f, prod, 3, 2) == f.from_int(9 - 4));
  CHECK(f.is_zero(bin_eval(f, prod, 1, 1)));
}

TEST_CASE("roots with multiplicity over a prime field") {
  FpField f(7);
  // x^2 y (x - y)^3: roots (0:1) twice, (1:1) thrice, (1:0) once
  auto form = bin_mul(f, bin_pow(f, lin(f, 1, 0), 2),
                      bin_mul(f, lin(f, 0, 1),
                              bin_pow(f, lin(f, 1, -1), 3)));
  auto roots = roots_with_multiplicity(f, form);
  REQUIRE(roots.size() == 3);
  // canonical order: (0:1) first, then (1:0), then (1:t) ascending
  CHECK(roots[0].first == std::pair<i64, i64>{0, 1});
  CHECK(roots[0].second == 2);
  CHECK(roots[1].first == std::pair<i64, i64>{1, 0});
  CHECK(roots[1].second == 1);
  CHECK(roots[2].first == std::pair<i64, i64>{1, 1});
  CHECK(roots[2].second == 3);
}

TEST_CASE("root extraction requires a nonzero form") {
  FpField f(5);
  auto z = bin_zero(f, 3);
  CHECK_THROWS_AS(roots_with_multiplicity(f, z), ZeroForm);
}

TEST_CASE("irreducible over the base field splits upstairs") {
  // x^2 + y^2 has no roots over F_7 but two simple roots over F_49
  FpField f7(7);
  BinForm<FpField> q = bin_zero(f7, 2);
  q.c[2] = 1;
  q.c[0] = 1;
  CHECK(roots_with_multiplicity(f7, q).empty());

  FqField f49(7, 2);
  BinForm<FqField> q2 = bin_zero(f49, 2);
  q2.c[2] = f49.one();
  q2.c[0] = f49.one();
  auto roots = roots_with_multiplicity(f49, q2);
  REQUIRE(roots.size() == 2);
  CHECK(roots[0].second == 1);
  CHECK(roots[1].second == 1);
  for (auto& [r, m] : roots)
    CHECK(f49.is_zero(f49.add(f49.mul(r.first, r.first),
                              f49.mul(r.second, r.second))));
}

TEST_CASE("exact division by linear factors") {
  FpField f(11);
  auto a = bin_mul(f, lin(f, 1, 3), lin(f, 2, 5));
  BinForm<FpField> q;
  // root of x + 3y is (-3 : 1) ~ (b0 : b1) with b1 x - b0 y | form
  REQUIRE(bin_divide_linear(f, a, f.from_int(-3), f.one(), q));
  // quotient is proportional to 2x + 5y
  CHECK(f.is_zero(bin_eval(f, q, f.from_int(-5), f.from_int(2))));
  // non-root division fails
  CHECK(!bin_divide_linear(f, a, f.from_int(1), f.one(), q));
}

TEST_CASE("linear algebra kernels") {
  FpField f(13);
  std::vector<std::vector<i64>> m = {{1, 2, 3}, {2, 4, 6}};
  auto ker = kernel_basis(f, m);
  CHECK(ker.size() == 2);
  for (auto& v : ker) {
    i64 s = mod_norm(v[0] + 2 * v[1] + 3 * v[2], 13);
    CHECK(s == 0);
  }
  std::vector<i64> x;
  CHECK(solve_linear(f, {{1, 1}, {1, 12}}, {5, 3}, x));
  CHECK(mod_norm(x[0] + x[1], 13) == 5);
  CHECK(mod_norm(x[0] - x[1], 13) == 3);
}

TEST_CASE("series field linear algebra pivots on least valuation") {
  SerField s(5, 6);
  // [e, 1; 1, e] x = [1+e, 1+e] has solution x = (1,1)
  auto e = s.monomial(1, 1);
  std::vector<std::vector<LSer>> m = {{e, s.one()}, {s.one(), e}};
  std::vector<LSer> rhs = {s.add(s.one(), e), s.add(s.one(), e)};
  std::vector<LSer> x;
  REQUIRE(solve_linear(s, m, rhs, x));
  CHECK(s.eq(x[0], s.one()));
  CHECK(s.eq(x[1], s.one()));
}
