#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kummer/field.hpp"

using namespace kummer;

TEST_CASE("prime field basics") {
  CHECK(mod_norm(-3, 7) == 4);
  CHECK(mul_mod(5, 6, 7) == 2);
  CHECK(pow_mod(3, 6, 7) == 1);
  CHECK(inv_mod(3, 7) == 5);
  CHECK_THROWS_AS(inv_mod(0, 7), FieldError);
  CHECK(legendre(2, 7) == 1);   // 3^2 = 2 mod 7
  CHECK(legendre(3, 7) == -1);
  CHECK(legendre(0, 7) == 0);
}

TEST_CASE("square roots are deterministic smaller representatives") {
  CHECK(sqrt_mod(4, 13) == 2);
  CHECK(sqrt_mod(3, 13) == 4);  // 4^2 = 16 = 3
  CHECK(!sqrt_mod(2, 13).has_value());
  CHECK(sqrt_mod(0, 13) == 0);
  // p = 1 mod 8 exercises the general branch: 17^2 = 289 = 7*41 + 2
  CHECK(sqrt_mod(2, 41) == 17);
  // exhaustive agreement of both code paths on a larger prime
  for (i64 a = 0; a < 53; ++a) {
    auto r = sqrt_mod(a, 53);
    if (r) {
      CHECK(mul_mod(*r, *r, 53) == a);
      CHECK(*r <= 53 / 2);
    } else {
      CHECK(legendre(a, 53) == -1);
    }
  }
}

TEST_CASE("extension fields use the least irreducible modulus") {
  FqField f9(3, 2);
  CHECK(f9.modulus == std::array<i64, 4>{1, 0, 0, 0});  // t^2 + 1
  FqField f25(5, 2);
  CHECK(f25.modulus == std::array<i64, 4>{2, 0, 0, 0});  // t^2 + 2
  auto g = f25.gen();
  CHECK(f25.eq(f25.mul(g, g), f25.from_int(-2)));
  FqField f49(7, 2);
  CHECK(f49.modulus == std::array<i64, 4>{1, 0, 0, 0});  // t^2 + 1
}

TEST_CASE("extension field arithmetic") {
  FqField f(7, 2);
  auto g = f.gen();
  // g^2 = -1, so g has multiplicative order 4
  CHECK(f.eq(f.pow(g, 4), f.one()));
  CHECK(!f.eq(f.pow(g, 2), f.one()));
  for (i64 i = 1; i < f.size(); ++i) {
    auto a = f.elt(i);
    CHECK(f.eq(f.mul(a, f.inv(a)), f.one()));
  }
  // squares: exactly (q-1)/2 nonzero squares
  int squares = 0;
  for (i64 i = 1; i < f.size(); ++i)
    if (f.is_square(f.elt(i))) ++squares;
  CHECK(squares == 24);
}

TEST_CASE("degree four extension") {
  FqField f(3, 4);
  // modulus irreducible: no roots and no quadratic factors; sanity: the
  // multiplicative group has order 80
  auto g = f.gen();
  auto x = f.one();
  int order = 0;
  for (int i = 1; i <= 80; ++i) {
    x = f.mul(x, g);
    if (f.eq(x, f.one())) { order = i; break; }
  }
  CHECK(order > 0);
  CHECK(80 % order == 0);
}

TEST_CASE("series arithmetic tracks valuation and precision") {
  SerField s(7, 8);
  auto e = s.monomial(1, 1);           // e
  auto a = s.add(s.from_int(3), e);    // 3 + e
  auto b = s.inv(a);
  // (3+e)^-1 = 3^-1 (1 - e/3 + e^2/9 - ...) ; check product is one
  auto prod = s.mul(a, b);
  CHECK(s.eq(prod, s.one()));
  // Laurent division shifts valuation
  auto c = s.div(s.one(), e);
  CHECK(c.val == -1);
  auto back = s.mul(c, e);
  CHECK(s.eq(back, s.one()));
  // cancellation loses precision but stays exact
  auto d = s.sub(a, a);
  CHECK(s.is_zero(d));
  CHECK_THROWS_AS(s.inv(d), PrecisionExhausted);
}
