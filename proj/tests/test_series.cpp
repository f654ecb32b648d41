#include "higgs/series.hpp"

#include <doctest.h>

#include <random>

using namespace higgs::series;

namespace {

Series mono(Rational c, int t, int x = 0, int y = 0, Bounds b = {}) {
  return Series::monomial({c, {t, x, y}}, b);
}

Series random_series(std::mt19937_64& rng, Bounds b) {
  std::uniform_int_distribution<int> num(-7, 7), den(1, 5), te(-3, 3), xe(0, 3), count(0, 6);
  Series s(b);
  for (int n = count(rng); n > 0; --n) {
    const int t = te(rng);
    const int x = xe(rng);
    const int y = xe(rng);
    const int p = num(rng);
    const int q = den(rng);
    s.add_term({t, x, y}, Rational(p, q));
  }
  return s;
}

}  // namespace

TEST_CASE("addition examples") {
  CHECK((mono(1, 0) + mono(1, 1, 1)) + mono(-1, 0) == mono(1, 1, 1));
  const Series s = mono(3, 1, 2) + mono(Rational(1, 2), -1);
  CHECK(Series() + s == s);
  CHECK((mono(1, 0) + mono(1, 1)) + (mono(1, 0) + mono(1, 1)) == mono(2, 0) + mono(2, 1));
}

TEST_CASE("canonical form drops zero coefficients") {
  Series s = mono(1, 2) - mono(1, 2);
  CHECK(s.is_zero());
  CHECK(s.size() == 0);
}

TEST_CASE("multiplication examples") {
  const Bounds b{-kUnbounded, kUnbounded, 2, kUnbounded};
  const Series p = mono(1, 0, 0, 0, b) + mono(1, 1, 1, 0, b);
  CHECK(p * p == mono(1, 0) + mono(2, 1, 1) + mono(1, 2, 2));
  // (1 - x) * (1 + x + ... + x^N) = 1 inside the window
  const Bounds xb{-kUnbounded, kUnbounded, 5, kUnbounded};
  Series geo(xb);
  for (int m = 0; m <= 5; ++m) geo.add_term({0, m, 0}, 1);
  CHECK((mono(1, 0, 0, 0, xb) - mono(1, 0, 1, 0, xb)) * geo == mono(1, 0));
  CHECK((mono(1, 0) + mono(1, 1)) * (mono(1, 0) - mono(1, 1)) == mono(1, 0) - mono(1, 2));
}

TEST_CASE("expand_geometric") {
  const Series a = expand_geometric({1, {0, 1, 0}}, {-kUnbounded, kUnbounded, 3, 0});
  CHECK(a == mono(1, 0) + mono(1, 0, 1) + mono(1, 0, 2) + mono(1, 0, 3));
  const Series b = expand_geometric({1, {2, 1, 0}}, {-kUnbounded, kUnbounded, 2, 0});
  CHECK(b == mono(1, 0) + mono(1, 2, 1) + mono(1, 4, 2));
  const Series c = expand_geometric({1, {-2, 1, 0}}, {-kUnbounded, kUnbounded, 2, 0});
  CHECK(c == mono(1, 0) + mono(1, -2, 1) + mono(1, -4, 2));
  CHECK_THROWS_AS(expand_geometric({1, {3, 0, 0}}, {}), SeriesError);
}

TEST_CASE("geometric series inverts 1 - c") {
  const Bounds b{-20, 20, 4, 3};
  for (Exponents e : {Exponents{0, 1, 0}, Exponents{2, 1, 0}, Exponents{-2, 1, 0},
                      Exponents{1, 0, 1}, Exponents{4, 2, 1}}) {
    const Series g = expand_geometric({Rational(3, 2), e}, b);
    const Series one_minus_c = Series::constant(1, b) - Series::monomial({Rational(3, 2), e}, b);
    CHECK(g * one_minus_c == Series::constant(1, b));
  }
}

TEST_CASE("pow_binomial") {
  const Series a = pow_binomial({1, {1, 1, 0}}, 4, {});
  CHECK(a == mono(1, 0) + mono(4, 1, 1) + mono(6, 2, 2) + mono(4, 3, 3) + mono(1, 4, 4));
  CHECK(pow_binomial({1, {1, 0, 1}}, 0, {}) == mono(1, 0));
  CHECK(pow_binomial({1, {1, 0, 0}}, 4, {}) ==
        mono(1, 0) + mono(4, 1) + mono(6, 2) + mono(4, 3) + mono(1, 4));
}

TEST_CASE("coeff_extract") {
  const Bounds b{-kUnbounded, kUnbounded, 3, 0};
  const Series s = pow_binomial({1, {1, 1, 0}}, 4, b) * expand_geometric({1, {0, 1, 0}}, b);
  CHECK(coeff_extract(s, {{Var::x, 1}}) == mono(1, 0) + mono(4, 1));
  CHECK(coeff_extract(s, {{Var::x, 0}}) == mono(1, 0));
  CHECK_THROWS_AS(coeff_extract(s, {{Var::x, 5}}), TruncationError);
}

TEST_CASE("exact division by 1 - t^2") {
  CHECK(exact_divide_one_minus_t_power(mono(1, 0) - mono(1, 4)) == mono(1, 0) + mono(1, 2));
  CHECK(exact_divide_one_minus_t_power(mono(2, 0) - mono(2, 2)) == mono(2, 0));
  CHECK_THROWS_AS(exact_divide_one_minus_t_power(mono(1, 0) + mono(1, 1)), RemainderError);
}

TEST_CASE("debug rendering") {
  CHECK((mono(1, 0) + mono(4, 1) + mono(7, 2)).to_string() == "1 + 4*t + 7*t^2");
}

TEST_CASE("ring axioms on 1000 random triples") {
  std::mt19937_64 rng(1234);
  const Bounds b{-8, 8, 5, 5};
  const Series one = Series::constant(1, b);
  for (int trial = 0; trial < 1000; ++trial) {
    const Series p = random_series(rng, b);
    const Series q = random_series(rng, b);
    const Series r = random_series(rng, b);
    REQUIRE(p + q == q + p);
    REQUIRE(p * q == q * p);
    REQUIRE((p + q) + r == p + (q + r));
    REQUIRE((p * q) * r == p * (q * r));
    REQUIRE(p * (q + r) == p * q + p * r);
    REQUIRE(p * one == p);
    REQUIRE((p + (-p)).is_zero());
  }
}

TEST_CASE("coeff_extract commutes with addition and with x-free factors") {
  std::mt19937_64 rng(99);
  const Bounds b{-8, 8, 5, 5};
  for (int trial = 0; trial < 200; ++trial) {
    const Series p = random_series(rng, b);
    const Series q = random_series(rng, b);
    Series free(b);  // no x dependence
    free.add_term({trial % 3 - 1, 0, trial % 2}, Rational(trial + 1, 3));
    for (int n = 0; n <= 3; ++n) {
      const std::map<Var, int> at{{Var::x, n}};
      REQUIRE(coeff_extract(p + q, at) == coeff_extract(p, at) + coeff_extract(q, at));
      REQUIRE(coeff_extract(free * p, at) == free * coeff_extract(p, at));
    }
  }
}
