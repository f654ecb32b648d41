#include "higgs/betti.hpp"
#include "higgs/strata.hpp"
#include "oracles.hpp"

#include <doctest.h>

using namespace higgs;
using namespace higgs::betti;

namespace {

ModuliParams params(int g, int k, Rational tau_bar) { return {g, k, tau_bar}; }

Rational mid_interval(int k) { return Rational(2 * k + 1, 4); }

std::vector<ModuliParams> grid() {
  std::vector<ModuliParams> out;
  for (int g : {2, 3}) {
    for (int k = 4 * g - 3; k <= 4 * g + 3; k += 2) out.push_back(params(g, k, mid_interval(k)));
  }
  return out;
}

}  // namespace

TEST_CASE("sym_poincare examples") {
  CHECK(sym_poincare(0, 2).coeffs() == oracle::Poly{{0, 1}});
  CHECK(sym_poincare(1, 2).coeffs() == oracle::Poly{{0, 1}, {1, 4}, {2, 1}});
  CHECK(sym_poincare(2, 2).coeffs() == oracle::Poly{{0, 1}, {1, 4}, {2, 7}, {3, 4}, {4, 1}});
}

TEST_CASE("sym_poincare matches the convolution oracle") {
  for (int g = 0; g <= 4; ++g) {
    for (int n = 0; n <= 12; ++n) {
      const auto p = sym_poincare(n, g);
      REQUIRE(p.coeffs() == oracle::sym_product(n, g));
      CHECK(p.is_palindromic());
      CHECK(p.degree() == 2 * n);
      CHECK(p.coefficient(0) == 1);
    }
  }
  for (int g = 0; g <= 10; ++g) {
    CHECK(sym_poincare(1, g).coeffs() == oracle::clean({{0, 1}, {1, 2 * g}, {2, 1}}));
  }
}

TEST_CASE("pairs_poincare_n0 matches the brute-force expansion") {
  for (const auto& p : grid()) {
    const int f = static_cast<int>(floor_of(p.tau_bar));
    const auto n0 = pairs_poincare_n0(p);
    CAPTURE(p.genus);
    CAPTURE(p.degree);
    REQUIRE(n0.coeffs() == oracle::pairs_n0(p.genus, p.degree, f));
    CHECK(n0.lowest_degree() >= 0);
    for (const auto& [e, c] : n0.coeffs()) CHECK(c > 0);
  }
}

TEST_CASE("equal bracket prefactors at g=2, k=5") {
  const int k = 5, g = 2, f = 2;
  CHECK(2 * (k - 1 - f) == 4);
  CHECK(2 * (g + 1 - k + 2 * f) == 4);
}

TEST_CASE("golden observation: b0 of the holomorphic-pairs locus") {
  // Recorded, not derived: the constant term equals 1 on the whole grid.
  for (const auto& p : grid()) CHECK(pairs_poincare_n0(p).coefficient(0) == 1);
}

TEST_CASE("stratum polynomial for g=2, k=5, d=3") {
  const auto p = params(2, 5, Rational(27, 10));
  const oracle::Poly expected =
      oracle::shift(oracle::multiply(oracle::sym_product(1, 2), oracle::sym_product(2, 2)), 4);
  const auto s = stratum_poincare(p, 3);
  CHECK(s.coeffs() == expected);
  CHECK(s.lowest_degree() == 4);
  CHECK(s.degree() == 10);
  CHECK_THROWS_AS(stratum_poincare(p, 2), ParameterError);
}

TEST_CASE("total = N0 + strata, independent of tau_bar inside the interval") {
  for (const auto& p : grid()) {
    oracle::Poly expected =
        oracle::pairs_n0(p.genus, p.degree, static_cast<int>(floor_of(p.tau_bar)));
    for (int d : oracle::d_scan(p.genus, p.degree, p.tau_bar)) {
      const int n1 = -2 * d + p.degree + 2 * p.genus - 2;
      const int n2 = p.degree - d;
      expected = oracle::add(expected,
                             oracle::shift(oracle::multiply(oracle::sym_product(n1, p.genus),
                                                            oracle::sym_product(n2, p.genus)),
                                           2 * (2 * d + p.genus - p.degree - 1)));
    }
    const auto total = total_poincare(p);
    REQUIRE(total.coeffs() == expected);
    CHECK(total.coefficient(0) == 1);
    ModuliParams q = p;
    q.tau_bar = Rational(p.degree, 2) + Rational(9, 10) / 2;
    CHECK(total_poincare(q) == total);
  }
}

TEST_CASE("g=2, k=5 polynomials") {
  const auto p = params(2, 5, Rational(27, 10));
  const oracle::Poly n0{{0, 1},  {1, 4},  {2, 8},  {3, 16}, {4, 32}, {5, 48}, {6, 55}, {7, 56},
                        {8, 55}, {9, 48}, {10, 32}, {11, 16}, {12, 8}, {13, 4}, {14, 1}};
  CHECK(pairs_poincare_n0(p).coeffs() == n0);
  const auto total = total_poincare(p);
  CHECK(total.is_palindromic());
  CHECK(total.degree() == 14);
}

TEST_CASE("closed-form extraction") {
  for (const auto& p : grid()) {
    CAPTURE(p.genus);
    CAPTURE(p.degree);
    const auto corrected = extraction_check(p, YConvention::corrected);
    CHECK(corrected.matches);
    CHECK(corrected.diff.empty());
  }
  const auto printed = extraction_check(params(2, 5, Rational(27, 10)), YConvention::as_printed);
  CHECK_FALSE(printed.matches);
  CHECK_FALSE(printed.diff.empty());
}

TEST_CASE("convention names round-trip") {
  for (auto c : {YConvention::as_printed, YConvention::corrected}) {
    CHECK(parse_y_convention(to_string(c)) == c);
  }
  CHECK_THROWS_AS(parse_y_convention("other"), ParameterError);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(total_poincare(params(2, 6, Rational(16, 5))), ParameterError);
  CHECK_THROWS_AS(total_poincare(params(2, 5, Rational(3))), ParameterError);
  CHECK_THROWS_AS(total_poincare(params(1, 5, Rational(27, 10))), ParameterError);
}
