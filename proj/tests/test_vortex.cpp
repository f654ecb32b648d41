#include "higgs/vortex.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <Eigen/QR>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

using namespace higgs;
using namespace higgs::vortex;
using namespace higgs::lattice;

namespace {

constexpr double kPi = std::numbers::pi;

VortexParams params(int r1, int r2, double tau, double vol = 4 * kPi * kPi) {
  VortexParams p;
  p.r1 = r1;
  p.r2 = r2;
  p.tau = tau;
  p.vol = vol;
  return p;
}

// |phi|^2 = tau, psi = 0, flat connections, zero Higgs fields.
LatticeState constant_solution(int N, const VortexParams& p) {
  LatticeState s = zero_state(N, p.side(), 1, 1);
  for (Mat& m : s[Block::phi]) m(0, 0) = std::sqrt(p.tau);
  return s;
}

Mat random_unitary(int r, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0, 1);
  Eigen::MatrixXcd g(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = cplx(re, im);
    }
  }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return Mat(qr.householderQ() * Eigen::MatrixXcd::Identity(r, r));
}

LatticeState direction(const LatticeState& s, Block b, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0, 1);
  LatticeState d = zero_like(s);
  auto [rows, cols] = s.shape(b);
  for (Mat& m : d[b]) {
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        const double re = n(rng);
        const double im = n(rng);
        m(i, j) = cplx(re, im);
      }
    }
    if (is_connection(b)) m = anti_hermitian_part(m);
  }
  return d;
}

}  // namespace

TEST_CASE("sigma and derived constants") {
  for (double vol : {1.0, 7.5, 4 * kPi * kPi}) {
    const auto p = params(1, 1, 4 * kPi, vol);
    CHECK(sigma_of(p) == doctest::Approx(1.0).epsilon(1e-14));
    const auto c = derived_constants(p);
    CHECK(c.c == doctest::Approx(2 * kPi).epsilon(1e-13));
    CHECK(c.c_shifted == doctest::Approx(-2 * kPi).epsilon(1e-13));
    CHECK(p.tau_prime() == doctest::Approx(-4 * kPi).epsilon(1e-14));
    CHECK(c.c == doctest::Approx(p.tau / 2).epsilon(1e-13));
    CHECK(c.c_shifted == doctest::Approx(p.tau_prime() / 2).epsilon(1e-13));
  }
  CHECK_THROWS_AS(sigma_of(params(1, 1, -0.5)), ParameterError);
  CHECK_THROWS_AS(sigma_of(params(1, 1, 0.0)), ParameterError);
}

TEST_CASE("tau' balances the ranks") {
  for (auto [r1, r2] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{3, 2}}) {
    const auto p = params(r1, r2, 0.7);
    CHECK(p.tau * r1 + p.tau_prime() * r2 == doctest::Approx(0.0).scale(1.0));
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(params(1, 1, 1.0, -1.0)), ParameterError);
  CHECK_THROWS_AS(validate(params(0, 1, 1.0)), ParameterError);
  CHECK_THROWS_AS(validate(params(4, 1, 1.0)), ParameterError);
  VortexParams p = params(1, 1, 1.0);
  p.d1 = 1;
  CHECK_THROWS_AS(validate(p), ParameterError);
}

TEST_CASE("zero state energy") {
  for (auto scheme : {Scheme::spectral, Scheme::central}) {
    for (auto [r1, r2] : {std::pair{1, 1}, std::pair{2, 1}}) {
      const auto p = params(r1, r2, 1.3, 9.0);
      Model m(p, 8, scheme);
      const auto z = zero_state(8, p.side(), r1, r2);
      const double expected =
          p.vol / 4 * (p.tau * p.tau * r1 + p.tau_prime() * p.tau_prime() * r2);
      CHECK(m.ymh_energy(z) == doctest::Approx(expected).epsilon(1e-13));
      CHECK(m.residual_energy(z) == doctest::Approx(expected).epsilon(1e-13));
      CHECK(decomposition_check(m, z) == 0.0);
    }
  }
}

TEST_CASE("constant exact solution") {
  const auto p = params(1, 1, 1.7);
  for (auto scheme : {Scheme::spectral, Scheme::central}) {
    Model m(p, 8, scheme);
    const auto s = constant_solution(8, p);
    CHECK(m.ymh_energy(s) <= 1e-12);
    CHECK(m.residual_energy(s) <= 1e-12);
    CHECK(decomposition_check(m, s) <= 1e-12);
    LatticeState g;
    m.residual_energy(s, g);
    CHECK(std::sqrt(norm2(g)) <= 1e-10);
    const auto l4 = m.l4_terms(s);
    CHECK(l4.res1 <= 1e-12);
    CHECK(l4.res2 == 0.0);
  }
}

TEST_CASE("central YMH matches the site-by-site oracle") {
  std::mt19937_64 rng(3);
  const auto p = params(1, 1, 1.1, 7.0);
  Model m(p, 6, Scheme::central);
  for (auto branch : {Branch::phi, Branch::psi}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto s = random_state(6, p.side(), 1, 1, branch, 0.6, rng);
      const double expected = oracle::ymh_rank1_central(s, p.tau, p.tau_prime());
      CHECK(m.ymh_energy(s) == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

// Central differences break the discrete product rule, so the cross terms only
// cancel up to discretization error there; the identity is exact spectrally.
TEST_CASE("decomposition identity on integrable states") {
  std::mt19937_64 rng(11);
  for (auto [r1, r2] : {std::pair{1, 1}, std::pair{2, 1}, std::pair{2, 2}, std::pair{1, 2}}) {
    const auto p = params(r1, r2, 1.3, 9.0);
    Model m(p, 8, Scheme::spectral);
    for (auto branch : {Branch::phi, Branch::psi}) {
      for (int trial = 0; trial < 4; ++trial) {
        const auto s = random_integrable_state(8, p.side(), r1, r2, branch, 0.5, rng);
        CHECK(m.integrability_defect(s) <= 1e-20);
        CHECK(decomposition_check(m, s) <= 1e-10);
      }
    }
  }
}

TEST_CASE("YMH = residual + integrability pairing on arbitrary states") {
  std::mt19937_64 rng(12);
  for (auto [r1, r2] : {std::pair{1, 1}, std::pair{2, 1}}) {
    const auto p = params(r1, r2, 0.9, 9.0);
    Model m(p, 8, Scheme::spectral);
    for (int trial = 0; trial < 4; ++trial) {
      const auto s = random_state(8, p.side(), r1, r2, Branch::phi, 0.5, rng);
      const double y = m.ymh_energy(s);
      const double lhs = m.residual_energy(s) + m.integrability_pairing(s);
      CHECK(std::abs(y - lhs) / (1 + y) <= 1e-10);
    }
  }
}

TEST_CASE("injected fault breaks the identity") {
  std::mt19937_64 rng(13);
  const auto p = params(1, 1, 1.0);
  Model m(p, 8, Scheme::spectral, Fault::flip_deviation_sign);
  const auto s = random_integrable_state(8, p.side(), 1, 1, Branch::phi, 0.5, rng);
  CHECK(decomposition_check(m, s) > 1e-3);
}

TEST_CASE("constant gauge covariance") {
  std::mt19937_64 rng(17);
  for (auto scheme : {Scheme::spectral, Scheme::central}) {
    const auto p = params(2, 1, 1.2, 9.0);
    Model m(p, 6, scheme);
    const auto s = random_state(6, p.side(), 2, 1, Branch::phi, 0.5, rng);
    const auto t = gauge_transform(s, random_unitary(2, rng), random_unitary(1, rng));
    const double y = m.ymh_energy(s);
    const double r = m.residual_energy(s);
    CHECK(std::abs(m.ymh_energy(t) - y) <= 1e-9 * y);
    CHECK(std::abs(m.residual_energy(t) - r) <= 1e-9 * r);
  }
}

TEST_CASE("analytic gradient matches finite differences for every block") {
  std::mt19937_64 rng(19);
  for (auto scheme : {Scheme::spectral, Scheme::central}) {
    const auto p = params(2, 1, 1.3, 9.0);
    Model m(p, 6, scheme);
    for (int trial = 0; trial < 4; ++trial) {
      auto s = random_state(6, p.side(), 2, 1, trial % 2 ? Branch::psi : Branch::phi, 0.3, rng);
      LatticeState g;
      m.residual_energy(s, g);
      for (Block b : kAllBlocks) {
        const auto d = direction(s, b, rng);
        const double an = inner(g, d);
        const double fd = oracle::fd_directional(m, s, d, 1e-5);
        CAPTURE(to_string(b));
        CHECK(std::abs(an - fd) <= 1e-6 * std::max(std::abs(fd), 1e-8));
      }
    }
  }
}

TEST_CASE("gradient keeps connections anti-Hermitian") {
  std::mt19937_64 rng(23);
  const auto p = params(2, 2, 1.0, 9.0);
  Model m(p, 6, Scheme::spectral);
  const auto s = random_state(6, p.side(), 2, 2, Branch::phi, 0.4, rng);
  LatticeState g;
  m.residual_energy(s, g);
  for (Block b : {Block::A1x, Block::A1y, Block::A2x, Block::A2y}) {
    for (const Mat& x : g[b]) CHECK((x + x.adjoint()).norm() <= 1e-14);
  }
}

TEST_CASE("flow_step descends and preserves structure") {
  std::mt19937_64 rng(29);
  const auto p = params(1, 1, 1.0);
  Model m(p, 8, Scheme::spectral);
  SolveOptions opt;
  auto s = random_state(8, p.side(), 1, 1, Branch::phi, 0.3, rng);
  for (Block b : {Block::A2x, Block::A2y, Block::theta2}) {
    for (Mat& x : s[b]) x.setZero();
  }
  LatticeState g;
  const double e = m.residual_energy(s, g);
  apply_mask(g, opt);
  const auto r = flow_step(m, s, e, g, 1.0, opt);
  REQUIRE(r.ok);
  CHECK(r.residual < e);
  for (const Mat& x : r.state[Block::psi]) CHECK(x.norm() == 0.0);
  for (const Mat& x : r.state[Block::A2x]) CHECK(x.norm() == 0.0);
  for (const Mat& x : r.state[Block::A1x]) CHECK((x + x.adjoint()).norm() <= 1e-14);
}

TEST_CASE("solve at an exact solution leaves it unchanged") {
  const auto p = params(1, 1, 1.0);
  Model m(p, 8, Scheme::spectral);
  const auto s = constant_solution(8, p);
  const auto r = solve(m, s, SolveOptions{});
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  for (Block b : kAllBlocks) {
    for (std::size_t i = 0; i < s[b].size(); ++i) CHECK(r.state[b][i] == s[b][i]);
  }
}

TEST_CASE("solver outcome follows the sign of tau") {
  for (double tau : {-1.0, -0.1, 0.1, 1.0}) {
    const auto p = params(1, 1, tau);
    Model m(p, 16, Scheme::spectral);
    const auto s0 = smooth_state(16, p.side(), 1, 1, Branch::phi, 2, 0.05, std::sqrt(std::abs(tau)), 42);
    SolveOptions opt;
    opt.max_iter = tau > 0 ? 5000 : 400;
    const auto r = solve(m, s0, opt);
    CAPTURE(tau);
    CHECK(r.converged == (tau > 0));
    CHECK(r.monotone);
    if (tau < 0) {
      CHECK(r.residual >= obstruction_floor(p));
      CHECK(r.residual >= tau * tau / 8 * p.vol);
    } else {
      double half = 0;
      for (const Mat& x : r.state[Block::phi]) half += 0.5 * x.squaredNorm();
      half *= r.state.spacing() * r.state.spacing();
      CHECK(std::abs(half - tau / 2 * p.vol) <= 1e-4 * p.vol);
    }
  }
}

TEST_CASE("l4 identities need a converged state") {
  std::mt19937_64 rng(31);
  const auto p = params(1, 1, 1.0);
  Model m(p, 8, Scheme::spectral);
  const auto s = random_state(8, p.side(), 1, 1, Branch::phi, 0.3, rng);
  CHECK_THROWS_AS(l4_identity_check(m, s, 1e-12, Scheme::spectral), std::runtime_error);
  const auto c = constant_solution(8, p);
  const auto l4 = l4_identity_check(m, c, 1e-12, Scheme::central);
  CHECK(l4.res1 <= 1e-12);
}

TEST_CASE("obstruction floor") {
  CHECK(obstruction_floor(params(1, 1, 1.0)) == 0.0);
  const auto p = params(1, 1, -1.0);
  CHECK(obstruction_floor(p) == doctest::Approx(p.vol / 4));
}

TEST_CASE("field dump round-trip") {
  std::mt19937_64 rng(37);
  const auto s = random_state(4, 2.5, 2, 1, Branch::psi, 0.5, rng);
  const std::string path = "vortex_dump_roundtrip.bin";
  dump_fields(s, path);
  const auto t = load_fields(path);
  std::remove(path.c_str());
  CHECK(t.N == 4);
  CHECK(t.L == 2.5);
  CHECK(t.branch == Branch::psi);
  for (Block b : kAllBlocks) {
    for (std::size_t i = 0; i < s[b].size(); ++i) CHECK(t[b][i] == s[b][i]);
  }
}

TEST_CASE("state mismatch is rejected") {
  const auto p = params(1, 1, 1.0);
  Model m(p, 8, Scheme::spectral);
  CHECK_THROWS_AS(m.ymh_energy(zero_state(6, p.side(), 1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(m.ymh_energy(zero_state(8, p.side(), 2, 1)), std::invalid_argument);
}
