#include "higgs/selftest.hpp"

#include "higgs/betti.hpp"
#include "higgs/series.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace higgs::selftest {

using lattice::Block;
using lattice::LatticeState;
using series::Bounds;
using series::Exponents;
using series::Series;

bool Report::passed() const {
  return std::all_of(groups.begin(), groups.end(), [](const GroupResult& g) { return g.passed; });
}

vortex::Fault parse_fault(const std::string& s) {
  if (s == "none") return vortex::Fault::none;
  if (s == "flip_deviation_sign") return vortex::Fault::flip_deviation_sign;
  throw ParameterError("unknown fault '" + s + "' (expected none or flip_deviation_sign)");
}

std::string to_string(vortex::Fault f) {
  return f == vortex::Fault::none ? "none" : "flip_deviation_sign";
}

namespace {

void record(GroupResult& g, bool ok, const std::string& what, double err = 0) {
  ++g.checks;
  g.worst = std::max(g.worst, err);
  if (ok) return;
  ++g.failures;
  g.passed = false;
  if (g.first_failure.empty()) g.first_failure = what;
}

Series random_series(std::mt19937_64& rng, Bounds b) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  std::uniform_int_distribution<int> te(-2, 2);
  std::uniform_int_distribution<int> xe(0, 2);
  std::uniform_int_distribution<int> count(1, 5);
  Series s(b);
  const int n = count(rng);
  for (int i = 0; i < n; ++i) {
    Exponents e;
    e.t = te(rng);
    e.x = xe(rng);
    e.y = xe(rng);
    s.add_term(e, series::Rational(num(rng), den(rng)));
  }
  return s;
}

GroupResult series_ring_axioms(std::mt19937_64& rng) {
  GroupResult g;
  g.name = "series_ring_axioms";
  const Bounds b{-6, 6, 4, 4};
  const Series one = Series::constant(1, b);
  const Series zero(b);
  for (int trial = 0; trial < 25; ++trial) {
    const Series p = random_series(rng, b);
    const Series q = random_series(rng, b);
    const Series r = random_series(rng, b);
    const std::string tag = " (trial " + std::to_string(trial) + ")";
    record(g, p + q == q + p, "addition commutes" + tag);
    record(g, p * q == q * p, "multiplication commutes" + tag);
    record(g, (p + q) + r == p + (q + r), "addition associates" + tag);
    record(g, (p * q) * r == p * (q * r), "multiplication associates" + tag);
    record(g, p * (q + r) == p * q + p * r, "distributivity" + tag);
    record(g, p * one == p, "unit" + tag);
    record(g, (p - p) == zero && (p + (-p)) == zero, "additive inverse" + tag);
  }
  return g;
}

// coefficient of x^n in (1+tx)^{2g} / ((1-x)(1-t^2 x)) by direct convolution:
// sum over i + j + l = n of C(2g, i) t^{i + 2l}.
std::map<int, Integer> sym_convolution(int n, int genus) {
  std::map<int, Integer> out;
  for (int i = 0; i <= std::min(n, 2 * genus); ++i) {
    for (int l = 0; i + l <= n; ++l) out[i + 2 * l] += series::binomial(2 * genus, i);
  }
  return out;
}

GroupResult macdonald_oracle() {
  GroupResult g;
  g.name = "macdonald_oracle";
  for (int genus = 0; genus <= 4; ++genus) {
    for (int n = 0; n <= 12; ++n) {
      const bool ok = betti::sym_poincare(n, genus).coeffs() == sym_convolution(n, genus);
      record(g, ok, "Sym^" + std::to_string(n) + " genus " + std::to_string(genus));
    }
  }
  return g;
}

GroupResult decomposition_identity(std::mt19937_64& rng, vortex::Fault fault) {
  GroupResult g;
  g.name = "decomposition_identity";
  g.tolerance = 1e-10;
  for (auto [r1, r2] : {std::pair{1, 1}, std::pair{2, 1}}) {
    vortex::VortexParams p;
    p.r1 = r1;
    p.r2 = r2;
    p.tau = 1.5;
    vortex::Model m(p, 8, spectral::Scheme::spectral, fault);
    for (int trial = 0; trial < 10; ++trial) {
      const auto s = lattice::random_integrable_state(8, p.side(), r1, r2, lattice::Branch::phi,
                                                      0.5, rng);
      const double err = vortex::decomposition_check(m, s);
      std::ostringstream what;
      what << "ranks (" << r1 << "," << r2 << ") trial " << trial << ": " << err;
      record(g, err <= g.tolerance, what.str(), err);
    }
  }
  return g;
}

LatticeState block_direction(const LatticeState& s, Block b, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  LatticeState d = lattice::zero_like(s);
  auto [rows, cols] = s.shape(b);
  for (auto& m : d[b]) {
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        const double re = n(rng);
        const double im = n(rng);
        m(i, j) = lattice::cplx(re, im);
      }
    }
    if (lattice::is_connection(b)) m = lattice::anti_hermitian_part(m);
  }
  return d;
}

GroupResult gradient_check(std::mt19937_64& rng) {
  GroupResult g;
  g.name = "gradient_check";
  g.tolerance = 1e-6;
  vortex::VortexParams p;
  p.r1 = 2;
  p.r2 = 1;
  p.tau = 1.3;
  for (auto branch : {lattice::Branch::phi, lattice::Branch::psi}) {
    vortex::Model m(p, 6, spectral::Scheme::spectral);
    const auto s = lattice::random_state(6, p.side(), 2, 1, branch, 0.3, rng);
    for (Block b : lattice::kAllBlocks) {
      const auto d = block_direction(s, b, rng);
      const double err = directional_gradient_error(m, s, d, 1e-5);
      record(g, err <= g.tolerance,
             lattice::to_string(b) + " branch " + lattice::to_string(branch), err);
    }
  }
  return g;
}

}  // namespace

double directional_gradient_error(vortex::Model& m, const LatticeState& s, const LatticeState& d,
                                  double h) {
  LatticeState grad;
  m.residual_energy(s, grad);
  const double analytic = lattice::inner(grad, d);
  const double fd =
      (m.residual_energy(lattice::axpy(s, h, d)) - m.residual_energy(lattice::axpy(s, -h, d))) /
      (2.0 * h);
  const double scale = std::max({std::abs(analytic), std::abs(fd), 1e-12});
  return std::abs(analytic - fd) / scale;
}

Report run(std::uint64_t seed, vortex::Fault fault) {
  Report r;
  r.seed = seed;
  r.fault = to_string(fault);
  std::mt19937_64 rng(seed);
  r.groups.push_back(series_ring_axioms(rng));
  r.groups.push_back(macdonald_oracle());
  r.groups.push_back(decomposition_identity(rng, fault));
  r.groups.push_back(gradient_check(rng));
  return r;
}

nlohmann::ordered_json to_json(const Report& r) {
  nlohmann::ordered_json groups = nlohmann::ordered_json::array();
  for (const auto& g : r.groups) {
    groups.push_back({{"name", g.name},
                      {"passed", g.passed},
                      {"checks", g.checks},
                      {"failures", g.failures},
                      {"worst_error", g.worst},
                      {"tolerance", g.tolerance},
                      {"first_failure", g.first_failure.empty() ? nullptr
                                                                : nlohmann::ordered_json(g.first_failure)}});
  }
  return {{"seed", r.seed}, {"fault", r.fault}, {"passed", r.passed()}, {"groups", groups}};
}

}  // namespace higgs::selftest
