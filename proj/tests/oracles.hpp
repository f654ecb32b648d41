#pragma once

// Reference computations written without the library's series or lattice
// machinery. Tests compare library output against these.

#include "higgs/lattice.hpp"
#include "higgs/moduli_params.hpp"
#include "higgs/vortex.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

namespace oracle {

using Integer = boost::multiprecision::cpp_int;
using Poly = std::map<int, Integer>;  // exponent -> coefficient, zeros dropped

inline Integer choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  Integer r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

inline Poly clean(Poly p) {
  for (auto it = p.begin(); it != p.end();) it = it->second == 0 ? p.erase(it) : std::next(it);
  return p;
}

// P(Sym^n M): sum over i + j + l = n of C(2g, i) t^{i + 2l}; the j index runs
// over the 1/(1-x) factor and contributes t^0.
inline Poly sym_product(int n, int g) {
  Poly out;
  for (int i = 0; i <= n; ++i) {
    for (int l = 0; i + l <= n; ++l) out[i + 2 * l] += choose(2 * g, i);
  }
  return clean(out);
}

inline Poly multiply(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) out[ea + eb] += ca * cb;
  }
  return clean(out);
}

inline Poly shift(const Poly& a, int by) {
  Poly out;
  for (const auto& [e, c] : a) out[e + by] = c;
  return out;
}

inline Poly add(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [e, c] : b) out[e] += c;
  return clean(out);
}

// Laurent polynomial division by (1 - t^2), eliminating from the lowest
// exponent upwards. Throws when the remainder is nonzero.
inline Poly divide_one_minus_t2(Poly num) {
  num = clean(num);
  Poly q;
  if (num.empty()) return q;
  const int top = std::prev(num.end())->first;
  while (!num.empty()) {
    const auto [e, c] = *num.begin();
    if (e > top - 2) throw std::runtime_error("nonzero remainder");
    q[e] += c;
    num[e] -= c;
    num[e + 2] += c;
    num = clean(num);
  }
  return clean(q);
}

// Holomorphic-pairs polynomial by brute-force expansion: coefficient of x^K,
// K = k - 1 - floor(tau_bar), in
//   (1+t)^{2g} (1+tx)^{2g} / ((1-x)(1-t^2 x)) * [t^{2K}/(1 - t^{-2}x) - t^{2(g+1-k+2f)}/(1 - t^4 x)]
// followed by division by (1 - t^2).
inline Poly pairs_n0(int g, int k, int f) {
  const int K = k - 1 - f;
  Poly num;
  for (int a = 0; a <= K; ++a) {          // (1+tx)^{2g}
    for (int c = 0; a + c <= K; ++c) {    // 1/(1 - t^2 x)
      for (int e = 0; a + c + e <= K; ++e) {  // geometric bracket factor; 1/(1-x) takes the rest
        const Integer w = choose(2 * g, a);
        num[a + 2 * c + 2 * K - 2 * e] += w;
        num[a + 2 * c + 2 * (g + 1 - k + 2 * f) + 4 * e] -= w;
      }
    }
  }
  Poly prefactor;
  for (int i = 0; i <= 2 * g; ++i) prefactor[i] = choose(2 * g, i);
  return divide_one_minus_t2(multiply(prefactor, clean(num)));
}

// Every integer d with floor(tau_bar) < d <= min(k, g - 1 + k/2), by scanning.
// For integer d, d >= floor(tau_bar) + 1 is the same as d > tau_bar.
inline std::vector<int> d_scan(int g, int k, const higgs::Rational& tau_bar) {
  std::vector<int> out;
  for (int d = -100; d <= 100; ++d) {
    if (higgs::Rational(d) > tau_bar && d <= k && 2 * d <= 2 * g - 2 + k) out.push_back(d);
  }
  return out;
}

// YMH on a rank-(1,1) state with periodic central differences, coded from the
// definition site by site.
inline double ymh_rank1_central(const higgs::lattice::LatticeState& s, double tau, double tau_p) {
  using C = std::complex<double>;
  using higgs::lattice::Block;
  const int n = s.N;
  const double a = s.spacing();
  const C I(0, 1);
  auto at = [&](Block b, int i, int j) { return s[b][((i + n) % n) * n + (j + n) % n](0, 0); };
  auto cx = [&](int e, int i, int j) {
    const Block ax = e == 1 ? Block::A1x : Block::A2x;
    const Block th = e == 1 ? Block::theta1 : Block::theta2;
    return at(ax, i, j) + at(th, i, j) + std::conj(at(th, i, j));
  };
  auto cy = [&](int e, int i, int j) {
    const Block ay = e == 1 ? Block::A1y : Block::A2y;
    const Block th = e == 1 ? Block::theta1 : Block::theta2;
    return at(ay, i, j) + I * (at(th, i, j) - std::conj(at(th, i, j)));
  };
  double total = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double dens = 0;
      for (int e : {1, 2}) {
        const C r = (cy(e, i + 1, j) - cy(e, i - 1, j)) / (2 * a) -
                    (cx(e, i, j + 1) - cx(e, i, j - 1)) / (2 * a);
        dens += std::norm(r);
      }
      const C phi = at(Block::phi, i, j);
      const C psi = at(Block::psi, i, j);
      const C d1phi = (at(Block::phi, i + 1, j) - at(Block::phi, i - 1, j)) / (2 * a) +
                      (cx(1, i, j) - cx(2, i, j)) * phi;
      const C d2phi = (at(Block::phi, i, j + 1) - at(Block::phi, i, j - 1)) / (2 * a) +
                      (cy(1, i, j) - cy(2, i, j)) * phi;
      const C d1psi = (at(Block::psi, i + 1, j) - at(Block::psi, i - 1, j)) / (2 * a) +
                      (cx(2, i, j) - cx(1, i, j)) * psi;
      const C d2psi = (at(Block::psi, i, j + 1) - at(Block::psi, i, j - 1)) / (2 * a) +
                      (cy(2, i, j) - cy(1, i, j)) * psi;
      dens += std::norm(d1phi) + std::norm(d2phi) + std::norm(d1psi) + std::norm(d2psi);
      const double m1 = std::norm(phi) - std::norm(psi) - tau;
      const double m2 = std::norm(psi) - std::norm(phi) - tau_p;
      dens += 0.25 * m1 * m1 + 0.25 * m2 * m2;
      total += dens * a * a;
    }
  }
  return total;
}

// Central-difference directional derivative of the residual along d.
inline double fd_directional(higgs::vortex::Model& m, const higgs::lattice::LatticeState& s,
                             const higgs::lattice::LatticeState& d, double h) {
  using higgs::lattice::axpy;
  return (m.residual_energy(axpy(s, h, d)) - m.residual_energy(axpy(s, -h, d))) / (2 * h);
}

}  // namespace oracle
