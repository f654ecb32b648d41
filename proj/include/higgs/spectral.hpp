#pragma once

// Linear maps from lattice samples to evaluation-point values and first
// derivatives, with their exact adjoints.
//
// spectral: trigonometric interpolation, evaluated on a 3x refined grid so that
//   quartic densities (bandwidth 2N) are integrated exactly. The Nyquist mode is split
//   symmetrically, so real samples give real interpolants.
// central: evaluation on the lattice itself with periodic second-order
//   central differences.

#include "higgs/lattice.hpp"

#include <memory>
#include <string>
#include <vector>

namespace higgs::spectral {

using lattice::cplx;

enum class Scheme { spectral, central };
std::string to_string(Scheme s);
Scheme parse_scheme(const std::string& s);

class GridOperator {
 public:
  GridOperator(Scheme scheme, int N, double L);
  ~GridOperator();
  GridOperator(const GridOperator&) = delete;
  GridOperator& operator=(const GridOperator&) = delete;

  Scheme scheme() const { return scheme_; }
  int N() const { return N_; }
  double L() const { return L_; }
  int points_per_side() const { return M_; }
  int points() const { return M_ * M_; }
  // Quadrature weight per evaluation point.
  double weight() const { return (L_ / M_) * (L_ / M_); }

  // coarse: N*N samples. Outputs: M*M values and d/dx1, d/dx2 at the
  // evaluation points. Null outputs are skipped.
  void forward(const cplx* coarse, cplx* val, cplx* d1, cplx* d2);

  // coarse_out = V^* gval + D1^* gd1 + D2^* gd2 (Hermitian adjoints). Null
  // inputs count as zero.
  void adjoint(const cplx* gval, const cplx* gd1, const cplx* gd2, cplx* coarse_out);

  // In place: multiplies mode k by 1 / (1 + lambda(k) / k0^2), k0 = 2 pi / L,
  // with lambda the symbol of -Laplacian for this scheme. Real-structure
  // preserving and self-adjoint positive definite.
  void precondition(cplx* coarse);

 private:
  struct Plans;
  Scheme scheme_;
  int N_;
  int M_;
  double L_;
  std::unique_ptr<Plans> plans_;
  std::vector<cplx> coarse_hat_;
  std::vector<cplx> fine_hat_;
  std::vector<cplx> fine_tmp_;
  std::vector<cplx> k_;  // i * wavenumber, per fine index
  std::vector<double> smoother_;  // per coarse mode

  void pad(const cplx* coarse_hat, cplx* fine_hat) const;
  void unpad_add(const cplx* fine_hat, cplx* coarse_hat) const;
};

}  // namespace higgs::spectral
