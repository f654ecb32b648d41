#pragma once

// Doubly-coupled tau-vortex equations on a flat torus with degree-0 trivial
// bundles, and their Higgs-pair specialisation (E2 trivial line bundle with
// zero Higgs field, psi = 0).
//
// Conventions (omega = dx1^dx2, Lambda omega = 1, z = x1 + i x2):
//   theta_i = Phi_i dz, |dz|^2 = 2
//   Hitchin-Simpson connection  C_1 = A_1 + Phi + Phi^*,  C_2 = A_2 + i(Phi - Phi^*)
//   R = d1 C_2 - d2 C_1 + [C_1, C_2]
//   |D''phi|^2 = 1/2 |(nabla_1 + i nabla_2) phi|^2 + 2 |Phi_1 phi - phi Phi_2|^2
// with nabla built from the unitary parts A only.

#include "higgs/lattice.hpp"
#include "higgs/moduli_params.hpp"
#include "higgs/spectral.hpp"

#include <string>
#include <vector>

namespace higgs::vortex {

using lattice::Block;
using lattice::LatticeState;
using spectral::Scheme;

struct VortexParams {
  int r1 = 1;
  int r2 = 1;
  int d1 = 0;
  int d2 = 0;
  double vol = 4.0 * 3.14159265358979323846 * 3.14159265358979323846;
  double tau = 1.0;

  // tau r1 + tau' r2 = (4 pi / vol)(d1 + d2).
  double tau_prime() const;
  double side() const;
};

// Throws ParameterError: vol <= 0, ranks outside [1, kMaxRank], nonzero degrees.
void validate(const VortexParams& p);

// sigma = 2 r2 / ((r1 + r2) tau / 4pi - (d1 + d2)/vol). Throws ParameterError
// when the denominator is not positive.
double sigma_of(const VortexParams& p);

struct DerivedConstants {
  double sigma = 0;
  double c = 0;          // (2pi / (vol sigma)) deg F / rank F
  double c_shifted = 0;  // c - 4pi/sigma
};
DerivedConstants derived_constants(const VortexParams& p);

// Injected defects for mutation smoke tests of the self-test.
enum class Fault { none, flip_deviation_sign };

struct ResidualBreakdown {
  double eq1 = 0;          // integral of |i Lambda R1 + ... - tau/2|^2
  double eq2 = 0;
  double holomorphicity = 0;  // 2|D''phi|^2 + 2|D''psi|^2 integrated
  double eq1_max = 0;      // pointwise Frobenius maxima at evaluation points
  double eq2_max = 0;
  double holomorphicity_max = 0;  // max of |D''phi| and |D''psi|
  double theta_s_sup = 0;  // max |Phi_1 phi - phi Phi_2| (and mirror)
  double moment_map = 0;   // ||theta_1||^2_{L^2} with |dz|^2 = 2
  double half_section_l2 = 0;  // 1/2 integral of |s|^2
};

struct L4Residuals {
  double res1 = 0;
  double res2 = 0;
};

class Model {
 public:
  Model(VortexParams p, int N, Scheme scheme, Fault fault = Fault::none);

  const VortexParams& params() const { return p_; }
  Scheme scheme() const { return ops_.scheme(); }
  int N() const { return ops_.N(); }
  double side() const { return ops_.L(); }

  double ymh_energy(const LatticeState& s);
  double residual_energy(const LatticeState& s);
  // Euclidean gradient with respect to the lattice samples. Connection blocks
  // are projected onto anti-Hermitian directions.
  double residual_energy(const LatticeState& s, LatticeState& grad);

  // YMH - residual on configurations whose Higgs fields are not holomorphic:
  // -2 Re <B1 phi - phi B2, phi> - 2 Re <B2 psi - psi B1, psi> integrated,
  // B = (d1 + i d2) Phi + [A_1 + i A_2, Phi].
  double integrability_pairing(const LatticeState& s);
  // Integral of |B1|^2 + |B2|^2; zero iff both Higgs fields are holomorphic.
  double integrability_defect(const LatticeState& s);

  ResidualBreakdown breakdown(const LatticeState& s);

  // Integrated L4-type identities for the Higgs pair (E1, theta1, s = phi):
  //   res1 = |int 2|del s|^2 + 2|theta^* s|^2 + |s|^4 - tau |s|^2|
  //   res2 = |int 2|del theta|^2 + 2|[theta, theta^*]|^2 + 2|s^* theta|^2|
  // with |del s|^2 = 1/2 |(nabla_1 - i nabla_2) s|^2 and the form norms above.
  L4Residuals l4_terms(const LatticeState& s);

  // Steepest-descent direction in the smoothed metric: -S grad / a^2, where S
  // damps mode k by 1 / (1 + |k|^2 / k0^2). Plain gradient descent in an
  // H^1-type inner product.
  LatticeState descent_direction(const LatticeState& grad);

 private:
  VortexParams p_;
  spectral::GridOperator ops_;
  Fault fault_;

  void check_state(const LatticeState& s) const;
};

// |ymh - residual| / (1 + ymh). Degree-0 topological terms vanish.
double decomposition_check(Model& m, const LatticeState& s);

enum class Coupling { higgs_pair, doubly_coupled };
std::string to_string(Coupling c);
Coupling parse_coupling(const std::string& s);

struct SolveOptions {
  double tol = 1e-14;
  int max_iter = 20000;
  Coupling coupling = Coupling::higgs_pair;
  double armijo = 1e-4;
  int max_backtracks = 60;
  // Trial step = growth * last accepted step. Growth and backtrack factors
  // that are not reciprocal keep the step from settling at exactly 2 / lambda
  // for the stiffest mode, where that mode would oscillate without decaying.
  double step_growth = 1.25;
  double backtrack = 0.5;
};

// Zeroes the gradient components of frozen blocks: the inactive morphism, and
// the E2 connection and Higgs field under the Higgs-pair coupling.
void apply_mask(LatticeState& grad, const SolveOptions& opt);

struct StepResult {
  LatticeState state;
  double residual = 0;
  double step = 0;     // accepted step, 0 on failure
  bool ok = false;
};

// One step along descent_direction(grad) with Armijo backtracking from the
// trial step. grad must be the masked gradient at s.
StepResult flow_step(Model& m, const LatticeState& s, double residual, const LatticeState& grad,
                     double trial_step, const SolveOptions& opt);

struct SolveResult {
  LatticeState state;
  double residual = 0;
  bool converged = false;
  int iterations = 0;
  double moment_map_value = 0;
  ResidualBreakdown diagnostics;
  std::string stop_reason;
  bool monotone = true;  // residual never increased along the run
};

// Never throws on non-convergence.
SolveResult solve(Model& m, LatticeState s0, const SolveOptions& opt);

// Requires m.residual_energy(s) <= tol; throws std::runtime_error otherwise.
// The integrands are evaluated with the operators of `evaluation`.
L4Residuals l4_identity_check(Model& m, const LatticeState& s, double tol, Scheme evaluation);

// Lower bound on the residual for tau < 0 at degree 0, from integrating the
// trace of the first equation: int |Q1|^2 >= tau^2 r1 vol / 4. Zero for tau >= 0.
double obstruction_floor(const VortexParams& p);

}  // namespace higgs::vortex
