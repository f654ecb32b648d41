#pragma once

// Fixed-point components N_d of the circle action on the Higgs-pair moduli
// space: degree range, Morse index, dimension, and the divisor-pair model.

#include "higgs/moduli_params.hpp"
#include "higgs/stability.hpp"

#include <map>
#include <vector>

namespace higgs::strata {

struct StratumDescriptor {
  int d = 0;      // degree of the line subbundle L
  int n1 = 0;     // Sym exponent carrying the zeros of psi: -2d+k+2g-2
  int n2 = 0;     // Sym exponent carrying the zeros of s:   k-d
  int index = 0;  // 2(2d+g-k-1)
  int dim = 0;    // complex dimension n1+n2

  bool operator==(const StratumDescriptor&) const = default;
};

// Effective divisor over abstract point labels: label -> multiplicity (>= 1).
using Divisor = std::map<int, int>;

int divisor_degree(const Divisor& div);

struct DivisorPair {
  Divisor zeros_psi;  // D, degree n1
  Divisor zeros_s;    // D', degree n2
};

// floor(m) with m = min{k, g-1+k/2}.
int floor_m(const ModuliParams& p);

// floor(tau_bar)+1 <= d <= floor(m).
std::vector<int> d_range(const ModuliParams& p);

// Throws ParameterError for d outside d_range.
StratumDescriptor stratum_descriptor(const ModuliParams& p, int d);

// Degree of O(D')^2 (x) O(D)^{-1} (x) K_M, which equals k on every valid pair.
// Throws ParameterError when the pair matches no stratum of p.
int divisor_bundle_map(const DivisorPair& pair, const ModuliParams& p);

// Split model L + L^{-1} det E with deg L = d, psi vanishing on D and s in the
// second summand vanishing on D'. Only requires n1, n2 >= 0 and matching
// divisor degrees; whether d lies in d_range is left to the stability checker.
stability::SplitHiggsPairModel fixed_point_model(const DivisorPair& pair, const ModuliParams& p,
                                                 int d);

}  // namespace higgs::strata
