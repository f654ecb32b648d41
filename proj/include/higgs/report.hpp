#pragma once

// Machine-readable reports for every subcommand. Exact quantities are strings
// ("27/10", "-3"); polynomials are ordered [exponent, "coefficient"] pairs;
// floating-point values are JSON numbers printed with round-trip precision.

#include "higgs/betti.hpp"
#include "higgs/stability.hpp"
#include "higgs/strata.hpp"
#include "higgs/vortex.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace higgs::report {

using json = nlohmann::ordered_json;

json polynomial_json(const betti::PoincarePolynomial& p);
json coefficient_map_json(const std::map<int, Integer>& coeffs);
json params_json(const ModuliParams& p);

json betti_report(const ModuliParams& p, betti::YConvention convention);
json strata_report(const ModuliParams& p);

// Reads {g, k, dL, psi_nonzero, theta_zero, s_placement, tau_bar}; optional
// psi_divisor / s_divisor as [[point, multiplicity], ...]. Throws
// ParameterError on missing or mistyped fields.
struct StabilityQuery {
  stability::SplitHiggsPairModel model;
  Rational tau_bar;
};
StabilityQuery parse_stability_query(const json& j);
json stability_report(const StabilityQuery& q);

struct VortexRun {
  vortex::VortexParams params;
  int grid = 16;
  std::uint64_t seed = 0;
  lattice::Branch branch = lattice::Branch::phi;
  spectral::Scheme scheme = spectral::Scheme::spectral;
  vortex::SolveOptions options;
  double init_amplitude = 0.05;
  int init_modes = 2;
};

// Builds the seeded smooth start, solves, and reports. The state is returned
// through `final_state` when non-null.
json vortex_report(const VortexRun& run, lattice::LatticeState* final_state = nullptr);

json error_json(const std::string& kind, const std::string& message);

enum class Format { json, csv, pretty };
Format parse_format(const std::string& s);

// csv: one "path,value" row per leaf, dotted paths, array indices inline.
// pretty: indented "key: value" lines. Both are deterministic.
std::string render(const json& j, Format f);

}  // namespace higgs::report
