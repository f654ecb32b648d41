#pragma once

// Built-in invariant suite behind `selftest`: series ring axioms, the
// symmetric-product formula against a direct convolution, the energy
// decomposition, and the analytic gradient against finite differences.

#include "higgs/vortex.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace higgs::selftest {

struct GroupResult {
  std::string name;
  bool passed = true;
  int checks = 0;
  int failures = 0;
  double worst = 0;  // largest error seen; 0 for exact groups
  double tolerance = 0;
  std::string first_failure;
};

struct Report {
  std::uint64_t seed = 0;
  std::string fault;
  std::vector<GroupResult> groups;
  bool passed() const;
};

// fault is applied to the decomposition group only.
Report run(std::uint64_t seed, vortex::Fault fault = vortex::Fault::none);

nlohmann::ordered_json to_json(const Report& r);

vortex::Fault parse_fault(const std::string& s);
std::string to_string(vortex::Fault f);

// Relative error between <grad, d> and the central difference
// (E(s + h d) - E(s - h d)) / 2h along a direction d supported on one block.
double directional_gradient_error(vortex::Model& m, const lattice::LatticeState& s,
                                  const lattice::LatticeState& d, double h);

}  // namespace higgs::selftest
