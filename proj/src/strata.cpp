#include "higgs/strata.hpp"

#include <algorithm>

namespace higgs::strata {

int divisor_degree(const Divisor& div) {
  int total = 0;
  for (const auto& [point, mult] : div) {
    if (mult < 1) {
      throw ParameterError("divisor multiplicity must be >= 1 (point " + std::to_string(point) +
                           ")");
    }
    total += mult;
  }
  return total;
}

int floor_m(const ModuliParams& p) {
  // k odd, so floor(g - 1 + k/2) = g - 1 + (k-1)/2; for even k the same
  // expression is still exact.
  const int half_floor = static_cast<int>(floor_of(Rational(p.degree, 2)));
  return std::min(p.degree, p.genus - 1 + half_floor);
}

std::vector<int> d_range(const ModuliParams& p) {
  require_valid(p);
  std::vector<int> out;
  const int lo = static_cast<int>(floor_of(p.tau_bar)) + 1;
  for (int d = lo; d <= floor_m(p); ++d) out.push_back(d);
  return out;
}

namespace {

StratumDescriptor describe(const ModuliParams& p, int d) {
  StratumDescriptor s;
  s.d = d;
  s.n1 = -2 * d + p.degree + 2 * p.genus - 2;
  s.n2 = p.degree - d;
  s.index = 2 * (2 * d + p.genus - p.degree - 1);
  s.dim = s.n1 + s.n2;
  return s;
}

}  // namespace

StratumDescriptor stratum_descriptor(const ModuliParams& p, int d) {
  const auto range = d_range(p);
  if (std::find(range.begin(), range.end(), d) == range.end()) {
    throw ParameterError("stratum d=" + std::to_string(d) + " outside the admissible range [" +
                         std::to_string(static_cast<int>(floor_of(p.tau_bar)) + 1) + ", " +
                         std::to_string(floor_m(p)) + "]");
  }
  StratumDescriptor s = describe(p, d);
  if (s.n1 < 0 || s.n2 < 0) {
    throw IntegrityError("stratum d=" + std::to_string(d) + " has negative symmetric-product exponent");
  }
  return s;
}

int divisor_bundle_map(const DivisorPair& pair, const ModuliParams& p) {
  const int deg_d = divisor_degree(pair.zeros_psi);
  const int deg_dp = divisor_degree(pair.zeros_s);
  const int d = p.degree - deg_dp;
  const auto range = d_range(p);
  if (std::find(range.begin(), range.end(), d) == range.end()) {
    throw ParameterError("deg D'=" + std::to_string(deg_dp) + " gives d=" + std::to_string(d) +
                         " outside the admissible range");
  }
  const StratumDescriptor s = describe(p, d);
  if (deg_d != s.n1) {
    throw ParameterError("deg D=" + std::to_string(deg_d) + " does not match n1=" +
                         std::to_string(s.n1) + " for d=" + std::to_string(d));
  }
  return 2 * deg_dp - deg_d + (2 * p.genus - 2);
}

stability::SplitHiggsPairModel fixed_point_model(const DivisorPair& pair, const ModuliParams& p,
                                                 int d) {
  const StratumDescriptor s = describe(p, d);
  if (s.n1 < 0 || s.n2 < 0) {
    throw ParameterError("no fixed-point model for d=" + std::to_string(d) + ": n1=" +
                         std::to_string(s.n1) + ", n2=" + std::to_string(s.n2));
  }
  if (divisor_degree(pair.zeros_psi) != s.n1 || divisor_degree(pair.zeros_s) != s.n2) {
    throw ParameterError("divisor degrees (" + std::to_string(divisor_degree(pair.zeros_psi)) +
                         ", " + std::to_string(divisor_degree(pair.zeros_s)) +
                         ") do not match stratum d=" + std::to_string(d));
  }
  return stability::SplitHiggsPairModel::create(p.genus, p.degree, d, /*psi_nonzero=*/true,
                                                /*theta_zero=*/false,
                                                stability::SectionPlacement::in_Lc,
                                                pair.zeros_psi, pair.zeros_s);
}

}  // namespace higgs::strata
