#pragma once

// tau-stability of explicit split rank-2 Higgs pairs E = L + Lc,
// Lc = L^{-1} (x) det E, with lower-triangular Higgs field theta = [[0,0],[psi,0]].
//
// Only the summand line subbundles (and E itself) are tested as subobjects.
// General line subbundles of the split bundle need section-level data.

#include "higgs/moduli_params.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace higgs::stability {

enum class SectionPlacement { in_L, in_Lc, zero };

std::string to_string(SectionPlacement s);
SectionPlacement parse_section_placement(const std::string& s);

enum class Subobject { L, Lc, E };

std::string to_string(Subobject s);

class ModelError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

class SplitHiggsPairModel {
 public:
  using Divisor = std::map<int, int>;

  // Throws ModelError when the flags are inconsistent or a required
  // holomorphic section would have negative degree.
  static SplitHiggsPairModel create(int genus, int degree, int deg_L, bool psi_nonzero,
                                    bool theta_zero, SectionPlacement s,
                                    std::optional<Divisor> psi_divisor = std::nullopt,
                                    std::optional<Divisor> s_divisor = std::nullopt);

  int genus() const { return genus_; }
  int degree() const { return degree_; }
  int deg_L() const { return deg_L_; }
  int deg_Lc() const { return degree_ - deg_L_; }
  // Degree of L^{-2} (x) det E (x) K_M, where psi lives.
  int deg_psi_bundle() const { return degree_ - 2 * deg_L_ + 2 * genus_ - 2; }
  bool psi_nonzero() const { return psi_nonzero_; }
  bool theta_zero() const { return theta_zero_; }
  SectionPlacement section() const { return section_; }
  const std::optional<Divisor>& psi_divisor() const { return psi_divisor_; }
  const std::optional<Divisor>& s_divisor() const { return s_divisor_; }

 private:
  SplitHiggsPairModel() = default;

  int genus_ = 0;
  int degree_ = 0;
  int deg_L_ = 0;
  bool psi_nonzero_ = false;
  bool theta_zero_ = true;
  SectionPlacement section_ = SectionPlacement::zero;
  std::optional<Divisor> psi_divisor_;
  std::optional<Divisor> s_divisor_;
};

struct InvariantSubbundle {
  Subobject which;
  Integer degree;  // line bundle, so slope == degree
};

// Higgs-invariant summands among {L, Lc}. theta(Lc) = 0 always; theta(L) lies
// in Lc (x) K_M, so L is invariant iff psi = 0.
std::vector<InvariantSubbundle> invariant_subbundles(const SplitHiggsPairModel& m);

struct Witness {
  Subobject subobject;
  int condition;       // 1: mu(F) < tau_bar, 2: mu(E/F) > tau_bar
  Rational slope;      // mu(F) for condition 1, mu(E/F) for condition 2
  Rational threshold;  // tau_bar
  std::string description;
};

struct StabilityVerdict {
  bool stable = false;
  std::optional<Witness> witness;  // present iff !stable
  // A tau-stable pair cannot have s = 0 (an analytic consequence of the
  // vortex equation); reported separately and never folded into `stable`.
  bool zero_section_advisory = false;
};

StabilityVerdict is_tau_stable_split(const SplitHiggsPairModel& m, const Rational& tau_bar);

// Every invariant summand has slope < k/2.
bool check_higgs_stability(const SplitHiggsPairModel& m);

}  // namespace higgs::stability
