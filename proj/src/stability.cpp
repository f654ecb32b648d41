#include "higgs/stability.hpp"

namespace higgs::stability {

std::string to_string(SectionPlacement s) {
  switch (s) {
    case SectionPlacement::in_L: return "in_L";
    case SectionPlacement::in_Lc: return "in_Lc";
    case SectionPlacement::zero: return "zero";
  }
  return "?";
}

SectionPlacement parse_section_placement(const std::string& s) {
  if (s == "in_L") return SectionPlacement::in_L;
  if (s == "in_Lc") return SectionPlacement::in_Lc;
  if (s == "zero") return SectionPlacement::zero;
  throw ModelError("unknown s_placement '" + s + "' (expected in_L, in_Lc or zero)");
}

std::string to_string(Subobject s) {
  switch (s) {
    case Subobject::L: return "L";
    case Subobject::Lc: return "Lc";
    case Subobject::E: return "E";
  }
  return "?";
}

namespace {

int degree_of(const SplitHiggsPairModel::Divisor& div, const char* name) {
  int total = 0;
  for (const auto& [point, mult] : div) {
    if (mult < 1) {
      throw ModelError(std::string(name) + " divisor has multiplicity " + std::to_string(mult) +
                       " at point " + std::to_string(point));
    }
    total += mult;
  }
  return total;
}

}  // namespace

SplitHiggsPairModel SplitHiggsPairModel::create(int genus, int degree, int deg_L, bool psi_nonzero,
                                                bool theta_zero, SectionPlacement s,
                                                std::optional<Divisor> psi_divisor,
                                                std::optional<Divisor> s_divisor) {
  SplitHiggsPairModel m;
  m.genus_ = genus;
  m.degree_ = degree;
  m.deg_L_ = deg_L;
  m.psi_nonzero_ = psi_nonzero;
  m.theta_zero_ = theta_zero;
  m.section_ = s;

  if (theta_zero && psi_nonzero) throw ModelError("theta_zero and psi_nonzero are contradictory");
  if (psi_nonzero && m.deg_psi_bundle() < 0) {
    throw ModelError("psi is a nonzero section of a bundle of degree " +
                     std::to_string(m.deg_psi_bundle()));
  }
  if (s == SectionPlacement::in_L && deg_L < 0) {
    throw ModelError("s is a nonzero section of L with deg L = " + std::to_string(deg_L));
  }
  if (s == SectionPlacement::in_Lc && m.deg_Lc() < 0) {
    throw ModelError("s is a nonzero section of Lc with deg Lc = " + std::to_string(m.deg_Lc()));
  }
  // psi s = 0 with s a frame of L off its zeros forces psi = 0.
  if (psi_nonzero && s == SectionPlacement::in_L) {
    throw ModelError("psi must vanish when s is a section of L");
  }
  if (psi_divisor) {
    if (!psi_nonzero) throw ModelError("psi divisor given but psi = 0");
    if (degree_of(*psi_divisor, "psi") != m.deg_psi_bundle()) {
      throw ModelError("psi divisor degree does not match deg(L^-2 det E K) = " +
                       std::to_string(m.deg_psi_bundle()));
    }
  }
  if (s_divisor) {
    if (s == SectionPlacement::zero) throw ModelError("s divisor given but s = 0");
    const int expected = s == SectionPlacement::in_L ? deg_L : m.deg_Lc();
    if (degree_of(*s_divisor, "s") != expected) {
      throw ModelError("s divisor degree does not match the degree " + std::to_string(expected) +
                       " of the summand containing s");
    }
  }
  m.psi_divisor_ = std::move(psi_divisor);
  m.s_divisor_ = std::move(s_divisor);
  return m;
}

std::vector<InvariantSubbundle> invariant_subbundles(const SplitHiggsPairModel& m) {
  std::vector<InvariantSubbundle> out;
  if (!m.psi_nonzero()) out.push_back({Subobject::L, m.deg_L()});
  out.push_back({Subobject::Lc, m.deg_Lc()});
  return out;
}

StabilityVerdict is_tau_stable_split(const SplitHiggsPairModel& m, const Rational& tau_bar) {
  StabilityVerdict v;
  v.zero_section_advisory = m.section() == SectionPlacement::zero;
  const auto invariant = invariant_subbundles(m);

  auto fail = [&](Subobject f, int condition, const Rational& slope, const std::string& text) {
    v.stable = false;
    v.witness = Witness{f, condition, slope, tau_bar, text};
    return v;
  };

  // Condition (2) first: for the fixed-point models one degree below the
  // strata range it is the quotient inequality that singles out Lc.
  for (const auto& f : invariant) {
    const bool contains_s =
        m.section() == SectionPlacement::zero ||
        (m.section() == SectionPlacement::in_L && f.which == Subobject::L) ||
        (m.section() == SectionPlacement::in_Lc && f.which == Subobject::Lc);
    if (!contains_s) continue;
    Rational quotient(m.degree() - f.degree);
    if (!(quotient > tau_bar)) {
      return fail(f.which, 2, quotient,
                  "mu(E/" + to_string(f.which) + ")=" + rational_string(quotient) +
                      " is not above tau_bar=" + rational_string(tau_bar));
    }
  }
  for (const auto& f : invariant) {
    Rational slope(f.degree);
    if (!(slope < tau_bar)) {
      return fail(f.which, 1, slope,
                  "mu(" + to_string(f.which) + ")=" + rational_string(slope) +
                      " is not below tau_bar=" + rational_string(tau_bar));
    }
  }
  const Rational mu_e(m.degree(), 2);
  if (!(mu_e < tau_bar)) {
    return fail(Subobject::E, 1, mu_e,
                "mu(E)=" + rational_string(mu_e) + " is not below tau_bar=" +
                    rational_string(tau_bar));
  }
  v.stable = true;
  return v;
}

bool check_higgs_stability(const SplitHiggsPairModel& m) {
  const Rational mu_e(m.degree(), 2);
  for (const auto& f : invariant_subbundles(m)) {
    if (!(Rational(f.degree) < mu_e)) return false;
  }
  return true;
}

}  // namespace higgs::stability
