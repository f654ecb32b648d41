#pragma once

// Poincare polynomials of the moduli space of tau-stable rank-2 Higgs pairs:
// symmetric products, the holomorphic-pairs locus N_0, the fixed-point strata
// N_d, their Morse sum, and the two-variable generating-function extraction.

#include "higgs/moduli_params.hpp"
#include "higgs/series.hpp"

#include <map>
#include <string>
#include <vector>

namespace higgs::betti {

// Polynomial in t with nonnegative integer coefficients.
class PoincarePolynomial {
 public:
  PoincarePolynomial() = default;
  explicit PoincarePolynomial(std::map<int, Integer> coeffs);

  // Validates that s only involves t with nonnegative exponents and
  // nonnegative integer coefficients; throws IntegrityError otherwise.
  static PoincarePolynomial from_series(const series::Series& s, const std::string& what);

  const std::map<int, Integer>& coeffs() const { return coeffs_; }
  Integer coefficient(int exponent) const;
  int degree() const;
  int lowest_degree() const;
  Integer total_betti() const;
  bool is_palindromic() const;

  PoincarePolynomial shifted(int by) const;
  std::string to_string() const;

  friend PoincarePolynomial operator+(const PoincarePolynomial& a, const PoincarePolynomial& b);
  friend PoincarePolynomial operator*(const PoincarePolynomial& a, const PoincarePolynomial& b);
  bool operator==(const PoincarePolynomial&) const = default;

 private:
  std::map<int, Integer> coeffs_;  // no zero entries
};

// Signed coefficient difference a - b, zero entries dropped.
std::map<int, Integer> difference(const PoincarePolynomial& a, const PoincarePolynomial& b);

// Truncation window used by every Betti computation for p.
series::Bounds working_bounds(const ModuliParams& p);

// coeff_{x^n} (1+tx)^{2g} / ((1-x)(1-t^2 x))
PoincarePolynomial sym_poincare(int n, int genus);

// Holomorphic-pairs contribution (the theta = 0 minimum of the moment map).
PoincarePolynomial pairs_poincare_n0(const ModuliParams& p);

// t^{index} P(Sym^{n1} M) P(Sym^{n2} M) for stratum d.
PoincarePolynomial stratum_poincare(const ModuliParams& p, int d);

// pairs_poincare_n0 + sum over strata.
PoincarePolynomial total_poincare(const ModuliParams& p);

enum class YConvention { as_printed, corrected };
std::string to_string(YConvention c);
YConvention parse_y_convention(const std::string& s);

struct ExtractionReport {
  YConvention convention = YConvention::corrected;
  PoincarePolynomial value;
  bool matches = false;
  std::map<int, Integer> diff;  // value - total_poincare
};

// Coefficient of x^{k+2g} y^{k+2g} of the two-part generating function.
// With as_printed, the strata carry y^{d-2g}; corrected uses y^{d+2g}.
PoincarePolynomial theorem_extraction(const ModuliParams& p, YConvention convention);

ExtractionReport extraction_check(const ModuliParams& p, YConvention convention);

}  // namespace higgs::betti
