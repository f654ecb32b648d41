#pragma once

// Parameters of the rank-2 Higgs-pair moduli problem over a genus-g curve,
// with the exact normalized stability parameter tau_bar = (Vol/4pi) tau.

#include "higgs/series.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace higgs {

using series::Integer;
using series::Rational;

// Raised for invalid user-facing parameters (CLI exit code 1).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an internal formula fails an integrity check (CLI exit code 2).
class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ModuliParams {
  int genus = 2;
  int degree = 5;
  Rational tau_bar{27, 10};

  static constexpr int rank = 2;

  Rational slope() const { return Rational(degree, rank); }
};

Integer floor_of(const Rational& q);

// Parses "p/q" or "p" exactly.
Rational parse_rational(const std::string& text);

std::string rational_string(const Rational& q);

// Smallest slope above deg/2 attainable by a Higgs subbundle in the rank-2
// split model class: (k+1)/2. Rejects even k.
Rational mu_plus(int degree);

struct Violation {
  std::string code;
  std::string message;
};

// Every violated constraint among: g >= 2, gcd(k,2) = 1, k/2 < tau_bar < mu_plus,
// tau_bar not an integer, tau_bar != k/2, k > 4g-4.
std::vector<Violation> validate_params(const ModuliParams& p);

// Throws ParameterError listing every violation.
void require_valid(const ModuliParams& p);

}  // namespace higgs
