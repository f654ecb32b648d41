#pragma once

// Truncated Laurent series in three variables (t, x, y) with exact rational
// coefficients. t may carry negative exponents; x and y are nonnegative.

#include <boost/multiprecision/cpp_int.hpp>

#include <climits>
#include <compare>
#include <map>
#include <stdexcept>
#include <string>

namespace higgs::series {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Var { t, x, y };

std::string to_string(Var v);

struct Exponents {
  int t = 0;
  int x = 0;
  int y = 0;

  int operator[](Var v) const;
  int& operator[](Var v);
  auto operator<=>(const Exponents&) const = default;
};

inline constexpr int kUnbounded = INT_MAX / 4;

// Inclusive truncation window. x and y have an implicit lower bound of 0.
struct Bounds {
  int t_lo = -kUnbounded;
  int t_hi = kUnbounded;
  int x_hi = kUnbounded;
  int y_hi = kUnbounded;

  bool contains(const Exponents& e) const;
  int upper(Var v) const;
  static Bounds meet(const Bounds& a, const Bounds& b);
  bool operator==(const Bounds&) const = default;
};

struct Monomial {
  Rational coeff{1};
  Exponents exp{};
};

class SeriesError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested exponent lies outside the truncation window.
class TruncationError : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

// Exact division left a nonzero remainder.
class RemainderError : public SeriesError {
 public:
  using SeriesError::SeriesError;
};

class Series {
 public:
  using TermMap = std::map<Exponents, Rational>;

  Series() = default;
  explicit Series(Bounds bounds) : bounds_(bounds) {}

  static Series constant(const Rational& c, Bounds bounds = {});
  static Series monomial(const Monomial& m, Bounds bounds = {});

  const Bounds& bounds() const { return bounds_; }
  const TermMap& terms() const { return terms_; }
  Rational coeff(const Exponents& e) const;
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  // Accumulates c at exponent e; terms outside the window are dropped.
  void add_term(const Exponents& e, const Rational& c);

  Series scaled(const Rational& c) const;
  Series with_bounds(Bounds bounds) const;

  std::string to_string() const;

  friend Series operator+(const Series& a, const Series& b);
  friend Series operator-(const Series& a, const Series& b);
  friend Series operator*(const Series& a, const Series& b);
  friend Series operator-(const Series& a);
  friend bool operator==(const Series& a, const Series& b) { return a.terms_ == b.terms_; }

 private:
  Bounds bounds_{};
  TermMap terms_{};
};

// Sum_{j>=0} c^j, i.e. 1/(1-c) truncated. c must have positive x- or
// y-exponent and nonnegative x/y exponents.
Series expand_geometric(const Monomial& c, Bounds bounds);

// (1 + m)^n with exact binomial coefficients.
Series pow_binomial(const Monomial& m, int n, Bounds bounds);

// Sub-series of terms whose assigned variables carry exactly the requested
// exponents. The extracted variables are pinned to exponent 0 in the result.
Series coeff_extract(const Series& s, const std::map<Var, int>& assignment);

// Exact quotient of s by (1 - t^power). Throws RemainderError when the
// division is not exact.
Series exact_divide_one_minus_t_power(const Series& s, int power = 2);

Integer binomial(int n, int k);

}  // namespace higgs::series
