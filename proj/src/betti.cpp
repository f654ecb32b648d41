#include "higgs/betti.hpp"

#include "higgs/strata.hpp"

#include <algorithm>
#include <sstream>

namespace higgs::betti {

using series::Bounds;
using series::Exponents;
using series::Monomial;
using series::Series;
using series::Var;

PoincarePolynomial::PoincarePolynomial(std::map<int, Integer> coeffs) {
  for (auto& [e, c] : coeffs) {
    if (c != 0) coeffs_.emplace(e, std::move(c));
  }
}

PoincarePolynomial PoincarePolynomial::from_series(const Series& s, const std::string& what) {
  std::map<int, Integer> out;
  for (const auto& [e, c] : s.terms()) {
    if (e.x != 0 || e.y != 0) {
      throw IntegrityError(what + ": residual x/y dependence in " + s.to_string());
    }
    if (e.t < 0) {
      throw IntegrityError(what + ": negative t-exponent " + std::to_string(e.t) +
                           " survived; Laurent terms failed to cancel");
    }
    if (boost::multiprecision::denominator(c) != 1) {
      throw IntegrityError(what + ": fractional coefficient " + c.str() + " at t^" +
                           std::to_string(e.t));
    }
    if (c < 0) {
      throw IntegrityError(what + ": negative coefficient " + c.str() + " at t^" +
                           std::to_string(e.t));
    }
    out.emplace(e.t, boost::multiprecision::numerator(c));
  }
  return PoincarePolynomial(std::move(out));
}

Integer PoincarePolynomial::coefficient(int exponent) const {
  auto it = coeffs_.find(exponent);
  return it == coeffs_.end() ? Integer{0} : it->second;
}

int PoincarePolynomial::degree() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

int PoincarePolynomial::lowest_degree() const {
  return coeffs_.empty() ? -1 : coeffs_.begin()->first;
}

Integer PoincarePolynomial::total_betti() const {
  Integer sum = 0;
  for (const auto& [e, c] : coeffs_) sum += c;
  return sum;
}

bool PoincarePolynomial::is_palindromic() const {
  const int lo = lowest_degree();
  const int hi = degree();
  for (const auto& [e, c] : coeffs_) {
    if (coefficient(lo + hi - e) != c) return false;
  }
  return true;
}

PoincarePolynomial PoincarePolynomial::shifted(int by) const {
  std::map<int, Integer> out;
  for (const auto& [e, c] : coeffs_) out.emplace(e + by, c);
  return PoincarePolynomial(std::move(out));
}

std::string PoincarePolynomial::to_string() const {
  Series s;
  for (const auto& [e, c] : coeffs_) s.add_term({e, 0, 0}, Rational(c));
  return s.to_string();
}

PoincarePolynomial operator+(const PoincarePolynomial& a, const PoincarePolynomial& b) {
  std::map<int, Integer> out = a.coeffs_;
  for (const auto& [e, c] : b.coeffs_) out[e] += c;
  return PoincarePolynomial(std::move(out));
}

PoincarePolynomial operator*(const PoincarePolynomial& a, const PoincarePolynomial& b) {
  std::map<int, Integer> out;
  for (const auto& [ea, ca] : a.coeffs_) {
    for (const auto& [eb, cb] : b.coeffs_) out[ea + eb] += ca * cb;
  }
  return PoincarePolynomial(std::move(out));
}

std::map<int, Integer> difference(const PoincarePolynomial& a, const PoincarePolynomial& b) {
  std::map<int, Integer> out = a.coeffs();
  for (const auto& [e, c] : b.coeffs()) out[e] -= c;
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  return out;
}

Bounds working_bounds(const ModuliParams& p) {
  const int n = p.degree + 2 * p.genus;
  return Bounds{-2 * n, 2 * n, n, n};
}

namespace {

Monomial mono(int t, int x, int y, Rational c = 1) { return Monomial{std::move(c), {t, x, y}}; }

// (1+tx)^{2g} / ((1-x)(1-t^2 x)), optionally the same in y.
Series macdonald_factor(int genus, Var v, const Bounds& b) {
  const int vx = v == Var::x ? 1 : 0;
  const int vy = v == Var::y ? 1 : 0;
  return series::pow_binomial(mono(1, vx, vy), 2 * genus, b) *
         series::expand_geometric(mono(0, vx, vy), b) *
         series::expand_geometric(mono(2, vx, vy), b);
}

// (1+t)^{2g} (1+tx)^{2g} / ((1-x)(1-t^2 x)) times the two-term bracket
// t^{2(k-1-f)}/(1-t^{-2}x) - t^{2(g+1-k+2f)}/(1-t^4 x), without 1/(1-t^2).
Series pairs_numerator(const ModuliParams& p, const Bounds& b) {
  const int g = p.genus;
  const int k = p.degree;
  const int f = static_cast<int>(floor_of(p.tau_bar));
  const Series bracket =
      Series::monomial(mono(2 * (k - 1 - f), 0, 0), b) *
          series::expand_geometric(mono(-2, 1, 0), b) -
      Series::monomial(mono(2 * (g + 1 - k + 2 * f), 0, 0), b) *
          series::expand_geometric(mono(4, 1, 0), b);
  return series::pow_binomial(mono(1, 0, 0), 2 * g, b) * macdonald_factor(g, Var::x, b) * bracket;
}

}  // namespace

PoincarePolynomial sym_poincare(int n, int genus) {
  if (n < 0 || genus < 0) {
    throw ParameterError("sym_poincare: n and genus must be nonnegative");
  }
  const Bounds b{-series::kUnbounded, series::kUnbounded, n, 0};
  const Series coeff = series::coeff_extract(macdonald_factor(genus, Var::x, b), {{Var::x, n}});
  return PoincarePolynomial::from_series(coeff, "sym_poincare");
}

PoincarePolynomial pairs_poincare_n0(const ModuliParams& p) {
  require_valid(p);
  const Bounds b = working_bounds(p);
  const int shift = p.degree - 1 - static_cast<int>(floor_of(p.tau_bar));
  const Series coeff = series::coeff_extract(pairs_numerator(p, b), {{Var::x, shift}});
  Series quotient;
  try {
    quotient = series::exact_divide_one_minus_t_power(coeff, 2);
  } catch (const series::RemainderError& e) {
    throw IntegrityError(std::string("pairs_poincare_n0: ") + e.what());
  }
  return PoincarePolynomial::from_series(quotient, "pairs_poincare_n0");
}

PoincarePolynomial stratum_poincare(const ModuliParams& p, int d) {
  const auto s = strata::stratum_descriptor(p, d);
  return (sym_poincare(s.n1, p.genus) * sym_poincare(s.n2, p.genus)).shifted(s.index);
}

PoincarePolynomial total_poincare(const ModuliParams& p) {
  PoincarePolynomial total = pairs_poincare_n0(p);
  for (int d : strata::d_range(p)) total = total + stratum_poincare(p, d);
  return total;
}

std::string to_string(YConvention c) {
  return c == YConvention::as_printed ? "as_printed" : "corrected";
}

YConvention parse_y_convention(const std::string& s) {
  if (s == "as_printed") return YConvention::as_printed;
  if (s == "corrected") return YConvention::corrected;
  throw ParameterError("unknown y-exponent convention '" + s + "'");
}

PoincarePolynomial theorem_extraction(const ModuliParams& p, YConvention convention) {
  require_valid(p);
  const int g = p.genus;
  const int k = p.degree;
  const int target = k + 2 * g;
  const int f = static_cast<int>(floor_of(p.tau_bar));

  Bounds b = working_bounds(p);
  if (convention == YConvention::as_printed) {
    // y^{d-2g} pushes the required y-coefficient up to k+4g-d.
    const int n = k + 4 * g;
    b = Bounds{-4 * n, 4 * n, target, n};
  }

  // Holomorphic-pairs part: x^{2g+1+f} y^{k+2g} (...) / (1-t^2).
  const Series part_a = Series::monomial(mono(0, 2 * g + 1 + f, target), b) * pairs_numerator(p, b);
  Series coeff_a = series::coeff_extract(part_a, {{Var::x, target}, {Var::y, target}});
  try {
    coeff_a = series::exact_divide_one_minus_t_power(coeff_a, 2);
  } catch (const series::RemainderError& e) {
    throw IntegrityError(std::string("theorem_extraction: ") + e.what());
  }

  // Strata part. A negative y-prefactor is handled by shifting the
  // extracted exponent instead of forming y^{-n}.
  const Series two_var = macdonald_factor(g, Var::x, b) * macdonald_factor(g, Var::y, b);
  Series coeff_b(coeff_a.bounds());
  for (int d : strata::d_range(p)) {
    const int x_pref = 2 * d + 2;
    const int y_pref = convention == YConvention::corrected ? d + 2 * g : d - 2 * g;
    const int x_need = target - x_pref;
    const int y_need = target - y_pref;
    if (x_need < 0 || y_need < 0) continue;
    const Series c = series::coeff_extract(two_var, {{Var::x, x_need}, {Var::y, y_need}});
    const int index = 2 * (2 * d + g - k - 1);
    coeff_b = coeff_b + Series::monomial(mono(index, 0, 0), c.bounds()) * c;
  }
  return PoincarePolynomial::from_series(coeff_a + coeff_b, "theorem_extraction");
}

ExtractionReport extraction_check(const ModuliParams& p, YConvention convention) {
  ExtractionReport r;
  r.convention = convention;
  r.value = theorem_extraction(p, convention);
  const PoincarePolynomial total = total_poincare(p);
  r.diff = difference(r.value, total);
  r.matches = r.diff.empty();
  return r;
}

}  // namespace higgs::betti
