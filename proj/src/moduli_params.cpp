#include "higgs/moduli_params.hpp"

#include <cctype>

namespace higgs {

Integer floor_of(const Rational& q) {
  Integer num = boost::multiprecision::numerator(q);
  Integer den = boost::multiprecision::denominator(q);  // always positive
  Integer f = num / den;
  if (num < 0 && f * den != num) f -= 1;
  return f;
}

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  auto parse_int = [&](const std::string& s) {
    if (s.empty()) throw ParameterError("malformed rational '" + text + "'");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw ParameterError("malformed rational '" + text + "'");
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) {
        throw ParameterError("malformed rational '" + text + "'");
      }
    }
    return Integer(s[0] == '+' ? s.substr(1) : s);
  };
  if (slash == std::string::npos) return Rational(parse_int(text));
  Integer num = parse_int(text.substr(0, slash));
  Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw ParameterError("zero denominator in '" + text + "'");
  return Rational(num, den);
}

std::string rational_string(const Rational& q) { return q.str(); }

Rational mu_plus(int degree) {
  if (degree % 2 == 0) {
    throw ParameterError("mu_plus: degree " + std::to_string(degree) +
                         " is even; rank and degree must be coprime");
  }
  return Rational(degree + 1, 2);
}

std::vector<Violation> validate_params(const ModuliParams& p) {
  std::vector<Violation> out;
  const int g = p.genus;
  const int k = p.degree;
  const Rational half_k(k, 2);
  if (g < 2) out.push_back({"genus", "genus must be >= 2, got " + std::to_string(g)});
  if (k % 2 == 0) {
    out.push_back({"coprime", "gcd(" + std::to_string(k) + ",2)=2: degree and rank not coprime"});
  }
  if (p.tau_bar <= half_k) {
    out.push_back({"tau_lower", "tau_bar=" + rational_string(p.tau_bar) + " must exceed k/2=" +
                                    rational_string(half_k)});
  }
  const Rational upper(k + 1, 2);
  if (p.tau_bar >= upper) {
    out.push_back({"tau_upper", "tau_bar=" + rational_string(p.tau_bar) +
                                    " must be below mu_plus=" + rational_string(upper)});
  }
  if (boost::multiprecision::denominator(p.tau_bar) == 1) {
    out.push_back({"tau_integer", "tau_bar=" + rational_string(p.tau_bar) +
                                      " is an integer (a line-subbundle slope)"});
  }
  if (p.tau_bar == half_k) {
    out.push_back({"tau_slope_E", "tau_bar equals mu(E)=" + rational_string(half_k)});
  }
  if (k <= 4 * g - 4) {
    out.push_back({"degree_bound", "degree must exceed 4g-4=" + std::to_string(4 * g - 4) +
                                       " (mu(E) > 2g-2)"});
  }
  return out;
}

void require_valid(const ModuliParams& p) {
  auto v = validate_params(p);
  if (v.empty()) return;
  std::string msg = "invalid moduli parameters:";
  for (const auto& item : v) msg += " [" + item.code + "] " + item.message + ";";
  throw ParameterError(msg);
}

}  // namespace higgs
