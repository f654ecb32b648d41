#include "higgs/series.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace higgs::series {

std::string to_string(Var v) {
  switch (v) {
    case Var::t: return "t";
    case Var::x: return "x";
    case Var::y: return "y";
  }
  return "?";
}

int Exponents::operator[](Var v) const {
  switch (v) {
    case Var::t: return t;
    case Var::x: return x;
    case Var::y: return y;
  }
  return 0;
}

int& Exponents::operator[](Var v) {
  switch (v) {
    case Var::x: return x;
    case Var::y: return y;
    case Var::t: break;
  }
  return t;
}

bool Bounds::contains(const Exponents& e) const {
  return e.t >= t_lo && e.t <= t_hi && e.x >= 0 && e.x <= x_hi && e.y >= 0 &&
         e.y <= y_hi;
}

int Bounds::upper(Var v) const {
  switch (v) {
    case Var::t: return t_hi;
    case Var::x: return x_hi;
    case Var::y: return y_hi;
  }
  return 0;
}

Bounds Bounds::meet(const Bounds& a, const Bounds& b) {
  return {std::max(a.t_lo, b.t_lo), std::min(a.t_hi, b.t_hi),
          std::min(a.x_hi, b.x_hi), std::min(a.y_hi, b.y_hi)};
}

Series Series::constant(const Rational& c, Bounds bounds) {
  return monomial({c, {}}, bounds);
}

Series Series::monomial(const Monomial& m, Bounds bounds) {
  Series s(bounds);
  s.add_term(m.exp, m.coeff);
  return s;
}

Rational Series::coeff(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Rational{0} : it->second;
}

void Series::add_term(const Exponents& e, const Rational& c) {
  if (c == 0 || !bounds_.contains(e)) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Series Series::scaled(const Rational& c) const {
  Series out(bounds_);
  if (c == 0) return out;
  for (const auto& [e, v] : terms_) out.terms_.emplace(e, v * c);
  return out;
}

Series Series::with_bounds(Bounds bounds) const {
  Series out(bounds);
  for (const auto& [e, v] : terms_) out.add_term(e, v);
  return out;
}

namespace {

void append_power(std::ostringstream& os, const char* name, int e, bool& first_factor) {
  if (e == 0) return;
  if (!first_factor) os << '*';
  os << name;
  if (e != 1) os << '^' << e;
  first_factor = false;
}

}  // namespace

std::string Series::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
      if (c < 0) os << '-';
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    const bool unit = mag == 1 && (e.t != 0 || e.x != 0 || e.y != 0);
    bool first_factor = true;
    if (!unit) {
      os << mag.str();
      first_factor = false;
    }
    append_power(os, "t", e.t, first_factor);
    append_power(os, "x", e.x, first_factor);
    append_power(os, "y", e.y, first_factor);
  }
  return os.str();
}

Series operator+(const Series& a, const Series& b) {
  Series out(Bounds::meet(a.bounds_, b.bounds_));
  for (const auto& [e, v] : a.terms_) out.add_term(e, v);
  for (const auto& [e, v] : b.terms_) out.add_term(e, v);
  return out;
}

Series operator-(const Series& a) { return a.scaled(Rational{-1}); }

Series operator-(const Series& a, const Series& b) { return a + (-b); }

Series operator*(const Series& a, const Series& b) {
  Series out(Bounds::meet(a.bounds_, b.bounds_));
  for (const auto& [ea, va] : a.terms_) {
    for (const auto& [eb, vb] : b.terms_) {
      Exponents e{ea.t + eb.t, ea.x + eb.x, ea.y + eb.y};
      if (e.x > out.bounds_.x_hi || e.y > out.bounds_.y_hi) continue;
      out.add_term(e, va * vb);
    }
  }
  return out;
}

Series expand_geometric(const Monomial& c, Bounds bounds) {
  if (c.exp.x < 0 || c.exp.y < 0) {
    throw SeriesError("expand_geometric: x and y exponents must be nonnegative");
  }
  if (c.exp.x == 0 && c.exp.y == 0) {
    throw SeriesError(
        "expand_geometric: monomial has no positive x or y exponent; the expansion would not "
        "terminate under truncation");
  }
  Series out(bounds);
  Exponents e{};
  Rational power{1};
  while (e.x <= bounds.x_hi && e.y <= bounds.y_hi) {
    out.add_term(e, power);
    e = {e.t + c.exp.t, e.x + c.exp.x, e.y + c.exp.y};
    power *= c.coeff;
  }
  return out;
}

Integer binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  Integer r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

Series pow_binomial(const Monomial& m, int n, Bounds bounds) {
  if (n < 0) throw SeriesError("pow_binomial: exponent must be nonnegative");
  Series out(bounds);
  Exponents e{};
  Rational power{1};
  for (int j = 0; j <= n; ++j) {
    out.add_term(e, Rational(binomial(n, j)) * power);
    e = {e.t + m.exp.t, e.x + m.exp.x, e.y + m.exp.y};
    power *= m.coeff;
  }
  return out;
}

Series coeff_extract(const Series& s, const std::map<Var, int>& assignment) {
  Bounds b = s.bounds();
  for (const auto& [v, k] : assignment) {
    const int lo = v == Var::t ? b.t_lo : 0;
    if (k > b.upper(v) || k < lo) {
      throw TruncationError("coeff_extract: requested " + to_string(v) + "^" + std::to_string(k) +
                            " outside truncation window [" + std::to_string(lo) + ", " +
                            std::to_string(b.upper(v)) + "]");
    }
  }
  for (const auto& [v, k] : assignment) {
    switch (v) {
      case Var::t: b.t_lo = 0; b.t_hi = 0; break;
      case Var::x: b.x_hi = 0; break;
      case Var::y: b.y_hi = 0; break;
    }
  }
  Series out(b);
  for (const auto& [e, c] : s.terms()) {
    bool match = true;
    Exponents rest = e;
    for (const auto& [v, k] : assignment) {
      if (e[v] != k) {
        match = false;
        break;
      }
      rest[v] = 0;
    }
    if (match) out.add_term(rest, c);
  }
  return out;
}

Series exact_divide_one_minus_t_power(const Series& s, int power) {
  if (power <= 0) throw SeriesError("exact_divide: power must be positive");
  // Group by (x, y); each slice is a Laurent polynomial in t.
  std::map<std::pair<int, int>, std::map<int, Rational>> slices;
  for (const auto& [e, c] : s.terms()) slices[{e.x, e.y}][e.t] = c;

  Series out(s.bounds());
  for (const auto& [xy, slice] : slices) {
    const int lo = slice.begin()->first;
    const int hi = slice.rbegin()->first;
    std::map<int, Rational> q;
    auto get = [](const std::map<int, Rational>& m, int k) {
      auto it = m.find(k);
      return it == m.end() ? Rational{0} : it->second;
    };
    // s_e = q_e - q_{e-power}  =>  q_e = s_e + q_{e-power}
    for (int e = lo; e <= hi - power; ++e) {
      Rational v = get(slice, e) + get(q, e - power);
      if (v != 0) q[e] = v;
    }
    for (int e = std::max(lo, hi - power + 1); e <= hi; ++e) {
      if (get(slice, e) + get(q, e - power) != 0) {
        throw RemainderError("exact_divide: nonzero remainder at t^" + std::to_string(e) +
                             " x^" + std::to_string(xy.first) + " y^" +
                             std::to_string(xy.second));
      }
    }
    for (const auto& [e, v] : q) out.add_term({e, xy.first, xy.second}, v);
  }
  return out;
}

}  // namespace higgs::series
