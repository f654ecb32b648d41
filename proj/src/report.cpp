#include "higgs/report.hpp"

#include <cmath>
#include <sstream>

namespace higgs::report {

json polynomial_json(const betti::PoincarePolynomial& p) {
  return coefficient_map_json(p.coeffs());
}

json coefficient_map_json(const std::map<int, Integer>& coeffs) {
  json out = json::array();
  for (const auto& [e, c] : coeffs) out.push_back(json::array({e, c.str()}));
  return out;
}

json params_json(const ModuliParams& p) {
  return {{"genus", p.genus}, {"degree", p.degree}, {"tau_bar", rational_string(p.tau_bar)}};
}

json betti_report(const ModuliParams& p, betti::YConvention convention) {
  require_valid(p);
  json strata = json::array();
  for (int d : strata::d_range(p)) {
    const auto desc = strata::stratum_descriptor(p, d);
    strata.push_back({{"d", d},
                      {"index", desc.index},
                      {"dim", desc.dim},
                      {"poly", polynomial_json(betti::stratum_poincare(p, d))}});
  }
  const auto check = betti::extraction_check(p, convention);
  return {{"params", params_json(p)},
          {"strata", strata},
          {"n0_poly", polynomial_json(betti::pairs_poincare_n0(p))},
          {"total_poly", polynomial_json(betti::total_poincare(p))},
          {"extraction_check",
           {{"convention", betti::to_string(convention)},
            {"matches", check.matches},
            {"diff", coefficient_map_json(check.diff)}}}};
}

json strata_report(const ModuliParams& p) {
  require_valid(p);
  json list = json::array();
  for (int d : strata::d_range(p)) {
    const auto s = strata::stratum_descriptor(p, d);
    list.push_back({{"d", s.d}, {"n1", s.n1}, {"n2", s.n2}, {"index", s.index}, {"dim", s.dim}});
  }
  return {{"params", params_json(p)}, {"floor_m", strata::floor_m(p)}, {"strata", list}};
}

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParameterError(std::string("model is missing '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ParameterError(std::string("model field '") + key + "' has the wrong type");
  }
}

std::optional<strata::Divisor> divisor_field(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  strata::Divisor div;
  try {
    for (const auto& entry : j.at(key)) {
      div[entry.at(0).get<int>()] += entry.at(1).get<int>();
    }
  } catch (const nlohmann::json::exception&) {
    throw ParameterError(std::string(key) + " must be [[point, multiplicity], ...]");
  }
  return div;
}

json divisor_json(const std::optional<strata::Divisor>& div) {
  if (!div) return nullptr;
  json out = json::array();
  for (const auto& [pt, mult] : *div) out.push_back(json::array({pt, mult}));
  return out;
}

}  // namespace

StabilityQuery parse_stability_query(const json& j) {
  if (!j.is_object()) throw ParameterError("model must be a JSON object");
  auto model = stability::SplitHiggsPairModel::create(
      field<int>(j, "g"), field<int>(j, "k"), field<int>(j, "dL"), field<bool>(j, "psi_nonzero"),
      field<bool>(j, "theta_zero"),
      stability::parse_section_placement(field<std::string>(j, "s_placement")),
      divisor_field(j, "psi_divisor"), divisor_field(j, "s_divisor"));
  return {std::move(model), parse_rational(field<std::string>(j, "tau_bar"))};
}

json stability_report(const StabilityQuery& q) {
  const auto& m = q.model;
  const auto v = stability::is_tau_stable_split(m, q.tau_bar);
  json model = {{"g", m.genus()},
                {"k", m.degree()},
                {"dL", m.deg_L()},
                {"psi_nonzero", m.psi_nonzero()},
                {"theta_zero", m.theta_zero()},
                {"s_placement", stability::to_string(m.section())},
                {"psi_divisor", divisor_json(m.psi_divisor())},
                {"s_divisor", divisor_json(m.s_divisor())}};
  json witness = nullptr;
  if (v.witness) {
    witness = {{"subobject", stability::to_string(v.witness->subobject)},
               {"condition", v.witness->condition},
               {"slope", rational_string(v.witness->slope)},
               {"threshold", rational_string(v.witness->threshold)},
               {"description", v.witness->description}};
  }
  json invariant = json::array();
  for (const auto& f : stability::invariant_subbundles(m)) {
    invariant.push_back({{"subobject", stability::to_string(f.which)}, {"degree", f.degree.str()}});
  }
  return {{"model", model},
          {"tau_bar", rational_string(q.tau_bar)},
          {"verdict", v.stable ? "stable" : "unstable"},
          {"stable", v.stable},
          {"witness", witness},
          {"invariant_subbundles", invariant},
          {"higgs_stable", stability::check_higgs_stability(m)},
          {"zero_section_advisory", v.zero_section_advisory}};
}

json vortex_report(const VortexRun& run, lattice::LatticeState* final_state) {
  using namespace vortex;
  const VortexParams& p = run.params;
  validate(p);
  if (run.grid < 2) throw ParameterError("grid must be at least 2");
  if (run.init_amplitude < 0) throw ParameterError("initial amplitude must be nonnegative");

  Model model(p, run.grid, run.scheme);
  const auto start = lattice::smooth_state(run.grid, p.side(), p.r1, p.r2, run.branch,
                                           run.init_modes, run.init_amplitude,
                                           std::sqrt(std::abs(p.tau)), run.seed);
  SolveResult r = solve(model, start, run.options);

  json constants = nullptr;
  try {
    const auto c = derived_constants(p);
    constants = {{"sigma", c.sigma}, {"c", c.c}, {"c_shifted", c.c_shifted}};
  } catch (const ParameterError&) {
  }

  const auto& b = r.diagnostics;
  json out = {
      {"params",
       {{"rank1", p.r1},
        {"rank2", p.r2},
        {"degree1", p.d1},
        {"degree2", p.d2},
        {"grid", run.grid},
        {"vol", p.vol},
        {"tau", p.tau},
        {"tau_prime", p.tau_prime()},
        {"seed", run.seed},
        {"branch", lattice::to_string(run.branch)},
        {"scheme", spectral::to_string(run.scheme)},
        {"coupling", to_string(run.options.coupling)},
        {"tol", run.options.tol},
        {"max_iter", run.options.max_iter}}},
      {"derived_constants", constants},
      {"converged", r.converged},
      {"iterations", r.iterations},
      {"stop_reason", r.stop_reason},
      {"monotone", r.monotone},
      {"residual", r.residual},
      {"residual_breakdown",
       {{"curvature_eq1", b.eq1},
        {"curvature_eq2", b.eq2},
        {"holomorphicity", b.holomorphicity},
        {"curvature_eq1_max", b.eq1_max},
        {"curvature_eq2_max", b.eq2_max},
        {"holomorphicity_max", b.holomorphicity_max},
        {"theta_s_sup", b.theta_s_sup}}},
      {"moment_map_value", r.moment_map_value},
      {"half_section_l2", b.half_section_l2},
      {"trace_target", (p.tau / 2.0) * p.r1 * p.vol},
  };
  if (p.tau < 0) {
    out["obstruction"] = {
        {"floor", obstruction_floor(p)},
        {"note",
         "degree 0 and tau < 0: the integrated trace of the first equation forces "
         "(1/2) int |s|^2 = (tau/2) r1 vol < 0, so no solution exists"}};
  }
  if (final_state) *final_state = std::move(r.state);
  return out;
}

json error_json(const std::string& kind, const std::string& message) {
  return {{"error", {{"kind", kind}, {"message", message}}}};
}

Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "pretty") return Format::pretty;
  throw ParameterError("unknown format '" + s + "' (expected json, csv or pretty)");
}

namespace {

std::string scalar_text(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void csv_rows(const json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      csv_rows(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    // Polynomial-like arrays of scalar pairs become one row each.
    for (std::size_t i = 0; i < j.size(); ++i) {
      csv_rows(j[i], path + "." + std::to_string(i), out);
    }
    if (j.empty()) out << csv_quote(path) << ",\n";
  } else {
    out << csv_quote(path) << "," << csv_quote(scalar_text(j)) << "\n";
  }
}

bool is_pair(const json& j) {
  return j.is_array() && j.size() == 2 && j[0].is_primitive() && j[1].is_primitive();
}

void pretty_lines(const json& j, int depth, std::ostringstream& out) {
  const std::string pad(2 * depth, ' ');
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const json& v = it.value();
      if (v.is_primitive() || (v.is_array() && (v.empty() || is_pair(v[0])))) {
        out << pad << it.key() << ": ";
        if (v.is_primitive()) {
          out << scalar_text(v) << "\n";
        } else {
          // Pairs print as "e:c" terms, the natural form for polynomials.
          for (std::size_t i = 0; i < v.size(); ++i) {
            out << (i ? " " : "") << scalar_text(v[i][0]) << ":" << scalar_text(v[i][1]);
          }
          out << (v.empty() ? "[]" : "") << "\n";
        }
      } else {
        out << pad << it.key() << ":\n";
        pretty_lines(v, depth + 1, out);
      }
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      out << pad << "- [" << i << "]\n";
      pretty_lines(j[i], depth + 1, out);
    }
  } else {
    out << pad << scalar_text(j) << "\n";
  }
}

}  // namespace

std::string render(const json& j, Format f) {
  std::ostringstream out;
  switch (f) {
    case Format::json: return j.dump(2) + "\n";
    case Format::csv:
      out << "path,value\n";
      csv_rows(j, "", out);
      return out.str();
    case Format::pretty: pretty_lines(j, 0, out); return out.str();
  }
  return {};
}

}  // namespace higgs::report
