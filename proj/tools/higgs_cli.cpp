// higgs: command-line front end for the Betti, strata, stability, vortex and
// selftest computations.
//
// Exit codes: 0 success (including unstable verdicts and non-converged solves),
// 1 invalid parameters, 2 internal integrity failure or golden mismatch.

#include "higgs/report.hpp"
#include "higgs/selftest.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using higgs::report::Format;
using higgs::report::json;

struct Output {
  std::string format = "json";
  std::string out_path;
  std::string golden_path;
  bool regenerate = false;
  bool json_errors = false;
};

void add_output_flags(CLI::App* cmd, Output& o) {
  cmd->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "pretty"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out_path, "Write the report to this file instead of stdout");
  cmd->add_option("--golden", o.golden_path,
                  "Compare the rendered report byte-for-byte with this file (exit 2 on mismatch)");
  cmd->add_flag("--regenerate", o.regenerate,
                "With --golden: overwrite the golden file instead of comparing");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw higgs::ParameterError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write " + path);
}

class GoldenMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(const json& report, const Output& o) {
  const std::string text = higgs::report::render(report, higgs::report::parse_format(o.format));
  if (!o.golden_path.empty()) {
    if (o.regenerate) {
      write_file(o.golden_path, text);
    } else if (read_file(o.golden_path) != text) {
      throw GoldenMismatch("output differs from golden file " + o.golden_path +
                           " (rerun with --regenerate to accept)");
    }
  }
  if (o.out_path.empty()) {
    std::cout << text;
  } else {
    write_file(o.out_path, text);
  }
}

int fail(const Output& o, const std::string& kind, const std::string& message, int code) {
  if (o.json_errors) {
    std::cout << higgs::report::error_json(kind, message).dump(2) << "\n";
  } else {
    std::cerr << "error (" << kind << "): " << message << "\n";
  }
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Betti numbers, fixed-point strata, stability and vortex solutions for rank-2 "
               "Higgs pairs"};
  app.require_subcommand(1);
  Output out;
  app.add_flag("--json-errors", out.json_errors, "Report errors as JSON on stdout");

  std::string genus = "2";
  std::string degree = "5";
  std::string tau_bar = "27/10";
  auto add_moduli_flags = [&](CLI::App* cmd) {
    cmd->add_option("--genus", genus, "Genus g >= 2 of the curve")->capture_default_str();
    cmd->add_option("--degree", degree, "Odd degree k of the rank-2 bundle")->capture_default_str();
    cmd->add_option("--tau-bar", tau_bar, "Normalized stability parameter as p/q")
        ->capture_default_str();
  };

  auto* betti = app.add_subcommand("betti", "Poincare polynomial of the moduli space");
  add_moduli_flags(betti);
  std::string convention = "corrected";
  betti->add_option("--convention", convention, "y-exponent convention for the extraction check")
      ->check(CLI::IsMember({"corrected", "as_printed"}))
      ->capture_default_str();
  add_output_flags(betti, out);

  auto* strata = app.add_subcommand("strata", "Fixed-point strata descriptors");
  add_moduli_flags(strata);
  add_output_flags(strata, out);

  auto* stability = app.add_subcommand("stability", "tau-stability of split Higgs pairs");
  stability->require_subcommand(1);
  auto* check = stability->add_subcommand("check", "Check one split model read from JSON");
  std::string model_path;
  check->add_option("--model", model_path,
                    "JSON {g, k, dL, psi_nonzero, theta_zero, s_placement, tau_bar}")
      ->required();
  add_output_flags(check, out);

  auto* vortex = app.add_subcommand("vortex", "Lattice vortex equations on a flat torus");
  vortex->require_subcommand(1);
  auto* solve = vortex->add_subcommand("solve", "Descend the residual functional from a seeded start");
  higgs::report::VortexRun run;
  std::string branch = "phi";
  std::string scheme = "spectral";
  std::string coupling = "higgs_pair";
  std::string dump_path;
  solve->add_option("--rank1", run.params.r1, "Rank of E1")->capture_default_str();
  solve->add_option("--rank2", run.params.r2, "Rank of E2")->capture_default_str();
  solve->add_option("--grid", run.grid, "Lattice size N (N x N sites)")->capture_default_str();
  solve->add_option("--vol", run.params.vol, "Torus area")->capture_default_str();
  solve->add_option("--tau", run.params.tau, "Vortex parameter tau")->capture_default_str();
  solve->add_option("--tol", run.options.tol, "Convergence threshold on the residual")
      ->capture_default_str();
  solve->add_option("--max-iter", run.options.max_iter, "Iteration cap")->capture_default_str();
  solve->add_option("--seed", run.seed, "Seed of the initial state")->capture_default_str();
  solve->add_option("--amplitude", run.init_amplitude, "Amplitude of the random smooth start")
      ->capture_default_str();
  solve->add_option("--branch", branch, "Active morphism")
      ->check(CLI::IsMember({"phi", "psi"}))
      ->capture_default_str();
  solve->add_option("--scheme", scheme, "Discretization")
      ->check(CLI::IsMember({"spectral", "central"}))
      ->capture_default_str();
  solve->add_option("--coupling", coupling,
                    "higgs_pair freezes E2 (trivial connection, zero Higgs field)")
      ->check(CLI::IsMember({"higgs_pair", "doubly_coupled"}))
      ->capture_default_str();
  solve->add_option("--dump-fields", dump_path, "Write the final fields in binary form");
  add_output_flags(solve, out);

  auto* selftest = app.add_subcommand("selftest", "Run the built-in invariant suite");
  std::uint64_t seed = 20240611;
  std::string fault = "none";
  selftest->add_option("--seed", seed, "Seed for the randomized groups")->capture_default_str();
  selftest->add_option("--inject-fault", fault, "Deliberate defect for mutation testing")
      ->check(CLI::IsMember({"none", "flip_deviation_sign"}))
      ->capture_default_str();
  add_output_flags(selftest, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    auto moduli = [&] {
      higgs::ModuliParams p;
      try {
        p.genus = std::stoi(genus);
        p.degree = std::stoi(degree);
      } catch (const std::logic_error&) {
        throw higgs::ParameterError("genus and degree must be integers");
      }
      p.tau_bar = higgs::parse_rational(tau_bar);
      return p;
    };

    if (*betti) {
      emit(higgs::report::betti_report(moduli(), higgs::betti::parse_y_convention(convention)), out);
    } else if (*strata) {
      emit(higgs::report::strata_report(moduli()), out);
    } else if (*stability) {
      json model;
      try {
        model = json::parse(read_file(model_path));
      } catch (const json::parse_error& e) {
        throw higgs::ParameterError(model_path + " is not valid JSON: " + e.what());
      }
      emit(higgs::report::stability_report(higgs::report::parse_stability_query(model)), out);
    } else if (*vortex) {
      run.branch = higgs::lattice::parse_branch(branch);
      run.scheme = higgs::spectral::parse_scheme(scheme);
      run.options.coupling = higgs::vortex::parse_coupling(coupling);
      higgs::lattice::LatticeState final_state;
      const json report = higgs::report::vortex_report(run, &final_state);
      if (!dump_path.empty()) higgs::lattice::dump_fields(final_state, dump_path);
      emit(report, out);
    } else if (*selftest) {
      const auto r = higgs::selftest::run(seed, higgs::selftest::parse_fault(fault));
      emit(higgs::selftest::to_json(r), out);
      if (!r.passed()) return 2;
    }
  } catch (const higgs::ParameterError& e) {
    return fail(out, "parameter", e.what(), 1);
  } catch (const std::invalid_argument& e) {
    return fail(out, "parameter", e.what(), 1);
  } catch (const higgs::IntegrityError& e) {
    return fail(out, "integrity", e.what(), 2);
  } catch (const GoldenMismatch& e) {
    return fail(out, "golden_mismatch", e.what(), 2);
  } catch (const std::exception& e) {
    return fail(out, "internal", e.what(), 2);
  }
  return 0;
}
