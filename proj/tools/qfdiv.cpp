/*
Copyright (c) 2026 The qfdiv developers. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

  http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

// qfdiv: compute quantum f-divergences on state files, sweep Renyi orders to
// CSV, run the verification battery, and scan the trace-representation
// conjecture.  Every numerical quantity comes from a library call; this file
// only parses flags, dispatches, and formats.
//
// Exit codes: 0 success / verification pass, 1 verification failure,
// 2 input error, 3 numerical non-convergence (partial value still printed).

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "qfdiv/qfdiv.hpp"

namespace {

using namespace qfdiv;

constexpr double kLn2 = 0.69314718055994531;

[[noreturn]] void fail_input(const std::string& msg) {
  std::fprintf(stderr, "qfdiv: %s\n", msg.c_str());
  std::exit(2);
}

double parse_real(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    fail_input(what + ": cannot parse '" + s + "' as a number");
  }
}

int parse_integer(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return static_cast<int>(v);
  } catch (const std::exception&) {
    fail_input(what + ": cannot parse '" + s + "' as an integer");
  }
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> parts;
  std::size_t from = 0;
  while (true) {
    const std::size_t at = s.find(delim, from);
    if (at == std::string::npos) {
      parts.push_back(s.substr(from));
      return parts;
    }
    parts.push_back(s.substr(from, at - from));
    from = at + 1;
  }
}

enum class Route { automatic, integral, trace, closed };

Route parse_route(const std::string& m) {
  if (m == "auto") return Route::automatic;
  if (m == "integral") return Route::integral;
  if (m == "trace") return Route::trace;
  if (m == "closed") return Route::closed;
  fail_input("--method must be one of auto|integral|trace|closed (got '" + m + "')");
}

StatePair load_pair(const std::string& rho_path, const std::string& sigma_path) {
  const DensityState rho = read_state_file(rho_path);
  const DensityState sigma = read_state_file(sigma_path);
  if (rho.dim() != sigma.dim())
    throw StateFileError("state dimensions differ (" + std::to_string(rho.dim()) + " vs " +
                         std::to_string(sigma.dim()) + ")");
  return make_state_pair(rho, sigma);
}

// Proven trace representation at the given order: resolvent cycles for
// integer alpha >= 2, the double-integral form on (0,1), the truncated
// fractional-power form otherwise.
DivergenceValue hellinger_by_trace(const StatePair& pair, double alpha,
                                   const QuadratureSpec& spec) {
  if (alpha < 1.0) return hellinger_trace_fractional(pair, alpha, spec);
  const double r = std::round(alpha);
  if (std::abs(alpha - r) < 1e-12 && r >= 2.0)
    return hellinger_trace_integer(pair, static_cast<int>(r), spec);
  return hellinger_trace_any(pair, alpha, spec);
}

DivergenceValue from_exact(double value) {
  DivergenceValue out;
  out.value = value;
  out.est_error = 0.0;
  out.method = Method::closed_form;
  return out;
}

struct Evaluated {
  DivergenceValue v;
  bool logarithmic = false;  // participates in --bits conversion
};

[[noreturn]] void route_unsupported(const std::string& sel, Route route) {
  const char* names[] = {"auto", "integral", "trace", "closed"};
  fail_input("--method " + std::string(names[static_cast<int>(route)]) +
             " is not available for --divergence " + sel);
}

Evaluated evaluate_divergence(const std::string& sel, Route route, const StatePair& pair,
                              const QuadratureSpec& spec) {
  const auto parts = split(sel, ':');
  Evaluated out;

  if (parts[0] == "f") {
    if (parts.size() < 2) fail_input("--divergence f: needs a generator name");
    const std::string& kind = parts[1];
    if (kind == "relative-entropy") {
      if (parts.size() != 2) fail_input("f:relative-entropy takes no parameter");
      out.logarithmic = true;
      if (route == Route::integral)
        out.v = f_divergence(pair, relative_entropy_generator(), spec);
      else if (route == Route::automatic || route == Route::closed)
        out.v = relative_entropy(pair);
      else
        route_unsupported(sel, route);
      return out;
    }
    if (kind == "hellinger") {
      if (parts.size() != 3) fail_input("f:hellinger needs an order, e.g. f:hellinger:0.5");
      const double alpha = parse_real(parts[2], "hellinger order");
      if (alpha == 1.0) {
        if (route == Route::trace || route == Route::closed) route_unsupported(sel, route);
        out.v = hellinger_integral(pair, alpha, spec);  // relative-entropy limit
        return out;
      }
      if (route == Route::integral)
        out.v = hellinger_integral(pair, alpha, spec);
      else if (route == Route::automatic || route == Route::trace)
        out.v = hellinger_by_trace(pair, alpha, spec);
      else
        route_unsupported(sel, route);
      return out;
    }
    if (kind == "lecam") {
      if (parts.size() != 3) fail_input("f:lecam needs a weight, e.g. f:lecam:0.5");
      const double lambda = parse_real(parts[2], "lecam weight");
      if (route == Route::integral)
        out.v = f_divergence(pair, lecam_generator(lambda), spec);
      else if (route == Route::automatic || route == Route::closed)
        out.v = lecam_divergence(pair, lambda);
      else
        route_unsupported(sel, route);
      return out;
    }
    if (kind == "chipow") {
      if (parts.size() != 3) fail_input("f:chipow needs an exponent, e.g. f:chipow:3");
      const int k = parse_integer(parts[2], "chipow exponent");
      if (route == Route::integral)
        out.v = f_divergence(pair, chi_power_generator(k), spec);
      else if (route == Route::automatic || route == Route::trace)
        out.v = chi_power_trace(pair, k, spec);
      else
        route_unsupported(sel, route);
      return out;
    }
    fail_input("unknown generator 'f:" + kind + "'");
  }

  if (parts[0] == "renyi") {
    if (parts.size() != 2) fail_input("renyi needs an order, e.g. renyi:2");
    const double alpha = parse_real(parts[1], "renyi order");
    out.logarithmic = true;
    if (alpha == 1.0) {
      if (route == Route::trace) route_unsupported(sel, route);
      out.v = route == Route::integral ? f_divergence(pair, relative_entropy_generator(), spec)
                                       : relative_entropy(pair);
      return out;
    }
    if (route == Route::integral)
      out.v = renyi_divergence(pair, alpha, spec);
    else if (route == Route::automatic || route == Route::trace)
      out.v = renyi_from_hellinger(alpha, hellinger_by_trace(pair, alpha, spec));
    else
      route_unsupported(sel, route);
    return out;
  }

  if (parts[0] == "petz" || parts[0] == "sandwiched") {
    if (parts.size() != 2) fail_input(parts[0] + " needs an order, e.g. " + parts[0] + ":2");
    const double alpha = parse_real(parts[1], parts[0] + " order");
    out.logarithmic = true;
    if (route != Route::automatic && route != Route::closed) route_unsupported(sel, route);
    if (alpha == 1.0) {  // common alpha -> 1 limit
      out.v = relative_entropy(pair);
      return out;
    }
    std::string note;
    const QuasiEntropy q = parts[0] == "petz" ? petz_quasi(pair, alpha, &note)
                                              : sandwiched_quasi(pair, alpha, &note);
    out.v.value = q.renyi;
    out.v.est_error = out.v.finite() ? 1e-13 * (1.0 + std::abs(q.renyi)) : 0.0;
    out.v.method = Method::closed_form;
    out.v.note = note;
    return out;
  }

  if (parts[0] == "chi2") {
    if (parts.size() != 1) fail_input("chi2 takes no parameter");
    if (route == Route::integral)
      out.v = f_divergence(pair, chi_power_generator(2), spec);
    else if (route == Route::trace)
      out.v = chi_power_trace(pair, 2, spec);
    else
      out.v = chi2_divergence(pair);
    return out;
  }

  if (parts[0] == "lecam") {
    if (parts.size() != 2) fail_input("lecam needs a weight, e.g. lecam:0.5");
    const double lambda = parse_real(parts[1], "lecam weight");
    if (route == Route::integral)
      out.v = f_divergence(pair, lecam_generator(lambda), spec);
    else if (route == Route::automatic || route == Route::closed)
      out.v = lecam_divergence(pair, lambda);
    else
      route_unsupported(sel, route);
    return out;
  }

  if (parts[0] == "js") {
    if (parts.size() != 1) fail_input("js takes no parameter");
    if (route != Route::automatic && route != Route::closed) route_unsupported(sel, route);
    out.v = jensen_shannon(pair);
    out.logarithmic = true;
    return out;
  }

  if (parts[0] == "chernoff") {
    if (parts.size() != 1) fail_input("chernoff takes no parameter");
    if (route != Route::automatic && route != Route::closed) route_unsupported(sel, route);
    const ChernoffResult c = chernoff_information(pair);
    out.v = from_exact(c.value);
    char note[48];
    std::snprintf(note, sizeof(note), "alpha_star=%.8f", c.alpha_star);
    out.v.note = note;
    out.logarithmic = true;
    return out;
  }

  if (parts[0] == "e-gamma") {
    if (parts.size() != 2) fail_input("e-gamma needs a threshold, e.g. e-gamma:1.5");
    const double gamma = parse_real(parts[1], "e-gamma threshold");
    if (gamma < 0.0) fail_input("e-gamma threshold must be >= 0");
    if (route != Route::automatic && route != Route::closed) route_unsupported(sel, route);
    out.v = from_exact(hockey_stick(pair.rho, pair.sigma, gamma));
    return out;
  }

  if (parts[0] == "dmax") {
    if (parts.size() != 1) fail_input("dmax takes no parameter");
    if (route != Route::automatic && route != Route::closed) route_unsupported(sel, route);
    out.v = from_exact(max_divergence(pair.rho, pair.sigma));
    if (!out.v.finite()) out.v.note = "supp rho escapes supp sigma";
    out.logarithmic = true;
    return out;
  }

  fail_input("unknown divergence '" + sel + "'");
}

bool flagged_nonconvergent(const DivergenceValue& v) {
  return v.note.find("not converged") != std::string::npos;
}

int cmd_compute(const std::string& divergence, const std::string& rho_path,
                const std::string& sigma_path, const std::string& method, bool has_tol,
                double tol, bool bits) {
  QuadratureSpec spec;
  if (has_tol) {
    if (!(tol > 0.0)) fail_input("--tol must be positive");
    spec.abs_tol = tol;
    spec.rel_tol = tol;
  }
  const StatePair pair = load_pair(rho_path, sigma_path);
  Evaluated e = evaluate_divergence(divergence, parse_route(method), pair, spec);
  if (bits && e.logarithmic && e.v.finite()) {
    e.v.value /= kLn2;
    e.v.est_error /= kLn2;
  }
  std::printf("value     = %.12g\n", e.v.value);
  std::printf("est_error = %.3e\n", e.v.est_error);
  std::printf("method    = %s\n", method_name(e.v.method));
  if (!e.v.note.empty()) std::printf("note      = %s\n", e.v.note.c_str());
  return flagged_nonconvergent(e.v) ? 3 : 0;
}

std::vector<double> sweep_grid(const std::string& range) {
  const auto parts = split(range, ':');
  if (parts.size() != 3) fail_input("--alphas must be start:stop:step");
  const double start = parse_real(parts[0], "--alphas start");
  const double stop = parse_real(parts[1], "--alphas stop");
  const double step = parse_real(parts[2], "--alphas step");
  if (!(step > 0.0)) fail_input("--alphas step must be positive");
  if (stop < start) fail_input("--alphas stop must be >= start");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    double a = start + i * step;
    if (a > stop + step * 1e-9) break;
    if (std::abs(a - 1.0) < 1e-9) a = 1.0;  // exact Umegaki row
    if (!(a > 0.0)) fail_input("sweep orders must be positive");
    if (a != 1.0 && std::abs(a - 1.0) < 0.5 * step - 1e-12)
      fail_input("sweep grid must avoid alpha = 1 by at least step/2");
    grid.push_back(a);
  }
  if (grid.empty()) fail_input("empty sweep grid");
  return grid;
}

int cmd_sweep(const std::string& range, const std::string& rho_path,
              const std::string& sigma_path, const std::string& out_path, bool has_tol,
              double tol, bool bits) {
  QuadratureSpec spec;
  if (has_tol) {
    if (!(tol > 0.0)) fail_input("--tol must be positive");
    spec.abs_tol = tol;
    spec.rel_tol = tol;
  }
  const StatePair pair = load_pair(rho_path, sigma_path);
  const std::vector<double> grid = sweep_grid(range);

  const double unit = bits ? kLn2 : 1.0;
  int rc = 0;
  std::string csv = "alpha,D_alpha,trace_rhs,petz,sandwiched\n";
  for (const double a : grid) {
    DivergenceValue d, tr, pe, sa;
    if (a == 1.0) {
      d = tr = pe = sa = relative_entropy(pair);
    } else {
      d = renyi_divergence(pair, a, spec);
      tr = renyi_from_hellinger(a, hellinger_by_trace(pair, a, spec));
      std::string note;
      pe.value = petz_quasi(pair, a, &note).renyi;
      sa.value = sandwiched_quasi(pair, a, &note).renyi;
    }
    if (flagged_nonconvergent(d) || flagged_nonconvergent(tr)) rc = 3;
    char line[192];
    std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g,%.10g,%.10g\n", a, d.value / unit,
                  tr.value / unit, pe.value / unit, sa.value / unit);
    csv += line;
  }

  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream out(out_path);
    if (!out) fail_input(out_path + ": cannot open for writing");
    out << csv;
  }
  return rc;
}

using SuiteFn = std::function<CheckReport(const EnsembleSpec&)>;

const std::vector<std::pair<std::string, SuiteFn>>& suite_table() {
  static const std::vector<std::pair<std::string, SuiteFn>> table = {
      {"check_classical_reduction", [](const EnsembleSpec& e) { return check_classical_reduction(e); }},
      {"check_integer_trace_rep", [](const EnsembleSpec& e) { return check_integer_trace_rep(e); }},
      {"check_conjecture", [](const EnsembleSpec& e) { return check_conjecture(e); }},
      {"check_fractional_trace_rep", [](const EnsembleSpec& e) { return check_fractional_trace_rep(e); }},
      {"check_petz_lower", [](const EnsembleSpec& e) { return check_petz_lower(e); }},
      {"check_sandwiched_upper", [](const EnsembleSpec& e) { return check_sandwiched_upper(e); }},
      {"check_sandwiched_upper_evidence", [](const EnsembleSpec& e) { return check_sandwiched_upper_evidence(e); }},
      {"check_audenaert_strengthening", [](const EnsembleSpec& e) { return check_audenaert_strengthening(e); }},
      {"check_chernoff", [](const EnsembleSpec& e) { return check_chernoff(e); }},
      {"check_derivative_formulas", [](const EnsembleSpec& e) { return check_derivative_formulas(e); }},
      {"check_resolvent_expansion", [](const EnsembleSpec& e) { return check_resolvent_expansion(e); }},
      {"check_f_monotonicity", [](const EnsembleSpec& e) { return check_f_monotonicity(e); }},
      {"check_log_convexity", [](const EnsembleSpec& e) { return check_log_convexity(e); }},
      {"check_integral_identities", [](const EnsembleSpec& e) { return check_integral_identities(e); }},
      {"check_second_order_bounds", [](const EnsembleSpec& e) { return check_second_order_bounds(e); }},
      {"check_taylor_bounds", [](const EnsembleSpec& e) { return check_taylor_bounds(e); }},
      {"check_dpi", [](const EnsembleSpec& e) { return check_dpi(e); }},
      {"check_kappa_corollary", [](const EnsembleSpec& e) { return check_kappa_corollary(e); }},
  };
  return table;
}

void emit_reports(const std::vector<CheckReport>& reports) {
  std::string jsonl;
  for (const auto& r : reports) {
    jsonl += report_to_json(r);
    jsonl += '\n';
  }
  jsonl += '\n';
  std::fputs(jsonl.c_str(), stdout);
  print_report_table(reports, std::cout);
}

int cmd_verify(const std::string& suite, std::uint64_t seed, const std::vector<int>& dims,
               int trials, bool has_tol, double tol) {
  EnsembleSpec ens;
  ens.seed = seed;
  ens.trials = trials;
  if (!dims.empty()) ens.dims = dims;
  for (const int d : ens.dims)
    if (d < 2) fail_input("--dims entries must be >= 2");
  if (ens.trials < 1) fail_input("--trials must be >= 1");
  if (has_tol) {
    if (!(tol > 0.0)) fail_input("--tol must be positive");
    // tol is the inequality-margin gate; every check's own gate scales
    // proportionally from its contract default.
    ens.tol_scale = tol / 1e-8;
  }

  if (suite == "all") {
    const auto reports = run_all(ens);
    emit_reports(reports);
    return all_theorem_checks_pass(reports) ? 0 : 1;
  }
  for (const auto& [name, fn] : suite_table()) {
    if (name == suite || name == "check_" + suite) {
      const CheckReport r = fn(ens);
      emit_reports({r});
      return (r.pass || r.evidence) ? 0 : 1;
    }
  }
  fail_input("unknown suite '" + suite + "'");
}

int cmd_conjecture(const std::vector<double>& alphas, std::uint64_t seed,
                   const std::vector<int>& dims, int trials, const std::string& out_path,
                   bool has_tol, double tol) {
  QuadratureSpec spec;
  if (has_tol) {
    if (!(tol > 0.0)) fail_input("--tol must be positive");
    spec.abs_tol = tol;
    spec.rel_tol = tol;
  }
  EnsembleSpec ens;
  ens.seed = seed;
  ens.trials = trials;
  if (!dims.empty()) ens.dims = dims;
  for (const int d : ens.dims)
    if (d < 2) fail_input("--dims entries must be >= 2");
  if (ens.trials < 1) fail_input("--trials must be >= 1");
  if (alphas.empty()) fail_input("--alphas must name at least one order");
  for (const double a : alphas)
    if (!(a > 1.0)) fail_input("conjecture scan needs alpha > 1");

  int evals = 0, rc = 0;
  double worst = -1.0, worst_alpha = 0.0;
  int worst_dim = 0, worst_trial = 0;
  std::string csv = "alpha,dim,trial,integral,trace,deviation\n";
  for (const double a : alphas) {
    for (const int dim : ens.dims) {
      for (int trial = 0; trial < ens.trials; ++trial) {
        const StatePair pair = ensemble_pair(ens, dim, trial);
        const auto lhs = hellinger_integral(pair, a, spec);
        const auto rhs = hellinger_by_trace(pair, a, spec);
        if (flagged_nonconvergent(lhs) || flagged_nonconvergent(rhs)) rc = 3;
        const double dev = std::abs(lhs.value - rhs.value);
        ++evals;
        if (dev > worst) {
          worst = dev;
          worst_alpha = a;
          worst_dim = dim;
          worst_trial = trial;
        }
        char line[192];
        std::snprintf(line, sizeof(line), "%g,%d,%d,%.12g,%.12g,%.6e\n", a, dim, trial,
                      lhs.value, rhs.value, dev);
        csv += line;
      }
    }
  }

  if (out_path.empty()) {
    std::fputs(csv.c_str(), stdout);
  } else {
    std::ofstream out(out_path);
    if (!out) fail_input(out_path + ": cannot open for writing");
    out << csv;
  }
  std::printf("conjecture scan: %d evaluations, max |integral - trace| = %.6e (alpha=%g, dim=%d, trial=%d)\n",
              evals, worst, worst_alpha, worst_dim, worst_trial);
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"integral-representation quantum f-divergences"};
  app.require_subcommand(1);

  // compute
  std::string divergence, rho_path, sigma_path, method = "auto";
  double tol = 0.0;
  bool bits = false;
  auto* compute = app.add_subcommand("compute", "evaluate one divergence on a state pair");
  compute->add_option("--divergence", divergence,
                      "f:relative-entropy | f:hellinger:a | f:lecam:l | f:chipow:k | renyi:a | "
                      "petz:a | sandwiched:a | chi2 | lecam:l | js | chernoff | e-gamma:g | dmax")
      ->required();
  compute->add_option("--rho", rho_path, "state file (JSON)")->required();
  compute->add_option("--sigma", sigma_path, "state file (JSON)")->required();
  compute->add_option("--tol", tol, "quadrature tolerance (absolute and relative)");
  compute->add_option("--method", method, "auto|integral|trace|closed");
  compute->add_flag("--bits", bits, "report logarithmic quantities in bits");

  // sweep
  std::string range, out_path;
  auto* sweep = app.add_subcommand("sweep", "CSV of Renyi-order curves over an alpha grid");
  sweep->add_option("--alphas", range, "grid start:stop:step (avoid 1 by step/2; exact 1 allowed)")
      ->required();
  sweep->add_option("--rho", rho_path, "state file (JSON)")->required();
  sweep->add_option("--sigma", sigma_path, "state file (JSON)")->required();
  sweep->add_option("--out", out_path, "CSV output path (default: stdout)");
  sweep->add_option("--tol", tol, "quadrature tolerance (absolute and relative)");
  sweep->add_flag("--bits", bits, "report in bits instead of nats");

  // verify
  std::string suite = "all";
  std::uint64_t seed = 42;
  std::vector<int> dims;
  int trials = 50;
  auto* verify = app.add_subcommand("verify", "run the property battery (JSONL + table)");
  verify->add_option("--suite", suite, "all or one check name");
  verify->add_option("--seed", seed, "ensemble seed");
  verify->add_option("--dims", dims, "ensemble dimensions")->delimiter(',');
  verify->add_option("--trials", trials, "trials per dimension");
  verify->add_option("--tol", tol,
                     "inequality-margin gate (default 1e-8); other gates scale proportionally");

  // conjecture
  std::vector<double> alphas = {1.25, 1.5, 1.75, 2.5, 3.5};
  auto* conjecture =
      app.add_subcommand("conjecture", "scan integral vs trace representation for alpha > 1");
  conjecture->add_option("--alphas", alphas, "orders to scan, all > 1")->delimiter(',');
  conjecture->add_option("--seed", seed, "ensemble seed");
  conjecture->add_option("--dims", dims, "ensemble dimensions")->delimiter(',');
  conjecture->add_option("--trials", trials, "trials per dimension");
  conjecture->add_option("--out", out_path, "CSV output path (default: stdout)");
  conjecture->add_option("--tol", tol, "quadrature tolerance (absolute and relative)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "qfdiv: %s\n", e.what());
    return 2;
  }

  try {
    if (compute->parsed())
      return cmd_compute(divergence, rho_path, sigma_path, method, compute->count("--tol") > 0,
                         tol, bits);
    if (sweep->parsed())
      return cmd_sweep(range, rho_path, sigma_path, out_path, sweep->count("--tol") > 0, tol,
                       bits);
    if (verify->parsed())
      return cmd_verify(suite, seed, dims, trials, verify->count("--tol") > 0, tol);
    if (conjecture->parsed())
      return cmd_conjecture(alphas, seed, dims, trials, out_path,
                            conjecture->count("--tol") > 0, tol);
  } catch (const StateFileError& e) {
    std::fprintf(stderr, "qfdiv: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "qfdiv: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "qfdiv: %s\n", e.what());
    return 3;
  }
  return 0;
}
