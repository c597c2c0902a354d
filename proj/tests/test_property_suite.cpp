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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "qfdiv/property_suite.hpp"

namespace {

using Catch::Approx;
using namespace qfdiv;

EnsembleSpec tiny() {
  EnsembleSpec ens;
  ens.dims = {2};
  ens.trials = 2;
  ens.seed = 7;
  return ens;
}

TEST_CASE("kappa ratio profile has the documented values and fills") {
  CHECK(kappa_alpha(0.5, 0.0) == 1.0);
  CHECK(kappa_alpha(2.0, 0.0) == 1.0);
  CHECK(kappa_alpha(0.5, 1.0) == Approx(2.0));
  CHECK(kappa_alpha(2.0, 1.0) == Approx(0.5));

  const double r4 = 4.0 * std::log(4.0) + 1.0 - 4.0;
  CHECK(kappa_alpha(2.0, 4.0) == Approx(r4 / 9.0).epsilon(1e-12));
  CHECK(kappa_alpha(0.5, 4.0) == Approx(0.5 * r4 / 0.5).epsilon(1e-12));

  // Series fill hands over continuously to the direct formula.
  for (double alpha : {0.5, 2.0, 3.0}) {
    CHECK(kappa_alpha(alpha, 1.0 + 0.9e-5) ==
          Approx(kappa_alpha(alpha, 1.0 + 1.1e-5)).margin(1e-8));
    CHECK(kappa_alpha(alpha, 1.0 - 0.9e-5) ==
          Approx(kappa_alpha(alpha, 1.0 - 1.1e-5)).margin(1e-8));
  }

  CHECK_THROWS_AS(kappa_alpha(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(kappa_alpha(-2.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(kappa_alpha(2.0, -0.1), std::invalid_argument);
}

TEST_CASE("fast checks pass on a tiny seeded ensemble") {
  const auto ens = tiny();
  for (const auto& report :
       {check_classical_reduction(ens), check_petz_lower(ens), check_taylor_bounds(ens),
        check_kappa_corollary(ens), check_log_convexity(ens), check_chernoff(ens)}) {
    INFO(report.name << " worst=" << report.worst_margin << " at " << report.worst_instance);
    CHECK(report.pass);
    CHECK(report.trials > 0);
    CHECK_FALSE(report.evidence);
  }
}

TEST_CASE("trace representation checks pass on a tiny ensemble") {
  const auto ens = tiny();
  const auto integer = check_integer_trace_rep(ens);
  INFO(integer.worst_instance);
  CHECK(integer.pass);
  const auto fractional = check_fractional_trace_rep(ens);
  INFO(fractional.worst_instance);
  CHECK(fractional.pass);
  const auto resolvent = check_resolvent_expansion(ens);
  INFO(resolvent.worst_instance);
  CHECK(resolvent.pass);
}

TEST_CASE("order comparison checks pass on a tiny ensemble") {
  const auto ens = tiny();
  const auto sandwiched = check_sandwiched_upper(ens);
  INFO(sandwiched.worst_instance);
  CHECK(sandwiched.pass);
  CHECK_FALSE(sandwiched.evidence);
  const auto audenaert = check_audenaert_strengthening(ens);
  INFO(audenaert.worst_instance);
  CHECK(audenaert.pass);
  const auto mono = check_f_monotonicity(ens);
  INFO(mono.worst_instance);
  CHECK(mono.pass);
}

TEST_CASE("evidence-grade checks are flagged and never gate") {
  const auto ens = tiny();
  const auto conj = check_conjecture(ens);
  CHECK(conj.evidence);
  const auto sw = check_sandwiched_upper_evidence(ens);
  CHECK(sw.evidence);

  std::vector<CheckReport> reports = {conj, sw};
  reports[0].pass = false;  // a failing evidence report must not gate
  CHECK(all_theorem_checks_pass(reports));
  CheckReport theorem;
  theorem.name = "check_taylor_bounds";
  theorem.pass = false;
  reports.push_back(theorem);
  CHECK_FALSE(all_theorem_checks_pass(reports));
}

TEST_CASE("derivative and identity batteries pass on a single-pair ensemble") {
  EnsembleSpec ens = tiny();
  ens.trials = 1;
  const auto deriv = check_derivative_formulas(ens);
  INFO(deriv.worst_instance << " worst=" << deriv.worst_margin);
  CHECK(deriv.pass);
  const auto ids = check_integral_identities(ens);
  INFO(ids.worst_instance << " worst=" << ids.worst_margin);
  CHECK(ids.pass);
  const auto second = check_second_order_bounds(ens);
  INFO(second.worst_instance << " worst=" << second.worst_margin);
  CHECK(second.pass);
}

TEST_CASE("data processing check passes on a tiny ensemble") {
  EnsembleSpec ens = tiny();
  ens.trials = 1;
  const auto dpi = check_dpi(ens);
  INFO(dpi.worst_instance << " worst=" << dpi.worst_margin);
  CHECK(dpi.pass);
}

TEST_CASE("reports are deterministic for a fixed seed") {
  const auto ens = tiny();
  const auto a = check_petz_lower(ens);
  const auto b = check_petz_lower(ens);
  CHECK(report_to_json(a) == report_to_json(b));
  CHECK(a.worst_margin == b.worst_margin);
  CHECK(a.worst_instance == b.worst_instance);

  EnsembleSpec other = ens;
  other.seed = 8;
  const auto c = check_petz_lower(other);
  CHECK(report_to_json(a) != report_to_json(c));
}

TEST_CASE("serialized reports carry the documented fields") {
  CheckReport r;
  r.name = "check_demo";
  r.trials = 3;
  r.worst_margin = -2.5e-9;
  r.worst_instance = "dim=2 trial=1 alpha=0.5";
  r.pass = true;
  const std::string line = report_to_json(r);
  CHECK(line.find("\"name\":\"check_demo\"") != std::string::npos);
  CHECK(line.find("\"trials\":3") != std::string::npos);
  CHECK(line.find("\"worst_margin\":-2.5e-09") != std::string::npos);
  CHECK(line.find("\"worst_instance\":\"dim=2 trial=1 alpha=0.5\"") != std::string::npos);
  CHECK(line.find("\"pass\":true") != std::string::npos);
  CHECK(line.find("\"evidence\":false") != std::string::npos);
  CHECK(line.find('\n') == std::string::npos);

  std::ostringstream table;
  print_report_table({r}, table);
  CHECK(table.str().find("check_demo") != std::string::npos);
  CHECK(table.str().find("pass") != std::string::npos);
}

}  // namespace
