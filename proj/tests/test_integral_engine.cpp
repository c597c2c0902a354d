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
#include <stdexcept>

#include "qfdiv/closed_forms.hpp"
#include "qfdiv/integral_engine.hpp"
#include "qfdiv/operator_core.hpp"

namespace {

using qfdiv::DensityState;
using qfdiv::GeneratorFunction;
using qfdiv::HockeyStickProfile;
using qfdiv::Matrix;
using qfdiv::ProbVector;
using qfdiv::StatePair;
using qfdiv::chi_power_generator;
using qfdiv::classical_embed;
using qfdiv::classical_f_divergence;
using qfdiv::f_divergence;
using qfdiv::f_divergence_alt;
using qfdiv::hellinger_generator;
using qfdiv::hellinger_integral;
using qfdiv::hockey_stick;
using qfdiv::lecam_generator;
using qfdiv::make_state_pair;
using qfdiv::relative_entropy_generator;
using qfdiv::renyi_divergence;
using qfdiv::tilde_hockey_stick;

// Correlated / diagonal qubit pair used throughout: off-diagonal coherence in
// rho against a diagonal sigma, full rank on both sides.
DensityState fixture_rho() {
  Matrix m(2, 2);
  m << 0.5, 0.45, 0.45, 0.5;
  return DensityState(m);
}

DensityState fixture_sigma() {
  Matrix m(2, 2);
  m << 0.8, 0.0, 0.0, 0.2;
  return DensityState(m);
}

DensityState pure_state(int dim, int k) {
  Matrix m = Matrix::Zero(dim, dim);
  m(k, k) = 1.0;
  return DensityState(m);
}

TEST_CASE("hockey-stick values on the qubit fixture", "[engine]") {
  const auto rho = fixture_rho();
  const auto sigma = fixture_sigma();

  CHECK(hockey_stick(rho, sigma, 0.0) == Catch::Approx(1.0).epsilon(1e-12));
  // Tr(rho - sigma)_+ : eigenvalues of the difference are +-sqrt(0.2925).
  CHECK(hockey_stick(rho, sigma, 1.0) ==
        Catch::Approx(std::sqrt(0.2925)).epsilon(1e-12));
  // rho - gamma sigma is negative semidefinite past the largest pencil root.
  CHECK(hockey_stick(rho, sigma, 3.1) == Catch::Approx(0.0).margin(1e-12));
  CHECK(hockey_stick(rho, sigma, 1.0) >= hockey_stick(rho, sigma, 1.5));
  CHECK(hockey_stick(rho, sigma, 1.5) >= hockey_stick(rho, sigma, 2.0));
  CHECK_THROWS_AS(hockey_stick(rho, sigma, -0.5), std::invalid_argument);

  // Tr(gamma sigma - rho)_+ at gamma = 1/2, against the direct eigenvalue
  // formula and against the shifted identity with Tr rho = Tr sigma = 1.
  const double direct = -0.25 + std::sqrt(0.225);
  CHECK(tilde_hockey_stick(rho, sigma, 0.5) ==
        Catch::Approx(direct).epsilon(1e-12));
  CHECK(tilde_hockey_stick(rho, sigma, 0.5) ==
        Catch::Approx(hockey_stick(rho, sigma, 0.5) - 0.5).epsilon(1e-10));
}

TEST_CASE("diagonal pairs reduce to the classical formula", "[engine]") {
  ProbVector p{{0.7, 0.3}};
  ProbVector q{{0.4, 0.6}};
  const auto pair = make_state_pair(classical_embed(p), classical_embed(q));

  struct Case {
    GeneratorFunction f;
    double expect;
  };
  const Case cases[] = {
      {relative_entropy_generator(),
       0.7 * std::log(1.75) + 0.3 * std::log(0.5)},
      {chi_power_generator(2), 0.375},
      {hellinger_generator(0.5),
       2.0 * (1.0 - std::sqrt(0.28) - std::sqrt(0.18))},
      {hellinger_generator(3.0),
       0.5 * (0.343 / 0.16 + 0.027 / 0.36 - 1.0)},
      {lecam_generator(0.3),
       0.4 * lecam_generator(0.3)(1.75) + 0.6 * lecam_generator(0.3)(0.5)},
  };
  for (const auto& c : cases) {
    INFO(c.f.name);
    const auto cls = classical_f_divergence(p, q, c.f);
    CHECK(cls.value == Catch::Approx(c.expect).margin(1e-12));
    const auto quant = f_divergence(pair, c.f);
    CHECK(quant.value ==
          Catch::Approx(c.expect).margin(1e-8 * (1.0 + std::abs(c.expect))));
    const auto alt = f_divergence_alt(pair, c.f);
    CHECK(alt.value ==
          Catch::Approx(c.expect).margin(1e-8 * (1.0 + std::abs(c.expect))));
  }
}

TEST_CASE("engine agrees with closed forms on the qubit fixture", "[engine]") {
  const auto pair = make_state_pair(fixture_rho(), fixture_sigma());

  SECTION("relative entropy") {
    const double expect = qfdiv::relative_entropy(pair).value;
    // Independent spectral oracle: rho has eigenvalues 0.95 / 0.05 and is
    // diagonal-free against sigma's eigenbasis only through its 0.5 diagonal.
    const double umegaki = 0.95 * std::log(0.95) + 0.05 * std::log(0.05) -
                           0.5 * std::log(0.16);
    CHECK(expect == Catch::Approx(umegaki).epsilon(1e-12));
    const auto main = f_divergence(pair, relative_entropy_generator());
    CHECK(main.value == Catch::Approx(expect).margin(1e-8));
    const auto alt = f_divergence_alt(pair, relative_entropy_generator());
    CHECK(alt.value == Catch::Approx(expect).margin(1e-8));
  }
  SECTION("quadratic divergence") {
    const double expect = qfdiv::chi2_divergence(pair).value;
    const auto main = f_divergence(pair, chi_power_generator(2));
    CHECK(main.value == Catch::Approx(expect).margin(1e-8));
    const auto hel = hellinger_integral(pair, 2.0);
    CHECK(hel.value == Catch::Approx(expect).margin(1e-8));
  }
  SECTION("third power mean via the trace route") {
    const double expect = qfdiv::hellinger_trace_integer(pair, 3).value;
    const auto hel = hellinger_integral(pair, 3.0);
    CHECK(hel.value == Catch::Approx(expect).epsilon(1e-7));
  }
  SECTION("fractional power mean via the trace route") {
    const double expect = qfdiv::hellinger_trace_fractional(pair, 0.5).value;
    const auto hel = hellinger_integral(pair, 0.5);
    CHECK(hel.value == Catch::Approx(expect).margin(1e-6));
  }
  SECTION("triangular discrimination") {
    const double expect = qfdiv::lecam_divergence(pair, 0.3).value;
    const auto main = f_divergence(pair, lecam_generator(0.3));
    CHECK(main.value == Catch::Approx(expect).margin(1e-8));
  }
  SECTION("main and alternate splittings agree") {
    for (const auto& f :
         {relative_entropy_generator(), hellinger_generator(0.5),
          hellinger_generator(2.0), lecam_generator(0.5)}) {
      INFO(f.name);
      const auto a = f_divergence(pair, f);
      const auto b = f_divergence_alt(pair, f);
      CHECK(a.value == Catch::Approx(b.value).margin(1e-7));
    }
  }
}

TEST_CASE("Renyi divergence values", "[engine]") {
  ProbVector p{{0.7, 0.3}};
  ProbVector q{{0.4, 0.6}};
  const auto pair = make_state_pair(classical_embed(p), classical_embed(q));
  CHECK(renyi_divergence(pair, 2.0).value ==
        Catch::Approx(std::log(1.375)).margin(1e-8));
  // alpha = 1 falls back to relative entropy.
  CHECK(renyi_divergence(pair, 1.0).value ==
        Catch::Approx(0.7 * std::log(1.75) + 0.3 * std::log(0.5))
            .margin(1e-10));
}

TEST_CASE("support escape handling", "[engine]") {
  const auto half = DensityState(Matrix::Identity(2, 2) * 0.5);
  const auto ground = pure_state(2, 0);

  SECTION("non-integrable tail diverges") {
    const auto pair = make_state_pair(half, ground);
    const auto kl = f_divergence(pair, relative_entropy_generator());
    CHECK(std::isinf(kl.value));
    CHECK_FALSE(kl.note.empty());
  }
  SECTION("integrable tail stays finite") {
    const auto pair = make_state_pair(half, ground);
    const auto h = f_divergence(pair, hellinger_generator(0.5));
    // Classical value: q = (1, 0), p = (1/2, 1/2); the escaping mass
    // contributes nothing because the generator flattens at infinity.
    CHECK(h.value == Catch::Approx(2.0 - std::sqrt(2.0)).margin(1e-6));
  }
  SECTION("disjoint supports saturate the fractional family") {
    const auto pair = make_state_pair(pure_state(2, 0), pure_state(2, 1));
    const auto h = f_divergence(pair, hellinger_generator(0.5));
    CHECK(h.value == Catch::Approx(2.0).margin(1e-6));
  }
  SECTION("classical zero-denominator rules") {
    ProbVector p{{0.5, 0.5}};
    ProbVector q{{1.0, 0.0}};
    CHECK(std::isinf(
        classical_f_divergence(p, q, relative_entropy_generator()).value));
    CHECK(classical_f_divergence(p, q, hellinger_generator(0.5)).value ==
          Catch::Approx(2.0 - std::sqrt(2.0)).margin(1e-12));
    CHECK(classical_f_divergence(p, q, lecam_generator(0.5)).value ==
          Catch::Approx(lecam_generator(0.5)(0.5) + 0.5 * 0.5)
              .margin(1e-12));
  }
}

TEST_CASE("generator normalization is enforced", "[engine]") {
  const auto pair = make_state_pair(fixture_rho(), fixture_sigma());
  GeneratorFunction bad;
  bad.name = "square";
  bad.derivs = [](int, double x) { return x * x; };
  CHECK_THROWS_AS(f_divergence(pair, bad), std::invalid_argument);
}

TEST_CASE("reusable hockey-stick profile", "[engine]") {
  const auto pair = make_state_pair(fixture_rho(), fixture_sigma());
  HockeyStickProfile profile(pair);
  REQUIRE_FALSE(profile.empty());
  CHECK(profile.calibrate() < 5e-6);
  CHECK(profile.divergence(relative_entropy_generator()) ==
        Catch::Approx(qfdiv::relative_entropy(pair).value).margin(1e-6));
  CHECK(profile.divergence(chi_power_generator(2)) ==
        Catch::Approx(qfdiv::chi2_divergence(pair).value).margin(1e-6));

  SECTION("identical states collapse to the empty profile") {
    const auto same = make_state_pair(fixture_rho(), fixture_rho());
    HockeyStickProfile flat(same);
    CHECK(flat.empty());
    CHECK(flat.divergence(relative_entropy_generator()) ==
          Catch::Approx(0.0).margin(1e-12));
  }
  SECTION("profiles require two-sided support containment") {
    const auto escaping =
        make_state_pair(DensityState(Matrix::Identity(2, 2) * 0.5),
                        pure_state(2, 0));
    CHECK_THROWS_AS(HockeyStickProfile(escaping), std::invalid_argument);
  }
}

}  // namespace
