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

#include "qfdiv/quadrature.hpp"

namespace {

using qfdiv::QuadratureSpec;
using qfdiv::gauss_legendre;
using qfdiv::integrate_adaptive;
using qfdiv::integrate_semi_infinite;

TEST_CASE("Gauss-Legendre rules are symmetric and normalized", "[quadrature]") {
  for (int order : {2, 5, 15, 31}) {
    const auto& rule = gauss_legendre(order);
    REQUIRE(rule.nodes.size() == static_cast<std::size_t>(order));
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(wsum == Catch::Approx(2.0).epsilon(1e-14));
    for (int i = 0; i < order / 2; ++i) {
      CHECK(rule.nodes[i] == Catch::Approx(-rule.nodes[order - 1 - i]).margin(1e-14));
      CHECK(rule.weights[i] == Catch::Approx(rule.weights[order - 1 - i]).margin(1e-14));
    }
  }
}

TEST_CASE("Gauss-Legendre integrates polynomials exactly", "[quadrature]") {
  // order n is exact through degree 2n-1; x^29 on [-1,1] vanishes by symmetry,
  // so probe x^28 against its closed form 2/29.
  const auto& rule = gauss_legendre(15);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * std::pow(rule.nodes[i], 28);
  CHECK(acc == Catch::Approx(2.0 / 29.0).epsilon(1e-13));
}

TEST_CASE("adaptive integration on smooth integrands", "[quadrature]") {
  const auto cube = integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(cube.converged);
  CHECK(cube.value == Catch::Approx(1.0 / 3.0).epsilon(1e-12));

  const auto sine = integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(sine.value == Catch::Approx(2.0).epsilon(1e-12));
  CHECK(std::abs(sine.value - 2.0) <= sine.est_error + 1e-12);
}

TEST_CASE("kinked integrand with and without a declared breakpoint", "[quadrature]") {
  auto f = [](double x) { return std::abs(x - 1.0 / 3.0); };
  const double exact = 5.0 / 18.0;
  const auto hinted = integrate_adaptive(f, 0.0, 1.0, {1.0 / 3.0});
  CHECK(hinted.value == Catch::Approx(exact).epsilon(1e-12));
  const auto blind = integrate_adaptive(f, 0.0, 1.0);
  CHECK(blind.value == Catch::Approx(exact).epsilon(1e-8));
  CHECK(hinted.panels < blind.panels);
}

TEST_CASE("integrable endpoint singularity", "[quadrature]") {
  const auto q = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0);
  CHECK(q.value == Catch::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("semi-infinite integrals through the rational map", "[quadrature]") {
  const auto expo = integrate_semi_infinite([](double s) { return std::exp(-s); }, 0.0);
  CHECK(expo.value == Catch::Approx(1.0).epsilon(1e-10));

  const auto lorentz =
      integrate_semi_infinite([](double s) { return 1.0 / (1.0 + s * s); }, 0.0);
  CHECK(lorentz.value == Catch::Approx(M_PI / 2.0).epsilon(1e-10));

  const auto gamma2 = integrate_semi_infinite([](double s) { return s * std::exp(-s); }, 0.0);
  CHECK(gamma2.value == Catch::Approx(1.0).epsilon(1e-10));

  // shifted lower limit: int_2^inf s^-2 ds = 1/2
  const auto tail =
      integrate_semi_infinite([](double s) { return 1.0 / (s * s); }, 2.0);
  CHECK(tail.value == Catch::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("integration is deterministic", "[quadrature]") {
  auto f = [](double x) { return std::exp(-x) * std::cos(3.0 * x); };
  const auto a = integrate_adaptive(f, 0.0, 10.0, {1.0, 2.0});
  const auto b = integrate_adaptive(f, 0.0, 10.0, {1.0, 2.0});
  CHECK(a.value == b.value);  // bitwise, not approximate
  CHECK(a.panels == b.panels);
}

TEST_CASE("tight budgets are reported honestly", "[quadrature]") {
  QuadratureSpec starved;
  starved.max_subdivisions = 3;
  starved.abs_tol = 1e-15;
  starved.rel_tol = 1e-15;
  const auto q = integrate_adaptive([](double x) { return 1.0 / std::sqrt(x + 1e-8); }, 0.0,
                                    1.0, {}, starved);
  CHECK_FALSE(q.converged);
  CHECK(q.est_error > 0.0);
}

}  // namespace
