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

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace qfdiv {

// A divergence generator f on (0, inf) with f(1) = 0 and analytic
// derivatives. deriv(0, x) is f itself. Derivatives are closed-form per
// catalog entry; there is no automatic differentiation.
struct GeneratorFunction {
  std::string name;
  bool convex = true;
  int max_derivative = 6;
  // lim_{x->inf} f(x)/x; +inf is allowed, NaN means "estimate numerically".
  double slope_at_infinity = std::numeric_limits<double>::quiet_NaN();
  std::function<double(int, double)> derivs;

  double operator()(double x) const { return derivs(0, x); }
  double deriv(int k, double x) const {
    if (k < 0 || k > max_derivative)
      throw std::invalid_argument("GeneratorFunction: derivative order " + std::to_string(k) +
                                  " not available for " + name);
    return derivs(k, x);
  }
};

inline void require_normalized(const GeneratorFunction& f) {
  if (std::abs(f.derivs(0, 1.0)) > 1e-12)
    throw std::invalid_argument("generator " + f.name + ": f(1) != 0");
}

// f(x) = x log x. Entropy-type generator; f(0) = 0 by continuity and
// f^(k)(x) = (-1)^k (k-2)! x^(1-k) for k >= 2.
inline GeneratorFunction relative_entropy_generator() {
  GeneratorFunction f;
  f.name = "relative-entropy";
  f.convex = true;
  f.max_derivative = 8;
  f.slope_at_infinity = std::numeric_limits<double>::infinity();
  f.derivs = [](int k, double x) -> double {
    if (x < 0.0) throw std::domain_error("relative-entropy generator: negative argument");
    if (k == 0) return x == 0.0 ? 0.0 : x * std::log(x);
    if (x == 0.0) throw std::domain_error("relative-entropy generator: derivative at 0");
    if (k == 1) return std::log(x) + 1.0;
    double fact = 1.0;
    for (int j = 2; j <= k - 2; ++j) fact *= j;  // (k-2)!
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * fact * std::pow(x, 1.0 - k);
  };
  return f;
}

// f_alpha(x) = (x^alpha - 1)/(alpha - 1) for alpha > 0, alpha != 1.
inline GeneratorFunction hellinger_generator(double alpha) {
  if (!(alpha > 0.0) || alpha == 1.0)
    throw std::invalid_argument("hellinger_generator: alpha must be positive and != 1");
  GeneratorFunction f;
  f.name = "hellinger:" + std::to_string(alpha);
  f.convex = true;
  f.max_derivative = 8;
  f.slope_at_infinity = alpha > 1.0 ? std::numeric_limits<double>::infinity() : 0.0;
  f.derivs = [alpha](int k, double x) -> double {
    if (x < 0.0) throw std::domain_error("hellinger generator: negative argument");
    if (k == 0) return (std::pow(x, alpha) - 1.0) / (alpha - 1.0);
    double coeff = 1.0 / (alpha - 1.0);
    for (int j = 0; j < k; ++j) coeff *= alpha - j;
    return coeff * std::pow(x, alpha - k);
  };
  return f;
}

// Le Cam generator g_lambda(x) = lambda(1-lambda)(x-1)^2 / (lambda x + 1 - lambda).
// Endpoints lambda = 0 and lambda = 1 give the zero generator.
inline GeneratorFunction lecam_generator(double lambda) {
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("lecam_generator: lambda must lie in [0, 1]");
  GeneratorFunction f;
  f.name = "lecam:" + std::to_string(lambda);
  f.convex = true;
  f.max_derivative = 8;
  f.slope_at_infinity = 1.0 - lambda;
  if (lambda == 0.0 || lambda == 1.0) {
    f.slope_at_infinity = 0.0;
    f.derivs = [](int, double) { return 0.0; };
    return f;
  }
  f.derivs = [lambda](int k, double x) -> double {
    if (x < 0.0) throw std::domain_error("lecam generator: negative argument");
    const double v = lambda * x + 1.0 - lambda;
    if (k == 0) return lambda * (1.0 - lambda) * (x - 1.0) * (x - 1.0) / v;
    if (k == 1) return (1.0 - lambda) * (1.0 - 1.0 / (v * v));
    double fact = 1.0;
    for (int j = 2; j <= k; ++j) fact *= j;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return sign * fact * std::pow(lambda, k - 1) * (1.0 - lambda) * std::pow(v, -(k + 1.0));
  };
  return f;
}

// f(x) = (x - 1)^k for integer k >= 2; convex only for even k.
inline GeneratorFunction chi_power_generator(int k) {
  if (k < 2) throw std::invalid_argument("chi_power_generator: k must be >= 2");
  GeneratorFunction f;
  f.name = "chipow:" + std::to_string(k);
  f.convex = (k % 2 == 0);
  f.max_derivative = 8;
  f.slope_at_infinity = std::numeric_limits<double>::infinity();
  f.derivs = [k](int m, double x) -> double {
    if (m > k) return 0.0;
    double coeff = 1.0;
    for (int j = 0; j < m; ++j) coeff *= k - j;  // k!/(k-m)!
    return coeff * std::pow(x - 1.0, k - m);
  };
  return f;
}

// F_{k,lambda}(x) = (x-1)^k f^(k)(lambda x + 1 - lambda); the generator of
// the k-th lambda-derivative of D_f along the mixture line. Needs
// derivatives of f up to order k + m to provide F's m-th derivative.
inline GeneratorFunction shifted_generator(const GeneratorFunction& f, int k, double lambda) {
  if (k < 0) throw std::invalid_argument("shifted_generator: k must be >= 0");
  if (lambda < 0.0 || lambda > 1.0)
    throw std::invalid_argument("shifted_generator: lambda must lie in [0, 1]");
  if (f.max_derivative < k)
    throw std::invalid_argument("shifted_generator: base generator lacks order-" +
                                std::to_string(k) + " derivatives");
  GeneratorFunction out;
  out.name = "shift[k=" + std::to_string(k) + ",lambda=" + std::to_string(lambda) + "](" +
             f.name + ")";
  out.convex = (k == 0) ? f.convex : false;  // no convexity asserted for k >= 1
  out.max_derivative = f.max_derivative - k;
  auto base = f.derivs;
  out.derivs = [base, k, lambda](int m, double x) -> double {
    const double u = lambda * x + 1.0 - lambda;
    double acc = 0.0;
    double binom = 1.0;
    const int jmax = std::min(m, k);
    for (int j = 0; j <= jmax; ++j) {  // Leibniz over (x-1)^k and f^(k)(u)
      if (j > 0) binom *= static_cast<double>(m - j + 1) / j;
      double fall = 1.0;
      for (int t = 0; t < j; ++t) fall *= k - t;  // k!/(k-j)!
      const double lam_pow = (m - j == 0) ? 1.0 : std::pow(lambda, m - j);
      if (lam_pow == 0.0) continue;
      acc += binom * fall * std::pow(x - 1.0, k - j) * lam_pow * base(k + m - j, u);
    }
    return acc;
  };
  return out;
}

}  // namespace qfdiv
