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
#include <stdexcept>
#include <string>
#include <vector>

#include "qfdiv/closed_forms.hpp"
#include "qfdiv/divergence_value.hpp"
#include "qfdiv/generators.hpp"
#include "qfdiv/operator_core.hpp"
#include "qfdiv/quadrature.hpp"

namespace qfdiv {

// Hockey-stick divergence E_gamma(rho || sigma) = Tr (rho - gamma sigma)_+.
inline double hockey_stick(const DensityState& rho, const DensityState& sigma, double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("hockey_stick: gamma must be nonnegative");
  return positive_part_trace(rho.matrix() - gamma * sigma.matrix());
}

// Shifted variant E_gamma - (1-gamma)_+; for gamma <= 1 this equals
// Tr (gamma sigma - rho)_+, which is what gets evaluated (no cancellation).
inline double tilde_hockey_stick(const DensityState& rho, const DensityState& sigma,
                                 double gamma) {
  if (gamma >= 1.0) return hockey_stick(rho, sigma, gamma);
  return positive_part_trace(gamma * sigma.matrix() - rho.matrix());
}

namespace detail {

// Domain cap for eigenvalue evaluation of the hockey-stick curves: beyond
// this the matrix pencil is numerically dominated and the asymptote (the
// escaping mass) plus a bracketed remainder take over.
inline constexpr double kGammaCap = 1e8;
inline constexpr double kTailMargin = 1e-6;

// Numeric decay exponent of f'' at infinity (f'' ~ c x^p). Returns -inf when
// the tail is identically zero.
inline double tail_exponent_at_infinity(const GeneratorFunction& f) {
  const double big = 1e8;
  const double a = std::abs(f.deriv(2, big));
  const double b = std::abs(f.deriv(2, 2.0 * big));
  if (a < 1e-300 || b < 1e-300) return -kInf;
  return std::log(b / a) / std::log(2.0);
}

// Numeric growth exponent of f'' at zero (f'' ~ c x^q).
inline double tail_exponent_at_zero(const GeneratorFunction& f) {
  const double eps = 1e-8;
  const double a = std::abs(f.deriv(2, eps));
  const double b = std::abs(f.deriv(2, 2.0 * eps));
  if (a < 1e-300 || b < 1e-300) return kInf;
  return std::log(b / a) / std::log(2.0);
}

inline double slope_at_infinity_or_estimate(const GeneratorFunction& f) {
  if (!std::isnan(f.slope_at_infinity)) return f.slope_at_infinity;
  return f.deriv(1, 1e12);
}

inline std::vector<double> kinks_in_range(const std::vector<double>& kinks, double lo, double hi) {
  std::vector<double> out;
  for (double k : kinks)
    if (k > lo && k < hi) out.push_back(k);
  return out;
}

}  // namespace detail

// Quantum f-divergence from the two-term hockey-stick integral
//   D_f = int_1^inf [ f''(g) E_g(rho||sigma) + g^-3 f''(1/g) E_g(sigma||rho) ] dg.
// Both integrals truncate at the largest pencil eigenvalue when the
// corresponding max-divergence is finite. When it is infinite, the decay of
// f'' decides: a non-integrable weight makes the value +inf, an integrable
// one leaves a bracketed remainder that is folded into est_error.
inline DivergenceValue f_divergence(const StatePair& pair, const GeneratorFunction& f,
                                    const QuadratureSpec& spec = {}) {
  require_normalized(f);
  DivergenceValue out;
  out.method = Method::integral;
  double value = 0.0, err = 0.0;
  std::string note;

  // First term: weight f''(gamma) against E_gamma(rho || sigma).
  auto e_rs = [&pair](double g) { return hockey_stick(pair.rho, pair.sigma, g); };
  if (pair.supp_rho_in_sigma) {
    const double b1 = pair.kinks_rho_sigma.empty() ? 1.0 : pair.kinks_rho_sigma.back();
    if (b1 > 1.0) {
      const auto q = integrate_adaptive([&](double g) { return f.deriv(2, g) * e_rs(g); }, 1.0,
                                        b1, detail::kinks_in_range(pair.kinks_rho_sigma, 1.0, b1),
                                        spec);
      value += q.value;
      err += q.est_error;
      if (!q.converged) note = "first integral not converged";
    }
  } else {
    const double p_hat = detail::tail_exponent_at_infinity(f);
    if (p_hat >= -1.0 - detail::kTailMargin) {
      out.value = kInf;
      out.note = "max-divergence infinite and f'' tail non-integrable";
      return out;
    }
    const auto q = integrate_adaptive(
        [&](double g) { return f.deriv(2, g) * e_rs(g); }, 1.0, detail::kGammaCap,
        detail::kinks_in_range(pair.kinks_rho_sigma, 1.0, detail::kGammaCap), spec);
    value += q.value;
    err += q.est_error;
    // Remainder: E_gamma decreases to the escaping mass, so the tail lies
    // between m * I and E(cap) * I with I = f'(inf) - f'(cap).
    const double i_tail =
        std::max(0.0, detail::slope_at_infinity_or_estimate(f) - f.deriv(1, detail::kGammaCap));
    const double e_hi = e_rs(detail::kGammaCap);
    const double e_lo = pair.rho_outside_sigma;
    value += 0.5 * (e_hi + e_lo) * i_tail;
    err += 0.5 * std::abs(e_hi - e_lo) * i_tail + 1e-14;
    note = "first-term tail bracketed beyond gamma=1e8";
  }

  // Second term: weight g^-3 f''(1/g) against E_g(sigma || rho).
  auto e_sr = [&pair](double g) { return hockey_stick(pair.sigma, pair.rho, g); };
  if (pair.supp_sigma_in_rho) {
    const double b2 = pair.kinks_sigma_rho.empty() ? 1.0 : pair.kinks_sigma_rho.back();
    if (b2 > 1.0) {
      const auto q = integrate_adaptive(
          [&](double g) { return f.deriv(2, 1.0 / g) * e_sr(g) / (g * g * g); }, 1.0, b2,
          detail::kinks_in_range(pair.kinks_sigma_rho, 1.0, b2), spec);
      value += q.value;
      err += q.est_error;
      if (!q.converged && note.empty()) note = "second integral not converged";
    }
  } else {
    const double q_hat = detail::tail_exponent_at_zero(f);
    if (q_hat <= -2.0 + detail::kTailMargin) {
      out.value = kInf;
      out.note = "reverse max-divergence infinite and f'' blows up at 0";
      return out;
    }
    // In the substitution x = 1/g the term reads int_0^1 x f''(x) E_{1/x} dx
    // with an integrable singularity at 0. Below x0 = 1/cap the hockey-stick
    // factor is bracketed by [m, E(cap)] and the weight integrates to
    // approximately f''(x0) x0^2 / (q_hat + 2).
    const double x0 = 1.0 / detail::kGammaCap;
    std::vector<double> breaks;
    for (double k : pair.kinks_sigma_rho)
      if (1.0 / k > x0 && 1.0 / k < 1.0) breaks.push_back(1.0 / k);
    const auto q = integrate_adaptive(
        [&](double x) { return x * f.deriv(2, x) * e_sr(1.0 / x); }, x0, 1.0, breaks, spec);
    value += q.value;
    err += q.est_error;
    const double r_unit = f.deriv(2, x0) * x0 * x0 / (q_hat + 2.0);
    const double e_hi = e_sr(detail::kGammaCap);
    const double e_lo = pair.sigma_outside_rho;
    value += 0.5 * (e_hi + e_lo) * r_unit;
    err += 0.5 * std::abs(e_hi - e_lo) * std::abs(r_unit) + 0.1 * std::abs(r_unit) + 1e-14;
    if (note.empty()) note = "second-term tail bracketed below x=1e-8";
  }

  out.value = value;
  out.est_error = err;
  out.note = note;
  return out;
}

// Same divergence from the one-sided form
//   D_f = int_0^inf f''(g) [ E_g(rho||sigma) - (1-g)_+ ] dg,
// with the shifted curve evaluated as Tr (g sigma - rho)_+ below g = 1. A
// deliberately distinct code path from f_divergence: different nodes,
// different matrices, same mathematical value.
inline DivergenceValue f_divergence_alt(const StatePair& pair, const GeneratorFunction& f,
                                        const QuadratureSpec& spec = {}) {
  require_normalized(f);
  DivergenceValue out;
  out.method = Method::integral_alt;
  double value = 0.0, err = 0.0;
  std::string note;

  // Piece above 1, where the shifted curve equals E_gamma(rho || sigma).
  auto e_rs = [&pair](double g) { return hockey_stick(pair.rho, pair.sigma, g); };
  if (pair.supp_rho_in_sigma) {
    const double b1 = pair.kinks_rho_sigma.empty() ? 1.0 : pair.kinks_rho_sigma.back();
    if (b1 > 1.0) {
      const auto q = integrate_adaptive([&](double g) { return f.deriv(2, g) * e_rs(g); }, 1.0,
                                        b1, detail::kinks_in_range(pair.kinks_rho_sigma, 1.0, b1),
                                        spec);
      value += q.value;
      err += q.est_error;
      if (!q.converged) note = "upper integral not converged";
    }
  } else {
    const double p_hat = detail::tail_exponent_at_infinity(f);
    if (p_hat >= -1.0 - detail::kTailMargin) {
      out.value = kInf;
      out.note = "max-divergence infinite and f'' tail non-integrable";
      return out;
    }
    const auto q = integrate_adaptive(
        [&](double g) { return f.deriv(2, g) * e_rs(g); }, 1.0, detail::kGammaCap,
        detail::kinks_in_range(pair.kinks_rho_sigma, 1.0, detail::kGammaCap), spec);
    value += q.value;
    err += q.est_error;
    const double i_tail =
        std::max(0.0, detail::slope_at_infinity_or_estimate(f) - f.deriv(1, detail::kGammaCap));
    const double e_hi = e_rs(detail::kGammaCap);
    const double e_lo = pair.rho_outside_sigma;
    value += 0.5 * (e_hi + e_lo) * i_tail;
    err += 0.5 * std::abs(e_hi - e_lo) * i_tail + 1e-14;
    note = "upper tail bracketed beyond gamma=1e8";
  }

  // Piece below 1: f''(g) Tr (g sigma - rho)_+, vanishing below
  // exp(-Dmax(sigma||rho)).
  auto shifted = [&pair](double g) {
    return positive_part_trace(g * pair.sigma.matrix() - pair.rho.matrix());
  };
  if (pair.supp_sigma_in_rho) {
    const double b2 = pair.kinks_sigma_rho.empty() ? 1.0 : pair.kinks_sigma_rho.back();
    const double beta = 1.0 / b2;
    if (beta < 1.0) {
      std::vector<double> breaks;
      for (double k : pair.kinks_sigma_rho)
        if (1.0 / k > beta && 1.0 / k < 1.0) breaks.push_back(1.0 / k);
      const auto q = integrate_adaptive([&](double g) { return f.deriv(2, g) * shifted(g); },
                                        beta, 1.0, breaks, spec);
      value += q.value;
      err += q.est_error;
      if (!q.converged && note.empty()) note = "lower integral not converged";
    }
  } else {
    const double q_hat = detail::tail_exponent_at_zero(f);
    if (q_hat <= -2.0 + detail::kTailMargin) {
      out.value = kInf;
      out.note = "reverse max-divergence infinite and f'' blows up at 0";
      return out;
    }
    const double g0 = 1.0 / detail::kGammaCap;
    std::vector<double> breaks;
    for (double k : pair.kinks_sigma_rho)
      if (1.0 / k > g0 && 1.0 / k < 1.0) breaks.push_back(1.0 / k);
    const auto q = integrate_adaptive([&](double g) { return f.deriv(2, g) * shifted(g); }, g0,
                                      1.0, breaks, spec);
    value += q.value;
    err += q.est_error;
    // Tr (g sigma - rho)_+ = g E_{1/g}(sigma||rho) -> g * escaping mass.
    const double r_unit = f.deriv(2, g0) * g0 * g0 / (q_hat + 2.0);
    const double e_hi = shifted(g0) / g0;
    const double e_lo = pair.sigma_outside_rho;
    value += 0.5 * (e_hi + e_lo) * r_unit;
    err += 0.5 * std::abs(e_hi - e_lo) * std::abs(r_unit) + 0.1 * std::abs(r_unit) + 1e-14;
    if (note.empty()) note = "lower tail bracketed below gamma=1e-8";
  }

  out.value = value;
  out.est_error = err;
  out.note = note;
  return out;
}

// Classical f-divergence sum_i q_i f(p_i / q_i) with the usual conventions:
// 0 f(0/0) = 0 and q = 0 < p contributing p f'(inf).
inline DivergenceValue classical_f_divergence(const ProbVector& p, const ProbVector& q,
                                              const GeneratorFunction& f) {
  require_normalized(f);
  if (p.dim() != q.dim())
    throw std::invalid_argument("classical_f_divergence: dimension mismatch");
  DivergenceValue out;
  out.method = Method::classical;
  double acc = 0.0;
  for (int i = 0; i < p.dim(); ++i) {
    const double pi = p[i], qi = q[i];
    if (qi > 0.0) {
      acc += pi == 0.0 ? qi * f(0.0) : qi * f(pi / qi);
    } else if (pi > 0.0) {
      const double slope = detail::slope_at_infinity_or_estimate(f);
      if (!std::isfinite(slope) || slope > 1e100) {
        out.value = kInf;
        out.note = "mass escapes the support of q with unbounded f";
        return out;
      }
      acc += pi * slope;
    }
  }
  out.value = acc;
  out.est_error = 1e-14 * (1.0 + std::abs(acc));
  return out;
}

// Hellinger divergence of order alpha through the hockey-stick integral
// (alpha = 1 falls back to the relative-entropy limit, evaluated in closed
// form).
inline DivergenceValue hellinger_integral(const StatePair& pair, double alpha,
                                          const QuadratureSpec& spec = {}) {
  if (alpha == 1.0) return relative_entropy(pair);
  return f_divergence(pair, hellinger_generator(alpha), spec);
}

// Renyi divergence log(1 + (alpha-1) H_alpha)/(alpha-1) with first-order
// error propagation through the logarithm.
inline DivergenceValue renyi_divergence(const StatePair& pair, double alpha,
                                        const QuadratureSpec& spec = {}) {
  if (alpha == 1.0) return relative_entropy(pair);
  auto h = hellinger_integral(pair, alpha, spec);
  DivergenceValue out;
  out.method = h.method;
  out.note = h.note;
  if (!h.finite()) {
    out.value = kInf;
    return out;
  }
  const double arg = 1.0 + (alpha - 1.0) * h.value;
  if (arg <= 0.0) {
    out.value = kInf;
    out.note = "trace functional vanishes at this order";
    return out;
  }
  out.value = std::log(arg) / (alpha - 1.0);
  out.est_error = h.est_error / arg + 1e-15;
  return out;
}

// Precomputed shifted hockey-stick curve of a state pair on a log grid over
// its pencil range, for evaluating many f-divergences of the same pair
// cheaply (composite Simpson in log coordinates per smooth segment). Requires
// two-sided finite max-divergence. Accuracy is certified by calibrate(),
// which replays generators with independently known values.
class HockeyStickProfile {
 public:
  explicit HockeyStickProfile(const StatePair& pair, int total_nodes = 4096)
      : pair_(&pair) {
    if (!pair.supp_rho_in_sigma || !pair.supp_sigma_in_rho)
      throw std::invalid_argument("HockeyStickProfile: pencil range must be finite both ways");
    const double hi = std::max(1.0, pair.kinks_rho_sigma.back());
    const double lo = std::min(1.0, 1.0 / pair.kinks_sigma_rho.back());
    if (hi <= lo * (1.0 + 1e-14)) return;  // identical states: curve is zero

    std::vector<double> edges{lo, 1.0, hi};
    for (double k : pair.kinks_rho_sigma)
      if (k > lo && k < hi) edges.push_back(k);
    for (double k : pair.kinks_sigma_rho) {
      const double r = 1.0 / k;
      if (r > lo && r < hi) edges.push_back(r);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return b - a < 1e-13 * b; }),
                edges.end());

    const double total_log = std::log(hi / lo);
    for (std::size_t e = 0; e + 1 < edges.size(); ++e) {
      Segment seg;
      const double la = std::log(edges[e]), lb = std::log(edges[e + 1]);
      int n = static_cast<int>(total_nodes * (lb - la) / total_log);
      n = std::max(n, 32);
      if (n % 2 != 0) ++n;  // even panel count for Simpson
      seg.du = (lb - la) / n;
      seg.gamma.resize(n + 1);
      seg.tilde.resize(n + 1);
      for (int i = 0; i <= n; ++i) {
        const double g = std::exp(la + i * seg.du);
        seg.gamma[i] = g;
        seg.tilde[i] = tilde_hockey_stick(pair.rho, pair.sigma, g);
      }
      segments_.push_back(std::move(seg));
    }
  }

  // int f2(g) * tilde_E(g) dg over the pencil range.
  template <typename F>
  double integrate_weight(const F& f2) const {
    double acc = 0.0;
    for (const auto& seg : segments_) {
      const int n = static_cast<int>(seg.gamma.size()) - 1;
      double s = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        // Jacobian gamma from integrating in log coordinates.
        s += w * f2(seg.gamma[i]) * seg.tilde[i] * seg.gamma[i];
      }
      acc += s * seg.du / 3.0;
    }
    return acc;
  }

  double divergence(const GeneratorFunction& f) const {
    return integrate_weight([&f](double g) { return f.deriv(2, g); });
  }

  // Largest relative mismatch against three independently computed
  // references: chi^2, relative entropy, and the cubic Hellinger order.
  double calibrate(const QuadratureSpec& spec = {}) const {
    double worst = 0.0;
    auto probe = [&](const GeneratorFunction& f, double ref) {
      const double got = divergence(f);
      worst = std::max(worst, std::abs(got - ref) / (1.0 + std::abs(ref)));
    };
    probe(chi_power_generator(2), chi2_divergence(*pair_).value);
    probe(relative_entropy_generator(), relative_entropy(*pair_).value);
    probe(hellinger_generator(3.0), hellinger_trace_integer(*pair_, 3, spec).value);
    return worst;
  }

  bool empty() const { return segments_.empty(); }

 private:
  struct Segment {
    std::vector<double> gamma, tilde;
    double du = 0.0;
  };
  const StatePair* pair_;
  std::vector<Segment> segments_;
};

}  // namespace qfdiv
