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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <stdexcept>
#include <vector>

namespace qfdiv {

// Panel-based adaptive quadrature. Panels use fixed-order Gauss-Legendre
// rules; refinement is globally adaptive (always bisect the panel with the
// largest error estimate), which converges on integrable endpoint
// singularities where per-panel error apportionment would stall.

struct QuadratureSpec {
  double abs_tol = 1e-9;
  double rel_tol = 1e-8;
  int panel_order = 15;
  int max_subdivisions = 2000;
};

struct QuadResult {
  double value = 0.0;
  double est_error = 0.0;
  bool converged = true;
  int panels = 0;
};

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;  // sum to 2
};

// Nodes are Legendre roots obtained by Newton iteration from the Chebyshev
// initial guess; accurate to ~1e-15 for the orders used here.
inline const GaussLegendreRule& gauss_legendre(int order) {
  static std::map<int, GaussLegendreRule> cache;
  if (order < 2 || order > 64) throw std::invalid_argument("gauss_legendre: order out of range");
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int n = order;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  auto [pos, _] = cache.emplace(order, std::move(rule));
  return pos->second;
}

using Integrand = std::function<double(double)>;

namespace detail {

inline double gl_panel(const Integrand& f, double a, double b, const GaussLegendreRule& rule) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * f(c + h * rule.nodes[i]);
  return acc * h;
}

struct Segment {
  double a, b;
  double gl;                 // single-panel estimate
  double gl_left, gl_right;  // half-panel estimates, reused by children on split
  double value;              // gl_left + gl_right (kept as the segment value)
  double err;                // |gl - value|
};

struct SegmentWorse {
  bool operator()(const Segment& x, const Segment& y) const {
    if (x.err != y.err) return x.err < y.err;
    return x.a > y.a;  // ties: leftmost segment first
  }
};

}  // namespace detail

// Integrates f over [a, b]. `breakpoints` lists interior abscissae where the
// integrand is non-smooth (kinks); each becomes a mandatory panel boundary.
inline QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                                     std::vector<double> breakpoints = {},
                                     const QuadratureSpec& spec = {}) {
  QuadResult out;
  if (!(b > a)) return out;
  const auto& rule = gauss_legendre(spec.panel_order);

  std::vector<double> edges;
  edges.push_back(a);
  std::sort(breakpoints.begin(), breakpoints.end());
  for (double x : breakpoints) {
    if (x > a && x < b && x - edges.back() > 1e-14 * (b - a)) edges.push_back(x);
  }
  edges.push_back(b);

  auto make_segment = [&](double lo, double hi, double gl_whole) {
    detail::Segment s;
    s.a = lo;
    s.b = hi;
    s.gl = std::isnan(gl_whole) ? detail::gl_panel(f, lo, hi, rule) : gl_whole;
    const double m = 0.5 * (lo + hi);
    s.gl_left = detail::gl_panel(f, lo, m, rule);
    s.gl_right = detail::gl_panel(f, m, hi, rule);
    s.value = s.gl_left + s.gl_right;
    s.err = std::abs(s.gl - s.value);
    return s;
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();

  std::priority_queue<detail::Segment, std::vector<detail::Segment>, detail::SegmentWorse> queue;
  double total = 0.0, total_err = 0.0;
  int created = 0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    auto s = make_segment(edges[i], edges[i + 1], nan);
    total += s.value;
    total_err += s.err;
    queue.push(s);
    ++created;
  }

  auto tolerance = [&]() { return spec.abs_tol + spec.rel_tol * std::abs(total); };

  while (total_err > tolerance() && created < spec.max_subdivisions) {
    detail::Segment worst = queue.top();
    queue.pop();
    const double m = 0.5 * (worst.a + worst.b);
    if (m <= worst.a || m >= worst.b) {  // width at the double-spacing floor; accept as-is
      total_err -= worst.err;
      worst.err = 0.0;
      queue.push(worst);
      continue;
    }
    total -= worst.value;
    total_err -= worst.err;
    auto left = make_segment(worst.a, m, worst.gl_left);
    auto right = make_segment(m, worst.b, worst.gl_right);
    total += left.value + right.value;
    total_err += left.err + right.err;
    queue.push(left);
    queue.push(right);
    created += 2;
  }

  // Deterministic final reduction: sum segments in spatial order.
  std::vector<detail::Segment> segs;
  segs.reserve(queue.size());
  while (!queue.empty()) {
    segs.push_back(queue.top());
    queue.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
  double value = 0.0, comp = 0.0, err = 0.0;
  for (const auto& s : segs) {  // Kahan
    double y = s.value - comp;
    double t = value + y;
    comp = (t - value) - y;
    value = t;
    err += s.err;
  }
  out.value = value;
  out.est_error = err;
  out.panels = static_cast<int>(segs.size());
  out.converged = err <= spec.abs_tol + spec.rel_tol * std::abs(value);
  return out;
}

// Integrates f over [a, +inf) through the substitution u = s/(1+s).
inline QuadResult integrate_semi_infinite(const Integrand& f, double a,
                                          std::vector<double> breakpoints = {},
                                          const QuadratureSpec& spec = {}) {
  if (a < 0.0) throw std::invalid_argument("integrate_semi_infinite: negative lower bound");
  auto to_u = [](double s) { return s / (1.0 + s); };
  std::vector<double> ubreaks;
  ubreaks.reserve(breakpoints.size());
  for (double s : breakpoints)
    if (s > a) ubreaks.push_back(to_u(s));
  Integrand g = [&f](double u) {
    const double om = 1.0 - u;
    if (om <= 0.0) return 0.0;
    const double s = u / om;
    return f(s) / (om * om);
  };
  return integrate_adaptive(g, to_u(a), 1.0, std::move(ubreaks), spec);
}

}  // namespace qfdiv
