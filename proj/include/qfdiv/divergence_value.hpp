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
#include <string>

namespace qfdiv {

enum class Method {
  integral,          // two-sided hockey-stick integral
  integral_alt,      // one-sided shifted hockey-stick integral
  trace_integer,     // resolvent cycle expansion, exact s-integrals
  trace_fractional,  // double-integral trace representation for alpha in (0,1)
  closed_form,       // spectral closed form
  classical,         // probability-vector formula
};

inline const char* method_name(Method m) {
  switch (m) {
    case Method::integral: return "integral";
    case Method::integral_alt: return "integral-alt";
    case Method::trace_integer: return "trace-integer";
    case Method::trace_fractional: return "trace-fractional";
    case Method::closed_form: return "closed-form";
    case Method::classical: return "classical";
  }
  return "unknown";
}

struct DivergenceValue {
  double value = 0.0;      // may be +inf
  double est_error = 0.0;  // ignored when value is +inf
  Method method = Method::integral;
  std::string note;        // optional diagnostic (e.g. why a value is infinite)

  bool finite() const { return std::isfinite(value); }
};

}  // namespace qfdiv
