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

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qfdiv/operator_core.hpp"

namespace qfdiv {

// Raised for anything wrong with a state file: unreadable, malformed JSON, or
// contents that fail the density-matrix/distribution invariants.
struct StateFileError : std::runtime_error {
  explicit StateFileError(const std::string& what) : std::runtime_error(what) {}
};

// Parse a state from JSON text.  Two forms are accepted:
//   {"dim": d, "matrix": [[[re, im], ...], ...]}   a d x d density matrix
//   {"probs": [p1, ...]}                           a classical distribution,
//                                                  embedded as its diagonal
// Validation is the type constructors': Hermitian, PSD, unit trace.
inline DensityState parse_state(const std::string& text,
                                const std::string& origin = "state") {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw StateFileError(origin + ": not valid JSON: " + e.what());
  }
  try {
    if (j.contains("probs")) {
      auto p = j.at("probs").get<std::vector<double>>();
      return classical_embed(ProbVector(std::move(p)));
    }
    const int dim = j.at("dim").get<int>();
    if (dim <= 0) throw std::invalid_argument("dim must be positive");
    const auto& rows = j.at("matrix");
    if (!rows.is_array() || static_cast<int>(rows.size()) != dim)
      throw std::invalid_argument("matrix row count does not match dim");
    Matrix m(dim, dim);
    for (int i = 0; i < dim; ++i) {
      const auto& row = rows.at(i);
      if (!row.is_array() || static_cast<int>(row.size()) != dim)
        throw std::invalid_argument("matrix column count does not match dim");
      for (int k = 0; k < dim; ++k) {
        const auto& cell = row.at(k);
        if (!cell.is_array() || cell.size() != 2)
          throw std::invalid_argument("matrix entries must be [re, im] pairs");
        m(i, k) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
      }
    }
    return DensityState(m);
  } catch (const StateFileError&) {
    throw;
  } catch (const std::exception& e) {
    throw StateFileError(origin + ": " + e.what());
  }
}

// Load a state file from disk.
inline DensityState read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StateFileError(path + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state(buf.str(), path);
}

}  // namespace qfdiv
