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

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qfdiv {

using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kSupportRelTol = 1e-10;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool is_hermitian(const Matrix& m, double tol = kHermitianTol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

// Hermitian matrix with validated symmetry; the stored matrix is the
// symmetrized (M + M^dag)/2 so downstream solvers see an exactly Hermitian
// operator.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
      throw std::invalid_argument("HermitianOperator: matrix must be square and non-empty");
    if (!is_hermitian(m))
      throw std::invalid_argument("HermitianOperator: matrix is not Hermitian within 1e-12");
    m_ = 0.5 * (m + m.adjoint());
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }

 private:
  Matrix m_;
};

struct EigenDecomposition {
  RealVector values;  // descending
  Matrix vectors;     // columns, matching order
};

namespace detail {

// Phase convention for eigenvector columns: the first component of
// magnitude > 1e-12 is made real and positive. Keeps decompositions of
// identical inputs bit-for-bit identical and degeneracy handling stable.
inline void fix_phases(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const Complex v = vectors(r, c);
      if (std::abs(v) > 1e-12) {
        vectors.col(c) *= std::conj(v) / std::abs(v);
        break;
      }
    }
  }
}

inline EigenDecomposition eig_hermitian_matrix(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  const Eigen::Index d = m.rows();
  EigenDecomposition out;
  out.values.resize(d);
  out.vectors.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {  // Eigen returns ascending order
    out.values[i] = solver.eigenvalues()[d - 1 - i];
    out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  fix_phases(out.vectors);
  return out;
}

inline RealVector eigvals_hermitian(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigvals_hermitian: eigensolver failed to converge");
  return solver.eigenvalues();
}

}  // namespace detail

inline EigenDecomposition eig_hermitian(const HermitianOperator& h) {
  return detail::eig_hermitian_matrix(h.matrix());
}

// Trace of the positive part, Tr max(H, 0). The matrix overload trusts the
// caller to pass a Hermitian combination (the solver reads one triangle).
inline double positive_part_trace(const Matrix& m) {
  const RealVector vals = detail::eigvals_hermitian(m);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    if (vals[i] > 0.0) acc += vals[i];
  return acc;
}

inline double positive_part_trace(const HermitianOperator& h) {
  return positive_part_trace(h.matrix());
}

// Density operator: Hermitian, PSD within -1e-10 (tiny negative eigenvalues
// are clamped to zero), trace within 1e-10 of one. The spectral
// decomposition is computed once at construction and cached.
class DensityState {
 public:
  explicit DensityState(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0)
      throw std::invalid_argument("DensityState: matrix must be square and non-empty");
    if (!is_hermitian(m))
      throw std::invalid_argument("DensityState: matrix is not Hermitian within 1e-12");
    m_ = 0.5 * (m + m.adjoint());
    const double tr = m_.trace().real();
    if (std::abs(tr - 1.0) > kTraceTol)
      throw std::invalid_argument("DensityState: trace differs from 1 by more than 1e-10");
    EigenDecomposition dec = detail::eig_hermitian_matrix(m_);
    const double min_eig = dec.values[dec.values.size() - 1];
    if (min_eig < -kPsdTol)
      throw std::invalid_argument("DensityState: negative eigenvalue below -1e-10");
    if (min_eig < 0.0) {  // clamp rounding-level negatives and renormalize
      double clamped_tr = 0.0;
      for (Eigen::Index i = 0; i < dec.values.size(); ++i) {
        if (dec.values[i] < 0.0) dec.values[i] = 0.0;
        clamped_tr += dec.values[i];
      }
      dec.values /= clamped_tr;
      m_ = dec.vectors * dec.values.asDiagonal() * dec.vectors.adjoint();
      m_ = 0.5 * (m_ + m_.adjoint());
    }
    eig_ = std::move(dec);
  }

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  double trace() const { return m_.trace().real(); }
  // Spectral decomposition, eigenvalues descending.
  const EigenDecomposition& eig() const { return eig_; }
  const RealVector& eigenvalues() const { return eig_.values; }
  const Matrix& eigenvectors() const { return eig_.vectors; }

  HermitianOperator as_hermitian() const { return HermitianOperator(m_); }

 private:
  Matrix m_;
  EigenDecomposition eig_;
};

// Probability vector: entries >= -1e-12 (clamped to zero), sum within 1e-10
// of one.
struct ProbVector {
  std::vector<double> p;

  explicit ProbVector(std::vector<double> probs) : p(std::move(probs)) {
    if (p.empty()) throw std::invalid_argument("ProbVector: empty");
    double sum = 0.0;
    for (double& x : p) {
      if (x < -1e-12) throw std::invalid_argument("ProbVector: negative entry");
      if (x < 0.0) x = 0.0;
      sum += x;
    }
    if (std::abs(sum - 1.0) > kTraceTol)
      throw std::invalid_argument("ProbVector: entries do not sum to 1 within 1e-10");
  }

  int dim() const { return static_cast<int>(p.size()); }
  double operator[](int i) const { return p[static_cast<std::size_t>(i)]; }
};

inline DensityState classical_embed(const ProbVector& probs) {
  const int d = probs.dim();
  Matrix m = Matrix::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = probs.p[i];
  return DensityState(m);
}

// Ginibre-induced random state: G has i.i.d. standard complex Gaussian
// entries, the state is G G^dag / Tr. rank = 0 means full rank. Same seed,
// same dim, same rank give a bitwise identical matrix.
inline DensityState random_density(int dim, std::uint64_t seed, int rank = 0) {
  if (dim < 1) throw std::invalid_argument("random_density: dim must be positive");
  if (rank < 0 || rank > dim) throw std::invalid_argument("random_density: invalid rank");
  if (rank == 0) rank = dim;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(dim, rank);
  for (int c = 0; c < rank; ++c)
    for (int r = 0; r < dim; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(r, c) = Complex(re, im);
    }
  Matrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityState(m);
}

// Largest exponent in the pencil of rho against sigma:
// log min { t : rho <= t * sigma }, computed on the support of sigma.
// Returns +inf when rho has weight outside supp sigma (detection threshold
// 1e-10 on the escaped mass).
namespace detail {

struct SupportAnalysis {
  bool contained = false;      // supp rho inside supp sigma
  double outside_mass = 0.0;   // Tr of rho outside supp sigma
  double dmax = kInf;          // log of the largest pencil eigenvalue
  std::vector<double> kinks;   // positive pencil eigenvalues, ascending
};

inline SupportAnalysis analyze_pencil(const DensityState& rho, const DensityState& sigma) {
  if (rho.dim() != sigma.dim())
    throw std::invalid_argument("state pair: dimension mismatch");
  const int d = sigma.dim();
  const auto& dec = sigma.eig();
  const double tau = kSupportRelTol * dec.values[0];
  int r = 0;
  while (r < d && dec.values[r] > tau) ++r;

  const Matrix rho_tilde = dec.vectors.adjoint() * rho.matrix() * dec.vectors;
  SupportAnalysis out;
  double outside = 0.0;
  for (int i = r; i < d; ++i) outside += rho_tilde(i, i).real();
  out.outside_mass = std::max(outside, 0.0);
  out.contained = out.outside_mass <= kSupportRelTol;

  if (r > 0) {
    Matrix pencil(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        pencil(i, j) = rho_tilde(i, j) / std::sqrt(dec.values[i] * dec.values[j]);
    pencil = 0.5 * (pencil + pencil.adjoint());
    RealVector vals = eigvals_hermitian(pencil);  // ascending
    for (Eigen::Index i = 0; i < vals.size(); ++i)
      if (vals[i] > 0.0) out.kinks.push_back(vals[i]);
  }
  if (out.contained && !out.kinks.empty()) out.dmax = std::log(out.kinks.back());
  return out;
}

}  // namespace detail

inline double max_divergence(const DensityState& rho, const DensityState& sigma) {
  return detail::analyze_pencil(rho, sigma).dmax;
}

// Generalized eigenvalues gamma where an eigenvalue of rho - gamma*sigma
// crosses zero; these are the kinks of the hockey-stick curve. Computed on
// the support of sigma (for coinciding supports this is exact; for strictly
// larger rho support the values are panel hints).
inline std::vector<double> pencil_kinks(const DensityState& rho, const DensityState& sigma) {
  return detail::analyze_pencil(rho, sigma).kinks;
}

// A pair of states with the support/pencil analysis both ways, shared by the
// divergence engines.
struct StatePair {
  DensityState rho, sigma;
  bool supp_rho_in_sigma = false;
  bool supp_sigma_in_rho = false;
  double dmax_rho_sigma = kInf;  // +inf when supp rho escapes supp sigma
  double dmax_sigma_rho = kInf;
  double rho_outside_sigma = 0.0;
  double sigma_outside_rho = 0.0;
  std::vector<double> kinks_rho_sigma;  // ascending
  std::vector<double> kinks_sigma_rho;
};

inline StatePair make_state_pair(const DensityState& rho, const DensityState& sigma) {
  auto fwd = detail::analyze_pencil(rho, sigma);
  auto bwd = detail::analyze_pencil(sigma, rho);
  StatePair pair{rho, sigma};
  pair.supp_rho_in_sigma = fwd.contained;
  pair.supp_sigma_in_rho = bwd.contained;
  pair.dmax_rho_sigma = fwd.dmax;
  pair.dmax_sigma_rho = bwd.dmax;
  pair.rho_outside_sigma = fwd.outside_mass;
  pair.sigma_outside_rho = bwd.outside_mass;
  pair.kinks_rho_sigma = std::move(fwd.kinks);
  pair.kinks_sigma_rho = std::move(bwd.kinks);
  return pair;
}

// Kronecker power rho^{tensor n}; refuses dimensions above `budget`.
inline DensityState tensor_power(const DensityState& state, int n, int budget = 256) {
  if (n < 1) throw std::invalid_argument("tensor_power: n must be >= 1");
  double target = 1.0;
  for (int i = 0; i < n; ++i) {
    target *= state.dim();
    if (target > budget)
      throw std::invalid_argument("tensor_power: dimension " + std::to_string(target) +
                                  " exceeds budget " + std::to_string(budget));
  }
  Matrix acc = state.matrix();
  for (int i = 1; i < n; ++i) {
    const Matrix& a = acc;
    const Matrix& b = state.matrix();
    Matrix next(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index ra = 0; ra < a.rows(); ++ra)
      for (Eigen::Index ca = 0; ca < a.cols(); ++ca)
        next.block(ra * b.rows(), ca * b.cols(), b.rows(), b.cols()) = a(ra, ca) * b;
    acc = std::move(next);
  }
  return DensityState(acc);
}

// Partial trace of a bipartite state with local dimensions (dim_a, dim_b);
// keep = 0 keeps the first factor, keep = 1 the second.
inline DensityState partial_trace(const DensityState& state, int dim_a, int dim_b, int keep) {
  if (dim_a * dim_b != state.dim())
    throw std::invalid_argument("partial_trace: local dimensions do not factor the state");
  if (keep != 0 && keep != 1) throw std::invalid_argument("partial_trace: keep must be 0 or 1");
  const Matrix& m = state.matrix();
  if (keep == 0) {
    Matrix out = Matrix::Zero(dim_a, dim_a);
    for (int i = 0; i < dim_a; ++i)
      for (int j = 0; j < dim_a; ++j)
        for (int k = 0; k < dim_b; ++k) out(i, j) += m(i * dim_b + k, j * dim_b + k);
    return DensityState(out);
  }
  Matrix out = Matrix::Zero(dim_b, dim_b);
  for (int i = 0; i < dim_b; ++i)
    for (int j = 0; j < dim_b; ++j)
      for (int k = 0; k < dim_a; ++k) out(i, j) += m(k * dim_b + i, k * dim_b + j);
  return DensityState(out);
}

// Depolarizing channel rho -> (1-p) rho + p I/d.
inline DensityState depolarize(const DensityState& state, double p) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarize: p must lie in [0, 1]");
  const int d = state.dim();
  Matrix out = (1.0 - p) * state.matrix() + (p / d) * Matrix::Identity(d, d);
  return DensityState(out);
}

}  // namespace qfdiv
