#pragma once

// Seeded random inputs for property tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "cxs/linalg.hpp"

namespace cxs::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double gauss() { return std::normal_distribution<double>()(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  RealOperator real_matrix(Eigen::Index n) {
    RealOperator a(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) a(r, c) = gauss();
    return a;
  }

  RealOperator uniform_matrix(Eigen::Index n) {
    RealOperator a(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) a(r, c) = uniform();
    return a;
  }

  ComplexOperator complex_matrix(Eigen::Index n) {
    ComplexOperator a(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) a(r, c) = Complex(gauss(), gauss());
    return a;
  }

  RealVector vector(Eigen::Index n) {
    RealVector v(n);
    for (Eigen::Index k = 0; k < n; ++k) v(k) = gauss();
    return v;
  }

  RealOperator orthogonal(Eigen::Index n) {
    const Eigen::MatrixXd g = real_matrix(n);
    return Eigen::MatrixXd(Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ());
  }

  ComplexOperator unitary(Eigen::Index n) {
    const Eigen::MatrixXcd g = complex_matrix(n);
    return Eigen::MatrixXcd(Eigen::HouseholderQR<Eigen::MatrixXcd>(g).householderQ());
  }

  /// U diag(s) V^T with singular values in [1, cond], both extremes attained.
  RealOperator conditioned(Eigen::Index n, double cond) {
    Eigen::VectorXd s(n);
    for (Eigen::Index k = 0; k < n; ++k) s(k) = std::exp(uniform(0.0, std::log(cond)));
    s(0) = 1.0;
    if (n > 1) s(n - 1) = cond;
    return orthogonal(n) * s.asDiagonal() * orthogonal(n).transpose();
  }

  ComplexOperator complex_conditioned(Eigen::Index n, double cond) {
    Eigen::VectorXd s(n);
    for (Eigen::Index k = 0; k < n; ++k) s(k) = std::exp(uniform(0.0, std::log(cond)));
    s(0) = 1.0;
    if (n > 1) s(n - 1) = cond;
    return unitary(n) * s.cast<Complex>().asDiagonal() * unitary(n).adjoint();
  }

  /// Rank-r matrix with spectral norm exactly `norm` (r >= 1).
  RealOperator low_rank(Eigen::Index n, Eigen::Index r, double norm) {
    const Eigen::MatrixXd u = orthogonal(n).leftCols(r);
    const Eigen::MatrixXd v = orthogonal(n).leftCols(r);
    Eigen::VectorXd s(r);
    for (Eigen::Index k = 0; k < r; ++k) s(k) = norm * uniform(0.2, 1.0);
    s(0) = norm;
    return u * s.asDiagonal() * v.transpose();
  }

 private:
  std::mt19937_64 rng_;
};

/// J0 ⊕ ... ⊕ J0 on dimension n (even).
inline RealOperator canonical_j(Eigen::Index n) {
  RealOperator j = RealOperator::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; k += 2) {
    j(k, k + 1) = 1.0;
    j(k + 1, k) = -1.0;
  }
  return j;
}

}  // namespace cxs::testing
