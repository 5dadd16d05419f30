#pragma once

// Dense real/complex operator arithmetic shared by every other module.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cxs/error.hpp"

namespace cxs {

using Complex = std::complex<double>;

/// Square real matrix, row-major.
using RealOperator = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
/// Square complex matrix, row-major.
using ComplexOperator = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RealVector = Eigen::VectorXd;
using ComplexVector = Eigen::VectorXcd;

struct Eigenvalue {
  Complex value;
  int multiplicity = 1;
};

/// Eigenvalues merged into clusters; each cluster's members lie within
/// `cluster_radius` of one another and `value` is their mean.
struct Spectrum {
  std::vector<Eigenvalue> eigenvalues;
  double cluster_radius = 0.0;

  int total_multiplicity() const;
  /// Multiplicity of the cluster whose value is within the cluster radius of z (0 if none).
  int multiplicity_near(Complex z, double radius) const;
};

inline constexpr int kEigenMaxIterations = 60;

/// Raw eigenvalues (with repetition) of a complex operator.
std::vector<Complex> eigenvalues(const ComplexOperator& a);
/// Raw eigenvalues of a real operator; complex ones come in exact conjugate pairs.
std::vector<Complex> eigenvalues(const RealOperator& a);

/// Greedy clustering of a multiset of eigenvalues.
Spectrum cluster(std::vector<Complex> values, double cluster_radius);

Spectrum eig(const ComplexOperator& a, double cluster_radius);
Spectrum eig(const RealOperator& a, double cluster_radius);

/// Default clustering radius: 1e-8 times the operator norm.
double default_cluster_radius(const ComplexOperator& a);
double default_cluster_radius(const RealOperator& a);

RealVector singular_values(const RealOperator& a);
RealVector singular_values(const ComplexOperator& a);

/// Number of singular values strictly greater than tau * sigma_max.
int rank_tol(const RealOperator& a, double tau);
int rank_tol(const ComplexOperator& a, double tau);

/// Spectral norm.
double opnorm(const RealOperator& a);
double opnorm(const ComplexOperator& a);

/// Relative floor on sigma_min / sigma_max below which `inverse` refuses.
inline constexpr double kInverseFloor = 1e-13;

RealOperator inverse(const RealOperator& a, double floor = kInverseFloor);
ComplexOperator inverse(const ComplexOperator& a, double floor = kInverseFloor);

/// A-priori accuracy scale of `inverse`: dim * eps * cond(a).
double inverse_tolerance(const RealOperator& a);

double condition_number(const RealOperator& a);

RealOperator identity(Eigen::Index n);
ComplexOperator complex_identity(Eigen::Index n);

void require_square(Eigen::Index rows, Eigen::Index cols, const char* what);
void require_finite(const RealOperator& a, const char* what);
void require_finite(const ComplexOperator& a, const char* what);

/// Orthonormal basis (columns) of the range of `a`, using singular values
/// above tau * max(sigma_max, floor). Columns are ordered by decreasing
/// singular value and signed so their first non-negligible entry is positive.
Eigen::MatrixXd range_basis(const RealOperator& a, double tau, double floor = 0.0);

}  // namespace cxs
