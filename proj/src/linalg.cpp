#include "cxs/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cxs {

int Spectrum::total_multiplicity() const {
  int total = 0;
  for (const auto& e : eigenvalues) total += e.multiplicity;
  return total;
}

int Spectrum::multiplicity_near(Complex z, double radius) const {
  for (const auto& e : eigenvalues) {
    if (std::abs(e.value - z) <= radius) return e.multiplicity;
  }
  return 0;
}

void require_square(Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (rows != cols || rows <= 0) {
    throw Error(ErrorKind::dimension_mismatch,
                std::string(what) + " must be a non-empty square matrix, got " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
}

void require_finite(const RealOperator& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorKind::precondition, std::string(what) + " has non-finite entries");
}

void require_finite(const ComplexOperator& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorKind::precondition, std::string(what) + " has non-finite entries");
}

std::vector<Complex> eigenvalues(const ComplexOperator& a) {
  require_square(a.rows(), a.cols(), "eig input");
  require_finite(a, "eig input");
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
  solver.setMaxIterations(kEigenMaxIterations * std::max<Eigen::Index>(1, a.rows()));
  solver.compute(Eigen::MatrixXcd(a), false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::no_convergence,
                "complex Schur iteration exceeded " + std::to_string(kEigenMaxIterations) +
                    " iterations per eigenvalue (dim " + std::to_string(a.rows()) + ")");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<Complex> eigenvalues(const RealOperator& a) {
  require_square(a.rows(), a.cols(), "eig input");
  require_finite(a, "eig input");
  Eigen::EigenSolver<Eigen::MatrixXd> solver;
  solver.setMaxIterations(kEigenMaxIterations * std::max<Eigen::Index>(1, a.rows()));
  solver.compute(Eigen::MatrixXd(a), false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::no_convergence,
                "real Schur iteration exceeded " + std::to_string(kEigenMaxIterations) +
                    " iterations per eigenvalue (dim " + std::to_string(a.rows()) + ")");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Spectrum cluster(std::vector<Complex> values, double cluster_radius) {
  std::sort(values.begin(), values.end(), [](Complex x, Complex y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  std::vector<std::vector<Complex>> groups;
  for (Complex z : values) {
    auto fits = [&](const std::vector<Complex>& g) {
      return std::all_of(g.begin(), g.end(),
                         [&](Complex w) { return std::abs(w - z) <= cluster_radius; });
    };
    auto it = std::find_if(groups.begin(), groups.end(), fits);
    if (it == groups.end()) {
      groups.push_back({z});
    } else {
      it->push_back(z);
    }
  }
  Spectrum out;
  out.cluster_radius = cluster_radius;
  for (const auto& g : groups) {
    Complex mean = 0.0;
    for (Complex z : g) mean += z;
    mean /= static_cast<double>(g.size());
    out.eigenvalues.push_back({mean, static_cast<int>(g.size())});
  }
  return out;
}

Spectrum eig(const ComplexOperator& a, double cluster_radius) {
  return cluster(eigenvalues(a), cluster_radius);
}

Spectrum eig(const RealOperator& a, double cluster_radius) {
  return cluster(eigenvalues(a), cluster_radius);
}

double default_cluster_radius(const ComplexOperator& a) { return 1e-8 * opnorm(a); }
double default_cluster_radius(const RealOperator& a) { return 1e-8 * opnorm(a); }

RealVector singular_values(const RealOperator& a) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd{Eigen::MatrixXd(a)};
  return svd.singularValues();
}

RealVector singular_values(const ComplexOperator& a) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd{Eigen::MatrixXcd(a)};
  return svd.singularValues();
}

namespace {

int count_above(const RealVector& sv, double tau) {
  if (!sv.allFinite()) throw Error(ErrorKind::precondition, "rank_tol: non-finite input");
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cut = tau * sv(0);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++r;
  }
  return r;
}

}  // namespace

int rank_tol(const RealOperator& a, double tau) {
  if (tau < 0) throw Error(ErrorKind::precondition, "rank_tol: tau must be >= 0");
  return count_above(singular_values(a), tau);
}

int rank_tol(const ComplexOperator& a, double tau) {
  if (tau < 0) throw Error(ErrorKind::precondition, "rank_tol: tau must be >= 0");
  return count_above(singular_values(a), tau);
}

double opnorm(const RealOperator& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

double opnorm(const ComplexOperator& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a)(0);
}

namespace {

template <typename Op>
void check_invertible(const Op& a, double floor) {
  require_square(a.rows(), a.cols(), "inverse input");
  const RealVector sv = singular_values(a);
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smax > 0.0) || smin <= floor * smax) {
    throw NotInvertible(smin, "smallest singular value " + std::to_string(smin) +
                                  " is below the floor " + std::to_string(floor) +
                                  " x sigma_max (" + std::to_string(smax) + ")");
  }
}

}  // namespace

RealOperator inverse(const RealOperator& a, double floor) {
  check_invertible(a, floor);
  return Eigen::MatrixXd(a).partialPivLu().inverse();
}

ComplexOperator inverse(const ComplexOperator& a, double floor) {
  check_invertible(a, floor);
  return Eigen::MatrixXcd(a).partialPivLu().inverse();
}

double condition_number(const RealOperator& a) {
  const RealVector sv = singular_values(a);
  const double smin = sv(sv.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

double inverse_tolerance(const RealOperator& a) {
  return static_cast<double>(a.rows()) * std::numeric_limits<double>::epsilon() *
         condition_number(a);
}

RealOperator identity(Eigen::Index n) { return RealOperator::Identity(n, n); }
ComplexOperator complex_identity(Eigen::Index n) { return ComplexOperator::Identity(n, n); }

Eigen::MatrixXd range_basis(const RealOperator& a, double tau, double floor) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(a), Eigen::ComputeFullU);
  const RealVector& sv = svd.singularValues();
  int r = 0;
  if (sv.size() > 0 && sv(0) > 0.0) {
    const double cut = tau * std::max(sv(0), floor);
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cut) ++r;
    }
  }
  Eigen::MatrixXd basis = svd.matrixU().leftCols(r);
  for (int j = 0; j < r; ++j) {
    auto col = basis.col(j);
    const double scale = col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col(i)) > 1e-12 * scale) {
        if (col(i) < 0) col = -col;
        break;
      }
    }
  }
  return basis;
}

}  // namespace cxs
