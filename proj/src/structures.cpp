#include "cxs/structures.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace cxs {

ComplexStructure::ComplexStructure(RealOperator j, double tol) : j_(std::move(j)) {
  require_square(j_.rows(), j_.cols(), "complex structure");
  require_finite(j_, "complex structure");
  if (j_.rows() % 2 != 0) {
    throw Error(ErrorKind::precondition,
                "no complex structure in odd dimension " + std::to_string(j_.rows()) +
                    " (det(J)^2 = (-1)^n)");
  }
  const Eigen::Index n = j_.rows();
  defect_ = opnorm(RealOperator(j_ * j_ + identity(n)));
  if (defect_ > tol) {
    throw Error(ErrorKind::precondition,
                "||J^2 + Id|| = " + std::to_string(defect_) + " exceeds tolerance " + std::to_string(tol));
  }
  // J^{-1} + J = J^{-1}(J^2 + Id), so the bound scales with ||J||.
  const double inv_gap = opnorm(RealOperator(inverse(j_) + j_));
  if (inv_gap > 2.0 * tol * std::max(1.0, opnorm(j_))) {
    throw Error(ErrorKind::precondition, "||J^{-1} + J|| = " + std::to_string(inv_gap) + " too large");
  }
}

ComplexStructure canonical_structure(Eigen::Index n) {
  if (n <= 0 || n % 2 != 0) {
    throw Error(ErrorKind::precondition,
                "no complex structure in odd dimension " + std::to_string(n) + " (det(J)^2 = (-1)^n)");
  }
  RealOperator j = RealOperator::Zero(n, n);
  for (Eigen::Index k = 0; k < n; k += 2) {
    j(k, k + 1) = 1.0;
    j(k + 1, k) = -1.0;
  }
  return ComplexStructure(std::move(j), 0.0);
}

RealVector scalar_action(const ComplexStructure& j, double lambda, double mu, const RealVector& x) {
  if (x.size() != j.dim()) throw Error(ErrorKind::dimension_mismatch, "scalar_action: vector length");
  return lambda * x + mu * (j.matrix() * x);
}

double vector_norm(const RealVector& x, BaseNorm base) {
  switch (base) {
    case BaseNorm::l1: return x.lpNorm<1>();
    case BaseNorm::l2: return x.norm();
    case BaseNorm::linf: return x.lpNorm<Eigen::Infinity>();
  }
  return x.norm();
}

double induced_norm(const RealOperator& a, BaseNorm base) {
  switch (base) {
    case BaseNorm::l1: return a.cwiseAbs().colwise().sum().maxCoeff();
    case BaseNorm::l2: return opnorm(a);
    case BaseNorm::linf: return a.cwiseAbs().rowwise().sum().maxCoeff();
  }
  return opnorm(a);
}

double equivalent_norm(const ComplexStructure& j, const RealVector& x, BaseNorm base, Exec exec) {
  if (x.size() != j.dim()) throw Error(ErrorKind::dimension_mismatch, "equivalent_norm: vector length");
  const RealVector jx = j.matrix() * x;
  auto orbit = [&](double theta) {
    return vector_norm(std::cos(theta) * x + std::sin(theta) * jx, base);
  };

  constexpr std::size_t kGrid = 1024;
  const double step = 2.0 * std::numbers::pi / kGrid;
  std::vector<double> values(kGrid);
  values[0] = vector_norm(x, base);  // θ = 0 exactly
  kernels::map_indexed(
      kGrid - 1, exec, [&](std::size_t k) { return orbit(step * static_cast<double>(k + 1)); },
      std::span<double>(values).subspan(1));

  std::size_t best = 0;
  for (std::size_t k = 1; k < kGrid; ++k) {
    if (values[k] > values[best]) best = k;
  }

  // Golden-section refinement on the bracketing grid cell pair.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = step * (static_cast<double>(best) - 1.0);
  double b = step * (static_cast<double>(best) + 1.0);
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = orbit(c), fd = orbit(d);
  for (int it = 0; it < 80 && b - a > 1e-13; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = orbit(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = orbit(d);
    }
  }
  return std::max({values[best], fc, fd});
}

namespace {

/// Basis (v1, Sv1, v2, Sv2, ...) with each v chosen as the normalized
/// component, orthogonal to the span so far, of the candidate column with the
/// largest such component.
bool structure_basis(const RealOperator& s, const Eigen::MatrixXd& candidates,
                     Eigen::MatrixXd& basis) {
  constexpr double kPivotFloor = 1e-8;
  const Eigen::Index n = s.rows();
  basis.resize(n, n);
  Eigen::MatrixXd ortho(n, n);  // orthonormal basis of the span so far
  Eigen::Index filled = 0;
  auto orthogonalize = [&](Eigen::VectorXd v) {
    for (int pass = 0; pass < 2; ++pass) {
      v -= ortho.leftCols(filled) * (ortho.leftCols(filled).transpose() * v);
    }
    return v;
  };
  for (Eigen::Index step = 0; step < n / 2; ++step) {
    Eigen::Index pick = -1;
    double best = -1.0;
    Eigen::VectorXd best_r;
    for (Eigen::Index c = 0; c < candidates.cols(); ++c) {
      Eigen::VectorXd r = orthogonalize(candidates.col(c));
      const double nr = r.norm();
      if (nr > best) {
        best = nr;
        pick = c;
        best_r = std::move(r);
      }
    }
    if (pick < 0 || best < kPivotFloor) return false;
    const Eigen::VectorXd v = best_r / best;
    const Eigen::VectorXd sv = s * v;
    basis.col(2 * step) = v;
    basis.col(2 * step + 1) = sv;
    ortho.col(filled++) = v;
    Eigen::VectorXd w = orthogonalize(sv);
    const double nw = w.norm();
    if (nw < kPivotFloor * std::max(1.0, sv.norm())) return false;
    ortho.col(filled++) = w / nw;
  }
  return true;
}

}  // namespace

Conjugation conjugator(const ComplexStructure& j, const ComplexStructure& k, std::uint64_t seed,
                       double tol) {
  if (j.dim() != k.dim()) throw Error(ErrorKind::dimension_mismatch, "conjugator: dimensions differ");
  const Eigen::Index n = j.dim();

  auto attempt = [&](const Eigen::MatrixXd& candidates, Conjugation& out) {
    Eigen::MatrixXd bj, bk;
    if (!structure_basis(j.matrix(), candidates, bj)) return false;
    if (!structure_basis(k.matrix(), candidates, bk)) return false;
    RealOperator bk_inv;
    try {
      bk_inv = inverse(RealOperator(bk));
    } catch (const NotInvertible&) {
      return false;
    }
    out.p = bj * bk_inv;
    const RealOperator p_inv = inverse(out.p);
    out.residual = opnorm(RealOperator(out.p * k.matrix() * p_inv - j.matrix()));
    out.condition = condition_number(out.p);
    return out.residual <= tol * out.condition;
  };

  Conjugation out;
  out.seed = seed;
  if (attempt(Eigen::MatrixXd::Identity(n, n), out)) return out;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd g(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) g(r, c) = gauss(rng);
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  out.retried = true;
  if (attempt(q, out)) return out;
  throw Error(ErrorKind::certificate,
              "conjugator: basis degenerated or residual " + std::to_string(out.residual) +
                  " exceeds tolerance after retry (seed " + std::to_string(seed) + ")");
}

Intertwiner intertwiner_sum(const ComplexStructure& t, const ComplexStructure& u) {
  if (t.dim() != u.dim()) throw Error(ErrorKind::dimension_mismatch, "intertwiner_sum: dimensions differ");
  Intertwiner out;
  out.sum = t.matrix() + u.matrix();
  out.residual = opnorm(RealOperator(out.sum * t.matrix() - u.matrix() * out.sum));
  const RealVector sv = singular_values(out.sum);
  out.sigma_min = sv(sv.size() - 1);
  out.invertible = sv(0) > 0.0 && out.sigma_min > kInverseFloor * sv(0);
  return out;
}

IdentityResiduals incomparability_identities(const ComplexStructure& t, const ComplexStructure& u) {
  if (t.dim() != u.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "incomparability_identities: dimensions differ");
  }
  const RealOperator& a = t.matrix();
  const RealOperator& b = u.matrix();
  const RealOperator id = identity(t.dim());
  const RealOperator plus = a + b;
  const RealOperator minus = a - b;
  const RealOperator minus_sq = minus * minus;
  IdentityResiduals out;
  out.sum_of_squares = opnorm(RealOperator(plus * plus + minus_sq + 4.0 * id));
  out.anticommutator = opnorm(RealOperator(2.0 * id + a * b + b * a + minus_sq));
  return out;
}

RealOperator hyperplane_embed(const ComplexStructure& j) {
  const Eigen::Index m = j.dim();
  RealOperator out = RealOperator::Zero(m + 1, m + 1);
  out(0, 0) = 1.0;
  out.bottomRightCorner(m, m) = j.matrix();
  return out;
}

PerturbationIsomorphism perturbation_isomorphism(const ComplexStructure& i, const RealOperator& s,
                                                 double tol) {
  if (s.rows() != i.dim() || s.cols() != i.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "perturbation_isomorphism: dimensions differ");
  }
  const RealOperator& a = i.matrix();
  const RealOperator id = identity(i.dim());
  const RealOperator shifted = a + s;
  const double defect = opnorm(RealOperator(shifted * shifted + id));
  if (defect > tol) {
    throw Error(ErrorKind::precondition,
                "||(I+S)^2 + Id|| = " + std::to_string(defect) + " exceeds tolerance " + std::to_string(tol));
  }
  PerturbationIsomorphism out;
  out.map = 2.0 * a + s;
  out.residual = opnorm(RealOperator(out.map * a - shifted * out.map));
  const RealVector sv = singular_values(out.map);
  out.sigma_min = sv(sv.size() - 1);
  out.invertible = sv(0) > 0.0 && out.sigma_min > kInverseFloor * sv(0);
  return out;
}

}  // namespace cxs
