#pragma once

// Complex structures J (J^2 = -Id) on R^n and the operations between them.

#include <cstdint>

#include "cxs/kernels.hpp"
#include "cxs/linalg.hpp"

namespace cxs {

inline constexpr double kStructureTol = 1e-10;

/// A real operator with ||J^2 + Id|| <= tolerance on an even-dimensional space.
class ComplexStructure {
 public:
  /// Validates the operator; throws precondition on odd dimension, a defect
  /// above `tol`, or ||J^{-1} + J|| > 2 tol.
  explicit ComplexStructure(RealOperator j, double tol = kStructureTol);

  const RealOperator& matrix() const { return j_; }
  double defect() const { return defect_; }
  Eigen::Index dim() const { return j_.rows(); }

 private:
  RealOperator j_;
  double defect_;
};

/// Block diagonal J0 ⊕ ... ⊕ J0 with J0 = [[0, 1], [-1, 0]].
ComplexStructure canonical_structure(Eigen::Index n);

/// (λ + iμ).x = λx + μJx.
RealVector scalar_action(const ComplexStructure& j, double lambda, double mu, const RealVector& x);

enum class BaseNorm { l1, l2, linf };

double vector_norm(const RealVector& x, BaseNorm base);
/// Operator norm induced by the base vector norm.
double induced_norm(const RealOperator& a, BaseNorm base);

/// sup over θ of ||cos θ x + sin θ Jx|| in the chosen base norm. A 1024-point
/// θ grid is scanned and the best point refined by golden-section search.
double equivalent_norm(const ComplexStructure& j, const RealVector& x, BaseNorm base,
                       Exec exec = Exec::parallel);

struct Conjugation {
  RealOperator p;
  double residual = 0.0;   // ||P K P^{-1} - J||
  double condition = 0.0;  // cond(P)
  bool retried = false;    // whether the randomized pivot order was needed
  std::uint64_t seed = 0;
};

/// An invertible P with P K P^{-1} = J, built by mapping a basis
/// (v1, Kv1, v2, Kv2, ...) onto (w1, Jw1, w2, Jw2, ...).
Conjugation conjugator(const ComplexStructure& j, const ComplexStructure& k,
                       std::uint64_t seed = 0x5eed, double tol = 1e-8);

struct Intertwiner {
  RealOperator sum;        // T + U
  double residual = 0.0;   // ||(T+U)T - U(T+U)||
  bool invertible = false;
  double sigma_min = 0.0;
};

Intertwiner intertwiner_sum(const ComplexStructure& t, const ComplexStructure& u);

struct IdentityResiduals {
  double sum_of_squares = 0.0;  // ||(T+U)^2 + (T-U)^2 + 4 Id||
  double anticommutator = 0.0;  // ||2 Id + TU + UT + (T-U)^2||
};

IdentityResiduals incomparability_identities(const ComplexStructure& t, const ComplexStructure& u);

/// diag(1, J) on dimension m + 1.
RealOperator hyperplane_embed(const ComplexStructure& j);

struct PerturbationIsomorphism {
  RealOperator map;  // 2I + S
  double residual = 0.0;  // ||(2I+S) I - (I+S)(2I+S)||
  bool invertible = false;
  double sigma_min = 0.0;
};

/// For a structure I and a perturbation S with (I+S)^2 = -Id, the map 2I + S
/// intertwines I with I + S.
PerturbationIsomorphism perturbation_isomorphism(const ComplexStructure& i, const RealOperator& s,
                                                 double tol = kStructureTol);

}  // namespace cxs
