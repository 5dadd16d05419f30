#pragma once

// The complexification X -> X ⊕ X with i(x, y) = (-y, x). Complex operators
// on it are stored as pairs (A, B) of real operators acting as A + iB.

#include <utility>

#include "cxs/linalg.hpp"

namespace cxs {

class Complexified {
 public:
  Complexified(RealOperator real_part, RealOperator imag_part);

  const RealOperator& real_part() const { return re_; }
  const RealOperator& imag_part() const { return im_; }
  /// Underlying real dimension n (the pair acts on R^{2n}).
  Eigen::Index dim() const { return re_.rows(); }

  ComplexOperator to_complex() const;
  /// The 2n x 2n real block form [[A, -B], [B, A]].
  RealOperator to_real_block() const;

  static Complexified from_complex(const ComplexOperator& t);

  friend Complexified operator*(const Complexified& s, const Complexified& t);
  friend Complexified operator+(const Complexified& s, const Complexified& t);

 private:
  RealOperator re_;
  RealOperator im_;
};

/// T -> T + i0.
Complexified complexify(const RealOperator& a);

/// (A + iB)(x + iy) = (Ax - By) + i(Ay + Bx).
std::pair<RealVector, RealVector> apply(const Complexified& t, const RealVector& x,
                                        const RealVector& y);

/// Complex spectral norm of A + iB.
double norm(const Complexified& t);

struct NormBounds {
  bool lower_ok = false;
  bool upper_ok = false;
  double norm = 0.0;   // ||A + iB||
  double lower = 0.0;  // max(||A||, ||B||)
  double upper = 0.0;  // sqrt(2) (||A|| + ||B||)
};

/// Checks max(||A||, ||B||) <= ||A + iB|| <= sqrt(2)(||A|| + ||B||).
NormBounds norm_bounds_check(const Complexified& t);

/// ||B|| <= tau * max(1, ||A||).
bool is_real_induced(const Complexified& t, double tau);

/// Whether eig(T) is invariant under complex conjugation as a multiset, with
/// eigenvalues matched up to `cluster_radius` (negative: default radius).
/// Throws precondition if T is not real-induced to tau.
bool spectrum_symmetry_check(const Complexified& t, double tau, double cluster_radius = -1.0);

}  // namespace cxs
