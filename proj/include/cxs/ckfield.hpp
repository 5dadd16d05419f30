#pragma once

// C(K) for K a convergent sequence (and two-copy variants), modeled exactly by
// eventually-constant functions, plus 2x2 matrix fields over it.

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "cxs/kernels.hpp"
#include "cxs/linalg.hpp"

namespace cxs {

/// single: K = {1, 1/2, 1/3, ...} ∪ {0}; disjoint_union: K ⊔ K;
/// amalgam: two copies of K glued at 0.
enum class CKSpace { single, disjoint_union, amalgam };

const char* to_string(CKSpace space);
int copies(CKSpace space);
int limit_points(CKSpace space);

/// A point of the model. index >= 0 is the isolated point 1/(index+1) of the
/// given copy; index == kTailIndex stands for the limit point together with
/// every isolated point beyond the stored prefix (they share one value).
struct CKPoint {
  int copy = 0;
  int index = 0;
  static constexpr int kTailIndex = -1;

  bool is_tail() const { return index == kTailIndex; }
  friend bool operator==(const CKPoint&, const CKPoint&) = default;
};

/// f(1/(k+1)) = prefix[copy][k] for k < prefix length, tail[copy] beyond and at 0.
/// Amalgam functions keep tail[0] == tail[1].
class CKFunction {
 public:
  CKFunction() = default;
  CKFunction(CKSpace space, std::vector<double> prefix, double tail);
  CKFunction(CKSpace space, std::vector<double> prefix, std::vector<double> prefix2, double tail,
             double tail2);
  static CKFunction constant(CKSpace space, double value);

  CKSpace space() const { return space_; }
  const std::vector<double>& prefix(int copy = 0) const { return prefix_[static_cast<std::size_t>(copy)]; }
  double tail(int copy = 0) const { return tail_[static_cast<std::size_t>(copy)]; }
  double at(const CKPoint& x) const;

  /// Longest stored prefix over the copies.
  std::size_t prefix_length() const;

  CKFunction operator+(const CKFunction& other) const;
  CKFunction operator-(const CKFunction& other) const;
  CKFunction operator*(const CKFunction& other) const;
  CKFunction operator*(double scalar) const;

  /// Function with prefix length `length` per copy whose value at each
  /// represented point x is value(x).
  template <typename F>
  static CKFunction sample(CKSpace space, std::size_t length, F&& value);

 private:
  CKFunction combine(const CKFunction& other, double (*op)(double, double)) const;

  CKSpace space_ = CKSpace::single;
  std::array<std::vector<double>, 2> prefix_;
  std::array<double, 2> tail_{0.0, 0.0};
};

/// Isolated points 0..length-1 of each copy, followed by the tail point(s).
std::vector<CKPoint> represented_points(CKSpace space, std::size_t length);

template <typename F>
CKFunction CKFunction::sample(CKSpace space, std::size_t length, F&& value) {
  CKFunction out;
  out.space_ = space;
  for (int c = 0; c < copies(space); ++c) {
    auto& pre = out.prefix_[static_cast<std::size_t>(c)];
    pre.resize(length);
    for (std::size_t k = 0; k < length; ++k) pre[k] = value(CKPoint{c, static_cast<int>(k)});
    out.tail_[static_cast<std::size_t>(c)] = value(CKPoint{c, CKPoint::kTailIndex});
  }
  if (space == CKSpace::amalgam) out.tail_[1] = out.tail_[0];
  return out;
}

/// M(x) = [[f1(x), f2(x)], [f3(x), f4(x)]].
struct CKMatrixField {
  CKFunction f1, f2, f3, f4;

  CKSpace space() const { return f1.space(); }
  std::size_t prefix_length() const;
  Eigen::Matrix2d at(const CKPoint& x) const;
  std::vector<CKPoint> points() const { return represented_points(space(), prefix_length()); }

  static CKMatrixField constant(CKSpace space, const Eigen::Matrix2d& m);
  /// Field with prefix length `length` whose value at each point is m(x).
  static CKMatrixField from_pointwise(CKSpace space, std::size_t length,
                                     const std::vector<Eigen::Matrix2d>& values);
};

CKMatrixField operator*(const CKMatrixField& a, const CKMatrixField& b);
CKMatrixField operator+(const CKMatrixField& a, const CKMatrixField& b);

/// J0 = [[0, 1], [-1, 0]].
Eigen::Matrix2d j0();

/// g vanishes at the limit point(s) and tends to 0; in this model: tail == 0.
bool almost_null_membership(const CKFunction& g);
bool almost_null_membership(const CKMatrixField& m);

/// Whether g.Id is strictly singular in the model, i.e. g is almost null.
/// (A multiplier whose tail is nonzero is bounded below on an infinite set.)
bool multiplication_singularity_test(const CKFunction& g);

struct FieldCorrection {
  CKMatrixField n;        // M^2 + I, tails snapped to 0
  std::vector<CKPoint> exceptional;  // F = {x : ||n(x)|| > 1/2}
  CKMatrixField n_prime;  // correction
  CKMatrixField m_prime;  // M + n', with M'(x)^2 = -I
  double max_residual = 0.0;   // max_x ||M'(x)^2 + I||
  double max_defect_tail = 0.0;  // largest |tail| of M^2 + I before snapping
  int max_series_terms = 0;
};

/// Corrects M with M^2 = -I + n, n almost null, to M' = M + n' with M'^2 = -I.
FieldCorrection field_correct(const CKMatrixField& m, double tol = 1e-10,
                              Exec exec = Exec::parallel);

struct FieldConjugation {
  CKMatrixField p;  // [[1, 0], [f1, f2]]
  CKMatrixField q;  // [[1, 0], [-f1/f2, 1/f2]]
  double inverse_residual = 0.0;      // max ||P Q - I||
  double conjugation_residual = 0.0;  // max ||Q J0 P - M'||
  double max_f2f3 = 0.0;              // max f2 f3 (<= -1 + tol)
  double min_abs_f2 = 0.0;
};

FieldConjugation field_conjugator(const CKMatrixField& m_prime, double tol = 1e-10,
                                  Exec exec = Exec::parallel);

struct DecompositionCertificate {
  double max_residual = 0.0;  // max_x ||n'(x) - (W-term + V-term)||
  double max_replacement_residual = 0.0;  // max over F of ||M(x) + n'(x) - J0||
  bool powers_almost_null = false;
  int v_rank = 0;             // 2 |F|
  std::size_t points_checked = 0;
};

/// Checks n' = M Σ b_k n^k W + V n' pointwise, V the restriction to F and
/// W = Id - V. Throws certificate when the identity fails beyond tol.
DecompositionCertificate strict_singular_decomposition(const CKMatrixField& m,
                                                       const FieldCorrection& correction,
                                                       double tol = 1e-10);

struct HyperplaneIdentification {
  CKFunction pair;        // disjoint-union function (f, g)
  CKFunction round_trip;  // back on the amalgam
  bool constraint_holds = false;  // f(0) == g(0)
  bool round_trip_exact = false;
  std::size_t pair_dimension = 0;         // 2 (N + 1) on prefix length N
  std::size_t constrained_dimension = 0;  // 2 N + 1
};

/// h on K ⊔_0 K ↦ (f, g) on K ⊔ K with f(0) = g(0), and back.
HyperplaneIdentification amalgam_hyperplane_identification(const CKFunction& h);

}  // namespace cxs
