#pragma once

// Lifting almost-complex structures (A^2 = -Id + S with S "small") to exact
// ones, the even/odd dichotomy for real operators, and the parity of the
// real spectrum.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cxs/kernels.hpp"
#include "cxs/linalg.hpp"
#include "cxs/riesz.hpp"
#include "cxs/structures.hpp"

namespace cxs {

/// Finite stand-in for the ideal of inessential operators. An operator fits
/// the budget when it satisfies at least one of the finite bounds.
struct IdealBudget {
  std::optional<int> max_rank;
  std::optional<double> max_norm;

  /// max_rank = ceil(dim / 4), max_norm = 1/2.
  static IdealBudget defaults(Eigen::Index dim);
  static IdealBudget rank_only(int max_rank) { return {max_rank, std::nullopt}; }
  static IdealBudget norm_only(double max_norm) { return {std::nullopt, max_norm}; }

  bool fits(int rank, double norm) const;
  std::string describe() const;
};

/// Relative singular-value threshold used for every rank decision in lifting.
inline constexpr double kRankTol = 1e-9;

/// A real operator together with its stored defect S = A^2 + Id.
class AlmostComplexStructure {
 public:
  explicit AlmostComplexStructure(RealOperator a);

  const RealOperator& a() const { return a_; }
  const RealOperator& defect() const { return s_; }
  int rank_s() const { return rank_s_; }
  double norm_s() const { return norm_s_; }
  Eigen::Index dim() const { return a_.rows(); }

 private:
  RealOperator a_;
  RealOperator s_;
  int rank_s_;
  double norm_s_;
};

/// Coefficients b_1..b_N of -1 + (1 - z)^{-1/2} = Σ b_n z^n.
std::vector<double> binomial_coefficients(int count);

struct LiftOptions {
  double tol = 1e-10;
  /// Contour-to-spectrum margin; negative: 1e-3 * ||operator||.
  double margin = -1.0;
  Exec exec = Exec::parallel;
};

struct ComplexLift {
  ComplexOperator a;             // A = 2iP - iI
  ComplexOperator projection;    // P, Riesz projection onto the cluster near i
  double defect = 0.0;           // ||A^2 + Id||
  double commutator = 0.0;       // ||AB - BA||
  double distance = 0.0;         // ||A - B||
  int correction_rank = 0;       // rank(A - B)
  int defect_rank = 0;           // rank(B^2 + Id)
  double defect_norm = 0.0;      // ||B^2 + Id||
  bool fast_path = false;        // B^2 = -Id already held to tolerance
};

ComplexLift complex_lift(const ComplexOperator& b, const IdealBudget& budget,
                         const LiftOptions& options = {});

struct EvenLift {
  ComplexStructure j;  // A + v
};

struct OddLift {
  RealVector e;            // fixed direction of A + v
  Eigen::MatrixXd y_basis; // n x (n-1), basis of the invariant complement
  RealOperator j_y;        // matrix of A + v on the complement
};

struct LiftCertificates {
  double structure_residual = 0.0;  // even: ||(A+v)^2 + Id||; odd: ||J_Y^2 + Id||
  double block_residual = 0.0;      // odd: ||B^{-1}(A+v)B - diag(1, J_Y)||
  double series_residual = 0.0;     // ||(P+s)^2 - P(I - SP)^{-1}||
  double projection_commutator = 0.0;  // ||PA - AP||
  double imag_part = 0.0;           // ||Im P̂|| before taking the real part
  int rank_s = 0;
  int rank_p = 0;
  int rank_q = 0;
  int rank_v = 0;
  int rank_s_part = 0;   // rank(s)
  int series_terms = 0;
  double spectral_radius = 0.0;  // ρ(SP)
  double norm_v = 0.0;
  RectContour contour;
};

struct LiftOutcome {
  std::variant<OddLift, EvenLift> variant;
  RealOperator v;
  RealOperator s_series;   // s = Σ b_n (SP)^n
  RealOperator p;          // real spectral projection for the small part of eig(S)
  RealOperator defect;     // S = A^2 + Id, as computed from the input
  LiftCertificates certificates;

  bool is_even() const { return std::holds_alternative<EvenLift>(variant); }
  bool is_odd() const { return std::holds_alternative<OddLift>(variant); }
};

LiftOutcome real_dichotomy(const AlmostComplexStructure& acs, const IdealBudget& budget,
                           const LiftOptions& options = {});

/// Caller-supplied decomposition R ⊕ Y: `r` spans the line, the columns of
/// `y_basis` span the hyperplane Y.
struct Splitting {
  RealVector r;
  Eigen::MatrixXd y_basis;

  static Splitting standard(Eigen::Index n);  // r = e_1, Y = span(e_2..e_n)
};

struct AlignedOdd {
  RealOperator f;        // finite-rank repair: A + v + f = diag(1, J') on R ⊕ Y
  RealOperator j_prime;  // J' in the coordinates of splitting.y_basis
  int rank_f = 0;
  bool same_hyperplane = false;  // Y' = Y: rank-1 repair
  int z_codimension = 0;         // codim of Z = Y' ∩ Y ∩ JY (3 when Y' != Y)
  double line_residual = 0.0;    // ||(A+v+f) r - r||
  double plane_residual = 0.0;   // ||(A+v+f) Y - Y J'||
  double structure_residual = 0.0;  // ||J'^2 + Id||
};

/// Expresses an odd outcome in a given splitting R ⊕ Y, using the rank <= 3
/// repair through Z = Y' ∩ Y ∩ JY and a 2-dimensional block k on a complement G.
AlignedOdd align_to_splitting(const LiftOutcome& outcome, const RealOperator& a,
                              const Splitting& splitting, double tol = 1e-8);

struct ParityCertificate {
  std::vector<Eigenvalue> real_eigs;
  int n = 0;
  int parity = 0;  // n mod 2
  double radius = 0.0;
};

/// Real eigenvalues (|Im λ| <= radius) counted with multiplicity. Throws
/// ambiguous_parity when some |Im λ| lies in (radius, 10 radius].
/// `radius` negative: 1e-8 * max(1, ||A||).
ParityCertificate parity_count(const RealOperator& a, double radius = -1.0);

struct TrackPoint {
  double mu = 0.0;
  int n = -1;          // -1 when ambiguous
  bool ambiguous = false;
  std::string note;
};

enum class TrackVerdict { constant, indeterminate, varying };
const char* to_string(TrackVerdict v);

struct HomotopyTrack {
  std::vector<TrackPoint> points;
  TrackVerdict verdict = TrackVerdict::indeterminate;
  int n_start = -1;
  int n_end = -1;
};

/// n(μ) for A + μ s on a uniform grid of [0, 1]. At least one endpoint must be
/// a complex structure or of hyperplane form diag(1, J) up to conjugacy
/// (T^4 = Id with rank(T^2 + Id) = 1).
HomotopyTrack homotopy_parity_track(const RealOperator& a, const RealOperator& s, int grid_points,
                                    double tol = 1e-8, Exec exec = Exec::parallel);

struct ExclusionCertificate {
  bool odd = false;
  Eigen::Index dim = 0;
  int parity_n = 0;
  std::string statement;
};

/// Certifies that only the returned alternative is possible: an odd-dimensional
/// space carries no J with J^2 = -Id (det(J)^2 = (-1)^n), and an even one
/// admits no correction of the form diag(1, J).
ExclusionCertificate exclusion_check(const LiftOutcome& outcome, const RealOperator& a,
                                     double tol = 1e-8);

}  // namespace cxs
