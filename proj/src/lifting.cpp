#include "cxs/lifting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cxs/complexification.hpp"

namespace cxs {

IdealBudget IdealBudget::defaults(Eigen::Index dim) {
  return {static_cast<int>((dim + 3) / 4), 0.5};
}

bool IdealBudget::fits(int rank, double norm) const {
  if (!max_rank && !max_norm) throw Error(ErrorKind::precondition, "IdealBudget needs a finite bound");
  return (max_rank && rank <= *max_rank) || (max_norm && norm <= *max_norm);
}

std::string IdealBudget::describe() const {
  std::string out = "rank <= ";
  out += max_rank ? std::to_string(*max_rank) : std::string("unlimited");
  out += " or norm <= ";
  out += max_norm ? std::to_string(*max_norm) : std::string("unlimited");
  return out;
}

namespace {

/// Singular values above kRankTol * scale.
int numerical_rank(const RealOperator& m, double scale) {
  const RealVector sv = singular_values(m);
  const double cut = kRankTol * scale;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++r;
  }
  return r;
}

double operator_scale(const RealOperator& a) {
  const double na = opnorm(a);
  return std::max(1.0, na * na);
}

/// J0 blocks on dimension q; with `fixed`, a leading 1 followed by J0 blocks.
Eigen::MatrixXd block_structure(Eigen::Index q, bool fixed) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(q, q);
  Eigen::Index k = 0;
  if (fixed) {
    c(0, 0) = 1.0;
    k = 1;
  }
  for (; k + 1 < q; k += 2) {
    c(k, k + 1) = 1.0;
    c(k + 1, k) = -1.0;
  }
  return c;
}

}  // namespace

AlmostComplexStructure::AlmostComplexStructure(RealOperator a) : a_(std::move(a)) {
  require_square(a_.rows(), a_.cols(), "almost-complex structure");
  require_finite(a_, "almost-complex structure");
  s_ = a_ * a_ + identity(a_.rows());
  norm_s_ = opnorm(s_);
  rank_s_ = numerical_rank(s_, operator_scale(a_));
}

std::vector<double> binomial_coefficients(int count) {
  if (count < 1) throw Error(ErrorKind::precondition, "binomial_coefficients: need N >= 1");
  std::vector<double> b(static_cast<std::size_t>(count));
  double bk = 1.0;  // b_0
  for (int k = 0; k < count; ++k) {
    bk *= (2.0 * k + 1.0) / (2.0 * k + 2.0);
    b[static_cast<std::size_t>(k)] = bk;
  }
  return b;
}

ComplexLift complex_lift(const ComplexOperator& b, const IdealBudget& budget,
                         const LiftOptions& options) {
  require_square(b.rows(), b.cols(), "complex_lift input");
  require_finite(b, "complex_lift input");
  const Eigen::Index n = b.rows();
  const ComplexOperator id = complex_identity(n);
  const Complex i_unit(0.0, 1.0);

  ComplexLift out;
  const ComplexOperator s = b * b + id;
  out.defect_norm = opnorm(s);
  const double bnorm = opnorm(b);
  {
    const RealVector sv = singular_values(s);
    const double cut = kRankTol * std::max(1.0, bnorm * bnorm);
    for (Eigen::Index k = 0; k < sv.size(); ++k) out.defect_rank += sv(k) > cut ? 1 : 0;
  }
  if (!budget.fits(out.defect_rank, out.defect_norm)) {
    throw Error(ErrorKind::budget, "defect B^2 + Id (rank " + std::to_string(out.defect_rank) +
                                       ", norm " + std::to_string(out.defect_norm) +
                                       ") does not fit " + budget.describe());
  }

  if (out.defect_norm <= options.tol) {
    out.fast_path = true;
    out.a = b;
    out.projection = (b + i_unit * id) / (2.0 * i_unit);
  } else {
    const double margin = options.margin >= 0.0 ? options.margin : 1e-3 * bnorm;
    const std::vector<Complex> ev = eigenvalues(b);
    int upper = 0;
    for (Complex z : ev) {
      if (std::abs(z.imag()) <= margin) {
        throw Error(ErrorKind::no_separating_contour,
                    "eigenvalue (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                        ") lies within the margin of the real axis");
      }
      upper += z.imag() > 0.0 ? 1 : 0;
    }
    if (upper == 0) {
      out.projection = ComplexOperator::Zero(n, n);
    } else if (upper == n) {
      out.projection = id;
    } else {
      const Spectrum spectrum = cluster(ev, default_cluster_radius(b));
      const CircleContour contour =
          select_circle(spectrum, [](Complex z) { return z.imag() > 0.0; }, margin);
      RieszOptions ro;
      ro.tol = options.tol;
      ro.margin = margin;
      ro.exec = options.exec;
      out.projection = riesz_projection(b, contour, ro).projection;
    }
    out.a = 2.0 * i_unit * out.projection - i_unit * id;
  }

  out.defect = opnorm(ComplexOperator(out.a * out.a + id));
  out.commutator = opnorm(ComplexOperator(out.a * b - b * out.a));
  const ComplexOperator diff = out.a - b;
  out.distance = opnorm(diff);
  {
    const RealVector sv = singular_values(diff);
    const double cut = kRankTol * std::max(1.0, bnorm);
    for (Eigen::Index k = 0; k < sv.size(); ++k) out.correction_rank += sv(k) > cut ? 1 : 0;
  }
  if (out.defect > options.tol) {
    throw Error(ErrorKind::certificate,
                "lifted operator has ||A^2 + Id|| = " + std::to_string(out.defect));
  }
  return out;
}

LiftOutcome real_dichotomy(const AlmostComplexStructure& acs, const IdealBudget& budget,
                           const LiftOptions& options) {
  const RealOperator& a = acs.a();
  const RealOperator& s = acs.defect();
  const Eigen::Index n = acs.dim();
  const RealOperator id = identity(n);
  const double scale = operator_scale(a);
  const double certify = std::max(100.0 * options.tol, 1e-8);

  if (!budget.fits(acs.rank_s(), acs.norm_s())) {
    throw Error(ErrorKind::budget, "defect S (rank " + std::to_string(acs.rank_s()) + ", norm " +
                                       std::to_string(acs.norm_s()) + ") does not fit " +
                                       budget.describe());
  }

  LiftOutcome out;
  out.defect = s;
  LiftCertificates& cert = out.certificates;
  cert.rank_s = acs.rank_s();

  if (n % 2 == 0 && acs.norm_s() <= options.tol) {
    out.v = RealOperator::Zero(n, n);
    out.s_series = RealOperator::Zero(n, n);
    out.p = id;
    cert.structure_residual = acs.norm_s();
    cert.rank_p = static_cast<int>(n);
    out.variant = EvenLift{ComplexStructure(a, certify)};
    return out;
  }

  // Split eig(S) by a rectangle inside the unit disk, symmetric about R.
  const double margin =
      options.margin >= 0.0 ? options.margin : std::max(1e-3 * acs.norm_s(), 1e-12);
  const Spectrum spec_s = eig(s, default_cluster_radius(s));
  cert.contour = select_disk_contour(spec_s, margin);
  RieszOptions ro;
  ro.tol = options.tol;
  ro.margin = margin;
  ro.exec = options.exec;
  const Complexified s_hat = complexify(s);
  const SpectralProjection p_hat = riesz_projection(s_hat.to_complex(), cert.contour, ro);
  cert.imag_part = opnorm(RealOperator(p_hat.projection.imag()));
  const RealOperator p = real_part_projection(p_hat, options.tol);
  const RealOperator q = id - p;
  cert.projection_commutator = opnorm(RealOperator(p * a - a * p));

  double rho = 0.0;
  for (const auto& e : p_hat.enclosed) rho = std::max(rho, std::abs(e.value));
  cert.spectral_radius = rho;
  if (rho >= 1.0 - margin) {
    throw Error(ErrorKind::series, "spectral radius of SP is " + std::to_string(rho));
  }

  // s = Σ b_k (SP)^k, truncated once both the geometric tail bound and the
  // current term are below tol / 10.
  const RealOperator sp = s * p;
  RealOperator power = sp;
  RealOperator series = RealOperator::Zero(n, n);
  double bk = 1.0;
  double rho_k = 1.0;
  int k = 1;
  constexpr int kMaxTerms = 100000;
  for (;; ++k) {
    bk *= (2.0 * k - 1.0) / (2.0 * k);
    rho_k *= rho;
    series += bk * power;
    const double tail = bk * rho_k / (1.0 - rho);
    if (tail < options.tol / 10.0 && bk * power.norm() < options.tol / 10.0) break;
    if (k >= kMaxTerms || !power.allFinite()) {
      throw Error(ErrorKind::series, "binomial series did not converge after " + std::to_string(k) + " terms");
    }
    power = power * sp;
  }
  cert.series_terms = k;
  out.s_series = series;
  {
    const RealOperator ps = p + series;
    const RealOperator target = p * inverse(RealOperator(id - sp));
    cert.series_residual = opnorm(RealOperator(ps * ps - target));
    if (cert.series_residual > certify * std::max(1.0, opnorm(ps) * opnorm(ps))) {
      throw Error(ErrorKind::certificate,
                  "(P+s)^2 - P(I-S)^{-1} residual " + std::to_string(cert.series_residual));
    }
  }

  // Projections have norm >= 1 unless zero, so rank cuts are floored at 1.
  const Eigen::MatrixXd w = range_basis(q, kRankTol, 1.0);
  const Eigen::Index q_rank = w.cols();
  cert.rank_q = static_cast<int>(q_rank);
  cert.rank_p = static_cast<int>(range_basis(p, kRankTol, 1.0).cols());
  if (cert.rank_p % 2 != 0 || cert.rank_p + cert.rank_q != n) {
    throw Error(ErrorKind::internal_invariant,
                "rank(P) = " + std::to_string(cert.rank_p) + ", rank(Q) = " + std::to_string(cert.rank_q) +
                    " on dimension " + std::to_string(n));
  }

  const bool odd = q_rank % 2 != 0;
  const Eigen::MatrixXd f = w * block_structure(q_rank, odd) * w.transpose();
  const RealOperator fq = f * q;
  const RealOperator s_prime = fq - a * q;
  out.v = a * series + s_prime;
  out.p = p;
  const RealOperator corrected = a + out.v;

  cert.norm_v = opnorm(out.v);
  cert.rank_v = numerical_rank(out.v, scale);
  cert.rank_s_part = numerical_rank(series, scale);
  if (cert.rank_v > 3 * cert.rank_s + 3) {
    throw Error(ErrorKind::budget, "correction v has rank " + std::to_string(cert.rank_v) +
                                       " > 3 rank(S) + 3 = " + std::to_string(3 * cert.rank_s + 3));
  }

  if (!odd) {
    cert.structure_residual = opnorm(RealOperator(corrected * corrected + id));
    if (cert.structure_residual > certify * scale) {
      throw Error(ErrorKind::certificate,
                  "||(A+v)^2 + Id|| = " + std::to_string(cert.structure_residual));
    }
    out.variant = EvenLift{ComplexStructure(corrected, certify * scale)};
    return out;
  }

  OddLift lift;
  lift.e = w.col(0);
  const Eigen::MatrixXd range_p = range_basis(p, kRankTol, 1.0);
  lift.y_basis.resize(n, n - 1);
  lift.y_basis << range_p, w.rightCols(q_rank - 1);
  Eigen::MatrixXd basis(n, n);
  basis << lift.e, lift.y_basis;
  const RealOperator in_basis = inverse(RealOperator(basis)) * corrected * basis;
  lift.j_y = in_basis.bottomRightCorner(n - 1, n - 1);
  RealOperator block = RealOperator::Zero(n, n);
  block(0, 0) = 1.0;
  block.bottomRightCorner(n - 1, n - 1) = lift.j_y;
  cert.block_residual = opnorm(RealOperator(in_basis - block));
  cert.structure_residual =
      n > 1 ? opnorm(RealOperator(lift.j_y * lift.j_y + identity(n - 1))) : 0.0;
  if (cert.block_residual > certify * scale || cert.structure_residual > certify * scale) {
    throw Error(ErrorKind::certificate, "odd block form residual " + std::to_string(cert.block_residual) +
                                            ", ||J_Y^2 + Id|| = " + std::to_string(cert.structure_residual));
  }
  out.variant = std::move(lift);
  return out;
}

Splitting Splitting::standard(Eigen::Index n) {
  Splitting out;
  out.r = RealVector::Unit(n, 0);
  out.y_basis = Eigen::MatrixXd::Identity(n, n).rightCols(n - 1);
  return out;
}

AlignedOdd align_to_splitting(const LiftOutcome& outcome, const RealOperator& a,
                              const Splitting& splitting, double tol) {
  const auto* odd = std::get_if<OddLift>(&outcome.variant);
  if (!odd) throw Error(ErrorKind::precondition, "align_to_splitting needs an odd outcome");
  const Eigen::Index n = a.rows();
  if (splitting.r.size() != n || splitting.y_basis.rows() != n || splitting.y_basis.cols() != n - 1) {
    throw Error(ErrorKind::dimension_mismatch, "splitting does not match the operator dimension");
  }
  const RealOperator t = a + outcome.v;
  const Eigen::Index m = n - 1;

  Eigen::MatrixXd target(n, n);
  target << splitting.r, splitting.y_basis;
  const Eigen::MatrixXd target_inv = inverse(RealOperator(target));
  const Eigen::RowVectorXd ell = target_inv.row(0);  // ℓ(r) = 1, ℓ(Y) = 0

  AlignedOdd out;
  const Eigen::RowVectorXd along = ell * odd->y_basis;
  const double ref = ell.norm() * std::max(1.0, odd->y_basis.norm());
  RealOperator t_prime;
  if (m == 0 || along.norm() <= tol * ref) {
    out.same_hyperplane = true;
    Eigen::MatrixXd images(n, n);
    images << splitting.r, t * splitting.y_basis;
    t_prime = images * target_inv;
  } else {
    Eigen::MatrixXd constraints(2, m);
    constraints.row(0) = along;
    constraints.row(1) = along * odd->j_y;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(constraints);
    lu.setThreshold(tol);
    if (lu.rank() < 2) {
      // Z would have codimension 2: a rank-2 perturbation of A+v with square
      // -Id on an odd-dimensional space, which cannot exist.
      throw Error(ErrorKind::internal_invariant, "Z = Y' ∩ Y ∩ JY has codimension 2");
    }
    // FullPivLU::kernel() returns one zero column for a trivial kernel.
    const Eigen::MatrixXd z =
        lu.rank() == m ? Eigen::MatrixXd(n, 0) : Eigen::MatrixXd(odd->y_basis * lu.kernel());
    out.z_codimension = static_cast<int>(n - z.cols());
    // G: the part of Y orthogonal to Z.
    Eigen::MatrixXd y_off_z = splitting.y_basis;
    if (z.cols() > 0) {
      const Eigen::MatrixXd zq = Eigen::HouseholderQR<Eigen::MatrixXd>(z).householderQ() *
                                 Eigen::MatrixXd::Identity(n, z.cols());
      y_off_z -= zq * (zq.transpose() * splitting.y_basis);
    }
    const Eigen::MatrixXd g = range_basis(y_off_z, 1e-8);
    if (g.cols() != 2) {
      throw Error(ErrorKind::internal_invariant,
                  "complement of Z in Y has dimension " + std::to_string(g.cols()));
    }
    Eigen::MatrixXd basis(n, n), images(n, n);
    basis << splitting.r, g, z;
    images << splitting.r, g.col(1), -g.col(0), t * z;
    t_prime = images * inverse(RealOperator(basis));
  }

  out.f = t_prime - t;
  out.rank_f = numerical_rank(out.f, std::max(1.0, opnorm(t)));
  const Eigen::MatrixXd ty = t_prime * splitting.y_basis;
  out.j_prime = (splitting.y_basis.transpose() * splitting.y_basis)
                    .ldlt()
                    .solve(splitting.y_basis.transpose() * ty);
  out.plane_residual = (ty - splitting.y_basis * out.j_prime).norm();
  out.line_residual = (t_prime * splitting.r - splitting.r).norm();
  out.structure_residual =
      m > 0 ? opnorm(RealOperator(out.j_prime * out.j_prime + identity(m))) : 0.0;
  return out;
}

ParityCertificate parity_count(const RealOperator& a, double radius) {
  require_square(a.rows(), a.cols(), "parity_count input");
  ParityCertificate out;
  out.radius = radius >= 0.0 ? radius : 1e-8 * std::max(1.0, opnorm(a));
  std::vector<Complex> real_values;
  for (Complex z : eigenvalues(a)) {
    const double im = std::abs(z.imag());
    if (im <= out.radius) {
      real_values.emplace_back(z.real(), 0.0);
    } else if (im <= 10.0 * out.radius) {
      throw Error(ErrorKind::ambiguous_parity,
                  "eigenvalue (" + std::to_string(z.real()) + ", " + std::to_string(z.imag()) +
                      ") is within 10x the radius " + std::to_string(out.radius) + " of the real axis");
    }
  }
  out.n = static_cast<int>(real_values.size());
  out.parity = out.n % 2;
  out.real_eigs = cluster(std::move(real_values), out.radius).eigenvalues;
  if (out.parity != static_cast<int>(a.rows() % 2)) {
    throw Error(ErrorKind::internal_invariant, "real-eigenvalue parity differs from dim mod 2");
  }
  return out;
}

const char* to_string(TrackVerdict v) {
  switch (v) {
    case TrackVerdict::constant: return "constant";
    case TrackVerdict::indeterminate: return "indeterminate";
    case TrackVerdict::varying: return "varying";
  }
  return "indeterminate";
}

namespace {

bool in_structure_class(const RealOperator& t, double tol) {
  const Eigen::Index n = t.rows();
  const double nt = std::max(1.0, opnorm(t));
  const RealOperator sq = t * t;
  const RealOperator defect = sq + identity(n);
  if (opnorm(defect) <= tol * nt * nt) return true;
  const double quartic = opnorm(RealOperator(sq * sq - identity(n)));
  return quartic <= tol * nt * nt * nt * nt && rank_tol(defect, 1e-6) == 1;
}

}  // namespace

HomotopyTrack homotopy_parity_track(const RealOperator& a, const RealOperator& s, int grid_points,
                                    double tol, Exec exec) {
  require_square(a.rows(), a.cols(), "homotopy start");
  if (s.rows() != a.rows() || s.cols() != a.cols()) {
    throw Error(ErrorKind::dimension_mismatch, "homotopy direction differs in dimension");
  }
  if (grid_points < 2) throw Error(ErrorKind::precondition, "homotopy needs at least 2 grid points");
  if (!in_structure_class(a, tol) && !in_structure_class(a + s, tol)) {
    throw Error(ErrorKind::precondition,
                "neither endpoint is a complex structure or of hyperplane form diag(1, J)");
  }

  HomotopyTrack out;
  out.points.resize(static_cast<std::size_t>(grid_points));
  const double denom = grid_points - 1.0;
  kernels::map_indexed(
      out.points.size(), exec,
      [&](std::size_t k) {
        TrackPoint pt;
        pt.mu = static_cast<double>(k) / denom;
        try {
          pt.n = parity_count(RealOperator(a + pt.mu * s)).n;
        } catch (const Error& err) {
          if (err.kind() != ErrorKind::ambiguous_parity) throw;
          pt.ambiguous = true;
          pt.note = err.what();
        }
        return pt;
      },
      std::span<TrackPoint>(out.points));

  out.n_start = out.points.front().n;
  out.n_end = out.points.back().n;
  bool ambiguous = false;
  int parity = -1;
  bool varying = false;
  for (const auto& pt : out.points) {
    if (pt.ambiguous) {
      ambiguous = true;
      continue;
    }
    if (parity < 0) parity = pt.n % 2;
    if (pt.n % 2 != parity) varying = true;
  }
  out.verdict = varying ? TrackVerdict::varying
                        : (ambiguous ? TrackVerdict::indeterminate : TrackVerdict::constant);
  return out;
}

ExclusionCertificate exclusion_check(const LiftOutcome& outcome, const RealOperator& a, double tol) {
  const Eigen::Index n = a.rows();
  if (outcome.defect.rows() != n) {
    throw Error(ErrorKind::certificate, "outcome was produced for a different dimension");
  }
  const RealOperator s = a * a + identity(n);
  const double mismatch = opnorm(RealOperator(s - outcome.defect));
  if (mismatch > tol * std::max(1.0, opnorm(s))) {
    throw Error(ErrorKind::certificate,
                "recomputed S differs from the outcome's defect by " + std::to_string(mismatch));
  }
  ExclusionCertificate out;
  out.dim = n;
  out.odd = outcome.is_odd();
  out.parity_n = parity_count(a).n;
  if (out.odd) {
    if (n % 2 == 0) throw Error(ErrorKind::certificate, "odd outcome claimed on an even-dimensional space");
    out.statement = "dimension " + std::to_string(n) +
                    " is odd: det(J)^2 = (-1)^n = -1 has no real solution, so no J with J^2 = -Id "
                    "exists; real eigenvalue count of A is " + std::to_string(out.parity_n) + " (odd)";
  } else {
    if (n % 2 != 0) throw Error(ErrorKind::certificate, "even outcome claimed on an odd-dimensional space");
    out.statement = "dimension " + std::to_string(n) +
                    " is even: a correction of the form diag(1, J) would need J^2 = -Id on "
                    "dimension " + std::to_string(n - 1) + ", which is odd; real eigenvalue count of A is " +
                    std::to_string(out.parity_n) + " (even)";
  }
  return out;
}

}  // namespace cxs
