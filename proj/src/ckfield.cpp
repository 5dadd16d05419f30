#include "cxs/ckfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cxs {

const char* to_string(CKSpace space) {
  switch (space) {
    case CKSpace::single: return "single";
    case CKSpace::disjoint_union: return "union";
    case CKSpace::amalgam: return "amalgam";
  }
  return "single";
}

int copies(CKSpace space) { return space == CKSpace::single ? 1 : 2; }

int limit_points(CKSpace space) { return space == CKSpace::disjoint_union ? 2 : 1; }

namespace {

void require_finite_values(const std::vector<double>& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw Error(ErrorKind::precondition, std::string(what) + ": non-finite value");
  }
}

}  // namespace

CKFunction::CKFunction(CKSpace space, std::vector<double> prefix, double tail)
    : CKFunction(space, std::move(prefix), {}, tail, tail) {}

CKFunction::CKFunction(CKSpace space, std::vector<double> prefix, std::vector<double> prefix2,
                       double tail, double tail2)
    : space_(space) {
  require_finite_values(prefix, "CKFunction prefix");
  require_finite_values(prefix2, "CKFunction prefix2");
  if (!std::isfinite(tail) || !std::isfinite(tail2)) {
    throw Error(ErrorKind::precondition, "CKFunction tail: non-finite value");
  }
  if (space == CKSpace::single && (!prefix2.empty() || tail2 != tail)) {
    throw Error(ErrorKind::precondition, "a function on K has a single copy");
  }
  if (space == CKSpace::amalgam && tail2 != tail) {
    throw Error(ErrorKind::precondition, "amalgam copies share the limit point: tails must agree");
  }
  prefix_[0] = std::move(prefix);
  prefix_[1] = std::move(prefix2);
  tail_ = {tail, tail2};
}

CKFunction CKFunction::constant(CKSpace space, double value) {
  return CKFunction(space, {}, {}, value, value);
}

double CKFunction::at(const CKPoint& x) const {
  if (x.copy < 0 || x.copy >= copies(space_)) {
    throw Error(ErrorKind::dimension_mismatch, "CKPoint copy out of range");
  }
  const auto c = static_cast<std::size_t>(x.copy);
  if (x.is_tail()) return tail_[c];
  if (x.index < 0) throw Error(ErrorKind::dimension_mismatch, "CKPoint index out of range");
  const auto k = static_cast<std::size_t>(x.index);
  return k < prefix_[c].size() ? prefix_[c][k] : tail_[c];
}

std::size_t CKFunction::prefix_length() const {
  return std::max(prefix_[0].size(), prefix_[1].size());
}

CKFunction CKFunction::combine(const CKFunction& other, double (*op)(double, double)) const {
  if (space_ != other.space_) {
    throw Error(ErrorKind::dimension_mismatch, std::string("CKFunction spaces differ: ") +
                                                   to_string(space_) + " vs " + to_string(other.space_));
  }
  CKFunction out;
  out.space_ = space_;
  for (std::size_t c = 0; c < 2; ++c) {
    const std::size_t len = std::max(prefix_[c].size(), other.prefix_[c].size());
    out.prefix_[c].resize(len);
    for (std::size_t k = 0; k < len; ++k) {
      const double a = k < prefix_[c].size() ? prefix_[c][k] : tail_[c];
      const double b = k < other.prefix_[c].size() ? other.prefix_[c][k] : other.tail_[c];
      out.prefix_[c][k] = op(a, b);
    }
    out.tail_[c] = op(tail_[c], other.tail_[c]);
  }
  return out;
}

CKFunction CKFunction::operator+(const CKFunction& other) const {
  return combine(other, [](double a, double b) { return a + b; });
}

CKFunction CKFunction::operator-(const CKFunction& other) const {
  return combine(other, [](double a, double b) { return a - b; });
}

CKFunction CKFunction::operator*(const CKFunction& other) const {
  return combine(other, [](double a, double b) { return a * b; });
}

CKFunction CKFunction::operator*(double scalar) const {
  CKFunction out = *this;
  for (auto& pre : out.prefix_) {
    for (double& x : pre) x *= scalar;
  }
  for (double& t : out.tail_) t *= scalar;
  return out;
}

std::vector<CKPoint> represented_points(CKSpace space, std::size_t length) {
  std::vector<CKPoint> out;
  const int n_copies = copies(space);
  out.reserve(static_cast<std::size_t>(n_copies) * length + 2);
  for (int c = 0; c < n_copies; ++c) {
    for (std::size_t k = 0; k < length; ++k) out.push_back({c, static_cast<int>(k)});
  }
  for (int c = 0; c < limit_points(space); ++c) out.push_back({c, CKPoint::kTailIndex});
  return out;
}

namespace {

/// Position of x in represented_points(space, length).
std::size_t point_position(CKSpace space, std::size_t length, const CKPoint& x) {
  const auto c = static_cast<std::size_t>(x.copy);
  if (!x.is_tail()) return c * length + static_cast<std::size_t>(x.index);
  const std::size_t limit = space == CKSpace::disjoint_union ? c : 0;
  return static_cast<std::size_t>(copies(space)) * length + limit;
}

double norm2(const Eigen::Matrix2d& m) {
  return Eigen::JacobiSVD<Eigen::Matrix2d>(m).singularValues()(0);
}

/// M Σ_{k>=1} b_k n^k, stopping once the geometric tail bound (ratio ||n||)
/// falls below `cut`.
Eigen::Matrix2d corrected_series(const Eigen::Matrix2d& m, const Eigen::Matrix2d& n, double cut,
                                 int& terms) {
  const double r = norm2(n);
  if (r >= 1.0) throw Error(ErrorKind::series, "||n(x)|| >= 1 off the exceptional set");
  Eigen::Matrix2d sum = Eigen::Matrix2d::Zero();
  Eigen::Matrix2d power = n;
  double bk = 1.0;
  double rk = 1.0;
  terms = 0;
  if (r == 0.0) return sum;
  for (int k = 1; k < 10000; ++k) {
    bk *= (2.0 * k - 1.0) / (2.0 * k);
    rk *= r;
    sum += bk * power;
    terms = k;
    if (bk * rk / (1.0 - r) < cut) break;
    power = power * n;
  }
  return m * sum;
}

}  // namespace

std::size_t CKMatrixField::prefix_length() const {
  return std::max({f1.prefix_length(), f2.prefix_length(), f3.prefix_length(), f4.prefix_length()});
}

Eigen::Matrix2d CKMatrixField::at(const CKPoint& x) const {
  Eigen::Matrix2d m;
  m << f1.at(x), f2.at(x), f3.at(x), f4.at(x);
  return m;
}

CKMatrixField CKMatrixField::constant(CKSpace space, const Eigen::Matrix2d& m) {
  return {CKFunction::constant(space, m(0, 0)), CKFunction::constant(space, m(0, 1)),
          CKFunction::constant(space, m(1, 0)), CKFunction::constant(space, m(1, 1))};
}

CKMatrixField CKMatrixField::from_pointwise(CKSpace space, std::size_t length,
                                            const std::vector<Eigen::Matrix2d>& values) {
  if (values.size() != represented_points(space, length).size()) {
    throw Error(ErrorKind::dimension_mismatch, "from_pointwise: one value per represented point");
  }
  auto entry = [&](int r, int c) {
    return CKFunction::sample(space, length, [&](const CKPoint& x) {
      return values[point_position(space, length, x)](r, c);
    });
  };
  return {entry(0, 0), entry(0, 1), entry(1, 0), entry(1, 1)};
}

CKMatrixField operator*(const CKMatrixField& a, const CKMatrixField& b) {
  return {a.f1 * b.f1 + a.f2 * b.f3, a.f1 * b.f2 + a.f2 * b.f4, a.f3 * b.f1 + a.f4 * b.f3,
          a.f3 * b.f2 + a.f4 * b.f4};
}

CKMatrixField operator+(const CKMatrixField& a, const CKMatrixField& b) {
  return {a.f1 + b.f1, a.f2 + b.f2, a.f3 + b.f3, a.f4 + b.f4};
}

Eigen::Matrix2d j0() {
  Eigen::Matrix2d j;
  j << 0.0, 1.0, -1.0, 0.0;
  return j;
}

bool almost_null_membership(const CKFunction& g) {
  for (int c = 0; c < copies(g.space()); ++c) {
    if (g.tail(c) != 0.0) return false;
  }
  return true;
}

bool almost_null_membership(const CKMatrixField& m) {
  return almost_null_membership(m.f1) && almost_null_membership(m.f2) &&
         almost_null_membership(m.f3) && almost_null_membership(m.f4);
}

bool multiplication_singularity_test(const CKFunction& g) { return almost_null_membership(g); }

FieldCorrection field_correct(const CKMatrixField& m, double tol, Exec exec) {
  const CKSpace space = m.space();
  const std::size_t length = m.prefix_length();
  const std::vector<CKPoint> points = represented_points(space, length);
  const std::size_t count = points.size();

  FieldCorrection out;
  const CKMatrixField defect = m * m + CKMatrixField::constant(space, Eigen::Matrix2d::Identity());
  for (const CKFunction* f : {&defect.f1, &defect.f2, &defect.f3, &defect.f4}) {
    for (int c = 0; c < copies(space); ++c) out.max_defect_tail = std::max(out.max_defect_tail, std::abs(f->tail(c)));
  }
  if (out.max_defect_tail > tol) {
    throw Error(ErrorKind::precondition, "M^2 + I is not almost null: tail of size " +
                                             std::to_string(out.max_defect_tail));
  }

  std::vector<Eigen::Matrix2d> n_values(count);
  for (std::size_t i = 0; i < count; ++i) {
    n_values[i] = points[i].is_tail() ? Eigen::Matrix2d::Zero() : defect.at(points[i]);
  }

  struct Local {
    Eigen::Matrix2d n_prime;
    Eigen::Matrix2d m_prime;
    bool exceptional = false;
    int terms = 0;
    double residual = 0.0;
  };
  std::vector<Local> local(count);
  kernels::map_indexed(
      count, exec,
      [&](std::size_t i) {
        Local l;
        const Eigen::Matrix2d mx = m.at(points[i]);
        const Eigen::Matrix2d& nx = n_values[i];
        if (norm2(nx) > 0.5) {
          l.exceptional = true;
          l.m_prime = j0();
          l.n_prime = l.m_prime - mx;
        } else {
          const double cut = tol / (10.0 * std::max(1.0, norm2(mx)));
          l.n_prime = corrected_series(mx, nx, cut, l.terms);
          l.m_prime = mx + l.n_prime;
        }
        l.residual = norm2(l.m_prime * l.m_prime + Eigen::Matrix2d::Identity());
        return l;
      },
      std::span<Local>(local));

  std::vector<Eigen::Matrix2d> n_prime(count), m_prime(count);
  double scale = 1.0;
  for (std::size_t i = 0; i < count; ++i) {
    n_prime[i] = local[i].n_prime;
    m_prime[i] = local[i].m_prime;
    if (local[i].exceptional) out.exceptional.push_back(points[i]);
    out.max_residual = std::max(out.max_residual, local[i].residual);
    out.max_series_terms = std::max(out.max_series_terms, local[i].terms);
    scale = std::max(scale, norm2(local[i].m_prime) * norm2(local[i].m_prime));
  }
  out.n = CKMatrixField::from_pointwise(space, length, n_values);
  out.n_prime = CKMatrixField::from_pointwise(space, length, n_prime);
  out.m_prime = CKMatrixField::from_pointwise(space, length, m_prime);
  if (out.max_residual > tol * scale) {
    throw Error(ErrorKind::certificate,
                "corrected field has max ||M'(x)^2 + I|| = " + std::to_string(out.max_residual));
  }
  return out;
}

FieldConjugation field_conjugator(const CKMatrixField& m_prime, double tol, Exec exec) {
  const CKSpace space = m_prime.space();
  const std::size_t length = m_prime.prefix_length();
  const std::vector<CKPoint> points = represented_points(space, length);
  const std::size_t count = points.size();
  constexpr double kF2Floor = 1e-12;

  struct Local {
    Eigen::Matrix2d p, q;
    double inverse_residual = 0.0, conjugation_residual = 0.0, f2f3 = 0.0, abs_f2 = 0.0, scale = 1.0;
  };
  std::vector<Local> local(count);
  kernels::map_indexed(
      count, exec,
      [&](std::size_t i) {
        const CKPoint& x = points[i];
        const Eigen::Matrix2d mx = m_prime.at(x);
        Local l;
        l.scale = std::max(1.0, norm2(mx) * norm2(mx));
        const double defect = norm2(mx * mx + Eigen::Matrix2d::Identity());
        if (defect > tol * l.scale) {
          throw Error(ErrorKind::precondition,
                      "||M'(x)^2 + I|| = " + std::to_string(defect) + " at copy " + std::to_string(x.copy) +
                          (x.is_tail() ? std::string(", tail") : ", index " + std::to_string(x.index)));
        }
        const double f1 = mx(0, 0), f2 = mx(0, 1);
        if (std::abs(f2) < kF2Floor) {
          throw Error(ErrorKind::precondition,
                      "f2 vanishes at copy " + std::to_string(x.copy) +
                          (x.is_tail() ? std::string(", tail") : ", index " + std::to_string(x.index)));
        }
        l.p << 1.0, 0.0, f1, f2;
        l.q << 1.0, 0.0, -f1 / f2, 1.0 / f2;
        l.inverse_residual = norm2(l.p * l.q - Eigen::Matrix2d::Identity());
        l.conjugation_residual = norm2(l.q * j0() * l.p - mx);
        l.f2f3 = f2 * mx(1, 0);
        l.abs_f2 = std::abs(f2);
        return l;
      },
      std::span<Local>(local));

  FieldConjugation out;
  std::vector<Eigen::Matrix2d> p(count), q(count);
  out.max_f2f3 = -std::numeric_limits<double>::infinity();
  out.min_abs_f2 = std::numeric_limits<double>::infinity();
  double scale = 1.0;
  for (std::size_t i = 0; i < count; ++i) {
    p[i] = local[i].p;
    q[i] = local[i].q;
    out.inverse_residual = std::max(out.inverse_residual, local[i].inverse_residual);
    out.conjugation_residual = std::max(out.conjugation_residual, local[i].conjugation_residual);
    out.max_f2f3 = std::max(out.max_f2f3, local[i].f2f3);
    out.min_abs_f2 = std::min(out.min_abs_f2, local[i].abs_f2);
    scale = std::max(scale, local[i].scale);
  }
  out.p = CKMatrixField::from_pointwise(space, length, p);
  out.q = CKMatrixField::from_pointwise(space, length, q);
  const double bound = 10.0 * tol * scale / std::min(1.0, out.min_abs_f2 * out.min_abs_f2);
  if (out.conjugation_residual > bound || out.inverse_residual > bound) {
    throw Error(ErrorKind::certificate, "field conjugation residual " +
                                            std::to_string(out.conjugation_residual) + " exceeds " +
                                            std::to_string(bound));
  }
  if (out.max_f2f3 > -1.0 + tol * scale) {
    throw Error(ErrorKind::certificate, "f2 f3 = " + std::to_string(out.max_f2f3) + " > -1 + tol");
  }
  return out;
}

DecompositionCertificate strict_singular_decomposition(const CKMatrixField& m,
                                                       const FieldCorrection& correction,
                                                       double tol) {
  const CKSpace space = m.space();
  if (correction.n_prime.space() != space || correction.n.space() != space) {
    throw Error(ErrorKind::dimension_mismatch, "decomposition: fields live on different spaces");
  }
  const std::size_t length = std::max({m.prefix_length(), correction.n.prefix_length(),
                                       correction.n_prime.prefix_length()});
  const std::vector<CKPoint> points = represented_points(space, length);

  DecompositionCertificate out;
  out.points_checked = points.size();
  out.v_rank = 2 * static_cast<int>(correction.exceptional.size());

  // n^k stays almost null for every k used by the series.
  out.powers_almost_null = almost_null_membership(correction.n);
  CKMatrixField power = correction.n;
  for (int k = 2; out.powers_almost_null && k <= std::max(2, correction.max_series_terms); ++k) {
    power = power * correction.n;
    out.powers_almost_null = almost_null_membership(power);
  }

  double scale = 1.0;
  for (const CKPoint& x : points) {
    const Eigen::Matrix2d mx = m.at(x);
    const Eigen::Matrix2d nx = correction.n.at(x);
    const Eigen::Matrix2d npx = correction.n_prime.at(x);
    const bool in_f =
        std::find(correction.exceptional.begin(), correction.exceptional.end(), x) !=
        correction.exceptional.end();
    if (in_f != (norm2(nx) > 0.5)) {
      throw Error(ErrorKind::certificate, "exceptional set does not match {x : ||n(x)|| > 1/2}");
    }
    Eigen::Matrix2d w_term = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d v_term = Eigen::Matrix2d::Zero();
    if (in_f) {
      v_term = npx;
      out.max_replacement_residual = std::max(out.max_replacement_residual, norm2(mx + npx - j0()));
    } else {
      int terms = 0;
      w_term = corrected_series(mx, nx, tol / (100.0 * std::max(1.0, norm2(mx))), terms);
    }
    out.max_residual = std::max(out.max_residual, norm2(npx - (w_term + v_term)));
    scale = std::max(scale, norm2(mx));
  }
  if (!out.powers_almost_null) {
    throw Error(ErrorKind::certificate, "a power of n is not almost null");
  }
  if (out.max_residual > tol * scale || out.max_replacement_residual > tol * scale) {
    throw Error(ErrorKind::certificate, "decomposition identity fails: residual " +
                                            std::to_string(out.max_residual) + ", replacement residual " +
                                            std::to_string(out.max_replacement_residual));
  }
  return out;
}

HyperplaneIdentification amalgam_hyperplane_identification(const CKFunction& h) {
  if (h.space() != CKSpace::amalgam) {
    throw Error(ErrorKind::precondition, "hyperplane identification takes a function on the amalgam");
  }
  HyperplaneIdentification out;
  out.pair = CKFunction(CKSpace::disjoint_union, h.prefix(0), h.prefix(1), h.tail(0), h.tail(1));
  out.constraint_holds = out.pair.tail(0) == out.pair.tail(1);
  out.round_trip = CKFunction(CKSpace::amalgam, out.pair.prefix(0), out.pair.prefix(1),
                              out.pair.tail(0), out.pair.tail(1));
  out.round_trip_exact = out.round_trip.prefix(0) == h.prefix(0) &&
                         out.round_trip.prefix(1) == h.prefix(1) && out.round_trip.tail(0) == h.tail(0);
  const std::size_t n = h.prefix_length();
  out.pair_dimension = 2 * (n + 1);
  out.constrained_dimension = 2 * n + 1;
  return out;
}

}  // namespace cxs
