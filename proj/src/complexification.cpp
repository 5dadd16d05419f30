#include "cxs/complexification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cxs {

Complexified::Complexified(RealOperator real_part, RealOperator imag_part)
    : re_(std::move(real_part)), im_(std::move(imag_part)) {
  require_square(re_.rows(), re_.cols(), "real part");
  require_square(im_.rows(), im_.cols(), "imaginary part");
  if (re_.rows() != im_.rows()) {
    throw Error(ErrorKind::dimension_mismatch, "real and imaginary parts differ in dimension");
  }
}

ComplexOperator Complexified::to_complex() const {
  ComplexOperator c(dim(), dim());
  c.real() = re_;
  c.imag() = im_;
  return c;
}

RealOperator Complexified::to_real_block() const {
  const Eigen::Index n = dim();
  RealOperator block(2 * n, 2 * n);
  block.topLeftCorner(n, n) = re_;
  block.topRightCorner(n, n) = -im_;
  block.bottomLeftCorner(n, n) = im_;
  block.bottomRightCorner(n, n) = re_;
  return block;
}

Complexified Complexified::from_complex(const ComplexOperator& t) {
  return Complexified(t.real(), t.imag());
}

Complexified operator*(const Complexified& s, const Complexified& t) {
  if (s.dim() != t.dim()) throw Error(ErrorKind::dimension_mismatch, "product of complexified operators");
  return Complexified(s.re_ * t.re_ - s.im_ * t.im_, s.re_ * t.im_ + s.im_ * t.re_);
}

Complexified operator+(const Complexified& s, const Complexified& t) {
  if (s.dim() != t.dim()) throw Error(ErrorKind::dimension_mismatch, "sum of complexified operators");
  return Complexified(s.re_ + t.re_, s.im_ + t.im_);
}

Complexified complexify(const RealOperator& a) {
  return Complexified(a, RealOperator::Zero(a.rows(), a.cols()));
}

std::pair<RealVector, RealVector> apply(const Complexified& t, const RealVector& x,
                                        const RealVector& y) {
  if (x.size() != t.dim() || y.size() != t.dim()) {
    throw Error(ErrorKind::dimension_mismatch, "apply: vector length differs from operator dimension");
  }
  const auto& a = t.real_part();
  const auto& b = t.imag_part();
  return {a * x - b * y, a * y + b * x};
}

double norm(const Complexified& t) { return opnorm(t.to_complex()); }

NormBounds norm_bounds_check(const Complexified& t) {
  NormBounds out;
  const double na = opnorm(t.real_part());
  const double nb = opnorm(t.imag_part());
  out.norm = norm(t);
  out.lower = std::max(na, nb);
  out.upper = std::sqrt(2.0) * (na + nb);
  // The lower bound is attained (e.g. by (Id, 0)); allow for SVD rounding.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon();
  out.lower_ok = out.lower <= out.norm * (1.0 + slack);
  out.upper_ok = out.norm <= out.upper * (1.0 + slack);
  return out;
}

bool is_real_induced(const Complexified& t, double tau) {
  if (tau < 0) throw Error(ErrorKind::precondition, "is_real_induced: tau must be >= 0");
  return opnorm(t.imag_part()) <= tau * std::max(1.0, opnorm(t.real_part()));
}

bool spectrum_symmetry_check(const Complexified& t, double tau, double cluster_radius) {
  if (!is_real_induced(t, tau)) {
    throw Error(ErrorKind::precondition, "spectrum_symmetry_check: operator is not real-induced");
  }
  const ComplexOperator c = t.to_complex();
  const double radius = cluster_radius < 0 ? default_cluster_radius(c) : cluster_radius;
  std::vector<Complex> ev = eigenvalues(c);
  std::sort(ev.begin(), ev.end(), [](Complex x, Complex y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  std::vector<bool> used(ev.size(), false);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    const Complex target = std::conj(ev[i]);
    std::size_t best = ev.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (used[j]) continue;
      const double d = std::abs(ev[j] - target);
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == ev.size() || best_dist > radius) return false;
    used[best] = true;
  }
  return true;
}

}  // namespace cxs
