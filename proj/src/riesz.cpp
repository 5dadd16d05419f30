#include "cxs/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace cxs {

namespace {

constexpr int kPanelOrder = 16;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
  double x0, x1, h;
};

Box box_of(const RectContour& r) {
  return {r.center_re - r.half_width, r.center_re + r.half_width, r.half_height};
}

bool inside(const Box& b, Complex z) {
  return z.real() > b.x0 && z.real() < b.x1 && std::abs(z.imag()) < b.h;
}

double boundary_distance(const Box& b, Complex z) {
  const double x = z.real();
  const double y = z.imag();
  if (inside(b, z)) return std::min({x - b.x0, b.x1 - x, y + b.h, b.h - y});
  const double dx = std::max({b.x0 - x, 0.0, x - b.x1});
  const double dy = std::max({-b.h - y, 0.0, y - b.h});
  return std::hypot(dx, dy);
}

/// Positive when z is outside the box, negative inside.
double signed_outside(const Box& b, Complex z) {
  const double d = boundary_distance(b, z);
  return inside(b, z) ? -d : d;
}

double frobenius(const Eigen::MatrixXcd& m) { return m.norm(); }

}  // namespace

bool encloses(const Contour& contour, Complex z) {
  if (const auto* r = std::get_if<RectContour>(&contour)) return inside(box_of(*r), z);
  const auto& c = std::get<CircleContour>(contour);
  return std::abs(z - c.center) < c.radius;
}

double distance_to_contour(const Contour& contour, Complex z) {
  if (const auto* r = std::get_if<RectContour>(&contour)) return boundary_distance(box_of(*r), z);
  const auto& c = std::get<CircleContour>(contour);
  return std::abs(std::abs(z - c.center) - c.radius);
}

RectContour select_contour(const Spectrum& spectrum, const Selector& selected, double margin) {
  std::vector<Complex> in, out;
  for (const auto& e : spectrum.eigenvalues) (selected(e.value) ? in : out).push_back(e.value);
  if (in.empty()) throw Error(ErrorKind::no_separating_contour, "selector encloses no eigenvalue");

  double a = kInf, b = -kInf, h = 0.0, scale = 0.0;
  for (Complex z : in) {
    a = std::min(a, z.real());
    b = std::max(b, z.real());
    h = std::max(h, std::abs(z.imag()));
  }
  for (const auto& e : spectrum.eigenvalues) scale = std::max(scale, std::abs(e.value));
  const double c = 0.5 * (a + b);
  const double hw0 = 0.5 * (b - a);
  auto inflate = [&](double t) { return Box{c - hw0 - t, c + hw0 + t, h + t}; };
  auto clearance = [&](double t) {
    double g = kInf;
    for (Complex z : out) g = std::min(g, signed_outside(inflate(t), z));
    return g;
  };

  double t;
  if (out.empty()) {
    t = std::max(2.0 * margin, 0.25 * std::max(1.0, std::max(hw0, h)));
    (void)scale;
  } else {
    const double g0 = clearance(0.0);
    if (g0 <= 0.0) {
      throw Error(ErrorKind::no_separating_contour,
                  "an unselected eigenvalue lies inside the symmetric hull of the selection");
    }
    double lo = 0.0, hi = g0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, g0); ++it) {
      const double mid = 0.5 * (lo + hi);
      (clearance(mid) - mid > 0.0 ? lo : hi) = mid;
    }
    t = lo;
  }
  if (t < margin) {
    throw Error(ErrorKind::no_separating_contour,
                "best clearance " + std::to_string(t) + " is below the margin " +
                    std::to_string(margin));
  }
  return RectContour{c, hw0 + t, h + t, 0};
}

CircleContour select_circle(const Spectrum& spectrum, const Selector& selected, double margin) {
  std::vector<Complex> in, out;
  for (const auto& e : spectrum.eigenvalues) (selected(e.value) ? in : out).push_back(e.value);
  if (in.empty()) throw Error(ErrorKind::no_separating_contour, "selector encloses no eigenvalue");

  Complex centroid = 0.0;
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  for (Complex z : in) {
    centroid += z;
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  }
  centroid /= static_cast<double>(in.size());
  const Complex box_mid{0.5 * (x0 + x1), 0.5 * (y0 + y1)};

  CircleContour best{};
  double best_gap = -kInf;
  for (Complex center : {centroid, box_mid}) {
    double r_in = 0.0, r_out = kInf;
    for (Complex z : in) r_in = std::max(r_in, std::abs(z - center));
    for (Complex z : out) r_out = std::min(r_out, std::abs(z - center));
    double radius, gap;
    if (std::isinf(r_out)) {
      gap = std::max(2.0 * margin, 0.5 * std::max(1.0, r_in));
      radius = r_in + gap;
    } else {
      radius = 0.5 * (r_in + r_out);
      gap = 0.5 * (r_out - r_in);
    }
    if (gap > best_gap) {
      best_gap = gap;
      best = CircleContour{center, radius, 0};
    }
  }
  if (best_gap < margin) {
    throw Error(ErrorKind::no_separating_contour,
                "no circle separates the selection with margin " + std::to_string(margin));
  }
  return best;
}

RectContour select_disk_contour(const Spectrum& spectrum, double margin) {
  const double reach = 1.0 - margin;
  if (reach <= 0.0) throw Error(ErrorKind::precondition, "margin must be below 1");
  auto score = [&](double w, double h) {
    const Box b{-w, w, h};
    double s = kInf;
    for (const auto& e : spectrum.eigenvalues) s = std::min(s, boundary_distance(b, e.value));
    return s;
  };
  auto admissible = [&](double w, double h) {
    return w > 0.0 && h > 0.0 && w * w + h * h <= reach * reach;
  };

  constexpr int kGrid = 48;
  double best_w = 0.0, best_h = 0.0, best = -kInf;
  for (int i = 1; i <= kGrid; ++i) {
    for (int j = 1; j <= kGrid; ++j) {
      const double w = reach * i / kGrid;
      const double h = reach * j / kGrid;
      if (!admissible(w, h)) continue;
      const double s = score(w, h);
      if (s > best) {
        best = s;
        best_w = w;
        best_h = h;
      }
    }
  }
  // Pattern search around the best grid point.
  double step = reach / kGrid;
  for (int it = 0; it < 40; ++it) {
    bool moved = false;
    for (auto [dw, dh] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1}, {-1, 1}}) {
      const double w = best_w + dw * step;
      const double h = best_h + dh * step;
      if (!admissible(w, h)) continue;
      const double s = score(w, h);
      if (s > best) {
        best = s;
        best_w = w;
        best_h = h;
        moved = true;
      }
    }
    if (!moved) step *= 0.5;
  }
  if (best < margin) {
    throw Error(ErrorKind::no_separating_contour,
                "every rectangle inside the unit disk passes within " + std::to_string(best) +
                    " of the spectrum (margin " + std::to_string(margin) + ")");
  }
  return RectContour{0.0, best_w, best_h, 0};
}

GaussRule gauss_legendre(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

namespace {

struct Nodes {
  std::vector<Complex> z;
  std::vector<Complex> w;
  int per_edge = 0;
};

/// Vertical edges are split at the real axis so that `lower_only` yields
/// exactly the part of the contour in the closed lower half-plane.
Nodes rect_nodes(const RectContour& r, double panel_len, const GaussRule& rule, bool lower_only = false) {
  const Box b = box_of(r);
  struct Segment {
    Complex a, b;
  };
  std::vector<Segment> segments{{{b.x0, -b.h}, {b.x1, -b.h}}, {{b.x1, -b.h}, {b.x1, 0.0}}};
  if (!lower_only) {
    segments.push_back({{b.x1, 0.0}, {b.x1, b.h}});
    segments.push_back({{b.x1, b.h}, {b.x0, b.h}});
    segments.push_back({{b.x0, b.h}, {b.x0, 0.0}});
  }
  segments.push_back({{b.x0, 0.0}, {b.x0, -b.h}});
  Nodes out;
  for (const Segment& seg : segments) {
    const double len = std::abs(seg.b - seg.a);
    const int panels = std::max(1, static_cast<int>(std::ceil(len / panel_len)));
    out.per_edge = std::max(out.per_edge, panels * static_cast<int>(rule.nodes.size()));
    const Complex step = (seg.b - seg.a) / static_cast<double>(panels);
    for (int p = 0; p < panels; ++p) {
      const Complex mid = seg.a + step * (p + 0.5);
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
        out.z.push_back(mid + 0.5 * step * rule.nodes[k]);
        out.w.push_back(0.5 * step * rule.weights[k]);
      }
    }
  }
  return out;
}

Nodes circle_nodes(const CircleContour& c, int count) {
  Nodes out;
  out.per_edge = count;
  const double dtheta = 2.0 * std::numbers::pi / count;
  for (int k = 0; k < count; ++k) {
    const Complex e = std::polar(1.0, k * dtheta);
    out.z.push_back(c.center + c.radius * e);
    out.w.push_back(Complex(0.0, 1.0) * c.radius * e * dtheta);
  }
  return out;
}

}  // namespace

SpectralProjection riesz_projection(const ComplexOperator& b, const Contour& contour,
                                    const RieszOptions& options) {
  require_square(b.rows(), b.cols(), "riesz_projection input");
  require_finite(b, "riesz_projection input");
  const Eigen::Index n = b.rows();
  const double bnorm = opnorm(b);
  const double margin = options.margin >= 0.0 ? options.margin : 1e-3 * bnorm;

  Eigen::ComplexSchur<Eigen::MatrixXcd> schur{Eigen::MatrixXcd(b)};
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorKind::no_convergence, "Schur decomposition failed in riesz_projection");
  }
  const Eigen::MatrixXcd& t = schur.matrixT();
  const Eigen::MatrixXcd& u = schur.matrixU();

  std::vector<Complex> ev(static_cast<std::size_t>(n));
  for (Eigen::Index k = 0; k < n; ++k) ev[static_cast<std::size_t>(k)] = t(k, k);
  double dmin = kInf;
  for (Complex z : ev) dmin = std::min(dmin, distance_to_contour(contour, z));
  if (dmin < margin) {
    throw Error(ErrorKind::no_separating_contour,
                "eigenvalue at distance " + std::to_string(dmin) +
                    " from the contour (margin " + std::to_string(margin) + ")");
  }

  SpectralProjection out;
  out.min_distance = dmin;
  const Spectrum spectrum = cluster(ev, 1e-8 * std::max(bnorm, 1e-300));
  for (const auto& e : spectrum.eigenvalues) {
    if (encloses(contour, e.value)) {
      out.enclosed.push_back(e);
      out.enclosed_multiplicity += e.multiplicity;
    }
  }

  const GaussRule rule = gauss_legendre(kPanelOrder);
  const bool mirrored = std::holds_alternative<RectContour>(contour) && b.imag().isZero(0.0);
  const double clearance = std::max(dmin, 1e-300);
  auto build_nodes = [&](int level) -> Nodes {
    if (const auto* r = std::get_if<RectContour>(&contour)) {
      double panel_len = 2.0 * clearance / std::ldexp(1.0, level);
      if (r->nodes_per_edge > 0) {
        const double longest = 2.0 * std::max(r->half_width, r->half_height);
        panel_len = std::min(panel_len, longest * kPanelOrder / r->nodes_per_edge);
      }
      return rect_nodes(*r, panel_len, rule, mirrored);
    }
    const auto& c = std::get<CircleContour>(contour);
    int count = std::max(64, c.nodes);
    const int wanted = static_cast<int>(std::ceil(8.0 * c.radius / clearance));
    while (count < wanted) count *= 2;
    return circle_nodes(c, count << level);
  };

  // The quadrature gives r(T) for a rational r approximating the indicator
  // of the interior, so P^2 - P = (r - χ)(r + χ - 1)(T) and
  // ||P - P_exact|| <~ ||2P - I|| ||P^2 - P||. Nodes are doubled until that
  // estimate is below tol.
  // For real B the rectangle is symmetric about R, the mirrored node of
  // (z, w) is (conj z, -conj w) and R(conj z) = conj R(z): only the lower
  // half is summed and the upper half is its conjugate.
  const Complex inv_two_pi_i = 1.0 / Complex(0.0, 2.0 * std::numbers::pi);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd current;
  for (int level = 0;; ++level) {
    Nodes nodes = build_nodes(level);
    if (nodes.per_edge > options.max_nodes_per_edge) {
      throw Error(ErrorKind::quadrature,
                  "node budget of " + std::to_string(options.max_nodes_per_edge) +
                      " per edge exhausted; last error estimate " + std::to_string(out.quadrature_change));
    }
    out.nodes_per_edge = nodes.per_edge;
    if (mirrored) {
      const Eigen::MatrixXcd half =
          u * kernels::resolvent_sum(t, nodes.z, nodes.w, kPanelOrder, options.exec) * u.adjoint();
      current = inv_two_pi_i * (half - half.conjugate());
    } else {
      current = u * (inv_two_pi_i * kernels::resolvent_sum(t, nodes.z, nodes.w, kPanelOrder, options.exec)) *
                u.adjoint();
    }
    const Eigen::MatrixXcd square = current * current;
    out.quadrature_change = frobenius(2.0 * current - eye) * frobenius(square - current);
    if (!std::isfinite(out.quadrature_change)) {
      throw Error(ErrorKind::no_separating_contour, "resolvent blow-up on the contour");
    }
    if (out.quadrature_change <= options.tol * std::max(1.0, frobenius(current))) break;
  }

  ComplexOperator p = current;
  if (options.polish) {
    PolishResult polished = polish_idempotent(p);
    p = std::move(polished.projection);
    out.raw_idempotency_residual = polished.initial_residual;
    out.idempotency_residual = polished.residual;
  } else {
    out.raw_idempotency_residual = opnorm(ComplexOperator(p * p - p));
    out.idempotency_residual = out.raw_idempotency_residual;
  }
  out.commutator_residual = opnorm(ComplexOperator(p * b - b * p));
  out.projection = std::move(p);
  return out;
}

PolishResult polish_idempotent(const ComplexOperator& p) {
  require_square(p.rows(), p.cols(), "polish_idempotent input");
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  PolishResult out;
  ComplexOperator x = p;
  ComplexOperator sq = x * x;
  double residual = opnorm(ComplexOperator(sq - x));
  out.initial_residual = residual;
  if (!(residual < 0.25)) {
    throw Error(ErrorKind::divergence, "initial residual ||P^2 - P|| = " + std::to_string(residual) +
                                           " is outside the contraction region (< 1/4)");
  }
  const double xnorm = std::max(1.0, opnorm(x));
  const double target = 16.0 * kEps * xnorm * xnorm;
  while (residual > target && out.iterations < 100) {
    ComplexOperator next = 3.0 * sq - 2.0 * sq * x;
    ComplexOperator next_sq = next * next;
    const double r = opnorm(ComplexOperator(next_sq - next));
    ++out.iterations;
    if (!(r < residual)) {
      // Rounding floor reached: keep the better iterate.
      if (residual < 1e-8) break;
      throw Error(ErrorKind::divergence, "residual grew from " + std::to_string(residual) + " to " +
                                             std::to_string(r) + " (initial " +
                                             std::to_string(out.initial_residual) + ")");
    }
    x = std::move(next);
    sq = std::move(next_sq);
    residual = r;
  }
  out.projection = std::move(x);
  out.residual = residual;
  return out;
}

RealOperator real_part_projection(const SpectralProjection& p, double tol) {
  const ComplexOperator& c = p.projection;
  const RealOperator re = c.real();
  const RealOperator im = c.imag();
  const double pnorm = opnorm(c);
  const double imag_norm = opnorm(im);
  if (imag_norm > tol * std::max(1.0, pnorm)) {
    throw Error(ErrorKind::not_real_induced,
                "||Im P|| = " + std::to_string(imag_norm) + " exceeds tolerance " + std::to_string(tol));
  }
  const double residual = opnorm(RealOperator(re * re - re));
  if (residual > std::max(tol, 10.0 * p.idempotency_residual) * std::max(1.0, pnorm * pnorm)) {
    throw Error(ErrorKind::certificate,
                "real part is not idempotent: ||Re(P)^2 - Re(P)|| = " + std::to_string(residual));
  }
  return re;
}

}  // namespace cxs
