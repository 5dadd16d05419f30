#pragma once

// Riesz spectral projections P = (1/2πi) ∮ (λI - B)^{-1} dλ by contour
// quadrature, with idempotent polishing and real-part extraction.

#include <functional>
#include <variant>
#include <vector>

#include "cxs/kernels.hpp"
#include "cxs/linalg.hpp"

namespace cxs {

/// Rectangle centred on the real axis; symmetric about it by construction.
struct RectContour {
  double center_re = 0.0;
  double half_width = 1.0;
  double half_height = 1.0;
  /// Initial node count per edge (0: derived from the spectrum's distance to the contour).
  int nodes_per_edge = 0;
};

/// Circle, used only for one-sided selections (never where real-inducedness matters).
struct CircleContour {
  Complex center{0.0, 0.0};
  double radius = 1.0;
  int nodes = 0;
};

using Contour = std::variant<RectContour, CircleContour>;

bool encloses(const Contour& contour, Complex z);
/// Euclidean distance from z to the contour curve.
double distance_to_contour(const Contour& contour, Complex z);

using Selector = std::function<bool(Complex)>;

/// Rectangle enclosing exactly the selected eigenvalues, with every eigenvalue
/// at distance >= margin from its boundary. The rectangle is the bounding box
/// of the selected cluster inflated uniformly so that the inner and outer
/// clearances balance.
RectContour select_contour(const Spectrum& spectrum, const Selector& selected, double margin);

/// One-sided variant: a circle around the selected eigenvalues.
CircleContour select_circle(const Spectrum& spectrum, const Selector& selected, double margin);

/// Rectangle centred at 0 whose corners lie in the disk of radius 1 - margin,
/// maximizing the minimal distance from the spectrum to its boundary.
RectContour select_disk_contour(const Spectrum& spectrum, double margin);

struct RieszOptions {
  double tol = 1e-10;
  /// Minimal admissible distance from the spectrum to the contour; negative: 1e-3 * ||B||.
  double margin = -1.0;
  int max_nodes_per_edge = 1 << 14;
  Exec exec = Exec::parallel;
  bool polish = true;
};

struct SpectralProjection {
  ComplexOperator projection;
  std::vector<Eigenvalue> enclosed;
  int enclosed_multiplicity = 0;
  double idempotency_residual = 0.0;      // ||P^2 - P|| after polishing
  double raw_idempotency_residual = 0.0;  // straight from quadrature
  double quadrature_change = 0.0;         // error estimate ||2P - I||_F ||P^2 - P||_F
  double commutator_residual = 0.0;       // ||PB - BP||
  double min_distance = 0.0;              // spectrum-to-contour distance
  int nodes_per_edge = 0;
};

SpectralProjection riesz_projection(const ComplexOperator& b, const Contour& contour,
                                    const RieszOptions& options = {});

struct PolishResult {
  ComplexOperator projection;
  double initial_residual = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

/// P <- 3P^2 - 2P^3 until ||P^2 - P|| reaches rounding level. Requires an
/// initial residual below 1/4.
PolishResult polish_idempotent(const ComplexOperator& p);

/// Real matrix Re(P) for a projection computed from a real-induced operator on
/// a contour symmetric about the real axis. Throws not_real_induced if
/// ||Im P|| > tol * max(1, ||P||).
RealOperator real_part_projection(const SpectralProjection& p, double tol);

/// Gauss–Legendre nodes and weights on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int order);

}  // namespace cxs
