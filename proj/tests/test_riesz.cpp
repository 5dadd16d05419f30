#include <doctest.h>

#include <cmath>

#include "cxs/complexification.hpp"
#include "cxs/riesz.hpp"
#include "generators.hpp"

using namespace cxs;
using cxs::testing::Gen;

namespace {

ComplexOperator cdiag(std::initializer_list<Complex> values) {
  ComplexOperator d = ComplexOperator::Zero(static_cast<Eigen::Index>(values.size()),
                                            static_cast<Eigen::Index>(values.size()));
  Eigen::Index k = 0;
  for (Complex v : values) d(k, k) = v, ++k;
  return d;
}

Spectrum spectrum_of(std::initializer_list<Complex> values) { return cluster(values, 0.0); }

/// Projection from an explicit eigendecomposition B = V D V^{-1}.
ComplexOperator oracle_projection(const ComplexOperator& v, const std::vector<bool>& keep) {
  ComplexOperator d = ComplexOperator::Zero(v.rows(), v.rows());
  for (Eigen::Index k = 0; k < v.rows(); ++k) d(k, k) = keep[static_cast<std::size_t>(k)] ? 1.0 : 0.0;
  return v * d * v.inverse();
}

}  // namespace

TEST_SUITE("riesz") {
  TEST_CASE("Gauss-Legendre rule integrates degree 2m-1 polynomials") {
    const GaussRule rule = gauss_legendre(16);
    double weight_sum = 0.0;
    for (double w : rule.weights) weight_sum += w;
    CHECK(weight_sum == doctest::Approx(2.0).epsilon(1e-14));
    for (int p = 0; p <= 31; ++p) {
      double q = 0.0;
      for (std::size_t k = 0; k < rule.nodes.size(); ++k) q += rule.weights[k] * std::pow(rule.nodes[k], p);
      const double exact = p % 2 == 1 ? 0.0 : 2.0 / (p + 1);
      CHECK(std::abs(q - exact) < 1e-14);
    }
  }

  TEST_CASE("select_contour separates 0.1 from 2") {
    const RectContour r = select_contour(spectrum_of({0.1, 2.0}),
                                         [](Complex z) { return std::abs(z) < 1.0; }, 0.2);
    CHECK(encloses(r, 0.1));
    CHECK_FALSE(encloses(r, 2.0));
    CHECK(r.half_width > 0.3);
    CHECK(r.half_width < 1.8);
    CHECK(r.half_height > 0.3);
    CHECK(r.half_height < 1.8);
    CHECK(distance_to_contour(r, 0.1) >= 0.2);
    CHECK(distance_to_contour(r, 2.0) >= 0.2);
  }

  TEST_CASE("select_contour around {0} stays in the unit disk") {
    const RectContour r = select_contour(spectrum_of({0.0}), [](Complex) { return true; }, 0.1);
    CHECK(encloses(r, 0.0));
    CHECK(std::hypot(std::abs(r.center_re) + r.half_width, r.half_height) < 1.0);
  }

  TEST_CASE("a one-sided selection cannot use a real-centred rectangle") {
    CHECK_THROWS_AS(select_contour(spectrum_of({Complex(0, 1), Complex(0, -1)}),
                                   [](Complex z) { return z.imag() > 0; }, 0.1),
                    Error);
    const CircleContour c = select_circle(spectrum_of({Complex(0, 1), Complex(0, -1)}),
                                          [](Complex z) { return z.imag() > 0; }, 0.1);
    CHECK(encloses(c, Complex(0, 1)));
    CHECK_FALSE(encloses(c, Complex(0, -1)));
  }

  TEST_CASE("diag(i, -i) with a circle around i") {
    const ComplexOperator b = cdiag({Complex(0, 1), Complex(0, -1)});
    const SpectralProjection p = riesz_projection(b, CircleContour{Complex(0, 1), 1.0, 0});
    CHECK((p.projection - cdiag({1.0, 0.0})).norm() < 1e-12);
    CHECK(p.enclosed_multiplicity == 1);
  }

  TEST_CASE("diag(0.1, 2) with a rectangle in the unit disk") {
    const ComplexOperator b = cdiag({0.1, 2.0});
    const SpectralProjection p = riesz_projection(b, RectContour{0.0, 0.5, 0.5, 0});
    CHECK((p.projection - cdiag({1.0, 0.0})).norm() < 1e-12);
  }

  TEST_CASE("Jordan block at i gives the identity") {
    ComplexOperator b(2, 2);
    b << Complex(0, 1), 1.0, 0.0, Complex(0, 1);
    const SpectralProjection p = riesz_projection(b, CircleContour{Complex(0, 1), 0.5, 0});
    CHECK((p.projection - complex_identity(2)).norm() < 1e-12);
    CHECK(p.enclosed_multiplicity == 2);
  }

  TEST_CASE("an eigenvalue on the contour is rejected") {
    const ComplexOperator b = cdiag({0.5, 2.0});
    RieszOptions o;
    o.margin = 0.01;
    CHECK_THROWS_AS(riesz_projection(b, RectContour{0.0, 0.5, 0.5, 0}, o), Error);
  }

  TEST_CASE("polishing examples") {
    const ComplexOperator exact = cdiag({1.0, 0.0});
    const PolishResult same = polish_idempotent(exact);
    CHECK(same.projection == exact);
    const PolishResult near = polish_idempotent(cdiag({1.0 + 1e-6, 0.0}));
    CHECK((near.projection - exact).norm() < 1e-12);
    CHECK_THROWS_AS(polish_idempotent(cdiag({0.5, 0.0})), Error);
    try {
      (void)polish_idempotent(cdiag({0.5, 0.0}));
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::divergence);
    }
  }

  TEST_CASE("real part projection of complexify(diag(2, J0))") {
    RealOperator a = RealOperator::Zero(3, 3);
    a(0, 0) = 2.0;
    a(1, 2) = 1.0;
    a(2, 1) = -1.0;
    const SpectralProjection p = riesz_projection(complexify(a).to_complex(), RectContour{0.0, 0.5, 1.5, 0});
    const RealOperator real = real_part_projection(p, 1e-10);
    RealOperator want = RealOperator::Zero(3, 3);
    want(1, 1) = want(2, 2) = 1.0;
    CHECK((real - want).norm() < 1e-12);
    const SpectralProjection z =
        riesz_projection(complexify(RealOperator::Zero(2, 2)).to_complex(), RectContour{0.0, 0.5, 0.5, 0});
    CHECK((real_part_projection(z, 1e-10) - identity(2)).norm() < 1e-14);
  }

  TEST_CASE("symmetric contours give real projections for real operators") {
    Gen g(47);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::Index n = g.integer(2, 12);
      const RealOperator a = 0.6 * g.real_matrix(n) / std::sqrt(static_cast<double>(n));
      const Spectrum s = eig(a, default_cluster_radius(a));
      RectContour r;
      try {
        r = select_disk_contour(s, 1e-3);
      } catch (const Error&) {
        continue;
      }
      RieszOptions o;
      o.margin = 1e-3;
      const SpectralProjection p = riesz_projection(complexify(a).to_complex(), r, o);
      CHECK(opnorm(RealOperator(p.projection.imag())) <= 1e-10);
    }
  }

  TEST_CASE("agreement with the eigendecomposition oracle") {
    Gen g(53);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index n = g.integer(2, 20);
      const ComplexOperator v = g.complex_conditioned(n, 10.0);
      std::vector<Complex> lambda(static_cast<std::size_t>(n));
      std::vector<bool> keep(static_cast<std::size_t>(n));
      for (Eigen::Index k = 0; k < n; ++k) {
        const bool inner = k % 2 == 0;
        keep[static_cast<std::size_t>(k)] = inner;
        const double radius = inner ? g.uniform(0.0, 0.5) : g.uniform(1.5, 3.0);
        lambda[static_cast<std::size_t>(k)] = std::polar(radius, g.uniform(0.0, 6.283));
      }
      ComplexOperator d = ComplexOperator::Zero(n, n);
      for (Eigen::Index k = 0; k < n; ++k) d(k, k) = lambda[static_cast<std::size_t>(k)];
      const ComplexOperator b = v * d * v.inverse();
      const SpectralProjection p = riesz_projection(b, CircleContour{0.0, 1.0, 0});
      CHECK((p.projection - oracle_projection(v, keep)).norm() <= 1e-8);
      CHECK(p.idempotency_residual <= 1e-12 * std::max(1.0, opnorm(p.projection)));
    }
  }
}
