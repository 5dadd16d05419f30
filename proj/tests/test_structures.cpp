#include <doctest.h>

#include <cmath>

#include "cxs/lifting.hpp"
#include "cxs/structures.hpp"
#include "generators.hpp"

using namespace cxs;
using cxs::testing::canonical_j;
using cxs::testing::Gen;

namespace {

ComplexStructure random_structure(Gen& g, Eigen::Index n, double cond = 5.0) {
  const RealOperator r = g.conditioned(n, cond);
  return ComplexStructure(RealOperator(r * canonical_j(n) * inverse(r)), 1e-9);
}

}  // namespace

TEST_SUITE("structures") {
  TEST_CASE("canonical structures") {
    const ComplexStructure j2 = canonical_structure(2);
    RealOperator want(2, 2);
    want << 0, 1, -1, 0;
    CHECK(j2.matrix() == want);
    const ComplexStructure j4 = canonical_structure(4);
    CHECK(j4.matrix().topLeftCorner(2, 2) == want);
    CHECK(j4.matrix().bottomRightCorner(2, 2) == want);
    CHECK(j4.matrix().topRightCorner(2, 2).isZero(0.0));
    CHECK_THROWS_AS(canonical_structure(3), Error);
  }

  TEST_CASE("odd dimension and defective operators are rejected") {
    CHECK_THROWS_AS(ComplexStructure(identity(3)), Error);
    RealOperator a(2, 2);
    a << 0, 1.1, -1, 0;
    CHECK_THROWS_AS(ComplexStructure{a}, Error);
  }

  TEST_CASE("scalar action") {
    const ComplexStructure j = canonical_structure(2);
    const RealVector x = RealVector::Unit(2, 0);
    CHECK(scalar_action(j, 1.0, 0.0, x) == x);
    CHECK(scalar_action(j, 0.0, 1.0, scalar_action(j, 0.0, 1.0, x)) == -x);
    CHECK(scalar_action(j, 0.0, 1.0, x) == RealVector((RealVector(2) << 0, -1).finished()));
  }

  TEST_CASE("equivalent norm examples") {
    const ComplexStructure j = canonical_structure(2);
    const RealVector x = (RealVector(2) << 0.3, -1.7).finished();
    CHECK(std::abs(equivalent_norm(j, x, BaseNorm::l2) - x.norm()) <= 1e-12);
    CHECK(equivalent_norm(j, RealVector::Unit(2, 0), BaseNorm::linf) == doctest::Approx(1.0).epsilon(1e-12));
    // l1 orbit of e1 peaks at θ = π/4 with value sqrt(2).
    CHECK(equivalent_norm(j, RealVector::Unit(2, 0), BaseNorm::l1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  }

  TEST_CASE("equivalent norm is J-invariant and sandwiched") {
    Gen g(59);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index n = 2 * g.integer(1, 5);
      const ComplexStructure j = random_structure(g, n, 3.0);
      const RealVector x = g.vector(n);
      for (BaseNorm base : {BaseNorm::l1, BaseNorm::l2, BaseNorm::linf}) {
        const double nx = equivalent_norm(j, x, base);
        const double njx = equivalent_norm(j, RealVector(j.matrix() * x), base);
        CHECK(std::abs(nx - njx) <= 1e-9 * nx);
        CHECK(vector_norm(x, base) <= nx * (1.0 + 1e-15));
        CHECK(nx <= (1.0 + induced_norm(j.matrix(), base)) * vector_norm(x, base));
      }
    }
  }

  TEST_CASE("conjugator: identical structures") {
    const ComplexStructure j = canonical_structure(4);
    const Conjugation c = conjugator(j, j);
    CHECK(c.residual <= 1e-12);
    CHECK((c.p * j.matrix() - j.matrix() * c.p).norm() <= 1e-12);
  }

  TEST_CASE("conjugator: interleaved structure on R^4") {
    // e1 -> e3, e2 -> e4, e3 -> -e1, e4 -> -e2 (columns are images).
    RealOperator k = RealOperator::Zero(4, 4);
    k(2, 0) = 1;
    k(3, 1) = 1;
    k(0, 2) = -1;
    k(1, 3) = -1;
    const ComplexStructure ks(k, 0.0);
    const ComplexStructure j = canonical_structure(4);
    const Conjugation c = conjugator(j, ks);
    CHECK(opnorm(RealOperator(c.p * k * inverse(c.p) - j.matrix())) <= 1e-10);
  }

  TEST_CASE("conjugator round trip on random conjugates") {
    Gen g(61);
    for (int trial = 0; trial < 40; ++trial) {
      const Eigen::Index n = 2 * g.integer(1, 8);
      const ComplexStructure j = random_structure(g, n);
      const ComplexStructure k = random_structure(g, n);
      const Conjugation c = conjugator(j, k, 7);
      CHECK(c.residual <= 1e-8);
      CHECK(opnorm(RealOperator(c.p * k.matrix() * inverse(c.p) - j.matrix())) <= 1e-8);
      CHECK(c.condition >= 1.0);
    }
  }

  TEST_CASE("intertwiner sum examples") {
    const ComplexStructure t = canonical_structure(4);
    const Intertwiner same = intertwiner_sum(t, t);
    CHECK(same.sum == RealOperator(2.0 * t.matrix()));
    CHECK(same.residual == 0.0);
    CHECK(same.invertible);
    const Intertwiner opposite = intertwiner_sum(t, ComplexStructure(RealOperator(-t.matrix()), 0.0));
    CHECK(opposite.sum.isZero(0.0));
    CHECK(opposite.residual == 0.0);
    CHECK_FALSE(opposite.invertible);
  }

  TEST_CASE("intertwiner sum with a nearby corrected structure") {
    Gen g(67);
    const ComplexStructure t = canonical_structure(6);
    const RealOperator e = g.low_rank(6, 1, 0.1);
    const LiftOutcome out =
        real_dichotomy(AlmostComplexStructure(RealOperator(t.matrix() + e)), IdealBudget::rank_only(2));
    REQUIRE(out.is_even());
    const ComplexStructure& u = std::get<EvenLift>(out.variant).j;
    const Intertwiner w = intertwiner_sum(t, u);
    CHECK(w.invertible);
    CHECK(w.sigma_min > 2.0 - opnorm(RealOperator(u.matrix() - t.matrix())) - 1e-12);
    CHECK(w.residual <= 1e-10);
  }

  TEST_CASE("incomparability identities") {
    const ComplexStructure j = canonical_structure(2);
    const IdentityResiduals r = incomparability_identities(j, j);
    CHECK(r.sum_of_squares == 0.0);
    CHECK(r.anticommutator == 0.0);
    Gen g(71);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index n = 2 * g.integer(1, 10);
      const ComplexStructure t = random_structure(g, n, 3.0);
      const ComplexStructure u = random_structure(g, n, 3.0);
      const IdentityResiduals res = incomparability_identities(t, u);
      const double scale = std::pow(std::max(opnorm(t.matrix()), opnorm(u.matrix())), 2);
      CHECK(res.sum_of_squares <= 1e-10 * scale);
      CHECK(res.anticommutator <= 1e-10 * scale);
    }
  }

  TEST_CASE("hyperplane embedding of J0") {
    const RealOperator e = hyperplane_embed(canonical_structure(2));
    RealOperator want = RealOperator::Zero(3, 3);
    want(0, 0) = 1;
    want(1, 2) = 1;
    want(2, 1) = -1;
    CHECK(e == want);
    RealOperator defect = RealOperator::Zero(3, 3);
    defect(0, 0) = 2.0;
    CHECK(RealOperator(e * e + identity(3)) == defect);
  }

  TEST_CASE("perturbation isomorphism") {
    const ComplexStructure i = canonical_structure(4);
    const PerturbationIsomorphism zero = perturbation_isomorphism(i, RealOperator::Zero(4, 4));
    CHECK(zero.map == RealOperator(2.0 * i.matrix()));
    CHECK(zero.invertible);

    Gen g(73);
    const RealOperator p = identity(4) + 0.05 * g.real_matrix(4);
    const RealOperator k = p * i.matrix() * inverse(p);
    const PerturbationIsomorphism near = perturbation_isomorphism(i, RealOperator(k - i.matrix()), 1e-12);
    CHECK(near.invertible);
    CHECK(near.residual <= 1e-12);

    const PerturbationIsomorphism flip = perturbation_isomorphism(i, RealOperator(-2.0 * i.matrix()));
    CHECK_FALSE(flip.invertible);
    CHECK_THROWS_AS(perturbation_isomorphism(i, identity(4)), Error);
  }
}
