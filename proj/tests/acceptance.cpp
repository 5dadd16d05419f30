// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "cxs/ckfield.hpp"
#include "cxs/complexification.hpp"
#include "cxs/lifting.hpp"
#include "cxs/riesz.hpp"
#include "cxs/structures.hpp"
#include "generators.hpp"

using namespace cxs;
using cxs::testing::canonical_j;
using cxs::testing::Gen;

namespace {

// Pinned tolerances and limits.
constexpr double kAc1Square = 1e-10;
constexpr double kAc1Commutator = 1e-8;  // relative to ||B||
constexpr double kAc1Seconds = 5.0;
constexpr double kAc2Structure = 1e-8;
constexpr double kAc2Block = 1e-8;
constexpr double kAc2Seconds = 30.0;
constexpr double kAc4Oracle = 1e-8;
constexpr double kAc4Idempotency = 1e-12;
constexpr double kAc4ImagPart = 1e-10;
constexpr double kAc5Identity = 1e-11;
constexpr double kAc6Conjugation = 1e-8;
constexpr double kAc7Square = 1e-10;
constexpr double kAc7Conjugation = 1e-9;
constexpr double kAc7F2F3 = 1e-9;
constexpr double kAc7Seconds = 10.0;
constexpr double kAc8Series = 1e-10;
constexpr double kAc9Canonical = 1e-12;
constexpr double kAc9Isometry = 1e-9;

/// Tally of trials with the worst observed values and the first failure.
class Tally {
 public:
  void trial(bool ok, const std::string& what = {}) {
    ++trials_;
    if (!ok) {
      ++failures_;
      if (first_.empty()) first_ = what.empty() ? "trial " + std::to_string(trials_) : what;
    }
  }
  void worst(const std::string& name, double value) {
    for (auto& [n, v] : worst_) {
      if (n == name) {
        v = std::max(v, value);
        return;
      }
    }
    worst_.emplace_back(name, value);
  }
  template <typename F>
  void guarded(const std::string& label, F&& body) {
    try {
      trial(body(), label);
    } catch (const std::exception& e) {
      trial(false, label + ": " + e.what());
    }
  }
  bool passed() const { return failures_ == 0 && trials_ > 0; }
  std::string summary() const {
    std::ostringstream s;
    s << trials_ - failures_ << "/" << trials_ << " trials";
    for (const auto& [n, v] : worst_) s << ", max " << n << " " << v;
    if (!first_.empty()) s << "; first failure: " << first_;
    return s.str();
  }

 private:
  int trials_ = 0;
  int failures_ = 0;
  std::string first_;
  std::vector<std::pair<std::string, double>> worst_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

/// Random structure R J R^{-1} with cond(R) <= cond.
RealOperator random_structure(Gen& g, Eigen::Index n, double cond) {
  const RealOperator r = g.conditioned(n, cond);
  return r * canonical_j(n) * inverse(r);
}

// 1. Complex lifting ---------------------------------------------------------

bool ac1(std::string& detail) {
  Gen g(1001);
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  const double eps_values[] = {0.3, 0.1, 0.01, 0.0};
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = g.integer(2, 40);
    const double eps = eps_values[trial % 4];
    const ComplexOperator v = g.complex_conditioned(n, 2.0);
    ComplexOperator d = ComplexOperator::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) d(k, k) = g.coin() ? Complex(0, 1) : Complex(0, -1);
    const ComplexOperator a0 = v * d * inverse(v);
    ComplexOperator r = g.complex_matrix(n);
    r /= opnorm(r);
    const ComplexOperator b = a0 + eps * r;
    t.guarded("n=" + std::to_string(n) + " eps=" + std::to_string(eps), [&] {
      const ComplexLift lift = complex_lift(b, IdealBudget::norm_only(4.0 * opnorm(b) + 1.0));
      const double sq = opnorm(ComplexOperator(lift.a * lift.a + complex_identity(n)));
      const double comm = opnorm(ComplexOperator(lift.a * b - b * lift.a)) / opnorm(b);
      t.worst("||A^2+Id||", sq);
      t.worst("||AB-BA||/||B||", comm);
      if (eps == 0.0) return lift.a == b;
      return sq <= kAc1Square && comm <= kAc1Commutator;
    });
  }
  const double elapsed = seconds_since(start);
  detail = t.summary() + ", " + std::to_string(elapsed) + " s (limit 5 s)";
  return t.passed() && elapsed < kAc1Seconds;
}

// 2 and 3. Dichotomy and the parity chain -----------------------------------

struct ParityChain {
  Tally t;
  void record(const LiftOutcome& out, const RealOperator& a) {
    t.guarded("parity chain dim " + std::to_string(a.rows()), [&] {
      const LiftCertificates& c = out.certificates;
      const int dim_parity = static_cast<int>(a.rows() % 2);
      const ParityCertificate p = parity_count(a);
      bool ok = c.rank_p % 2 == 0 && c.rank_q % 2 == dim_parity && p.parity == dim_parity;
      if (out.is_odd()) {
        const ExclusionCertificate e = exclusion_check(out, a);
        ok = ok && e.odd && !e.statement.empty();
      }
      return ok;
    });
  }
};

bool ac2(std::string& detail, ParityChain& chain) {
  Gen g(2002);
  Tally even, odd;
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 * g.integer(1, 50);
    const RealOperator r = g.conditioned(n, g.uniform(1.0, 20.0));
    const Eigen::Index rank_e = n / 4;
    RealOperator a = r * canonical_j(n) * inverse(r);
    if (rank_e > 0) a += g.low_rank(n, rank_e, g.uniform(0.0, 0.2));
    even.guarded("even n=" + std::to_string(n), [&] {
      const AlmostComplexStructure acs(a);
      const LiftOutcome out = real_dichotomy(acs, IdealBudget::rank_only(static_cast<int>(2 * rank_e)));
      chain.record(out, a);
      if (!out.is_even()) return false;
      const RealOperator sum = a + out.v;
      const double res = opnorm(RealOperator(sum * sum + identity(n)));
      even.worst("||(A+v)^2+Id||", res);
      return res <= kAc2Structure && out.certificates.rank_v <= 3 * acs.rank_s() + 3;
    });
  }
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index m = 2 * g.integer(1, 49);
    const Eigen::Index n = m + 1;
    const ComplexStructure j(random_structure(g, m, g.uniform(1.0, 20.0)), 1e-6);
    const Eigen::Index rank_e = std::max<Eigen::Index>(1, n / 4);
    const RealOperator a = hyperplane_embed(j) + g.low_rank(n, rank_e, g.uniform(0.0, 0.2));
    odd.guarded("odd n=" + std::to_string(n), [&] {
      const LiftOutcome out =
          real_dichotomy(AlmostComplexStructure(a), IdealBudget::rank_only(static_cast<int>(2 * rank_e + 1)));
      chain.record(out, a);
      if (!out.is_odd()) return false;
      odd.worst("block residual", out.certificates.block_residual);
      return out.certificates.block_residual <= kAc2Block;
    });
  }
  const double elapsed = seconds_since(start);
  detail = "even: " + even.summary() + " | odd: " + odd.summary() + ", " + std::to_string(elapsed) +
           " s (limit 30 s)";
  return even.passed() && odd.passed() && elapsed < kAc2Seconds;
}

bool ac3(std::string& detail, ParityChain& chain) {
  Gen g(3003);
  Tally track;
  for (int trial = 0; trial < 100; ++trial) {
    const bool odd = trial % 2 == 1;
    const Eigen::Index m = 2 * g.integer(1, 8);
    const RealOperator j = random_structure(g, m, 3.0);
    const RealOperator a = odd ? hyperplane_embed(ComplexStructure(j, 1e-8)) : j;
    RealOperator s = g.real_matrix(a.rows());
    s *= 0.05 / (opnorm(s) * opnorm(j));
    track.guarded("path " + std::to_string(trial), [&] {
      const HomotopyTrack h = homotopy_parity_track(a, s, 101);
      return h.verdict == TrackVerdict::constant && h.points.size() == 101;
    });
  }
  detail = "chain: " + chain.t.summary() + " | homotopy: " + track.summary();
  return chain.t.passed() && track.passed();
}

// 4. Riesz engine ------------------------------------------------------------

bool ac4(std::string& detail) {
  Gen g(4004);
  Tally t;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = g.integer(2, 50);
    const ComplexOperator v = g.complex_conditioned(n, 5.0);
    ComplexOperator d = ComplexOperator::Zero(n, n), keep = ComplexOperator::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      const bool inner = g.coin();
      d(k, k) = std::polar(inner ? g.uniform(0.0, 0.5) : g.uniform(1.5, 3.0), g.uniform(0.0, 6.283));
      keep(k, k) = inner ? 1.0 : 0.0;
    }
    const ComplexOperator vinv = inverse(v);
    const ComplexOperator b = v * d * vinv;
    const ComplexOperator oracle = v * keep * vinv;

    // Real operator with the same spectral layout: 2x2 rotation-scaling blocks.
    const RealOperator w = g.conditioned(n, 5.0);
    RealOperator dr = RealOperator::Zero(n, n);
    for (Eigen::Index k = 0; k < n; k += 2) {
      const double radius = g.coin() ? g.uniform(0.0, 0.5) : g.uniform(1.5, 3.0);
      if (k + 1 < n) {
        const double theta = g.uniform(0.0, 3.14);
        dr(k, k) = dr(k + 1, k + 1) = radius * std::cos(theta);
        dr(k, k + 1) = radius * std::sin(theta);
        dr(k + 1, k) = -radius * std::sin(theta);
      } else {
        dr(k, k) = g.coin() ? radius : -radius;
      }
    }
    const RealOperator real_b = w * dr * inverse(w);

    t.guarded("n=" + std::to_string(n), [&] {
      const SpectralProjection p = riesz_projection(b, CircleContour{0.0, 1.0, 0});
      const double diff = opnorm(ComplexOperator(p.projection - oracle));
      t.worst("||P-P_oracle||", diff);
      t.worst("idempotency", p.idempotency_residual);
      const RectContour r = select_disk_contour(eig(real_b, default_cluster_radius(real_b)), 0.1);
      const SpectralProjection q = riesz_projection(complexify(real_b).to_complex(), r);
      const double imag = opnorm(RealOperator(q.projection.imag()));
      t.worst("||Im P||", imag);
      return diff <= kAc4Oracle && p.idempotency_residual <= kAc4Idempotency && imag <= kAc4ImagPart;
    });
  }
  detail = t.summary();
  return t.passed();
}

// 5. Algebraic identities ----------------------------------------------------

bool ac5(std::string& detail) {
  Gen g(5005);
  Tally t;
  for (int trial = 0; trial < 500; ++trial) {
    const Eigen::Index n = 2 * g.integer(1, 10);
    const ComplexStructure a(random_structure(g, n, 2.0), 1e-10);
    const ComplexStructure b(random_structure(g, n, 2.0), 1e-10);
    t.guarded("n=" + std::to_string(n), [&] {
      const double inter = intertwiner_sum(a, b).residual;
      const IdentityResiduals r = incomparability_identities(a, b);
      t.worst("(T+U)T-U(T+U)", inter);
      t.worst("sum of squares", r.sum_of_squares);
      t.worst("anticommutator", r.anticommutator);
      return inter <= kAc5Identity && r.sum_of_squares <= kAc5Identity && r.anticommutator <= kAc5Identity;
    });
  }
  detail = t.summary();
  return t.passed();
}

// 6. Conjugator synthesis ----------------------------------------------------

bool ac6(std::string& detail) {
  Gen g(6006);
  Tally pairs, round;
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index n = 2 * g.integer(1, 10);
    const ComplexStructure j(random_structure(g, n, 5.0), 1e-9);
    const ComplexStructure k(random_structure(g, n, 5.0), 1e-9);
    pairs.guarded("n=" + std::to_string(n), [&] {
      const Conjugation c = conjugator(j, k, static_cast<std::uint64_t>(trial));
      const double res = opnorm(RealOperator(c.p * k.matrix() * inverse(c.p) - j.matrix()));
      pairs.worst("||PKP^-1-J||", res);
      pairs.worst("cond(P)", c.condition);
      return res <= kAc6Conjugation && std::isfinite(c.condition) && c.condition >= 1.0;
    });
  }
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index n = 2 * g.integer(1, 10);
    const ComplexStructure j(random_structure(g, n, 5.0), 1e-9);
    round.guarded("round trip n=" + std::to_string(n), [&] {
      const RealOperator e = hyperplane_embed(j);
      const LiftOutcome out = real_dichotomy(AlmostComplexStructure(e), IdealBudget::rank_only(1));
      if (!out.is_odd()) return false;
      const ComplexStructure jy(std::get<OddLift>(out.variant).j_y, 1e-8);
      const Conjugation c = conjugator(j, jy);
      const double res = opnorm(RealOperator(c.p * jy.matrix() * inverse(c.p) - j.matrix()));
      round.worst("||P J_Y P^-1 - J||", res);
      return res <= kAc6Conjugation;
    });
  }
  detail = "pairs: " + pairs.summary() + " | embed round trip: " + round.summary();
  return pairs.passed() && round.passed();
}

// 7. C(K) machinery ----------------------------------------------------------

bool ac7(std::string& detail) {
  Gen g(7007);
  Tally t;
  const auto start = std::chrono::steady_clock::now();
  const CKSpace spaces[] = {CKSpace::single, CKSpace::disjoint_union, CKSpace::amalgam};
  int with_exceptional = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const CKSpace space = spaces[trial % 3];
    const std::size_t length = static_cast<std::size_t>(g.integer(0, 50));
    const std::vector<CKPoint> points = represented_points(space, length);
    std::vector<Eigen::Matrix2d> values;
    // Exact structures at the limit points; nearby or arbitrary values elsewhere.
    Eigen::Matrix2d tail_value;
    tail_value << 0.0, 2.0, -0.5, 0.0;
    for (const CKPoint& x : points) {
      if (x.is_tail()) {
        values.push_back(trial % 2 == 0 ? j0() : tail_value);
        continue;
      }
      const Eigen::Matrix2d r = g.conditioned(2, 2.0);
      const Eigen::Matrix2d k = r * j0() * r.inverse();
      if (g.integer(0, 9) == 0) {
        values.push_back(Eigen::Matrix2d(RealOperator(g.real_matrix(2))));
      } else {
        values.push_back(k + 0.02 * Eigen::Matrix2d(RealOperator(g.uniform_matrix(2))));
      }
    }
    const CKMatrixField m = CKMatrixField::from_pointwise(space, length, values);
    t.guarded(std::string(to_string(space)) + " length " + std::to_string(length), [&] {
      const FieldCorrection c = field_correct(m);
      with_exceptional += c.exceptional.empty() ? 0 : 1;
      const FieldConjugation q = field_conjugator(c.m_prime);
      const DecompositionCertificate d = strict_singular_decomposition(m, c);
      t.worst("||M'^2+I||", c.max_residual);
      t.worst("||QJ0P-M'||", q.conjugation_residual);
      t.worst("identity residual", d.max_residual);
      return c.max_residual <= kAc7Square && q.conjugation_residual <= kAc7Conjugation &&
             q.max_f2f3 <= -1.0 + kAc7F2F3 && almost_null_membership(c.n_prime) &&
             d.points_checked == points.size();
    });
  }
  const double elapsed = seconds_since(start);
  detail = t.summary() + ", " + std::to_string(with_exceptional) + " with nonempty F, " +
           std::to_string(elapsed) + " s (limit 10 s)";
  return t.passed() && with_exceptional > 0 && elapsed < kAc7Seconds;
}

// 8. Series coefficients -----------------------------------------------------

bool ac8(std::string& detail) {
  bool ok = true;
  std::ostringstream s;
  // b_n = C(2n, n) / 4^n as an exact fraction.
  const std::vector<double> b = binomial_coefficients(3000);
  for (int n = 1; n <= 3; ++n) {
    std::uint64_t num = 1, den = 1;
    for (int k = 1; k <= n; ++k) {
      num *= static_cast<std::uint64_t>(n + k);
      den *= static_cast<std::uint64_t>(k);
    }
    const std::uint64_t g = std::gcd(num, den);
    num /= g;
    den /= g;
    den <<= 2 * n;
    const std::uint64_t h = std::gcd(num, den);
    num /= h;
    den /= h;
    const bool exact = b[static_cast<std::size_t>(n - 1)] == static_cast<double>(num) / static_cast<double>(den);
    s << "b" << n << "=" << num << "/" << den << (exact ? " exact" : " MISMATCH") << ", ";
    ok = ok && exact;
  }
  double worst = 0.0;
  for (double z : {0.5, -0.5, 0.9, -0.9}) {
    double sum = 0.0, power = 1.0;
    for (double c : b) {
      power *= z;
      sum += c * power;
    }
    worst = std::max(worst, std::abs(sum - (-1.0 + 1.0 / std::sqrt(1.0 - z))));
  }
  s << "max series error " << worst;
  ok = ok && worst <= kAc8Series;
  detail = s.str();
  return ok;
}

// 9. Equivalent norm ---------------------------------------------------------

bool ac9(std::string& detail) {
  Gen g(9009);
  Tally t;
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::Index n = 2 * g.integer(1, 10);
    const RealVector x = g.vector(n);
    t.guarded("canonical", [&] {
      const double d = std::abs(equivalent_norm(canonical_structure(n), x, BaseNorm::l2) - x.norm());
      t.worst("| |||x|||-||x||_2 |", d);
      return d <= kAc9Canonical * std::max(1.0, x.norm());
    });
  }
  const BaseNorm bases[] = {BaseNorm::l1, BaseNorm::l2, BaseNorm::linf};
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Index n = 2 * g.integer(1, 8);
    const ComplexStructure j(random_structure(g, n, 3.0), 1e-9);
    const BaseNorm base = bases[trial % 3];
    const RealVector x = g.vector(n);
    t.guarded("random structure", [&] {
      const double nx = equivalent_norm(j, x, base);
      const double njx = equivalent_norm(j, RealVector(j.matrix() * x), base);
      const double rel = std::abs(nx - njx) / nx;
      t.worst("| |||Jx|||-|||x||| | / |||x|||", rel);
      const double lower = vector_norm(x, base);
      const double upper = (1.0 + induced_norm(j.matrix(), base)) * lower;
      return rel <= kAc9Isometry && lower <= nx && nx <= upper;
    });
  }
  detail = t.summary();
  return t.passed();
}

}  // namespace

int main() {
  ParityChain chain;
  const std::vector<std::pair<std::string, std::function<bool(std::string&)>>> criteria = {
      {"AC1 complex lifting", ac1},
      {"AC2 dichotomy correctness", [&](std::string& d) { return ac2(d, chain); }},
      {"AC3 parity chain", [&](std::string& d) { return ac3(d, chain); }},
      {"AC4 Riesz engine", ac4},
      {"AC5 algebraic identities", ac5},
      {"AC6 conjugator synthesis", ac6},
      {"AC7 C(K) machinery", ac7},
      {"AC8 series coefficients", ac8},
      {"AC9 equivalent norm", ac9},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    std::string detail;
    bool ok = false;
    try {
      ok = check(detail);
    } catch (const std::exception& e) {
      detail = std::string("uncaught: ") + e.what();
    }
    std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
    std::fflush(stdout);
    failed += ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
