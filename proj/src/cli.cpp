#include "cxs/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>

#include <CLI11.hpp>

#include "cxs/ckfield.hpp"
#include "cxs/io.hpp"
#include "cxs/lifting.hpp"
#include "cxs/structures.hpp"

namespace cxs::cli {

namespace {

using io::Json;

struct Options {
  double tol = 1e-10;
  std::optional<int> max_rank;
  std::optional<double> max_norm;
  double margin = -1.0;
  int grid = 101;
  std::uint64_t seed = 0x5eed;
  std::string out;
  bool timing = false;
  std::string in, s, k, against;
};

struct Result {
  Json cert;
  int code = kExitOk;
};

IdealBudget budget_for(const Options& o, Eigen::Index dim) {
  if (!o.max_rank && !o.max_norm) return IdealBudget::defaults(dim);
  return {o.max_rank, o.max_norm};
}

Json budget_json(const IdealBudget& b) {
  return {{"max_rank", b.max_rank ? Json(*b.max_rank) : Json(nullptr)},
          {"max_norm", b.max_norm ? Json(*b.max_norm) : Json(nullptr)}};
}

Json tolerances_json(const Options& o) {
  return {{"tol", o.tol}, {"contour_margin", o.margin >= 0.0 ? Json(o.margin) : Json("default")}};
}

LiftOptions lift_options(const Options& o) {
  LiftOptions lo;
  lo.tol = o.tol;
  lo.margin = o.margin;
  return lo;
}

Json point_json(const CKPoint& x) {
  if (x.is_tail()) return {{"copy", x.copy}, {"tail", true}};
  return {{"copy", x.copy}, {"index", x.index}};
}

Json eigenvalues_json(const std::vector<Eigenvalue>& values) {
  Json out = Json::array();
  for (const auto& e : values) out.push_back({{"value", e.value.real()}, {"multiplicity", e.multiplicity}});
  return out;
}

int numerical_rank(const RealOperator& m, double scale) {
  const RealVector sv = singular_values(m);
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) r += sv(i) > kRankTol * scale ? 1 : 0;
  return r;
}

double squared_scale(const RealOperator& a) {
  const double na = opnorm(a);
  return std::max(1.0, na * na);
}

Result cmd_lift_complex(const Options& o) {
  const ComplexOperator b = io::complex_matrix_from_json(io::read_json(o.in));
  const IdealBudget budget = budget_for(o, b.rows());
  const ComplexLift lift = complex_lift(b, budget, lift_options(o));
  Result r;
  r.cert = {{"command", "lift-complex"},
            {"input", {{"dim", b.rows()}}},
            {"tolerances", tolerances_json(o)},
            {"budget", budget_json(budget)},
            {"outcome", "lifted"},
            {"fast_path", lift.fast_path},
            {"A", io::to_json(lift.a)},
            {"residuals", {{"square_plus_identity", lift.defect}, {"commutator", lift.commutator}}},
            {"distance", lift.distance},
            {"ranks", {{"correction", lift.correction_rank}, {"defect", lift.defect_rank}}},
            {"defect_norm", lift.defect_norm}};
  return r;
}

Result cmd_dichotomy(const Options& o) {
  const RealOperator a = io::real_matrix_from_json(io::read_json(o.in));
  const AlmostComplexStructure acs(a);
  const IdealBudget budget = budget_for(o, acs.dim());
  const LiftOutcome outcome = real_dichotomy(acs, budget, lift_options(o));
  const LiftCertificates& c = outcome.certificates;
  const ParityCertificate parity = parity_count(a);
  const ExclusionCertificate exclusion = exclusion_check(outcome, a);

  Result r;
  Json& cert = r.cert;
  cert = {{"command", "dichotomy"},
          {"input", {{"dim", acs.dim()}}},
          {"tolerances", tolerances_json(o)},
          {"budget", budget_json(budget)},
          {"outcome", outcome.is_even() ? "even" : "odd"},
          {"v", io::to_json(outcome.v)},
          {"ranks",
           {{"S", c.rank_s}, {"P", c.rank_p}, {"Q", c.rank_q}, {"v", c.rank_v}, {"s", c.rank_s_part}}},
          {"norms", {{"S", acs.norm_s()}, {"v", c.norm_v}}},
          {"series", {{"terms", c.series_terms}, {"spectral_radius", c.spectral_radius}}},
          {"contour",
           {{"center_re", c.contour.center_re},
            {"half_width", c.contour.half_width},
            {"half_height", c.contour.half_height}}},
          {"residuals",
           {{"structure", c.structure_residual},
            {"series", c.series_residual},
            {"projection_commutator", c.projection_commutator},
            {"projection_imag_part", c.imag_part}}},
          {"parity", {{"n", parity.n}, {"parity", parity.parity == 0 ? "even" : "odd"}}},
          {"exclusion", exclusion.statement}};
  if (const auto* even = std::get_if<EvenLift>(&outcome.variant)) {
    cert["J"] = io::to_json(even->j.matrix());
    return r;
  }
  const auto& odd = std::get<OddLift>(outcome.variant);
  const Eigen::Index n = acs.dim();
  cert["residuals"]["block"] = c.block_residual;
  cert["e"] = io::vector_to_json(odd.e);
  cert["Y_basis"] = io::rows_to_json(odd.y_basis.transpose());
  cert["J_Y"] = io::to_json(odd.j_y);
  // The block form of A + v, and the form its square then takes.
  Eigen::MatrixXd basis(n, n);
  basis << odd.e, odd.y_basis;
  const RealOperator t = a + outcome.v;
  RealOperator square_target = -identity(n);
  square_target(0, 0) = 1.0;
  const double square_residual =
      opnorm(RealOperator(inverse(RealOperator(basis)) * t * t * basis - square_target));
  cert["readings"] = {{"block_form", "A+v = diag(1, J_Y) in the basis (e, Y_basis)"},
                      {"square_form", "(A+v)^2 = diag(1, -Id) in the same basis"},
                      {"square_form_residual", square_residual}};
  const AlignedOdd aligned = align_to_splitting(outcome, a, Splitting::standard(n));
  cert["alignment"] = {{"splitting", "e_1 + span(e_2, ..., e_n)"},
                       {"f", io::to_json(aligned.f)},
                       {"J_prime", io::to_json(aligned.j_prime)},
                       {"rank_f", aligned.rank_f},
                       {"same_hyperplane", aligned.same_hyperplane},
                       {"z_codimension", aligned.z_codimension},
                       {"line_residual", aligned.line_residual},
                       {"plane_residual", aligned.plane_residual},
                       {"structure_residual", aligned.structure_residual}};
  r.code = kExitOdd;
  return r;
}

Result cmd_parity(const Options& o) {
  const RealOperator a = io::real_matrix_from_json(io::read_json(o.in));
  const ParityCertificate p = parity_count(a);
  Result r;
  r.cert = {{"command", "parity"},
            {"input", {{"dim", a.rows()}}},
            {"n", p.n},
            {"parity", p.parity == 0 ? "even" : "odd"},
            {"radius", p.radius},
            {"real_eigenvalues", eigenvalues_json(p.real_eigs)}};
  r.code = p.parity == 0 ? kExitOk : kExitOdd;
  return r;
}

Result cmd_track(const Options& o) {
  const RealOperator a = io::real_matrix_from_json(io::read_json(o.in));
  const RealOperator s = io::real_matrix_from_json(io::read_json(o.s));
  const HomotopyTrack track = homotopy_parity_track(a, s, o.grid, std::max(o.tol, 1e-8));
  Json points = Json::array();
  for (const auto& p : track.points) {
    if (p.ambiguous) {
      points.push_back({{"mu", p.mu}, {"ambiguous", true}, {"note", p.note}});
    } else {
      points.push_back({{"mu", p.mu}, {"n", p.n}});
    }
  }
  Result r;
  r.cert = {{"command", "track"},
            {"input", {{"dim", a.rows()}}},
            {"grid", o.grid},
            {"points", std::move(points)},
            {"verdict", to_string(track.verdict)},
            {"n_start", track.n_start},
            {"n_end", track.n_end}};
  if (track.verdict == TrackVerdict::varying) r.code = kExitNumerical;
  return r;
}

Result cmd_conjugate(const Options& o) {
  const RealOperator jm = io::real_matrix_from_json(io::read_json(o.in));
  const RealOperator km = io::real_matrix_from_json(io::read_json(o.k));
  const ComplexStructure j(jm, o.tol * squared_scale(jm));
  const ComplexStructure k(km, o.tol * squared_scale(km));
  const Conjugation c = conjugator(j, k, o.seed);
  Result r;
  r.cert = {{"command", "conjugate"},
            {"input", {{"dim", jm.rows()}}},
            {"seed", o.seed},
            {"K", io::to_json(km)},
            {"P", io::to_json(c.p)},
            {"residuals", {{"conjugation", c.residual}}},
            {"condition", c.condition},
            {"retried", c.retried}};
  return r;
}

Result cmd_embed(const Options& o) {
  const RealOperator jm = io::real_matrix_from_json(io::read_json(o.in));
  const ComplexStructure j(jm, o.tol * squared_scale(jm));
  Result r;
  r.cert = {{"command", "embed"},
            {"input", {{"dim", jm.rows()}}},
            {"embedded", io::to_json(hyperplane_embed(j))}};
  return r;
}

Result cmd_ck_correct(const Options& o) {
  const CKMatrixField m = io::ck_field_from_json(io::read_json(o.in));
  const FieldCorrection corr = field_correct(m, o.tol);
  const DecompositionCertificate dec = strict_singular_decomposition(m, corr, o.tol);
  Json exceptional = Json::array();
  for (const auto& x : corr.exceptional) exceptional.push_back(point_json(x));
  Result r;
  r.cert = {{"command", "ck-correct"},
            {"space", to_string(m.space())},
            {"prefix_length", m.prefix_length()},
            {"tolerances", tolerances_json(o)},
            {"exceptional", std::move(exceptional)},
            {"n_prime", io::to_json(corr.n_prime)},
            {"m_prime", io::to_json(corr.m_prime)},
            {"n_prime_almost_null", almost_null_membership(corr.n_prime)},
            {"max_series_terms", corr.max_series_terms},
            {"v_rank", dec.v_rank},
            {"residuals",
             {{"square_plus_identity", corr.max_residual},
              {"decomposition", dec.max_residual},
              {"replacement", dec.max_replacement_residual}}}};
  return r;
}

Result cmd_ck_conjugate(const Options& o) {
  const CKMatrixField m = io::ck_field_from_json(io::read_json(o.in));
  const FieldConjugation c = field_conjugator(m, o.tol);
  Result r;
  r.cert = {{"command", "ck-conjugate"},
            {"space", to_string(m.space())},
            {"prefix_length", m.prefix_length()},
            {"tolerances", tolerances_json(o)},
            {"P", io::to_json(c.p)},
            {"Q", io::to_json(c.q)},
            {"max_f2f3", c.max_f2f3},
            {"min_abs_f2", c.min_abs_f2},
            {"residuals", {{"inverse", c.inverse_residual}, {"conjugation", c.conjugation_residual}}}};
  return r;
}

// verify ---------------------------------------------------------------------

class Checks {
 public:
  /// Passes when the recomputed residual is within 10x the stated one.
  void residual(const std::string& name, const Json& stated_j, double recomputed) {
    const double stated = number(stated_j, name);
    const double bound = std::max(10.0 * stated, 64.0 * std::numeric_limits<double>::epsilon());
    add(name, stated_j, recomputed, recomputed <= bound);
  }
  void equal(const std::string& name, const Json& stated, const Json& recomputed) {
    add(name, stated, recomputed, stated == recomputed);
  }
  void holds(const std::string& name, bool ok) { add(name, true, ok, ok); }

  Json json() const { return list_; }
  bool passed() const { return passed_; }

 private:
  static double number(const Json& j, const std::string& name) {
    if (!j.is_number()) throw Error(ErrorKind::invalid_input, "certificate field " + name + " is not a number");
    return j.get<double>();
  }
  void add(const std::string& name, const Json& stated, const Json& recomputed, bool ok) {
    list_.push_back({{"name", name}, {"stated", stated}, {"recomputed", recomputed}, {"pass", ok}});
    passed_ = passed_ && ok;
  }
  Json list_ = Json::array();
  bool passed_ = true;
};

const Json& at(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorKind::invalid_input, std::string("certificate lacks \"") + key + "\"");
  }
  return j.at(key);
}

Eigen::MatrixXd rows_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) return {};
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m.cols()) {
      throw Error(ErrorKind::invalid_input, "ragged row list in certificate");
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

void verify_lift_complex(const Options& o, const Json& cert, Checks& checks) {
  const ComplexOperator b = io::complex_matrix_from_json(io::read_json(o.in));
  const ComplexOperator a = io::complex_matrix_from_json(at(cert, "A"));
  if (a.rows() != b.rows()) throw Error(ErrorKind::dimension_mismatch, "certificate and input differ in dimension");
  const Json& res = at(cert, "residuals");
  checks.residual("square_plus_identity", at(res, "square_plus_identity"),
                  opnorm(ComplexOperator(a * a + complex_identity(a.rows()))));
  checks.residual("commutator", at(res, "commutator"), opnorm(ComplexOperator(a * b - b * a)));
  const double distance = opnorm(ComplexOperator(a - b));
  const double stated = at(cert, "distance").get<double>();
  checks.holds("distance", std::abs(distance - stated) <= 1e-8 * std::max(1.0, stated));
}

void verify_dichotomy(const Options& o, const Json& cert, Checks& checks) {
  const RealOperator a = io::real_matrix_from_json(io::read_json(o.in));
  const Eigen::Index n = a.rows();
  const RealOperator v = io::real_matrix_from_json(at(cert, "v"));
  if (v.rows() != n) throw Error(ErrorKind::dimension_mismatch, "certificate and input differ in dimension");
  const RealOperator t = a + v;
  const Json& res = at(cert, "residuals");
  const std::string outcome = at(cert, "outcome").get<std::string>();
  checks.equal("outcome_parity", outcome, n % 2 == 0 ? "even" : "odd");
  if (outcome == "even") {
    checks.residual("structure", at(res, "structure"), opnorm(RealOperator(t * t + identity(n))));
  } else {
    const RealVector e = Eigen::Map<const RealVector>(
        at(cert, "e").get<std::vector<double>>().data(), static_cast<Eigen::Index>(at(cert, "e").size()));
    const Eigen::MatrixXd y = rows_from_json(at(cert, "Y_basis")).transpose();
    const RealOperator j_y = n > 1 ? io::real_matrix_from_json(at(cert, "J_Y")) : RealOperator(0, 0);
    if (e.size() != n || (n > 1 && (y.rows() != n || y.cols() != n - 1 || j_y.rows() != n - 1))) {
      throw Error(ErrorKind::dimension_mismatch, "odd certificate has inconsistent shapes");
    }
    Eigen::MatrixXd basis(n, n);
    if (n > 1) {
      basis << e, y;
    } else {
      basis << e;
    }
    RealOperator block = RealOperator::Zero(n, n);
    block(0, 0) = 1.0;
    if (n > 1) block.bottomRightCorner(n - 1, n - 1) = j_y;
    checks.residual("block", at(res, "block"),
                    opnorm(RealOperator(inverse(RealOperator(basis)) * t * basis - block)));
    checks.residual("structure", at(res, "structure"),
                    n > 1 ? opnorm(RealOperator(j_y * j_y + identity(n - 1))) : 0.0);
  }
  const AlmostComplexStructure acs(a);
  const int rank_v = numerical_rank(v, squared_scale(a));
  checks.holds("rank_v <= 3 rank_S + 3", rank_v <= 3 * acs.rank_s() + 3);
  checks.equal("rank_S", at(at(cert, "ranks"), "S"), acs.rank_s());
  checks.equal("parity_n", at(at(cert, "parity"), "n"), parity_count(a).n);
}

void verify_parity(const Options& o, const Json& cert, Checks& checks) {
  const RealOperator a = io::real_matrix_from_json(io::read_json(o.in));
  const ParityCertificate p = parity_count(a);
  checks.equal("n", at(cert, "n"), p.n);
  checks.equal("parity", at(cert, "parity"), p.parity == 0 ? "even" : "odd");
}

void verify_track(const Options& o, const Json& cert, Checks& checks) {
  Options rerun = o;
  rerun.grid = at(cert, "grid").get<int>();
  const Json fresh = cmd_track(rerun).cert;
  checks.equal("verdict", at(cert, "verdict"), fresh.at("verdict"));
  checks.equal("points", at(cert, "points"), fresh.at("points"));
}

void verify_conjugate(const Options& o, const Json& cert, Checks& checks) {
  const RealOperator j = io::real_matrix_from_json(io::read_json(o.in));
  const RealOperator k = io::real_matrix_from_json(at(cert, "K"));
  const RealOperator p = io::real_matrix_from_json(at(cert, "P"));
  if (k.rows() != j.rows() || p.rows() != j.rows()) {
    throw Error(ErrorKind::dimension_mismatch, "certificate and input differ in dimension");
  }
  checks.residual("conjugation", at(at(cert, "residuals"), "conjugation"),
                  opnorm(RealOperator(p * k * inverse(p) - j)));
}

void verify_embed(const Options& o, const Json& cert, Checks& checks) {
  const RealOperator jm = io::real_matrix_from_json(io::read_json(o.in));
  const RealOperator stated = io::real_matrix_from_json(at(cert, "embedded"));
  const RealOperator fresh = hyperplane_embed(ComplexStructure(jm, o.tol * squared_scale(jm)));
  checks.holds("embedded", stated.rows() == fresh.rows() && stated == fresh);
}

/// Largest pointwise value of g(x) over the represented points of `m`.
double max_over_points(const CKMatrixField& m, const std::function<double(const CKPoint&)>& g) {
  double out = 0.0;
  for (const CKPoint& x : m.points()) out = std::max(out, g(x));
  return out;
}

double norm2(const Eigen::Matrix2d& m) { return Eigen::JacobiSVD<Eigen::Matrix2d>(m).singularValues()(0); }

void verify_ck_correct(const Options& o, const Json& cert, Checks& checks) {
  const CKMatrixField m = io::ck_field_from_json(io::read_json(o.in));
  const CKMatrixField n_prime = io::ck_field_from_json(at(cert, "n_prime"));
  const CKMatrixField m_prime = io::ck_field_from_json(at(cert, "m_prime"));
  const Json& res = at(cert, "residuals");
  checks.residual("square_plus_identity", at(res, "square_plus_identity"),
                  max_over_points(m_prime, [&](const CKPoint& x) {
                    const Eigen::Matrix2d mx = m_prime.at(x);
                    return norm2(mx * mx + Eigen::Matrix2d::Identity());
                  }));
  const CKMatrixField sum = m + n_prime;
  checks.holds("m_prime = m + n_prime", max_over_points(sum, [&](const CKPoint& x) {
                                          return norm2(sum.at(x) - m_prime.at(x));
                                        }) == 0.0);
  checks.holds("n_prime almost null", almost_null_membership(n_prime));
}

void verify_ck_conjugate(const Options& o, const Json& cert, Checks& checks) {
  const CKMatrixField m = io::ck_field_from_json(io::read_json(o.in));
  const CKMatrixField p = io::ck_field_from_json(at(cert, "P"));
  const CKMatrixField q = io::ck_field_from_json(at(cert, "Q"));
  const Json& res = at(cert, "residuals");
  const CKMatrixField all = m + p + q;  // for the joint point set
  checks.residual("inverse", at(res, "inverse"), max_over_points(all, [&](const CKPoint& x) {
                    return norm2(p.at(x) * q.at(x) - Eigen::Matrix2d::Identity());
                  }));
  checks.residual("conjugation", at(res, "conjugation"), max_over_points(all, [&](const CKPoint& x) {
                    return norm2(q.at(x) * j0() * p.at(x) - m.at(x));
                  }));
}

Result cmd_verify(const Options& o) {
  const Json cert = io::read_json(o.against);
  const std::string command = at(cert, "command").get<std::string>();
  Checks checks;
  if (command == "lift-complex") verify_lift_complex(o, cert, checks);
  else if (command == "dichotomy") verify_dichotomy(o, cert, checks);
  else if (command == "parity") verify_parity(o, cert, checks);
  else if (command == "track") verify_track(o, cert, checks);
  else if (command == "conjugate") verify_conjugate(o, cert, checks);
  else if (command == "embed") verify_embed(o, cert, checks);
  else if (command == "ck-correct") verify_ck_correct(o, cert, checks);
  else if (command == "ck-conjugate") verify_ck_conjugate(o, cert, checks);
  else throw Error(ErrorKind::invalid_input, "cannot verify command \"" + command + "\"");
  Result r;
  r.cert = {{"command", "verify"}, {"verified_command", command}, {"checks", checks.json()},
            {"passed", checks.passed()}};
  r.code = checks.passed() ? kExitOk : kExitNumerical;
  return r;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_input:
    case ErrorKind::dimension_mismatch:
    case ErrorKind::precondition:
      return kExitUsage;
    default:
      return kExitNumerical;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Complex structures on real spaces: lifting, dichotomy, parity and C(K) fields", "cxs"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--tol", o.tol, "Global tolerance")
      ->envname(kTolEnv)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-rank", o.max_rank, "Ideal budget: maximal rank")->check(CLI::NonNegativeNumber);
  app.add_option("--max-norm", o.max_norm, "Ideal budget: maximal norm")->check(CLI::NonNegativeNumber);
  app.add_option("--contour-margin", o.margin, "Minimal spectrum-to-contour distance")
      ->check(CLI::PositiveNumber);
  app.add_option("--grid", o.grid, "Homotopy grid points")->check(CLI::Range(2, 1 << 20))->capture_default_str();
  app.add_option("--seed", o.seed, "Seed for randomized retries")->capture_default_str();
  app.add_option("--out", o.out, "Certificate path (default: standard output)");
  app.add_flag("--timing", o.timing, "Record wall-clock time in the certificate");

  using Handler = Result (*)(const Options&);
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* description, Handler h) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->fallthrough();
    sub->add_option("--in", o.in, "Input JSON file ('-' for standard input)")->required();
    commands.emplace_back(sub, h);
    return sub;
  };
  add("lift-complex", "Lift B with B^2 + Id in the budget to A with A^2 = -Id", cmd_lift_complex);
  add("dichotomy", "Even/odd dichotomy for a real A with A^2 + Id in the budget", cmd_dichotomy);
  add("parity", "Count real eigenvalues with multiplicity", cmd_parity);
  add("track", "Parity of real eigenvalues along A + mu s", cmd_track)
      ->add_option("--s", o.s, "Direction matrix s")
      ->required();
  add("conjugate", "Invertible P with P K P^{-1} = J", cmd_conjugate)
      ->add_option("--k", o.k, "Structure K")
      ->required();
  add("embed", "diag(1, J) on one dimension more", cmd_embed);
  add("ck-correct", "Correct a C(K) matrix field with almost-null defect", cmd_ck_correct);
  add("ck-conjugate", "Conjugate a C(K) field with square -I to J0", cmd_ck_conjugate);
  CLI::App* verify = add("verify", "Recompute a certificate's residuals", cmd_verify);
  verify->add_option("--against", o.against, "Certificate to check")->required();
  verify->add_option("--s", o.s, "Direction matrix s (track certificates)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }

  Handler handler = nullptr;
  std::string name;
  for (const auto& [sub, h] : commands) {
    if (sub->parsed()) {
      handler = h;
      name = sub->get_name();
    }
  }

  try {
    const auto start = std::chrono::steady_clock::now();
    Result r = handler(o);
    r.cert["args"] = args;
    if (o.timing) {
      r.cert["wall_clock_seconds"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    const std::string text = io::dump(r.cert);
    if (o.out.empty()) {
      out << text;
    } else {
      io::write_text(o.out, text);
    }
    err << "cxs " << name << ": exit " << r.code << "\n";
    return r.code;
  } catch (const Error& e) {
    err << "cxs " << name << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const nlohmann::json::exception& e) {
    err << "cxs " << name << ": invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "cxs " << name << ": " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace cxs::cli
