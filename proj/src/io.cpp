#include "cxs/io.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace cxs::io {

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorKind::invalid_input, what); }

double finite_number(const Json& j, const char* what) {
  if (!j.is_number()) invalid(std::string(what) + ": expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) invalid(std::string(what) + ": non-finite value");
  return x;
}

std::vector<double> number_array(const Json& j, const char* what) {
  if (!j.is_array()) invalid(std::string(what) + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(finite_number(x, what));
  return out;
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) invalid("expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) invalid(std::string("missing field \"") + key + "\"");
  return *it;
}

}  // namespace

Json to_json(const RealOperator& a) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) data.push_back(a(r, c));
  return {{"dim", a.rows()}, {"kind", "real"}, {"data", std::move(data)}};
}

Json to_json(const ComplexOperator& a) {
  Json data = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) data.push_back({a(r, c).real(), a(r, c).imag()});
  return {{"dim", a.rows()}, {"kind", "complex"}, {"data", std::move(data)}};
}

Json to_json(const Matrix& a) {
  return std::visit([](const auto& m) { return to_json(m); }, a);
}

Matrix matrix_from_json(const Json& j) {
  const Json& dim_j = field(j, "dim");
  if (!dim_j.is_number_integer() || dim_j.get<long long>() <= 0) invalid("\"dim\" must be a positive integer");
  const auto n = static_cast<Eigen::Index>(dim_j.get<long long>());
  std::string kind = "real";
  if (j.contains("kind")) {
    if (!j["kind"].is_string()) invalid("\"kind\" must be \"real\" or \"complex\"");
    kind = j["kind"].get<std::string>();
  }
  const Json& data = field(j, "data");
  if (!data.is_array()) invalid("\"data\" must be an array");
  if (static_cast<Eigen::Index>(data.size()) != n * n) {
    throw Error(ErrorKind::dimension_mismatch, "\"data\" has " + std::to_string(data.size()) +
                                                   " entries, expected dim^2 = " + std::to_string(n * n));
  }
  if (kind == "real") {
    RealOperator a(n, n);
    for (Eigen::Index k = 0; k < n * n; ++k) a(k / n, k % n) = finite_number(data[static_cast<std::size_t>(k)], "data");
    return a;
  }
  if (kind == "complex") {
    ComplexOperator a(n, n);
    for (Eigen::Index k = 0; k < n * n; ++k) {
      const Json& e = data[static_cast<std::size_t>(k)];
      if (!e.is_array() || e.size() != 2) invalid("complex entries must be [re, im] pairs");
      a(k / n, k % n) = Complex(finite_number(e[0], "data"), finite_number(e[1], "data"));
    }
    return a;
  }
  invalid("\"kind\" must be \"real\" or \"complex\", got \"" + kind + "\"");
}

RealOperator real_matrix_from_json(const Json& j) {
  Matrix m = matrix_from_json(j);
  if (auto* r = std::get_if<RealOperator>(&m)) return std::move(*r);
  invalid("expected a real matrix");
}

ComplexOperator complex_matrix_from_json(const Json& j) {
  Matrix m = matrix_from_json(j);
  if (auto* c = std::get_if<ComplexOperator>(&m)) return std::move(*c);
  return std::get<RealOperator>(m).cast<Complex>();
}

Json to_json(const CKFunction& f) {
  Json out = {{"space", to_string(f.space())}, {"prefix", f.prefix(0)}};
  if (copies(f.space()) == 2) out["prefix2"] = f.prefix(1);
  out["tail"] = f.tail(0);
  if (f.space() == CKSpace::disjoint_union) out["tail2"] = f.tail(1);
  return out;
}

CKFunction ck_function_from_json(const Json& j) {
  const Json& space_j = field(j, "space");
  if (!space_j.is_string()) invalid("\"space\" must be a string");
  const std::string name = space_j.get<std::string>();
  CKSpace space;
  if (name == "single") space = CKSpace::single;
  else if (name == "union") space = CKSpace::disjoint_union;
  else if (name == "amalgam") space = CKSpace::amalgam;
  else invalid("unknown space \"" + name + "\"");

  std::vector<double> prefix = j.contains("prefix") ? number_array(j["prefix"], "prefix") : std::vector<double>{};
  const double tail = finite_number(field(j, "tail"), "tail");
  if (space == CKSpace::single) {
    if (j.contains("prefix2") || j.contains("tail2")) invalid("a function on K has no second copy");
    return CKFunction(space, std::move(prefix), tail);
  }
  std::vector<double> prefix2 =
      j.contains("prefix2") ? number_array(j["prefix2"], "prefix2") : std::vector<double>{};
  double tail2 = tail;
  if (j.contains("tail2")) {
    if (space == CKSpace::amalgam) invalid("amalgam functions share one tail");
    tail2 = finite_number(j["tail2"], "tail2");
  }
  return CKFunction(space, std::move(prefix), std::move(prefix2), tail, tail2);
}

Json to_json(const CKMatrixField& m) {
  return {{"f1", to_json(m.f1)}, {"f2", to_json(m.f2)}, {"f3", to_json(m.f3)}, {"f4", to_json(m.f4)}};
}

CKMatrixField ck_field_from_json(const Json& j) {
  CKMatrixField m{ck_function_from_json(field(j, "f1")), ck_function_from_json(field(j, "f2")),
                  ck_function_from_json(field(j, "f3")), ck_function_from_json(field(j, "f4"))};
  if (m.f2.space() != m.f1.space() || m.f3.space() != m.f1.space() || m.f4.space() != m.f1.space()) {
    throw Error(ErrorKind::dimension_mismatch, "field entries live on different spaces");
  }
  return m;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) out.push_back(v(k));
  return out;
}

Json rows_to_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

Json read_json(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    text = ss.str();
  } else {
    std::ifstream in(path);
    if (!in) invalid("cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    invalid("malformed JSON in \"" + path + "\": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) invalid("cannot write \"" + path + "\"");
  out << text;
  if (!out) invalid("failed writing \"" + path + "\"");
}

}  // namespace cxs::io
