#pragma once

// JSON encodings of matrices and C(K) fields.
//
// Matrix: {"dim": n, "kind": "real" | "complex", "data": [...]}, row-major,
// complex entries as [re, im] pairs.
// Function on K: {"space": "single" | "union" | "amalgam", "prefix": [...],
// "prefix2": [...], "tail": x, "tail2": y}; prefix2 only on two-copy spaces,
// tail2 only on the union (defaults to tail).
// Matrix field: {"f1": fn, "f2": fn, "f3": fn, "f4": fn}.

#include <string>
#include <variant>

#include <json.hpp>

#include "cxs/ckfield.hpp"
#include "cxs/linalg.hpp"

namespace cxs::io {

using Json = nlohmann::json;

using Matrix = std::variant<RealOperator, ComplexOperator>;

Json to_json(const RealOperator& a);
Json to_json(const ComplexOperator& a);
Json to_json(const Matrix& a);
/// Throws invalid_input on a malformed document.
Matrix matrix_from_json(const Json& j);
RealOperator real_matrix_from_json(const Json& j);
ComplexOperator complex_matrix_from_json(const Json& j);

Json to_json(const CKFunction& f);
CKFunction ck_function_from_json(const Json& j);
Json to_json(const CKMatrixField& m);
CKMatrixField ck_field_from_json(const Json& j);

Json vector_to_json(const Eigen::VectorXd& v);
Json rows_to_json(const Eigen::MatrixXd& m);  // [[row 0], [row 1], ...]

/// Parses a file (or standard input for "-").
Json read_json(const std::string& path);
/// Pretty-printed with a trailing newline; byte-identical for equal documents.
std::string dump(const Json& j);
void write_text(const std::string& path, const std::string& text);

}  // namespace cxs::io
