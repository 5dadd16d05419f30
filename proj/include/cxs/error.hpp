#pragma once

#include <stdexcept>
#include <string>

namespace cxs {

enum class ErrorKind {
  precondition,
  dimension_mismatch,
  not_invertible,
  no_convergence,
  no_separating_contour,
  quadrature,
  divergence,
  series,
  budget,
  ambiguous_parity,
  not_real_induced,
  certificate,
  internal_invariant,
  invalid_input,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown when an operator is singular to tolerance; carries the smallest singular value.
class NotInvertible : public Error {
 public:
  NotInvertible(double sigma_min, const std::string& what)
      : Error(ErrorKind::not_invertible, what), sigma_min_(sigma_min) {}

  double sigma_min() const noexcept { return sigma_min_; }

 private:
  double sigma_min_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::precondition: return "precondition violated";
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::not_invertible: return "not invertible";
    case ErrorKind::no_convergence: return "eigensolver did not converge";
    case ErrorKind::no_separating_contour: return "no separating contour";
    case ErrorKind::quadrature: return "quadrature did not converge";
    case ErrorKind::divergence: return "idempotent polishing diverged";
    case ErrorKind::series: return "series did not converge";
    case ErrorKind::budget: return "ideal budget exceeded";
    case ErrorKind::ambiguous_parity: return "ambiguous parity";
    case ErrorKind::not_real_induced: return "not real-induced";
    case ErrorKind::certificate: return "certificate check failed";
    case ErrorKind::internal_invariant: return "internal invariant violated";
    case ErrorKind::invalid_input: return "invalid input";
  }
  return "error";
}

}  // namespace cxs
