#pragma once

// Data-parallel kernels. Each kernel has a serial reference implementation
// and an OpenMP implementation; both use the same chunking and the same
// index-ordered reduction, so their results are bit-identical.

#include <cstddef>
#include <exception>
#include <mutex>
#include <span>

#include "cxs/linalg.hpp"

namespace cxs {

enum class Exec { serial, parallel };

/// Number of OpenMP threads available (1 when built without OpenMP).
int max_threads();

namespace kernels {

/// Sum over nodes k of w_k * (z_k I - T)^{-1} for an upper-triangular T.
/// Nodes are summed sequentially within chunks of `chunk` nodes; chunk
/// partial sums are then added in chunk order.
Eigen::MatrixXcd resolvent_sum_serial(const Eigen::MatrixXcd& upper_t,
                                      std::span<const Complex> nodes,
                                      std::span<const Complex> weights, std::size_t chunk);
Eigen::MatrixXcd resolvent_sum_omp(const Eigen::MatrixXcd& upper_t,
                                   std::span<const Complex> nodes,
                                   std::span<const Complex> weights, std::size_t chunk);

inline Eigen::MatrixXcd resolvent_sum(const Eigen::MatrixXcd& upper_t,
                                      std::span<const Complex> nodes,
                                      std::span<const Complex> weights, std::size_t chunk,
                                      Exec exec) {
  return exec == Exec::parallel ? resolvent_sum_omp(upper_t, nodes, weights, chunk)
                                : resolvent_sum_serial(upper_t, nodes, weights, chunk);
}

/// Sampled values f(i) for i in [0, n), written to out[i]. The parallel
/// variant forwards the first exception thrown by any f(i).
template <typename F, typename T>
void map_indexed(std::size_t n, Exec exec, F&& f, std::span<T> out) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex guard;
  const long count = static_cast<long>(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(guard);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace kernels
}  // namespace cxs
