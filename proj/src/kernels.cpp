#include "cxs/kernels.hpp"

#include <omp.h>

#include <vector>

namespace cxs {

int max_threads() { return omp_get_max_threads(); }

namespace kernels {

namespace {

void accumulate_chunk(const Eigen::MatrixXcd& upper_t, std::span<const Complex> nodes,
                      std::span<const Complex> weights, std::size_t begin, std::size_t end,
                      Eigen::MatrixXcd& acc, Eigen::MatrixXcd& work) {
  const Eigen::Index n = upper_t.rows();
  for (std::size_t k = begin; k < end; ++k) {
    work = -upper_t;
    work.diagonal().array() += nodes[k];
    Eigen::MatrixXcd inv = Eigen::MatrixXcd::Identity(n, n);
    work.triangularView<Eigen::Upper>().solveInPlace(inv);
    acc.noalias() += weights[k] * inv;
  }
}

std::size_t chunk_count(std::size_t nodes, std::size_t chunk) {
  return chunk == 0 ? 1 : (nodes + chunk - 1) / chunk;
}

}  // namespace

Eigen::MatrixXcd resolvent_sum_serial(const Eigen::MatrixXcd& upper_t,
                                      std::span<const Complex> nodes,
                                      std::span<const Complex> weights, std::size_t chunk) {
  const Eigen::Index n = upper_t.rows();
  const std::size_t chunks = chunk_count(nodes.size(), chunk);
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd part(n, n), work(n, n);
  for (std::size_t c = 0; c < chunks; ++c) {
    part.setZero();
    const std::size_t begin = c * chunk;
    const std::size_t end = std::min(nodes.size(), begin + chunk);
    accumulate_chunk(upper_t, nodes, weights, begin, end, part, work);
    total += part;
  }
  return total;
}

Eigen::MatrixXcd resolvent_sum_omp(const Eigen::MatrixXcd& upper_t,
                                   std::span<const Complex> nodes,
                                   std::span<const Complex> weights, std::size_t chunk) {
  const Eigen::Index n = upper_t.rows();
  const std::size_t chunks = chunk_count(nodes.size(), chunk);
  std::vector<Eigen::MatrixXcd> parts(chunks, Eigen::MatrixXcd::Zero(n, n));
  const long count = static_cast<long>(chunks);
#pragma omp parallel
  {
    Eigen::MatrixXcd work(n, n);
#pragma omp for schedule(dynamic)
    for (long c = 0; c < count; ++c) {
      const std::size_t begin = static_cast<std::size_t>(c) * chunk;
      const std::size_t end = std::min(nodes.size(), begin + chunk);
      accumulate_chunk(upper_t, nodes, weights, begin, end, parts[static_cast<std::size_t>(c)],
                       work);
    }
  }
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& p : parts) total += p;
  return total;
}

}  // namespace kernels
}  // namespace cxs
