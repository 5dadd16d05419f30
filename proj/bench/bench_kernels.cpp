#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "cxs/kernels.hpp"
#include "cxs/lifting.hpp"
#include "cxs/structures.hpp"

using namespace cxs;

namespace {

Eigen::MatrixXcd upper_triangular(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r <= c; ++r) t(r, c) = Complex(g(rng), g(rng)) / std::sqrt(double(n));
  return t;
}

void resolvent(benchmark::State& state, Exec exec) {
  const Eigen::Index n = state.range(0);
  const Eigen::MatrixXcd t = upper_triangular(n, 7);
  std::vector<Complex> z, w;
  for (int k = 0; k < 256; ++k) {
    z.push_back(std::polar(4.0, 2.0 * std::numbers::pi * k / 256));
    w.push_back(z.back() / 256.0);
  }
  for (auto _ : state) benchmark::DoNotOptimize(kernels::resolvent_sum(t, z, w, 16, exec));
}

void norm(benchmark::State& state, Exec exec) {
  const Eigen::Index n = state.range(0);
  const ComplexStructure j = canonical_structure(n);
  const RealVector x = RealVector::LinSpaced(n, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(equivalent_norm(j, x, BaseNorm::l1, exec));
}

void track(benchmark::State& state, Exec exec) {
  const Eigen::Index n = state.range(0);
  RealOperator a = hyperplane_embed(canonical_structure(n - 1));
  const RealOperator s = 0.01 * RealOperator::Ones(n, n);
  for (auto _ : state) benchmark::DoNotOptimize(homotopy_parity_track(a, s, 101, 1e-8, exec));
}

}  // namespace

BENCHMARK_CAPTURE(resolvent, serial, Exec::serial)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(resolvent, omp, Exec::parallel)->Arg(16)->Arg(64)->Arg(128);
BENCHMARK_CAPTURE(norm, serial, Exec::serial)->Arg(8)->Arg(64);
BENCHMARK_CAPTURE(norm, omp, Exec::parallel)->Arg(8)->Arg(64);
BENCHMARK_CAPTURE(track, serial, Exec::serial)->Arg(9)->Arg(33);
BENCHMARK_CAPTURE(track, omp, Exec::parallel)->Arg(9)->Arg(33);

BENCHMARK_MAIN();
