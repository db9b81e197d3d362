// Serial reference vs OpenMP kernels for the O(N^2) pair sums.
#include <benchmark/benchmark.h>

#include <vector>

#include "phs/pairwise.hpp"
#include "phs/sampling.hpp"

namespace {

struct Cloud {
  std::size_t n, d = 2;
  std::vector<double> pos, vel;
};

Cloud make_cloud(std::size_t n) {
  auto e = phs::sample_gaussian({{0.0}, {1.0}, {0.0}, {1.0}}, n, 2, 42, phs::Frame::absolute);
  return {n, 2, e.positions, e.velocities};
}

const auto kernel = phs::KernelSpec::cucker_smale(1.0, 1.0, 1.0);
const auto morse = phs::PotentialSpec::morse(2.0, 1.0, 1.0, 1.0);

template <bool Parallel>
void BM_damping_matrix(benchmark::State& st) {
  const auto c = make_cloud(static_cast<std::size_t>(st.range(0)));
  std::vector<double> out(c.n * c.n);
  for (auto _ : st) {
    if constexpr (Parallel)
      phs::pairwise::damping_matrix(c.pos, c.n, c.d, kernel, out);
    else
      phs::reference::damping_matrix(c.pos, c.n, c.d, kernel, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(c.n * c.n));
}

template <bool Parallel>
void BM_potential_force(benchmark::State& st) {
  const auto c = make_cloud(static_cast<std::size_t>(st.range(0)));
  std::vector<double> out(c.n * c.d);
  for (auto _ : st) {
    if constexpr (Parallel)
      phs::pairwise::potential_force(c.pos, c.n, c.d, morse, out);
    else
      phs::reference::potential_force(c.pos, c.n, c.d, morse, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(c.n * c.n));
}

template <bool Parallel>
void BM_alignment_force(benchmark::State& st) {
  const auto c = make_cloud(static_cast<std::size_t>(st.range(0)));
  std::vector<double> out(c.n * c.d);
  for (auto _ : st) {
    if constexpr (Parallel)
      phs::pairwise::alignment_force(c.pos, c.vel, c.n, c.d, kernel, out);
    else
      phs::reference::alignment_force(c.pos, c.vel, c.n, c.d, kernel, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.SetItemsProcessed(st.iterations() * static_cast<long>(c.n * c.n));
}

}  // namespace

BENCHMARK(BM_damping_matrix<false>)->Name("damping_matrix/reference")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_damping_matrix<true>)->Name("damping_matrix/openmp")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_potential_force<false>)->Name("potential_force/reference")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_potential_force<true>)->Name("potential_force/openmp")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_alignment_force<false>)->Name("alignment_force/reference")->Arg(64)->Arg(256)->Arg(1024);
BENCHMARK(BM_alignment_force<true>)->Name("alignment_force/openmp")->Arg(64)->Arg(256)->Arg(1024);

BENCHMARK_MAIN();
