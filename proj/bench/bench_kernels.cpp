// Serial reference kernels against their OpenMP versions.
//   ./krylovlab_bench --benchmark_filter=Reorth
// Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "krylovlab/kernels.hpp"
#include "krylovlab/symmetry.hpp"

using namespace krylovlab;
namespace k = krylovlab::kernels;

namespace {

MatrixXr tfim_sector(int L) {
  ModelSpec m;
  m.L = L;
  m.g = -1.05;
  m.h = 0.5;
  SectorSpec s;
  s.parity = 1;
  return project_real(build_hamiltonian(m), build_sector_basis(s, L));
}

std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (auto& x : v) x = d(gen);
  return v;
}

void BM_Liouvillian_Serial(benchmark::State& st) {
  const MatrixXr H = tfim_sector(static_cast<int>(st.range(0)));
  const k::PackedSpace sp(static_cast<std::size_t>(H.rows()));
  const auto in = random_vec(sp.size(), 1);
  std::vector<double> out(sp.size());
  for (auto _ : st) {
    k::serial::liouvillian_packed(H, sp, in, k::Parity::Symmetric, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.counters["D"] = static_cast<double>(H.rows());
}

void BM_Liouvillian_Parallel(benchmark::State& st) {
  const MatrixXr H = tfim_sector(static_cast<int>(st.range(0)));
  k::parallel::PackedLiouvillian L(H);
  const auto in = random_vec(L.space().size(), 1);
  std::vector<double> out(L.space().size());
  for (auto _ : st) {
    L.apply(in, k::Parity::Symmetric, out);
    benchmark::DoNotOptimize(out.data());
  }
  st.counters["D"] = static_cast<double>(H.rows());
}

template <bool Parallel>
void BM_Reorth(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(0));
  const auto m = static_cast<std::size_t>(st.range(1));
  const auto Q = random_vec(n * m, 2);
  const auto v0 = random_vec(n, 3);
  std::vector<double> v;
  for (auto _ : st) {
    v = v0;
    if constexpr (Parallel)
      k::parallel::reorthogonalize(Q, m, v);
    else
      k::serial::reorthogonalize(Q, m, v);
    benchmark::DoNotOptimize(v.data());
  }
  st.SetBytesProcessed(static_cast<std::int64_t>(st.iterations() * 4 * n * m * sizeof(double)));
}

template <bool Parallel>
void BM_Propagate(benchmark::State& st) {
  const auto K = static_cast<Eigen::Index>(st.range(0));
  MatrixXr T = MatrixXr::Zero(K, K);
  for (Eigen::Index i = 0; i + 1 < K; ++i) T(i, i + 1) = T(i + 1, i) = 1.0 + 0.01 * static_cast<double>(i % 7);
  Eigen::SelfAdjointEigenSolver<MatrixXr> es(T);
  std::vector<double> times(200);
  for (std::size_t j = 0; j < times.size(); ++j) times[j] = 0.1 * static_cast<double>(j);
  for (auto _ : st) {
    MatrixXc Z = Parallel ? k::parallel::spectral_propagate(es.eigenvectors(), es.eigenvalues(), times)
                          : k::serial::spectral_propagate(es.eigenvectors(), es.eigenvalues(), times);
    benchmark::DoNotOptimize(Z.data());
  }
}

template <bool Parallel>
void BM_SffNumerator(benchmark::State& st) {
  const auto levels = static_cast<std::size_t>(st.range(0));
  const std::size_t samples = 64;
  const auto E = random_vec(levels * samples, 4);
  const std::vector<double> w(levels * samples, 1.0);
  std::vector<double> times(400);
  for (std::size_t j = 0; j < times.size(); ++j) times[j] = 0.05 * static_cast<double>(j);
  for (auto _ : st) {
    auto out = Parallel ? k::parallel::sff_numerator(E, w, levels, times)
                        : k::serial::sff_numerator(E, w, levels, times);
    benchmark::DoNotOptimize(out.data());
  }
}

}  // namespace

BENCHMARK(BM_Liouvillian_Serial)->Arg(7)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Liouvillian_Parallel)->Arg(7)->Arg(9)->Arg(11)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reorth<false>)->Name("BM_Reorth_Serial")->Args({1 << 14, 64})->Args({1 << 16, 256})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Reorth<true>)->Name("BM_Reorth_Parallel")->Args({1 << 14, 64})->Args({1 << 16, 256})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Propagate<false>)->Name("BM_Propagate_Serial")->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Propagate<true>)->Name("BM_Propagate_Parallel")->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SffNumerator<false>)->Name("BM_SffNumerator_Serial")->Arg(528)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SffNumerator<true>)->Name("BM_SffNumerator_Parallel")->Arg(528)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
