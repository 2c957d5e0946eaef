// Micro benchmarks: assembly, the local coderivative against a global factorization,
// and the two solve variants on a k = n problem.

#include <lochodge/hodge_solver.hpp>
#include <lochodge/manufactured.hpp>

#include <benchmark/benchmark.h>

#include <random>

using namespace lochodge;

namespace {

Domain domain_of(int n) { return n == 2 ? Domain::unit_square : Domain::unit_cube; }
MeshKind kind_of(int kind) { return kind == 0 ? MeshKind::simplicial : MeshKind::cubical; }

Vector random_vector(std::size_t size, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector v(static_cast<Eigen::Index>(size));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = unif(rng);
  return v;
}

// Args: dimension, kind (0 simplicial, 1 cubical), level.
void BM_AssembleHodge(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto mesh = build_grid(domain_of(n), kind_of(static_cast<int>(state.range(1))), static_cast<int>(state.range(2)));
  const HodgePair pair(mesh, n);
  for (auto _ : state) {
    auto m = assemble_hodge(pair);
    benchmark::DoNotOptimize(m.B.nonZeros());
  }
  state.counters["dofs"] = static_cast<double>(pair.vkm1().size() + pair.vk().size());
}
BENCHMARK(BM_AssembleHodge)->Args({2, 0, 5})->Args({2, 1, 5})->Args({3, 0, 2})->Args({3, 1, 2})->Unit(benchmark::kMillisecond);

// Args: dimension, kind, level, global (0 per-vertex blocks, 1 sparse factorization of M_h).
void BM_Coderivative(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto mesh = build_grid(domain_of(n), kind_of(static_cast<int>(state.range(1))), static_cast<int>(state.range(2)));
  const HodgePair pair(mesh, n);
  const auto m = assemble_hodge(pair);
  const Vector u = random_vector(pair.vk().size(), 3);
  const bool global = state.range(3) != 0;
  for (auto _ : state) {
    Vector s = global ? coderivative_global(m, u, Variant::lumped) : coderivative_local(m, pair.vkm1(), u);
    benchmark::DoNotOptimize(s.data());
  }
}
BENCHMARK(BM_Coderivative)
    ->Args({2, 0, 6, 0})
    ->Args({2, 0, 6, 1})
    ->Args({2, 1, 6, 0})
    ->Args({2, 1, 6, 1})
    ->Unit(benchmark::kMillisecond);

// Args: dimension, kind, level, variant (0 lumped, 1 exact).
void BM_SolveTop(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto mesh = build_grid(domain_of(n), kind_of(static_cast<int>(state.range(1))), static_cast<int>(state.range(2)));
  const HodgePair pair(mesh, n);
  const auto m = assemble_hodge(pair);
  const auto H = harmonic_basis(pair);
  const Vector F = load_vector(pair.vk(), top_degree_solution(n).f);
  SolveOptions opts;
  opts.variant = state.range(3) == 0 ? Variant::lumped : Variant::exact;
  for (auto _ : state) {
    auto sol = solve_hodge(pair, m, H, F, opts);
    benchmark::DoNotOptimize(sol.u.data());
  }
}
BENCHMARK(BM_SolveTop)
    ->Args({2, 0, 5, 0})
    ->Args({2, 0, 5, 1})
    ->Args({2, 1, 5, 0})
    ->Args({2, 1, 5, 1})
    ->Args({3, 1, 2, 0})
    ->Args({3, 1, 2, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
