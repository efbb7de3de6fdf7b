// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "relcalc/freecons.hpp"
#include "relcalc/homsearch.hpp"
#include "relcalc/identlang.hpp"

using namespace relcalc;

namespace {

FiniteAlgebra majority_algebra() {
  return two_element_algebra({{"t", OperationTable::from_function(3, 2, [](auto a) {
                                 return a[0] + a[1] + a[2] >= 2 ? 1u : 0u;
                               })}});
}

FiniteAlgebra lattice() {
  return two_element_algebra({{"join", OperationTable(2, 2, {0, 1, 1, 1})}, {"meet", OperationTable(2, 2, {0, 0, 0, 1})}});
}

void BM_FindHomsSerial(benchmark::State& state) {
  const auto s = semilattice_structure();
  const auto g = power(s, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_homs_serial(g, s));
}

void BM_FindHomsParallel(benchmark::State& state) {
  const auto s = semilattice_structure();
  const auto g = power(s, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(find_homs(g, s));
}

const ident::TermSystem& wide_system() {
  // Four ternary symbols with no survivor: 7^4 labelings, all refuted.
  static const auto sys = ident::parse(
      "ops: a/3, b/3, c/3, d/3\n"
      "a(x,y,y) = b(x,x,y)\n"
      "b(x,y,y) = c(y,x,x)\n"
      "c(x,x,y) = d(x,y,x)\n"
      "d(y,x,x) = x\n"
      "d(x,y,x) = x\n"
      "d(x,x,y) = x\n");
  return sys;
}

void BM_SlInterpSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ident::sl_interp_search(wide_system(), false));
}

void BM_SlInterpParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(ident::sl_interp_search(wide_system(), true));
}

void BM_HmEvidenceSerial(benchmark::State& state) {
  const auto a = lattice();
  for (auto _ : state) benchmark::DoNotOptimize(hm_evidence(a, 3, false));
}

void BM_HmEvidenceParallel(benchmark::State& state) {
  const auto a = lattice();
  for (auto _ : state) benchmark::DoNotOptimize(hm_evidence(a, 3, true));
}

void BM_FreeBundleMajority(benchmark::State& state) {
  const auto a = majority_algebra();
  for (auto _ : state) benchmark::DoNotOptimize(build_free_bundle(a));
}

}  // namespace

BENCHMARK(BM_FindHomsSerial)->DenseRange(3, 6);
BENCHMARK(BM_FindHomsParallel)->DenseRange(3, 6);
BENCHMARK(BM_SlInterpSerial);
BENCHMARK(BM_SlInterpParallel);
BENCHMARK(BM_HmEvidenceSerial);
BENCHMARK(BM_HmEvidenceParallel);
BENCHMARK(BM_FreeBundleMajority);

BENCHMARK_MAIN();
