#include <benchmark/benchmark.h>

#include "husl/decide.hpp"
#include "husl/enumerate.hpp"
#include "husl/sentence.hpp"
#include "husl/table.hpp"
#include "husl/tree.hpp"

using namespace husl;

static void BM_EnumerateUslTop(benchmark::State& state) {
  int n = (int)state.range(0);
  for (auto _ : state) {
    auto all = enumerate_usl_top(n);
    benchmark::DoNotOptimize(all);
  }
}
BENCHMARK(BM_EnumerateUslTop)->Arg(4)->Arg(5)->Arg(6);

static void BM_DecideSigma2(benchmark::State& state) {
  auto s = parse_sentence("exists x . !(x = 0) & forall y . (y <= x -> (y = 0 \\/ y = x))");
  auto p = prenex_sigma2(*s);
  for (auto _ : state) {
    auto cert = decide_sigma2(*p);
    benchmark::DoNotOptimize(cert);
  }
}
BENCHMARK(BM_DecideSigma2);

static void BM_AeeExtensions(benchmark::State& state) {
  auto d = FiniteUslTop::diamond();
  RunCaps caps;
  for (auto _ : state) {
    auto exts = enumerate_aee_extensions(d, (int)state.range(0), caps);
    benchmark::DoNotOptimize(exts);
  }
}
BENCHMARK(BM_AeeExtensions)->Arg(1)->Arg(2);

static void BM_BuildTable(benchmark::State& state) {
  auto ls = enumerate_usl_top(5);
  for (auto _ : state) {
    for (const auto& l : ls) {
      auto t = build_table(l);
      benchmark::DoNotOptimize(t);
    }
  }
}
BENCHMARK(BM_BuildTable);

static void BM_CodingRoundTrip(benchmark::State& state) {
  auto r = build_rep_prefix(FiniteUslTop::diamond(), 1, true);
  auto coatoms = r->lattice.coatoms();
  std::vector<int> bits;
  for (int i = 0; i < 32; ++i) bits.push_back(i & 1);
  auto t = identity_tree(*r, 32);
  for (auto _ : state) {
    auto sigma = encode_bits(t, coatoms[0], coatoms[1], bits);
    auto back = decode_bits(*r, *sigma, coatoms[0], coatoms[1]);
    benchmark::DoNotOptimize(back);
  }
}
BENCHMARK(BM_CodingRoundTrip);

BENCHMARK_MAIN();
