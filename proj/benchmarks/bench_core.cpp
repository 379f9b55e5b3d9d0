#include <benchmark/benchmark.h>

#include <vector>

#include "ringline/grassmann.hpp"
#include "ringline/morphisms.hpp"
#include "ringline/projline.hpp"
#include "ringline/ring.hpp"
#include "ringline/ringspec.hpp"
#include "ringline/serialize.hpp"
#include "ringline/verify.hpp"

namespace {

using namespace ringline;

void BM_RingMul(benchmark::State& state) {
  FiniteRing M = make_matrix_ring(2, make_gf(2, 1));
  Elem a = 0;
  for (auto _ : state) {
    for (Elem x = 0; x < M.order(); ++x)
      for (Elem y = 0; y < M.order(); ++y)
        benchmark::DoNotOptimize(a = M.mul(x, y));
  }
}
BENCHMARK(BM_RingMul);

void BM_ParseSpec(benchmark::State& state) {
  for (auto _ : state) {
    RingSpec s = parse_ring_spec("M(2,GF(2)) x dual(GF(3)) x Z4");
    benchmark::DoNotOptimize(s);
  }
}
BENCHMARK(BM_ParseSpec);

void BM_EnumerateLine(benchmark::State& state) {
  FiniteRing R = ring_from_spec(state.range(0) == 0 ? "Z4" : "M(2,GF(2))");
  for (auto _ : state) {
    LinePtr L = ProjectiveLine::enumerate_points(R);
    benchmark::DoNotOptimize(L->size());
  }
}
BENCHMARK(BM_EnumerateLine)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_DistantMatrix(benchmark::State& state) {
  FiniteRing R = ring_from_spec("M(2,GF(2))");
  for (auto _ : state) {
    LinePtr L = ProjectiveLine::enumerate_points(R);
    benchmark::DoNotOptimize(L->distant_matrix().size());
  }
}
BENCHMARK(BM_DistantMatrix)->Unit(benchmark::kMicrosecond);

void BM_CountAutomorphisms(benchmark::State& state) {
  LinePtr L = ProjectiveLine::enumerate_points(
      ring_from_spec(state.range(0) == 0 ? "Z4" : "M(2,GF(2))"));
  for (auto _ : state) {
    std::uint64_t n = count_dis_automorphisms(L);
    benchmark::DoNotOptimize(n);
  }
}
BENCHMARK(BM_CountAutomorphisms)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_FactorizeTranspose(benchmark::State& state) {
  LinePtr L = ProjectiveLine::enumerate_points(ring_from_spec("M(2,GF(2))"));
  const FiniteRing& R = L->ring();
  std::vector<Elem> table(R.order());
  for (Elem a = 0; a < R.order(); ++a) {
    std::vector<Elem> entries(4);
    for (unsigned r = 0; r < 2; ++r)
      for (unsigned c = 0; c < 2; ++c) entries[c * 2 + r] = R.matrix_entry(a, r, c);
    table[a] = R.matrix_encode(entries);
  }
  PointMap f = induced_by_antihom(classify_map(R, R, table), L, L);
  for (auto _ : state) {
    DecompositionCertificate cert = factorize_dis_automorphism(f);
    benchmark::DoNotOptimize(cert.kind);
  }
}
BENCHMARK(BM_FactorizeTranspose)->Unit(benchmark::kMicrosecond);

void BM_GrassmannSpace(benchmark::State& state) {
  FieldPtr F = FieldTable::get(ring_from_spec("GF(2)"));
  for (auto _ : state) {
    GrassmannSpace gs(F, 2);
    benchmark::DoNotOptimize(gs.size());
  }
}
BENCHMARK(BM_GrassmannSpace)->Unit(benchmark::kMicrosecond);

void BM_LineToJson(benchmark::State& state) {
  LinePtr L = ProjectiveLine::enumerate_points(ring_from_spec("M(2,GF(2))"));
  for (auto _ : state) {
    std::string doc = line_to_json(*L);
    benchmark::DoNotOptimize(doc.size());
  }
}
BENCHMARK(BM_LineToJson)->Unit(benchmark::kMicrosecond);

void BM_VerifyCardinalities(benchmark::State& state) {
  for (auto _ : state) {
    Report rep = run_verify_suite("cardinalities", {});
    benchmark::DoNotOptimize(rep.pass());
  }
}
BENCHMARK(BM_VerifyCardinalities)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
