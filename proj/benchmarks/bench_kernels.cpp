// Microbenchmarks for the kernels the surveys spend their time in: polynomial
// products, character sums, Gauss sums, Fourier transforms, point-count
// traces, and the per-curve L pipeline. Field and prime tables are process
// cached, so these measure steady state, not first-touch table builds.

#include <benchmark/benchmark.h>

#include "ffrank/characters.hpp"
#include "ffrank/dirichlet_l.hpp"
#include "ffrank/elliptic.hpp"
#include "ffrank/fourier.hpp"
#include "ffrank/fq_poly.hpp"
#include "ffrank/gf_table.hpp"
#include "ffrank/survey.hpp"

using namespace ffrank;

static void BM_poly_mul(benchmark::State& state) {
  PolyFq a = monic_by_index(5, 6, 11111), b = monic_by_index(5, 6, 7777);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_poly_mul);

static void BM_poly_mod(benchmark::State& state) {
  PolyFq a = monic_by_index(5, 9, 123456), h = monic_by_index(5, 4, 321);
  for (auto _ : state) benchmark::DoNotOptimize(a % h);
}
BENCHMARK(BM_poly_mod);

// the Dirichlet L coefficient kernel: one monic character sum of degree k
static void BM_char_sum(benchmark::State& state) {
  uint32_t q = 5;
  DirichletGroup G(q, monic_by_index(q, 3, 57));
  DirichletChar chi = G.characters()[1];
  int k = int(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(char_sum_range(G, chi, k, SumDomain::monic));
}
BENCHMARK(BM_char_sum)->Arg(2)->Arg(3);

static void BM_gauss_sum(benchmark::State& state) {
  uint32_t q = 13;
  PolyFq P = primes_of_degree(q, 2)[0];
  DirichletGroup G(q, P);
  DirichletChar quad = G.quadratic_character();
  PolyFq V = poly_below_deg(q, 2, 7);
  for (auto _ : state) benchmark::DoNotOptimize(gauss_sum(G, quad, V));
}
BENCHMARK(BM_gauss_sum);

static void BM_fourier_transform(benchmark::State& state) {
  uint32_t q = 7;
  PeriodicFn F = PeriodicFn::random(q, monic_by_index(q, 3, 11), 99);
  PolyFq u = poly_below_deg(q, 3, 25);
  for (auto _ : state) benchmark::DoNotOptimize(fourier_transform(F, u));
}
BENCHMARK(BM_fourier_transform);

// trace vector over all primes of degree d for one curve, cold cache each time
static void BM_good_traces(benchmark::State& state) {
  uint32_t q = 5;
  PolyFq A = PolyFq::parse(q, "1,1"), B = PolyFq::parse(q, "2,0,3");
  int d = int(state.range(0));
  for (auto _ : state) {
    EllipticSurface E(q, A, B);
    benchmark::DoNotOptimize(E.good_traces(d).size());
  }
}
BENCHMARK(BM_good_traces)->Arg(3)->Arg(4)->Arg(5);

// per-curve survey cost: reduction data plus the functional-equation L route
static void BM_l_polynomial_fast(benchmark::State& state) {
  uint32_t q = 5;
  PolyFq A = PolyFq::parse(q, "1,1"), B = PolyFq::parse(q, "2,0,3");
  for (auto _ : state) {
    EllipticSurface E(q, A, B);
    benchmark::DoNotOptimize(l_polynomial_ec_fast(E).N);
  }
}
BENCHMARK(BM_l_polynomial_fast);

static void BM_survey_d2(benchmark::State& state) {
  FamilySpec s;
  s.q = 5;
  s.d = 2;
  for (auto _ : state) benchmark::DoNotOptimize(rank_bound_survey(s).n_curves);
}
BENCHMARK(BM_survey_d2);

BENCHMARK_MAIN();
