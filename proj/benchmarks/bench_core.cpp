#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>

#include "e2sieve/factor_table.hpp"
#include "e2sieve/gpy_sums.hpp"
#include "e2sieve/j_integrals.hpp"
#include "e2sieve/linear_forms.hpp"
#include "e2sieve/polynomial.hpp"
#include "e2sieve/tuple_parse.hpp"
#include "e2sieve/weights.hpp"
#include "e2sieve/wirsing.hpp"

namespace {

e2sieve::NormalizedTuple triple() {
    return e2sieve::normalize(e2sieve::parse_tuple("n,n+2,n+6"));
}

void BM_FactorTableBuild(benchmark::State& state) {
    const std::uint64_t span = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto table = e2sieve::build_factor_table(2, 2 + span);
        benchmark::DoNotOptimize(table.omega.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(span));
}
BENCHMARK(BM_FactorTableBuild)->Arg(100000)->Arg(1000000)->Arg(10000000);

void BM_E2GapScan(benchmark::State& state) {
    const std::uint64_t limit = static_cast<std::uint64_t>(state.range(0));
    for (auto _ : state) {
        auto stats = e2sieve::e2_gaps(limit, e2sieve::E2Options{});
        benchmark::DoNotOptimize(stats.count);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(limit));
}
BENCHMARK(BM_E2GapScan)->Arg(100000)->Arg(1000000);

void BM_LambdaTable(benchmark::State& state) {
    auto nt = triple();
    e2sieve::SieveParams params{nt, static_cast<std::uint64_t>(state.range(0)),
                                e2sieve::poly_from_csv("1,6")};
    for (auto _ : state) {
        auto table = e2sieve::lambda_table(params);
        benchmark::DoNotOptimize(table.lambda_hat.data());
    }
}
BENCHMARK(BM_LambdaTable)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_S0Exact(benchmark::State& state) {
    auto nt = triple();
    const std::uint64_t n = static_cast<std::uint64_t>(state.range(0));
    const std::uint64_t level =
        static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 0.25));
    e2sieve::SieveParams params{nt, level, e2sieve::poly_from_csv("1,6")};
    for (auto _ : state) {
        auto report = e2sieve::s0_exact(params, n);
        benchmark::DoNotOptimize(report.exact);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_S0Exact)->Arg(10000)->Arg(100000)->Arg(1000000);

void BM_SingularSeries(benchmark::State& state) {
    auto nt = triple();
    for (auto _ : state) {
        auto v = e2sieve::singular_series(nt, static_cast<std::uint64_t>(state.range(0)));
        benchmark::DoNotOptimize(v.value);
    }
}
BENCHMARK(BM_SingularSeries)->Arg(100000)->Arg(1000000);

void BM_JTotalExact(benchmark::State& state) {
    e2sieve::JInputs in;
    in.k = static_cast<int>(state.range(0));
    in.B = e2sieve::Rat(4);
    in.eta = e2sieve::make_rat(1, 144);
    in.nu = 1;
    in.P = e2sieve::poly_from_csv("1,6");
    for (auto _ : state) {
        auto j = e2sieve::j_total(in, false);
        benchmark::DoNotOptimize(j.sign());
    }
}
BENCHMARK(BM_JTotalExact)->Arg(3)->Arg(10)->Arg(25);

void BM_WirsingSum(benchmark::State& state) {
    e2sieve::GammaSpec spec{e2sieve::GammaKind::totient_like, 3, 48};
    for (auto _ : state) {
        auto rep = e2sieve::wirsing_sum(spec, static_cast<std::uint64_t>(state.range(0)));
        benchmark::DoNotOptimize(rep.lhs);
    }
}
BENCHMARK(BM_WirsingSum)->Arg(100000)->Arg(1000000);

}  // namespace

BENCHMARK_MAIN();
