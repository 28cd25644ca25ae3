#include "ilcad/bundle.hpp"
#include "ilcad/corpus.hpp"
#include "ilcad/harness.hpp"
#include "ilcad/power_series.hpp"
#include "ilcad/syntax.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ilcad;

const Term& sample() {
    static const Term f = parse("fn x . exp (sin x) / (2 + cos (x * x))");
    return f;
}

void BM_diff_series(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(diff(sample(), lit(0.7)));
}
BENCHMARK(BM_diff_series);

void BM_diff_bundled_dual(benchmark::State& state) {
    for (auto _ : state) benchmark::DoNotOptimize(diff_bundled(sample(), 0.7, Representation::dual));
}
BENCHMARK(BM_diff_bundled_dual);

void BM_lifted(benchmark::State& state) {
    Bundle f = evaluate_lifted(sample());
    for (auto _ : state) benchmark::DoNotOptimize(f(Bundle(NumBundle{0.7, 1.0})));
}
BENCHMARK(BM_lifted);

void BM_taylor_exp(benchmark::State& state) {
    Term f = parse("exp");
    auto order = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(taylor_coefficient(f, lit(0), order));
}
BENCHMARK(BM_taylor_exp)->DenseRange(1, 9, 2);

void BM_check_diagram(benchmark::State& state) {
    auto corpus = default_corpus();
    DiagramOptions options;
    options.parallel = state.range(0) != 0;
    for (auto _ : state) benchmark::DoNotOptimize(check_diagram(corpus, options));
}
BENCHMARK(BM_check_diagram)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
