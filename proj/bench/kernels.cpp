// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include "gspo/ci.hpp"
#include "gspo/imap.hpp"
#include "gspo/parallel.hpp"
#include "gspo/search.hpp"
#include "gspo/simulate.hpp"
#include "gspo/verify.hpp"

using namespace gspo;

namespace {

MixedGraph benchGraph(int p, int k) {
    SimulationSpec spec;
    spec.p = p;
    spec.K = k;
    spec.s = 3;
    Rng gr = makeRng(1, "graph"), wr = makeRng(1, "weights");
    const WeightedDAG w = sampleWeightedDag(spec, gr, wr);
    return latentProject(w.dag, VertexSet::range(p + k) - VertexSet::range(k));
}

void constructAGSerial(benchmark::State& state) {
    const auto o = graphOracle(benchGraph(static_cast<int>(state.range(0)), 4));
    Rng rng = makeRng(2, "poset");
    const Poset p = randomPoset(o.numVariables(), rng);
    for (auto _ : state) benchmark::DoNotOptimize(serial::constructAG(p, o));
}

void constructAGParallel(benchmark::State& state) {
    const auto o = graphOracle(benchGraph(static_cast<int>(state.range(0)), 4));
    Rng rng = makeRng(2, "poset");
    const Poset p = randomPoset(o.numVariables(), rng);
    for (auto _ : state) benchmark::DoNotOptimize(constructAG(p, o));
}

SearchConfig restartConfig() {
    SearchConfig cfg;
    cfg.restarts = 4;
    cfg.initialization = Initialization::minDegree;
    return cfg;
}

void restartsSerial(benchmark::State& state) {
    const auto o = graphOracle(benchGraph(10, 3));
    for (auto _ : state) {
        const CachedOracle cache(o);
        benchmark::DoNotOptimize(serial::runRestarts(cache, restartConfig()));
    }
}

void restartsParallel(benchmark::State& state) {
    const auto o = graphOracle(benchGraph(10, 3));
    for (auto _ : state) {
        const CachedOracle cache(o);
        benchmark::DoNotOptimize(runRestarts(cache, restartConfig()));
    }
}

void replicates(benchmark::State& state) {
    BenchmarkOptions opts;
    opts.spec.p = 8;
    opts.spec.K = 2;
    opts.search.restarts = 2;
    opts.sampleSizes = {1000};
    opts.replicates = 4;
    setWorkerThreads(static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(runBenchmark(opts));
    setWorkerThreads(0);
}

}  // namespace

BENCHMARK(constructAGSerial)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(constructAGParallel)->Arg(12)->Arg(20)->Unit(benchmark::kMillisecond);
BENCHMARK(restartsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(restartsParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(replicates)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
