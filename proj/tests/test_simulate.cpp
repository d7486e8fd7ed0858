#include <doctest.h>

#include <cmath>
#include <sstream>

#include "gspo/ci.hpp"
#include "gspo/equivalence.hpp"
#include "gspo/parallel.hpp"
#include "gspo/separation.hpp"
#include "gspo/simulate.hpp"
#include "helpers.hpp"

using namespace gspo;
using fixture::graph;
using fixture::set;

namespace {

SimulationSpec smallSpec(double s = 3.0) {
    SimulationSpec spec;
    spec.p = 10;
    spec.K = 3;
    spec.s = s;
    return spec;
}

}  // namespace

TEST_CASE("spec validation") {
    SimulationSpec spec;
    CHECK_NOTHROW(spec.validate());
    spec.p = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = {};
    spec.K = -1;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = {};
    spec.s = -0.5;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
    spec = {};
    spec.weightLo = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("sampleWeightedDag") {
    Rng rng = makeRng(61, "sim-test");
    const auto empty = sampleWeightedDag(smallSpec(0.0), rng);
    CHECK(empty.dag.edgeCount() == 0);
    CHECK(empty.weights.isZero());

    double total = 0;
    for (int t = 0; t < 100; ++t) {
        const auto w = sampleWeightedDag(smallSpec(), rng);
        total += w.dag.edgeCount();
        CHECK(isAncestral(w.dag));
        CHECK(w.dag.bidirectedEdges().empty());
        for (Vertex i = 0; i < 13; ++i)
            for (Vertex j = 0; j < 13; ++j) {
                const double x = w.weights(i, j);
                if (w.dag.hasDirected(i, j)) {
                    CHECK(std::abs(x) >= 0.25);
                    CHECK(std::abs(x) <= 1.0);
                } else {
                    CHECK(x == 0.0);
                }
            }
    }
    CHECK(std::abs(total / 100 - 19.5) <= 3.0);

    Rng a = makeRng(7, "graph"), b = makeRng(7, "graph");
    const auto wa = sampleWeightedDag(smallSpec(), a);
    const auto wb = sampleWeightedDag(smallSpec(), b);
    CHECK(wa.dag == wb.dag);
    CHECK(wa.weights == wb.weights);
}

TEST_CASE("sampleData moments") {
    Rng rng = makeRng(62, "sim-test");
    const long n = 100000;
    WeightedDAG zero{MixedGraph(3), Eigen::MatrixXd::Zero(3, 3)};
    const Eigen::MatrixXd z = sampleData(zero, n, rng);
    const Eigen::MatrixXd cz = sampleCovariance(z);
    for (int v = 0; v < 3; ++v) CHECK(std::abs(cz(v, v) - 1.0) <= 0.05);

    WeightedDAG chain{graph(2, {{1, 2}}), Eigen::MatrixXd::Zero(2, 2)};
    chain.weights(0, 1) = 1.0;
    const Eigen::MatrixXd c = sampleCovariance(sampleData(chain, n, rng));
    CHECK(std::abs(c(1, 1) - 2.0) <= 0.1);

    SimulationSpec spec;
    spec.p = 5;
    spec.K = 0;
    spec.s = 2;
    const auto w = sampleWeightedDag(spec, rng);
    const Eigen::MatrixXd pop = populationCovariance(w);
    const Eigen::MatrixXd emp = sampleCovariance(sampleData(w, n, rng));
    const double tol = 3.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double scale = std::sqrt(pop(i, i) * pop(j, j));
            CHECK(std::abs(emp(i, j) - pop(i, j)) <= tol * std::max(1.0, scale));
        }

    const Eigen::MatrixXd full = sampleData(w, 10, rng);
    CHECK(observedColumns(full, 2).cols() == 3);
    CHECK(observedColumns(full, 2).col(0) == full.col(2));
}

TEST_CASE("latentProject examples") {
    // DAG itself when nothing is latent
    const auto dag = graph(4, {{1, 2}, {2, 3}, {4, 3}});
    CHECK(latentProject(dag, VertexSet::range(4)) == dag);
    // L -> 1, L -> 2  with L first
    CHECK(latentProject(graph(3, {{1, 2}, {1, 3}}), set({2, 3})) == graph(2, {}, {{1, 2}}));
    // 1 -> L -> 2
    CHECK(latentProject(graph(3, {{2, 1}, {1, 3}}), set({2, 3})) == graph(2, {{1, 2}}));
    CHECK_THROWS_AS(latentProject(graph(2, {}, {{1, 2}}), set({1, 2})), std::invalid_argument);
    CHECK_THROWS_AS(latentProject(graph(3, {{1, 2}, {2, 3}, {3, 1}}), set({1, 2})),
                    std::invalid_argument);
}

TEST_CASE("latentProject matches the exhaustive version and preserves the observable model") {
    Rng rng = makeRng(63, "sim-test");
    for (int t = 0; t < 200; ++t) {
        SimulationSpec spec;
        spec.p = 3 + t % 3;
        spec.K = 1 + t % 3;
        spec.s = 1.0 + (t % 4) * 0.8;
        const auto w = sampleWeightedDag(spec, rng);
        const VertexSet obs = VertexSet::range(spec.totalNodes()) - VertexSet::range(spec.K);
        const MixedGraph g = latentProject(w.dag, obs);
        REQUIRE(g == latentProjectExhaustive(w.dag, obs));
        CHECK(isMaximalAncestral(g));
        const auto o = graphOracle(g);
        const int p = spec.p;
        for (Vertex i = 0; i < p; ++i)
            for (Vertex j = i + 1; j < p; ++j)
                for (std::uint64_t bits = 0; bits < (1ULL << p); ++bits) {
                    const VertexSet s = VertexSet(bits) - VertexSet{i, j};
                    if (s.bits() != bits) continue;
                    VertexSet full;
                    for (Vertex v : s) full.insert(v + spec.K);
                    CHECK(o.independent(i, j, s) ==
                          mSeparated(w.dag, {i + spec.K, j + spec.K, full}));
                }
    }
}

TEST_CASE("skeleton metrics") {
    const auto m = skeletonMetrics(fixture::fig2a(), fixture::fig2a());
    CHECK(m.shd == 0);
    CHECK(m.tpr == 1.0);
    CHECK(m.fpr == 0.0);
    CHECK(skeletonMetrics(fixture::fig2a(), fixture::fig2b()).shd == 0);

    const auto e = skeletonMetrics(fixture::fig2a(), MixedGraph(4));
    CHECK(e.shd == 4);
    CHECK(e.tpr == 0.0);
    CHECK(e.fpr == 0.0);
    CHECK(e.precision == 1.0);
    CHECK(e.recall == 0.0);

    const auto x = skeletonMetrics(fixture::fig2a(), graph(4, {{1, 4}, {1, 2}}));
    CHECK(x.tp == 1);
    CHECK(x.fp == 1);
    CHECK(x.fn == 3);
    CHECK(x.tn == 1);
    CHECK(x.shd == x.fp + x.fn);
    CHECK(x.tpr + static_cast<double>(x.fn) / (x.tp + x.fn) == doctest::Approx(1.0));
    CHECK(x.precision == doctest::Approx(0.5));
    CHECK(x.fpr == doctest::Approx(0.5));
    CHECK_THROWS_AS(skeletonMetrics(MixedGraph(3), MixedGraph(4)), std::invalid_argument);
}

TEST_CASE("graph stats") {
    const auto st = graphStats(fixture::fig2b());
    CHECK(st.meanNeighbors == doctest::Approx(2.0));
    CHECK(st.bidirectedFraction == doctest::Approx(0.75));
    CHECK(graphStats(MixedGraph(3)).bidirectedFraction == 0.0);
}

TEST_CASE("alpha grid") {
    const auto a = logSpacedAlphas();
    REQUIRE(a.size() == 8);
    CHECK(a.front() == doctest::Approx(1e-10));
    CHECK(a.back() == doctest::Approx(0.7));
    for (std::size_t k = 1; k < a.size(); ++k) CHECK(a[k] > a[k - 1]);
}

TEST_CASE("benchmark rows, error rows and determinism") {
    BenchmarkOptions opts;
    opts.spec.p = 6;
    opts.spec.K = 2;
    opts.spec.s = 2;
    opts.spec.seed = 3;
    opts.search.restarts = 2;
    opts.alphas = {0.01, 0.1};
    opts.sampleSizes = {0, 500};
    opts.replicates = 3;
    const auto r = runBenchmark(opts);
    CHECK(r.rows.size() == 12);
    CHECK(r.cells.size() == 4);
    for (const auto& row : r.rows) CHECK(row.error.empty() == (row.n > 0));
    CHECK(r.cells[0].errors == 3);
    CHECK(r.cells[0].runs == 0);
    CHECK(r.cells[2].runs == 3);

    setWorkerThreads(3);
    const auto again = runBenchmark(opts);
    setWorkerThreads(0);
    for (std::size_t k = 0; k < r.rows.size(); ++k) {
        CHECK(r.rows[k].metrics.shd == again.rows[k].metrics.shd);
        CHECK(r.rows[k].estimatedEdges == again.rows[k].estimatedEdges);
        CHECK(r.rows[k].queries == again.rows[k].queries);
    }

    std::stringstream csv;
    writeResultsCsv(csv, r.rows);
    std::string header;
    std::getline(csv, header);
    CHECK(header ==
          "replicate,p,K,s,n,alpha,shd,tpr,fpr,precision,recall,runtime_ms,queries,error");
    int lines = 0;
    for (std::string l; std::getline(csv, l);) ++lines;
    CHECK(lines == 12);
    const auto agg = aggregatesToJson(r);
    CHECK(agg["cells"].size() == 4);
    CHECK(agg.contains("truth"));
}

TEST_CASE("data CSV round trip") {
    Eigen::MatrixXd d(3, 2);
    d << 1.5, -2, 0.125, 3, 1e-7, 4;
    std::stringstream ss;
    writeDataCsv(ss, d, {"x", "y"});
    const auto [labels, back] = readDataCsv(ss);
    CHECK(labels == std::vector<std::string>{"x", "y"});
    CHECK(back == d);
    std::stringstream bad("a,b\n1,2\n3\n");
    CHECK_THROWS_AS(readDataCsv(bad), std::invalid_argument);
    std::stringstream text("a,b\n1,x\n");
    CHECK_THROWS_AS(readDataCsv(text), std::invalid_argument);
}
