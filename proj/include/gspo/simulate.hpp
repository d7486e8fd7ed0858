#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "gspo/graph.hpp"
#include "gspo/rng.hpp"
#include "gspo/search.hpp"

namespace gspo {

struct SimulationSpec {
    int p = 10;           // observed
    int K = 3;            // latent, occupying indices 0..K-1
    double s = 3.0;       // expected neighbors per node
    long n = 10000;       // samples
    double weightLo = 0.25;
    double weightHi = 1.0;
    std::uint64_t seed = 0;

    int totalNodes() const { return p + K; }
    void validate() const;
};

struct WeightedDAG {
    MixedGraph dag;            // directed edges only
    Eigen::MatrixXd weights;   // weights(i, j) != 0 iff i -> j
};

/// Erdos-Renyi DAG over a uniformly random topological order with edge
/// probability s / (p + K - 1); weights uniform on [-hi,-lo] u [lo,hi].
WeightedDAG sampleWeightedDag(const SimulationSpec& spec, Rng& graphRng, Rng& weightRng);
inline WeightedDAG sampleWeightedDag(const SimulationSpec& spec, Rng& rng) {
    return sampleWeightedDag(spec, rng, rng);
}

std::vector<Vertex> topologicalOrder(const MixedGraph& dag);

/// n rows of X = W^T X + eps, eps ~ N(0, I), over all p + K columns.
Eigen::MatrixXd sampleData(const WeightedDAG& w, long n, Rng& rng);
/// Drops the first K (latent) columns.
Eigen::MatrixXd observedColumns(const Eigen::MatrixXd& data, int K);

/// (I - W)^{-T} (I - W)^{-1}
Eigen::MatrixXd populationCovariance(const WeightedDAG& w);

/// Canonical DMAG over `observed` (re-indexed in ascending order): adjacency
/// by d-connection given the observed ancestors of the pair, marks by ancestry.
MixedGraph latentProject(const MixedGraph& dag, VertexSet observed);
/// Reference version: adjacency by exhaustive search over observed separators.
MixedGraph latentProjectExhaustive(const MixedGraph& dag, VertexSet observed);

/// Random DMAG on p vertices: project a random DAG on p + K nodes.
MixedGraph randomDmag(int p, int K, double s, Rng& rng);

struct GraphStats {
    double meanNeighbors = 0;      // 2|E| / p
    double bidirectedFraction = 0; // |B| / |E|, 0 for edgeless graphs
};
GraphStats graphStats(const MixedGraph& g);

struct SkeletonMetrics {
    int shd = 0;
    int tp = 0, fp = 0, fn = 0, tn = 0;
    double tpr = 0, fpr = 0, precision = 1, recall = 0;
};
SkeletonMetrics skeletonMetrics(const MixedGraph& truth, const MixedGraph& estimate);

struct BenchmarkOptions {
    SimulationSpec spec;
    SearchConfig search;
    std::vector<double> alphas{0.1};
    std::vector<long> sampleSizes{10000};
    int replicates = 100;
};

struct BenchmarkRow {
    int replicate = 0;
    int p = 0, K = 0;
    double s = 0;
    long n = 0;
    double alpha = 0;
    SkeletonMetrics metrics;
    int trueEdges = 0;
    int estimatedEdges = 0;
    double runtimeMs = 0;
    std::size_t queries = 0;
    std::string error;  // empty on success
};

struct BenchmarkCell {
    long n = 0;
    double alpha = 0;
    int runs = 0;
    int errors = 0;
    double meanShd = 0, meanTpr = 0, meanFpr = 0, meanPrecision = 0, meanRecall = 0;
    double medianRuntimeMs = 0, meanRuntimeMs = 0;
};

struct BenchmarkResult {
    std::vector<BenchmarkRow> rows;   // replicate-major, then n, then alpha
    std::vector<BenchmarkCell> cells; // n-major, then alpha
    std::vector<GraphStats> truthStats;  // one per replicate
};

/// Log-spaced grid of `count` alphas over [lo, hi].
std::vector<double> logSpacedAlphas(double lo = 1e-10, double hi = 0.7, int count = 8);

BenchmarkResult runBenchmark(const BenchmarkOptions& opts);

void writeResultsCsv(std::ostream& out, const std::vector<BenchmarkRow>& rows);
nlohmann::json aggregatesToJson(const BenchmarkResult& result);

void writeDataCsv(std::ostream& out, const Eigen::MatrixXd& data,
                  const std::vector<std::string>& labels);
/// Returns the header labels and the numeric matrix.
std::pair<std::vector<std::string>, Eigen::MatrixXd> readDataCsv(std::istream& in);

}  // namespace gspo
