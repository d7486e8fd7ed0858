#include "gspo/simulate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gspo/ci.hpp"
#include "gspo/equivalence.hpp"
#include "gspo/errors.hpp"
#include "gspo/parallel.hpp"
#include "gspo/separation.hpp"

namespace gspo {

void SimulationSpec::validate() const {
    if (p < 1) throw std::invalid_argument("need at least one observed node");
    if (K < 0) throw std::invalid_argument("latent count must be >= 0");
    if (s < 0) throw std::invalid_argument("expected neighbors must be >= 0");
    if (n < 0) throw std::invalid_argument("sample count must be >= 0");
    if (!(weightLo > 0 && weightHi >= weightLo))
        throw std::invalid_argument("weight interval must satisfy 0 < lo <= hi");
    if (totalNodes() > maxVertices()) throw std::invalid_argument("p + K exceeds the vertex cap");
}

WeightedDAG sampleWeightedDag(const SimulationSpec& spec, Rng& graphRng, Rng& weightRng) {
    spec.validate();
    const int total = spec.totalNodes();
    std::vector<Vertex> order(static_cast<std::size_t>(total));
    std::iota(order.begin(), order.end(), 0);
    // Latents come first in the causal order; observed labels are permuted.
    std::shuffle(order.begin() + spec.K, order.end(), graphRng);
    const double prob = total > 1 ? std::min(1.0, spec.s / (total - 1)) : 0.0;
    std::bernoulli_distribution edge(prob);
    std::uniform_real_distribution<double> magnitude(spec.weightLo, spec.weightHi);
    std::bernoulli_distribution negative(0.5);

    GraphBuilder b(total);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(total, total);
    for (int a = 0; a < total; ++a)
        for (int c = a + 1; c < total; ++c) {
            if (!edge(graphRng)) continue;
            const Vertex from = order[a];
            const Vertex to = order[c];
            b.addDirected(from, to);
            const double m = magnitude(weightRng);
            w(from, to) = negative(weightRng) ? -m : m;
        }
    return {std::move(b).build(), std::move(w)};
}

std::vector<Vertex> topologicalOrder(const MixedGraph& dag) {
    const int n = dag.numVertices();
    std::vector<int> indeg(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) indeg[v] = dag.parents(v).size();
    std::vector<Vertex> out;
    VertexSet ready;
    for (Vertex v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.insert(v);
    while (!ready.empty()) {
        const Vertex v = ready.front();
        ready.erase(v);
        out.push_back(v);
        for (Vertex c : dag.children(v))
            if (--indeg[c] == 0) ready.insert(c);
    }
    if (static_cast<int>(out.size()) != n) throw std::invalid_argument("graph has a directed cycle");
    return out;
}

Eigen::MatrixXd sampleData(const WeightedDAG& w, long n, Rng& rng) {
    const int total = w.dag.numVertices();
    const auto order = topologicalOrder(w.dag);
    std::normal_distribution<double> noise(0.0, 1.0);
    Eigen::MatrixXd x(n, total);
    for (long r = 0; r < n; ++r)
        for (Vertex v : order) {
            double value = noise(rng);
            for (Vertex u : w.dag.parents(v)) value += w.weights(u, v) * x(r, u);
            x(r, v) = value;
        }
    return x;
}

Eigen::MatrixXd observedColumns(const Eigen::MatrixXd& data, int K) {
    return data.rightCols(data.cols() - K);
}

Eigen::MatrixXd populationCovariance(const WeightedDAG& w) {
    const auto total = w.weights.rows();
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(total, total) - w.weights;
    const Eigen::MatrixXd inv = a.inverse();
    return inv.transpose() * inv;
}

namespace {

void checkDag(const MixedGraph& dag) {
    if (!dag.bidirectedEdges().empty()) throw std::invalid_argument("latentProject needs a DAG");
    topologicalOrder(dag);  // throws on cycles
}

template <class Adjacent>
MixedGraph projectWith(const MixedGraph& dag, VertexSet observed, Adjacent&& adjacent) {
    checkDag(dag);
    const auto obs = observed.toVector();
    const auto an = ancestorTable(dag);
    GraphBuilder b(static_cast<int>(obs.size()));
    for (std::size_t a = 0; a < obs.size(); ++a)
        for (std::size_t c = a + 1; c < obs.size(); ++c) {
            const Vertex i = obs[a];
            const Vertex j = obs[c];
            if (!adjacent(i, j)) continue;
            const auto ia = static_cast<Vertex>(a);
            const auto ic = static_cast<Vertex>(c);
            if (an[j].contains(i))
                b.addDirected(ia, ic);
            else if (an[i].contains(j))
                b.addDirected(ic, ia);
            else
                b.addBidirected(ia, ic);
        }
    MixedGraph g = std::move(b).build();
    if (!isMaximalAncestral(g))
        throw InvariantViolation("latent projection is not maximal ancestral: " + g.toString());
    return g;
}

}  // namespace

MixedGraph latentProject(const MixedGraph& dag, VertexSet observed) {
    return projectWith(dag, observed, [&](Vertex i, Vertex j) {
        const VertexSet pair{i, j};
        const VertexSet s = (ancestors(dag, pair) & observed) - pair;
        return mConnected(dag, {i, j, s});
    });
}

MixedGraph latentProjectExhaustive(const MixedGraph& dag, VertexSet observed) {
    if (observed.size() > 16) throw Unsupported("exhaustive projection supports <= 16 observed");
    return projectWith(dag, observed, [&](Vertex i, Vertex j) {
        const std::uint64_t rest = (observed - VertexSet{i, j}).bits();
        std::uint64_t sub = 0;
        do {
            if (!mConnected(dag, {i, j, VertexSet(sub)})) return false;
            sub = (sub - rest) & rest;
        } while (sub != 0);
        return true;
    });
}

MixedGraph randomDmag(int p, int K, double s, Rng& rng) {
    SimulationSpec spec;
    spec.p = p;
    spec.K = K;
    spec.s = s;
    const WeightedDAG w = sampleWeightedDag(spec, rng);
    return latentProject(w.dag, VertexSet::range(p + K) - VertexSet::range(K));
}

GraphStats graphStats(const MixedGraph& g) {
    GraphStats st;
    const int e = g.edgeCount();
    if (g.numVertices() > 0) st.meanNeighbors = 2.0 * e / g.numVertices();
    if (e > 0) st.bidirectedFraction = static_cast<double>(g.bidirectedEdges().size()) / e;
    return st;
}

SkeletonMetrics skeletonMetrics(const MixedGraph& truth, const MixedGraph& estimate) {
    if (truth.numVertices() != estimate.numVertices())
        throw std::invalid_argument("skeletonMetrics: vertex counts differ");
    SkeletonMetrics m;
    const int n = truth.numVertices();
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) {
            const bool t = truth.isAdjacent(i, j);
            const bool e = estimate.isAdjacent(i, j);
            if (t && e) ++m.tp;
            else if (!t && e) ++m.fp;
            else if (t && !e) ++m.fn;
            else ++m.tn;
        }
    m.shd = m.fp + m.fn;
    m.tpr = m.tp + m.fn > 0 ? static_cast<double>(m.tp) / (m.tp + m.fn) : 1.0;
    m.recall = m.tpr;
    m.fpr = m.fp + m.tn > 0 ? static_cast<double>(m.fp) / (m.fp + m.tn) : 0.0;
    m.precision = m.tp + m.fp > 0 ? static_cast<double>(m.tp) / (m.tp + m.fp) : 1.0;
    return m;
}

std::vector<double> logSpacedAlphas(double lo, double hi, int count) {
    if (count < 1 || !(lo > 0) || !(hi >= lo)) throw std::invalid_argument("bad alpha grid");
    std::vector<double> out;
    if (count == 1) return {lo};
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int t = 0; t < count; ++t) out.push_back(std::pow(10.0, a + (b - a) * t / (count - 1)));
    return out;
}

BenchmarkResult runBenchmark(const BenchmarkOptions& opts) {
    opts.spec.validate();
    opts.search.validate();
    if (opts.replicates < 1) throw std::invalid_argument("need at least one replicate");
    const auto& spec = opts.spec;
    const VertexSet observed = VertexSet::range(spec.totalNodes()) - VertexSet::range(spec.K);
    const std::size_t perReplicate = opts.alphas.size() * opts.sampleSizes.size();

    std::vector<std::vector<BenchmarkRow>> perRep(static_cast<std::size_t>(opts.replicates));
    std::vector<GraphStats> stats(static_cast<std::size_t>(opts.replicates));

    parallelFor(perRep.size(), [&](std::size_t rep) {
        Rng graphRng = makeRng(spec.seed, "graph", rep);
        Rng weightRng = makeRng(spec.seed, "weights", rep);
        const WeightedDAG w = sampleWeightedDag(spec, graphRng, weightRng);
        const MixedGraph truth = latentProject(w.dag, observed);
        stats[rep] = graphStats(truth);
        auto& rows = perRep[rep];
        rows.reserve(perReplicate);
        for (std::size_t ni = 0; ni < opts.sampleSizes.size(); ++ni) {
            const long n = opts.sampleSizes[ni];
            Eigen::MatrixXd data;
            std::string dataError;
            if (n <= 0) {
                dataError = "no samples";
            } else {
                Rng noiseRng = makeRng(spec.seed, "noise", rep * 1'000'003ULL + ni);
                data = observedColumns(sampleData(w, n, noiseRng), spec.K);
            }
            for (double alpha : opts.alphas) {
                BenchmarkRow row;
                row.replicate = static_cast<int>(rep);
                row.p = spec.p;
                row.K = spec.K;
                row.s = spec.s;
                row.n = n;
                row.alpha = alpha;
                row.trueEdges = truth.edgeCount();
                if (!dataError.empty()) {
                    row.error = dataError;
                    rows.push_back(row);
                    continue;
                }
                try {
                    const auto t0 = std::chrono::steady_clock::now();
                    const GaussianCITester tester = GaussianCITester::fromData(data, alpha);
                    const CachedOracle cached(tester);
                    SearchConfig cfg = opts.search;
                    cfg.rngSeed = deriveSeed(spec.seed, "restarts", rep);
                    const RestartResult res = runRestarts(cached, cfg);
                    const auto t1 = std::chrono::steady_clock::now();
                    row.runtimeMs = std::chrono::duration<double, std::milli>(t1 - t0).count();
                    row.metrics = skeletonMetrics(truth, res.best);
                    row.estimatedEdges = res.best.edgeCount();
                    row.queries = cached.stats().innerCalls;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                rows.push_back(row);
            }
        }
    });

    BenchmarkResult result;
    result.truthStats = std::move(stats);
    for (auto& rows : perRep)
        for (auto& r : rows) result.rows.push_back(std::move(r));

    for (long n : opts.sampleSizes)
        for (double alpha : opts.alphas) {
            BenchmarkCell cell;
            cell.n = n;
            cell.alpha = alpha;
            std::vector<double> runtimes;
            for (const auto& r : result.rows) {
                if (r.n != n || r.alpha != alpha) continue;
                if (!r.error.empty()) {
                    ++cell.errors;
                    continue;
                }
                ++cell.runs;
                cell.meanShd += r.metrics.shd;
                cell.meanTpr += r.metrics.tpr;
                cell.meanFpr += r.metrics.fpr;
                cell.meanPrecision += r.metrics.precision;
                cell.meanRecall += r.metrics.recall;
                cell.meanRuntimeMs += r.runtimeMs;
                runtimes.push_back(r.runtimeMs);
            }
            if (cell.runs > 0) {
                const double k = cell.runs;
                cell.meanShd /= k;
                cell.meanTpr /= k;
                cell.meanFpr /= k;
                cell.meanPrecision /= k;
                cell.meanRecall /= k;
                cell.meanRuntimeMs /= k;
                std::sort(runtimes.begin(), runtimes.end());
                const std::size_t mid = runtimes.size() / 2;
                cell.medianRuntimeMs = runtimes.size() % 2 == 1
                                           ? runtimes[mid]
                                           : 0.5 * (runtimes[mid - 1] + runtimes[mid]);
            }
            result.cells.push_back(cell);
        }
    return result;
}

void writeResultsCsv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
    out << "replicate,p,K,s,n,alpha,shd,tpr,fpr,precision,recall,runtime_ms,queries,error\n";
    out << std::setprecision(10);
    for (const auto& r : rows) {
        out << r.replicate << ',' << r.p << ',' << r.K << ',' << r.s << ',' << r.n << ',' << r.alpha
            << ',';
        if (r.error.empty()) {
            out << r.metrics.shd << ',' << r.metrics.tpr << ',' << r.metrics.fpr << ','
                << r.metrics.precision << ',' << r.metrics.recall << ',' << r.runtimeMs << ','
                << r.queries << ',';
        } else {
            std::string msg = r.error;
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            out << ",,,,,,," << msg;
        }
        out << '\n';
    }
}

nlohmann::json aggregatesToJson(const BenchmarkResult& result) {
    nlohmann::json j;
    j["cells"] = nlohmann::json::array();
    for (const auto& c : result.cells) {
        j["cells"].push_back({{"n", c.n},
                              {"alpha", c.alpha},
                              {"runs", c.runs},
                              {"errors", c.errors},
                              {"mean_shd", c.meanShd},
                              {"mean_tpr", c.meanTpr},
                              {"mean_fpr", c.meanFpr},
                              {"mean_precision", c.meanPrecision},
                              {"mean_recall", c.meanRecall},
                              {"median_runtime_ms", c.medianRuntimeMs},
                              {"mean_runtime_ms", c.meanRuntimeMs}});
    }
    double nb = 0, bf = 0;
    for (const auto& s : result.truthStats) {
        nb += s.meanNeighbors;
        bf += s.bidirectedFraction;
    }
    const double k = std::max<std::size_t>(1, result.truthStats.size());
    j["truth"] = {{"mean_neighbors", nb / k}, {"mean_bidirected_fraction", bf / k}};
    return j;
}

void writeDataCsv(std::ostream& out, const Eigen::MatrixXd& data,
                  const std::vector<std::string>& labels) {
    if (static_cast<Eigen::Index>(labels.size()) != data.cols())
        throw std::invalid_argument("label count differs from column count");
    for (std::size_t c = 0; c < labels.size(); ++c) out << (c ? "," : "") << labels[c];
    out << '\n' << std::setprecision(17);
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) out << (c ? "," : "") << data(r, c);
        out << '\n';
    }
}

std::pair<std::vector<std::string>, Eigen::MatrixXd> readDataCsv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("empty data CSV");
    std::vector<std::string> labels;
    {
        std::istringstream hs(line);
        for (std::string cell; std::getline(hs, cell, ',');) {
            if (!cell.empty() && cell.back() == '\r') cell.pop_back();
            labels.push_back(cell);
        }
    }
    std::vector<double> values;
    long rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        std::istringstream ls(line);
        std::size_t cols = 0;
        for (std::string cell; std::getline(ls, cell, ',');) {
            try {
                values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw std::invalid_argument("non-numeric CSV cell '" + cell + "' on row " +
                                            std::to_string(rows + 2));
            }
            ++cols;
        }
        if (cols != labels.size())
            throw std::invalid_argument("CSV row " + std::to_string(rows + 2) + " has " +
                                        std::to_string(cols) + " cells, expected " +
                                        std::to_string(labels.size()));
        ++rows;
    }
    Eigen::MatrixXd data(rows, static_cast<Eigen::Index>(labels.size()));
    for (long r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < labels.size(); ++c)
            data(r, static_cast<Eigen::Index>(c)) = values[static_cast<std::size_t>(r) * labels.size() + c];
    return {std::move(labels), std::move(data)};
}

}  // namespace gspo
