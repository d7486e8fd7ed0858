#include "gspo/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <unordered_set>

#include "gspo/ci.hpp"
#include "gspo/equivalence.hpp"
#include "gspo/graph_io.hpp"
#include "gspo/imap.hpp"
#include "gspo/parallel.hpp"
#include "gspo/search.hpp"
#include "gspo/separation.hpp"
#include "gspo/simulate.hpp"

namespace gspo {

nlohmann::json VerifyReport::toJson() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["cases"] = cases;
    j["passed"] = passed;
    j["pass_rate"] = passRate();
    j["ok"] = ok();
    j["failures"] = nlohmann::json::array();
    for (const auto& f : failures)
        j["failures"].push_back(
            {{"case", f.caseIndex}, {"message", f.message}, {"artifact", f.artifact}});
    j["extra"] = extra;
    return j;
}

namespace {

int uniformInt(Rng& rng, int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

// Evaluates `check` on every case index in parallel; failures come back in index order.
VerifyReport runCases(const std::string& suite, long count,
                      const std::function<std::optional<CaseFailure>(long)>& check) {
    std::vector<std::optional<CaseFailure>> outcome(static_cast<std::size_t>(count));
    parallelFor(outcome.size(), [&](std::size_t c) {
        try {
            outcome[c] = check(static_cast<long>(c));
        } catch (const std::exception& e) {
            outcome[c] = CaseFailure{static_cast<long>(c), std::string("exception: ") + e.what(), {}};
        }
    });
    VerifyReport r;
    r.suite = suite;
    r.cases = count;
    for (auto& o : outcome) {
        if (o) {
            r.failures.push_back(std::move(*o));
        } else {
            ++r.passed;
        }
    }
    return r;
}

CaseFailure failure(long index, std::string message, nlohmann::json artifact = {}) {
    return CaseFailure{index, std::move(message), std::move(artifact)};
}

std::uint64_t skeletonKey(const MixedGraph& g) {
    std::uint64_t key = 0;
    int bit = 0;
    for (Vertex i = 0; i < g.numVertices(); ++i)
        for (Vertex j = i + 1; j < g.numVertices(); ++j, ++bit)
            if (g.isAdjacent(i, j)) key |= std::uint64_t{1} << bit;
    return key;
}

bool skeletonContains(const MixedGraph& big, const MixedGraph& small) {
    for (const auto& [i, j] : skeleton(small))
        if (!big.isAdjacent(i, j)) return false;
    return true;
}

void checkNodes(const VerifyOptions& opts, int lo, int hi) {
    if (opts.nodes < lo || opts.nodes > hi)
        throw std::invalid_argument("--nodes must lie in [" + std::to_string(lo) + ", " +
                                    std::to_string(hi) + "] for this suite");
    if (opts.graphs < 0) throw std::invalid_argument("--graphs must be >= 0");
}

MixedGraph randomMixedGraph(int n, Rng& rng) {
    std::vector<Vertex> order(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double pEdge = u(rng);
    const double pBi = 0.5 * u(rng);
    GraphBuilder b(n);
    for (int a = 0; a < n; ++a)
        for (int c = a + 1; c < n; ++c) {
            if (u(rng) >= pEdge) continue;
            if (u(rng) < pBi)
                b.addBidirected(order[a], order[c]);
            else
                b.addDirected(order[a], order[c]);
        }
    return std::move(b).build();
}

MixedGraph inducedSubgraph(const MixedGraph& g, const std::vector<Vertex>& keep) {
    std::vector<int> index(static_cast<std::size_t>(g.numVertices()), -1);
    for (std::size_t k = 0; k < keep.size(); ++k) index[keep[k]] = static_cast<int>(k);
    std::vector<Edge> d, b;
    for (const auto& [i, j] : g.directedEdges())
        if (index[i] >= 0 && index[j] >= 0) d.emplace_back(index[i], index[j]);
    for (const auto& [i, j] : g.bidirectedEdges())
        if (index[i] >= 0 && index[j] >= 0) b.emplace_back(index[i], index[j]);
    return MixedGraph::fromEdges(static_cast<int>(keep.size()), d, b);
}

}  // namespace

MixedGraph randomSmallDmag(int p, int maxLatents, Rng& rng) {
    const int kCap = std::max(0, std::min(maxLatents, maxVertices() - p));
    const int k = uniformInt(rng, 0, kCap);
    const double s = std::uniform_real_distribution<double>(1.0, 4.0)(rng);
    return randomDmag(p, k, s, rng);
}

MixedGraph randomAncestralGraph(int n, Rng& rng) {
    for (;;) {
        MixedGraph g = randomMixedGraph(n, rng);
        if (isAncestral(g)) return g;
    }
}

Poset randomPoset(int n, Rng& rng) {
    std::vector<Vertex> order(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) order[v] = v;
    std::shuffle(order.begin(), order.end(), rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double q = u(rng);
    std::vector<Edge> rel;
    for (int a = 0; a < n; ++a)
        for (int c = a + 1; c < n; ++c)
            if (u(rng) < q) rel.emplace_back(order[a], order[c]);
    return Poset::fromRelations(n, rel);
}

VerifyReport verifySparsestPoset(const VerifyOptions& opts) {
    checkNodes(opts, 1, 6);
    const auto posets = enumeratePosets(opts.nodes);
    auto r = runCases("sparsest-poset", opts.graphs, [&](long c) -> std::optional<CaseFailure> {
        Rng rng = makeRng(opts.seed, "sparsest-poset", static_cast<std::uint64_t>(c));
        const MixedGraph gStar = randomSmallDmag(opts.nodes, opts.maxLatents, rng);
        const GraphOracle oracle(gStar);
        int best = INT32_MAX;
        std::vector<std::size_t> minimizers;
        std::vector<MixedGraph> graphs;
        graphs.reserve(posets.size());
        for (std::size_t k = 0; k < posets.size(); ++k) {
            graphs.push_back(constructGPi(posets[k], oracle));
            const int e = graphs.back().edgeCount();
            if (e < best) {
                best = e;
                minimizers.clear();
            }
            if (e == best) minimizers.push_back(k);
        }
        nlohmann::json art{{"graph", graphToJson(gStar)}};
        if (best != gStar.edgeCount())
            return failure(c, "min |G_pi| = " + std::to_string(best) + " but |G*| = " +
                                  std::to_string(gStar.edgeCount()), art);
        for (std::size_t k : minimizers)
            if (!markovEquivalent(graphs[k], gStar)) {
                art["poset"] = posetToJson(posets[k]);
                art["output"] = graphToJson(graphs[k]);
                return failure(c, "sparsest G_pi not Markov equivalent to G*", art);
            }
        return std::nullopt;
    });
    r.extra["posets_per_graph"] = posets.size();
    return r;
}

VerifyReport verifyImapExhaustive(const VerifyOptions& opts) {
    checkNodes(opts, 1, 4);
    const auto dmags = enumerateDMAGs(opts.nodes);
    auto r = runCases("imap-exhaustive", opts.graphs, [&](long c) -> std::optional<CaseFailure> {
        Rng rng = makeRng(opts.seed, "imap-exhaustive", static_cast<std::uint64_t>(c));
        const MixedGraph gStar = randomSmallDmag(opts.nodes, opts.maxLatents, rng);
        const GraphOracle oracle(gStar);
        const nlohmann::json art{{"graph", graphToJson(gStar)}};
        std::vector<const MixedGraph*> imaps;
        for (const auto& h : dmags)
            if (isIMAP(h, oracle)) imaps.push_back(&h);
        if (std::find(dmags.begin(), dmags.end(), gStar) == dmags.end())
            return failure(c, "G* missing from the DMAG enumeration", art);
        int minEdges = INT32_MAX;
        for (const auto* h : imaps) {
            minEdges = std::min(minEdges, h->edgeCount());
            if (!skeletonContains(*h, gStar)) {
                auto a = art;
                a["imap"] = graphToJson(*h);
                return failure(c, "IMAP skeleton does not contain skel(G*)", a);
            }
        }
        for (const auto* h : imaps)
            if (h->edgeCount() == minEdges && !markovEquivalent(*h, gStar)) {
                auto a = art;
                a["imap"] = graphToJson(*h);
                return failure(c, "minimum-edge IMAP outside M(G*)", a);
            }
        return std::nullopt;
    });
    r.extra["dmags"] = dmags.size();
    return r;
}

VerifyReport verifyMinimalImap(const VerifyOptions& opts) {
    checkNodes(opts, 2, 8);
    return runCases("minimal-imap", opts.graphs, [&](long c) -> std::optional<CaseFailure> {
        Rng rng = makeRng(opts.seed, "minimal-imap", static_cast<std::uint64_t>(c));
        const int p = uniformInt(rng, 2, opts.nodes);
        const MixedGraph gStar = randomSmallDmag(p, opts.maxLatents, rng);
        const Poset pi = randomPoset(p, rng);
        const GraphOracle oracle(gStar);
        const MixedGraph g = constructGPi(pi, oracle);
        const nlohmann::json art{
            {"graph", graphToJson(gStar)}, {"poset", posetToJson(pi)}, {"output", graphToJson(g)}};
        if (!isMaximalAncestral(g)) return failure(c, "G_pi not maximal ancestral", art);
        if (!isIMAP(g, oracle)) return failure(c, "G_pi not an IMAP", art);
        if (!isMinimalIMAP(g, oracle)) return failure(c, "G_pi not a minimal IMAP", art);
        return std::nullopt;
    });
}

VerifyReport verifyMecFixedPoint(const VerifyOptions& opts) {
    checkNodes(opts, 2, 8);
    const long graphs = opts.graphs;
    return runCases("mec-fixed-point", graphs + opts.posets,
                    [&](long c) -> std::optional<CaseFailure> {
        Rng rng = makeRng(opts.seed, "mec-fixed-point", static_cast<std::uint64_t>(c));
        const int p = uniformInt(rng, 2, opts.nodes);
        const MixedGraph gStar = randomSmallDmag(p, opts.maxLatents, rng);
        const GraphOracle oracle(gStar);
        nlohmann::json art{{"graph", graphToJson(gStar)}};
        if (c < graphs) {
            for (const auto& h : enumerateMEC(gStar)) {
                const MixedGraph back = constructGPi(posetOfGraph(h), oracle);
                if (!(back == h)) {
                    art["member"] = graphToJson(h);
                    art["output"] = graphToJson(back);
                    return failure(c, "G_po(H) differs from H", art);
                }
            }
            return std::nullopt;
        }
        const Poset pi = randomPoset(p, rng);
        if (!(posetOfGraph(constructGPi(pi, oracle)) == posetOfGraph(constructAG(pi, oracle)))) {
            art["poset"] = posetToJson(pi);
            return failure(c, "po(G_pi) differs from po(AG(pi))", art);
        }
        return std::nullopt;
    });
}

VerifyReport verifyMecCrossValidation(const VerifyOptions& opts) {
    checkNodes(opts, 1, 4);
    const auto dmags = enumerateDMAGs(opts.nodes);
    std::map<std::uint64_t, std::vector<std::size_t>> bySkeleton;
    for (std::size_t k = 0; k < dmags.size(); ++k) bySkeleton[skeletonKey(dmags[k])].push_back(k);
    auto r = runCases("mec-crossval", static_cast<long>(dmags.size()),
                      [&](long c) -> std::optional<CaseFailure> {
        const MixedGraph& g = dmags[static_cast<std::size_t>(c)];
        const auto mec = enumerateMEC(g);
        std::unordered_set<MixedGraph, MixedGraphHash> transformational(mec.begin(), mec.end());
        std::size_t criterion = 0;
        for (std::size_t k : bySkeleton.at(skeletonKey(g))) {
            if (!markovEquivalent(g, dmags[k])) continue;
            ++criterion;
            if (!transformational.count(dmags[k]))
                return failure(c, "criterion-equivalent graph unreachable by mark changes",
                               {{"graph", graphToJson(g)}, {"other", graphToJson(dmags[k])}});
        }
        if (criterion != transformational.size())
            return failure(c, "mark-change class larger than criterion class",
                           {{"graph", graphToJson(g)}});
        return std::nullopt;
    });
    r.extra["dmags"] = dmags.size();
    return r;
}

namespace {

struct ConjectureRun {
    bool equivalent;
    RestartResult result;
};

ConjectureRun runOracleSearch(const MixedGraph& gStar, const SearchConfig& cfg) {
    const GraphOracle oracle(gStar);
    const CachedOracle cached(oracle);
    RestartResult res = serial::runRestarts(cached, cfg);
    const bool eq = markovEquivalent(res.best, gStar);
    return {eq, std::move(res)};
}

// Greedily drops edges and isolated vertices while the search still fails.
MixedGraph minimizeCounterexample(MixedGraph g, const SearchConfig& cfg) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Edge> edges = g.directedEdges();
        for (const auto& e : g.bidirectedEdges()) edges.push_back(e);
        for (const auto& [i, j] : edges) {
            MixedGraph h = g.withoutEdge(i, j);
            if (!isMaximal(h) || runOracleSearch(h, cfg).equivalent) continue;
            g = std::move(h);
            changed = true;
            break;
        }
        if (changed) continue;
        std::vector<Vertex> keep;
        for (Vertex v = 0; v < g.numVertices(); ++v)
            if (!g.adjacent(v).empty()) keep.push_back(v);
        if (!keep.empty() && static_cast<int>(keep.size()) < g.numVertices()) {
            MixedGraph h = inducedSubgraph(g, keep);
            if (!runOracleSearch(h, cfg).equivalent) {
                g = std::move(h);
                changed = true;
            }
        }
    }
    return g;
}

}  // namespace

VerifyReport verifyConjecture(const VerifyOptions& opts) {
    checkNodes(opts, 1, 16);
    std::vector<int> edgeCounts(static_cast<std::size_t>(std::max(0, opts.graphs)));
    auto r = runCases("conjecture", opts.graphs, [&](long c) -> std::optional<CaseFailure> {
        Rng rng = makeRng(opts.seed, "conjecture", static_cast<std::uint64_t>(c));
        const int p = uniformInt(rng, std::min(3, opts.nodes), opts.nodes);
        const MixedGraph gStar = randomSmallDmag(p, opts.maxLatents, rng);
        edgeCounts[static_cast<std::size_t>(c)] = gStar.edgeCount();
        SearchConfig cfg;
        cfg.depth = opts.depth;
        cfg.restarts = opts.restarts;
        cfg.rngSeed = deriveSeed(opts.seed, "restarts", static_cast<std::uint64_t>(c));
        const ConjectureRun run = runOracleSearch(gStar, cfg);
        if (run.equivalent) return std::nullopt;
        const MixedGraph small = minimizeCounterexample(gStar, cfg);
        const ConjectureRun again = runOracleSearch(small, cfg);
        const auto& trace = again.result.traces[static_cast<std::size_t>(again.result.bestIndex)];
        nlohmann::json art{{"graph", graphToJson(gStar)},
                           {"minimized_graph", graphToJson(small)},
                           {"start_poset", posetToJson(trace.steps.front().poset)},
                           {"final_poset", posetToJson(trace.finalPoset)},
                           {"output", graphToJson(again.result.best)},
                           {"depth", cfg.depth},
                           {"restarts", cfg.restarts},
                           {"rng_seed", cfg.rngSeed}};
        return failure(c, "GSPo output not Markov equivalent to G*", art);
    });
    double mean = 0;
    for (int e : edgeCounts) mean += e;
    r.extra["mean_true_edges"] = edgeCounts.empty() ? 0.0 : mean / edgeCounts.size();
    return r;
}

VerifyReport verifySeparationOracle(const VerifyOptions& opts) {
    checkNodes(opts, 2, 8);
    if (opts.queries < 0) throw std::invalid_argument("--queries must be >= 0");
    return runCases("separation-oracle", opts.queries, [&](long c) -> std::optional<CaseFailure> {
        Rng rng = makeRng(opts.seed, "separation-oracle", static_cast<std::uint64_t>(c));
        const int n = uniformInt(rng, 2, opts.nodes);
        const MixedGraph g = randomMixedGraph(n, rng);
        const Vertex i = uniformInt(rng, 0, n - 1);
        Vertex j = uniformInt(rng, 0, n - 2);
        if (j >= i) ++j;
        VertexSet s;
        std::bernoulli_distribution in(0.35);
        for (Vertex v = 0; v < n; ++v)
            if (v != i && v != j && in(rng)) s.insert(v);
        const SeparationQuery q{i, j, s};
        if (mConnected(g, q) != bruteForceMConnected(g, q))
            return failure(c, "mConnected disagrees with brute force",
                           {{"graph", graphToJson(g)}, {"i", i}, {"j", j}, {"s", s.toVector()}});
        return std::nullopt;
    });
}

VerifyReport verifyClosure(const VerifyOptions& opts) {
    checkNodes(opts, 2, 8);
    return runCases("closure", opts.graphs, [&](long c) -> std::optional<CaseFailure> {
        Rng rng = makeRng(opts.seed, "closure", static_cast<std::uint64_t>(c));
        const int n = uniformInt(rng, 2, opts.nodes);
        const MixedGraph g = randomAncestralGraph(n, rng);
        const MixedGraph closed = maximalClosure(g);
        const nlohmann::json art{{"graph", graphToJson(g)}, {"closure", graphToJson(closed)}};
        for (Vertex i = 0; i < n; ++i)
            for (Vertex j = i + 1; j < n; ++j) {
                const std::uint64_t rest = (VertexSet::range(n) - VertexSet{i, j}).bits();
                bool anySeparator = false;
                std::uint64_t sub = 0;
                do {
                    const SeparationQuery q{i, j, VertexSet(sub)};
                    const bool sep = mSeparated(g, q);
                    if (sep != mSeparated(closed, q))
                        return failure(c, "closure changed a separation statement", art);
                    anySeparator = anySeparator || sep;
                    sub = (sub - rest) & rest;
                } while (sub != 0);
                if (!g.isAdjacent(i, j) && separableByAncestors(g, i, j).separable != anySeparator)
                    return failure(c, "separableByAncestors disagrees with exhaustive search", art);
            }
        return std::nullopt;
    });
}

const std::vector<std::string>& suiteNames() {
    static const std::vector<std::string> names{
        "sparsest-poset", "imap-exhaustive", "minimal-imap", "mec-fixed-point",
        "mec-crossval",   "conjecture",      "separation-oracle", "closure"};
    return names;
}

VerifyReport runSuite(const std::string& name, const VerifyOptions& opts) {
    if (name == "sparsest-poset") return verifySparsestPoset(opts);
    if (name == "imap-exhaustive") return verifyImapExhaustive(opts);
    if (name == "minimal-imap") return verifyMinimalImap(opts);
    if (name == "mec-fixed-point") return verifyMecFixedPoint(opts);
    if (name == "mec-crossval") return verifyMecCrossValidation(opts);
    if (name == "conjecture") return verifyConjecture(opts);
    if (name == "separation-oracle") return verifySeparationOracle(opts);
    if (name == "closure") return verifyClosure(opts);
    throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace gspo
