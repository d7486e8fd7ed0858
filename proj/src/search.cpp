#include "gspo/search.hpp"

#include <algorithm>
#include <climits>
#include <ostream>
#include <unordered_map>

#include "gspo/equivalence.hpp"
#include "gspo/imap.hpp"
#include "gspo/parallel.hpp"
#include "gspo/rng.hpp"

namespace gspo {

Initialization parseInitialization(const std::string& name) {
    if (name == "empty") return Initialization::emptyPoset;
    if (name == "md") return Initialization::minDegree;
    if (name == "given") return Initialization::givenPoset;
    throw std::invalid_argument("unknown initialization '" + name + "' (expected empty, md, given)");
}

std::string toString(Initialization init) {
    switch (init) {
        case Initialization::emptyPoset: return "empty";
        case Initialization::minDegree: return "md";
        case Initialization::givenPoset: return "given";
    }
    return "?";
}

void SearchConfig::validate() const {
    if (depth < 1) throw std::invalid_argument("search depth must be >= 1");
    if (restarts < 1) throw std::invalid_argument("restart count must be >= 1");
    if (initialization == Initialization::givenPoset && !givenPoset)
        throw std::invalid_argument("givenPoset initialization without a poset");
    if (maxSteps && *maxSteps < 1) throw std::invalid_argument("maxSteps must be positive");
    if (hasseDepth && *hasseDepth < 1) throw std::invalid_argument("hasseDepth must be >= 1");
}

namespace {

// Memoized pi -> G_pi over a run-local CI cache.
class GPiEvaluator {
public:
    GPiEvaluator(const CIOracle& oracle, std::optional<long> maxSteps)
        : cache_(oracle), maxSteps_(maxSteps) {}

    const MixedGraph& operator()(const Poset& p) {
        ++trace.evaluations;
        if (maxSteps_ && static_cast<long>(trace.evaluations) > *maxSteps_) {
            trace.ciQueries = cache_.stats().innerCalls;
            throw SearchAborted("search exceeded maxSteps=" + std::to_string(*maxSteps_),
                                trace);
        }
        auto it = memo_.find(p);
        if (it == memo_.end()) it = memo_.emplace(p, constructGPi(p, cache_)).first;
        return it->second;
    }

    void record(const Poset& p, int edges) {
        trace.steps.push_back(
            {static_cast<int>(trace.steps.size()), p, edges, cache_.stats().innerCalls});
    }

    SearchResult finish(const Poset& p, const MixedGraph& g) {
        trace.ciQueries = cache_.stats().innerCalls;
        trace.finalPoset = p;
        trace.finalGraph = g;
        return {g, std::move(trace)};
    }

    SearchTrace trace;

private:
    CachedOracle cache_;
    std::optional<long> maxSteps_;
    std::unordered_map<Poset, MixedGraph, PosetHash> memo_;
};

void checkStart(const CIOracle& oracle, const Poset& start, const SearchConfig& cfg) {
    cfg.validate();
    if (start.groundSize() != oracle.numVariables())
        throw std::invalid_argument("start poset ground size differs from oracle variable count");
}

// Depth-limited DFS along weakly-decreasing |G| paths. `neighbors(node)`
// yields candidate posets; nodes are identified by `key`. Returns the first
// poset whose graph is strictly sparser than `target`.
template <class Node, class NodeHash, class Neighbors, class KeyOf>
std::optional<Poset> searchSparser(GPiEvaluator& eval, const Node& root, int rootEdges,
                                   int maxDepth, Neighbors&& neighbors, KeyOf&& keyOf) {
    std::unordered_map<Node, int, NodeHash> bestRemaining;
    std::optional<Poset> found;
    auto dfs = [&](auto&& self, const Node& node, int nodeEdges, int remaining) -> bool {
        bestRemaining[node] = remaining;
        for (const Poset& tau : neighbors(node)) {
            const MixedGraph& gTau = eval(tau);
            const int e = gTau.edgeCount();
            if (e > nodeEdges) continue;
            if (e < rootEdges) {
                found = tau;
                return true;
            }
            if (remaining <= 1) continue;
            Node next = keyOf(tau, gTau);
            auto it = bestRemaining.find(next);
            if (it != bestRemaining.end() && it->second >= remaining - 1) continue;
            if (self(self, next, e, remaining - 1)) return true;
        }
        return false;
    };
    dfs(dfs, root, rootEdges, maxDepth);
    return found;
}

}  // namespace

SearchResult gspoHasse(const CIOracle& oracle, const Poset& start, const SearchConfig& cfg) {
    checkStart(oracle, start, cfg);
    GPiEvaluator eval(oracle, cfg.maxSteps);
    Poset current = start;
    MixedGraph graph = eval(current);
    eval.record(current, graph.edgeCount());
    const int depth = cfg.hasseDepth.value_or(INT_MAX);
    for (;;) {
        auto next = searchSparser<Poset, PosetHash>(
            eval, current, graph.edgeCount(), depth,
            [](const Poset& p) { return hasseNeighbors(p); },
            [](const Poset& tau, const MixedGraph&) { return tau; });
        if (!next) break;
        current = *next;
        graph = eval(current);
        eval.record(current, graph.edgeCount());
    }
    return eval.finish(current, graph);
}

SearchResult gspo(const CIOracle& oracle, const Poset& start, const SearchConfig& cfg) {
    checkStart(oracle, start, cfg);
    GPiEvaluator eval(oracle, cfg.maxSteps);
    Poset current = start;
    MixedGraph graph = eval(current);
    eval.record(current, graph.edgeCount());
    // Arcs of L_P leave G_pi itself, so DFS nodes are graphs.
    auto neighbors = [](const MixedGraph& g) {
        std::vector<Poset> out;
        for (const auto& c : legitimateMarkChanges(g)) out.push_back(posetOfGraph(applyMarkChange(g, c)));
        return out;
    };
    for (;;) {
        auto next = searchSparser<MixedGraph, MixedGraphHash>(
            eval, graph, graph.edgeCount(), cfg.depth, neighbors,
            [](const Poset&, const MixedGraph& g) { return g; });
        if (!next) break;
        current = *next;
        graph = eval(current);
        eval.record(current, graph.edgeCount());
    }
    return eval.finish(current, graph);
}

Poset initEmpty(int n) {
    if (n < 1) throw std::invalid_argument("initEmpty needs n >= 1");
    return Poset(n);
}

Poset initMinDegree(const CIOracle& oracle, int n) {
    if (n < 1) throw std::invalid_argument("initMinDegree needs n >= 1");
    if (oracle.numVariables() != n) throw std::invalid_argument("oracle variable count differs");
    const VertexSet all = VertexSet::range(n);
    std::vector<VertexSet> adj(static_cast<std::size_t>(n));
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (!oracle.independent(i, j, all - VertexSet{i, j})) {
                adj[i].insert(j);
                adj[j].insert(i);
            }
    VertexSet remaining = all;
    std::vector<Vertex> order;  // earliest-eliminated last
    while (!remaining.empty()) {
        Vertex best = -1;
        int bestDegree = INT_MAX;
        for (Vertex v : remaining) {
            const int d = (adj[v] & remaining).size();
            if (d < bestDegree) {
                bestDegree = d;
                best = v;
            }
        }
        const VertexSet nb = adj[best] & remaining;
        for (Vertex u : nb) adj[u] |= nb - VertexSet::single(u);
        remaining.erase(best);
        order.insert(order.begin(), best);
    }
    return Poset::totalOrder(order);
}

Poset initialPoset(const CIOracle& oracle, const SearchConfig& cfg) {
    const int n = oracle.numVariables();
    switch (cfg.initialization) {
        case Initialization::emptyPoset: return initEmpty(n);
        case Initialization::minDegree: return initMinDegree(oracle, n);
        case Initialization::givenPoset:
            if (!cfg.givenPoset) throw std::invalid_argument("givenPoset initialization without a poset");
            return *cfg.givenPoset;
    }
    return initEmpty(n);
}

Poset restartStart(const CIOracle& oracle, const SearchConfig& cfg, int index) {
    Poset start = initialPoset(oracle, cfg);
    if (index == 0) return start;
    Rng rng = makeRng(cfg.rngSeed, "restarts", static_cast<std::uint64_t>(index));
    const int n = start.groundSize();
    std::uniform_int_distribution<int> moves(1, std::max(1, n));
    const int k = moves(rng);
    for (int m = 0; m < k; ++m) {
        const auto nb = hasseNeighbors(start);
        if (nb.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
        start = nb[pick(rng)];
    }
    return start;
}

namespace {

RestartResult pickBest(std::vector<SearchResult>& results) {
    RestartResult out;
    for (std::size_t r = 0; r < results.size(); ++r) {
        if (r == 0 || results[r].graph.edgeCount() < out.best.edgeCount()) {
            out.best = results[r].graph;
            out.bestIndex = static_cast<int>(r);
        }
        out.traces.push_back(std::move(results[r].trace));
    }
    return out;
}

}  // namespace

namespace serial {

RestartResult runRestarts(const CIOracle& oracle, const SearchConfig& cfg) {
    cfg.validate();
    std::vector<SearchResult> results;
    for (int r = 0; r < cfg.restarts; ++r)
        results.push_back(gspo(oracle, restartStart(oracle, cfg, r), cfg));
    return pickBest(results);
}

}  // namespace serial

RestartResult runRestarts(const CIOracle& oracle, const SearchConfig& cfg) {
    cfg.validate();
    std::vector<SearchResult> results(static_cast<std::size_t>(cfg.restarts));
    parallelFor(results.size(), [&](std::size_t r) {
        results[r] = gspo(oracle, restartStart(oracle, cfg, static_cast<int>(r)), cfg);
    });
    return pickBest(results);
}

void writeTraceJsonl(std::ostream& out, const SearchTrace& trace) {
    for (const auto& s : trace.steps) {
        nlohmann::json j;
        j["step"] = s.step;
        j["poset"] = posetToJson(s.poset);
        j["edges"] = s.edges;
        j["queries"] = s.queries;
        out << j.dump() << '\n';
    }
}

}  // namespace gspo
