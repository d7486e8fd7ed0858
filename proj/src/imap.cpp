#include "gspo/imap.hpp"

#include <stdexcept>

#include "gspo/equivalence.hpp"
#include "gspo/errors.hpp"
#include "gspo/parallel.hpp"
#include "gspo/separation.hpp"

namespace gspo {

namespace {

std::vector<Edge> allPairs(int n) {
    std::vector<Edge> pairs;
    pairs.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    return pairs;
}

void checkSizes(const Poset& p, const CIOracle& oracle) {
    if (p.groundSize() != oracle.numVariables())
        throw std::invalid_argument("poset ground size differs from oracle variable count");
}

MixedGraph assembleAG(const Poset& p, const std::vector<Edge>& pairs,
                      const std::vector<char>& dependent) {
    GraphBuilder b(p.groundSize());
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        if (!dependent[t]) continue;
        const auto [i, j] = pairs[t];
        if (p.leq(i, j))
            b.addDirected(i, j);
        else if (p.leq(j, i))
            b.addDirected(j, i);
        else
            b.addBidirected(i, j);
    }
    MixedGraph g = std::move(b).build();
    if (!isAncestral(g))
        throw InvariantViolation("AG(pi) is not ancestral for pi = " + p.toString());
    return g;
}

}  // namespace

namespace serial {

MixedGraph constructAG(const Poset& p, const CIOracle& oracle) {
    checkSizes(p, oracle);
    const auto pairs = allPairs(p.groundSize());
    std::vector<char> dependent(pairs.size(), 0);
    for (std::size_t t = 0; t < pairs.size(); ++t) {
        const auto [i, j] = pairs[t];
        dependent[t] = !oracle.independent(i, j, preStar(p, VertexSet{i, j}));
    }
    return assembleAG(p, pairs, dependent);
}

}  // namespace serial

MixedGraph constructAG(const Poset& p, const CIOracle& oracle) {
    checkSizes(p, oracle);
    const auto pairs = allPairs(p.groundSize());
    std::vector<char> dependent(pairs.size(), 0);
    parallelFor(
        pairs.size(),
        [&](std::size_t t) {
            const auto [i, j] = pairs[t];
            dependent[t] = !oracle.independent(i, j, preStar(p, VertexSet{i, j}));
        },
        64);
    return assembleAG(p, pairs, dependent);
}

MixedGraph constructGPi(const Poset& p, const CIOracle& oracle) {
    const MixedGraph first = constructAG(p, oracle);
    const MixedGraph second = constructAG(posetOfGraph(first), oracle);
    return maximalClosure(second);
}

std::optional<Edge> imapWitness(const MixedGraph& g, const CIOracle& oracle) {
    const int n = g.numVertices();
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) {
            if (g.isAdjacent(i, j)) continue;
            if (!oracle.independent(i, j, ancestorsStar(g, VertexSet{i, j}))) return Edge{i, j};
        }
    return std::nullopt;
}

bool isIMAP(const MixedGraph& g, const CIOracle& oracle) { return !imapWitness(g, oracle); }

bool isMinimalIMAP(const MixedGraph& g, const CIOracle& oracle) {
    if (!isIMAP(g, oracle)) throw std::invalid_argument("isMinimalIMAP requires an IMAP");
    for (auto [i, j] : skeleton(g)) {
        const MixedGraph smaller = g.withoutEdge(i, j);
        if (isMaximal(smaller) && isIMAP(smaller, oracle)) return false;
    }
    return true;
}

FaithfulnessReport checkRestrictedFaithfulness(const MixedGraph& gStar, const CIOracle& oracle,
                                               int vertexCap) {
    const int n = gStar.numVertices();
    if (n > vertexCap)
        throw Unsupported("restricted-faithfulness check capped at " + std::to_string(vertexCap) +
                          " vertices");
    FaithfulnessReport report;
    const VertexSet all = VertexSet::range(n);

    // Ascending bitmask order over subsets of V \ {i, j}.
    auto forEachSubset = [&](Vertex i, Vertex j, auto&& fn) {
        const std::uint64_t rest = (all - VertexSet{i, j}).bits();
        std::uint64_t sub = 0;
        do {
            fn(VertexSet(sub));
            sub = (sub - rest) & rest;
        } while (sub != 0);
    };
    auto connectedButIndependent = [&](Vertex i, Vertex j) {
        std::vector<VertexSet> out;
        forEachSubset(i, j, [&](VertexSet s) {
            if (mConnected(gStar, {i, j, s}) && oracle.independent(i, j, s)) out.push_back(s);
        });
        return out;
    };

    for (auto [i, j] : skeleton(gStar))
        forEachSubset(i, j, [&](VertexSet s) {
            if (oracle.independent(i, j, s)) report.adjacencyViolations.push_back({i, j, s, {i, j}});
        });

    for (Vertex k = 0; k < n; ++k)
        for (Vertex i : gStar.adjacent(k))
            for (Vertex j : gStar.adjacent(k)) {
                if (j <= i || gStar.isAdjacent(i, j)) continue;
                for (VertexSet s : connectedButIndependent(i, j))
                    report.orientationViolations.push_back({i, j, s, {i, k, j}});
            }

    for (const auto& path : discriminatingPaths(gStar, std::nullopt))
        for (VertexSet s : connectedButIndependent(path.start(), path.j()))
            report.discriminatingViolations.push_back({path.start(), path.j(), s, path.vertices});

    return report;
}

}  // namespace gspo
