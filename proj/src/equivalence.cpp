#include "gspo/equivalence.hpp"

#include <deque>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "gspo/errors.hpp"
#include "gspo/separation.hpp"

namespace gspo {

bool isMaximal(const MixedGraph& g) {
    const int n = g.numVertices();
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j)
            if (!g.isAdjacent(i, j) && !separableByAncestors(g, i, j).separable) return false;
    return true;
}

bool isMaximalAncestral(const MixedGraph& g) { return isAncestral(g) && isMaximal(g); }

MixedGraph maximalClosure(const MixedGraph& g) {
    if (!isAncestral(g)) throw std::invalid_argument("maximalClosure requires an ancestral graph");
    MixedGraph current = g;
    const int n = g.numVertices();
    for (;;) {
        const auto an = ancestorTable(current);
        GraphBuilder next(current);
        bool changed = false;
        for (Vertex i = 0; i < n; ++i)
            for (Vertex j = i + 1; j < n; ++j) {
                if (current.isAdjacent(i, j) || separableByAncestors(current, i, j).separable)
                    continue;
                if (an[j].contains(i) || an[i].contains(j))
                    throw InvariantViolation("closure fill-in pair " + std::to_string(i + 1) + "," +
                                             std::to_string(j + 1) +
                                             " is ancestrally related in " + current.toString());
                next.addBidirected(i, j);
                changed = true;
            }
        if (!changed) return current;
        current = std::move(next).build();
    }
}

bool markovEquivalent(const MixedGraph& g, const MixedGraph& h) {
    if (g.numVertices() != h.numVertices())
        throw std::invalid_argument("markovEquivalent: vertex counts differ");
    if (!isMaximalAncestral(g) || !isMaximalAncestral(h))
        throw std::invalid_argument("markovEquivalent requires maximal ancestral graphs");
    const SkeletonInfo sg = skeletonAndVStructures(g);
    const SkeletonInfo sh = skeletonAndVStructures(h);
    if (sg.skeleton != sh.skeleton || sg.vStructures != sh.vStructures) return false;
    for (const auto& path : discriminatingPaths(g)) {
        if (!isDiscriminatingPath(h, path.vertices)) continue;
        const auto& v = path.vertices;
        const Vertex before = v[v.size() - 3];
        if (isCollider(g, before, path.k(), path.j()) != isCollider(h, before, path.k(), path.j()))
            return false;
    }
    return true;
}

bool isLegitimate(const MixedGraph& g, const MarkChange& c) {
    const int n = g.numVertices();
    if (c.i < 0 || c.j < 0 || c.i >= n || c.j >= n || c.i == c.j) return false;
    const bool present = c.direction == MarkChange::Direction::toBidirected
                             ? g.hasDirected(c.i, c.j)
                             : g.hasBidirected(c.i, c.j);
    if (!present) return false;
    // (1) no directed path i -> ... -> j besides the edge itself
    VertexSet otherParents = g.parents(c.j);
    otherParents.erase(c.i);
    if (ancestors(g, otherParents).contains(c.i)) return false;
    // (2) pa(i) within pa(j); spouses of i are parents or spouses of j
    VertexSet pa = g.parents(c.i);
    pa.erase(c.j);
    if (!pa.isSubsetOf(g.parents(c.j))) return false;
    VertexSet sp = g.spouses(c.i);
    sp.erase(c.j);
    if (!sp.isSubsetOf(g.parents(c.j) | g.spouses(c.j))) return false;
    // (3) no discriminating path for i ending at j
    return !hasDiscriminatingPath(g, c.i, c.j);
}

std::vector<MarkChange> legitimateMarkChanges(const MixedGraph& g) {
    std::vector<MarkChange> out;
    const int n = g.numVertices();
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = 0; j < n; ++j) {
            if (i == j) continue;
            for (auto dir : {MarkChange::Direction::toBidirected, MarkChange::Direction::toDirected}) {
                const MarkChange c{i, j, dir};
                if (isLegitimate(g, c)) out.push_back(c);
            }
        }
    return out;
}

MixedGraph applyMarkChange(const MixedGraph& g, const MarkChange& c) {
    if (!isLegitimate(g, c))
        throw std::invalid_argument("illegitimate mark change on edge " + std::to_string(c.i + 1) +
                                    "," + std::to_string(c.j + 1));
    GraphBuilder b(g);
    b.removeEdge(c.i, c.j);
    if (c.direction == MarkChange::Direction::toBidirected)
        b.addBidirected(c.i, c.j);
    else
        b.addDirected(c.i, c.j);
    MixedGraph out = std::move(b).build();
    if (!isAncestral(out))
        throw InvariantViolation("legitimate mark change produced a non-ancestral graph " +
                                 out.toString());
    return out;
}

std::vector<MixedGraph> enumerateMEC(const MixedGraph& g, int vertexCap) {
    if (g.numVertices() > vertexCap)
        throw Unsupported("enumerateMEC capped at " + std::to_string(vertexCap) + " vertices");
    std::vector<MixedGraph> out{g};
    std::unordered_set<MixedGraph, MixedGraphHash> seen{g};
    std::deque<std::size_t> queue{0};
    while (!queue.empty()) {
        const std::size_t idx = queue.front();
        queue.pop_front();
        const MixedGraph cur = out[idx];
        for (const auto& c : legitimateMarkChanges(cur)) {
            MixedGraph next = applyMarkChange(cur, c);
            if (seen.insert(next).second) {
                out.push_back(std::move(next));
                queue.push_back(out.size() - 1);
            }
        }
    }
    return out;
}

void forEachDMAG(int n, const std::function<void(const MixedGraph&)>& visit) {
    if (n < 0) throw std::invalid_argument("negative vertex count");
    if (n > 4) throw Unsupported("DMAG enumeration supports at most 4 vertices");
    std::vector<Edge> pairs;
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    std::size_t total = 1;
    for (std::size_t t = 0; t < pairs.size(); ++t) total *= 4;
    for (std::size_t code = 0; code < total; ++code) {
        GraphBuilder b(n);
        std::size_t rest = code;
        for (auto [i, j] : pairs) {
            switch (rest % 4) {
                case 1: b.addDirected(i, j); break;
                case 2: b.addDirected(j, i); break;
                case 3: b.addBidirected(i, j); break;
                default: break;
            }
            rest /= 4;
        }
        const MixedGraph& g = b.peek();
        if (isAncestral(g) && isMaximal(g)) visit(g);
    }
}

std::vector<MixedGraph> enumerateDMAGs(int n) {
    std::vector<MixedGraph> out;
    forEachDMAG(n, [&out](const MixedGraph& g) { out.push_back(g); });
    return out;
}

}  // namespace gspo
