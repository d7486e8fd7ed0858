#include "gspo/separation.hpp"

#include <functional>
#include <stdexcept>
#include <string>

#include "gspo/errors.hpp"

namespace gspo {

namespace {

void checkQuery(const MixedGraph& g, const SeparationQuery& q) {
    const int n = g.numVertices();
    if (q.i < 0 || q.i >= n || q.j < 0 || q.j >= n)
        throw std::invalid_argument("separation query vertex out of range");
    if (q.i == q.j) throw std::invalid_argument("separation query needs i != j");
    if (q.conditioning.contains(q.i) || q.conditioning.contains(q.j))
        throw std::invalid_argument("conditioning set contains a query endpoint");
}

}  // namespace

bool mConnected(const MixedGraph& g, const SeparationQuery& q) {
    checkQuery(g, q);
    const VertexSet s = q.conditioning;
    // A collider is open iff it is an ancestor of S (in S or has a descendant in S).
    const VertexSet openColliders = ancestors(g, s);

    // States: arrived at v with an arrowhead at v (head) or a tail at v.
    VertexSet seenHead, seenTail;
    VertexSet frontHead, frontTail;

    // Leaving the source: every edge is usable.
    auto arrive = [&](Vertex from, VertexSet allowed) {
        frontHead |= (g.children(from) | g.spouses(from)) & allowed;
        frontTail |= g.parents(from) & allowed;
    };
    arrive(q.i, VertexSet::range(g.numVertices()));
    frontHead -= seenHead;
    frontTail -= seenTail;

    while (!frontHead.empty() || !frontTail.empty()) {
        if ((frontHead | frontTail).contains(q.j)) return true;
        seenHead |= frontHead;
        seenTail |= frontTail;
        const VertexSet heads = frontHead;
        const VertexSet tails = frontTail;
        frontHead = {};
        frontTail = {};
        for (Vertex v : heads | tails) {
            if (v == q.i) continue;
            const bool viaHead = heads.contains(v);
            const bool viaTail = tails.contains(v);
            const bool inS = s.contains(v);
            // Leaving v along an edge with a tail at v: v is a non-collider.
            const bool tailExitOpen = !inS;
            // Leaving along an edge with an arrowhead at v: collider iff we arrived with a head.
            const bool headExitOpen =
                (viaTail && !inS) || (viaHead && openColliders.contains(v));
            if (tailExitOpen) {
                frontHead |= g.children(v);
            }
            if (headExitOpen) {
                frontHead |= g.spouses(v);
                frontTail |= g.parents(v);
            }
        }
        frontHead -= seenHead;
        frontTail -= seenTail;
    }
    return false;
}

AncestralSeparation separableByAncestors(const MixedGraph& g, Vertex i, Vertex j) {
    if (i == j) throw std::invalid_argument("separableByAncestors needs i != j");
    if (g.isAdjacent(i, j))
        throw std::invalid_argument("separableByAncestors called on adjacent pair " +
                                    std::to_string(i + 1) + "," + std::to_string(j + 1));
    const VertexSet pair{i, j};
    const VertexSet witness = ancestorsStar(g, pair);
    return {!mConnected(g, {i, j, witness}), witness};
}

bool bruteForceMConnected(const MixedGraph& g, const SeparationQuery& q) {
    if (g.numVertices() > 8) throw Unsupported("bruteForceMConnected supports at most 8 vertices");
    checkQuery(g, q);
    const VertexSet s = q.conditioning;
    const MixedGraph& graph = g;

    // Definition applied literally: a collider must be in S or have a descendant in S.
    auto colliderOpen = [&](Vertex v) {
        return descendants(graph, VertexSet::single(v)).intersects(s);
    };

    std::vector<Vertex> path{q.i};
    std::function<bool(VertexSet)> dfs = [&](VertexSet used) -> bool {
        const Vertex last = path.back();
        for (Vertex next : graph.adjacent(last) - used) {
            if (path.size() >= 2) {
                const Vertex prev = path[path.size() - 2];
                const bool collider = isCollider(graph, prev, last, next);
                if (collider ? !colliderOpen(last) : s.contains(last)) continue;
            }
            if (next == q.j) return true;
            path.push_back(next);
            VertexSet u = used;
            u.insert(next);
            if (dfs(u)) return true;
            path.pop_back();
        }
        return false;
    };
    return dfs(VertexSet::single(q.i));
}

}  // namespace gspo
