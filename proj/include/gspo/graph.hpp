#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gspo/vertex_set.hpp"

namespace gspo {

using Edge = std::pair<Vertex, Vertex>;

/// Edge between an ordered pair (i, j) as seen from i.
enum class EdgeKind { none, out, in, bidirected };  // none, i->j, i<-j, i<->j

class GraphBuilder;

/// Directed mixed graph with directed and bidirected edges, at most one
/// edge per vertex pair, no self-loops. Immutable once built; edits go
/// through the copy-and-edit helpers or a GraphBuilder.
class MixedGraph {
public:
    MixedGraph() = default;
    explicit MixedGraph(int numVertices);

    static MixedGraph fromEdges(int numVertices, const std::vector<Edge>& directed,
                                const std::vector<Edge>& bidirected);

    int numVertices() const { return n_; }
    /// |D| + |B|
    int edgeCount() const { return edges_; }

    VertexSet parents(Vertex v) const { return nbr_[v].pa; }
    VertexSet children(Vertex v) const { return nbr_[v].ch; }
    VertexSet spouses(Vertex v) const { return nbr_[v].sp; }
    VertexSet adjacent(Vertex v) const { return nbr_[v].pa | nbr_[v].ch | nbr_[v].sp; }
    /// Vertices u with an arrowhead at v on the edge u-v (u->v or u<->v).
    VertexSet arrowsInto(Vertex v) const { return nbr_[v].pa | nbr_[v].sp; }

    bool isAdjacent(Vertex i, Vertex j) const { return adjacent(i).contains(j); }
    bool hasDirected(Vertex i, Vertex j) const { return nbr_[i].ch.contains(j); }
    bool hasBidirected(Vertex i, Vertex j) const { return nbr_[i].sp.contains(j); }
    EdgeKind edge(Vertex i, Vertex j) const;

    /// Sorted lexicographically.
    std::vector<Edge> directedEdges() const;
    /// Sorted, each pair with first < second.
    std::vector<Edge> bidirectedEdges() const;

    MixedGraph withDirected(Vertex i, Vertex j) const;
    MixedGraph withBidirected(Vertex i, Vertex j) const;
    MixedGraph withoutEdge(Vertex i, Vertex j) const;

    bool operator==(const MixedGraph& o) const;
    std::size_t hash() const;
    /// Short human-readable form, 1-based: "{1->2, 3<->4}".
    std::string toString() const;

private:
    friend class GraphBuilder;
    struct Neighborhood {
        VertexSet pa, ch, sp;
        bool operator==(const Neighborhood&) const = default;
    };
    void checkVertex(Vertex v) const;

    int n_ = 0;
    int edges_ = 0;
    std::vector<Neighborhood> nbr_;
};

struct MixedGraphHash {
    std::size_t operator()(const MixedGraph& g) const { return g.hash(); }
};

/// Mutable staging area for building a MixedGraph edge by edge.
class GraphBuilder {
public:
    explicit GraphBuilder(int numVertices) : g_(numVertices) {}
    explicit GraphBuilder(MixedGraph start) : g_(std::move(start)) {}

    /// Throws std::invalid_argument on self-loops and already-adjacent pairs.
    GraphBuilder& addDirected(Vertex i, Vertex j);
    GraphBuilder& addBidirected(Vertex i, Vertex j);
    /// No-op if i and j are not adjacent.
    GraphBuilder& removeEdge(Vertex i, Vertex j);

    const MixedGraph& peek() const { return g_; }
    MixedGraph build() && { return std::move(g_); }
    MixedGraph build() const& { return g_; }

private:
    void checkPair(Vertex i, Vertex j) const;
    MixedGraph g_;
};

struct Relations {
    VertexSet parents;
    VertexSet spouses;
    /// Reflexive: contains the queried vertex.
    VertexSet ancestors;
};

Relations relations(const MixedGraph& g, Vertex i);

/// an_G(S): union of reflexive ancestor sets.
VertexSet ancestors(const MixedGraph& g, VertexSet s);
/// an*_G(S) = an_G(S) \ S
inline VertexSet ancestorsStar(const MixedGraph& g, VertexSet s) { return ancestors(g, s) - s; }
/// de_G(S), reflexive.
VertexSet descendants(const MixedGraph& g, VertexSet s);
/// Row v holds an_G(v).
std::vector<VertexSet> ancestorTable(const MixedGraph& g);

/// No directed cycle and no bidirected edge between ancestrally related vertices.
bool isAncestral(const MixedGraph& g);

struct VStructure {
    Vertex i, k, j;  // i *-> k <-* j, i < j, i and j non-adjacent
    bool operator==(const VStructure&) const = default;
    auto operator<=>(const VStructure&) const = default;
};

struct SkeletonInfo {
    std::vector<Edge> skeleton;  // unordered pairs as (lo, hi), sorted
    std::vector<VStructure> vStructures;  // sorted
};

SkeletonInfo skeletonAndVStructures(const MixedGraph& g);
std::vector<Edge> skeleton(const MixedGraph& g);

/// Arrowheads at `mid` from both `a` and `c`.
inline bool isCollider(const MixedGraph& g, Vertex a, Vertex mid, Vertex c) {
    return g.arrowsInto(mid).contains(a) && g.arrowsInto(mid).contains(c);
}

/// Path <i, c_1, ..., c_l, k, j> with l >= 1, i and j non-adjacent, each c a
/// collider on the path and a parent of j. The path discriminates for k.
struct DiscriminatingPath {
    std::vector<Vertex> vertices;
    Vertex start() const { return vertices.front(); }
    Vertex k() const { return vertices[vertices.size() - 2]; }
    Vertex j() const { return vertices.back(); }
    bool operator==(const DiscriminatingPath&) const = default;
    auto operator<=>(const DiscriminatingPath&) const = default;
};

/// Default bound on path vertex count: none up to 16 vertices, 8 beyond.
std::optional<int> defaultDiscriminatingLengthBound(int numVertices);

/// All discriminating paths, sorted by vertex sequence. `maxVertices` caps
/// the number of vertices on a reported path.
std::vector<DiscriminatingPath> discriminatingPaths(const MixedGraph& g,
                                                    std::optional<int> maxVertices);
inline std::vector<DiscriminatingPath> discriminatingPaths(const MixedGraph& g) {
    return discriminatingPaths(g, defaultDiscriminatingLengthBound(g.numVertices()));
}

/// Existence-only: is there a discriminating path for k whose last vertex is j?
bool hasDiscriminatingPath(const MixedGraph& g, Vertex k, Vertex j);

/// Checks the definition on an explicit vertex sequence.
bool isDiscriminatingPath(const MixedGraph& g, const std::vector<Vertex>& path);

}  // namespace gspo
