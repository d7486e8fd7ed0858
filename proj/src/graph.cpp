#include "gspo/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <stdexcept>

namespace gspo {

int maxVertices() {
    static const int cap = [] {
        const char* env = std::getenv("GSPO_MAX_VERTICES");
        if (env == nullptr) return kMaxVertices;
        const int v = std::atoi(env);
        if (v < 1 || v > kMaxVertices)
            throw std::invalid_argument("GSPO_MAX_VERTICES must be in [1, 64]");
        return v;
    }();
    return cap;
}

std::string VertexSet::toString() const {
    std::string out = "{";
    bool first = true;
    for (Vertex v : *this) {
        if (!first) out += ",";
        out += std::to_string(v + 1);
        first = false;
    }
    return out + "}";
}

MixedGraph::MixedGraph(int numVertices) : n_(numVertices) {
    if (numVertices < 0 || numVertices > maxVertices())
        throw std::invalid_argument("vertex count " + std::to_string(numVertices) +
                                    " outside [0, " + std::to_string(maxVertices()) + "]");
    nbr_.resize(static_cast<std::size_t>(n_));
}

MixedGraph MixedGraph::fromEdges(int numVertices, const std::vector<Edge>& directed,
                                 const std::vector<Edge>& bidirected) {
    GraphBuilder b(numVertices);
    for (auto [i, j] : directed) b.addDirected(i, j);
    for (auto [i, j] : bidirected) b.addBidirected(i, j);
    return std::move(b).build();
}

void MixedGraph::checkVertex(Vertex v) const {
    if (v < 0 || v >= n_)
        throw std::invalid_argument("vertex " + std::to_string(v) + " out of range");
}

EdgeKind MixedGraph::edge(Vertex i, Vertex j) const {
    if (nbr_[i].ch.contains(j)) return EdgeKind::out;
    if (nbr_[i].pa.contains(j)) return EdgeKind::in;
    if (nbr_[i].sp.contains(j)) return EdgeKind::bidirected;
    return EdgeKind::none;
}

std::vector<Edge> MixedGraph::directedEdges() const {
    std::vector<Edge> out;
    for (Vertex i = 0; i < n_; ++i)
        for (Vertex j : nbr_[i].ch) out.emplace_back(i, j);
    return out;
}

std::vector<Edge> MixedGraph::bidirectedEdges() const {
    std::vector<Edge> out;
    for (Vertex i = 0; i < n_; ++i)
        for (Vertex j : nbr_[i].sp)
            if (i < j) out.emplace_back(i, j);
    return out;
}

MixedGraph MixedGraph::withDirected(Vertex i, Vertex j) const {
    return std::move(GraphBuilder(*this).addDirected(i, j)).build();
}

MixedGraph MixedGraph::withBidirected(Vertex i, Vertex j) const {
    return std::move(GraphBuilder(*this).addBidirected(i, j)).build();
}

MixedGraph MixedGraph::withoutEdge(Vertex i, Vertex j) const {
    return std::move(GraphBuilder(*this).removeEdge(i, j)).build();
}

bool MixedGraph::operator==(const MixedGraph& o) const {
    return n_ == o.n_ && edges_ == o.edges_ && nbr_ == o.nbr_;
}

std::size_t MixedGraph::hash() const {
    std::size_t h = std::hash<int>{}(n_);
    auto mix = [&h](std::uint64_t x) {
        h ^= std::hash<std::uint64_t>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    };
    for (const auto& nb : nbr_) {
        mix(nb.ch.bits());
        mix(nb.sp.bits());
    }
    return h;
}

std::string MixedGraph::toString() const {
    std::string out = "{";
    bool first = true;
    auto emit = [&](const std::string& s) {
        if (!first) out += ", ";
        out += s;
        first = false;
    };
    for (auto [i, j] : directedEdges()) emit(std::to_string(i + 1) + "->" + std::to_string(j + 1));
    for (auto [i, j] : bidirectedEdges())
        emit(std::to_string(i + 1) + "<->" + std::to_string(j + 1));
    return out + "}";
}

void GraphBuilder::checkPair(Vertex i, Vertex j) const {
    g_.checkVertex(i);
    g_.checkVertex(j);
    if (i == j) throw std::invalid_argument("self-loop at vertex " + std::to_string(i + 1));
    if (g_.isAdjacent(i, j))
        throw std::invalid_argument("vertices " + std::to_string(i + 1) + " and " +
                                    std::to_string(j + 1) + " already adjacent");
}

GraphBuilder& GraphBuilder::addDirected(Vertex i, Vertex j) {
    checkPair(i, j);
    g_.nbr_[i].ch.insert(j);
    g_.nbr_[j].pa.insert(i);
    ++g_.edges_;
    return *this;
}

GraphBuilder& GraphBuilder::addBidirected(Vertex i, Vertex j) {
    checkPair(i, j);
    g_.nbr_[i].sp.insert(j);
    g_.nbr_[j].sp.insert(i);
    ++g_.edges_;
    return *this;
}

GraphBuilder& GraphBuilder::removeEdge(Vertex i, Vertex j) {
    g_.checkVertex(i);
    g_.checkVertex(j);
    if (!g_.isAdjacent(i, j)) return *this;
    for (auto [a, b] : {Edge{i, j}, Edge{j, i}}) {
        g_.nbr_[a].pa.erase(b);
        g_.nbr_[a].ch.erase(b);
        g_.nbr_[a].sp.erase(b);
    }
    --g_.edges_;
    return *this;
}

Relations relations(const MixedGraph& g, Vertex i) {
    if (i < 0 || i >= g.numVertices())
        throw std::invalid_argument("vertex " + std::to_string(i) + " out of range");
    return {g.parents(i), g.spouses(i), ancestors(g, VertexSet::single(i))};
}

VertexSet ancestors(const MixedGraph& g, VertexSet s) {
    VertexSet seen = s;
    VertexSet frontier = s;
    while (!frontier.empty()) {
        VertexSet next;
        for (Vertex v : frontier) next |= g.parents(v);
        frontier = next - seen;
        seen |= frontier;
    }
    return seen;
}

VertexSet descendants(const MixedGraph& g, VertexSet s) {
    VertexSet seen = s;
    VertexSet frontier = s;
    while (!frontier.empty()) {
        VertexSet next;
        for (Vertex v : frontier) next |= g.children(v);
        frontier = next - seen;
        seen |= frontier;
    }
    return seen;
}

std::vector<VertexSet> ancestorTable(const MixedGraph& g) {
    std::vector<VertexSet> out(static_cast<std::size_t>(g.numVertices()));
    for (Vertex v = 0; v < g.numVertices(); ++v) out[v] = ancestors(g, VertexSet::single(v));
    return out;
}

bool isAncestral(const MixedGraph& g) {
    const int n = g.numVertices();
    std::vector<VertexSet> an(static_cast<std::size_t>(n));
    for (Vertex v = 0; v < n; ++v) {
        VertexSet proper;
        for (Vertex p : g.parents(v)) proper |= ancestors(g, VertexSet::single(p));
        if (proper.contains(v)) return false;  // directed cycle
        an[v] = proper;
    }
    for (Vertex v = 0; v < n; ++v)
        for (Vertex w : g.spouses(v))
            if (an[v].contains(w) || an[w].contains(v)) return false;
    return true;
}

std::vector<Edge> skeleton(const MixedGraph& g) {
    std::vector<Edge> out;
    for (Vertex i = 0; i < g.numVertices(); ++i)
        for (Vertex j : g.adjacent(i))
            if (i < j) out.emplace_back(i, j);
    return out;
}

SkeletonInfo skeletonAndVStructures(const MixedGraph& g) {
    SkeletonInfo info;
    info.skeleton = skeleton(g);
    for (Vertex k = 0; k < g.numVertices(); ++k) {
        const VertexSet into = g.arrowsInto(k);
        for (Vertex i : into)
            for (Vertex j : into)
                if (i < j && !g.isAdjacent(i, j)) info.vStructures.push_back({i, k, j});
    }
    std::sort(info.vStructures.begin(), info.vStructures.end());
    return info;
}

std::optional<int> defaultDiscriminatingLengthBound(int numVertices) {
    if (numVertices <= 16) return std::nullopt;
    return 8;
}

namespace {

// Grows discriminating paths backwards from the tail <c, k, j>; `rev` holds
// the path reversed (j, k, c_l, ...).
void extendBackwards(const MixedGraph& g, std::vector<Vertex>& rev, VertexSet onPath,
                     std::optional<int> maxVertices, std::vector<DiscriminatingPath>& out) {
    const Vertex j = rev.front();
    const Vertex c = rev.back();
    const VertexSet candidates = g.arrowsInto(c) - onPath;
    const bool room = !maxVertices || static_cast<int>(rev.size()) < *maxVertices;
    if (!room) return;
    for (Vertex x : candidates) {
        if (x != j && !g.isAdjacent(x, j)) {
            DiscriminatingPath p;
            p.vertices.assign(rev.rbegin(), rev.rend());
            p.vertices.insert(p.vertices.begin(), x);
            out.push_back(std::move(p));
        } else if (g.parents(j).contains(x) && g.hasBidirected(x, c)) {
            rev.push_back(x);
            VertexSet next = onPath;
            next.insert(x);
            extendBackwards(g, rev, next, maxVertices, out);
            rev.pop_back();
        }
    }
}

}  // namespace

std::vector<DiscriminatingPath> discriminatingPaths(const MixedGraph& g,
                                                    std::optional<int> maxVertices) {
    std::vector<DiscriminatingPath> out;
    const int n = g.numVertices();
    if (n < 4) return out;
    for (Vertex j = 0; j < n; ++j) {
        for (Vertex k : g.adjacent(j)) {
            // c_l: parent of j with an arrowhead from k
            const VertexSet first = g.parents(j) & (g.children(k) | g.spouses(k));
            for (Vertex c : first) {
                if (c == k) continue;
                std::vector<Vertex> rev{j, k, c};
                VertexSet onPath{j, k, c};
                extendBackwards(g, rev, onPath, maxVertices, out);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool hasDiscriminatingPath(const MixedGraph& g, Vertex k, Vertex j) {
    if (!g.isAdjacent(k, j)) return false;
    const VertexSet colliderPool = g.parents(j) - VertexSet{k, j};
    const VertexSet adjJ = g.adjacent(j);
    VertexSet seen = colliderPool & (g.children(k) | g.spouses(k));
    VertexSet frontier = seen;
    // Shortest collider chains are simple, and the start vertex is never
    // adjacent to j while every chain vertex is, so BFS over colliders decides existence.
    while (!frontier.empty()) {
        VertexSet next;
        for (Vertex c : frontier) {
            VertexSet starts = g.arrowsInto(c) - adjJ;
            starts.erase(j);
            if (!starts.empty()) return true;
            next |= g.spouses(c) & colliderPool;
        }
        frontier = next - seen;
        seen |= frontier;
    }
    return false;
}

bool isDiscriminatingPath(const MixedGraph& g, const std::vector<Vertex>& path) {
    const std::size_t m = path.size();
    if (m < 4) return false;
    VertexSet seen;
    for (Vertex v : path) {
        if (seen.contains(v)) return false;
        seen.insert(v);
    }
    for (std::size_t t = 0; t + 1 < m; ++t)
        if (!g.isAdjacent(path[t], path[t + 1])) return false;
    const Vertex i = path.front();
    const Vertex j = path.back();
    if (g.isAdjacent(i, j)) return false;
    for (std::size_t t = 1; t + 2 < m; ++t) {
        if (!isCollider(g, path[t - 1], path[t], path[t + 1])) return false;
        if (!g.hasDirected(path[t], j)) return false;
    }
    return true;
}

}  // namespace gspo
