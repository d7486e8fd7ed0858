#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gspo/graph.hpp"

namespace gspo {

/// Partial order on {0..n-1}, stored as its reflexive transitive closure
/// (one up-set and one down-set bitmask per element).
class Poset {
public:
    Poset() = default;
    /// Empty poset: only the reflexive relations.
    explicit Poset(int groundSize);

    /// Transitive closure of the given strict relations; throws
    /// std::invalid_argument if the closure is not antisymmetric.
    static Poset fromRelations(int groundSize, const std::vector<Edge>& lessOrEqual);
    /// Total order order[0] <= order[1] <= ...
    static Poset totalOrder(const std::vector<Vertex>& order);

    int groundSize() const { return n_; }
    bool leq(Vertex i, Vertex j) const { return up_[i].contains(j); }
    bool comparable(Vertex i, Vertex j) const { return leq(i, j) || leq(j, i); }
    /// {x : x <= v}, reflexive.
    VertexSet downSet(Vertex v) const { return down_[v]; }
    /// {y : v <= y}, reflexive.
    VertexSet upSet(Vertex v) const { return up_[v]; }

    /// Strict pairs (i, j), i != j, i <= j, lexicographic.
    std::vector<Edge> relations() const;
    int relationCount() const;
    /// Covering pairs of the order, lexicographic.
    std::vector<Edge> covers() const;
    bool isTotal() const;

    Poset withoutRelation(Vertex i, Vertex j) const;
    /// Adds i <= j and closes transitively.
    Poset withRelation(Vertex i, Vertex j) const;

    bool operator==(const Poset& o) const { return n_ == o.n_ && up_ == o.up_; }
    std::size_t hash() const;
    std::string toString() const;

private:
    void rebuildDown();

    int n_ = 0;
    std::vector<VertexSet> up_;
    std::vector<VertexSet> down_;
};

struct PosetHash {
    std::size_t operator()(const Poset& p) const { return p.hash(); }
};

/// po(G): i <= j iff i is an ancestor of j. Throws on non-ancestral input.
Poset posetOfGraph(const MixedGraph& g);

/// pre_p(targets) = {x : x <= s for some s in targets}
VertexSet pre(const Poset& p, VertexSet targets);
inline VertexSet preStar(const Poset& p, VertexSet targets) { return pre(p, targets) - targets; }

/// Posets that differ from p in exactly one ordered pair: cover removals
/// first, then additions, each lexicographic in (i, j).
std::vector<Poset> hasseNeighbors(const Poset& p);

/// Calls `visit` on every poset of the given ground size exactly once, in
/// lexicographic order of the flattened closure matrix. n <= 6.
void forEachPoset(int n, const std::function<void(const Poset&)>& visit);
std::vector<Poset> enumeratePosets(int n);

/// {"n": k, "relations": [[i,j],...]} with 0-based indices of strict pairs.
nlohmann::json posetToJson(const Poset& p);
Poset posetFromJson(const nlohmann::json& j);

}  // namespace gspo
