#pragma once

#include <functional>
#include <vector>

#include "gspo/graph.hpp"

namespace gspo {

/// Flip of a single edge between i->j and i<->j. For toDirected, i is the tail.
struct MarkChange {
    enum class Direction { toBidirected, toDirected };
    Vertex i;
    Vertex j;
    Direction direction;
    bool operator==(const MarkChange&) const = default;
    auto operator<=>(const MarkChange&) const = default;
};

/// Every non-adjacent pair is m-separable (checked through an*({i,j})).
bool isMaximal(const MixedGraph& g);
bool isMaximalAncestral(const MixedGraph& g);

/// Adds i<->j for every non-adjacent pair with no separating set, to a
/// fixpoint. Throws InvariantViolation if such a pair is ancestrally related.
MixedGraph maximalClosure(const MixedGraph& g);

/// Same skeleton, same v-structures, and agreeing collider status on every
/// path that is discriminating in both graphs. Inputs must be maximal ancestral.
bool markovEquivalent(const MixedGraph& g, const MixedGraph& h);

bool isLegitimate(const MixedGraph& g, const MarkChange& c);
/// Ordered by (i, j, direction).
std::vector<MarkChange> legitimateMarkChanges(const MixedGraph& g);
/// Throws std::invalid_argument for illegitimate changes.
MixedGraph applyMarkChange(const MixedGraph& g, const MarkChange& c);

/// Closure of g under legitimate mark changes (breadth first). The vertex
/// cap defaults to 10.
std::vector<MixedGraph> enumerateMEC(const MixedGraph& g, int vertexCap = 10);

/// Every directed maximal ancestral graph on n <= 4 vertices, exactly once.
void forEachDMAG(int n, const std::function<void(const MixedGraph&)>& visit);
std::vector<MixedGraph> enumerateDMAGs(int n);

}  // namespace gspo
