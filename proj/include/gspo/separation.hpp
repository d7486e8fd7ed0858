#pragma once

#include "gspo/graph.hpp"

namespace gspo {

/// "Is i m-connected to j given S?" with i != j and S excluding both.
struct SeparationQuery {
    Vertex i;
    Vertex j;
    VertexSet conditioning;
};

/// m-connection by reachability over (vertex, arrived-with-arrowhead) states.
/// On graphs without bidirected edges this is d-connection.
bool mConnected(const MixedGraph& g, const SeparationQuery& q);

inline bool mSeparated(const MixedGraph& g, const SeparationQuery& q) { return !mConnected(g, q); }

struct AncestralSeparation {
    bool separable;
    VertexSet witness;  // an*_g({i, j})
};

/// Tests the single candidate S = an*_g({i,j}) for a non-adjacent pair;
/// for ancestral graphs this decides whether any separating set exists.
AncestralSeparation separableByAncestors(const MixedGraph& g, Vertex i, Vertex j);

/// Enumerates simple paths; graphs above 8 vertices throw Unsupported.
bool bruteForceMConnected(const MixedGraph& g, const SeparationQuery& q);

}  // namespace gspo
