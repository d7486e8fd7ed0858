#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gspo/ci.hpp"
#include "gspo/graph.hpp"
#include "gspo/poset.hpp"

namespace gspo {

/// AG(pi, P): for every pair dependent given pre*_pi({i,j}), i->j when
/// i <= j in pi, i<->j when incomparable.
MixedGraph constructAG(const Poset& p, const CIOracle& oracle);

namespace serial {
/// Single-threaded reference for constructAG; results must match exactly.
MixedGraph constructAG(const Poset& p, const CIOracle& oracle);
}  // namespace serial

/// G_pi = closure(AG(po(AG(pi, P)), P)).
MixedGraph constructGPi(const Poset& p, const CIOracle& oracle);

/// Pairwise check: every non-adjacent pair independent given an*({i,j}).
bool isIMAP(const MixedGraph& g, const CIOracle& oracle);

/// First non-adjacent pair (lexicographic) failing the IMAP check, if any.
std::optional<Edge> imapWitness(const MixedGraph& g, const CIOracle& oracle);

/// No single edge deletion leaves a graph that is both maximal and an IMAP.
/// Throws std::invalid_argument if g is not an IMAP.
bool isMinimalIMAP(const MixedGraph& g, const CIOracle& oracle);

struct FaithfulnessViolation {
    Vertex i;
    Vertex j;
    VertexSet s;
    /// The edge, triple <i,k,j>, or discriminating path that demanded dependence.
    std::vector<Vertex> context;
};

struct FaithfulnessReport {
    std::vector<FaithfulnessViolation> adjacencyViolations;
    std::vector<FaithfulnessViolation> orientationViolations;
    std::vector<FaithfulnessViolation> discriminatingViolations;
    bool holds() const {
        return adjacencyViolations.empty() && orientationViolations.empty() &&
               discriminatingViolations.empty();
    }
};

/// Exhaustive check of adjacency, orientation and discriminating
/// faithfulness over all conditioning sets. Throws Unsupported above `vertexCap`.
FaithfulnessReport checkRestrictedFaithfulness(const MixedGraph& gStar, const CIOracle& oracle,
                                               int vertexCap = 8);

}  // namespace gspo
