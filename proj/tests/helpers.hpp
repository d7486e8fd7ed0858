#pragma once

#include <initializer_list>
#include <utility>
#include <vector>

#include "gspo/graph.hpp"
#include "gspo/poset.hpp"

// Fixtures use 1-based vertex labels; these map them to indices.
namespace fixture {

using Pairs = std::initializer_list<std::pair<int, int>>;

inline std::vector<gspo::Edge> shift(Pairs pairs) {
    std::vector<gspo::Edge> out;
    for (auto [a, b] : pairs) out.emplace_back(a - 1, b - 1);
    return out;
}

inline gspo::MixedGraph graph(int n, Pairs directed, Pairs bidirected = {}) {
    return gspo::MixedGraph::fromEdges(n, shift(directed), shift(bidirected));
}

inline gspo::VertexSet set(std::initializer_list<int> labels) {
    gspo::VertexSet s;
    for (int l : labels) s.insert(l - 1);
    return s;
}

inline gspo::Poset poset(int n, Pairs leq) { return gspo::Poset::fromRelations(n, shift(leq)); }

inline gspo::MixedGraph fig2a() { return graph(4, {{1, 2}, {1, 3}, {2, 3}, {4, 2}}); }
inline gspo::MixedGraph fig2b() { return graph(4, {{2, 3}}, {{1, 2}, {1, 3}, {4, 2}}); }
inline gspo::MixedGraph fig3a() {
    return graph(5, {{4, 5}, {1, 2}, {3, 2}, {3, 1}, {3, 4}}, {{4, 1}});
}
inline gspo::MixedGraph fig3bInner() {
    return graph(5, {{5, 4}, {1, 2}, {3, 4}},
                 {{1, 5}, {2, 5}, {3, 5}, {1, 3}, {2, 3}, {1, 4}});
}
inline gspo::Poset example1Poset() { return poset(4, {{2, 3}, {1, 4}}); }
inline gspo::Poset example2Poset() { return poset(5, {{1, 2}, {3, 4}, {5, 4}}); }

}  // namespace fixture
