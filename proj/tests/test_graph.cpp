#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include "gspo/errors.hpp"
#include "gspo/graph.hpp"
#include "gspo/graph_io.hpp"
#include "gspo/rng.hpp"
#include "gspo/verify.hpp"
#include "helpers.hpp"

using namespace gspo;
using fixture::graph;
using fixture::set;

namespace {

// Direct transcription of the definition over all simple paths.
std::set<std::vector<Vertex>> bruteDiscriminating(const MixedGraph& g) {
    std::set<std::vector<Vertex>> out;
    const int n = g.numVertices();
    std::vector<Vertex> path;
    std::function<void(VertexSet)> extend = [&](VertexSet used) {
        if (path.size() >= 4) {
            const Vertex i = path.front();
            const Vertex j = path.back();
            bool ok = !g.isAdjacent(i, j);
            for (std::size_t m = 1; ok && m + 2 < path.size(); ++m) {
                const Vertex c = path[m];
                ok = isCollider(g, path[m - 1], c, path[m + 1]) && g.hasDirected(c, j);
            }
            if (ok) out.insert(path);
        }
        for (Vertex v : g.adjacent(path.back()) - used) {
            path.push_back(v);
            extend(used | VertexSet::single(v));
            path.pop_back();
        }
    };
    for (Vertex s = 0; s < n; ++s) {
        path = {s};
        extend(VertexSet::single(s));
    }
    return out;
}

}  // namespace

TEST_CASE("relations on the four-vertex fixture") {
    const auto r = relations(fixture::fig2a(), 2);
    CHECK(r.parents == set({1, 2}));
    CHECK(r.spouses.empty());
    CHECK(r.ancestors == set({1, 2, 3, 4}));
}

TEST_CASE("relations on trivial graphs") {
    const auto empty = relations(MixedGraph(3), 1);
    CHECK(empty.parents.empty());
    CHECK(empty.spouses.empty());
    CHECK(empty.ancestors == VertexSet::single(1));

    const auto bi = relations(graph(2, {}, {{1, 2}}), 1);
    CHECK(bi.parents.empty());
    CHECK(bi.spouses == set({1}));
    CHECK(bi.ancestors == set({2}));

    CHECK_THROWS_AS(relations(MixedGraph(3), 3), std::invalid_argument);
    CHECK_THROWS_AS(relations(MixedGraph(3), -1), std::invalid_argument);
}

TEST_CASE("construction rejects double edges and self-loops") {
    CHECK_THROWS_AS(graph(2, {{1, 2}}, {{1, 2}}), std::invalid_argument);
    CHECK_THROWS_AS(graph(2, {{1, 2}, {2, 1}}), std::invalid_argument);
    CHECK_THROWS_AS(graph(2, {{1, 1}}), std::invalid_argument);
    CHECK(graph(3, {{1, 2}}, {{2, 3}}).edgeCount() == 2);
}

TEST_CASE("isAncestral") {
    CHECK_FALSE(isAncestral(graph(3, {{1, 2}, {2, 3}}, {{1, 3}})));
    CHECK(isAncestral(fixture::fig3a()));
    CHECK(isAncestral(fixture::fig2a()));
    CHECK(isAncestral(fixture::fig2b()));
    // A directed 2-cycle cannot be built, but a 3-cycle can.
    CHECK_FALSE(isAncestral(graph(3, {{1, 2}, {2, 3}, {3, 1}})));
}

TEST_CASE("skeleton and v-structures") {
    const auto info = skeletonAndVStructures(fixture::fig2a());
    CHECK(info.skeleton == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}, {1, 3}});
    REQUIRE(info.vStructures.size() == 1);
    CHECK(info.vStructures[0] == VStructure{0, 1, 3});

    CHECK(skeletonAndVStructures(graph(3, {{1, 2}, {2, 3}})).vStructures.empty());
    const auto bi = skeletonAndVStructures(graph(3, {}, {{1, 2}, {3, 2}}));
    REQUIRE(bi.vStructures.size() == 1);
    CHECK(bi.vStructures[0] == VStructure{0, 1, 2});
}

TEST_CASE("discriminating paths: minimal instance") {
    // 1 -> c, c <-> k, c -> j, k -> j with labels c=2, k=3, j=4
    const auto g = graph(4, {{1, 2}, {2, 4}, {3, 4}}, {{2, 3}});
    const auto paths = discriminatingPaths(g);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].vertices == std::vector<Vertex>{0, 1, 2, 3});
    CHECK(paths[0].k() == 2);
    CHECK(paths[0].j() == 3);
    CHECK(hasDiscriminatingPath(g, 2, 3));
    CHECK_FALSE(hasDiscriminatingPath(g, 1, 3));
    CHECK(isDiscriminatingPath(g, {0, 1, 2, 3}));
    CHECK_FALSE(isDiscriminatingPath(g, {0, 1, 3}));
}

TEST_CASE("discriminating paths: small graphs and the four-vertex fixture") {
    // <4, 2, 1, 3>: 2 is a collider (4 -> 2 <- 1) and a parent of 3, 4 and 3 non-adjacent
    const auto fig = discriminatingPaths(fixture::fig2a());
    REQUIRE(fig.size() == 1);
    CHECK(fig[0].vertices == std::vector<Vertex>{3, 1, 0, 2});
    CHECK(discriminatingPaths(graph(3, {{1, 2}, {3, 2}}, {{1, 3}})).empty());
    CHECK(discriminatingPaths(MixedGraph(0)).empty());
}

TEST_CASE("discriminating paths match brute force on random ancestral graphs") {
    Rng rng = makeRng(11, "graph-test");
    for (int t = 0; t < 300; ++t) {
        const int n = 4 + t % 3;
        const MixedGraph g = randomAncestralGraph(n, rng);
        const auto brute = bruteDiscriminating(g);
        const auto fast = discriminatingPaths(g);
        std::set<std::vector<Vertex>> got;
        for (const auto& p : fast) got.insert(p.vertices);
        REQUIRE_MESSAGE(got == brute, g.toString());
        for (Vertex k = 0; k < n; ++k)
            for (Vertex j = 0; j < n; ++j) {
                if (k == j) continue;
                const bool any = std::any_of(brute.begin(), brute.end(), [&](const auto& p) {
                    return p[p.size() - 2] == k && p.back() == j;
                });
                CHECK(hasDiscriminatingPath(g, k, j) == any);
            }
    }
}

TEST_CASE("discriminating path length bound") {
    CHECK_FALSE(defaultDiscriminatingLengthBound(16).has_value());
    CHECK(defaultDiscriminatingLengthBound(17) == 8);
    const auto g = graph(4, {{1, 2}, {2, 4}, {3, 4}}, {{2, 3}});
    CHECK(discriminatingPaths(g, 3).empty());
    CHECK(discriminatingPaths(g, 4).size() == 1);
}

TEST_CASE("graph properties on random ancestral graphs") {
    Rng rng = makeRng(12, "graph-test");
    for (int t = 0; t < 200; ++t) {
        const MixedGraph g = randomAncestralGraph(2 + t % 6, rng);
        const int n = g.numVertices();
        const auto skel = skeleton(g);
        for (Vertex j = 0; j < n; ++j)
            for (Vertex i : g.parents(j))
                CHECK(std::find(skel.begin(), skel.end(), Edge{std::min(i, j), std::max(i, j)}) !=
                      skel.end());
        // Deleting any edge keeps the graph ancestral.
        for (const auto& [i, j] : skel) CHECK(isAncestral(g.withoutEdge(i, j)));
        // Ancestry is a partial order.
        const auto an = ancestorTable(g);
        for (Vertex a = 0; a < n; ++a) {
            CHECK(an[a].contains(a));
            for (Vertex b : an[a]) {
                CHECK(an[b].isSubsetOf(an[a]));
                if (b != a) CHECK_FALSE(an[b].contains(a));
            }
        }
        CHECK(g.edgeCount() ==
              static_cast<int>(g.directedEdges().size() + g.bidirectedEdges().size()));
    }
}

TEST_CASE("copy-and-edit helpers leave the source untouched") {
    const auto g = fixture::fig2a();
    const auto h = g.withoutEdge(0, 1).withBidirected(0, 1);
    CHECK(g.hasDirected(0, 1));
    CHECK(h.hasBidirected(0, 1));
    CHECK(h.edgeCount() == g.edgeCount());
    CHECK(g.toString() == "{1->2, 1->3, 2->3, 4->2}");
    CHECK(fixture::fig2b().toString() == "{2->3, 1<->2, 1<->3, 2<->4}");
}

TEST_CASE("graph JSON round trip and validation") {
    using J = nlohmann::json;
    const J j = {{"nodes", J::array({"a", "b", "c"})},
                 {"directed", J::array({J::array({"a", "b"})})},
                 {"bidirected", J::array({J::array({"b", "c"})})}};
    const auto lg = graphFromJson(j);
    CHECK(lg.labels == std::vector<std::string>{"a", "b", "c"});
    CHECK(lg.graph == MixedGraph::fromEdges(3, {{0, 1}}, {{1, 2}}));
    CHECK(graphFromJson(graphToJson(lg)).graph == lg.graph);

    auto bad = j;
    bad["directed"].push_back(J::array({"a", "a"}));
    CHECK_THROWS_AS(graphFromJson(bad), std::invalid_argument);
    bad = j;
    bad["bidirected"].push_back(J::array({"a", "b"}));
    CHECK_THROWS_AS(graphFromJson(bad), std::invalid_argument);
    bad = j;
    bad["directed"].push_back(J::array({"a", "z"}));
    CHECK_THROWS_AS(graphFromJson(bad), std::invalid_argument);
    bad = j;
    bad["nodes"].push_back("a");
    CHECK_THROWS_AS(graphFromJson(bad), std::invalid_argument);
}

TEST_CASE("vertex cap") {
    CHECK(maxVertices() >= 1);
    CHECK(VertexSet::range(64).size() == 64);
    CHECK(set({1, 3}).toString() == "{1,3}");
}
