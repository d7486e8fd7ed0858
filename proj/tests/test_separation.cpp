#include <doctest.h>

#include "gspo/equivalence.hpp"
#include "gspo/errors.hpp"
#include "gspo/rng.hpp"
#include "gspo/separation.hpp"
#include "gspo/verify.hpp"
#include "helpers.hpp"

using namespace gspo;
using fixture::graph;
using fixture::set;

TEST_CASE("first worked example separation statements") {
    CHECK(mConnected(fixture::fig2a(), {3, 2, set({2})}));
    CHECK_FALSE(mConnected(fixture::fig2b(), {3, 2, set({2})}));
    CHECK(mSeparated(fixture::fig2a(), {0, 3, {}}));
}

TEST_CASE("trivial separation cases") {
    CHECK_FALSE(mConnected(MixedGraph(2), {0, 1, {}}));
    CHECK(mConnected(graph(2, {{1, 2}}), {0, 1, {}}));
    CHECK_FALSE(mConnected(graph(3, {{1, 2}, {2, 3}}), {0, 2, set({2})}));
    CHECK(mConnected(graph(3, {{1, 2}, {2, 3}}), {0, 2, {}}));
    // collider opened by a descendant
    const auto g = graph(4, {{1, 2}, {3, 2}, {2, 4}});
    CHECK_FALSE(mConnected(g, {0, 2, {}}));
    CHECK(mConnected(g, {0, 2, set({4})}));
    // bidirected collider
    CHECK(mConnected(graph(3, {}, {{1, 2}, {2, 3}}), {0, 2, set({2})}));
    CHECK_FALSE(mConnected(graph(3, {}, {{1, 2}, {2, 3}}), {0, 2, {}}));
}

TEST_CASE("brute force examples and cap") {
    CHECK(bruteForceMConnected(graph(2, {{1, 2}}), {0, 1, {}}));
    CHECK_FALSE(bruteForceMConnected(graph(3, {{1, 2}, {2, 3}}), {0, 2, set({2})}));
    CHECK_THROWS_AS(bruteForceMConnected(MixedGraph(9), {0, 1, {}}), Unsupported);
}

TEST_CASE("mConnected agrees with brute force and is symmetric") {
    VerifyOptions opts;
    opts.nodes = 7;
    opts.queries = 3000;
    opts.seed = 5;
    const auto report = verifySeparationOracle(opts);
    CHECK(report.ok());
    CHECK(report.cases == 3000);

    Rng rng = makeRng(6, "sep-symmetry");
    for (int t = 0; t < 300; ++t) {
        const MixedGraph g = randomAncestralGraph(5, rng);
        for (Vertex i = 0; i < 5; ++i)
            for (Vertex j = i + 1; j < 5; ++j) {
                const VertexSet s(rng() & (VertexSet::range(5) - VertexSet{i, j}).bits());
                CHECK(mConnected(g, {i, j, s}) == mConnected(g, {j, i, s}));
            }
    }
}

TEST_CASE("separableByAncestors examples") {
    const auto b3 = fixture::fig3bInner();
    const auto r = separableByAncestors(b3, 1, 3);
    CHECK_FALSE(r.separable);
    CHECK(r.witness == set({1, 3, 5}));

    const auto r2 = separableByAncestors(fixture::fig2a(), 0, 3);
    CHECK(r2.separable);
    CHECK(r2.witness.empty());

    const auto r3 = separableByAncestors(MixedGraph(4), 1, 2);
    CHECK(r3.separable);
    CHECK(r3.witness.empty());

    CHECK_THROWS_AS(separableByAncestors(fixture::fig2a(), 0, 1), std::invalid_argument);
}

TEST_CASE("closure preserves separation; ancestor sets decide separability") {
    VerifyOptions opts;
    opts.nodes = 6;
    opts.graphs = 150;
    opts.seed = 9;
    const auto report = verifyClosure(opts);
    CHECK(report.ok());
    if (!report.ok()) MESSAGE(report.toJson().dump());
}
