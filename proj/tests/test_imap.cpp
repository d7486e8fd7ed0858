#include <doctest.h>

#include "gspo/ci.hpp"
#include "gspo/equivalence.hpp"
#include "gspo/errors.hpp"
#include "gspo/imap.hpp"
#include "gspo/parallel.hpp"
#include "gspo/rng.hpp"
#include "gspo/separation.hpp"
#include "gspo/simulate.hpp"
#include "gspo/verify.hpp"
#include "helpers.hpp"

using namespace gspo;
using fixture::graph;
using fixture::poset;
using fixture::set;

namespace {

class AlwaysIndependent final : public CIOracle {
public:
    explicit AlwaysIndependent(int n) : n_(n) {}
    int numVariables() const override { return n_; }
    bool independent(Vertex, Vertex, VertexSet) const override { return true; }

private:
    int n_;
};

// Unit-weight SEM on the given DAG except for the listed signed weights.
Eigen::MatrixXd semCovariance(const MixedGraph& dag, std::vector<std::tuple<int, int, double>> w) {
    WeightedDAG sem{dag, Eigen::MatrixXd::Zero(dag.numVertices(), dag.numVertices())};
    for (const auto& [i, j] : dag.directedEdges()) sem.weights(i, j) = 1.0;
    for (const auto& [i, j, v] : w) sem.weights(i - 1, j - 1) = v;
    return populationCovariance(sem);
}

}  // namespace

TEST_CASE("constructAG: first worked example") {
    const auto o = graphOracle(fixture::fig2a());
    const auto ag = constructAG(fixture::example1Poset(), o);
    CHECK(ag == fixture::fig2b());
    CHECK_FALSE(ag.isAdjacent(0, 3));
    CHECK(serial::constructAG(fixture::example1Poset(), o) == ag);
}

TEST_CASE("constructAG: empty poset and empty oracle") {
    const auto ag = constructAG(Poset(4), graphOracle(fixture::fig2a()));
    CHECK(ag == graph(4, {}, {{1, 2}, {1, 3}, {2, 3}, {2, 4}, {3, 4}}));
    CHECK(constructAG(fixture::example1Poset(), graphOracle(MixedGraph(4))) == MixedGraph(4));
    CHECK_THROWS_AS(constructAG(Poset(3), graphOracle(MixedGraph(4))), std::invalid_argument);
}

TEST_CASE("constructGPi: second worked example") {
    const auto o = graphOracle(fixture::fig3a());
    const auto inner = constructAG(posetOfGraph(constructAG(fixture::example2Poset(), o)), o);
    CHECK(inner == fixture::fig3bInner());
    const auto gpi = constructGPi(fixture::example2Poset(), o);
    CHECK(gpi == fixture::fig3bInner().withBidirected(1, 3));
    CHECK(isMinimalIMAP(gpi, o));
}

TEST_CASE("constructGPi: fixed points and trivial oracle") {
    for (const auto& g : {fixture::fig2a(), fixture::fig3a()}) {
        const auto o = graphOracle(g);
        CHECK(constructGPi(posetOfGraph(g), o) == g);
    }
    const auto empty = graphOracle(MixedGraph(4));
    for (const auto& p : enumeratePosets(4)) CHECK(constructGPi(p, empty) == MixedGraph(4));
}

TEST_CASE("constructAG on a total order is a DAG") {
    Rng rng = makeRng(41, "imap-test");
    for (int t = 0; t < 100; ++t) {
        const MixedGraph g = randomSmallDmag(6, 3, rng);
        std::vector<Vertex> order{0, 1, 2, 3, 4, 5};
        std::shuffle(order.begin(), order.end(), rng);
        const auto ag = constructAG(Poset::totalOrder(order), graphOracle(g));
        CHECK(ag.bidirectedEdges().empty());
        CHECK(isAncestral(ag));
    }
}

TEST_CASE("parallel and serial constructAG agree") {
    setWorkerThreads(4);
    Rng rng = makeRng(42, "imap-test");
    for (int t = 0; t < 20; ++t) {
        const MixedGraph g = randomDmag(14, 3, 3.0, rng);
        const auto o = graphOracle(g);
        const Poset pi = randomPoset(14, rng);
        CHECK(constructAG(pi, o) == serial::constructAG(pi, o));
    }
    setWorkerThreads(0);
}

TEST_CASE("isIMAP and witness") {
    const auto o = graphOracle(fixture::fig2a());
    CHECK_FALSE(isIMAP(fixture::fig2b(), o));
    const auto w = imapWitness(fixture::fig2b(), o);
    REQUIRE(w.has_value());
    CHECK(*w == Edge{2, 3});
    CHECK(isIMAP(fixture::fig2a(), o));
    const auto complete = graph(4, {{1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4}});
    CHECK(isIMAP(complete, o));
    CHECK(isIMAP(complete, AlwaysIndependent(4)));
}

TEST_CASE("isMinimalIMAP") {
    const auto o = graphOracle(fixture::fig2a());
    CHECK(isMinimalIMAP(fixture::fig2a(), o));
    // Adding 1 -> 4 keeps an IMAP but the edge is removable.
    CHECK_FALSE(isMinimalIMAP(fixture::fig2a().withDirected(0, 3), o));
    CHECK(isMinimalIMAP(MixedGraph(3), graphOracle(MixedGraph(3))));
    CHECK_THROWS_AS(isMinimalIMAP(fixture::fig2b(), o), std::invalid_argument);
}

TEST_CASE("G_pi is a maximal ancestral minimal IMAP on random inputs") {
    VerifyOptions opts;
    opts.nodes = 7;
    opts.graphs = 200;
    opts.seed = 43;
    const auto r = verifyMinimalImap(opts);
    CHECK(r.ok());
    if (!r.ok()) MESSAGE(r.toJson().dump());
}

TEST_CASE("G_po(H) = H on the MEC and po(G_pi) = po(AG(pi))") {
    VerifyOptions opts;
    opts.nodes = 6;
    opts.graphs = 30;
    opts.posets = 200;
    opts.seed = 44;
    const auto r = verifyMecFixedPoint(opts);
    CHECK(r.ok());
    if (!r.ok()) MESSAGE(r.toJson().dump());
}

TEST_CASE("IMAPs of one oracle: skeleton containment and collider agreement") {
    Rng rng = makeRng(45, "imap-test");
    for (int t = 0; t < 40; ++t) {
        const MixedGraph gStar = randomSmallDmag(5, 3, rng);
        const auto o = graphOracle(gStar);
        const auto skelStar = skeletonAndVStructures(gStar);
        for (int k = 0; k < 10; ++k) {
            const MixedGraph h = constructGPi(randomPoset(5, rng), o);
            REQUIRE(isIMAP(h, o));
            for (const auto& [i, j] : skelStar.skeleton) CHECK(h.isAdjacent(i, j));
            // A v-structure of G* unshielded in H stays a v-structure in H.
            for (const auto& v : skelStar.vStructures)
                if (!h.isAdjacent(v.i, v.j)) CHECK(isCollider(h, v.i, v.k, v.j));
        }
    }
}

TEST_CASE("restricted faithfulness: graph oracle holds") {
    Rng rng = makeRng(46, "imap-test");
    for (int t = 0; t < 20; ++t) {
        const MixedGraph g = randomSmallDmag(5, 2, rng);
        CHECK(checkRestrictedFaithfulness(g, graphOracle(g)).holds());
    }
    CHECK_THROWS_AS(checkRestrictedFaithfulness(MixedGraph(9), graphOracle(MixedGraph(9))),
                    Unsupported);
}

TEST_CASE("restricted faithfulness: always-independent oracle") {
    const auto rep = checkRestrictedFaithfulness(graph(2, {{1, 2}}), AlwaysIndependent(2));
    CHECK_FALSE(rep.holds());
    REQUIRE(rep.adjacencyViolations.size() == 1);
    CHECK(rep.adjacencyViolations[0].i == 0);
    CHECK(rep.adjacencyViolations[0].j == 1);
}

TEST_CASE("restricted but not faithful: path cancellation") {
    // X6 = X3 - X5 + e6 with X3 and X5 both driven by X1 through chains.
    const auto g = graph(6, {{1, 2}, {2, 3}, {1, 4}, {4, 5}, {3, 6}, {5, 6}});
    const PartialCorrelationOracle o(semCovariance(g, {{5, 6, -1.0}}));
    CHECK(o.independent(0, 5, {}));
    CHECK(mConnected(g, {0, 5, {}}));
    const auto rep = checkRestrictedFaithfulness(g, o);
    CHECK(rep.holds());

    // With 1 adjacent to both parents of 6, the triple 1 - 3 - 6 is
    // unshielded and the same cancellation breaks orientation faithfulness.
    const auto short_ = graph(6, {{1, 3}, {1, 5}, {3, 6}, {5, 6}});
    const PartialCorrelationOracle o2(semCovariance(short_, {{5, 6, -1.0}}));
    const auto rep2 = checkRestrictedFaithfulness(short_, o2);
    CHECK(rep2.adjacencyViolations.empty());
    CHECK_FALSE(rep2.orientationViolations.empty());
}
