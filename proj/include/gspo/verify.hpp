#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gspo/graph.hpp"
#include "gspo/poset.hpp"
#include "gspo/rng.hpp"

namespace gspo {

struct VerifyOptions {
    int nodes = 4;
    int graphs = 50;
    int maxLatents = 3;
    int depth = 4;
    int restarts = 5;
    long queries = 10000;   // separation-oracle
    int posets = 1000;      // random posets for the fixed-point half of mec-fixed-point
    std::uint64_t seed = 0;
};

struct CaseFailure {
    long caseIndex = 0;
    std::string message;
    nlohmann::json artifact;  // graph / poset / output, when relevant
};

struct VerifyReport {
    std::string suite;
    long cases = 0;
    long passed = 0;
    std::vector<CaseFailure> failures;
    nlohmann::json extra = nlohmann::json::object();

    bool ok() const { return failures.empty(); }
    double passRate() const { return cases ? static_cast<double>(passed) / cases : 1.0; }
    nlohmann::json toJson() const;
};

const std::vector<std::string>& suiteNames();
/// Throws std::invalid_argument for unknown suite names.
VerifyReport runSuite(const std::string& name, const VerifyOptions& opts);

/// min |G_pi| over all posets equals |G*|; all minimizers are equivalent to G*.
VerifyReport verifySparsestPoset(const VerifyOptions& opts);
/// Over all DMAGs on `nodes` vertices: minimum-edge IMAPs lie in M(G*), every
/// IMAP skeleton contains skel(G*).
VerifyReport verifyImapExhaustive(const VerifyOptions& opts);
/// constructGPi on random (G*, pi) is a maximal ancestral minimal IMAP.
VerifyReport verifyMinimalImap(const VerifyOptions& opts);
/// G_{po(H)} = H on M(G*) and po(G_pi) = po(AG(pi)) on random posets.
VerifyReport verifyMecFixedPoint(const VerifyOptions& opts);
/// Transformational MEC vs criterion MEC on every DMAG with `nodes` vertices.
VerifyReport verifyMecCrossValidation(const VerifyOptions& opts);
/// Oracle GSPo with restarts lands in M(G*); failures minimized into artifacts.
VerifyReport verifyConjecture(const VerifyOptions& opts);
/// mConnected vs brute force on random queries.
VerifyReport verifySeparationOracle(const VerifyOptions& opts);
/// I(G) = I(closure(G)) and separableByAncestors vs exhaustive search.
VerifyReport verifyClosure(const VerifyOptions& opts);

/// Random DMAG on p vertices, projected from a DAG with a random number of
/// latents in [0, maxLatents] and expected degree in [1, 4].
MixedGraph randomSmallDmag(int p, int maxLatents, Rng& rng);
/// Random ancestral (not necessarily maximal) graph on n vertices.
MixedGraph randomAncestralGraph(int n, Rng& rng);
Poset randomPoset(int n, Rng& rng);

}  // namespace gspo
