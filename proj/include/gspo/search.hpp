#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gspo/ci.hpp"
#include "gspo/graph.hpp"
#include "gspo/poset.hpp"

namespace gspo {

enum class Initialization { emptyPoset, minDegree, givenPoset };

Initialization parseInitialization(const std::string& name);
std::string toString(Initialization init);

struct SearchConfig {
    /// Moves along a weakly-decreasing path before strict improvement is required.
    int depth = 4;
    int restarts = 5;
    Initialization initialization = Initialization::emptyPoset;
    std::optional<Poset> givenPoset;
    std::uint64_t rngSeed = 0;
    /// Safety cap on G_pi evaluations per search.
    std::optional<long> maxSteps;
    /// Depth cap for the Hasse-diagram search; unbounded when empty.
    std::optional<int> hasseDepth;

    void validate() const;
};

struct TraceStep {
    int step;
    Poset poset;
    int edges;
    std::size_t queries;
};

struct SearchTrace {
    /// steps[0] is the start poset; each later entry is an accepted move.
    std::vector<TraceStep> steps;
    std::size_t ciQueries = 0;  // distinct CI tests issued
    std::size_t evaluations = 0;  // G_pi lookups, memo hits included
    Poset finalPoset;
    MixedGraph finalGraph;
};

struct SearchResult {
    MixedGraph graph;
    SearchTrace trace;
};

/// Thrown when maxSteps is exceeded; carries the trace so far.
class SearchAborted : public std::runtime_error {
public:
    SearchAborted(const std::string& what, SearchTrace trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}
    const SearchTrace& trace() const { return trace_; }

private:
    SearchTrace trace_;
};

/// Greedy DFS over the Hasse diagram of posets (one relation added or
/// removed per move), following weakly-decreasing |G_pi| paths and
/// accepting the first strictly sparser poset.
SearchResult gspoHasse(const CIOracle& oracle, const Poset& start, const SearchConfig& cfg);

/// GSPo: neighbors of G_pi are G_tau with tau = po(G') for every legitimate
/// mark change G' of G_pi; depth-limited DFS along weakly-decreasing paths.
SearchResult gspo(const CIOracle& oracle, const Poset& start, const SearchConfig& cfg);

Poset initEmpty(int n);
/// Minimum-degree elimination on the moral-style dependence graph
/// (i - j iff dependent given everything else), ties to the smallest index,
/// fill-in among the eliminated vertex's neighbors. Earlier-eliminated
/// vertices come later in the returned total order.
Poset initMinDegree(const CIOracle& oracle, int n);
/// Start poset selected by cfg.initialization.
Poset initialPoset(const CIOracle& oracle, const SearchConfig& cfg);
/// Start poset for restart `index`: the initial poset for index 0, otherwise
/// that poset after k random Hasse moves from the (seed, index) stream.
Poset restartStart(const CIOracle& oracle, const SearchConfig& cfg, int index);

struct RestartResult {
    MixedGraph best;
    int bestIndex = 0;
    std::vector<SearchTrace> traces;
};

/// Runs gspo from cfg.restarts start posets (in parallel); returns the
/// sparsest result, ties going to the lowest restart index.
RestartResult runRestarts(const CIOracle& oracle, const SearchConfig& cfg);

namespace serial {
RestartResult runRestarts(const CIOracle& oracle, const SearchConfig& cfg);
}  // namespace serial

/// One JSON-lines record per trace step: {step, poset, edges, queries}.
void writeTraceJsonl(std::ostream& out, const SearchTrace& trace);

}  // namespace gspo
