// gspo: generate synthetic data, learn DMAGs, run verification suites and benchmarks.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gspo/ci.hpp"
#include "gspo/equivalence.hpp"
#include "gspo/errors.hpp"
#include "gspo/graph_io.hpp"
#include "gspo/parallel.hpp"
#include "gspo/search.hpp"
#include "gspo/simulate.hpp"
#include "gspo/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gspo;

namespace {

constexpr const char* kVersion = "1.0.0";

enum Exit { ok = 0, usage = 2, dataError = 3, verifyFailure = 4 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

class Manifest {
public:
    Manifest(std::string command, fs::path dir) : dir_(std::move(dir)) {
        j_["command"] = std::move(command);
        j_["version"] = kVersion;
        j_["inputs"] = json::array();
        j_["outputs"] = json::array();
        j_["started"] = timestamp();
    }
    json& config() { return j_["config"]; }
    void seed(std::uint64_t s) { j_["seed"] = s; }
    void input(const fs::path& p) { j_["inputs"].push_back(p.string()); }
    void output(const fs::path& p) { j_["outputs"].push_back(p.string()); }
    void write() {
        j_["finished"] = timestamp();
        writeText(dir_ / "manifest.json", j_.dump(2) + "\n");
    }
    void writeText(const fs::path& p, const std::string& text) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << text;
        if (p.filename() != "manifest.json") output(p);
    }

private:
    fs::path dir_;
    json j_;
};

fs::path prepareDir(const std::string& dir) {
    fs::path p(dir);
    fs::create_directories(p);
    return p;
}

std::vector<std::string> dagLabels(int p, int k) {
    std::vector<std::string> out;
    for (int v = 0; v < k; ++v) out.push_back("L" + std::to_string(v + 1));
    for (int v = 0; v < p; ++v) out.push_back(std::to_string(v + 1));
    return out;
}

json searchConfigJson(const SearchConfig& c) {
    return {{"depth", c.depth},
            {"restarts", c.restarts},
            {"initialization", toString(c.initialization)},
            {"rng_seed", c.rngSeed},
            {"max_steps", c.maxSteps ? json(*c.maxSteps) : json(nullptr)}};
}

// ---- generate ----------------------------------------------------------------

struct GenerateArgs {
    SimulationSpec spec;
    std::string outDir = ".";
};

int runGenerate(const GenerateArgs& a) {
    a.spec.validate();
    const fs::path dir = prepareDir(a.outDir);
    Manifest m("generate", dir);
    m.seed(a.spec.seed);
    m.config() = {{"nodes", a.spec.p},
                  {"latents", a.spec.K},
                  {"expected_neighbors", a.spec.s},
                  {"samples", a.spec.n},
                  {"weight_interval", {a.spec.weightLo, a.spec.weightHi}}};

    Rng graphRng = makeRng(a.spec.seed, "graph");
    Rng weightRng = makeRng(a.spec.seed, "weights");
    const WeightedDAG w = sampleWeightedDag(a.spec, graphRng, weightRng);
    const VertexSet observed = VertexSet::range(a.spec.totalNodes()) - VertexSet::range(a.spec.K);
    const MixedGraph dmag = latentProject(w.dag, observed);

    json dagJson = graphToJson(LabeledGraph{dagLabels(a.spec.p, a.spec.K), w.dag});
    dagJson["weights"] = json::array();
    for (const auto& [i, j] : w.dag.directedEdges())
        dagJson["weights"].push_back({dagJson["nodes"][i], dagJson["nodes"][j], w.weights(i, j)});
    m.writeText(dir / "dag.json", dagJson.dump(2) + "\n");
    m.writeText(dir / "dmag.json",
                graphToJson(LabeledGraph{defaultLabels(a.spec.p), dmag}).dump(2) + "\n");
    if (a.spec.n > 0) {
        Rng noiseRng = makeRng(a.spec.seed, "noise");
        const Eigen::MatrixXd data = observedColumns(sampleData(w, a.spec.n, noiseRng), a.spec.K);
        std::ostringstream csv;
        writeDataCsv(csv, data, defaultLabels(a.spec.p));
        m.writeText(dir / "data.csv", csv.str());
    }
    m.write();
    std::cout << "generated DMAG with " << dmag.edgeCount() << " edges ("
              << dmag.bidirectedEdges().size() << " bidirected) in " << dir.string() << "\n";
    return ok;
}

// ---- learn -------------------------------------------------------------------

struct LearnArgs {
    std::string dataPath;
    std::string graphPath;
    double alpha = 0.1;
    SearchConfig search;
    std::string init = "empty";
    std::string givenPosetPath;
    long maxSteps = 0;
    std::string outDir = ".";
};

int runLearn(LearnArgs a) {
    if (a.dataPath.empty() == a.graphPath.empty())
        throw UsageError("exactly one of --data or --true-graph is required");
    a.search.initialization = parseInitialization(a.init);
    if (a.maxSteps > 0) a.search.maxSteps = a.maxSteps;
    if (!a.givenPosetPath.empty()) {
        std::ifstream in(a.givenPosetPath);
        if (!in) throw UsageError("cannot read " + a.givenPosetPath);
        a.search.givenPoset = posetFromJson(json::parse(in));
    }
    a.search.validate();

    const fs::path dir = prepareDir(a.outDir);
    Manifest m("learn", dir);
    m.seed(a.search.rngSeed);
    m.config() = searchConfigJson(a.search);

    std::vector<std::string> labels;
    std::unique_ptr<CIOracle> inner;
    if (!a.dataPath.empty()) {
        std::ifstream in(a.dataPath);
        if (!in) throw UsageError("cannot read " + a.dataPath);
        auto [names, data] = readDataCsv(in);
        labels = std::move(names);
        m.input(a.dataPath);
        m.config()["alpha"] = a.alpha;
        m.config()["mode"] = "data";
        inner = std::make_unique<GaussianCITester>(GaussianCITester::fromData(data, a.alpha));
    } else {
        LabeledGraph g = readGraphFile(a.graphPath);
        if (!isMaximalAncestral(g.graph))
            throw std::invalid_argument("--true-graph must be a maximal ancestral graph");
        labels = g.labels;
        m.input(a.graphPath);
        m.config()["mode"] = "oracle";
        inner = std::make_unique<GraphOracle>(std::move(g.graph));
    }
    if (a.search.givenPoset && a.search.givenPoset->groundSize() != inner->numVariables())
        throw UsageError("given poset size differs from the variable count");

    const CachedOracle cache(*inner);
    const RestartResult res = runRestarts(cache, a.search);
    const SearchTrace& best = res.traces[static_cast<std::size_t>(res.bestIndex)];

    m.writeText(dir / "learned.json", graphToJson(LabeledGraph{labels, res.best}).dump(2) + "\n");
    std::ostringstream trace;
    writeTraceJsonl(trace, best);
    m.writeText(dir / "trace.jsonl", trace.str());
    json summary = {{"edges", res.best.edgeCount()},
                    {"best_restart", res.bestIndex},
                    {"ci_tests", cache.stats().innerCalls},
                    {"restarts", json::array()}};
    for (const auto& t : res.traces)
        summary["restarts"].push_back({{"edges", t.finalGraph.edgeCount()},
                                       {"moves", t.steps.size() - 1},
                                       {"evaluations", t.evaluations}});
    m.writeText(dir / "summary.json", summary.dump(2) + "\n");
    m.write();
    std::cout << "learned graph with " << res.best.edgeCount() << " edges (restart "
              << res.bestIndex << ")\n";
    return ok;
}

// ---- verify ------------------------------------------------------------------

struct VerifyArgs {
    std::string suite;
    VerifyOptions opts;
    std::string outDir = ".";
};

int runVerify(const VerifyArgs& a) {
    const auto& names = suiteNames();
    if (std::find(names.begin(), names.end(), a.suite) == names.end())
        throw UsageError("unknown suite '" + a.suite + "'");
    const fs::path dir = prepareDir(a.outDir);
    Manifest m("verify", dir);
    m.seed(a.opts.seed);
    m.config() = {{"suite", a.suite},       {"nodes", a.opts.nodes},
                  {"graphs", a.opts.graphs}, {"latents", a.opts.maxLatents},
                  {"depth", a.opts.depth},   {"restarts", a.opts.restarts},
                  {"queries", a.opts.queries}, {"posets", a.opts.posets}};
    VerifyReport report;
    try {
        report = runSuite(a.suite, a.opts);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    for (const auto& f : report.failures)
        if (!f.artifact.is_null())
            m.writeText(dir / ("counterexample_" + std::to_string(f.caseIndex) + ".json"),
                        json{{"message", f.message}, {"artifact", f.artifact}}.dump(2) + "\n");
    m.writeText(dir / "report.json", report.toJson().dump(2) + "\n");
    m.write();
    std::cout << a.suite << ": " << report.passed << "/" << report.cases << " passed ("
              << std::fixed << std::setprecision(2) << 100.0 * report.passRate() << "%)\n";
    for (const auto& f : report.failures) std::cout << "  case " << f.caseIndex << ": " << f.message << "\n";
    return report.ok() ? ok : verifyFailure;
}

// ---- benchmark ---------------------------------------------------------------

struct BenchmarkArgs {
    BenchmarkOptions opts;
    std::string init = "md";
    std::string outDir = ".";
};

int runBenchmarkCommand(BenchmarkArgs a) {
    a.opts.search.initialization = parseInitialization(a.init);
    if (a.opts.search.initialization == Initialization::givenPoset)
        throw UsageError("benchmark supports --init empty or md");
    if (a.opts.alphas.empty() || a.opts.sampleSizes.empty())
        throw UsageError("--alphas and --sample-sizes must be non-empty");
    for (double al : a.opts.alphas)
        if (!(al > 0 && al < 1)) throw UsageError("alphas must lie in (0,1)");
    const fs::path dir = prepareDir(a.outDir);
    Manifest m("benchmark", dir);
    m.seed(a.opts.spec.seed);
    m.config() = {{"nodes", a.opts.spec.p},
                  {"latents", a.opts.spec.K},
                  {"expected_neighbors", a.opts.spec.s},
                  {"alphas", a.opts.alphas},
                  {"sample_sizes", a.opts.sampleSizes},
                  {"replicates", a.opts.replicates},
                  {"search", searchConfigJson(a.opts.search)}};
    const BenchmarkResult r = runBenchmark(a.opts);
    std::ostringstream csv;
    writeResultsCsv(csv, r.rows);
    m.writeText(dir / "results.csv", csv.str());
    m.writeText(dir / "aggregates.json", aggregatesToJson(r).dump(2) + "\n");
    m.write();
    for (const auto& c : r.cells)
        std::cout << "n=" << c.n << " alpha=" << c.alpha << " runs=" << c.runs
                  << " errors=" << c.errors << " meanSHD=" << c.meanShd
                  << " medianMs=" << c.medianRuntimeMs << "\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Greedy sparsest poset search for DMAGs with latent confounders"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    int jobs = 0;
    app.add_option("--jobs", jobs, "Worker threads (0 = runtime default)")->check(CLI::NonNegativeNumber);

    GenerateArgs gen;
    auto* g = app.add_subcommand("generate", "Sample a DAG, its projected DMAG and Gaussian data");
    g->add_option("--nodes", gen.spec.p, "Observed variables p")->required();
    g->add_option("--latents", gen.spec.K, "Latent variables K")->default_val(3);
    g->add_option("--expected-neighbors", gen.spec.s, "Expected neighbors s")->default_val(3.0);
    g->add_option("--samples", gen.spec.n, "Samples n (0 = no data file)")->default_val(10000);
    g->add_option("--seed", gen.spec.seed, "Random seed")->default_val(0);
    g->add_option("--out-dir", gen.outDir, "Output directory")->default_val(".");

    LearnArgs learn;
    auto* l = app.add_subcommand("learn", "Run GSPo on data or on a true graph (oracle mode)");
    l->add_option("--data", learn.dataPath, "Data CSV with a header row");
    l->add_option("--true-graph", learn.graphPath, "Graph JSON used as a CI oracle");
    l->add_option("--alpha", learn.alpha, "Fisher-z significance level")
        ->default_val(0.1)
        ->check(CLI::Range(0.0, 1.0));
    l->add_option("--depth", learn.search.depth, "DFS depth d")->default_val(4);
    l->add_option("--restarts", learn.search.restarts, "Number of restarts")->default_val(5);
    l->add_option("--init", learn.init, "Initialization: empty, md or given")->default_val("empty");
    l->add_option("--poset", learn.givenPosetPath, "Poset JSON for --init given");
    l->add_option("--max-steps", learn.maxSteps, "Cap on G_pi evaluations per search");
    l->add_option("--seed", learn.search.rngSeed, "Random seed")->default_val(0);
    l->add_option("--out-dir", learn.outDir, "Output directory")->default_val(".");

    VerifyArgs ver;
    auto* v = app.add_subcommand("verify", "Run an exhaustive or randomized property suite");
    v->add_option("--suite", ver.suite, "Suite name")->required();
    v->add_option("--nodes", ver.opts.nodes, "Vertex count (or upper bound)")->default_val(4);
    v->add_option("--graphs", ver.opts.graphs, "Number of random graphs")->default_val(50);
    v->add_option("--latents", ver.opts.maxLatents, "Maximum latent count")->default_val(3);
    v->add_option("--depth", ver.opts.depth, "GSPo depth (conjecture)")->default_val(4);
    v->add_option("--restarts", ver.opts.restarts, "GSPo restarts (conjecture)")->default_val(5);
    v->add_option("--queries", ver.opts.queries, "Random queries (separation-oracle)")->default_val(10000);
    v->add_option("--posets", ver.opts.posets, "Random posets (mec-fixed-point)")->default_val(1000);
    v->add_option("--seed", ver.opts.seed, "Random seed")->default_val(0);
    v->add_option("--out-dir", ver.outDir, "Output directory")->default_val(".");

    BenchmarkArgs bench;
    bench.opts.alphas = logSpacedAlphas();
    auto* b = app.add_subcommand("benchmark", "Simulation sweep over alphas and sample sizes");
    b->add_option("--nodes", bench.opts.spec.p, "Observed variables p")->default_val(10);
    b->add_option("--latents", bench.opts.spec.K, "Latent variables K")->default_val(3);
    b->add_option("--expected-neighbors", bench.opts.spec.s, "Expected neighbors s")->default_val(3.0);
    b->add_option("--alphas", bench.opts.alphas, "Significance levels")->delimiter(',');
    b->add_option("--sample-sizes", bench.opts.sampleSizes, "Sample sizes")->delimiter(',')->default_val(10000);
    b->add_option("--replicates", bench.opts.replicates, "Random graphs")->default_val(100);
    b->add_option("--depth", bench.opts.search.depth, "DFS depth d")->default_val(4);
    b->add_option("--restarts", bench.opts.search.restarts, "Restarts")->default_val(5);
    b->add_option("--init", bench.init, "Initialization: empty or md")->default_val("md");
    b->add_option("--seed", bench.opts.spec.seed, "Random seed")->default_val(0);
    b->add_option("--out-dir", bench.outDir, "Output directory")->default_val(".");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        setWorkerThreads(jobs);
        if (*g) return runGenerate(gen);
        if (*l) return runLearn(learn);
        if (*v) return runVerify(ver);
        if (*b) return runBenchmarkCommand(bench);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return usage;
    } catch (const DegenerateInput& e) {
        std::cerr << "degenerate input: " << e.what() << " (variables " << e.offending().toString()
                  << ")\n";
        return dataError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return dataError;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "invalid JSON: " << e.what() << "\n";
        return dataError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return usage;
}
