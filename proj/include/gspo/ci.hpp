#pragma once

#include <atomic>
#include <cstddef>
#include <iosfwd>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "gspo/graph.hpp"

namespace gspo {

/// Answers "is X_i independent of X_j given X_S?". Implementations are
/// deterministic, symmetric in (i, j) and safe to query concurrently.
class CIOracle {
public:
    virtual ~CIOracle() = default;
    virtual int numVariables() const = 0;
    virtual bool independent(Vertex i, Vertex j, VertexSet s) const = 0;
};

/// I(P) = I(G*): independence is m-separation in the stored graph.
class GraphOracle final : public CIOracle {
public:
    explicit GraphOracle(MixedGraph gStar);
    int numVariables() const override { return graph_.numVertices(); }
    bool independent(Vertex i, Vertex j, VertexSet s) const override;
    const MixedGraph& graph() const { return graph_; }

private:
    MixedGraph graph_;
};

inline GraphOracle graphOracle(MixedGraph gStar) { return GraphOracle(std::move(gStar)); }

/// rho(i,j | S) from the inverse of the covariance block over {i,j} u S.
/// Throws DegenerateInput when an elimination pivot falls below 1e-12.
double partialCorrelation(const Eigen::MatrixXd& cov, Vertex i, Vertex j, VertexSet s);

/// Standard normal quantile: rational approximation plus one Halley step.
double normalQuantile(double p);

/// Covariance with the 1/n convention; rows are samples.
Eigen::MatrixXd sampleCovariance(const Eigen::MatrixXd& data);

/// Fisher-z partial-correlation test.
class GaussianCITester final : public CIOracle {
public:
    GaussianCITester(Eigen::MatrixXd covariance, long sampleCount, double alpha);
    static GaussianCITester fromData(const Eigen::MatrixXd& data, double alpha);

    int numVariables() const override { return static_cast<int>(cov_.rows()); }
    bool independent(Vertex i, Vertex j, VertexSet s) const override;
    /// sqrt(n - |S| - 3) * |atanh(r)|, r clamped to +-(1 - 1e-10).
    double statistic(Vertex i, Vertex j, VertexSet s) const;
    double threshold() const { return threshold_; }
    double alpha() const { return alpha_; }
    long sampleCount() const { return n_; }
    const Eigen::MatrixXd& covariance() const { return cov_; }

private:
    Eigen::MatrixXd cov_;
    long n_;
    double alpha_;
    double threshold_;
};

inline bool fisherZIndependent(const GaussianCITester& t, Vertex i, Vertex j, VertexSet s) {
    return t.independent(i, j, s);
}

/// Population-level oracle: independent iff |rho| <= tolerance.
class PartialCorrelationOracle final : public CIOracle {
public:
    explicit PartialCorrelationOracle(Eigen::MatrixXd covariance, double tolerance = 1e-9);
    int numVariables() const override { return static_cast<int>(cov_.rows()); }
    bool independent(Vertex i, Vertex j, VertexSet s) const override;

private:
    Eigen::MatrixXd cov_;
    double tol_;
};

/// One line of a CI dump: "i j | s1 s2 ... : 0/1" with 0-based indices,
/// 1 meaning independent.
struct CIRecord {
    Vertex i;
    Vertex j;
    VertexSet s;
    bool independent;
    bool operator==(const CIRecord&) const = default;
};

void writeCIRecords(std::ostream& out, const std::vector<CIRecord>& records);
std::vector<CIRecord> readCIRecords(std::istream& in);

namespace detail {
struct CIKey {
    Vertex lo;
    Vertex hi;
    std::uint64_t s;
    bool operator==(const CIKey&) const = default;
};
struct CIKeyHash {
    std::size_t operator()(const CIKey& k) const {
        std::size_t h = std::hash<std::uint64_t>{}(k.s);
        h ^= std::hash<long>{}(static_cast<long>(k.lo) * 64 + k.hi) + 0x9e3779b97f4a7c15ULL +
             (h << 6) + (h >> 2);
        return h;
    }
};
}  // namespace detail

/// Replays a recorded set of CI answers; unknown queries throw std::out_of_range.
class RecordedOracle final : public CIOracle {
public:
    RecordedOracle(int numVariables, const std::vector<CIRecord>& records);
    int numVariables() const override { return n_; }
    bool independent(Vertex i, Vertex j, VertexSet s) const override;

private:
    int n_;
    std::unordered_map<detail::CIKey, bool, detail::CIKeyHash> table_;
};

/// Memoizes an inner oracle on (min(i,j), max(i,j), S). The inner oracle
/// must outlive the cache. Concurrent lookups are safe; a racing miss may
/// call the inner oracle twice, with identical results.
class CachedOracle final : public CIOracle {
public:
    explicit CachedOracle(const CIOracle& inner) : inner_(inner) {}

    int numVariables() const override { return inner_.numVariables(); }
    bool independent(Vertex i, Vertex j, VertexSet s) const override;

    struct Stats {
        std::size_t queries = 0;
        std::size_t innerCalls = 0;
        std::size_t distinctKeys = 0;
    };
    Stats stats() const;
    /// Cached answers sorted by (i, j, S).
    std::vector<CIRecord> records() const;

private:
    const CIOracle& inner_;
    mutable std::shared_mutex mutex_;
    mutable std::unordered_map<detail::CIKey, bool, detail::CIKeyHash> cache_;
    mutable std::atomic<std::size_t> queries_{0};
    mutable std::atomic<std::size_t> innerCalls_{0};
};

}  // namespace gspo
