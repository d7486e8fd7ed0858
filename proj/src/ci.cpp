#include "gspo/ci.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "gspo/errors.hpp"
#include "gspo/separation.hpp"

namespace gspo {

GraphOracle::GraphOracle(MixedGraph gStar) : graph_(std::move(gStar)) {}

bool GraphOracle::independent(Vertex i, Vertex j, VertexSet s) const {
    return mSeparated(graph_, {i, j, s});
}

double partialCorrelation(const Eigen::MatrixXd& cov, Vertex i, Vertex j, VertexSet s) {
    if (i == j || s.contains(i) || s.contains(j))
        throw std::invalid_argument("partialCorrelation needs distinct i, j outside S");
    std::vector<Vertex> idx{i, j};
    for (Vertex v : s) idx.push_back(v);
    const auto m = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXd block(m, m);
    for (Eigen::Index a = 0; a < m; ++a)
        for (Eigen::Index b = 0; b < m; ++b) block(a, b) = cov(idx[a], idx[b]);

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(block);
    const auto pivots = lu.matrixLU().diagonal().cwiseAbs();
    if (pivots.minCoeff() < 1e-12)
        throw DegenerateInput("singular covariance block over " + (s | VertexSet{i, j}).toString(),
                              s | VertexSet{i, j});
    const Eigen::MatrixXd precision = lu.inverse();
    const double r = -precision(0, 1) / std::sqrt(precision(0, 0) * precision(1, 1));
    return std::clamp(r, -1.0, 1.0);
}

double normalQuantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normalQuantile needs p in (0,1)");
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double pLow = 0.02425;
    double x;
    if (p < pLow) {
        const double q = std::sqrt(-2 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (p <= 1 - pLow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        const double q = std::sqrt(-2 * std::log1p(-p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    // Halley refinement against the erfc-based CDF.
    const double e = 0.5 * std::erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2 * std::numbers::pi) * std::exp(x * x / 2);
    return x - u / (1 + x * u / 2);
}

Eigen::MatrixXd sampleCovariance(const Eigen::MatrixXd& data) {
    if (data.rows() == 0) throw std::invalid_argument("sampleCovariance of empty data");
    const Eigen::RowVectorXd mean = data.colwise().mean();
    const Eigen::MatrixXd centered = data.rowwise() - mean;
    return (centered.transpose() * centered) / static_cast<double>(data.rows());
}

GaussianCITester::GaussianCITester(Eigen::MatrixXd covariance, long sampleCount, double alpha)
    : cov_(std::move(covariance)), n_(sampleCount), alpha_(alpha) {
    if (cov_.rows() != cov_.cols()) throw std::invalid_argument("covariance must be square");
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
    threshold_ = normalQuantile(1.0 - alpha / 2.0);
}

GaussianCITester GaussianCITester::fromData(const Eigen::MatrixXd& data, double alpha) {
    return {sampleCovariance(data), static_cast<long>(data.rows()), alpha};
}

double GaussianCITester::statistic(Vertex i, Vertex j, VertexSet s) const {
    const long dof = n_ - s.size() - 3;
    if (dof < 1)
        throw std::invalid_argument("Fisher-z needs n - |S| - 3 >= 1 (n=" + std::to_string(n_) +
                                    ", |S|=" + std::to_string(s.size()) + ")");
    constexpr double bound = 1.0 - 1e-10;
    const double r = std::clamp(partialCorrelation(cov_, i, j, s), -bound, bound);
    const double z = 0.5 * std::log((1 + r) / (1 - r));
    return std::sqrt(static_cast<double>(dof)) * std::abs(z);
}

bool GaussianCITester::independent(Vertex i, Vertex j, VertexSet s) const {
    return statistic(i, j, s) <= threshold_;
}

PartialCorrelationOracle::PartialCorrelationOracle(Eigen::MatrixXd covariance, double tolerance)
    : cov_(std::move(covariance)), tol_(tolerance) {}

bool PartialCorrelationOracle::independent(Vertex i, Vertex j, VertexSet s) const {
    return std::abs(partialCorrelation(cov_, i, j, s)) <= tol_;
}

void writeCIRecords(std::ostream& out, const std::vector<CIRecord>& records) {
    for (const auto& r : records) {
        out << r.i << ' ' << r.j << " |";
        for (Vertex v : r.s) out << ' ' << v;
        out << " : " << (r.independent ? 1 : 0) << '\n';
    }
}

std::vector<CIRecord> readCIRecords(std::istream& in) {
    std::vector<CIRecord> out;
    std::string line;
    int lineNo = 0;
    while (std::getline(in, line)) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto bar = line.find('|');
        const auto colon = line.rfind(':');
        if (bar == std::string::npos || colon == std::string::npos || colon < bar)
            throw std::invalid_argument("malformed CI record on line " + std::to_string(lineNo));
        CIRecord rec{};
        std::istringstream head(line.substr(0, bar));
        if (!(head >> rec.i >> rec.j))
            throw std::invalid_argument("malformed CI pair on line " + std::to_string(lineNo));
        std::istringstream cond(line.substr(bar + 1, colon - bar - 1));
        for (Vertex v; cond >> v;) rec.s.insert(v);
        std::istringstream verdict(line.substr(colon + 1));
        int bit = -1;
        verdict >> bit;
        if (bit != 0 && bit != 1)
            throw std::invalid_argument("CI verdict must be 0 or 1 on line " + std::to_string(lineNo));
        rec.independent = bit == 1;
        out.push_back(rec);
    }
    return out;
}

RecordedOracle::RecordedOracle(int numVariables, const std::vector<CIRecord>& records)
    : n_(numVariables) {
    for (const auto& r : records)
        table_[{std::min(r.i, r.j), std::max(r.i, r.j), r.s.bits()}] = r.independent;
}

bool RecordedOracle::independent(Vertex i, Vertex j, VertexSet s) const {
    auto it = table_.find({std::min(i, j), std::max(i, j), s.bits()});
    if (it == table_.end())
        throw std::out_of_range("no recorded CI answer for " + std::to_string(i) + " " +
                                std::to_string(j) + " | " + s.toString());
    return it->second;
}

bool CachedOracle::independent(Vertex i, Vertex j, VertexSet s) const {
    queries_.fetch_add(1, std::memory_order_relaxed);
    const detail::CIKey key{std::min(i, j), std::max(i, j), s.bits()};
    {
        std::shared_lock lock(mutex_);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
    }
    const bool answer = inner_.independent(key.lo, key.hi, s);
    innerCalls_.fetch_add(1, std::memory_order_relaxed);
    std::unique_lock lock(mutex_);
    return cache_.try_emplace(key, answer).first->second;
}

CachedOracle::Stats CachedOracle::stats() const {
    std::shared_lock lock(mutex_);
    return {queries_.load(), innerCalls_.load(), cache_.size()};
}

std::vector<CIRecord> CachedOracle::records() const {
    std::vector<CIRecord> out;
    {
        std::shared_lock lock(mutex_);
        for (const auto& [k, v] : cache_) out.push_back({k.lo, k.hi, VertexSet(k.s), v});
    }
    std::sort(out.begin(), out.end(), [](const CIRecord& a, const CIRecord& b) {
        return std::make_tuple(a.i, a.j, a.s.bits()) < std::make_tuple(b.i, b.j, b.s.bits());
    });
    return out;
}

}  // namespace gspo
