#include "gspo/poset.hpp"

#include <stdexcept>

#include "gspo/errors.hpp"

namespace gspo {

Poset::Poset(int groundSize) : n_(groundSize) {
    if (groundSize < 0 || groundSize > maxVertices())
        throw std::invalid_argument("poset ground size out of range");
    up_.resize(static_cast<std::size_t>(n_));
    down_.resize(static_cast<std::size_t>(n_));
    for (Vertex v = 0; v < n_; ++v) {
        up_[v] = VertexSet::single(v);
        down_[v] = VertexSet::single(v);
    }
}

void Poset::rebuildDown() {
    for (auto& d : down_) d = {};
    for (Vertex i = 0; i < n_; ++i)
        for (Vertex j : up_[i]) down_[j].insert(i);
}

Poset Poset::fromRelations(int groundSize, const std::vector<Edge>& lessOrEqual) {
    Poset p(groundSize);
    for (auto [i, j] : lessOrEqual) {
        if (i < 0 || j < 0 || i >= groundSize || j >= groundSize)
            throw std::invalid_argument("poset relation out of range");
        p.up_[i].insert(j);
    }
    // Warshall closure on rows.
    for (Vertex k = 0; k < groundSize; ++k)
        for (Vertex i = 0; i < groundSize; ++i)
            if (p.up_[i].contains(k)) p.up_[i] |= p.up_[k];
    p.rebuildDown();
    for (Vertex i = 0; i < groundSize; ++i)
        if ((p.up_[i] & p.down_[i]) != VertexSet::single(i))
            throw std::invalid_argument("relations are not antisymmetric");
    return p;
}

Poset Poset::totalOrder(const std::vector<Vertex>& order) {
    std::vector<Edge> rel;
    for (std::size_t a = 0; a + 1 < order.size(); ++a) rel.emplace_back(order[a], order[a + 1]);
    return fromRelations(static_cast<int>(order.size()), rel);
}

std::vector<Edge> Poset::relations() const {
    std::vector<Edge> out;
    for (Vertex i = 0; i < n_; ++i)
        for (Vertex j : up_[i])
            if (j != i) out.emplace_back(i, j);
    return out;
}

int Poset::relationCount() const {
    int c = 0;
    for (const auto& u : up_) c += u.size() - 1;
    return c;
}

std::vector<Edge> Poset::covers() const {
    std::vector<Edge> out;
    for (Vertex i = 0; i < n_; ++i)
        for (Vertex j : up_[i]) {
            if (j == i) continue;
            const VertexSet between = (up_[i] & down_[j]) - VertexSet{i, j};
            if (between.empty()) out.emplace_back(i, j);
        }
    return out;
}

bool Poset::isTotal() const { return relationCount() == n_ * (n_ - 1) / 2; }

Poset Poset::withoutRelation(Vertex i, Vertex j) const {
    Poset q = *this;
    q.up_[i].erase(j);
    q.down_[j].erase(i);
    return q;
}

Poset Poset::withRelation(Vertex i, Vertex j) const {
    Poset q = *this;
    for (Vertex a : down_[i]) q.up_[a] |= up_[j];
    q.rebuildDown();
    return q;
}

std::size_t Poset::hash() const {
    std::size_t h = std::hash<int>{}(n_);
    for (const auto& u : up_)
        h ^= std::hash<std::uint64_t>{}(u.bits()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::string Poset::toString() const {
    std::string out = "{";
    bool first = true;
    for (auto [i, j] : relations()) {
        if (!first) out += ", ";
        out += std::to_string(i + 1) + "<=" + std::to_string(j + 1);
        first = false;
    }
    return out + "}";
}

Poset posetOfGraph(const MixedGraph& g) {
    if (!isAncestral(g)) throw std::invalid_argument("posetOfGraph requires an ancestral graph");
    std::vector<Edge> rel = g.directedEdges();
    return Poset::fromRelations(g.numVertices(), rel);
}

VertexSet pre(const Poset& p, VertexSet targets) {
    VertexSet out;
    for (Vertex s : targets) out |= p.downSet(s);
    return out;
}

std::vector<Poset> hasseNeighbors(const Poset& p) {
    std::vector<Poset> out;
    for (auto [i, j] : p.covers()) out.push_back(p.withoutRelation(i, j));
    const int n = p.groundSize();
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = 0; j < n; ++j) {
            if (i == j || p.comparable(i, j)) continue;
            // Closure adds (a, b) for every a <= i, j <= b; only (i, j) may be new.
            bool onlyPair = true;
            for (Vertex a : p.downSet(i)) {
                VertexSet missing = p.upSet(j) - p.upSet(a);
                if (a == i) missing.erase(j);
                if (!missing.empty()) {
                    onlyPair = false;
                    break;
                }
            }
            if (onlyPair) out.push_back(p.withRelation(i, j));
        }
    return out;
}

namespace {

// Backtracking over strict pairs in row-major order; 0 is tried before 1 so
// the output is lexicographic in the flattened matrix.
class PosetEnumerator {
public:
    PosetEnumerator(int n, const std::function<void(const Poset&)>& visit)
        : n_(n), visit_(visit), rel_(static_cast<std::size_t>(n * n), false) {
        for (int v = 0; v < n; ++v) at(v, v) = true;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (i != j) pairs_.emplace_back(i, j);
    }

    void run() { recurse(0); }

private:
    std::vector<bool>::reference at(int i, int j) { return rel_[static_cast<std::size_t>(i * n_ + j)]; }
    bool get(int i, int j) const { return rel_[static_cast<std::size_t>(i * n_ + j)]; }

    bool decided(std::size_t upto, int a, int b) const {
        if (a == b) return true;
        const auto [ci, cj] = pairs_[upto];
        return a < ci || (a == ci && b <= cj);
    }

    // All transitivity triples through (i, j) whose entries are decided.
    bool consistent(std::size_t idx) const {
        const auto [i, j] = pairs_[idx];
        if (get(i, j) && get(j, i)) return false;
        for (int k = 0; k < n_; ++k) {
            if (k == i || k == j) continue;
            auto triple = [&](int a, int b, int c) {
                if (!decided(idx, a, b) || !decided(idx, b, c) || !decided(idx, a, c)) return true;
                return !(get(a, b) && get(b, c)) || get(a, c);
            };
            if (!triple(i, k, j) || !triple(i, j, k) || !triple(k, i, j)) return false;
        }
        return true;
    }

    void recurse(std::size_t idx) {
        if (idx == pairs_.size()) {
            std::vector<Edge> rel;
            for (auto [i, j] : pairs_)
                if (get(i, j)) rel.emplace_back(i, j);
            visit_(Poset::fromRelations(n_, rel));
            return;
        }
        const auto [i, j] = pairs_[idx];
        for (bool value : {false, true}) {
            if (value && i > j && get(j, i)) continue;
            at(i, j) = value;
            if (consistent(idx)) recurse(idx + 1);
        }
        at(i, j) = false;
    }

    int n_;
    const std::function<void(const Poset&)>& visit_;
    std::vector<bool> rel_;
    std::vector<Edge> pairs_;
};

}  // namespace

void forEachPoset(int n, const std::function<void(const Poset&)>& visit) {
    if (n < 0) throw std::invalid_argument("negative ground size");
    if (n > 6) throw Unsupported("poset enumeration supports ground sets of size <= 6");
    PosetEnumerator(n, visit).run();
}

std::vector<Poset> enumeratePosets(int n) {
    std::vector<Poset> out;
    forEachPoset(n, [&out](const Poset& p) { out.push_back(p); });
    return out;
}

nlohmann::json posetToJson(const Poset& p) {
    nlohmann::json j;
    j["n"] = p.groundSize();
    j["relations"] = nlohmann::json::array();
    for (auto [a, b] : p.relations()) j["relations"].push_back({a, b});
    return j;
}

Poset posetFromJson(const nlohmann::json& j) {
    const int n = j.at("n").get<int>();
    std::vector<Edge> rel;
    for (const auto& r : j.at("relations")) rel.emplace_back(r.at(0).get<int>(), r.at(1).get<int>());
    Poset p = Poset::fromRelations(n, rel);
    if (p.relationCount() != static_cast<int>(rel.size()))
        throw std::invalid_argument("poset JSON relations are not transitively closed");
    return p;
}

}  // namespace gspo
