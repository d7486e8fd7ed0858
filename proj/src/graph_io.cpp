#include "gspo/graph_io.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace gspo {

std::vector<std::string> defaultLabels(int n) {
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) out.push_back(std::to_string(v + 1));
    return out;
}

LabeledGraph graphFromJson(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("nodes"))
        throw std::invalid_argument("graph JSON needs a \"nodes\" array");
    LabeledGraph out;
    std::unordered_map<std::string, Vertex> index;
    for (const auto& node : j.at("nodes")) {
        auto label = node.get<std::string>();
        if (!index.emplace(label, static_cast<Vertex>(out.labels.size())).second)
            throw std::invalid_argument("duplicate node label '" + label + "'");
        out.labels.push_back(std::move(label));
    }
    auto lookup = [&](const nlohmann::json& label) {
        const auto name = label.get<std::string>();
        auto it = index.find(name);
        if (it == index.end()) throw std::invalid_argument("unknown node label '" + name + "'");
        return it->second;
    };
    GraphBuilder b(static_cast<int>(out.labels.size()));
    auto edgesOf = [&](const char* key) {
        std::vector<Edge> edges;
        if (!j.contains(key)) return edges;
        for (const auto& pair : j.at(key)) {
            if (!pair.is_array() || pair.size() != 2)
                throw std::invalid_argument(std::string("malformed entry in \"") + key + "\"");
            edges.emplace_back(lookup(pair[0]), lookup(pair[1]));
        }
        return edges;
    };
    for (auto [a, c] : edgesOf("directed")) b.addDirected(a, c);
    for (auto [a, c] : edgesOf("bidirected")) b.addBidirected(a, c);
    out.graph = std::move(b).build();
    return out;
}

nlohmann::json graphToJson(const LabeledGraph& g) {
    nlohmann::json j;
    j["nodes"] = g.labels;
    j["directed"] = nlohmann::json::array();
    j["bidirected"] = nlohmann::json::array();
    for (auto [a, c] : g.graph.directedEdges()) j["directed"].push_back({g.labels[a], g.labels[c]});
    for (auto [a, c] : g.graph.bidirectedEdges())
        j["bidirected"].push_back({g.labels[a], g.labels[c]});
    return j;
}

nlohmann::json graphToJson(const MixedGraph& g) {
    return graphToJson(LabeledGraph{defaultLabels(g.numVertices()), g});
}

LabeledGraph readGraphFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open graph file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("bad graph JSON in " + path + ": " + e.what());
    }
    return graphFromJson(j);
}

void writeGraphFile(const std::string& path, const LabeledGraph& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << graphToJson(g).dump(2) << '\n';
}

}  // namespace gspo
