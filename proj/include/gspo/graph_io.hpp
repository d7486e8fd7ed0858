#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gspo/graph.hpp"

namespace gspo {

/// A graph together with the external vertex labels; labels[v] names vertex v.
struct LabeledGraph {
    std::vector<std::string> labels;
    MixedGraph graph;
};

/// Labels "1".."n".
std::vector<std::string> defaultLabels(int n);

/// {"nodes": [...], "directed": [[a,b],...], "bidirected": [[a,c],...]}.
/// Rejects duplicate labels, unknown labels, self-loops and doubled pairs
/// with std::invalid_argument.
LabeledGraph graphFromJson(const nlohmann::json& j);
nlohmann::json graphToJson(const LabeledGraph& g);
nlohmann::json graphToJson(const MixedGraph& g);

LabeledGraph readGraphFile(const std::string& path);
void writeGraphFile(const std::string& path, const LabeledGraph& g);

}  // namespace gspo
