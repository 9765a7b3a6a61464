#include "graphon/pattern.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "graphon/error.hpp"

namespace graphon {

Pattern::Pattern(std::size_t nodes, std::vector<PatternEdge> edges, std::vector<unsigned> exponents)
    : nodes_(nodes), exponents_(std::move(exponents)) {
    if (exponents_.size() != nodes_) throw InvalidArgument("pattern exponent vector has the wrong length");
    for (auto& e : edges) {
        if (e.u >= nodes_ || e.v >= nodes_) throw InvalidArgument("pattern edge endpoint out of range");
        if (e.u == e.v) throw InvalidArgument("patterns may not contain self-loops");
        if (e.multiplicity == 0) throw InvalidArgument("edge multiplicity must be positive");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end());
    for (const auto& e : edges) {
        if (!edges_.empty() && edges_.back().u == e.u && edges_.back().v == e.v)
            edges_.back().multiplicity += e.multiplicity;
        else
            edges_.push_back(e);
    }
}

Pattern::Pattern(std::size_t nodes, std::vector<PatternEdge> edges)
    : Pattern(nodes, std::move(edges), std::vector<unsigned>(nodes, 0)) {}

std::size_t Pattern::edge_count() const noexcept {
    std::size_t total = 0;
    for (const auto& e : edges_) total += e.multiplicity;
    return total;
}

std::size_t Pattern::total_exponent() const noexcept {
    return std::accumulate(exponents_.begin(), exponents_.end(), std::size_t{0});
}

bool Pattern::is_simple() const noexcept {
    return std::all_of(edges_.begin(), edges_.end(), [](const PatternEdge& e) { return e.multiplicity == 1; });
}

std::vector<std::vector<bool>> Pattern::simple_adjacency() const {
    std::vector<std::vector<bool>> adj(nodes_, std::vector<bool>(nodes_, false));
    for (const auto& e : edges_) adj[e.u][e.v] = adj[e.v][e.u] = true;
    return adj;
}

Pattern simplify_pattern(const Pattern& pattern) {
    auto edges = pattern.edges();
    for (auto& e : edges) e.multiplicity = 1;
    return {pattern.node_count(), std::move(edges), pattern.exponents()};
}

Pattern disjoint_union(const Pattern& first, const Pattern& second) {
    const std::size_t shift = first.node_count();
    auto edges = first.edges();
    for (auto e : second.edges()) edges.push_back({e.u + shift, e.v + shift, e.multiplicity});
    auto exponents = first.exponents();
    exponents.insert(exponents.end(), second.exponents().begin(), second.exponents().end());
    return {shift + second.node_count(), std::move(edges), std::move(exponents)};
}

Pattern path_pattern(std::size_t nodes) {
    std::vector<PatternEdge> edges;
    for (std::size_t i = 0; i + 1 < nodes; ++i) edges.push_back({i, i + 1, 1});
    return {nodes, std::move(edges)};
}

Pattern cycle_pattern(std::size_t nodes) {
    if (nodes < 3) throw InvalidArgument("cycles need at least 3 nodes");
    std::vector<PatternEdge> edges;
    for (std::size_t i = 0; i < nodes; ++i) edges.push_back({i, (i + 1) % nodes, 1});
    return {nodes, std::move(edges)};
}

Pattern complete_pattern(std::size_t nodes) {
    std::vector<PatternEdge> edges;
    for (std::size_t i = 0; i < nodes; ++i)
        for (std::size_t j = i + 1; j < nodes; ++j) edges.push_back({i, j, 1});
    return {nodes, std::move(edges)};
}

Pattern pattern_by_name(const std::string& name) {
    if (name == "K2") return complete_pattern(2);
    if (name == "K3") return complete_pattern(3);
    if (name == "P3") return path_pattern(3);
    auto parse = [&](std::size_t offset, unsigned& out) {
        const char* first = name.data() + offset;
        const char* last = name.data() + name.size();
        auto [ptr, ec] = std::from_chars(first, last, out);
        return ec == std::errc{} && ptr == last && first != last;
    };
    unsigned value = 0;
    if (name.size() >= 2 && name[0] == 'C' && parse(1, value) && value >= 3 && value <= 8) return cycle_pattern(value);
    if (name.size() >= 3 && name.rfind("M_", 0) == 0 && parse(2, value)) return {1, {}, {value}};
    throw InvalidArgument("unknown pattern name '" + name + "'");
}

std::vector<std::string> registered_pattern_names() {
    return {"K2", "P3", "K3", "C3", "C4", "C5", "C6", "C7", "C8"};
}

std::string pattern_to_string(const Pattern& pattern) {
    std::string out = std::to_string(pattern.node_count()) + ":[";
    for (std::size_t e = 0; e < pattern.edges().size(); ++e) {
        const auto& edge = pattern.edges()[e];
        if (e > 0) out += ", ";
        out += std::to_string(edge.u) + "-" + std::to_string(edge.v);
        if (edge.multiplicity > 1) out += "x" + std::to_string(edge.multiplicity);
    }
    out += "]";
    if (pattern.total_exponent() > 0) {
        out += " d=[";
        for (std::size_t i = 0; i < pattern.exponents().size(); ++i) {
            if (i > 0) out += ",";
            out += std::to_string(pattern.exponents()[i]);
        }
        out += "]";
    }
    return out;
}

}  // namespace graphon
