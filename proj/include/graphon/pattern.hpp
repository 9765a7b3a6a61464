#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace graphon {

/// Undirected pattern edge with multiplicity; stored with u < v.
struct PatternEdge {
    std::size_t u = 0;
    std::size_t v = 0;
    unsigned multiplicity = 1;

    friend bool operator==(const PatternEdge&, const PatternEdge&) = default;
    friend auto operator<=>(const PatternEdge&, const PatternEdge&) = default;
};

/// A multigraph F on nodes 0..v(F)-1 together with per-node signal
/// exponents d. Parallel edges are folded into multiplicities.
class Pattern {
public:
    Pattern() = default;
    /// Throws InvalidArgument on self-loops, out-of-range nodes, zero
    /// multiplicities or an exponent vector of the wrong length. Edges are
    /// normalized (u < v), sorted, and repeated pairs merged.
    Pattern(std::size_t nodes, std::vector<PatternEdge> edges, std::vector<unsigned> exponents);
    /// Exponents default to zero.
    Pattern(std::size_t nodes, std::vector<PatternEdge> edges);

    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_; }
    [[nodiscard]] const std::vector<PatternEdge>& edges() const noexcept { return edges_; }
    [[nodiscard]] const std::vector<unsigned>& exponents() const noexcept { return exponents_; }

    /// e(F) counting multiplicity.
    [[nodiscard]] std::size_t edge_count() const noexcept;
    /// D = sum of exponents.
    [[nodiscard]] std::size_t total_exponent() const noexcept;
    [[nodiscard]] bool is_simple() const noexcept;

    /// Adjacency of the underlying simple graph.
    [[nodiscard]] std::vector<std::vector<bool>> simple_adjacency() const;

    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    std::size_t nodes_ = 0;
    std::vector<PatternEdge> edges_;
    std::vector<unsigned> exponents_;
};

/// Collapses every multiplicity to 1; exponents unchanged.
Pattern simplify_pattern(const Pattern& pattern);

/// F1 disjoint-union F2 with concatenated exponents.
Pattern disjoint_union(const Pattern& first, const Pattern& second);

/// Path with `nodes` nodes, cycle C_n, complete graph K_n.
Pattern path_pattern(std::size_t nodes);
Pattern cycle_pattern(std::size_t nodes);
Pattern complete_pattern(std::size_t nodes);

/// Built-in registry: "K2", "P3", "K3", "C3".."C8", and "M_d" (one node
/// with exponent d). Throws InvalidArgument for unknown names.
Pattern pattern_by_name(const std::string& name);

/// Compact text form, e.g. "3:[0-1, 1-2x2] d=[1,0,0]".
std::string pattern_to_string(const Pattern& pattern);

/// Names accepted by pattern_by_name, excluding the M_d family.
std::vector<std::string> registered_pattern_names();

}  // namespace graphon
