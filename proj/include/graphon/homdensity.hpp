#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "graphon/graphon.hpp"
#include "graphon/pattern.hpp"

namespace graphon {

/// Tree decomposition (T, beta) of a pattern's underlying simple graph.
/// parent[t] < 0 marks the root; bags hold sorted pattern nodes.
struct TreeDecomposition {
    std::vector<std::vector<std::size_t>> bags;
    std::vector<std::ptrdiff_t> parent;

    /// Largest bag size minus one (-1 for no bags).
    [[nodiscard]] std::ptrdiff_t width() const noexcept;

    /// Checks that parent links form one tree, every pattern node's bags are
    /// nonempty and connected, and every edge lies in some bag.
    [[nodiscard]] bool is_valid_for(const Pattern& pattern) const;
};

/// Decomposition induced by eliminating nodes in the given order.
TreeDecomposition decomposition_from_order(const Pattern& pattern, std::span<const std::size_t> order);

/// Min-fill elimination heuristic (ties: fewer neighbors, then lower index).
/// Multiplicities are ignored. Throws InvalidArgument for an empty pattern.
TreeDecomposition tree_decompose(const Pattern& pattern);

/// Exact treewidth by trying every elimination order. Patterns with more
/// than `max_nodes` nodes throw CapacityError.
std::size_t exact_treewidth(const Pattern& pattern, std::size_t max_nodes = 8);

/// Default bound on map evaluations / DP table cells.
inline constexpr std::uint64_t kDefaultHomCapacity = 100'000'000;

/// t((F, d), (W, f)) by summing over all p^v(F) block assignments:
///   sum_x prod_i mu_{x_i} f(x_i)^{d_i} prod_{ij in E} W(x_i, x_j)^{mult}.
/// Throws CapacityError if p^v(F) > capacity.
double t_bruteforce(const Pattern& pattern, const StepGraphonSignal& w,
                    std::uint64_t capacity = kDefaultHomCapacity);

/// Same value by leaf-to-root message passing over the bags of `decomp`.
/// Each edge (with its multiplicity as exponent) is applied at the
/// shallowest bag containing both endpoints; each node's measure and
/// signal power are applied where it is forgotten.
/// Throws CapacityError if p^(width+1) > capacity, InvalidArgument if the
/// decomposition is not valid for the pattern.
double t_dp(const Pattern& pattern, const TreeDecomposition& decomp, const StepGraphonSignal& w,
            std::uint64_t capacity = kDefaultHomCapacity);

/// t_dp over the min-fill decomposition.
double hom_density(const Pattern& pattern, const StepGraphonSignal& w);

struct CountingBound {
    double bound = 0.0;
    double actual = 0.0;
    double graphon_cut = 0.0;  ///< ||W - V||_box (labeled, exact)
    double signal_cut = 0.0;   ///< ||f - g||_box
    bool holds = false;        ///< actual <= bound + 1e-12
};

/// Counting lemma for a simple pattern:
///   |t(F,a) - t(F,b)| <= 2 r^(D-1) (2 r e(F) ||W-V||_box + D ||f-g||_box),
/// evaluated with exact labeled cut norms on the common refinement (which
/// bound delta_box from above, so the check is conservative). For D = 0 the
/// bound is 4 e(F) ||W-V||_box. Throws InvalidArgument for multigraph
/// patterns or differing signal bounds.
CountingBound counting_bound(const Pattern& pattern, const StepGraphonSignal& a, const StepGraphonSignal& b);

}  // namespace graphon
