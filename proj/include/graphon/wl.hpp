#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "graphon/graphon.hpp"
#include "graphon/pattern.hpp"

namespace graphon {

inline constexpr std::size_t kUntilStable = std::numeric_limits<std::size_t>::max();

/// Colors of all k-tuples of blocks after `round` refinement rounds.
/// Tuples are indexed row-major (x1 * p + x2 for k = 2). Color ids are
/// dense and ordered like their keys.
struct ColorState {
    std::size_t k = 1;
    std::size_t round = 0;
    bool stable = false;
    std::vector<std::uint32_t> colors;
    /// palette[c] is the canonical key of color c.
    std::vector<std::vector<std::int64_t>> palette;
    /// Number of colors after rounds 0, 1, ..., round.
    std::vector<std::size_t> color_counts;

    [[nodiscard]] std::size_t color_count() const noexcept { return palette.size(); }
};

/// Oblivious k-WL on block indices, k in {1, 2}. The initial color of a
/// tuple holds its pairwise weights and signal values; each round appends,
/// per coordinate j, the measure-weighted multiset of colors obtained by
/// substituting coordinate j. Stops early once the partition is stable.
ColorState wl_refine(const StepGraphonSignal& w, std::size_t k, std::size_t rounds = kUntilStable);

/// Measure of each color class (product measure over tuples).
struct ColorMass {
    std::uint32_t color = 0;
    double mass = 0.0;
};

struct WlComparison {
    bool indistinguishable = false;
    /// Weights were represented as exact rationals with a common denominator.
    bool exact_weights = false;
    std::size_t rounds = 0;
    ColorState first;
    ColorState second;
    std::vector<ColorMass> first_distribution;
    std::vector<ColorMass> second_distribution;
};

/// Refines both inputs in lockstep with a joint palette and compares their
/// color distributions after the last round.
WlComparison compare_wl(const StepGraphonSignal& a, const StepGraphonSignal& b, std::size_t k,
                        std::size_t rounds = kUntilStable);

bool indistinguishable(const StepGraphonSignal& a, const StepGraphonSignal& b, std::size_t k,
                       std::size_t rounds = kUntilStable);

struct PatternBudget {
    std::size_t max_nodes = 5;
    std::size_t max_total_multiplicity = 6;
    std::size_t max_exponent_sum = 3;
};

/// Connected multigraph patterns with signal exponents inside the budget
/// and treewidth at most `max_treewidth`, one per isomorphism class.
std::vector<Pattern> enumerate_budget_patterns(std::size_t max_treewidth, const PatternBudget& budget = {});

struct WlDensityCheck {
    std::size_t k = 1;
    bool wl_indistinguishable = false;
    std::size_t patterns_checked = 0;
    std::size_t differing_patterns = 0;
    double max_difference = 0.0;
    /// A pattern whose densities differ, if any.
    std::string witness;
    std::vector<std::string> violations;

    [[nodiscard]] bool consistent() const noexcept { return violations.empty(); }
};

/// Checks that k-WL indistinguishability implies equal densities (within
/// `tolerance`) for every budget pattern of treewidth at most k - 1.
WlDensityCheck crosscheck_wl_homomorphisms(const StepGraphonSignal& a, const StepGraphonSignal& b, std::size_t k,
                                         const PatternBudget& budget = {}, double tolerance = 1e-10);

}  // namespace graphon
