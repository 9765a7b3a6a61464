#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "graphon/graphon.hpp"

namespace graphon {

/// Signed step kernel: p x p block values (any sign) over blocks of the given
/// measures. Differences of step graphons live here.
struct StepKernel {
    SquareMatrix values;
    std::vector<double> measures;

    [[nodiscard]] std::size_t blocks() const noexcept { return measures.size(); }
};

StepKernel constant_kernel(double c);

/// Block count up to which cut_norm_exact enumerates by default.
inline constexpr std::size_t kDefaultExactCutBlocks = 22;

/// sup_{S,T} |int_{S x T} U| for a step kernel. The supremum is attained on
/// unions of blocks, so every column set T is enumerated (Gray-code order)
/// and the row set S is chosen by the sign of the row partial sums.
/// Throws CapacityError when p > max_blocks; use cut_norm_lower instead.
double cut_norm_exact(const StepKernel& u, std::size_t max_blocks = kDefaultExactCutBlocks);

/// Alternating maximization (fix T pick S, fix S pick T) to a fixed point,
/// for both signs, best over `restarts` starts. The first start is T = all
/// blocks; the rest are random. Always <= cut_norm_exact.
double cut_norm_lower(const StepKernel& u, int restarts, std::uint64_t seed);

/// sup_S |int_S f| = max(int f^+, int f^-).
double signal_cut_norm(std::span<const double> values, std::span<const double> measures);

/// Both inputs re-expressed on the common refinement of their block
/// partitions of [0,1]. The two results share block measures exactly.
struct CommonRefinement {
    StepGraphonSignal first;
    StepGraphonSignal second;
};

/// Cumulative-measure boundaries closer than this are merged.
inline constexpr double kBoundaryCoalesce = 1e-15;

CommonRefinement common_refinement(const StepGraphonSignal& a, const StepGraphonSignal& b);

/// W - V on the common refinement.
StepKernel graphon_difference(const StepGraphonSignal& a, const StepGraphonSignal& b);

struct LpDistance {
    double graphon = 0.0;  ///< ||W - V||_p
    double signal = 0.0;   ///< ||f - g||_p
};

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// Labeled L^p distance (no relabeling). p in [1, inf]; pass kInfinityNorm for sup norms.
LpDistance lp_distance_labeled(const StepGraphonSignal& a, const StepGraphonSignal& b, double p);

/// Labeled graphon-signal cut norm ||W - V||_box + ||f - g||_box.
struct CutNormParts {
    double graphon = 0.0;
    double signal = 0.0;
    bool exact = true;  ///< false when the graphon part fell back to cut_norm_lower

    [[nodiscard]] double total() const noexcept { return graphon + signal; }
};

CutNormParts labeled_cut_norm(const StepGraphonSignal& a, const StepGraphonSignal& b,
                              std::size_t max_exact_blocks = 14, int lower_restarts = 16,
                              std::uint64_t seed = 0);

enum class CutAlignment { exact_perm, local_search };

struct CutDistanceOptions {
    std::uint64_t seed = 0;
    int restarts = 4;  ///< local_search random restarts (identity start is extra)
    int max_sweeps = 50;  ///< 2-swap passes per start; 0 evaluates the start only
    std::size_t max_exact_perm_blocks = 8;
    std::size_t max_exact_cut_blocks = 14;  ///< larger merged partitions use cut_norm_lower
    int lower_restarts = 16;
};

struct CutDistance {
    double value = 0.0;
    /// Always true: only block permutations are searched, so the value
    /// bounds delta_box from above.
    bool upper_bound = true;
    /// False if any cut norm along the way was a heuristic lower estimate.
    bool exact_cut_norms = true;
    /// Block permutation applied to the second argument of the canonical pair.
    std::vector<std::size_t> permutation;
};

/// min over block relabelings pi of b of ||W_a - W_b^pi||_box + ||f_a - f_b^pi||_box.
/// exact_perm enumerates all permutations and requires equal block counts
/// with identical uniform measures and p <= max_exact_perm_blocks
/// (CapacityError / InvalidArgument otherwise). local_search runs 2-swap
/// hill climbing on any pair of step objects. The pair is put in a canonical
/// order first, so the result is symmetric in (a, b).
CutDistance cut_distance_upper(const StepGraphonSignal& a, const StepGraphonSignal& b, CutAlignment mode,
                               const CutDistanceOptions& options = {});

}  // namespace graphon
