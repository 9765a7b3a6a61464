#include "graphon/distance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

#include "graphon/error.hpp"
#include "graphon/rng.hpp"

namespace graphon {

StepKernel constant_kernel(double c) { return {SquareMatrix(1, c), {1.0}}; }

namespace {

void check_kernel(const StepKernel& u) {
    if (u.values.size() != u.measures.size() || u.measures.empty())
        throw InvalidArgument("step kernel values and measures disagree in size");
}

// Row partial sums r_i(T) = sum_{j in T} U_ij mu_j for every subset T of the
// column range [first, first + count), indexed by bitmask.
std::vector<double> subset_row_sums(const StepKernel& u, std::size_t first, std::size_t count) {
    const std::size_t p = u.blocks();
    const std::size_t subsets = std::size_t{1} << count;
    std::vector<double> sums(subsets * p, 0.0);
    for (std::size_t mask = 1; mask < subsets; ++mask) {
        double* r = sums.data() + mask * p;
        for (std::size_t i = 0; i < p; ++i) {
            double acc = 0.0;
            for (std::size_t b = 0; b < count; ++b)
                if (mask >> b & 1U) acc += u.values(i, first + b) * u.measures[first + b];
            r[i] = acc;
        }
    }
    return sums;
}

}  // namespace

double cut_norm_exact(const StepKernel& u, std::size_t max_blocks) {
    check_kernel(u);
    const std::size_t p = u.blocks();
    if (p > max_blocks || p >= 63)
        throw CapacityError("cut_norm_exact: " + std::to_string(p) + " blocks exceeds the exhaustive limit of " +
                            std::to_string(max_blocks) + "; use cut_norm_lower");
    // T = T_low u T_high; the two halves are tabulated separately so every
    // row sum is (exact sum over low) + (exact sum over high), independent of
    // enumeration order.
    const std::size_t low = p / 2;
    const std::size_t high = p - low;
    const auto low_sums = subset_row_sums(u, 0, low);
    const auto high_sums = subset_row_sums(u, low, high);
    double best = 0.0;
    for (std::size_t hm = 0; hm < (std::size_t{1} << high); ++hm) {
        const double* rh = high_sums.data() + hm * p;
        for (std::size_t lm = 0; lm < (std::size_t{1} << low); ++lm) {
            const double* rl = low_sums.data() + lm * p;
            double pos = 0.0, neg = 0.0;
            for (std::size_t i = 0; i < p; ++i) {
                const double r = rl[i] + rh[i];
                if (r > 0.0)
                    pos += u.measures[i] * r;
                else
                    neg -= u.measures[i] * r;
            }
            best = std::max(best, std::max(pos, neg));
        }
    }
    return best;
}

double cut_norm_lower(const StepKernel& u, int restarts, std::uint64_t seed) {
    check_kernel(u);
    if (restarts < 1) throw InvalidArgument("cut_norm_lower needs at least one restart");
    const std::size_t p = u.blocks();
    Rng rng(seed);
    std::vector<char> cols(p), rows(p);
    std::vector<double> r(p), c(p);
    double best = 0.0;
    for (int start = 0; start < restarts; ++start) {
        for (double sign : {1.0, -1.0}) {
            if (start == 0)
                std::fill(cols.begin(), cols.end(), 1);
            else
                for (auto& t : cols) t = rng.bernoulli(0.5) ? 1 : 0;
            for (int iter = 0; iter < 1000; ++iter) {
                for (std::size_t i = 0; i < p; ++i) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < p; ++j)
                        if (cols[j]) acc += u.values(i, j) * u.measures[j];
                    r[i] = sign * acc;
                    rows[i] = r[i] > 0.0 ? 1 : 0;
                }
                double value = 0.0;
                for (std::size_t i = 0; i < p; ++i)
                    if (rows[i]) value += u.measures[i] * r[i];
                best = std::max(best, value);

                bool changed = false;
                for (std::size_t j = 0; j < p; ++j) {
                    double acc = 0.0;
                    for (std::size_t i = 0; i < p; ++i)
                        if (rows[i]) acc += u.measures[i] * u.values(i, j);
                    c[j] = sign * acc;
                    const char pick = c[j] > 0.0 ? 1 : 0;
                    changed = changed || pick != cols[j];
                    cols[j] = pick;
                }
                value = 0.0;
                for (std::size_t j = 0; j < p; ++j)
                    if (cols[j]) value += u.measures[j] * c[j];
                best = std::max(best, value);
                if (!changed) break;
            }
        }
    }
    return best;
}

double signal_cut_norm(std::span<const double> values, std::span<const double> measures) {
    if (values.size() != measures.size()) throw InvalidArgument("signal and measures disagree in size");
    double pos = 0.0, neg = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] > 0.0)
            pos += measures[i] * values[i];
        else
            neg -= measures[i] * values[i];
    }
    return std::max(pos, neg);
}

namespace {

std::vector<double> boundaries(const std::vector<double>& measures) {
    std::vector<double> cuts(measures.size() + 1, 0.0);
    std::partial_sum(measures.begin(), measures.end(), cuts.begin() + 1);
    cuts.back() = 1.0;
    return cuts;
}

// Block containing the point x of [0,1] for the given cut points.
std::size_t locate(const std::vector<double>& cuts, double x) {
    const auto it = std::upper_bound(cuts.begin() + 1, cuts.end() - 1, x);
    return static_cast<std::size_t>(it - (cuts.begin() + 1));
}

StepGraphonSignal restrict_to(const StepGraphonSignal& w, const std::vector<std::size_t>& owner,
                              const std::vector<double>& measures) {
    const std::size_t q = owner.size();
    SquareMatrix values(q);
    std::vector<double> signal(q);
    for (std::size_t i = 0; i < q; ++i) {
        signal[i] = w.signal(owner[i]);
        for (std::size_t j = 0; j < q; ++j) values(i, j) = w.value(owner[i], owner[j]);
    }
    return {std::move(values), measures, std::move(signal), w.signal_bound()};
}

}  // namespace

CommonRefinement common_refinement(const StepGraphonSignal& a, const StepGraphonSignal& b) {
    if (a.block_measures() == b.block_measures()) return {a, b};
    const auto ca = boundaries(a.block_measures());
    const auto cb = boundaries(b.block_measures());
    std::vector<double> merged;
    merged.reserve(ca.size() + cb.size());
    std::merge(ca.begin(), ca.end(), cb.begin(), cb.end(), std::back_inserter(merged));
    std::vector<double> cuts{0.0};
    for (double x : merged)
        if (x - cuts.back() > kBoundaryCoalesce) cuts.push_back(x);
    if (1.0 - cuts.back() <= kBoundaryCoalesce)
        cuts.back() = 1.0;
    else
        cuts.push_back(1.0);

    const std::size_t q = cuts.size() - 1;
    std::vector<double> measures(q);
    std::vector<std::size_t> owner_a(q), owner_b(q);
    for (std::size_t k = 0; k < q; ++k) {
        measures[k] = cuts[k + 1] - cuts[k];
        const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
        owner_a[k] = locate(ca, mid);
        owner_b[k] = locate(cb, mid);
    }
    return {restrict_to(a, owner_a, measures), restrict_to(b, owner_b, measures)};
}

StepKernel graphon_difference(const StepGraphonSignal& a, const StepGraphonSignal& b) {
    const auto [x, y] = common_refinement(a, b);
    const std::size_t q = x.blocks();
    SquareMatrix diff(q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) diff(i, j) = x.value(i, j) - y.value(i, j);
    return {std::move(diff), x.block_measures()};
}

LpDistance lp_distance_labeled(const StepGraphonSignal& a, const StepGraphonSignal& b, double p) {
    if (!(p >= 1.0)) throw InvalidArgument("L^p distance needs p >= 1");
    const auto [x, y] = common_refinement(a, b);
    const std::size_t q = x.blocks();
    const auto& mu = x.block_measures();
    LpDistance out;
    if (std::isinf(p)) {
        for (std::size_t i = 0; i < q; ++i) {
            out.signal = std::max(out.signal, std::abs(x.signal(i) - y.signal(i)));
            for (std::size_t j = 0; j < q; ++j)
                out.graphon = std::max(out.graphon, std::abs(x.value(i, j) - y.value(i, j)));
        }
        return out;
    }
    double g = 0.0, s = 0.0;
    for (std::size_t i = 0; i < q; ++i) {
        s += mu[i] * std::pow(std::abs(x.signal(i) - y.signal(i)), p);
        for (std::size_t j = 0; j < q; ++j) g += mu[i] * mu[j] * std::pow(std::abs(x.value(i, j) - y.value(i, j)), p);
    }
    out.graphon = std::pow(g, 1.0 / p);
    out.signal = std::pow(s, 1.0 / p);
    return out;
}

CutNormParts labeled_cut_norm(const StepGraphonSignal& a, const StepGraphonSignal& b, std::size_t max_exact_blocks,
                              int lower_restarts, std::uint64_t seed) {
    const auto [x, y] = common_refinement(a, b);
    const std::size_t q = x.blocks();
    SquareMatrix diff(q);
    std::vector<double> sdiff(q);
    for (std::size_t i = 0; i < q; ++i) {
        sdiff[i] = x.signal(i) - y.signal(i);
        for (std::size_t j = 0; j < q; ++j) diff(i, j) = x.value(i, j) - y.value(i, j);
    }
    const StepKernel kernel{std::move(diff), x.block_measures()};
    CutNormParts out;
    out.signal = signal_cut_norm(sdiff, kernel.measures);
    if (q <= max_exact_blocks) {
        out.graphon = cut_norm_exact(kernel, max_exact_blocks);
    } else {
        out.graphon = cut_norm_lower(kernel, lower_restarts, seed);
        out.exact = false;
    }
    return out;
}

namespace {

auto ordering_key(const StepGraphonSignal& w) {
    return std::tie(w.block_measures(), w.block_values().values(), w.signals());
}

struct Objective {
    const StepGraphonSignal& a;
    const StepGraphonSignal& b;
    const CutDistanceOptions& opt;
    bool exact = true;

    double operator()(const std::vector<std::size_t>& perm) {
        const auto parts = labeled_cut_norm(a, b.permuted(perm), opt.max_exact_cut_blocks, opt.lower_restarts,
                                            opt.seed);
        exact = exact && parts.exact;
        return parts.total();
    }
};

}  // namespace

CutDistance cut_distance_upper(const StepGraphonSignal& a_in, const StepGraphonSignal& b_in, CutAlignment mode,
                               const CutDistanceOptions& options) {
    const bool swap = ordering_key(b_in) < ordering_key(a_in);
    const StepGraphonSignal& a = swap ? b_in : a_in;
    const StepGraphonSignal& b = swap ? a_in : b_in;
    const std::size_t p = b.blocks();
    Objective objective{a, b, options};
    CutDistance out;

    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), std::size_t{0});

    if (mode == CutAlignment::exact_perm) {
        if (a.blocks() != p || !a.has_uniform_measures() || !b.has_uniform_measures() ||
            a.block_measures() != b.block_measures())
            throw InvalidArgument("exact_perm needs equal block counts with identical uniform measures");
        if (p > options.max_exact_perm_blocks)
            throw CapacityError("exact_perm: " + std::to_string(p) + " blocks exceeds the limit of " +
                                std::to_string(options.max_exact_perm_blocks));
        out.value = objective(perm);
        out.permutation = perm;
        while (std::next_permutation(perm.begin(), perm.end())) {
            const double v = objective(perm);
            if (v < out.value) {
                out.value = v;
                out.permutation = perm;
            }
        }
        out.exact_cut_norms = objective.exact;
        return out;
    }

    Rng rng(options.seed);
    out.value = std::numeric_limits<double>::infinity();
    for (int start = 0; start <= options.restarts; ++start) {
        if (start > 0) {
            std::iota(perm.begin(), perm.end(), std::size_t{0});
            Rng shuffle = rng.split(static_cast<std::uint64_t>(start));
            for (std::size_t i = p; i > 1; --i) std::swap(perm[i - 1], perm[shuffle.below(i)]);
        }
        double current = objective(perm);
        for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
            bool improved = false;
            for (std::size_t i = 0; i < p; ++i) {
                for (std::size_t j = i + 1; j < p; ++j) {
                    std::swap(perm[i], perm[j]);
                    const double v = objective(perm);
                    if (v < current) {
                        current = v;
                        improved = true;
                    } else {
                        std::swap(perm[i], perm[j]);
                    }
                }
            }
            if (!improved) break;
        }
        if (current < out.value) {
            out.value = current;
            out.permutation = perm;
        }
    }
    out.exact_cut_norms = objective.exact;
    return out;
}

}  // namespace graphon
