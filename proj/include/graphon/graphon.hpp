#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace graphon {

/// Dense row-major n x n matrix of doubles.
class SquareMatrix {
public:
    SquareMatrix() = default;
    explicit SquareMatrix(std::size_t n, double fill = 0.0) : n_(n), data_(n * n, fill) {}
    SquareMatrix(std::size_t n, std::vector<double> row_major);

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * n_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
    [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * n_, n_}; }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return data_; }
    [[nodiscard]] bool is_symmetric() const noexcept;

    friend bool operator==(const SquareMatrix&, const SquareMatrix&) = default;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// A step graphon-signal (W, f): W is constant on products of blocks, f is
/// constant on blocks, and block i has Lebesgue measure `measure(i)`.
/// Every finite (weighted) graph-signal induces one of these.
class StepGraphonSignal {
public:
    /// Throws InvalidArgument unless values are symmetric in [0,1], measures
    /// positive and summing to 1 (1e-12), and |signal| <= signal_bound.
    StepGraphonSignal(SquareMatrix block_values, std::vector<double> block_measures,
                      std::vector<double> signal, double signal_bound);

    /// Equal block measures 1/p.
    static StepGraphonSignal uniform(SquareMatrix block_values, std::vector<double> signal,
                                     double signal_bound);

    [[nodiscard]] std::size_t blocks() const noexcept { return values_.size(); }
    [[nodiscard]] double value(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }
    [[nodiscard]] double measure(std::size_t i) const noexcept { return measures_[i]; }
    [[nodiscard]] double signal(std::size_t i) const noexcept { return signal_[i]; }
    [[nodiscard]] double signal_bound() const noexcept { return bound_; }

    [[nodiscard]] const SquareMatrix& block_values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<double>& block_measures() const noexcept { return measures_; }
    [[nodiscard]] const std::vector<double>& signals() const noexcept { return signal_; }

    /// True when every block measure is bit-identical.
    [[nodiscard]] bool has_uniform_measures() const noexcept;

    /// Relabels blocks: block i of the result is block perm[i] of *this.
    [[nodiscard]] StepGraphonSignal permuted(std::span<const std::size_t> perm) const;

    friend bool operator==(const StepGraphonSignal&, const StepGraphonSignal&) = default;

private:
    SquareMatrix values_;
    std::vector<double> measures_;
    std::vector<double> signal_;
    double bound_ = 1.0;
};

/// Simple graph with one real feature per node.
class GraphSignal {
public:
    /// Throws InvalidArgument on out-of-range or self-loop edges or a
    /// feature vector of the wrong length. Duplicate edges are merged.
    GraphSignal(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges,
                std::vector<double> features);
    /// Adjacency given row-major as 0/1 bytes; must be symmetric and hollow.
    GraphSignal(std::size_t n, std::vector<std::uint8_t> adjacency, std::vector<double> features);

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] bool adjacent(std::size_t i, std::size_t j) const noexcept { return adj_[i * n_ + j] != 0; }
    [[nodiscard]] const std::vector<std::uint8_t>& adjacency() const noexcept { return adj_; }
    [[nodiscard]] const std::vector<double>& features() const noexcept { return features_; }
    [[nodiscard]] std::vector<std::pair<std::size_t, std::size_t>> edges() const;
    [[nodiscard]] std::size_t edge_count() const noexcept;

    friend bool operator==(const GraphSignal&, const GraphSignal&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint8_t> adj_;
    std::vector<double> features_;
};

/// Graph with edge weights in [0,1] (the H_n(W) sample model). The diagonal
/// holds W(X_i, X_i).
class WeightedGraphSignal {
public:
    WeightedGraphSignal(SquareMatrix weights, std::vector<double> features);

    [[nodiscard]] std::size_t n() const noexcept { return weights_.size(); }
    [[nodiscard]] const SquareMatrix& weights() const noexcept { return weights_; }
    [[nodiscard]] const std::vector<double>& features() const noexcept { return features_; }

    friend bool operator==(const WeightedGraphSignal&, const WeightedGraphSignal&) = default;

private:
    SquareMatrix weights_;
    std::vector<double> features_;
};

/// Induced step graphon-signal of a graph on a regular partition.
/// signal_bound is max(1, max |feature|). Throws EmptyGraphError for n = 0.
StepGraphonSignal from_graph(const GraphSignal& g);
StepGraphonSignal from_weighted_graph(const WeightedGraphSignal& g);

/// Splits every block into m equal-measure sub-blocks (block i becomes
/// i*m .. i*m+m-1). The result is weakly isomorphic to the input.
StepGraphonSignal refine(const StepGraphonSignal& w, std::size_t m);

/// Latent block of each sampled node, drawn as X_i ~ U(0,1) located in the
/// cumulative block measures.
std::vector<std::size_t> sample_latent_blocks(const StepGraphonSignal& w, std::size_t n, std::uint64_t seed);

WeightedGraphSignal sample_weighted(const StepGraphonSignal& w, std::size_t n, std::uint64_t seed);

struct SimpleSample {
    GraphSignal graph;
    std::vector<std::size_t> latent_blocks;
};

/// Same latent draw as sample_weighted(w, n, seed), then independent
/// Bernoulli(W_ij) edges for i < j. Diagonal is always empty.
SimpleSample sample_simple_with_latents(const StepGraphonSignal& w, std::size_t n, std::uint64_t seed);
GraphSignal sample_simple(const StepGraphonSignal& w, std::size_t n, std::uint64_t seed);

}  // namespace graphon
