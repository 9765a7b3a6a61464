#include "graphon/graphon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "graphon/error.hpp"
#include "graphon/rng.hpp"

namespace graphon {

namespace {

constexpr double kMeasureSumTolerance = 1e-12;

void require(bool cond, const std::string& what) {
    if (!cond) throw InvalidArgument(what);
}

}  // namespace

SquareMatrix::SquareMatrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
    require(data_.size() == n * n, "matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                                       std::to_string(n * n));
}

bool SquareMatrix::is_symmetric() const noexcept {
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

StepGraphonSignal::StepGraphonSignal(SquareMatrix block_values, std::vector<double> block_measures,
                                     std::vector<double> signal, double signal_bound)
    : values_(std::move(block_values)),
      measures_(std::move(block_measures)),
      signal_(std::move(signal)),
      bound_(signal_bound) {
    const std::size_t p = values_.size();
    require(p >= 1, "step graphon needs at least one block");
    require(measures_.size() == p, "block_measures length does not match block count");
    require(signal_.size() == p, "signal length does not match block count");
    require(std::isfinite(bound_) && bound_ > 0.0, "signal_bound must be positive");
    require(values_.is_symmetric(), "block_values must be symmetric");
    for (double v : values_.values()) require(v >= 0.0 && v <= 1.0, "block_values must lie in [0,1]");
    double total = 0.0;
    for (double m : measures_) {
        require(std::isfinite(m) && m > 0.0, "block measures must be positive");
        total += m;
    }
    require(std::abs(total - 1.0) <= kMeasureSumTolerance, "block measures must sum to 1");
    for (double f : signal_) require(std::isfinite(f) && std::abs(f) <= bound_, "signal exceeds signal_bound");
}

StepGraphonSignal StepGraphonSignal::uniform(SquareMatrix block_values, std::vector<double> signal,
                                             double signal_bound) {
    const std::size_t p = block_values.size();
    require(p >= 1, "step graphon needs at least one block");
    std::vector<double> measures(p, 1.0 / static_cast<double>(p));
    return {std::move(block_values), std::move(measures), std::move(signal), signal_bound};
}

bool StepGraphonSignal::has_uniform_measures() const noexcept {
    return std::all_of(measures_.begin(), measures_.end(), [&](double m) { return m == measures_.front(); });
}

StepGraphonSignal StepGraphonSignal::permuted(std::span<const std::size_t> perm) const {
    const std::size_t p = blocks();
    require(perm.size() == p, "permutation length does not match block count");
    std::vector<bool> seen(p, false);
    for (std::size_t v : perm) {
        require(v < p && !seen[v], "not a permutation");
        seen[v] = true;
    }
    SquareMatrix values(p);
    std::vector<double> measures(p), signal(p);
    for (std::size_t i = 0; i < p; ++i) {
        measures[i] = measures_[perm[i]];
        signal[i] = signal_[perm[i]];
        for (std::size_t j = 0; j < p; ++j) values(i, j) = values_(perm[i], perm[j]);
    }
    return {std::move(values), std::move(measures), std::move(signal), bound_};
}

GraphSignal::GraphSignal(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> edges,
                         std::vector<double> features)
    : n_(n), adj_(n * n, 0), features_(std::move(features)) {
    require(features_.size() == n, "feature vector length does not match node count");
    for (auto [u, v] : edges) {
        require(u < n && v < n, "edge endpoint out of range");
        require(u != v, "self-loops are not allowed in a simple graph");
        adj_[u * n + v] = 1;
        adj_[v * n + u] = 1;
    }
}

GraphSignal::GraphSignal(std::size_t n, std::vector<std::uint8_t> adjacency, std::vector<double> features)
    : n_(n), adj_(std::move(adjacency)), features_(std::move(features)) {
    require(adj_.size() == n * n, "adjacency has the wrong size");
    require(features_.size() == n, "feature vector length does not match node count");
    for (std::size_t i = 0; i < n; ++i) {
        require(adj_[i * n + i] == 0, "adjacency diagonal must be zero");
        for (std::size_t j = 0; j < n; ++j) {
            require(adj_[i * n + j] <= 1, "adjacency must be binary");
            require(adj_[i * n + j] == adj_[j * n + i], "adjacency must be symmetric");
        }
    }
}

std::vector<std::pair<std::size_t, std::size_t>> GraphSignal::edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (adjacent(i, j)) out.emplace_back(i, j);
    return out;
}

std::size_t GraphSignal::edge_count() const noexcept {
    return static_cast<std::size_t>(std::count(adj_.begin(), adj_.end(), std::uint8_t{1})) / 2;
}

WeightedGraphSignal::WeightedGraphSignal(SquareMatrix weights, std::vector<double> features)
    : weights_(std::move(weights)), features_(std::move(features)) {
    require(features_.size() == weights_.size(), "feature vector length does not match node count");
    require(weights_.is_symmetric(), "weights must be symmetric");
    for (double v : weights_.values()) require(v >= 0.0 && v <= 1.0, "weights must lie in [0,1]");
}

namespace {

double bound_for(const std::vector<double>& features) {
    double r = 1.0;
    for (double f : features) r = std::max(r, std::abs(f));
    return r;
}

}  // namespace

StepGraphonSignal from_graph(const GraphSignal& g) {
    const std::size_t n = g.n();
    if (n == 0) throw EmptyGraphError();
    SquareMatrix values(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) values(i, j) = g.adjacent(i, j) ? 1.0 : 0.0;
    return StepGraphonSignal::uniform(std::move(values), g.features(), bound_for(g.features()));
}

StepGraphonSignal from_weighted_graph(const WeightedGraphSignal& g) {
    if (g.n() == 0) throw EmptyGraphError();
    return StepGraphonSignal::uniform(g.weights(), g.features(), bound_for(g.features()));
}

StepGraphonSignal refine(const StepGraphonSignal& w, std::size_t m) {
    require(m >= 1, "refinement factor must be positive");
    if (m == 1) return w;
    const std::size_t p = w.blocks();
    const std::size_t q = p * m;
    SquareMatrix values(q);
    std::vector<double> measures(q), signal(q);
    const double split = static_cast<double>(m);
    for (std::size_t i = 0; i < q; ++i) {
        measures[i] = w.measure(i / m) / split;
        signal[i] = w.signal(i / m);
        for (std::size_t j = 0; j < q; ++j) values(i, j) = w.value(i / m, j / m);
    }
    return {std::move(values), std::move(measures), std::move(signal), w.signal_bound()};
}

std::vector<std::size_t> sample_latent_blocks(const StepGraphonSignal& w, std::size_t n, std::uint64_t seed) {
    const std::size_t p = w.blocks();
    std::vector<double> cumulative(p);
    std::partial_sum(w.block_measures().begin(), w.block_measures().end(), cumulative.begin());
    Rng rng = Rng(seed).split(0);
    std::vector<std::size_t> blocks(n);
    for (auto& b : blocks) {
        const double x = rng.uniform();
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
        b = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), p - 1);
    }
    return blocks;
}

WeightedGraphSignal sample_weighted(const StepGraphonSignal& w, std::size_t n, std::uint64_t seed) {
    require(n >= 1, "sample size must be positive");
    const auto blocks = sample_latent_blocks(w, n, seed);
    SquareMatrix weights(n);
    std::vector<double> features(n);
    for (std::size_t i = 0; i < n; ++i) {
        features[i] = w.signal(blocks[i]);
        for (std::size_t j = 0; j < n; ++j) weights(i, j) = w.value(blocks[i], blocks[j]);
    }
    return {std::move(weights), std::move(features)};
}

SimpleSample sample_simple_with_latents(const StepGraphonSignal& w, std::size_t n, std::uint64_t seed) {
    require(n >= 1, "sample size must be positive");
    auto blocks = sample_latent_blocks(w, n, seed);
    Rng rng = Rng(seed).split(1);
    std::vector<std::uint8_t> adj(n * n, 0);
    std::vector<double> features(n);
    for (std::size_t i = 0; i < n; ++i) {
        features[i] = w.signal(blocks[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (rng.bernoulli(w.value(blocks[i], blocks[j]))) {
                adj[i * n + j] = 1;
                adj[j * n + i] = 1;
            }
        }
    }
    return {GraphSignal(n, std::move(adj), std::move(features)), std::move(blocks)};
}

GraphSignal sample_simple(const StepGraphonSignal& w, std::size_t n, std::uint64_t seed) {
    return sample_simple_with_latents(w, n, seed).graph;
}

}  // namespace graphon
