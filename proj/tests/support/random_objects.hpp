#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "graphon/distance.hpp"
#include "graphon/graphon.hpp"
#include "graphon/networks.hpp"
#include "graphon/pattern.hpp"
#include "graphon/rng.hpp"

namespace testing_support {

// Positive measures summing to one; the last one absorbs rounding.
inline std::vector<double> random_measures(graphon::Rng& rng, std::size_t p) {
    std::vector<double> m(p);
    for (double& x : m) x = 0.2 + rng.uniform();
    const double total = std::accumulate(m.begin(), m.end(), 0.0);
    for (double& x : m) x /= total;
    const double head = std::accumulate(m.begin(), m.end() - 1, 0.0);
    m.back() = 1.0 - head;
    return m;
}

inline graphon::StepGraphonSignal random_step(graphon::Rng& rng, std::size_t p, bool random_measure = true,
                                              double bound = 1.0, bool binary = false) {
    graphon::SquareMatrix v(p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i; j < p; ++j) v(i, j) = v(j, i) = binary ? (rng.bernoulli(0.5) ? 1.0 : 0.0) : rng.uniform();
    std::vector<double> f(p);
    for (double& x : f) x = rng.uniform(-bound, bound);
    if (!random_measure) return graphon::StepGraphonSignal::uniform(std::move(v), std::move(f), bound);
    return graphon::StepGraphonSignal(std::move(v), random_measures(rng, p), std::move(f), bound);
}

inline graphon::StepKernel random_kernel(graphon::Rng& rng, std::size_t p) {
    graphon::StepKernel k{graphon::SquareMatrix(p), random_measures(rng, p)};
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) k.values(i, j) = rng.uniform(-1.0, 1.0);
    return k;
}

inline graphon::Pattern random_pattern(graphon::Rng& rng, std::size_t max_nodes, unsigned max_mult,
                                       std::size_t max_exponent_sum, bool simple = false) {
    const std::size_t n = 1 + rng.below(max_nodes);
    std::vector<graphon::PatternEdge> edges;
    for (std::size_t u = 0; u < n; ++u)
        for (std::size_t v = u + 1; v < n; ++v)
            if (rng.bernoulli(0.5))
                edges.push_back({u, v, simple ? 1u : 1u + static_cast<unsigned>(rng.below(max_mult))});
    std::vector<unsigned> d(n, 0);
    const std::size_t total = rng.below(max_exponent_sum + 1);
    for (std::size_t t = 0; t < total; ++t) ++d[rng.below(n)];
    return graphon::Pattern(n, std::move(edges), std::move(d));
}

inline std::vector<std::size_t> random_permutation(graphon::Rng& rng, std::size_t p) {
    std::vector<std::size_t> perm(p);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = p; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
    return perm;
}

inline graphon::GraphSignal random_graph(graphon::Rng& rng, std::size_t n, double density = 0.5) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (rng.bernoulli(density)) edges.emplace_back(i, j);
    std::vector<double> f(n);
    for (double& x : f) x = rng.uniform(-1.0, 1.0);
    return graphon::GraphSignal(n, edges, std::move(f));
}

}  // namespace testing_support
