#include "graphon/homdensity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "graphon/distance.hpp"
#include "graphon/error.hpp"

namespace graphon {

namespace {

// x^k with 0^0 = 1.
double ipow(double x, unsigned k) noexcept {
    double r = 1.0;
    for (unsigned i = 0; i < k; ++i) r *= x;
    return r;
}

// p^e, saturating at max + 1 so capacity checks cannot overflow.
std::uint64_t saturating_pow(std::uint64_t p, std::size_t e, std::uint64_t max) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < e; ++i) {
        if (p != 0 && r > max / p) return max + 1;
        r *= p;
    }
    return r;
}

// Per-block factor mu_b * f(b)^d for each pattern node.
std::vector<std::vector<double>> node_factors(const Pattern& pattern, const StepGraphonSignal& w) {
    const std::size_t p = w.blocks();
    std::vector<std::vector<double>> out(pattern.node_count(), std::vector<double>(p));
    for (std::size_t i = 0; i < pattern.node_count(); ++i)
        for (std::size_t b = 0; b < p; ++b)
            out[i][b] = w.measure(b) * ipow(w.signal(b), pattern.exponents()[i]);
    return out;
}

}  // namespace

double t_bruteforce(const Pattern& pattern, const StepGraphonSignal& w, std::uint64_t capacity) {
    const std::size_t v = pattern.node_count();
    const std::size_t p = w.blocks();
    if (saturating_pow(p, v, capacity) > capacity)
        throw CapacityError("t_bruteforce: " + std::to_string(p) + "^" + std::to_string(v) +
                            " maps exceed capacity; use t_dp");
    const auto factors = node_factors(pattern, w);
    std::vector<std::size_t> x(v, 0);
    double total = 0.0;
    while (true) {
        double term = 1.0;
        for (std::size_t i = 0; i < v; ++i) term *= factors[i][x[i]];
        for (const auto& e : pattern.edges()) term *= ipow(w.value(x[e.u], x[e.v]), e.multiplicity);
        total += term;
        std::size_t pos = 0;
        while (pos < v && ++x[pos] == p) x[pos++] = 0;
        if (pos == v) break;
    }
    return total;
}

double t_dp(const Pattern& pattern, const TreeDecomposition& decomp, const StepGraphonSignal& w,
            std::uint64_t capacity) {
    if (!decomp.is_valid_for(pattern)) throw InvalidArgument("tree decomposition is not valid for the pattern");
    const std::size_t p = w.blocks();
    const std::size_t t = decomp.bags.size();
    if (saturating_pow(p, static_cast<std::size_t>(decomp.width() + 1), capacity) > capacity)
        throw CapacityError("t_dp: bag tables of " + std::to_string(p) + "^" + std::to_string(decomp.width() + 1) +
                            " cells exceed capacity");

    std::vector<std::vector<std::size_t>> children(t);
    std::size_t root = 0;
    for (std::size_t i = 0; i < t; ++i) {
        if (decomp.parent[i] < 0)
            root = i;
        else
            children[static_cast<std::size_t>(decomp.parent[i])].push_back(i);
    }
    std::vector<std::size_t> depth(t, 0), order{root};
    for (std::size_t k = 0; k < order.size(); ++k)
        for (std::size_t c : children[order[k]]) {
            depth[c] = depth[order[k]] + 1;
            order.push_back(c);
        }

    auto in_bag = [&](std::size_t bag, std::size_t x) {
        return std::binary_search(decomp.bags[bag].begin(), decomp.bags[bag].end(), x);
    };
    std::vector<std::vector<PatternEdge>> edges_at(t);
    for (const auto& e : pattern.edges()) {
        std::size_t best = t;
        for (std::size_t i = 0; i < t; ++i)
            if (in_bag(i, e.u) && in_bag(i, e.v) && (best == t || depth[i] < depth[best])) best = i;
        edges_at[best].push_back(e);
    }

    // Separator of bag i with its parent, as positions inside bag i.
    std::vector<std::vector<std::size_t>> sep(t);
    for (std::size_t i = 0; i < t; ++i) {
        if (decomp.parent[i] < 0) continue;
        const auto up = static_cast<std::size_t>(decomp.parent[i]);
        for (std::size_t pos = 0; pos < decomp.bags[i].size(); ++pos)
            if (in_bag(up, decomp.bags[i][pos])) sep[i].push_back(pos);
    }

    const auto factors = node_factors(pattern, w);
    std::vector<std::vector<double>> message(t);
    for (std::size_t k = order.size(); k-- > 0;) {
        const std::size_t i = order[k];
        const auto& bag = decomp.bags[i];
        const std::size_t b = bag.size();
        std::vector<bool> forgotten(b, true);
        for (std::size_t pos : sep[i]) forgotten[pos] = false;

        // Local variable positions and separator positions of each child.
        auto local_pos = [&](std::size_t x) {
            return static_cast<std::size_t>(std::lower_bound(bag.begin(), bag.end(), x) - bag.begin());
        };
        std::vector<std::vector<std::size_t>> child_vars;
        for (std::size_t c : children[i]) {
            std::vector<std::size_t> vars;
            for (std::size_t pos : sep[c]) vars.push_back(local_pos(decomp.bags[c][pos]));
            child_vars.push_back(std::move(vars));
        }
        std::vector<std::pair<std::size_t, std::size_t>> edge_vars;
        for (const auto& e : edges_at[i]) edge_vars.emplace_back(local_pos(e.u), local_pos(e.v));

        std::vector<double> out(saturating_pow(p, sep[i].size(), capacity), 0.0);
        std::vector<std::size_t> x(b, 0);
        auto index_of = [&](const std::vector<std::size_t>& vars) {
            std::size_t idx = 0;
            for (std::size_t pos : vars) idx = idx * p + x[pos];
            return idx;
        };
        while (true) {
            double val = 1.0;
            for (std::size_t pos = 0; pos < b; ++pos)
                if (forgotten[pos]) val *= factors[bag[pos]][x[pos]];
            for (std::size_t e = 0; e < edge_vars.size(); ++e)
                val *= ipow(w.value(x[edge_vars[e].first], x[edge_vars[e].second]), edges_at[i][e].multiplicity);
            for (std::size_t c = 0; c < child_vars.size(); ++c) val *= message[children[i][c]][index_of(child_vars[c])];
            out[index_of(sep[i])] += val;
            std::size_t pos = 0;
            while (pos < b && ++x[pos] == p) x[pos++] = 0;
            if (pos == b) break;
        }
        message[i] = std::move(out);
        for (std::size_t c : children[i]) message[c] = {};
    }
    return message[root][0];
}

double hom_density(const Pattern& pattern, const StepGraphonSignal& w) {
    if (pattern.node_count() == 0) return 1.0;
    return t_dp(pattern, tree_decompose(pattern), w);
}

CountingBound counting_bound(const Pattern& pattern, const StepGraphonSignal& a, const StepGraphonSignal& b) {
    if (!pattern.is_simple()) throw InvalidArgument("the counting lemma is only stated for simple patterns");
    if (a.signal_bound() != b.signal_bound())
        throw InvalidArgument("counting_bound needs a shared signal bound r");
    const double r = a.signal_bound();
    const auto parts = labeled_cut_norm(a, b, kDefaultExactCutBlocks);
    if (!parts.exact) throw CapacityError("counting_bound needs an exact cut norm; common refinement is too fine");
    const double e = static_cast<double>(pattern.edge_count());
    const std::size_t d = pattern.total_exponent();

    CountingBound out;
    out.graphon_cut = parts.graphon;
    out.signal_cut = parts.signal;
    if (d == 0)
        out.bound = 4.0 * e * parts.graphon;
    else
        out.bound = 2.0 * ipow(r, static_cast<unsigned>(d - 1)) *
                    (2.0 * r * e * parts.graphon + static_cast<double>(d) * parts.signal);
    out.actual = std::abs(hom_density(pattern, a) - hom_density(pattern, b));
    out.holds = out.actual <= out.bound + 1e-12;
    return out;
}

}  // namespace graphon
