#include <algorithm>
#include <limits>
#include <numeric>
#include <set>
#include <string>

#include "graphon/error.hpp"
#include "graphon/homdensity.hpp"

namespace graphon {

std::ptrdiff_t TreeDecomposition::width() const noexcept {
    std::ptrdiff_t w = -1;
    for (const auto& bag : bags) w = std::max(w, static_cast<std::ptrdiff_t>(bag.size()) - 1);
    return w;
}

bool TreeDecomposition::is_valid_for(const Pattern& pattern) const {
    const std::size_t t = bags.size();
    if (t == 0 || parent.size() != t) return false;
    std::size_t roots = 0;
    for (std::size_t i = 0; i < t; ++i) {
        if (parent[i] < 0)
            ++roots;
        else if (static_cast<std::size_t>(parent[i]) >= t)
            return false;
    }
    if (roots != 1) return false;
    // Acyclic: every node reaches the root within t steps.
    for (std::size_t i = 0; i < t; ++i) {
        std::ptrdiff_t cur = static_cast<std::ptrdiff_t>(i);
        std::size_t steps = 0;
        while (parent[static_cast<std::size_t>(cur)] >= 0 && steps <= t) {
            cur = parent[static_cast<std::size_t>(cur)];
            ++steps;
        }
        if (steps > t) return false;
    }
    const std::size_t v = pattern.node_count();
    for (const auto& bag : bags)
        for (std::size_t x : bag)
            if (x >= v) return false;
    auto contains = [&](std::size_t bag, std::size_t x) {
        return std::binary_search(bags[bag].begin(), bags[bag].end(), x);
    };
    // Bags containing x are connected iff exactly one of them has a parent
    // outside the set.
    for (std::size_t x = 0; x < v; ++x) {
        std::size_t count = 0, tops = 0;
        for (std::size_t i = 0; i < t; ++i) {
            if (!contains(i, x)) continue;
            ++count;
            if (parent[i] < 0 || !contains(static_cast<std::size_t>(parent[i]), x)) ++tops;
        }
        if (count == 0 || tops != 1) return false;
    }
    for (const auto& e : pattern.edges()) {
        bool covered = false;
        for (std::size_t i = 0; i < t && !covered; ++i) covered = contains(i, e.u) && contains(i, e.v);
        if (!covered) return false;
    }
    return true;
}

TreeDecomposition decomposition_from_order(const Pattern& pattern, std::span<const std::size_t> order) {
    const std::size_t v = pattern.node_count();
    if (v == 0) throw InvalidArgument("cannot decompose an empty pattern");
    if (order.size() != v) throw InvalidArgument("elimination order has the wrong length");
    std::vector<std::set<std::size_t>> adj(v);
    for (const auto& e : pattern.edges()) {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    std::vector<std::size_t> position(v, v);
    for (std::size_t i = 0; i < v; ++i) {
        if (order[i] >= v || position[order[i]] != v) throw InvalidArgument("elimination order is not a permutation");
        position[order[i]] = i;
    }

    TreeDecomposition td;
    td.bags.resize(v);
    td.parent.assign(v, -1);
    // Bag i belongs to the i-th eliminated node.
    for (std::size_t i = 0; i < v; ++i) {
        const std::size_t x = order[i];
        std::vector<std::size_t> bag{x};
        bag.insert(bag.end(), adj[x].begin(), adj[x].end());
        std::sort(bag.begin(), bag.end());
        td.bags[i] = bag;
        std::size_t next = v;
        for (std::size_t y : adj[x]) next = std::min(next, position[y]);
        if (next < v) td.parent[i] = static_cast<std::ptrdiff_t>(next);
        for (std::size_t a : adj[x])
            for (std::size_t b : adj[x])
                if (a != b) adj[a].insert(b);
        for (std::size_t y : adj[x]) adj[y].erase(x);
        adj[x].clear();
    }
    // Join the components' roots into a single tree.
    std::ptrdiff_t last_root = -1;
    for (std::size_t i = v; i-- > 0;) {
        if (td.parent[i] >= 0) continue;
        if (last_root < 0)
            last_root = static_cast<std::ptrdiff_t>(i);
        else
            td.parent[i] = last_root;
    }
    return td;
}

TreeDecomposition tree_decompose(const Pattern& pattern) {
    const std::size_t v = pattern.node_count();
    if (v == 0) throw InvalidArgument("cannot decompose an empty pattern");
    std::vector<std::set<std::size_t>> adj(v);
    for (const auto& e : pattern.edges()) {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    std::vector<bool> done(v, false);
    std::vector<std::size_t> order;
    for (std::size_t step = 0; step < v; ++step) {
        std::size_t best = v, best_fill = std::numeric_limits<std::size_t>::max(), best_deg = best_fill;
        for (std::size_t x = 0; x < v; ++x) {
            if (done[x]) continue;
            std::size_t fill = 0;
            for (auto a = adj[x].begin(); a != adj[x].end(); ++a)
                for (auto b = std::next(a); b != adj[x].end(); ++b)
                    if (!adj[*a].contains(*b)) ++fill;
            const std::size_t deg = adj[x].size();
            if (fill < best_fill || (fill == best_fill && deg < best_deg)) {
                best = x;
                best_fill = fill;
                best_deg = deg;
            }
        }
        order.push_back(best);
        done[best] = true;
        for (std::size_t a : adj[best])
            for (std::size_t b : adj[best])
                if (a != b) adj[a].insert(b);
        for (std::size_t y : adj[best]) adj[y].erase(best);
        adj[best].clear();
    }
    return decomposition_from_order(pattern, order);
}

std::size_t exact_treewidth(const Pattern& pattern, std::size_t max_nodes) {
    const std::size_t v = pattern.node_count();
    if (v == 0) return 0;
    if (v > max_nodes)
        throw CapacityError("exact_treewidth: " + std::to_string(v) + " nodes exceeds the limit of " +
                            std::to_string(max_nodes));
    const auto base = pattern.simple_adjacency();
    std::vector<std::size_t> order(v);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::size_t best = v - 1;
    do {
        auto adj = base;
        std::vector<bool> gone(v, false);
        std::size_t width = 0;
        for (std::size_t x : order) {
            std::vector<std::size_t> nbrs;
            for (std::size_t y = 0; y < v; ++y)
                if (!gone[y] && adj[x][y]) nbrs.push_back(y);
            width = std::max(width, nbrs.size());
            if (width >= best) break;
            for (std::size_t a : nbrs)
                for (std::size_t b : nbrs)
                    if (a != b) adj[a][b] = true;
            gone[x] = true;
        }
        best = std::min(best, width);
    } while (best > 0 && std::next_permutation(order.begin(), order.end()));
    return best;
}

}  // namespace graphon
