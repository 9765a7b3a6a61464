#include "graphon/wl.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <tuple>

#include "graphon/error.hpp"
#include "graphon/homdensity.hpp"

namespace graphon {

namespace {

constexpr std::int64_t kMaxDenominator = 4096;
constexpr std::int64_t kMaxCommonDenominator = std::int64_t{1} << 20;
constexpr double kCoalesce = 1e-12;

std::int64_t key_bits(double x) noexcept { return std::bit_cast<std::int64_t>(x == 0.0 ? 0.0 : x); }

// Block measures as integers over a shared denominator, when every measure is
// a small-denominator rational; otherwise weights stay floating point.
struct Weights {
    bool exact = false;
    std::int64_t denominator = 1;
    std::vector<std::vector<std::int64_t>> units;
};

std::int64_t smallest_denominator(double mu) {
    for (std::int64_t q = 1; q <= kMaxDenominator; ++q) {
        const double scaled = mu * static_cast<double>(q);
        const double a = std::round(scaled);
        if (std::abs(scaled - a) <= kCoalesce && a / static_cast<double>(q) == mu) return q;
    }
    return 0;
}

Weights make_weights(const std::vector<const StepGraphonSignal*>& inputs) {
    Weights w;
    std::int64_t common = 1;
    for (const auto* g : inputs)
        for (double mu : g->block_measures()) {
            const auto q = smallest_denominator(mu);
            if (q == 0) return w;
            common = std::lcm(common, q);
            if (common > kMaxCommonDenominator) return w;
        }
    w.exact = true;
    w.denominator = common;
    for (const auto* g : inputs) {
        auto& u = w.units.emplace_back();
        for (double mu : g->block_measures()) u.push_back(std::llround(mu * static_cast<double>(common)));
    }
    return w;
}

std::size_t tuple_count(std::size_t p, std::size_t k) { return k == 1 ? p : p * p; }

std::vector<std::int64_t> initial_key(const StepGraphonSignal& g, std::size_t k, std::size_t t) {
    const std::size_t p = g.blocks();
    if (k == 1) return {key_bits(g.signal(t))};
    const std::size_t x1 = t / p, x2 = t % p;
    return {key_bits(g.value(x1, x2)), key_bits(g.signal(x1)), key_bits(g.signal(x2))};
}

// Appends the weighted color multiset of the tuples reached by substituting coordinate j.
void append_multiset(std::vector<std::int64_t>& key, const std::vector<std::uint32_t>& colors,
                     const StepGraphonSignal& g, std::size_t k, std::size_t t, std::size_t j, const Weights& weights,
                     std::size_t input, std::vector<std::pair<std::uint32_t, double>>& scratch) {
    const std::size_t p = g.blocks();
    scratch.clear();
    for (std::size_t z = 0; z < p; ++z) {
        std::size_t s = z;
        if (k == 2) s = j == 0 ? z * p + t % p : (t / p) * p + z;
        const double weight = weights.exact ? static_cast<double>(weights.units[input][z]) : g.measure(z);
        scratch.emplace_back(colors[s], weight);
    }
    std::sort(scratch.begin(), scratch.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    key.push_back(-1 - static_cast<std::int64_t>(j));
    for (std::size_t i = 0; i < scratch.size();) {
        double total = 0.0;
        std::size_t e = i;
        for (; e < scratch.size() && scratch[e].first == scratch[i].first; ++e) total += scratch[e].second;
        key.push_back(scratch[i].first);
        key.push_back(weights.exact ? static_cast<std::int64_t>(total) : std::llround(total / kCoalesce));
        i = e;
    }
}

struct JointRefinement {
    std::size_t k = 1;
    std::size_t rounds = 0;
    bool stable = false;
    std::vector<std::vector<std::uint32_t>> colors;
    std::vector<std::vector<std::int64_t>> palette;
    std::vector<std::size_t> color_counts;
};

void assign_ids(const std::vector<std::vector<std::vector<std::int64_t>>>& keys, JointRefinement& state) {
    std::map<std::vector<std::int64_t>, std::uint32_t> ids;
    for (const auto& per_input : keys)
        for (const auto& key : per_input) ids.emplace(key, 0);
    std::uint32_t next = 0;
    state.palette.clear();
    for (auto& [key, id] : ids) {
        id = next++;
        state.palette.push_back(key);
    }
    state.colors.assign(keys.size(), {});
    for (std::size_t i = 0; i < keys.size(); ++i)
        for (const auto& key : keys[i]) state.colors[i].push_back(ids.at(key));
    state.color_counts.push_back(state.palette.size());
}

JointRefinement refine_jointly(const std::vector<const StepGraphonSignal*>& inputs, std::size_t k, std::size_t rounds,
                               const Weights& weights) {
    if (k != 1 && k != 2) throw InvalidArgument("k-WL supports k = 1 and k = 2 only");
    JointRefinement state;
    state.k = k;
    std::vector<std::vector<std::vector<std::int64_t>>> keys(inputs.size());
    for (std::size_t i = 0; i < inputs.size(); ++i)
        for (std::size_t t = 0; t < tuple_count(inputs[i]->blocks(), k); ++t)
            keys[i].push_back(initial_key(*inputs[i], k, t));
    assign_ids(keys, state);

    std::vector<std::pair<std::uint32_t, double>> scratch;
    while (state.rounds < rounds) {
        for (std::size_t i = 0; i < inputs.size(); ++i) {
            const auto& g = *inputs[i];
            for (std::size_t t = 0; t < keys[i].size(); ++t) {
                auto& key = keys[i][t];
                key.assign(1, state.colors[i][t]);
                for (std::size_t j = 0; j < k; ++j)
                    append_multiset(key, state.colors[i], g, k, t, j, weights, i, scratch);
            }
        }
        const std::size_t before = state.palette.size();
        assign_ids(keys, state);
        ++state.rounds;
        if (state.palette.size() == before) {
            state.stable = true;
            break;
        }
    }
    return state;
}

ColorState extract(const JointRefinement& joint, std::size_t input) {
    ColorState s;
    s.k = joint.k;
    s.round = joint.rounds;
    s.stable = joint.stable;
    s.colors = joint.colors[input];
    s.palette = joint.palette;
    s.color_counts = joint.color_counts;
    return s;
}

}  // namespace

ColorState wl_refine(const StepGraphonSignal& w, std::size_t k, std::size_t rounds) {
    const std::vector<const StepGraphonSignal*> inputs{&w};
    return extract(refine_jointly(inputs, k, rounds, make_weights(inputs)), 0);
}

WlComparison compare_wl(const StepGraphonSignal& a, const StepGraphonSignal& b, std::size_t k, std::size_t rounds) {
    const std::vector<const StepGraphonSignal*> inputs{&a, &b};
    const Weights weights = make_weights(inputs);
    const JointRefinement joint = refine_jointly(inputs, k, rounds, weights);

    WlComparison result;
    result.exact_weights = weights.exact;
    result.rounds = joint.rounds;
    result.first = extract(joint, 0);
    result.second = extract(joint, 1);

    const std::size_t m = joint.palette.size();
    std::vector<std::vector<std::int64_t>> units(2, std::vector<std::int64_t>(m, 0));
    std::vector<std::vector<double>> mass(2, std::vector<double>(m, 0.0));
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& g = *inputs[i];
        const std::size_t p = g.blocks();
        for (std::size_t t = 0; t < joint.colors[i].size(); ++t) {
            const auto c = joint.colors[i][t];
            if (k == 1) {
                mass[i][c] += g.measure(t);
                if (weights.exact) units[i][c] += weights.units[i][t];
            } else {
                mass[i][c] += g.measure(t / p) * g.measure(t % p);
                if (weights.exact) units[i][c] += weights.units[i][t / p] * weights.units[i][t % p];
            }
        }
    }
    result.indistinguishable = true;
    for (std::size_t c = 0; c < m; ++c) {
        const bool equal = weights.exact ? units[0][c] == units[1][c] : std::abs(mass[0][c] - mass[1][c]) <= kCoalesce;
        if (!equal) result.indistinguishable = false;
        if (mass[0][c] > 0.0) result.first_distribution.push_back({static_cast<std::uint32_t>(c), mass[0][c]});
        if (mass[1][c] > 0.0) result.second_distribution.push_back({static_cast<std::uint32_t>(c), mass[1][c]});
    }
    return result;
}

bool indistinguishable(const StepGraphonSignal& a, const StepGraphonSignal& b, std::size_t k, std::size_t rounds) {
    return compare_wl(a, b, k, rounds).indistinguishable;
}

namespace {

using CanonicalForm = std::tuple<std::size_t, std::vector<PatternEdge>, std::vector<unsigned>>;

CanonicalForm canonical_form(const Pattern& pattern) {
    const std::size_t n = pattern.node_count();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    CanonicalForm best;
    bool first = true;
    do {
        std::vector<PatternEdge> edges;
        for (const auto& e : pattern.edges()) {
            auto u = perm[e.u], v = perm[e.v];
            if (u > v) std::swap(u, v);
            edges.push_back({u, v, e.multiplicity});
        }
        std::sort(edges.begin(), edges.end());
        std::vector<unsigned> exponents(n);
        for (std::size_t i = 0; i < n; ++i) exponents[perm[i]] = pattern.exponents()[i];
        CanonicalForm form{n, std::move(edges), std::move(exponents)};
        if (first || form < best) best = std::move(form);
        first = false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

bool connected(std::size_t n, const std::vector<PatternEdge>& edges) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t components = n;
    for (const auto& e : edges) {
        const auto a = find(e.u), b = find(e.v);
        if (a != b) {
            parent[a] = b;
            --components;
        }
    }
    return components == 1;
}

// Calls visit(v) for every vector of `slots` entries >= lo with sum <= total.
template <class Visit>
void bounded_vectors(std::size_t slots, unsigned lo, std::size_t total, Visit&& visit) {
    std::vector<unsigned> v(slots, lo);
    if (static_cast<std::size_t>(lo) * slots > total) return;
    std::size_t sum = static_cast<std::size_t>(lo) * slots;
    while (true) {
        visit(v);
        std::size_t i = 0;
        for (; i < slots; ++i) {
            if (sum < total) {
                ++v[i];
                ++sum;
                break;
            }
            sum -= v[i] - lo;
            v[i] = lo;
        }
        if (i == slots) return;
    }
}

}  // namespace

std::vector<Pattern> enumerate_budget_patterns(std::size_t max_treewidth, const PatternBudget& budget) {
    if (budget.max_nodes > 6) throw CapacityError("pattern budget supports at most 6 nodes");
    std::set<CanonicalForm> shapes;
    std::vector<Pattern> skeletons;
    for (std::size_t n = 1; n <= budget.max_nodes; ++n) {
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t u = 0; u < n; ++u)
            for (std::size_t v = u + 1; v < n; ++v) slots.emplace_back(u, v);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) > budget.max_total_multiplicity) continue;
            std::vector<PatternEdge> edges;
            for (std::size_t s = 0; s < slots.size(); ++s)
                if (mask >> s & 1) edges.push_back({slots[s].first, slots[s].second, 1});
            if (!connected(n, edges)) continue;
            Pattern skeleton(n, edges);
            if (!shapes.insert(canonical_form(skeleton)).second) continue;
            if (exact_treewidth(skeleton) > max_treewidth) continue;
            skeletons.push_back(std::move(skeleton));
        }
    }

    std::set<CanonicalForm> seen;
    std::vector<Pattern> patterns;
    for (const auto& skeleton : skeletons) {
        const std::size_t n = skeleton.node_count();
        const std::size_t m = skeleton.edges().size();
        bounded_vectors(m, 1, budget.max_total_multiplicity, [&](const std::vector<unsigned>& mult) {
            std::vector<PatternEdge> edges = skeleton.edges();
            for (std::size_t e = 0; e < m; ++e) edges[e].multiplicity = mult[e];
            bounded_vectors(n, 0, budget.max_exponent_sum, [&](const std::vector<unsigned>& d) {
                Pattern pattern(n, edges, d);
                if (seen.insert(canonical_form(pattern)).second) patterns.push_back(std::move(pattern));
            });
        });
    }
    return patterns;
}

WlDensityCheck crosscheck_wl_homomorphisms(const StepGraphonSignal& a, const StepGraphonSignal& b, std::size_t k,
                                         const PatternBudget& budget, double tolerance) {
    if (k != 1 && k != 2) throw InvalidArgument("k-WL supports k = 1 and k = 2 only");
    WlDensityCheck check;
    check.k = k;
    check.wl_indistinguishable = indistinguishable(a, b, k);
    for (const auto& pattern : enumerate_budget_patterns(k - 1, budget)) {
        const double diff = std::abs(hom_density(pattern, a) - hom_density(pattern, b));
        ++check.patterns_checked;
        check.max_difference = std::max(check.max_difference, diff);
        if (diff > tolerance) {
            if (check.differing_patterns == 0) check.witness = pattern_to_string(pattern);
            ++check.differing_patterns;
        }
    }
    if (check.wl_indistinguishable && check.differing_patterns > 0)
        check.violations.push_back(std::to_string(k) + "-WL indistinguishable but pattern " + check.witness +
                                   " has density difference " + std::to_string(check.max_difference));
    return check;
}

}  // namespace graphon
