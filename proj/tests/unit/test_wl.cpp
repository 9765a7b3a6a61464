#include <gtest/gtest.h>

#include <map>

#include "graphon/error.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/wl.hpp"
#include "random_objects.hpp"

using namespace graphon;
using testing_support::random_step;

namespace {

StepGraphonSignal graph_of(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
    return from_graph(GraphSignal(n, edges, std::vector<double>(n, 1.0)));
}

StepGraphonSignal cycle6() { return graph_of(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}); }
StepGraphonSignal two_triangles() { return graph_of(6, {{0, 1}, {1, 2}, {2, 0}, {3, 4}, {4, 5}, {5, 3}}); }
StepGraphonSignal star4() { return graph_of(4, {{0, 1}, {0, 2}, {0, 3}}); }
StepGraphonSignal path4() { return graph_of(4, {{0, 1}, {1, 2}, {2, 3}}); }

std::map<std::uint32_t, std::size_t> histogram(const ColorState& s) {
    std::map<std::uint32_t, std::size_t> h;
    for (auto c : s.colors) ++h[c];
    return h;
}

// True when every class of `fine` lies inside one class of `coarse`.
bool refines(const std::vector<std::uint32_t>& fine, const std::vector<std::uint32_t>& coarse) {
    std::map<std::uint32_t, std::uint32_t> parent;
    for (std::size_t t = 0; t < fine.size(); ++t) {
        const auto [it, inserted] = parent.emplace(fine[t], coarse[t]);
        if (!inserted && it->second != coarse[t]) return false;
    }
    return true;
}

}  // namespace

TEST(WlRefine, RejectsUnsupportedK) {
    EXPECT_THROW((void)wl_refine(cycle6(), 3, 1), InvalidArgument);
    EXPECT_THROW((void)wl_refine(cycle6(), 0, 1), InvalidArgument);
}

TEST(WlRefine, InitialColorsFollowTupleLayout) {
    const auto s1 = wl_refine(path4(), 1, 0);
    EXPECT_EQ(s1.color_count(), 1u);
    const auto s2 = wl_refine(path4(), 2, 0);
    EXPECT_EQ(s2.colors.size(), 16u);
    EXPECT_EQ(s2.color_count(), 2u);  // edge vs non-edge, signals all equal
    EXPECT_EQ(s2.colors[0 * 4 + 1], s2.colors[1 * 4 + 2]);
    EXPECT_NE(s2.colors[0 * 4 + 1], s2.colors[0 * 4 + 2]);
}

TEST(WlRefine, IsomorphicInputsShareHistogramsEveryRound) {
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        const auto w = random_step(rng, 5, false, 1.0, true);
        const auto p = w.permuted(testing_support::random_permutation(rng, 5));
        for (std::size_t k : {1u, 2u}) {
            const auto cmp = compare_wl(w, p, k);
            EXPECT_TRUE(cmp.indistinguishable);
            for (std::size_t r = 0; r <= 3; ++r) {
                const auto joint = compare_wl(w, p, k, r);
                EXPECT_EQ(histogram(joint.first), histogram(joint.second)) << "k=" << k << " round " << r;
            }
        }
    }
}

TEST(WlRefine, MonotoneRefinementAndStabilization) {
    Rng rng(2);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t p = 3 + rng.below(4);
        const auto w = random_step(rng, p, trial % 2 == 0, 1.0, trial % 3 == 0);
        for (std::size_t k : {1u, 2u}) {
            const auto full = wl_refine(w, k);
            EXPECT_TRUE(full.stable);
            EXPECT_LE(full.round, k == 1 ? p : p * p);
            for (std::size_t r = 0; r + 1 <= full.round; ++r) {
                const auto a = wl_refine(w, k, r);
                const auto b = wl_refine(w, k, r + 1);
                EXPECT_TRUE(refines(b.colors, a.colors));
                EXPECT_GE(b.color_count(), a.color_count());
            }
            const auto more = wl_refine(w, k, full.round + 5);
            EXPECT_EQ(more.colors, full.colors);
        }
    }
}

TEST(WlRefine, OneWlSeesOnlyTheSignalDistribution) {
    // With k = 1 the substituted coordinate ranges over all of [0,1], so the
    // graph structure never enters; only the law of f does.
    EXPECT_TRUE(indistinguishable(star4(), path4(), 1));
    const auto a = StepGraphonSignal::uniform(SquareMatrix(2, 0.5), {1.0, -1.0}, 1.0);
    const auto b = StepGraphonSignal::uniform(SquareMatrix(2, 0.5), {1.0, 1.0}, 1.0);
    EXPECT_FALSE(indistinguishable(a, b, 1));
}

TEST(WlRefine, TwoWlIsColorRefinement) {
    EXPECT_FALSE(indistinguishable(star4(), path4(), 2));
    EXPECT_TRUE(indistinguishable(cycle6(), two_triangles(), 2));
    EXPECT_TRUE(indistinguishable(cycle6(), two_triangles(), 1));
    // The triangle separates them but has treewidth 2, outside the reach of k = 2.
    EXPECT_NE(hom_density(complete_pattern(3), cycle6()), hom_density(complete_pattern(3), two_triangles()));
}

TEST(Indistinguishable, RefinementAndSelf) {
    Rng rng(3);
    for (int trial = 0; trial < 8; ++trial) {
        const auto a = random_step(rng, 4, trial % 2 == 0);
        for (std::size_t k : {1u, 2u}) {
            EXPECT_TRUE(indistinguishable(a, a, k));
            EXPECT_TRUE(indistinguishable(a, refine(a, 3), k));
        }
    }
}

TEST(Indistinguishable, ErHalfVersusTriangularGrid) {
    SquareMatrix tri(8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 8; ++j) tri(i, j) = ((i + 0.5) / 8 + (j + 0.5) / 8) / 2;
    const auto triangular = StepGraphonSignal::uniform(tri, std::vector<double>(8, 1.0), 1.0);
    const auto er = StepGraphonSignal::uniform(SquareMatrix(1, 0.5), {1.0}, 1.0);
    EXPECT_NE(hom_density(path_pattern(3), er), hom_density(path_pattern(3), triangular));
    EXPECT_FALSE(indistinguishable(er, triangular, 2));
    EXPECT_TRUE(indistinguishable(er, triangular, 1));
}

TEST(Indistinguishable, HierarchyAndFloatingWeights) {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = random_step(rng, 3, true, 1.0, true);
        const auto b = random_step(rng, 3, true, 1.0, true);
        const auto c2 = compare_wl(a, b, 2);
        EXPECT_FALSE(c2.exact_weights);
        if (c2.indistinguishable) EXPECT_TRUE(indistinguishable(a, b, 1));
    }
    const auto grid = compare_wl(cycle6(), two_triangles(), 2);
    EXPECT_TRUE(grid.exact_weights);
}

TEST(BudgetPatterns, CountsAndShapes) {
    const auto tw0 = enumerate_budget_patterns(0);
    EXPECT_EQ(tw0.size(), 4u);  // single node with D = 0..3
    for (const auto& p : tw0) EXPECT_EQ(p.node_count(), 1u);

    PatternBudget simple{5, 4, 0};
    std::size_t skeletons = 0;
    for (const auto& p : enumerate_budget_patterns(1, simple))
        if (p.is_simple()) ++skeletons;
    EXPECT_EQ(skeletons, 1u + 1u + 1u + 2u + 3u);  // trees on 1..5 nodes

    const auto trees = enumerate_budget_patterns(1);
    for (const auto& p : trees) {
        EXPECT_LE(exact_treewidth(p), 1u);
        EXPECT_LE(p.edge_count(), 6u);
        EXPECT_LE(p.total_exponent(), 3u);
    }
    const auto with_cycles = enumerate_budget_patterns(2, PatternBudget{3, 3, 0});
    bool has_triangle = false;
    for (const auto& p : with_cycles) has_triangle |= p == complete_pattern(3);
    EXPECT_TRUE(has_triangle);
}

TEST(Crosscheck, ConsistentOnCuratedPairs) {
    const auto k1 = crosscheck_wl_homomorphisms(cycle6(), two_triangles(), 1);
    EXPECT_TRUE(k1.wl_indistinguishable);
    EXPECT_EQ(k1.differing_patterns, 0u);
    EXPECT_TRUE(k1.consistent());

    const auto k2 = crosscheck_wl_homomorphisms(cycle6(), two_triangles(), 2);
    EXPECT_TRUE(k2.wl_indistinguishable);
    EXPECT_EQ(k2.differing_patterns, 0u);
    EXPECT_TRUE(k2.consistent());

    const auto sp = crosscheck_wl_homomorphisms(star4(), path4(), 2);
    EXPECT_FALSE(sp.wl_indistinguishable);
    EXPECT_GT(sp.differing_patterns, 0u);
    EXPECT_TRUE(sp.consistent());

    Rng rng(5);
    const auto a = random_step(rng, 4);
    const auto iso = crosscheck_wl_homomorphisms(a, refine(a.permuted(std::vector<std::size_t>{3, 1, 0, 2}), 2), 2);
    EXPECT_TRUE(iso.wl_indistinguishable);
    EXPECT_TRUE(iso.consistent());
    EXPECT_LE(iso.max_difference, 1e-10);
}
