#include <gtest/gtest.h>

#include <cmath>

#include "graphon/error.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/pattern.hpp"
#include "oracles.hpp"
#include "random_objects.hpp"

using namespace graphon;
using testing_support::random_pattern;
using testing_support::random_step;

namespace {

StepGraphonSignal constant(double c, double f = 1.0) {
    return StepGraphonSignal::uniform(SquareMatrix(1, c), {f}, std::max(1.0, std::abs(f)));
}

StepGraphonSignal sbm(std::size_t blocks, double p, double q) {
    SquareMatrix v(blocks);
    for (std::size_t i = 0; i < blocks; ++i)
        for (std::size_t j = 0; j < blocks; ++j) v(i, j) = i == j ? p : q;
    return StepGraphonSignal::uniform(std::move(v), std::vector<double>(blocks, 1.0), 1.0);
}

Pattern double_edge() { return Pattern(2, {{0, 1, 2}}); }

}  // namespace

TEST(Pattern, NormalizesAndValidates) {
    const Pattern p(3, {{2, 1, 1}, {1, 2, 2}, {0, 1, 1}});
    ASSERT_EQ(p.edges().size(), 2u);
    EXPECT_EQ(p.edges()[0], (PatternEdge{0, 1, 1}));
    EXPECT_EQ(p.edges()[1], (PatternEdge{1, 2, 3}));
    EXPECT_EQ(p.edge_count(), 4u);
    EXPECT_FALSE(p.is_simple());
    EXPECT_THROW(Pattern(2, {{1, 1, 1}}), InvalidArgument);
    EXPECT_THROW(Pattern(2, {{0, 2, 1}}), InvalidArgument);
    EXPECT_THROW(Pattern(2, {{0, 1, 0}}), InvalidArgument);
    EXPECT_THROW(Pattern(2, {}, {1}), InvalidArgument);
}

TEST(Pattern, Registry) {
    EXPECT_EQ(pattern_by_name("K3"), cycle_pattern(3));
    EXPECT_EQ(pattern_by_name("C3"), complete_pattern(3));
    EXPECT_EQ(pattern_by_name("P3"), path_pattern(3));
    EXPECT_EQ(pattern_by_name("C8").edge_count(), 8u);
    EXPECT_EQ(pattern_by_name("M_2").exponents(), std::vector<unsigned>{2});
    EXPECT_THROW(pattern_by_name("C2"), InvalidArgument);
    EXPECT_THROW(pattern_by_name("nope"), InvalidArgument);
    for (const auto& name : registered_pattern_names()) EXPECT_NO_THROW(pattern_by_name(name));
}

TEST(Pattern, SimplifyIsIdempotent) {
    EXPECT_EQ(simplify_pattern(double_edge()), Pattern(2, {{0, 1, 1}}));
    const auto tri = complete_pattern(3);
    EXPECT_EQ(simplify_pattern(tri), tri);
}

TEST(TBruteforce, SpecValues) {
    EXPECT_DOUBLE_EQ(t_bruteforce(pattern_by_name("K2"), constant(0.5)), 0.5);
    EXPECT_DOUBLE_EQ(t_bruteforce(pattern_by_name("K3"), constant(0.5)), 0.125);
    EXPECT_NEAR(t_bruteforce(pattern_by_name("K2"), sbm(5, 0.8, 0.3)), 0.4, 1e-15);
    EXPECT_DOUBLE_EQ(t_bruteforce(pattern_by_name("M_2"), constant(0.5, 3.0)), 9.0);
}

TEST(TBruteforce, CapacityError) {
    Rng rng(1);
    EXPECT_THROW((void)t_bruteforce(path_pattern(6), random_step(rng, 8), 1000), CapacityError);
}

TEST(TreeDecompose, Widths) {
    EXPECT_EQ(tree_decompose(path_pattern(5)).width(), 1);
    EXPECT_EQ(tree_decompose(Pattern(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}})).width(), 1);
    EXPECT_EQ(tree_decompose(complete_pattern(3)).width(), 2);
    EXPECT_EQ(tree_decompose(Pattern(1, {})).width(), 0);
    EXPECT_EQ(tree_decompose(cycle_pattern(6)).width(), 2);
    EXPECT_EQ(tree_decompose(complete_pattern(5)).width(), 4);
    EXPECT_THROW(tree_decompose(Pattern(0, {})), InvalidArgument);
}

TEST(TreeDecompose, ValidAndMatchesExactTreewidthOnSmallPatterns) {
    Rng rng(2);
    for (int trial = 0; trial < 150; ++trial) {
        const auto p = random_pattern(rng, 8, 2, 0);
        const auto d = tree_decompose(p);
        ASSERT_TRUE(d.is_valid_for(p)) << pattern_to_string(p);
        const auto tw = exact_treewidth(p);
        EXPECT_GE(static_cast<std::size_t>(d.width()), tw);
        // Min-fill is exact on these sizes in practice; allow one slack for safety.
        EXPECT_LE(static_cast<std::size_t>(d.width()), tw + 1) << pattern_to_string(p);
    }
    EXPECT_EQ(exact_treewidth(cycle_pattern(7)), 2u);
    EXPECT_EQ(exact_treewidth(complete_pattern(6)), 5u);
    EXPECT_THROW((void)exact_treewidth(path_pattern(9)), CapacityError);
}

TEST(TreeDecompose, InvalidDecompositionsAreRejected) {
    const auto tri = complete_pattern(3);
    TreeDecomposition missing_edge{{{0, 1}, {1, 2}}, {-1, 0}};
    EXPECT_FALSE(missing_edge.is_valid_for(tri));
    // Node 0 sits in bags 0 and 2 but not in bag 1 between them.
    TreeDecomposition disconnected{{{0, 1, 2}, {1}, {0}}, {-1, 0, 1}};
    EXPECT_FALSE(disconnected.is_valid_for(Pattern(3, {{0, 1, 1}})));
    Rng rng(3);
    EXPECT_THROW((void)t_dp(tri, missing_edge, random_step(rng, 3)), InvalidArgument);
}

TEST(TDp, MatchesBruteforceAndRecursiveOracle) {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_pattern(rng, 5, 3, 3);
        const auto w = random_step(rng, 1 + rng.below(8), true, 1.5);
        const double dp = t_dp(p, tree_decompose(p), w);
        EXPECT_NEAR(dp, t_bruteforce(p, w), 1e-10) << pattern_to_string(p);
        EXPECT_NEAR(dp, oracle::hom_density_recursive(p, w), 1e-10) << pattern_to_string(p);
    }
}

TEST(TDp, AnyValidDecompositionGivesTheSameValue) {
    Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = random_pattern(rng, 6, 2, 2);
        const auto w = random_step(rng, 4);
        const auto perm = testing_support::random_permutation(rng, p.node_count());
        const auto d = decomposition_from_order(p, perm);
        ASSERT_TRUE(d.is_valid_for(p));
        EXPECT_NEAR(t_dp(p, d, w), hom_density(p, w), 1e-12);
    }
}

TEST(TDp, SpecValues) {
    for (double q : {0.0, 0.3, 0.9}) {
        EXPECT_NEAR(hom_density(path_pattern(3), constant(q)), q * q, 1e-15);
        EXPECT_NEAR(hom_density(double_edge(), constant(q)), q * q, 1e-15);
    }
    Rng rng(6);
    for (int trial = 0; trial < 20; ++trial) {
        const auto binary = random_step(rng, 6, true, 1.0, true);
        EXPECT_EQ(t_bruteforce(double_edge(), binary), t_bruteforce(pattern_by_name("K2"), binary));
    }
}

TEST(HomDensity, Properties) {
    Rng rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        const auto w = random_step(rng, 1 + rng.below(6));
        const auto f1 = random_pattern(rng, 3, 2, 2);
        const auto f2 = random_pattern(rng, 3, 2, 2);
        EXPECT_NEAR(hom_density(disjoint_union(f1, f2), w), hom_density(f1, w) * hom_density(f2, w), 1e-12);

        const auto perm = testing_support::random_permutation(rng, w.blocks());
        EXPECT_NEAR(hom_density(f1, w.permuted(perm)), hom_density(f1, w), 1e-12);
        const std::size_t m = 2 + rng.below(4);
        EXPECT_NEAR(hom_density(f1, refine(w, m)), hom_density(f1, w), 1e-12);

        // d = 0 ignores the signal.
        const Pattern plain(f1.node_count(), f1.edges());
        const auto unsigned_w = StepGraphonSignal(w.block_values(), w.block_measures(),
                                                  std::vector<double>(w.blocks(), 0.0), 1.0);
        EXPECT_EQ(hom_density(plain, w), hom_density(plain, unsigned_w));

        const auto binary = random_step(rng, 5, true, 1.0, true);
        EXPECT_EQ(t_bruteforce(f2, binary), t_bruteforce(simplify_pattern(f2), binary));
    }
    EXPECT_EQ(hom_density(Pattern(0, {}), constant(0.3)), 1.0);
}

TEST(CountingBound, SpecValues) {
    const auto k2 = pattern_by_name("K2");
    const auto cb = counting_bound(k2, constant(0.5), constant(0.25));
    EXPECT_DOUBLE_EQ(cb.actual, 0.25);
    EXPECT_DOUBLE_EQ(cb.bound, 1.0);
    EXPECT_TRUE(cb.holds);
    Rng rng(8);
    const auto a = random_step(rng, 4);
    const auto same = counting_bound(complete_pattern(3), a, a);
    EXPECT_EQ(same.actual, 0.0);
    EXPECT_TRUE(same.holds);
}

TEST(CountingBound, RejectsMultigraphsAndMismatchedBounds) {
    Rng rng(9);
    const auto a = random_step(rng, 3);
    EXPECT_THROW((void)counting_bound(double_edge(), a, a), InvalidArgument);
    const auto b = random_step(rng, 3, true, 2.0);
    EXPECT_THROW((void)counting_bound(pattern_by_name("K2"), a, b), InvalidArgument);
}

TEST(CountingBound, HoldsOnRandomPairs) {
    Rng rng(10);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = random_pattern(rng, 4, 1, 3, true);
        const double r = rng.uniform(0.5, 2.0);
        const auto a = random_step(rng, 1 + rng.below(8), true, r);
        const auto b = random_step(rng, 1 + rng.below(8), true, r);
        const auto cb = counting_bound(p, a, b);
        EXPECT_TRUE(cb.holds) << pattern_to_string(p) << " actual " << cb.actual << " bound " << cb.bound;
    }
}
