#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numeric>

#include "graphon/error.hpp"
#include "graphon/experiments.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/io.hpp"
#include "random_objects.hpp"

using namespace graphon;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig cfg;
    cfg.sizes = {20, 40};
    cfg.replicates = 6;
    cfg.width = 4;
    cfg.threads = 2;
    cfg.seed = 11;
    return cfg;
}

std::filesystem::path model_file(const std::string& name, const IwnModel& m) {
    const auto path = std::filesystem::temp_directory_path() / name;
    write_text_file(path, to_json(m).dump());
    return path;
}

IwnModel constant_iwn(double c) {
    auto m = random_iwn(std::vector<IwnShape>{{2, 2}, {2, 3}, {0, 1}}, Activation::sigmoid, 3);
    for (auto& l : m.layers) {
        std::fill(l.coeffs.begin(), l.coeffs.end(), 0.0);
        std::fill(l.bias.begin(), l.bias.end(), 0.0);
    }
    m.layers.back().bias[0] = c;
    return m;
}

GraphSignal graph_of(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
    return GraphSignal(n, std::move(edges), std::vector<double>(n, 1.0));
}

double delta1_bruteforce(const GraphSignal& a, const GraphSignal& b) {
    const std::size_t n = a.n();
    std::vector<std::size_t> pi(n);
    std::iota(pi.begin(), pi.end(), 0);
    double best = INFINITY;
    do {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            c += std::abs(a.features()[i] - b.features()[pi[i]]) / static_cast<double>(n);
            for (std::size_t j = 0; j < n; ++j)
                c += (a.adjacent(i, j) != b.adjacent(pi[i], pi[j])) ? 1.0 / static_cast<double>(n * n) : 0.0;
        }
        best = std::min(best, c);
    } while (std::next_permutation(pi.begin(), pi.end()));
    return best;
}

}  // namespace

TEST(GraphonSpec, ParseAndPrint) {
    for (const char* text : {"er:0.5", "sbm:5,0.8,0.3", "triangular@1000", "narrow:0.05@1000", "triangular@64"})
        EXPECT_EQ(GraphonSpec::parse(text).to_string(), text);
    const auto t = GraphonSpec::parse("triangular@64");
    EXPECT_EQ(t.kind, GraphonKind::triangular);
    EXPECT_EQ(t.resolution, 64u);
    EXPECT_EQ(GraphonSpec::parse("triangular").resolution, 1000u);
    EXPECT_EQ(GraphonSpec::parse("er").to_string(), "er:0.5");
    EXPECT_EQ(GraphonSpec::parse("sbm:3,0.5").to_string(), "sbm:3,0.5,0.3");
    for (const char* bad : {"er:1.5", "er:0.1,0.2", "narrow:0", "narrow:-1", "sbm:0,0.5,0.5", "triangular:2",
                            "wheel", "triangular@0", "er:0.5@x"})
        EXPECT_THROW(GraphonSpec::parse(bad), InvalidArgument) << bad;
}

TEST(BuildGraphon, ZooValues) {
    const auto er = build_graphon(GraphonSpec::parse("er:0.5"));
    EXPECT_EQ(er.blocks(), 1u);
    EXPECT_EQ(er.value(0, 0), 0.5);
    EXPECT_EQ(er.signal(0), 1.0);

    const auto sbm = build_graphon(GraphonSpec::parse("sbm:5,0.8,0.3"));
    EXPECT_NEAR(hom_density(path_pattern(2), sbm), 0.4, 1e-15);

    for (std::size_t m : {1u, 7u, 64u, 1000u}) {
        GraphonSpec spec;
        spec.kind = GraphonKind::triangular;
        spec.resolution = m;
        EXPECT_NEAR(hom_density(path_pattern(2), build_graphon(spec)), 0.5, 1e-13) << m;
    }

    auto narrow = GraphonSpec::parse("narrow:0.05@50");
    const auto nw = build_graphon(narrow);
    for (std::size_t i = 0; i < 50; ++i) {
        EXPECT_EQ(nw.value(i, i), 1.0);
        for (std::size_t j = 0; j < 50; ++j) {
            EXPECT_GE(nw.value(i, j), 0.0);
            EXPECT_LE(nw.value(i, j), 1.0);
        }
    }
    narrow.literal_narrow = true;
    const auto lit = build_graphon(narrow);
    for (std::size_t i = 0; i < 50; ++i)
        for (std::size_t j = 0; j < 50; ++j) EXPECT_EQ(lit.value(i, j), 1.0);

    narrow.literal_narrow = false;
    narrow.discretization = Discretization::cell_average;
    const auto avg = build_graphon(narrow);
    EXPECT_LT(avg.value(0, 0), 1.0);
    EXPECT_EQ(graphon_zoo(100).size(), 4u);
}

TEST(Quantile, LinearInterpolation) {
    EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.5), 2.5);
    EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 0.05), 1.15);
    EXPECT_DOUBLE_EQ(quantile({4, 1, 3, 2}, 1.0), 4.0);
    EXPECT_DOUBLE_EQ(quantile({7}, 0.3), 7.0);
    EXPECT_THROW((void)quantile({}, 0.5), InvalidArgument);
    EXPECT_THROW((void)quantile({1, 2}, 1.5), InvalidArgument);
}

TEST(ExperimentConfig, Validation) {
    auto cfg = small_config();
    EXPECT_NO_THROW(cfg.validate());
    cfg.sizes = {40, 20};
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = small_config();
    cfg.replicates = 0;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = small_config();
    cfg.quantile_low = 0.9;
    cfg.quantile_high = 0.1;
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg = small_config();
    cfg.models = {};
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(RunExperiment, ShapeDeterminismAndSummary) {
    auto cfg = small_config();
    cfg.graphons = {"er:0.5", "sbm:5,0.8,0.3"};
    const auto a = run_experiment(cfg);
    EXPECT_EQ(a.rows.size(), cfg.graphons.size() * cfg.models.size() * cfg.sizes.size() * cfg.replicates);
    EXPECT_EQ(a.summary.size(), cfg.graphons.size() * cfg.models.size() * cfg.sizes.size());

    auto serial = cfg;
    serial.threads = 1;
    const auto b = run_experiment(serial);
    EXPECT_EQ(a.rows_csv(), b.rows_csv());
    EXPECT_EQ(a.summary_csv(), b.summary_csv());
    EXPECT_EQ(run_convergence(cfg).rows_csv(), run_transferability(cfg).rows_csv());

    for (const auto& s : a.summary) {
        std::vector<double> outputs, errors;
        for (const auto& r : a.rows)
            if (r.graphon == s.graphon && r.model == s.model && r.n == s.n) {
                outputs.push_back(r.output);
                errors.push_back(r.abs_error);
                EXPECT_DOUBLE_EQ(r.abs_error, std::abs(r.output - s.limit));
            }
        ASSERT_EQ(outputs.size(), cfg.replicates);
        EXPECT_EQ(s.count, cfg.replicates);
        EXPECT_NEAR(s.mean_error, std::accumulate(errors.begin(), errors.end(), 0.0) / errors.size(), 1e-15);
        EXPECT_EQ(s.quantile_low, quantile(outputs, cfg.quantile_low));
        EXPECT_EQ(s.quantile_high, quantile(outputs, cfg.quantile_high));
        EXPECT_GE(s.width(), 0.0);
    }
    EXPECT_NO_THROW((void)a.find("er:0.5", "iwn", 40));
    EXPECT_THROW((void)a.find("er:0.5", "iwn", 41), InvalidArgument);
    EXPECT_EQ(a.rows_csv().substr(0, a.rows_csv().find('\n')), "graphon,model,n,replicate,output,abs_error");
}

TEST(RunExperiment, SamplesAreSharedAcrossModelLists) {
    auto both = small_config();
    auto only = small_config();
    only.models = {"iwn"};
    const auto a = run_experiment(both);
    const auto b = run_experiment(only);
    for (const auto& r : b.rows) {
        const auto it = std::find_if(a.rows.begin(), a.rows.end(), [&](const ResultRow& x) {
            return x.model == r.model && x.n == r.n && x.replicate == r.replicate;
        });
        ASSERT_NE(it, a.rows.end());
        EXPECT_EQ(it->output, r.output);
    }
}

TEST(RunExperiment, ZeroAndConstantModels) {
    auto cfg = small_config();
    const auto zero = model_file("graphon_zero_model.json", constant_iwn(0.0));
    const auto constant = model_file("graphon_constant_model.json", constant_iwn(0.37));
    cfg.models = {zero.string(), constant.string()};
    cfg.graphons = {"er:0.5", "triangular@50"};
    const auto t = run_experiment(cfg);
    for (const auto& r : t.rows) EXPECT_EQ(r.abs_error, 0.0);
    for (const auto& s : t.summary) {
        EXPECT_EQ(s.width(), 0.0);
        if (s.model == constant.string()) EXPECT_EQ(s.limit, 0.37);
    }
    EXPECT_THROW((void)run_experiment([&] {
                     auto c = small_config();
                     c.models = {"/nonexistent/model.json"};
                     return c;
                 }()),
                 Error);
}

TEST(RunExperiment, WeightedSampleLimitMode) {
    auto cfg = small_config();
    cfg.limit = LimitMode::weighted_sample;
    cfg.limit_resolution = 30;
    const auto t = run_experiment(cfg);
    EXPECT_EQ(t.rows.size(), cfg.models.size() * cfg.sizes.size() * cfg.replicates);
    auto exact = small_config();
    EXPECT_NE(t.summary_csv(), run_experiment(exact).summary_csv());
}

TEST(ParallelFor, CoversRangeAndRethrows) {
    std::vector<int> hits(100, 0);
    parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
    EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    EXPECT_THROW(parallel_for(10, 3,
                              [](std::size_t i) {
                                  if (i == 7) throw InvalidArgument("boom");
                              }),
                 InvalidArgument);
}

TEST(Delta1, SpecValuesAndOracle) {
    for (std::size_t n : {2u, 5u, 9u}) {
        std::vector<std::pair<std::size_t, std::size_t>> all;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) all.emplace_back(i, j);
        const double expect = 2.0 * static_cast<double>(all.size()) / static_cast<double>(n * n);
        EXPECT_DOUBLE_EQ(delta1_permutation(graph_of(n, all), graph_of(n, {})), expect);
        EXPECT_EQ(delta1_permutation(graph_of(n, all), graph_of(n, all)), 0.0);
    }
    const auto path = graph_of(4, {{0, 1}, {1, 2}, {2, 3}});
    const auto relabeled = graph_of(4, {{2, 0}, {0, 3}, {3, 1}});
    EXPECT_EQ(delta1_permutation(path, relabeled), 0.0);

    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 2 + rng.below(5);
        const auto a = testing_support::random_graph(rng, n, 0.5);
        const auto b = testing_support::random_graph(rng, n, 0.5);
        EXPECT_NEAR(delta1_permutation(a, b), delta1_bruteforce(a, b), 1e-15);
    }
    EXPECT_THROW((void)delta1_permutation(graph_of(10, {}), graph_of(10, {})), CapacityError);
    EXPECT_THROW((void)delta1_permutation(graph_of(3, {}), graph_of(4, {})), InvalidArgument);
}

TEST(Delta1Probe, DeterministicAndPositive) {
    const auto a = er_delta1_probe(6, 10, 5);
    const auto b = er_delta1_probe(6, 10, 5);
    EXPECT_EQ(a.values, b.values);
    EXPECT_EQ(a.values.size(), 10u);
    EXPECT_GT(a.mean, 0.0);
    EXPECT_GE(a.std, 0.0);
    EXPECT_THROW((void)er_delta1_probe(10, 1, 0), CapacityError);
}

TEST(SamplingRate, LimitAgainstItselfAndBound) {
    const auto w = build_graphon(GraphonSpec::parse("sbm:5,0.8,0.3"));
    EXPECT_EQ(cut_distance_upper(w, w, CutAlignment::local_search).value, 0.0);

    const auto rows = sampling_rate_probe(GraphonSpec::parse("er:0.5"), {50, 400}, 4, 3);
    ASSERT_EQ(rows.size(), 2u);
    for (const auto& r : rows) {
        EXPECT_GT(r.mean, 0.0);
        EXPECT_TRUE(r.within_bound());
        EXPECT_NEAR(r.bound, 15.0 / std::sqrt(std::log(static_cast<double>(r.n))), 1e-15);
    }
    EXPECT_LT(rows[1].mean, rows[0].mean);
}

TEST(SamplingRate, AggregationPreservesEdgeMass) {
    const auto w = build_graphon(GraphonSpec::parse("sbm:5,0.8,0.3"));
    const auto s = sample_simple_with_latents(w, 130, 9);
    const auto agg = aggregate_sample(s, 16);
    EXPECT_EQ(agg.blocks(), 16u);
    EXPECT_NEAR(hom_density(path_pattern(2), agg), 2.0 * s.graph.edge_count() / (130.0 * 130.0), 1e-12);
    const auto full = aggregate_sample(s, 1000);
    EXPECT_EQ(full.blocks(), 130u);
}
