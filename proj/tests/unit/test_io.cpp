#include <gtest/gtest.h>

#include <filesystem>

#include "graphon/error.hpp"
#include "graphon/experiments.hpp"
#include "graphon/io.hpp"
#include "random_objects.hpp"

using namespace graphon;

TEST(FormatReal, TwelveSignificantDigits) {
    EXPECT_EQ(format_real(0.5), "0.5");
    EXPECT_EQ(format_real(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_real(-2e-20), "-2e-20");
}

TEST(Json, StepGraphonRoundTrip) {
    Rng rng(1);
    const auto w = testing_support::random_step(rng, 4, true, 1.5);
    const auto back = step_graphon_from_json(Json::parse(to_json(w).dump()));
    EXPECT_EQ(back.block_values(), w.block_values());
    EXPECT_EQ(back.block_measures(), w.block_measures());
    EXPECT_EQ(back.signals(), w.signals());
    EXPECT_EQ(back.signal_bound(), w.signal_bound());

    const auto minimal = step_graphon_from_json(Json::parse(R"({"block_values": [[0.1, 0.2], [0.2, 0.3]]})"));
    EXPECT_EQ(minimal.block_measures(), (std::vector<double>{0.5, 0.5}));
    EXPECT_EQ(minimal.signal(1), 1.0);
    EXPECT_THROW(step_graphon_from_json(Json::parse(R"({"block_values": [[0.1, 0.2], [0.3, 0.3]]})")),
                 InvalidArgument);
    EXPECT_THROW(step_graphon_from_json(Json::parse(R"({"block_values": [[0.5]], "colour": 1})")),
                 InvalidArgument);
    EXPECT_THROW(step_graphon_from_json(Json::parse(R"({"block_values": "x"})")), InvalidArgument);
}

TEST(Json, GraphRoundTrip) {
    Rng rng(2);
    const auto g = testing_support::random_graph(rng, 7, 0.4);
    const auto back = graph_from_json(Json::parse(to_json(g).dump()));
    EXPECT_EQ(back.n(), g.n());
    EXPECT_EQ(back.edge_count(), g.edge_count());
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j) EXPECT_EQ(back.adjacent(i, j), g.adjacent(i, j));
    EXPECT_THROW(graph_from_json(Json::parse(R"({"n": 2, "edges": [[0, 0]]})")), InvalidArgument);
}

TEST(Json, PatternRoundTripAndNames) {
    const Pattern p(3, {{0, 1, 2}, {1, 2, 1}}, {1, 0, 3});
    EXPECT_EQ(pattern_from_json(Json::parse(to_json(p).dump())), p);
    EXPECT_EQ(pattern_from_json(Json("K3")), complete_pattern(3));
    EXPECT_THROW(pattern_from_json(Json("nope")), InvalidArgument);
}

TEST(Json, ModelsRoundTrip) {
    const auto iwn = random_iwn(std::vector<IwnShape>{{2, 2}, {2, 5}, {1, 3}, {0, 1}}, Activation::gelu, 4);
    const auto iback = std::get<IwnModel>(model_from_json(Json::parse(to_json(iwn).dump())));
    ASSERT_EQ(iback.layers.size(), iwn.layers.size());
    EXPECT_EQ(iback.activation, iwn.activation);
    for (std::size_t l = 0; l < iwn.layers.size(); ++l) {
        EXPECT_EQ(iback.layers[l].coeffs, iwn.layers[l].coeffs);
        EXPECT_EQ(iback.layers[l].bias, iwn.layers[l].bias);
    }
    const auto mpnn = random_mpnn(std::vector<std::size_t>{1, 6, 1}, Activation::relu, 5);
    const auto mback = std::get<MpnnModel>(model_from_json(Json::parse(to_json(mpnn).dump())));
    ASSERT_EQ(mback.layers.size(), 2u);
    EXPECT_EQ(mback.layers[0].weights, mpnn.layers[0].weights);
    EXPECT_EQ(mback.layers[1].bias, mpnn.layers[1].bias);
    EXPECT_THROW(model_from_json(Json::parse(R"({"type": "gnn", "layers": []})")), InvalidArgument);

    const auto path = std::filesystem::temp_directory_path() / "graphon_io_model.json";
    write_text_file(path, to_json(iwn).dump(2));
    EXPECT_EQ(std::get<IwnModel>(read_model_file(path)).layers[1].coeffs, iwn.layers[1].coeffs);
    EXPECT_THROW((void)read_json_file("/nonexistent/file.json"), Error);
}

TEST(Json, ConfigRoundTrip) {
    ExperimentConfig cfg;
    cfg.graphons = {"er:0.5", "narrow:0.05@200"};
    cfg.sizes = {10, 30};
    cfg.replicates = 7;
    cfg.seed = 123;
    cfg.limit = LimitMode::weighted_sample;
    cfg.activation = Activation::relu;
    const auto back = config_from_json(Json::parse(to_json(cfg).dump()), ExperimentConfig{});
    EXPECT_EQ(to_json(back), to_json(cfg));
    EXPECT_EQ(back.sizes, cfg.sizes);

    const auto partial = config_from_json(Json::parse(R"({"replicates": 3})"), cfg);
    EXPECT_EQ(partial.replicates, 3u);
    EXPECT_EQ(partial.seed, 123u);
    EXPECT_THROW(config_from_json(Json::parse(R"({"replicate": 3})"), cfg), InvalidArgument);
    EXPECT_THROW(config_from_json(Json::parse(R"({"replicates": "many"})"), cfg), InvalidArgument);
}
