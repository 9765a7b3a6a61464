#include "graphon/io.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "graphon/error.hpp"
#include "graphon/experiments.hpp"

namespace graphon {

namespace {

template <class F>
auto guarded(const char* what, F&& f) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed ") + what + " JSON: " + e.what());
    }
}

void reject_unknown_keys(const Json& j, const std::set<std::string>& known, const char* what) {
    if (!j.is_object()) throw InvalidArgument(std::string(what) + " JSON must be an object");
    for (const auto& item : j.items())
        if (!known.contains(item.key()))
            throw InvalidArgument(std::string("unknown key '") + item.key() + "' in " + what + " JSON");
}

}  // namespace

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

Json to_json(const StepGraphonSignal& w) {
    Json values = Json::array();
    for (std::size_t i = 0; i < w.blocks(); ++i) {
        const auto row = w.block_values().row(i);
        values.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return {{"block_values", values},
            {"block_measures", w.block_measures()},
            {"signal", w.signals()},
            {"signal_bound", w.signal_bound()}};
}

StepGraphonSignal step_graphon_from_json(const Json& j) {
    return guarded("step graphon", [&] {
        reject_unknown_keys(j, {"block_values", "block_measures", "signal", "signal_bound"}, "step graphon");
        const auto rows = j.at("block_values").get<std::vector<std::vector<double>>>();
        const std::size_t p = rows.size();
        SquareMatrix values(p);
        for (std::size_t i = 0; i < p; ++i) {
            if (rows[i].size() != p) throw InvalidArgument("step graphon values must be a square matrix");
            for (std::size_t k = 0; k < p; ++k) values(i, k) = rows[i][k];
        }
        auto signal = j.contains("signal") ? j["signal"].get<std::vector<double>>() : std::vector<double>(p, 1.0);
        const double bound = j.value("signal_bound", 1.0);
        if (!j.contains("block_measures")) return StepGraphonSignal::uniform(std::move(values), std::move(signal), bound);
        return StepGraphonSignal(std::move(values), j["block_measures"].get<std::vector<double>>(), std::move(signal),
                                 bound);
    });
}

Json to_json(const GraphSignal& g) {
    Json edges = Json::array();
    for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
    return {{"n", g.n()}, {"edges", edges}, {"features", g.features()}};
}

GraphSignal graph_from_json(const Json& j) {
    return guarded("graph", [&] {
        reject_unknown_keys(j, {"n", "edges", "features"}, "graph");
        const auto n = j.at("n").get<std::size_t>();
        std::vector<std::pair<std::size_t, std::size_t>> edges;
        for (const auto& e : j.value("edges", Json::array())) {
            if (!e.is_array() || e.size() != 2) throw InvalidArgument("graph edges must be [u, v] pairs");
            edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
        }
        auto features =
            j.contains("features") ? j["features"].get<std::vector<double>>() : std::vector<double>(n, 1.0);
        return GraphSignal(n, edges, std::move(features));
    });
}

Json to_json(const Pattern& pattern) {
    Json edges = Json::array();
    for (const auto& e : pattern.edges()) edges.push_back({e.u, e.v, e.multiplicity});
    return {{"nodes", pattern.node_count()}, {"edges", edges}, {"exponents", pattern.exponents()}};
}

Pattern pattern_from_json(const Json& j) {
    return guarded("pattern", [&] {
        if (j.is_string()) return pattern_by_name(j.get<std::string>());
        reject_unknown_keys(j, {"nodes", "edges", "exponents"}, "pattern");
        const auto n = j.at("nodes").get<std::size_t>();
        std::vector<PatternEdge> edges;
        for (const auto& e : j.value("edges", Json::array())) {
            if (!e.is_array() || e.size() < 2 || e.size() > 3)
                throw InvalidArgument("pattern edges must be [u, v] or [u, v, multiplicity]");
            edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>(), e.size() == 3 ? e[2].get<unsigned>() : 1u});
        }
        auto exponents =
            j.contains("exponents") ? j["exponents"].get<std::vector<unsigned>>() : std::vector<unsigned>(n, 0);
        return Pattern(n, std::move(edges), std::move(exponents));
    });
}

Json to_json(const MpnnModel& model) {
    Json layers = Json::array();
    for (const auto& l : model.layers)
        layers.push_back({{"k_in", 1}, {"k_out", 1}, {"d_in", l.d_in}, {"d_out", l.d_out}, {"coeffs", l.weights},
                          {"bias", l.bias}});
    return {{"type", "mpnn"}, {"activation", std::string(activation_name(model.activation))}, {"layers", layers}};
}

Json to_json(const IwnModel& model) {
    Json layers = Json::array();
    for (const auto& l : model.layers)
        layers.push_back({{"k_in", l.k_in}, {"k_out", l.k_out}, {"d_in", l.d_in}, {"d_out", l.d_out},
                          {"coeffs", l.coeffs}, {"bias", l.bias}});
    return {{"type", "iwn"}, {"activation", std::string(activation_name(model.activation))}, {"layers", layers}};
}

std::variant<MpnnModel, IwnModel> model_from_json(const Json& j) {
    return guarded("model", [&]() -> std::variant<MpnnModel, IwnModel> {
        reject_unknown_keys(j, {"type", "activation", "layers"}, "model");
        const auto type = j.at("type").get<std::string>();
        const auto act = activation_from_name(j.value("activation", std::string("sigmoid")));
        const std::set<std::string> layer_keys{"k_in", "k_out", "d_in", "d_out", "coeffs", "bias"};
        if (type == "mpnn") {
            MpnnModel m;
            m.activation = act;
            for (const auto& l : j.at("layers")) {
                reject_unknown_keys(l, layer_keys, "model layer");
                if (l.value("k_in", 1) != 1 || l.value("k_out", 1) != 1)
                    throw InvalidArgument("MPNN layers must have k_in = k_out = 1");
                m.layers.push_back({l.at("d_in").get<std::size_t>(), l.at("d_out").get<std::size_t>(),
                                    l.at("coeffs").get<std::vector<double>>(), l.at("bias").get<std::vector<double>>()});
            }
            m.validate();
            return m;
        }
        if (type == "iwn") {
            IwnModel m;
            m.activation = act;
            for (const auto& l : j.at("layers")) {
                reject_unknown_keys(l, layer_keys, "model layer");
                m.layers.push_back({l.at("k_in").get<std::size_t>(), l.at("k_out").get<std::size_t>(),
                                    l.at("d_in").get<std::size_t>(), l.at("d_out").get<std::size_t>(),
                                    l.at("coeffs").get<std::vector<double>>(), l.at("bias").get<std::vector<double>>()});
            }
            m.validate();
            return m;
        }
        throw InvalidArgument("model type must be 'mpnn' or 'iwn', got '" + type + "'");
    });
}

ExperimentConfig config_from_json(const Json& j, const ExperimentConfig& base) {
    return guarded("config", [&] {
        reject_unknown_keys(j,
                            {"models", "graphons", "sizes", "replicates", "limit_resolution", "seed", "quantiles",
                             "limit", "layers", "width", "activation", "threads"},
                            "config");
        ExperimentConfig cfg = base;
        if (j.contains("models")) cfg.models = j["models"].get<std::vector<std::string>>();
        if (j.contains("graphons")) cfg.graphons = j["graphons"].get<std::vector<std::string>>();
        if (j.contains("sizes")) cfg.sizes = j["sizes"].get<std::vector<std::size_t>>();
        if (j.contains("replicates")) cfg.replicates = j["replicates"].get<std::size_t>();
        if (j.contains("limit_resolution")) cfg.limit_resolution = j["limit_resolution"].get<std::size_t>();
        if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("quantiles")) {
            const auto q = j["quantiles"].get<std::vector<double>>();
            if (q.size() != 2) throw InvalidArgument("quantiles must be [low, high]");
            cfg.quantile_low = q[0];
            cfg.quantile_high = q[1];
        }
        if (j.contains("limit")) {
            const auto mode = j["limit"].get<std::string>();
            if (mode == "step_graphon")
                cfg.limit = LimitMode::step_graphon;
            else if (mode == "weighted_sample")
                cfg.limit = LimitMode::weighted_sample;
            else
                throw InvalidArgument("limit must be 'step_graphon' or 'weighted_sample'");
        }
        if (j.contains("layers")) cfg.layers = j["layers"].get<std::size_t>();
        if (j.contains("width")) cfg.width = j["width"].get<std::size_t>();
        if (j.contains("activation")) cfg.activation = activation_from_name(j["activation"].get<std::string>());
        if (j.contains("threads")) cfg.threads = j["threads"].get<std::size_t>();
        cfg.validate();
        return cfg;
    });
}

Json to_json(const ExperimentConfig& cfg) {
    return {{"models", cfg.models},
            {"graphons", cfg.graphons},
            {"sizes", cfg.sizes},
            {"replicates", cfg.replicates},
            {"limit_resolution", cfg.limit_resolution},
            {"seed", cfg.seed},
            {"quantiles", {cfg.quantile_low, cfg.quantile_high}},
            {"limit", cfg.limit == LimitMode::step_graphon ? "step_graphon" : "weighted_sample"},
            {"layers", cfg.layers},
            {"width", cfg.width},
            {"activation", std::string(activation_name(cfg.activation))},
            {"threads", cfg.threads}};
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error("cannot parse '" + path.string() + "': " + e.what());
    }
}

std::variant<MpnnModel, IwnModel> read_model_file(const std::filesystem::path& path) {
    return model_from_json(read_json_file(path));
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace graphon
