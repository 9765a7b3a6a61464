#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "acceptance.hpp"
#include "graphon/distance.hpp"
#include "graphon/error.hpp"
#include "graphon/experiments.hpp"
#include "graphon/homdensity.hpp"
#include "graphon/io.hpp"
#include "graphon/wl.hpp"

using namespace graphon;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "csv";
    std::size_t threads = 0;
    std::string config;
};

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Spec text ("er:0.5", "narrow:0.05@200") or a JSON file holding a step
/// graphon-signal or a graph.
StepGraphonSignal load_graphon(const std::string& text) {
    if (!ends_with(text, ".json")) return build_graphon(GraphonSpec::parse(text));
    const auto j = read_json_file(text);
    if (j.is_object() && j.contains("n")) return from_graph(graph_from_json(j));
    return step_graphon_from_json(j);
}

Pattern load_pattern(const std::string& text) {
    return ends_with(text, ".json") ? pattern_from_json(read_json_file(text)) : pattern_by_name(text);
}

double rounded(double x) { return std::stod(format_real(x)); }

std::string csv_cell(const Json& v) {
    if (v.is_null()) return "";
    if (v.is_number_float()) return format_real(v.get<double>());
    if (v.is_string()) {
        auto s = v.get<std::string>();
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }
    return v.dump();
}

class Table {
public:
    explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add(std::vector<Json> row) {
        for (auto& v : row)
            if (v.is_number_float()) v = rounded(v.get<double>());
        rows_.push_back(std::move(row));
    }

    [[nodiscard]] std::string csv() const {
        std::string out;
        for (std::size_t c = 0; c < columns_.size(); ++c) out += (c ? "," : "") + columns_[c];
        out += "\n";
        for (const auto& row : rows_) {
            for (std::size_t c = 0; c < row.size(); ++c) out += (c ? "," : "") + csv_cell(row[c]);
            out += "\n";
        }
        return out;
    }

    [[nodiscard]] Json json() const {
        Json arr = Json::array();
        for (const auto& row : rows_) {
            Json obj = Json::object();
            for (std::size_t c = 0; c < columns_.size(); ++c) obj[columns_[c]] = row[c];
            arr.push_back(std::move(obj));
        }
        return arr;
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Json>> rows_;
};

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty())
        std::cout << text << std::flush;
    else
        write_text_file(g.out, text);
}

void emit(const Globals& g, const Table& t) {
    emit(g, g.format == "json" ? t.json().dump(2) + "\n" : t.csv());
}

Json summary_json(const ResultTable& table) {
    Json arr = Json::array();
    for (const auto& r : table.summary)
        arr.push_back({{"graphon", r.graphon},
                       {"model", r.model},
                       {"n", r.n},
                       {"count", r.count},
                       {"limit", rounded(r.limit)},
                       {"mean_output", rounded(r.mean_output)},
                       {"mean_error", rounded(r.mean_error)},
                       {"std_error", rounded(r.std_error)},
                       {"q_low", rounded(r.quantile_low)},
                       {"q_high", rounded(r.quantile_high)},
                       {"width", rounded(r.width())}});
    return arr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graphon-signal analysis: densities, cut norms, WL, invariant networks and experiments"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    auto* seed_opt = app.add_option("--seed", g.seed, "Base seed");
    app.add_option("--out", g.out, "Write output to this path instead of stdout");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    auto* threads_opt = app.add_option("--threads", g.threads, "Worker threads (0: all cores)");
    app.add_option("--config", g.config, "ExperimentConfig JSON file")->check(CLI::ExistingFile);

    // zoo
    auto* zoo = app.add_subcommand("zoo", "List the example graphons, optionally with a preview grid");
    std::size_t zoo_resolution = 1000, zoo_preview = 0;
    zoo->add_option("--resolution", zoo_resolution, "Grid resolution for triangular and narrow");
    zoo->add_option("--preview", zoo_preview, "Emit a K x K preview grid of W instead of the summary");
    zoo->callback([&] {
        if (zoo_preview == 0) {
            Table t({"graphon", "spec", "blocks", "edge_density"});
            for (const auto& spec : graphon_zoo(zoo_resolution)) {
                const auto w = build_graphon(spec);
                t.add({spec.name(), spec.to_string(), w.blocks(), hom_density(path_pattern(2), w)});
            }
            emit(g, t);
            return;
        }
        Table t({"graphon", "i", "j", "value"});
        for (const auto& spec : graphon_zoo(zoo_resolution)) {
            const auto w = build_graphon(spec);
            std::vector<double> cumulative{0.0};
            for (double m : w.block_measures()) cumulative.push_back(cumulative.back() + m);
            auto block_at = [&](double x) {
                const auto it = std::upper_bound(cumulative.begin() + 1, cumulative.end() - 1, x);
                return static_cast<std::size_t>(it - cumulative.begin() - 1);
            };
            for (std::size_t i = 0; i < zoo_preview; ++i)
                for (std::size_t j = 0; j < zoo_preview; ++j) {
                    const double x = (i + 0.5) / zoo_preview, y = (j + 0.5) / zoo_preview;
                    t.add({spec.name(), i, j, w.value(block_at(x), block_at(y))});
                }
        }
        emit(g, t);
    });

    // homdensity
    auto* hd = app.add_subcommand("homdensity", "Signal-weighted homomorphism densities t(F, (W, f))");
    std::vector<std::string> hd_patterns, hd_graphons;
    std::string hd_method = "dp";
    hd->add_option("--pattern,-p", hd_patterns, "Registered name (K2, C4, P3, M_2, ...) or pattern JSON")->required();
    hd->add_option("--graphon,-g", hd_graphons, "Graphon spec or JSON file")->required();
    hd->add_option("--method", hd_method, "Evaluation method")->check(CLI::IsMember({"dp", "bruteforce", "both"}));
    hd->callback([&] {
        Table t({"pattern", "graphon", "method", "density"});
        for (const auto& gs : hd_graphons) {
            const auto w = load_graphon(gs);
            for (const auto& ps : hd_patterns) {
                const auto p = load_pattern(ps);
                if (hd_method != "bruteforce") t.add({ps, gs, "dp", hom_density(p, w)});
                if (hd_method != "dp") t.add({ps, gs, "bruteforce", t_bruteforce(p, w)});
            }
        }
        emit(g, t);
    });

    // cutnorm
    auto* cn = app.add_subcommand("cutnorm", "Cut norm of W_a - W_b and an upper estimate of the cut distance");
    std::string cn_a, cn_b;
    std::string cn_align = "local_search";
    int cn_restarts = 4;
    cn->add_option("--a", cn_a, "First graphon")->required();
    cn->add_option("--b", cn_b, "Second graphon (default: the zero graphon)");
    cn->add_option("--alignment", cn_align, "Block alignment for the cut distance")
        ->check(CLI::IsMember({"exact_perm", "local_search", "none"}));
    cn->add_option("--restarts", cn_restarts, "Local-search restarts");
    cn->callback([&] {
        const auto a = load_graphon(cn_a);
        const auto b = cn_b.empty() ? StepGraphonSignal::uniform(SquareMatrix(1, 0.0), {0.0}, a.signal_bound())
                                    : load_graphon(cn_b);
        const auto labeled = labeled_cut_norm(a, b, kDefaultExactCutBlocks, 16, g.seed);
        Table t({"a", "b", "labeled_graphon_cut", "labeled_signal_cut", "labeled_exact", "cut_distance_upper",
                 "alignment", "cut_distance_exact_norms"});
        Json dist = nullptr, exact_norms = nullptr;
        if (cn_align != "none") {
            CutDistanceOptions opt;
            opt.seed = g.seed;
            opt.restarts = cn_restarts;
            const auto d = cut_distance_upper(
                a, b, cn_align == "exact_perm" ? CutAlignment::exact_perm : CutAlignment::local_search, opt);
            dist = d.value;
            exact_norms = d.exact_cut_norms;
        }
        t.add({cn_a, cn_b.empty() ? "zero" : cn_b, labeled.graphon, labeled.signal, labeled.exact, dist, cn_align,
               exact_norms});
        emit(g, t);
    });

    // wl
    auto* wl = app.add_subcommand("wl", "k-WL refinement and indistinguishability (k in {1, 2})");
    std::string wl_a, wl_b;
    std::size_t wl_k = 2;
    std::optional<std::size_t> wl_rounds;
    bool wl_cross = false;
    wl->add_option("--a", wl_a, "First graphon")->required();
    wl->add_option("--b", wl_b, "Second graphon (omit to report the colors of --a only)");
    wl->add_option("--k", wl_k, "Tuple order")->check(CLI::IsMember({1, 2}));
    wl->add_option("--rounds", wl_rounds, "Rounds (default: until stable)");
    wl->add_flag("--crosscheck", wl_cross, "Also compare homomorphism densities over the pattern budget");
    wl->callback([&] {
        const auto a = load_graphon(wl_a);
        const std::size_t rounds = wl_rounds.value_or(kUntilStable);
        if (wl_b.empty()) {
            const auto s = wl_refine(a, wl_k, rounds);
            Table t({"graphon", "k", "rounds", "stable", "colors"});
            t.add({wl_a, wl_k, s.round, s.stable, s.color_count()});
            emit(g, t);
            return;
        }
        const auto b = load_graphon(wl_b);
        const auto cmp = compare_wl(a, b, wl_k, rounds);
        std::vector<std::string> cols{"a", "b", "k", "rounds", "indistinguishable", "exact_weights", "colors"};
        std::vector<Json> row{wl_a, wl_b, wl_k, cmp.rounds, cmp.indistinguishable, cmp.exact_weights,
                              cmp.first.color_count()};
        if (wl_cross) {
            const auto check = crosscheck_wl_homomorphisms(a, b, wl_k);
            for (const char* c : {"patterns_checked", "differing_patterns", "max_difference", "witness", "violations"})
                cols.emplace_back(c);
            row.push_back(check.patterns_checked);
            row.push_back(check.differing_patterns);
            row.push_back(check.max_difference);
            row.push_back(check.witness);
            row.push_back(check.violations.size());
        }
        Table t(cols);
        t.add(row);
        emit(g, t);
    });

    // forward
    auto* fw = app.add_subcommand("forward", "Evaluate a model on a graphon or a graph");
    std::string fw_model, fw_input;
    std::size_t fw_sample = 0;
    fw->add_option("--model,-m", fw_model, "\"mpnn\", \"iwn\" (random, seeded) or a model JSON file")->required();
    fw->add_option("--input,-i", fw_input, "Graphon spec, step graphon JSON or graph JSON")->required();
    fw->add_option("--sample", fw_sample, "Evaluate on a simple graph of this size sampled from the input");
    fw->callback([&] {
        ExperimentConfig cfg = g.config.empty() ? ExperimentConfig{} : config_from_json(read_json_file(g.config), {});
        if (seed_opt->count() > 0 || g.config.empty()) cfg.seed = g.seed;
        const auto model = make_model(fw_model, cfg);
        const auto w = load_graphon(fw_input);
        Table t({"model", "input", "n", "output"});
        if (fw_sample > 0)
            t.add({fw_model, fw_input, fw_sample, model.evaluate(sample_simple(w, fw_sample, g.seed))});
        else
            t.add({fw_model, fw_input, nullptr, model.evaluate(w)});
        emit(g, t);
    });

    // convergence / transferability
    std::vector<std::string> ex_models, ex_graphons;
    std::vector<std::size_t> ex_sizes;
    std::optional<std::size_t> ex_replicates, ex_resolution;
    std::optional<std::string> ex_limit;
    std::string ex_rows;
    auto add_experiment_options = [&](CLI::App* sub) {
        sub->add_option("--models", ex_models, "Models: mpnn, iwn or model JSON paths");
        sub->add_option("--graphons", ex_graphons, "Graphon specs");
        sub->add_option("--sizes", ex_sizes, "Sample sizes (ascending)")->delimiter(',');
        sub->add_option("--replicates", ex_replicates, "Samples per size");
        sub->add_option("--limit-resolution", ex_resolution, "Resolution of triangular/narrow and the weighted proxy");
        sub->add_option("--limit", ex_limit, "Limit reference")->check(CLI::IsMember({"step_graphon", "weighted_sample"}));
        sub->add_option("--rows", ex_rows, "Also write per-replicate rows as CSV to this path");
    };
    auto run_experiment_command = [&](bool transfer) {
        ExperimentConfig cfg = g.config.empty() ? ExperimentConfig{} : config_from_json(read_json_file(g.config), {});
        if (seed_opt->count() > 0) cfg.seed = g.seed;
        if (threads_opt->count() > 0) cfg.threads = g.threads;
        if (!ex_models.empty()) cfg.models = ex_models;
        if (!ex_graphons.empty()) cfg.graphons = ex_graphons;
        if (!ex_sizes.empty()) cfg.sizes = ex_sizes;
        if (ex_replicates) cfg.replicates = *ex_replicates;
        if (ex_resolution) cfg.limit_resolution = *ex_resolution;
        if (ex_limit) cfg.limit = *ex_limit == "step_graphon" ? LimitMode::step_graphon : LimitMode::weighted_sample;
        cfg.validate();
        const auto table = transfer ? run_transferability(cfg) : run_convergence(cfg);
        if (!ex_rows.empty()) write_text_file(ex_rows, table.rows_csv());
        if (g.format == "csv") {
            emit(g, table.summary_csv());
            return;
        }
        Json out{{"config", to_json(cfg)}, {"summary", summary_json(table)}};
        emit(g, out.dump(2) + "\n");
    };
    auto* conv = app.add_subcommand("convergence", "Absolute output error against the limit per sample size");
    add_experiment_options(conv);
    conv->callback([&] { run_experiment_command(false); });
    auto* tr = app.add_subcommand("transferability", "Prediction-interval widths of outputs per sample size");
    add_experiment_options(tr);
    tr->callback([&] { run_experiment_command(true); });

    // probes
    auto* pe = app.add_subcommand("probe-er-delta1", "delta_1 between independent G(n, 1/2) pairs, exact alignment");
    std::size_t pe_n = 9, pe_pairs = 50;
    pe->add_option("--n", pe_n, "Graph size (at most 9)");
    pe->add_option("--pairs", pe_pairs, "Independent pairs");
    pe->callback([&] {
        const auto s = er_delta1_probe(pe_n, pe_pairs, g.seed);
        Table t({"n", "pairs", "mean", "std"});
        t.add({pe_n, pe_pairs, s.mean, s.std});
        emit(g, t);
    });

    auto* ps = app.add_subcommand("probe-sampling-rate", "Cut distance of simple samples to their limit");
    std::string ps_graphon = "er:0.5";
    std::vector<std::size_t> ps_sizes{200, 400, 600, 800, 1000};
    std::size_t ps_replicates = 10;
    SamplingRateOptions ps_options;
    ps->add_option("--graphon,-g", ps_graphon, "Graphon spec");
    ps->add_option("--sizes", ps_sizes, "Sample sizes")->delimiter(',');
    ps->add_option("--replicates", ps_replicates, "Samples per size");
    ps->add_option("--max-blocks", ps_options.max_blocks, "Aggregate samples to at most this many blocks");
    ps->add_option("--limit-resolution", ps_options.limit_resolution, "Resolution of non-step limits");
    ps->callback([&] {
        const auto rows = sampling_rate_probe(GraphonSpec::parse(ps_graphon), ps_sizes, ps_replicates, g.seed, ps_options);
        Table t({"graphon", "n", "mean", "bound", "within_bound", "exact_cut_norms"});
        for (const auto& r : rows) t.add({ps_graphon, r.n, r.mean, r.bound, r.within_bound(), r.exact_cut_norms});
        emit(g, t);
    });

    // selftest
    auto* st = app.add_subcommand("selftest", "Run the acceptance criteria");
    std::vector<int> st_only;
    st->add_option("--only", st_only, "Criterion ids")->delimiter(',')->check(CLI::Range(1, acceptance::kCriterionCount));
    int selftest_failures = 0;
    st->callback([&] {
        acceptance::Options opt;
        if (seed_opt->count() > 0) opt.seed = g.seed;
        opt.threads = g.threads;
        if (st_only.empty())
            for (int id = 1; id <= acceptance::kCriterionCount; ++id) st_only.push_back(id);
        Table t({"id", "criterion", "passed", "seconds", "detail"});
        std::string lines;
        for (int id : st_only) {
            const auto r = acceptance::run_criterion(id, opt);
            selftest_failures += r.passed ? 0 : 1;
            lines += acceptance::format_result(r) + "\n";
            if (g.out.empty() && g.format == "csv") std::cout << acceptance::format_result(r) << std::endl;
            t.add({r.id, r.name, r.passed, r.seconds, r.detail});
        }
        if (g.format == "json")
            emit(g, t);
        else if (!g.out.empty())
            emit(g, lines);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return selftest_failures == 0 ? 0 : 1;
}
