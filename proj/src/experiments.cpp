#include "graphon/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "graphon/distance.hpp"
#include "graphon/error.hpp"
#include "graphon/io.hpp"
#include "graphon/rng.hpp"

namespace graphon {

namespace {

constexpr std::size_t kCellAverageSubdivision = 8;

double parse_number(std::string_view text, std::string_view what) {
    const std::string s(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw InvalidArgument("cannot parse " + std::string(what) + " from '" + s + "'");
    return value;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
    const double v = parse_number(text, what);
    if (v < 1.0 || v != std::floor(v)) throw InvalidArgument(std::string(what) + " must be a positive integer");
    return static_cast<std::size_t>(v);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = text.find(sep, start);
        parts.push_back(text.substr(start, pos - start));
        if (pos == std::string_view::npos) return parts;
        start = pos + 1;
    }
}

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

void GraphonSpec::validate() const {
    switch (kind) {
        case GraphonKind::er:
            if (!in_unit_interval(p)) throw InvalidArgument("er probability must lie in [0,1]");
            break;
        case GraphonKind::sbm:
            if (blocks == 0) throw InvalidArgument("sbm needs at least one block");
            if (!in_unit_interval(p_intra) || !in_unit_interval(q_inter))
                throw InvalidArgument("sbm probabilities must lie in [0,1]");
            break;
        case GraphonKind::narrow:
            if (!(gamma > 0.0) || !std::isfinite(gamma)) throw InvalidArgument("narrow bandwidth must be positive");
            break;
        case GraphonKind::triangular:
            break;
    }
    if (resolution == 0) throw InvalidArgument("graphon resolution must be at least 1");
}

std::string GraphonSpec::name() const {
    switch (kind) {
        case GraphonKind::er:
            return "er";
        case GraphonKind::sbm:
            return "sbm";
        case GraphonKind::triangular:
            return "triangular";
        case GraphonKind::narrow:
            return "narrow";
    }
    return "er";
}

std::string GraphonSpec::to_string() const {
    switch (kind) {
        case GraphonKind::er:
            return "er:" + format_real(p);
        case GraphonKind::sbm:
            return "sbm:" + std::to_string(blocks) + "," + format_real(p_intra) + "," + format_real(q_inter);
        case GraphonKind::triangular:
            return "triangular@" + std::to_string(resolution);
        case GraphonKind::narrow:
            return "narrow:" + format_real(gamma) + "@" + std::to_string(resolution);
    }
    return name();
}

GraphonSpec GraphonSpec::parse(std::string_view text) {
    GraphonSpec spec;
    const auto at = text.find('@');
    if (at != std::string_view::npos) {
        spec.resolution = parse_count(text.substr(at + 1), "resolution");
        text = text.substr(0, at);
    }
    const auto colon = text.find(':');
    const std::string_view kind = text.substr(0, colon);
    std::vector<std::string_view> args;
    if (colon != std::string_view::npos) args = split(text.substr(colon + 1), ',');
    auto expect_args = [&](std::size_t lo, std::size_t hi) {
        if (args.size() < lo || args.size() > hi)
            throw InvalidArgument("wrong number of parameters in graphon spec '" + std::string(text) + "'");
    };
    if (kind == "er") {
        spec.kind = GraphonKind::er;
        expect_args(0, 1);
        if (!args.empty()) spec.p = parse_number(args[0], "er probability");
    } else if (kind == "sbm") {
        spec.kind = GraphonKind::sbm;
        expect_args(0, 3);
        if (args.size() > 0) spec.blocks = parse_count(args[0], "sbm block count");
        if (args.size() > 1) spec.p_intra = parse_number(args[1], "sbm intra probability");
        if (args.size() > 2) spec.q_inter = parse_number(args[2], "sbm inter probability");
    } else if (kind == "triangular") {
        spec.kind = GraphonKind::triangular;
        expect_args(0, 0);
    } else if (kind == "narrow") {
        spec.kind = GraphonKind::narrow;
        expect_args(0, 1);
        if (!args.empty()) spec.gamma = parse_number(args[0], "narrow bandwidth");
    } else {
        throw InvalidArgument("unknown graphon kind '" + std::string(kind) + "'");
    }
    spec.validate();
    return spec;
}

StepGraphonSignal build_graphon(const GraphonSpec& spec) {
    spec.validate();
    if (spec.kind == GraphonKind::er) {
        SquareMatrix values(1);
        values(0, 0) = spec.p;
        return StepGraphonSignal::uniform(std::move(values), {1.0}, 1.0);
    }
    if (spec.kind == GraphonKind::sbm) {
        SquareMatrix values(spec.blocks);
        for (std::size_t i = 0; i < spec.blocks; ++i)
            for (std::size_t j = 0; j < spec.blocks; ++j) values(i, j) = i == j ? spec.p_intra : spec.q_inter;
        return StepGraphonSignal::uniform(std::move(values), std::vector<double>(spec.blocks, 1.0), 1.0);
    }

    auto kernel = [&](double x, double y) {
        double v = 0.0;
        if (spec.kind == GraphonKind::triangular) {
            v = (x + y) / 2.0;
        } else {
            const double s = std::sin((x - y) * (x - y) / spec.gamma);
            v = std::exp(spec.literal_narrow ? s * s : -s * s);
        }
        return std::clamp(v, 0.0, 1.0);
    };
    const std::size_t m = spec.resolution;
    const double h = 1.0 / static_cast<double>(m);
    SquareMatrix values(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j) {
            double v = 0.0;
            if (spec.discretization == Discretization::midpoint) {
                v = kernel((static_cast<double>(i) + 0.5) * h, (static_cast<double>(j) + 0.5) * h);
            } else {
                const std::size_t s = kCellAverageSubdivision;
                const double hs = h / static_cast<double>(s);
                for (std::size_t a = 0; a < s; ++a)
                    for (std::size_t b = 0; b < s; ++b)
                        v += kernel(static_cast<double>(i) * h + (static_cast<double>(a) + 0.5) * hs,
                                    static_cast<double>(j) * h + (static_cast<double>(b) + 0.5) * hs);
                v /= static_cast<double>(s * s);
            }
            values(i, j) = values(j, i) = v;
        }
    return StepGraphonSignal::uniform(std::move(values), std::vector<double>(m, 1.0), 1.0);
}

std::vector<GraphonSpec> graphon_zoo(std::size_t resolution) {
    std::vector<GraphonSpec> zoo;
    for (const char* text : {"er:0.5", "sbm:5,0.8,0.3", "triangular", "narrow:0.05"}) {
        auto spec = GraphonSpec::parse(text);
        spec.resolution = resolution;
        zoo.push_back(spec);
    }
    return zoo;
}

double NamedModel::evaluate(const StepGraphonSignal& w) const {
    if (const auto* m = std::get_if<MpnnModel>(&model)) return mpnn_forward(w, *m).front();
    return iwn_forward(w, std::get<IwnModel>(model));
}

double NamedModel::evaluate(const GraphSignal& g) const {
    if (const auto* m = std::get_if<MpnnModel>(&model)) return mpnn_forward(g, *m).front();
    return iwn_forward(g, std::get<IwnModel>(model));
}

double NamedModel::evaluate(const WeightedGraphSignal& g) const {
    if (const auto* m = std::get_if<MpnnModel>(&model)) return mpnn_forward(g, *m).front();
    return iwn_forward(g, std::get<IwnModel>(model));
}

void ExperimentConfig::validate() const {
    if (models.empty()) throw InvalidArgument("experiment needs at least one model");
    if (graphons.empty()) throw InvalidArgument("experiment needs at least one graphon");
    if (sizes.empty()) throw InvalidArgument("experiment needs at least one graph size");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw InvalidArgument("graph sizes must be positive");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw InvalidArgument("graph sizes must be strictly ascending");
    }
    if (replicates == 0) throw InvalidArgument("replicates must be at least 1");
    if (limit_resolution == 0) throw InvalidArgument("limit resolution must be at least 1");
    if (!(quantile_low >= 0.0 && quantile_low < quantile_high && quantile_high <= 1.0))
        throw InvalidArgument("quantile levels must satisfy 0 <= low < high <= 1");
    if (layers == 0 || width == 0) throw InvalidArgument("model layers and width must be positive");
}

NamedModel make_model(const std::string& entry, const ExperimentConfig& cfg) {
    if (entry == "mpnn") {
        std::vector<std::size_t> widths{1};
        for (std::size_t s = 0; s + 1 < cfg.layers; ++s) widths.push_back(cfg.width);
        widths.push_back(1);
        return {entry, random_mpnn(widths, cfg.activation, sub_seed(cfg.seed, 0x6d706e6e))};
    }
    if (entry == "iwn") {
        std::vector<IwnShape> shape{{2, 2}};
        for (std::size_t s = 0; s + 1 < cfg.layers; ++s) shape.push_back({2, cfg.width});
        shape.push_back({0, 1});
        return {entry, random_iwn(shape, cfg.activation, sub_seed(cfg.seed, 0x69776e))};
    }
    return {entry, read_model_file(entry)};
}

double quantile(std::vector<double> values, double level) {
    if (values.empty()) throw InvalidArgument("quantile of an empty sample");
    if (!(level >= 0.0 && level <= 1.0)) throw InvalidArgument("quantile level must lie in [0,1]");
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * level;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) {
            try {
                body(i);
            } catch (...) {
                const std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

std::string ResultTable::rows_csv() const {
    std::string out = "graphon,model,n,replicate,output,abs_error\n";
    for (const auto& r : rows)
        out += csv_field(r.graphon) + "," + csv_field(r.model) + "," + std::to_string(r.n) + "," +
               std::to_string(r.replicate) + "," + format_real(r.output) + "," + format_real(r.abs_error) + "\n";
    return out;
}

std::string ResultTable::summary_csv() const {
    std::string out = "graphon,model,n,count,limit,mean_output,mean_error,std_error,q_low,q_high,width\n";
    for (const auto& s : summary)
        out += csv_field(s.graphon) + "," + csv_field(s.model) + "," + std::to_string(s.n) + "," +
               std::to_string(s.count) + "," + format_real(s.limit) + "," + format_real(s.mean_output) + "," +
               format_real(s.mean_error) + "," + format_real(s.std_error) + "," + format_real(s.quantile_low) + "," +
               format_real(s.quantile_high) + "," + format_real(s.width()) + "\n";
    return out;
}

const SummaryRow& ResultTable::find(std::string_view graphon, std::string_view model, std::size_t n) const {
    for (const auto& s : summary)
        if (s.graphon == graphon && s.model == model && s.n == n) return s;
    throw InvalidArgument("no summary row for " + std::string(graphon) + " / " + std::string(model) + " / n=" +
                          std::to_string(n));
}

ResultTable run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<NamedModel> models;
    for (const auto& entry : cfg.models) models.push_back(make_model(entry, cfg));

    ResultTable table;
    for (std::size_t gi = 0; gi < cfg.graphons.size(); ++gi) {
        auto spec = GraphonSpec::parse(cfg.graphons[gi]);
        if (cfg.graphons[gi].find('@') == std::string::npos) spec.resolution = cfg.limit_resolution;
        const std::string label = spec.to_string();
        const StepGraphonSignal w = build_graphon(spec);
        const std::uint64_t graphon_seed = sub_seed(sub_seed(cfg.seed, 0x73616d70), gi);

        std::vector<double> limits;
        if (cfg.limit == LimitMode::step_graphon) {
            for (const auto& m : models) limits.push_back(m.evaluate(w));
        } else {
            const auto proxy = sample_weighted(w, cfg.limit_resolution, sub_seed(graphon_seed, 0x6c696d));
            for (const auto& m : models) limits.push_back(m.evaluate(proxy));
        }

        const std::size_t jobs = cfg.sizes.size() * cfg.replicates;
        std::vector<double> outputs(jobs * models.size());
        parallel_for(jobs, cfg.threads, [&](std::size_t job) {
            const std::size_t n = cfg.sizes[job / cfg.replicates];
            const std::size_t r = job % cfg.replicates;
            const auto g = sample_simple(w, n, sub_seed(sub_seed(graphon_seed, n), r));
            for (std::size_t mi = 0; mi < models.size(); ++mi) outputs[job * models.size() + mi] = models[mi].evaluate(g);
        });

        for (std::size_t mi = 0; mi < models.size(); ++mi)
            for (std::size_t si = 0; si < cfg.sizes.size(); ++si) {
                SummaryRow s{label, models[mi].name, cfg.sizes[si], cfg.replicates, limits[mi]};
                std::vector<double> values, errors;
                for (std::size_t r = 0; r < cfg.replicates; ++r) {
                    const double out = outputs[(si * cfg.replicates + r) * models.size() + mi];
                    const double err = std::abs(out - limits[mi]);
                    table.rows.push_back({label, models[mi].name, cfg.sizes[si], r, out, err});
                    values.push_back(out);
                    errors.push_back(err);
                }
                const double count = static_cast<double>(cfg.replicates);
                s.mean_output = std::accumulate(values.begin(), values.end(), 0.0) / count;
                s.mean_error = std::accumulate(errors.begin(), errors.end(), 0.0) / count;
                if (cfg.replicates > 1) {
                    double ss = 0.0;
                    for (double e : errors) ss += (e - s.mean_error) * (e - s.mean_error);
                    s.std_error = std::sqrt(ss / (count - 1.0));
                }
                s.quantile_low = quantile(values, cfg.quantile_low);
                s.quantile_high = quantile(values, cfg.quantile_high);
                table.summary.push_back(s);
            }
    }
    return table;
}

ResultTable run_convergence(const ExperimentConfig& cfg) { return run_experiment(cfg); }
ResultTable run_transferability(const ExperimentConfig& cfg) { return run_experiment(cfg); }

double delta1_permutation(const GraphSignal& a, const GraphSignal& b) {
    const std::size_t n = a.n();
    if (b.n() != n) throw InvalidArgument("delta_1 probe needs graphs of equal size");
    if (n > 9) throw CapacityError("exhaustive permutation alignment supports n <= 9");
    if (n == 0) throw EmptyGraphError();
    const double pair_weight = 1.0 / static_cast<double>(n * n);
    const double node_weight = 1.0 / static_cast<double>(n);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    auto full_cost = [&](const std::vector<std::size_t>& pi) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            c += node_weight * std::abs(a.features()[i] - b.features()[pi[i]]);
            for (std::size_t j = 0; j < n; ++j)
                if (a.adjacent(i, j) != b.adjacent(pi[i], pi[j])) c += pair_weight;
        }
        return c;
    };
    double best = full_cost(perm);

    std::vector<bool> used(n, false);
    std::vector<std::size_t> assign(n);
    auto search = [&](auto&& self, std::size_t i, double cost) -> void {
        if (cost >= best) return;
        if (i == n) {
            best = cost;
            return;
        }
        for (std::size_t v = 0; v < n; ++v) {
            if (used[v]) continue;
            double step = node_weight * std::abs(a.features()[i] - b.features()[v]);
            for (std::size_t j = 0; j < i; ++j)
                if (a.adjacent(i, j) != b.adjacent(v, assign[j])) step += 2.0 * pair_weight;
            used[v] = true;
            assign[i] = v;
            self(self, i + 1, cost + step);
            used[v] = false;
        }
    };
    search(search, 0, 0.0);
    return best;
}

namespace {

ProbeStats stats_of(std::vector<double> values) {
    ProbeStats s;
    const double count = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / count;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / (count - 1.0));
    }
    s.values = std::move(values);
    return s;
}

}  // namespace

ProbeStats er_delta1_probe(std::size_t n, std::size_t pairs, std::uint64_t seed) {
    if (n > 9) throw CapacityError("exhaustive permutation alignment supports n <= 9");
    if (n == 0) throw EmptyGraphError();
    if (pairs == 0) throw InvalidArgument("delta_1 probe needs at least one pair");
    const auto w = build_graphon(GraphonSpec::parse("er:0.5"));
    std::vector<double> values(pairs);
    for (std::size_t i = 0; i < pairs; ++i) {
        const auto a = sample_simple(w, n, sub_seed(seed, 2 * i));
        const auto b = sample_simple(w, n, sub_seed(seed, 2 * i + 1));
        values[i] = delta1_permutation(a, b);
    }
    return stats_of(std::move(values));
}

StepGraphonSignal aggregate_sample(const SimpleSample& sample, std::size_t max_blocks) {
    const auto& g = sample.graph;
    const std::size_t n = g.n();
    if (n == 0) throw EmptyGraphError();
    if (max_blocks == 0) throw InvalidArgument("aggregation needs at least one block");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sample.latent_blocks[x] < sample.latent_blocks[y]; });

    const std::size_t q = std::min(max_blocks, n);
    std::vector<std::size_t> group(n), size(q, 0);
    for (std::size_t g_index = 0, pos = 0; g_index < q; ++g_index) {
        const std::size_t len = n / q + (g_index < n % q ? 1 : 0);
        for (std::size_t t = 0; t < len; ++t) group[order[pos++]] = g_index;
        size[g_index] = len;
    }
    SquareMatrix values(q);
    std::vector<double> signal(q, 0.0), measures(q);
    double bound = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        signal[group[i]] += g.features()[i];
        bound = std::max(bound, std::abs(g.features()[i]));
        for (std::size_t j = 0; j < n; ++j)
            if (g.adjacent(i, j)) values(group[i], group[j]) += 1.0;
    }
    for (std::size_t a = 0; a < q; ++a) {
        measures[a] = static_cast<double>(size[a]) / static_cast<double>(n);
        signal[a] /= static_cast<double>(size[a]);
        for (std::size_t b = 0; b < q; ++b) values(a, b) /= static_cast<double>(size[a] * size[b]);
    }
    return StepGraphonSignal(std::move(values), std::move(measures), std::move(signal), bound);
}

std::vector<SamplingRateRow> sampling_rate_probe(const GraphonSpec& spec, const std::vector<std::size_t>& sizes,
                                                 std::size_t replicates, std::uint64_t seed,
                                                 const SamplingRateOptions& options) {
    if (replicates == 0) throw InvalidArgument("sampling-rate probe needs at least one replicate");
    GraphonSpec limit_spec = spec;
    limit_spec.resolution = options.limit_resolution;
    const StepGraphonSignal w = build_graphon(limit_spec);
    CutDistanceOptions cut;
    cut.restarts = 0;
    cut.max_sweeps = 0;
    cut.max_exact_cut_blocks = kDefaultExactCutBlocks;

    std::vector<SamplingRateRow> rows;
    for (std::size_t n : sizes) {
        if (n < 2) throw InvalidArgument("sampling-rate probe needs n >= 2");
        std::vector<double> values(replicates);
        std::vector<char> exact(replicates, 1);
        parallel_for(replicates, 0, [&](std::size_t r) {
            const auto sample = sample_simple_with_latents(w, n, sub_seed(sub_seed(seed, n), r));
            const auto d = cut_distance_upper(w, aggregate_sample(sample, options.max_blocks),
                                              CutAlignment::local_search, cut);
            values[r] = d.value;
            exact[r] = d.exact_cut_norms ? 1 : 0;
        });
        SamplingRateRow row;
        row.n = n;
        row.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(replicates);
        row.bound = 15.0 / std::sqrt(std::log(static_cast<double>(n)));
        row.exact_cut_norms = std::all_of(exact.begin(), exact.end(), [](char e) { return e != 0; });
        rows.push_back(row);
    }
    return rows;
}

}  // namespace graphon
