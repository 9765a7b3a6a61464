#include "graphon/networks.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "graphon/distance.hpp"
#include "graphon/error.hpp"
#include "graphon/rng.hpp"

namespace graphon {

double activate(Activation act, double x) noexcept {
    switch (act) {
        case Activation::identity:
            return x;
        case Activation::sigmoid:
            return 1.0 / (1.0 + std::exp(-x));
        case Activation::relu:
            return x > 0.0 ? x : 0.0;
        case Activation::gelu:
            return 0.5 * x * (1.0 + std::erf(x / std::sqrt(2.0)));
        case Activation::cos:
            return std::cos(x);
    }
    return x;
}

std::string_view activation_name(Activation act) noexcept {
    switch (act) {
        case Activation::identity:
            return "identity";
        case Activation::sigmoid:
            return "sigmoid";
        case Activation::relu:
            return "relu";
        case Activation::gelu:
            return "gelu";
        case Activation::cos:
            return "cos";
    }
    return "identity";
}

Activation activation_from_name(std::string_view name) {
    for (auto act : {Activation::identity, Activation::sigmoid, Activation::relu, Activation::gelu, Activation::cos})
        if (activation_name(act) == name) return act;
    throw InvalidArgument("unknown activation '" + std::string(name) + "'");
}

double activation_lipschitz(Activation act) noexcept {
    switch (act) {
        case Activation::sigmoid:
            return 0.25;
        case Activation::gelu:
            return 1.1289;  // max of Phi(x) + x phi(x), attained at x = sqrt(2)
        default:
            return 1.0;
    }
}

void MpnnModel::validate() const {
    if (layers.empty()) throw InvalidArgument("MPNN needs at least one layer");
    for (std::size_t s = 0; s < layers.size(); ++s) {
        const auto& layer = layers[s];
        if (layer.d_in == 0 || layer.d_out == 0) throw InvalidArgument("MPNN layer widths must be positive");
        if (layer.weights.size() != layer.d_in * layer.d_out)
            throw InvalidArgument("MPNN layer " + std::to_string(s) + " weight matrix has the wrong size");
        if (layer.bias.size() != layer.d_out)
            throw InvalidArgument("MPNN layer " + std::to_string(s) + " bias has the wrong size");
        if (s > 0 && layers[s - 1].d_out != layer.d_in)
            throw InvalidArgument("MPNN layer " + std::to_string(s) + " input width does not chain");
    }
}

std::size_t MpnnModel::input_width() const { return layers.empty() ? 0 : layers.front().d_in; }
std::size_t MpnnModel::output_width() const { return layers.empty() ? 0 : layers.back().d_out; }

void IwnModel::validate() const {
    if (layers.empty()) throw InvalidArgument("IWN needs at least one layer");
    if (layers.front().k_in != 2 || layers.front().d_in != 2)
        throw InvalidArgument("IWN input must be (d, k) = (2, 2)");
    if (layers.back().k_out != 0 || layers.back().d_out != 1)
        throw InvalidArgument("IWN output must be (d, k) = (1, 0)");
    for (std::size_t s = 0; s < layers.size(); ++s) {
        const auto& layer = layers[s];
        const std::string where = "IWN layer " + std::to_string(s);
        if (layer.d_in == 0 || layer.d_out == 0) throw InvalidArgument(where + ": widths must be positive");
        if (s > 0 && (layers[s - 1].k_out != layer.k_in || layers[s - 1].d_out != layer.d_in))
            throw InvalidArgument(where + ": shape does not chain with the previous layer");
        const auto dim = dimension(layer.k_in, layer.k_out);
        if (layer.coeffs.size() != dim * layer.d_out * layer.d_in)
            throw InvalidArgument(where + ": expected " + std::to_string(dim * layer.d_out * layer.d_in) +
                                  " coefficients, got " + std::to_string(layer.coeffs.size()));
        if (layer.bias.size() != layer.d_out) throw InvalidArgument(where + ": bias has the wrong size");
    }
}

std::vector<std::string> IwnModel::validation_notes() const {
    std::vector<std::string> notes;
    for (std::size_t s = 0; s + 1 < layers.size(); ++s)
        if (layers[s].k_out == 0 && layers[s + 1].k_out > 0)
            notes.push_back("layer " + std::to_string(s + 1) + " lifts an order-0 hidden state to order " +
                            std::to_string(layers[s + 1].k_out) + " (constant replication)");
    return notes;
}

namespace {

// Neighbor aggregation H <- (1/n) A H or W diag(mu) H.
struct Aggregator {
    std::size_t n = 0;
    std::span<const double> measures;  // empty: uniform
    std::vector<std::vector<std::size_t>> neighbors;  // binary graphs
    const SquareMatrix* weights = nullptr;            // weighted graphs

    void apply(const std::vector<double>& h, std::size_t d, std::vector<double>& out) const {
        out.assign(n * d, 0.0);
        const double scale = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            double* acc = out.data() + i * d;
            if (weights == nullptr) {
                for (std::size_t j : neighbors[i])
                    for (std::size_t c = 0; c < d; ++c) acc[c] += h[j * d + c];
            } else {
                const auto row = weights->row(i);
                for (std::size_t j = 0; j < n; ++j) {
                    const double wij = measures.empty() ? row[j] : row[j] * measures[j];
                    if (wij == 0.0) continue;
                    for (std::size_t c = 0; c < d; ++c) acc[c] += wij * h[j * d + c];
                }
            }
            if (measures.empty())
                for (std::size_t c = 0; c < d; ++c) acc[c] = scale * acc[c];
        }
    }
};

std::vector<double> mpnn_run(const Aggregator& agg, const std::vector<double>& features, const MpnnModel& model) {
    model.validate();
    if (model.input_width() != 1)
        throw InvalidArgument("MPNN input width " + std::to_string(model.input_width()) +
                              " does not match the single node feature");
    const std::size_t n = agg.n;
    std::vector<double> h = features, aggregated;
    std::size_t d = 1;
    for (std::size_t s = 0; s < model.layers.size(); ++s) {
        const auto& layer = model.layers[s];
        agg.apply(h, d, aggregated);
        h.assign(n * layer.d_out, 0.0);
        const bool last = s + 1 == model.layers.size();
        for (std::size_t i = 0; i < n; ++i) {
            const double* x = aggregated.data() + i * d;
            for (std::size_t o = 0; o < layer.d_out; ++o) {
                const double* w = layer.weights.data() + o * layer.d_in;
                double acc = 0.0;
                for (std::size_t c = 0; c < d; ++c) acc += w[c] * x[c];
                acc += layer.bias[o];
                h[i * layer.d_out + o] = last ? acc : activate(model.activation, acc);
            }
        }
        d = layer.d_out;
    }
    std::vector<double> out(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < d; ++c)
            out[c] += agg.measures.empty() ? h[i * d + c] : agg.measures[i] * h[i * d + c];
    if (agg.measures.empty())
        for (double& v : out) v = (1.0 / static_cast<double>(n)) * v;
    return out;
}

}  // namespace

std::vector<double> mpnn_forward(const GraphSignal& g, const MpnnModel& model) {
    if (g.n() == 0) throw EmptyGraphError();
    Aggregator agg;
    agg.n = g.n();
    agg.neighbors.resize(g.n());
    for (std::size_t i = 0; i < g.n(); ++i)
        for (std::size_t j = 0; j < g.n(); ++j)
            if (g.adjacent(i, j)) agg.neighbors[i].push_back(j);
    return mpnn_run(agg, g.features(), model);
}

std::vector<double> mpnn_forward(const WeightedGraphSignal& g, const MpnnModel& model) {
    if (g.n() == 0) throw EmptyGraphError();
    Aggregator agg;
    agg.n = g.n();
    agg.weights = &g.weights();
    return mpnn_run(agg, g.features(), model);
}

std::vector<double> mpnn_forward(const StepGraphonSignal& w, const MpnnModel& model) {
    Aggregator agg;
    agg.n = w.blocks();
    agg.weights = &w.block_values();
    if (!w.has_uniform_measures()) agg.measures = w.block_measures();
    return mpnn_run(agg, w.signals(), model);
}

std::vector<DenseTensor> iwn_input_channels(const StepGraphonSignal& w) {
    const std::size_t p = w.blocks();
    DenseTensor graph(2, p, w.block_values().values());
    DenseTensor signal(2, p);
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) signal[i * p + j] = w.signal(i);
    std::vector<DenseTensor> channels;
    channels.push_back(std::move(graph));
    channels.push_back(std::move(signal));
    return channels;
}

std::vector<DenseTensor> apply_iwn_layer(const IwnLayer& layer, std::span<const DenseTensor> input,
                                         std::span<const double> measures) {
    if (input.size() != layer.d_in) throw InvalidArgument("IWN layer received the wrong number of channels");
    if (input.empty()) throw InvalidArgument("IWN layer needs input channels");
    const std::size_t n = input.front().resolution();
    for (const auto& t : input)
        if (t.order() != layer.k_in || t.resolution() != n)
            throw InvalidArgument("IWN layer input has the wrong order or resolution");

    const auto basis = enumerate_basis(layer.k_in, layer.k_out);
    const std::size_t g_count = basis.size();
    const std::size_t d_in = layer.d_in;
    const std::size_t features = g_count * d_in;
    if (layer.coeffs.size() != features * layer.d_out || layer.bias.size() != layer.d_out)
        throw InvalidArgument("IWN layer coefficient or bias array has the wrong size");

    // operands[g * d_in + c] is T_g applied to channel c, in reduced form.
    std::vector<BasisOperand> operands;
    operands.reserve(features);
    for (const auto& gamma : basis)
        for (const auto& t : input) operands.push_back(reduce_for_basis(gamma, t, measures));
    std::vector<const double*> sources(features);
    for (std::size_t f = 0; f < features; ++f) sources[f] = operands[f].data();

    // Mixing matrix laid out (out, gamma, in) so each output channel reads a contiguous row.
    std::vector<double> mix(layer.d_out * features);
    for (std::size_t o = 0; o < layer.d_out; ++o)
        for (std::size_t g = 0; g < g_count; ++g)
            for (std::size_t c = 0; c < d_in; ++c) mix[o * features + g * d_in + c] = layer.coeff(g, o, c);

    const std::size_t l = layer.k_out;
    std::vector<DenseTensor> out;
    out.reserve(layer.d_out);
    for (std::size_t o = 0; o < layer.d_out; ++o) out.emplace_back(l, n);
    const std::size_t cells = out.front().size();

    std::vector<std::size_t> y(l, 0), offset(g_count, 0);
    std::vector<double> gathered(features);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        for (std::size_t g = 0; g < g_count; ++g)
            for (std::size_t c = 0; c < d_in; ++c) gathered[g * d_in + c] = sources[g * d_in + c][offset[g]];
        for (std::size_t o = 0; o < layer.d_out; ++o) {
            const double* row = mix.data() + o * features;
            double acc = 0.0;
            for (std::size_t f = 0; f < features; ++f) acc += row[f] * gathered[f];
            acc += layer.bias[o];
            out[o][cell] = acc;
        }
        for (std::size_t b = l; b-- > 0;) {
            for (std::size_t g = 0; g < g_count; ++g) offset[g] += operands[g * d_in].output_strides()[b];
            if (++y[b] < n) break;
            for (std::size_t g = 0; g < g_count; ++g) offset[g] -= operands[g * d_in].output_strides()[b] * n;
            y[b] = 0;
        }
    }
    return out;
}

double iwn_forward(const StepGraphonSignal& w, const IwnModel& model) {
    model.validate();
    std::span<const double> measures;
    if (!w.has_uniform_measures()) measures = w.block_measures();
    std::vector<DenseTensor> h = iwn_input_channels(w);
    for (std::size_t s = 0; s < model.layers.size(); ++s) {
        h = apply_iwn_layer(model.layers[s], h, measures);
        if (s + 1 < model.layers.size())
            for (auto& t : h)
                for (double& v : t.values()) v = activate(model.activation, v);
    }
    return h.front()[0];
}

double iwn_forward(const GraphSignal& g, const IwnModel& model) { return iwn_forward(from_graph(g), model); }

double iwn_forward(const WeightedGraphSignal& g, const IwnModel& model) {
    return iwn_forward(from_weighted_graph(g), model);
}

IwnModel random_iwn(std::span<const IwnShape> shape, Activation act, std::uint64_t seed) {
    if (shape.size() < 2) throw InvalidArgument("IWN shape needs an input and an output entry");
    IwnModel model;
    model.activation = act;
    const Rng root(seed);
    for (std::size_t s = 0; s + 1 < shape.size(); ++s) {
        IwnLayer layer;
        layer.k_in = shape[s].k;
        layer.d_in = shape[s].d;
        layer.k_out = shape[s + 1].k;
        layer.d_out = shape[s + 1].d;
        const auto dim = dimension(layer.k_in, layer.k_out);
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.d_in * dim));
        Rng rng = root.split(s);
        layer.coeffs.resize(dim * layer.d_out * layer.d_in);
        for (double& c : layer.coeffs) c = rng.uniform(-bound, bound);
        layer.bias.resize(layer.d_out);
        for (double& b : layer.bias) b = rng.uniform(-bound, bound);
        model.layers.push_back(std::move(layer));
    }
    model.validate();
    return model;
}

MpnnModel random_mpnn(std::span<const std::size_t> widths, Activation act, std::uint64_t seed) {
    if (widths.size() < 2) throw InvalidArgument("MPNN widths need an input and an output entry");
    MpnnModel model;
    model.activation = act;
    const Rng root(seed);
    for (std::size_t s = 0; s + 1 < widths.size(); ++s) {
        MpnnLayer layer{widths[s], widths[s + 1], {}, {}};
        const double bound = 1.0 / std::sqrt(static_cast<double>(layer.d_in));
        Rng rng = root.split(s);
        layer.weights.resize(layer.d_in * layer.d_out);
        for (double& w : layer.weights) w = rng.uniform(-bound, bound);
        layer.bias.resize(layer.d_out);
        for (double& b : layer.bias) b = rng.uniform(-bound, bound);
        model.layers.push_back(std::move(layer));
    }
    model.validate();
    return model;
}

namespace {

template <class Forward>
LipschitzReport probe(Forward forward, double p, std::size_t trials, std::uint64_t seed, std::size_t blocks) {
    if (trials == 0) throw InvalidArgument("lipschitz_probe needs at least one trial");
    if (blocks == 0) throw InvalidArgument("lipschitz_probe needs at least one block");
    LipschitzReport report;
    report.trials = trials;
    const Rng root(seed);
    for (std::size_t t = 0; t < trials; ++t) {
        Rng rng = root.split(t);
        SquareMatrix va(blocks), vb(blocks);
        std::vector<double> fa(blocks), fb(blocks);
        const double eps = std::pow(10.0, -3.0 * rng.uniform());
        for (std::size_t i = 0; i < blocks; ++i) {
            fa[i] = rng.uniform(-1.0, 1.0);
            for (std::size_t j = i; j < blocks; ++j) va(i, j) = va(j, i) = rng.uniform();
        }
        vb = va;
        fb = fa;
        auto nudge = [&](double x, double lo, double hi) { return std::clamp(x + eps * rng.uniform(-1.0, 1.0), lo, hi); };
        if (t % 2 == 1) {
            // single coordinate: block pair or signal entry
            const std::size_t pick = rng.below(blocks * (blocks + 1) / 2 + blocks);
            if (pick < blocks) {
                fb[pick] = nudge(fa[pick], -1.0, 1.0);
            } else {
                std::size_t rest = pick - blocks, i = 0;
                while (rest >= blocks - i) rest -= blocks - i++;
                const std::size_t j = i + rest;
                vb(i, j) = vb(j, i) = nudge(va(i, j), 0.0, 1.0);
            }
        } else {
            for (std::size_t i = 0; i < blocks; ++i) {
                fb[i] = nudge(fa[i], -1.0, 1.0);
                for (std::size_t j = i; j < blocks; ++j) vb(i, j) = vb(j, i) = nudge(va(i, j), 0.0, 1.0);
            }
        }
        const auto a = StepGraphonSignal::uniform(std::move(va), std::move(fa), 1.0);
        const auto b = StepGraphonSignal::uniform(std::move(vb), std::move(fb), 1.0);
        const auto dist = lp_distance_labeled(a, b, p);
        const double denom = dist.graphon + dist.signal;
        if (denom == 0.0) continue;
        const double ratio = std::abs(forward(a) - forward(b)) / denom;
        if (!std::isfinite(ratio)) report.finite = false;
        report.ratio = std::max(report.ratio, ratio);
        if (t < trials / 2) report.ratio_first_half = report.ratio;
    }
    if (trials == 1) report.ratio_first_half = report.ratio;
    return report;
}

}  // namespace

LipschitzReport lipschitz_probe(const IwnModel& model, double p, std::size_t trials, std::uint64_t seed,
                                std::size_t blocks) {
    model.validate();
    return probe([&](const StepGraphonSignal& w) { return iwn_forward(w, model); }, p, trials, seed, blocks);
}

LipschitzReport lipschitz_probe(const MpnnModel& model, double p, std::size_t trials, std::uint64_t seed,
                                std::size_t blocks) {
    model.validate();
    if (model.output_width() != 1) throw InvalidArgument("lipschitz_probe needs a scalar-output MPNN");
    return probe([&](const StepGraphonSignal& w) { return mpnn_forward(w, model).front(); }, p, trials, seed,
                 blocks);
}

}  // namespace graphon
