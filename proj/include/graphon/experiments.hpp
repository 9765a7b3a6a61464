#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "graphon/graphon.hpp"
#include "graphon/networks.hpp"

namespace graphon {

enum class GraphonKind { er, sbm, triangular, narrow };
enum class Discretization { midpoint, cell_average };

/// Text forms: "er:0.5", "sbm:5,0.8,0.3", "triangular", "narrow:0.05",
/// optionally followed by "@m" to set the resolution of non-step kinds.
struct GraphonSpec {
    GraphonKind kind = GraphonKind::er;
    double p = 0.5;
    std::size_t blocks = 5;
    double p_intra = 0.8;
    double q_inter = 0.3;
    double gamma = 0.05;
    std::size_t resolution = 1000;
    Discretization discretization = Discretization::midpoint;
    /// Narrow graphon with exp(+sin^2) instead of exp(-sin^2), clamped to [0,1].
    bool literal_narrow = false;

    /// Throws InvalidArgument on out-of-range parameters.
    void validate() const;
    [[nodiscard]] std::string name() const;
    [[nodiscard]] std::string to_string() const;
    static GraphonSpec parse(std::string_view text);
};

/// Step graphon-signal with signal identically 1. er and sbm are exact;
/// triangular and narrow are discretized on a regular grid of `resolution` cells.
StepGraphonSignal build_graphon(const GraphonSpec& spec);

/// er(0.5), sbm(5, 0.8, 0.3), triangular, narrow(0.05) at the given resolution.
std::vector<GraphonSpec> graphon_zoo(std::size_t resolution = 1000);

/// A model that maps a graph-signal or step graphon-signal to a scalar.
struct NamedModel {
    std::string name;
    std::variant<MpnnModel, IwnModel> model;

    [[nodiscard]] double evaluate(const StepGraphonSignal& w) const;
    [[nodiscard]] double evaluate(const GraphSignal& g) const;
    [[nodiscard]] double evaluate(const WeightedGraphSignal& g) const;
};

enum class LimitMode { step_graphon, weighted_sample };

struct ExperimentConfig {
    /// "mpnn", "iwn" (random, seeded) or a path to a model JSON file.
    std::vector<std::string> models{"mpnn", "iwn"};
    std::vector<std::string> graphons{"er:0.5"};
    std::vector<std::size_t> sizes{200, 400, 600, 800, 1000};
    std::size_t replicates = 100;
    std::size_t limit_resolution = 1000;
    std::uint64_t seed = 0;
    double quantile_low = 0.05;
    double quantile_high = 0.95;
    LimitMode limit = LimitMode::step_graphon;
    std::size_t layers = 2;
    std::size_t width = 16;
    Activation activation = Activation::sigmoid;
    std::size_t threads = 0;  ///< 0: hardware concurrency

    /// Throws InvalidArgument on empty lists, unsorted sizes or bad levels.
    void validate() const;
};

/// Random 2-layer (by default) models of the configured width; "mpnn" and
/// "iwn" draw from fixed sub-streams of cfg.seed, anything else is read as
/// a model JSON path.
NamedModel make_model(const std::string& entry, const ExperimentConfig& cfg);

struct ResultRow {
    std::string graphon;
    std::string model;
    std::size_t n = 0;
    std::size_t replicate = 0;
    double output = 0.0;
    double abs_error = 0.0;
};

struct SummaryRow {
    std::string graphon;
    std::string model;
    std::size_t n = 0;
    std::size_t count = 0;
    double limit = 0.0;
    double mean_output = 0.0;
    double mean_error = 0.0;
    double std_error = 0.0;
    double quantile_low = 0.0;
    double quantile_high = 0.0;
    [[nodiscard]] double width() const noexcept { return quantile_high - quantile_low; }
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::vector<SummaryRow> summary;

    [[nodiscard]] std::string rows_csv() const;
    [[nodiscard]] std::string summary_csv() const;
    [[nodiscard]] const SummaryRow& find(std::string_view graphon, std::string_view model, std::size_t n) const;
};

/// Sample quantile with linear interpolation between order statistics.
double quantile(std::vector<double> values, double level);

/// Samples every (graphon, n, replicate) once and evaluates every model on
/// it; rows are ordered graphon, model, n, replicate.
ResultTable run_experiment(const ExperimentConfig& cfg);
/// run_experiment; the summary's mean_error columns are the headline numbers.
ResultTable run_convergence(const ExperimentConfig& cfg);
/// run_experiment; the summary's width() is the prediction interval width.
ResultTable run_transferability(const ExperimentConfig& cfg);

/// Runs body(i) for i in [0, count) on up to `threads` threads.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& body);

struct ProbeStats {
    double mean = 0.0;
    double std = 0.0;
    std::vector<double> values;
};

/// Minimum over node permutations of the labeled L^1 distance between two
/// graphs of equal size, by branch and bound. Throws CapacityError for n > 9.
double delta1_permutation(const GraphSignal& a, const GraphSignal& b);

/// delta_1 between independent G(n, 1/2) pairs.
ProbeStats er_delta1_probe(std::size_t n, std::size_t pairs, std::uint64_t seed);

struct SamplingRateRow {
    std::size_t n = 0;
    double mean = 0.0;
    double bound = 0.0;  ///< 15 / sqrt(ln n)
    bool exact_cut_norms = true;
    [[nodiscard]] bool within_bound() const noexcept { return mean <= bound; }
};

struct SamplingRateOptions {
    std::size_t max_blocks = 64;
    std::size_t limit_resolution = 64;
};

/// Sorts each sample by latent block, aggregates it into at most
/// max_blocks consecutive groups and measures its cut distance to the
/// limit under that alignment.
std::vector<SamplingRateRow> sampling_rate_probe(const GraphonSpec& spec, const std::vector<std::size_t>& sizes,
                                                 std::size_t replicates, std::uint64_t seed,
                                                 const SamplingRateOptions& options = {});

/// Aggregation used by the probe, exposed for testing.
StepGraphonSignal aggregate_sample(const SimpleSample& sample, std::size_t max_blocks);

}  // namespace graphon
