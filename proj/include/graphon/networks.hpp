#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "graphon/equivariant.hpp"
#include "graphon/graphon.hpp"

namespace graphon {

enum class Activation { identity, sigmoid, relu, gelu, cos };

double activate(Activation act, double x) noexcept;
std::string_view activation_name(Activation act) noexcept;
/// Throws InvalidArgument for unknown names.
Activation activation_from_name(std::string_view name);
/// Global Lipschitz constant of the scalar function.
double activation_lipschitz(Activation act) noexcept;

/// Dense layer of an MPNN: weights are (out, in) row-major.
struct MpnnLayer {
    std::size_t d_in = 1;
    std::size_t d_out = 1;
    std::vector<double> weights;
    std::vector<double> bias;
};

/// Message passing network with mean aggregation over all nodes:
/// each layer computes rho(W diag(mu) H A^T + b), without rho after the
/// last layer, and the readout integrates over nodes.
struct MpnnModel {
    std::vector<MpnnLayer> layers;
    Activation activation = Activation::sigmoid;

    /// Throws InvalidArgument on shape errors or non-chaining widths.
    void validate() const;
    [[nodiscard]] std::size_t input_width() const;
    [[nodiscard]] std::size_t output_width() const;
};

/// One equivariant layer k_in -> k_out. coeffs is indexed (gamma, out, in)
/// row-major with gamma in enumerate_basis(k_in, k_out) order; the bias is
/// one scalar per output channel.
struct IwnLayer {
    std::size_t k_in = 2;
    std::size_t k_out = 2;
    std::size_t d_in = 2;
    std::size_t d_out = 1;
    std::vector<double> coeffs;
    std::vector<double> bias;

    [[nodiscard]] double coeff(std::size_t gamma, std::size_t out, std::size_t in) const noexcept {
        return coeffs[(gamma * d_out + out) * d_in + in];
    }
};

/// Invariant graphon network: starts at (d, k) = (2, 2) with channels
/// (W(x,y), f(x)) and ends at (1, 0).
struct IwnModel {
    std::vector<IwnLayer> layers;
    Activation activation = Activation::sigmoid;

    /// Throws InvalidArgument on any shape violation.
    void validate() const;
    /// Non-fatal remarks, e.g. an order-0 hidden layer lifted back to k > 0.
    [[nodiscard]] std::vector<std::string> validation_notes() const;
};

std::vector<double> mpnn_forward(const GraphSignal& g, const MpnnModel& model);
std::vector<double> mpnn_forward(const WeightedGraphSignal& g, const MpnnModel& model);
/// Block measures act as integration weights.
std::vector<double> mpnn_forward(const StepGraphonSignal& w, const MpnnModel& model);

/// Channels of the first IWN layer: W(x,y) and f(x) broadcast over y.
std::vector<DenseTensor> iwn_input_channels(const StepGraphonSignal& w);

/// Applies one equivariant layer (basis operators, channel mixing, bias;
/// no activation). Empty `measures` means the uniform grid measure.
/// Per output cell and channel the sum runs over gamma (outer) and input
/// channel (inner), then the bias is added.
std::vector<DenseTensor> apply_iwn_layer(const IwnLayer& layer, std::span<const DenseTensor> input,
                                         std::span<const double> measures = {});

/// Invariant network output. Uniform block measures use the grid-mean
/// path; otherwise block measures weight every integral.
double iwn_forward(const StepGraphonSignal& w, const IwnModel& model);
double iwn_forward(const GraphSignal& g, const IwnModel& model);
double iwn_forward(const WeightedGraphSignal& g, const IwnModel& model);

/// Layer shapes as (k, d) pairs from input to output, e.g. {{2,2},{2,16},{0,1}}.
struct IwnShape {
    std::size_t k = 2;
    std::size_t d = 2;
};

/// Coefficients and biases uniform in +-1/sqrt(fan_in), fan_in = d_in * dim(LE).
IwnModel random_iwn(std::span<const IwnShape> shape, Activation act, std::uint64_t seed);
/// Widths from input to output, e.g. {1, 16, 1}; fan_in = d_in.
MpnnModel random_mpnn(std::span<const std::size_t> widths, Activation act, std::uint64_t seed);

struct LipschitzReport {
    double ratio = 0.0;             ///< max |N(a) - N(b)| / (||W-V||_p + ||f-g||_p)
    double ratio_first_half = 0.0;  ///< same over the first half of the trials
    std::size_t trials = 0;
    bool finite = true;
    /// ratio grew by less than 5% when the trial count doubled.
    [[nodiscard]] bool stable() const noexcept { return ratio <= 1.05 * ratio_first_half; }
};

/// Empirical Lipschitz ratio w.r.t. the labeled L^p distance over random
/// perturbation pairs of `blocks`-block step graphon-signals.
LipschitzReport lipschitz_probe(const IwnModel& model, double p, std::size_t trials, std::uint64_t seed,
                                std::size_t blocks = 6);
LipschitzReport lipschitz_probe(const MpnnModel& model, double p, std::size_t trials, std::uint64_t seed,
                                std::size_t blocks = 6);

}  // namespace graphon
