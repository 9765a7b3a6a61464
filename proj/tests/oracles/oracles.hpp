#pragma once

// Independent reference implementations used by the unit and acceptance
// tests. They share no code paths with the library beyond the data types.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

#include "graphon/distance.hpp"
#include "graphon/graphon.hpp"
#include "graphon/networks.hpp"
#include "graphon/pattern.hpp"

namespace oracle {

// Cut norm by enumerating every pair of block subsets (S, T).
inline double cut_norm_all_pairs(const graphon::StepKernel& u) {
    const std::size_t p = u.blocks();
    double best = 0.0;
    for (std::size_t s = 0; s < (std::size_t{1} << p); ++s)
        for (std::size_t t = 0; t < (std::size_t{1} << p); ++t) {
            double total = 0.0;
            for (std::size_t i = 0; i < p; ++i) {
                if (!(s >> i & 1)) continue;
                for (std::size_t j = 0; j < p; ++j)
                    if (t >> j & 1) total += u.measures[i] * u.measures[j] * u.values(i, j);
            }
            best = std::max(best, std::abs(total));
        }
    return best;
}

// Signal-weighted homomorphism density by recursion over node assignments.
inline double hom_density_recursive(const graphon::Pattern& f, const graphon::StepGraphonSignal& w) {
    const std::size_t k = f.node_count();
    std::vector<std::size_t> x(k);
    auto rec = [&](auto&& self, std::size_t i) -> double {
        if (i == k) {
            double v = 1.0;
            for (const auto& e : f.edges())
                for (unsigned m = 0; m < e.multiplicity; ++m) v *= w.value(x[e.u], x[e.v]);
            return v;
        }
        double total = 0.0;
        for (std::size_t b = 0; b < w.blocks(); ++b) {
            x[i] = b;
            double node = w.measure(b);
            for (unsigned d = 0; d < f.exponents()[i]; ++d) node *= w.signal(b);
            total += node * self(self, i + 1);
        }
        return total;
    };
    return rec(rec, 0);
}

// Literal 2-IWN from the pseudocode: H is n x n x d, row-major (i, j, c).
struct Tensor3 {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> v;
    double& at(std::size_t i, std::size_t j, std::size_t c) { return v[(i * n + j) * d + c]; }
    double at(std::size_t i, std::size_t j, std::size_t c) const { return v[(i * n + j) * d + c]; }
};

inline Tensor3 stack_input(const graphon::StepGraphonSignal& w) {
    const std::size_t n = w.blocks();
    Tensor3 h{n, 2, std::vector<double>(n * n * 2)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            h.at(i, j, 0) = w.value(i, j);
            h.at(i, j, 1) = w.signal(i);
        }
    return h;
}

// H1..H7 of the 2-IWN linear operator pseudocode.
inline std::array<Tensor3, 7> seven_operators(const Tensor3& h) {
    const std::size_t n = h.n, d = h.d;
    const double inv_n = 1.0 / static_cast<double>(n);
    const double inv_n2 = 1.0 / static_cast<double>(n * n);
    std::vector<double> row(n * d, 0.0), col(n * d, 0.0), all(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c < d; ++c) {
                row[i * d + c] += h.at(i, j, c);  // 'ijd->id'
                col[j * d + c] += h.at(i, j, c);  // 'ijd->jd'
                all[c] += h.at(i, j, c);          // 'ijd->d'
            }
    std::array<Tensor3, 7> out;
    for (auto& t : out) t = Tensor3{n, d, std::vector<double>(n * n * d)};
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t c = 0; c < d; ++c) {
                out[0].at(i, j, c) = inv_n * row[i * d + c];
                out[1].at(i, j, c) = inv_n * row[j * d + c];
                out[2].at(i, j, c) = inv_n * col[i * d + c];
                out[3].at(i, j, c) = inv_n * col[j * d + c];
                out[4].at(i, j, c) = h.at(i, j, c);
                out[5].at(i, j, c) = h.at(j, i, c);
                out[6].at(i, j, c) = inv_n2 * all[c];
            }
    return out;
}

// Position of H_{op+1} in the canonical basis order of the library:
// [] , [1>1], [1>1, 2>2], [1>2], [1>2, 2>1], [2>1], [2>2].
inline constexpr std::array<std::size_t, 7> kCanonicalIndexOfH{1, 3, 5, 6, 2, 4, 0};
// Inverse: the operator stacked at canonical position g.
inline constexpr std::array<std::size_t, 7> kHAtCanonical{6, 0, 4, 1, 5, 2, 3};

// STACK in canonical order, then LINEAR: acc = sum_f w[o][f] x[f] (f ascending), plus bias.
inline Tensor3 literal_layer(const Tensor3& h, const graphon::IwnLayer& layer) {
    const auto ops = seven_operators(h);
    const std::size_t n = h.n, d_in = h.d;
    Tensor3 out{n, layer.d_out, std::vector<double>(n * n * layer.d_out)};
    std::vector<double> stacked(7 * d_in);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t g = 0; g < 7; ++g)
                for (std::size_t c = 0; c < d_in; ++c) stacked[g * d_in + c] = ops[kHAtCanonical[g]].at(i, j, c);
            for (std::size_t o = 0; o < layer.d_out; ++o) {
                double acc = 0.0;
                for (std::size_t g = 0; g < 7; ++g)
                    for (std::size_t c = 0; c < d_in; ++c) acc += layer.coeff(g, o, c) * stacked[g * d_in + c];
                acc += layer.bias[o];
                out.at(i, j, o) = acc;
            }
        }
    return out;
}

// Full forward pass of the pseudocode: all layers 2 -> 2, activation between
// layers, mean readout.
inline std::vector<double> literal_forward(const graphon::StepGraphonSignal& w,
                                           const std::vector<graphon::IwnLayer>& layers,
                                           graphon::Activation act) {
    Tensor3 h = stack_input(w);
    for (std::size_t s = 0; s < layers.size(); ++s) {
        h = literal_layer(h, layers[s]);
        if (s + 1 < layers.size())
            for (double& x : h.v) x = graphon::activate(act, x);
    }
    std::vector<double> out(h.d, 0.0);
    for (std::size_t i = 0; i < h.n; ++i)
        for (std::size_t j = 0; j < h.n; ++j)
            for (std::size_t c = 0; c < h.d; ++c) out[c] += h.at(i, j, c);
    for (double& x : out) x = (1.0 / static_cast<double>(h.n * h.n)) * x;
    return out;
}

// MPNN pseudocode on a dense weight matrix with uniform node weights.
inline std::vector<double> literal_mpnn(const graphon::SquareMatrix& a, const std::vector<double>& x,
                                        const graphon::MpnnModel& model) {
    const std::size_t n = a.size();
    std::vector<double> h = x;
    std::size_t d = 1;
    for (std::size_t s = 0; s < model.layers.size(); ++s) {
        const auto& layer = model.layers[s];
        std::vector<double> agg(n * d, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t c = 0; c < d; ++c) agg[i * d + c] += a(i, j) * h[j * d + c];
        for (double& v : agg) v /= static_cast<double>(n);
        std::vector<double> next(n * layer.d_out);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t o = 0; o < layer.d_out; ++o) {
                double acc = layer.bias[o];
                for (std::size_t c = 0; c < d; ++c) acc += layer.weights[o * layer.d_in + c] * agg[i * d + c];
                next[i * layer.d_out + o] = s + 1 < model.layers.size() ? graphon::activate(model.activation, acc) : acc;
            }
        h = std::move(next);
        d = layer.d_out;
    }
    std::vector<double> out(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t c = 0; c < d; ++c) out[c] += h[i * d + c] / static_cast<double>(n);
    return out;
}

}  // namespace oracle
