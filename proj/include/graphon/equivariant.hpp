#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace graphon {

/// One element of the restricted basis of LE_{k -> l}: a partial matching
/// between input axes and output axes. Every other axis is a singleton
/// block; unmatched input axes are integrated out and unmatched output
/// axes are replicated. Axes are 0-based here and 1-based in text form.
struct BasisPartition {
    std::size_t k = 0;
    std::size_t l = 0;
    /// (input axis, output axis), sorted by input axis.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;

    /// "k,l:[i1>j1, i2>j2]" with 1-based axes, e.g. "2,2:[1>2, 2>1]".
    [[nodiscard]] std::string to_string() const;
    static BasisPartition parse(std::string_view text);

    friend bool operator==(const BasisPartition&, const BasisPartition&) = default;
};

/// sum_{s=0}^{min(k,l)} s! C(k,s) C(l,s). Throws CapacityError if k + l > 20.
std::uint64_t dimension(std::size_t k, std::size_t l);

/// All partial matchings, sorted lexicographically by pair list.
/// Throws CapacityError if k + l > 12.
std::vector<BasisPartition> enumerate_basis(std::size_t k, std::size_t l);

/// Order-k tensor at resolution n, row-major with the last axis fastest.
class DenseTensor {
public:
    DenseTensor() = default;
    DenseTensor(std::size_t order, std::size_t resolution, double fill = 0.0);
    DenseTensor(std::size_t order, std::size_t resolution, std::vector<double> values);

    [[nodiscard]] std::size_t order() const noexcept { return order_; }
    [[nodiscard]] std::size_t resolution() const noexcept { return n_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }
    [[nodiscard]] std::vector<double>& values() noexcept { return values_; }
    [[nodiscard]] double operator[](std::size_t flat) const noexcept { return values_[flat]; }
    double& operator[](std::size_t flat) noexcept { return values_[flat]; }

    [[nodiscard]] double at(std::span<const std::size_t> index) const;
    [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> index) const;

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

private:
    std::size_t order_ = 0;
    std::size_t n_ = 1;
    std::vector<double> values_{0.0};
};

/// n^order, throwing CapacityError past 2^40 entries.
std::size_t tensor_size(std::size_t order, std::size_t resolution);

/// T_gamma(U) restricted to the reduced operand: U integrated over the
/// unmatched input axes. The value of T_gamma(U) at output index y is
/// data()[sum_b y_b * output_strides[b]]; unmatched output axes have stride 0.
/// When every input axis is matched no copy is made and the operand refers
/// to the input tensor, which must outlive it.
class BasisOperand {
public:
    [[nodiscard]] const double* data() const noexcept {
        return owned_.empty() ? source_->values().data() : owned_.data();
    }
    [[nodiscard]] const std::vector<std::size_t>& output_strides() const noexcept { return strides_; }

private:
    friend BasisOperand reduce_for_basis(const BasisPartition&, const DenseTensor&, std::span<const double>);
    const DenseTensor* source_ = nullptr;
    std::vector<double> owned_;
    std::vector<std::size_t> strides_;
};

/// Integrates out the unmatched axes of `t`. With empty `measures` every
/// coordinate has weight 1/n and the reduction is (row-major sum) * n^-u for
/// u unmatched axes; otherwise cell weights are products of `measures`.
BasisOperand reduce_for_basis(const BasisPartition& gamma, const DenseTensor& t,
                              std::span<const double> measures = {});

/// T_gamma applied at finite resolution (uniform measure on the grid, or the
/// given block measures).
DenseTensor apply_basis(const BasisPartition& gamma, const DenseTensor& t, std::span<const double> measures = {});

/// (integral of |U|^p)^(1/p) under the product measure; p = inf gives max |U|.
double tensor_lp_norm(const DenseTensor& t, double p, std::span<const double> measures = {});

}  // namespace graphon
