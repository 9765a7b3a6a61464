#include "graphon/equivariant.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <string>

#include "graphon/error.hpp"

namespace graphon {

std::string BasisPartition::to_string() const {
    std::string out = std::to_string(k) + "," + std::to_string(l) + ":[";
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(pairs[i].first + 1) + ">" + std::to_string(pairs[i].second + 1);
    }
    return out + "]";
}

namespace {

std::size_t parse_number(std::string_view& text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{}) throw InvalidArgument("malformed basis partition text");
    text.remove_prefix(static_cast<std::size_t>(ptr - text.data()));
    return value;
}

void expect(std::string_view& text, char c) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    if (text.empty() || text.front() != c) throw InvalidArgument(std::string("basis partition text: expected '") + c + "'");
    text.remove_prefix(1);
}

}  // namespace

BasisPartition BasisPartition::parse(std::string_view text) {
    BasisPartition out;
    out.k = parse_number(text);
    expect(text, ',');
    out.l = parse_number(text);
    expect(text, ':');
    expect(text, '[');
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    if (!text.empty() && text.front() != ']') {
        while (true) {
            const std::size_t i = parse_number(text);
            expect(text, '>');
            const std::size_t j = parse_number(text);
            if (i == 0 || j == 0 || i > out.k || j > out.l) throw InvalidArgument("basis partition axis out of range");
            out.pairs.emplace_back(i - 1, j - 1);
            while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
            if (!text.empty() && text.front() == ',') {
                text.remove_prefix(1);
                continue;
            }
            break;
        }
    }
    expect(text, ']');
    std::sort(out.pairs.begin(), out.pairs.end());
    for (std::size_t a = 0; a < out.pairs.size(); ++a)
        for (std::size_t b = a + 1; b < out.pairs.size(); ++b)
            if (out.pairs[a].first == out.pairs[b].first || out.pairs[a].second == out.pairs[b].second)
                throw InvalidArgument("basis partition uses an axis twice");
    return out;
}

std::uint64_t dimension(std::size_t k, std::size_t l) {
    if (k + l > 20) throw CapacityError("dimension: k + l > 20 is not supported");
    auto binom = [](std::uint64_t n, std::uint64_t r) {
        std::uint64_t c = 1;
        for (std::uint64_t i = 1; i <= r; ++i) c = c * (n - r + i) / i;
        return c;
    };
    std::uint64_t total = 0, factorial = 1;
    for (std::size_t s = 0; s <= std::min(k, l); ++s) {
        if (s > 0) factorial *= s;
        total += factorial * binom(k, s) * binom(l, s);
    }
    return total;
}

std::vector<BasisPartition> enumerate_basis(std::size_t k, std::size_t l) {
    if (k + l > 12) throw CapacityError("enumerate_basis: k + l > 12 is not supported");
    std::vector<BasisPartition> out;
    std::vector<bool> used(l, false);
    BasisPartition current{k, l, {}};
    std::function<void(std::size_t)> visit = [&](std::size_t axis) {
        if (axis == k) {
            out.push_back(current);
            return;
        }
        visit(axis + 1);
        for (std::size_t j = 0; j < l; ++j) {
            if (used[j]) continue;
            used[j] = true;
            current.pairs.emplace_back(axis, j);
            visit(axis + 1);
            current.pairs.pop_back();
            used[j] = false;
        }
    };
    visit(0);
    std::sort(out.begin(), out.end(), [](const BasisPartition& a, const BasisPartition& b) { return a.pairs < b.pairs; });
    return out;
}

std::size_t tensor_size(std::size_t order, std::size_t resolution) {
    std::size_t size = 1;
    for (std::size_t i = 0; i < order; ++i) {
        if (resolution != 0 && size > (std::size_t{1} << 40) / resolution)
            throw CapacityError("tensor too large");
        size *= resolution;
    }
    return size;
}

DenseTensor::DenseTensor(std::size_t order, std::size_t resolution, double fill)
    : order_(order), n_(resolution), values_(tensor_size(order, resolution), fill) {
    if (resolution == 0) throw InvalidArgument("tensor resolution must be positive");
}

DenseTensor::DenseTensor(std::size_t order, std::size_t resolution, std::vector<double> values)
    : order_(order), n_(resolution), values_(std::move(values)) {
    if (resolution == 0) throw InvalidArgument("tensor resolution must be positive");
    if (values_.size() != tensor_size(order, resolution)) throw InvalidArgument("tensor data has the wrong length");
}

std::size_t DenseTensor::flat_index(std::span<const std::size_t> index) const {
    if (index.size() != order_) throw InvalidArgument("tensor index has the wrong order");
    std::size_t flat = 0;
    for (std::size_t x : index) {
        if (x >= n_) throw InvalidArgument("tensor index out of range");
        flat = flat * n_ + x;
    }
    return flat;
}

double DenseTensor::at(std::span<const std::size_t> index) const { return values_[flat_index(index)]; }

namespace {

void check_measures(std::span<const double> measures, std::size_t n) {
    if (!measures.empty() && measures.size() != n) throw InvalidArgument("measure vector does not match resolution");
}

}  // namespace

BasisOperand reduce_for_basis(const BasisPartition& gamma, const DenseTensor& t, std::span<const double> measures) {
    if (t.order() != gamma.k) throw InvalidArgument("tensor order does not match basis element input order");
    const std::size_t n = t.resolution();
    check_measures(measures, n);
    const std::size_t k = gamma.k;
    const std::size_t s = gamma.pairs.size();

    BasisOperand op;
    op.strides_.assign(gamma.l, 0);
    if (s == k) {
        // Pure axis relabeling: read the input in place.
        op.source_ = &t;
        for (const auto& [in, out] : gamma.pairs) {
            std::size_t stride = 1;
            for (std::size_t a = in + 1; a < k; ++a) stride *= n;
            op.strides_[out] = stride;
        }
        return op;
    }

    std::vector<std::size_t> reduced_stride(k, 0);
    for (std::size_t r = 0; r < s; ++r) {
        std::size_t stride = 1;
        for (std::size_t q = r + 1; q < s; ++q) stride *= n;
        reduced_stride[gamma.pairs[r].first] = stride;
        op.strides_[gamma.pairs[r].second] = stride;
    }
    std::vector<bool> unmatched(k, true);
    for (const auto& pr : gamma.pairs) unmatched[pr.first] = false;

    op.owned_.assign(tensor_size(s, n), 0.0);
    std::vector<std::size_t> x(k, 0);
    const auto& values = t.values();
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        std::size_t target = 0;
        double weight = 1.0;
        for (std::size_t a = 0; a < k; ++a) {
            target += x[a] * reduced_stride[a];
            if (unmatched[a] && !measures.empty()) weight *= measures[x[a]];
        }
        op.owned_[target] += measures.empty() ? values[flat] : weight * values[flat];
        for (std::size_t a = k; a-- > 0;) {
            if (++x[a] < n) break;
            x[a] = 0;
        }
    }
    if (measures.empty()) {
        double cells = 1.0;
        for (std::size_t a = 0; a < k - s; ++a) cells *= static_cast<double>(n);
        const double scale = 1.0 / cells;
        for (double& v : op.owned_) v = scale * v;
    }
    return op;
}

DenseTensor apply_basis(const BasisPartition& gamma, const DenseTensor& t, std::span<const double> measures) {
    const BasisOperand op = reduce_for_basis(gamma, t, measures);
    const std::size_t n = t.resolution();
    const std::size_t l = gamma.l;
    DenseTensor out(l, n);
    const double* src = op.data();
    const auto& strides = op.output_strides();
    std::vector<std::size_t> y(l, 0);
    std::size_t offset = 0;
    for (std::size_t flat = 0; flat < out.size(); ++flat) {
        out[flat] = src[offset];
        for (std::size_t b = l; b-- > 0;) {
            offset += strides[b];
            if (++y[b] < n) break;
            offset -= strides[b] * n;
            y[b] = 0;
        }
    }
    return out;
}

double tensor_lp_norm(const DenseTensor& t, double p, std::span<const double> measures) {
    if (!(p >= 1.0)) throw InvalidArgument("L^p norm needs p >= 1");
    const std::size_t n = t.resolution();
    check_measures(measures, n);
    const std::size_t k = t.order();
    const bool inf = std::isinf(p);
    double acc = 0.0;
    std::vector<std::size_t> x(k, 0);
    const double uniform_cell = 1.0 / static_cast<double>(t.size());
    for (std::size_t flat = 0; flat < t.size(); ++flat) {
        const double v = std::abs(t[flat]);
        if (inf) {
            acc = std::max(acc, v);
        } else {
            double w = uniform_cell;
            if (!measures.empty()) {
                w = 1.0;
                for (std::size_t a = 0; a < k; ++a) w *= measures[x[a]];
            }
            acc += w * std::pow(v, p);
        }
        for (std::size_t a = k; a-- > 0;) {
            if (++x[a] < n) break;
            x[a] = 0;
        }
    }
    return inf ? acc : std::pow(acc, 1.0 / p);
}

}  // namespace graphon
