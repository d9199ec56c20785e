#include "hjreach/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hjreach {

Grid::Grid(std::vector<double> lower, std::vector<double> upper,
           std::vector<std::size_t> node_counts, std::vector<bool> periodic)
    : lower_(std::move(lower)),
      upper_(std::move(upper)),
      counts_(std::move(node_counts)),
      periodic_(std::move(periodic)) {
    const std::size_t n = lower_.size();
    if (n == 0) throw GridError("grid needs at least one dimension");
    if (upper_.size() != n || counts_.size() != n || periodic_.size() != n) {
        throw GridError("grid bound/count/periodic lengths differ");
    }
    spacing_.resize(n);
    strides_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i])) {
            throw GridError("grid bounds must be finite with lower < upper in dim " +
                            std::to_string(i));
        }
        if (counts_[i] < 3) {
            throw GridError("grid needs at least 3 nodes in dim " + std::to_string(i));
        }
        const double span = upper_[i] - lower_[i];
        spacing_[i] = periodic_[i] ? span / static_cast<double>(counts_[i])
                                   : span / static_cast<double>(counts_[i] - 1);
    }
    std::size_t stride = 1;
    for (std::size_t i = n; i-- > 0;) {
        strides_[i] = stride;
        if (stride > std::numeric_limits<std::size_t>::max() / counts_[i]) {
            throw GridError("grid node count overflows");
        }
        stride *= counts_[i];
    }
    node_total_ = stride;
}

Grid make_grid(std::vector<double> lower, std::vector<double> upper,
               std::vector<std::size_t> node_counts, std::vector<bool> periodic) {
    return Grid(std::move(lower), std::move(upper), std::move(node_counts), std::move(periodic));
}

double Grid::max_spacing() const {
    return *std::max_element(spacing_.begin(), spacing_.end());
}

std::vector<double> Grid::axis(std::size_t dim) const {
    std::vector<double> out(counts_[dim]);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = coordinate(dim, i);
    return out;
}

std::size_t Grid::ravel(std::span<const std::size_t> multi_index) const {
    std::size_t flat = 0;
    for (std::size_t d = 0; d < dim_count(); ++d) flat += multi_index[d] * strides_[d];
    return flat;
}

void Grid::unravel(std::size_t flat, std::span<std::size_t> multi_index) const {
    for (std::size_t d = 0; d < dim_count(); ++d) {
        multi_index[d] = flat / strides_[d];
        flat %= strides_[d];
    }
}

std::vector<std::size_t> Grid::unravel(std::size_t flat) const {
    std::vector<std::size_t> idx(dim_count());
    unravel(flat, idx);
    return idx;
}

StateVector Grid::node_state(std::size_t flat) const {
    StateVector x(dim_count());
    for (std::size_t d = 0; d < dim_count(); ++d) {
        x[d] = coordinate(d, flat / strides_[d]);
        flat %= strides_[d];
    }
    return x;
}

bool Grid::operator==(const Grid& other) const {
    return lower_ == other.lower_ && upper_ == other.upper_ && counts_ == other.counts_ &&
           periodic_ == other.periodic_;
}

ValueFn::ValueFn(Grid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.node_count()) {
        throw GridError("value count " + std::to_string(values_.size()) +
                        " does not match grid node count " +
                        std::to_string(grid_.node_count()));
    }
}

ValueFn::ValueFn(Grid grid, double constant) : grid_(std::move(grid)) {
    values_.assign(grid_.node_count(), constant);
}

double ValueFn::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double ValueFn::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

bool ValueFn::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double signed_box_value(std::span<const double> x, std::span<const std::size_t> active_dims,
                        std::span<const double> box_lower, std::span<const double> box_upper) {
    double value = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < active_dims.size(); ++k) {
        const double xi = x[active_dims[k]];
        value = std::max(value, std::max(box_lower[k] - xi, xi - box_upper[k]));
    }
    return value;
}

ValueFn signed_box(const Grid& grid, std::span<const std::size_t> active_dims,
                   std::span<const double> box_lower, std::span<const double> box_upper) {
    if (active_dims.empty()) throw GridError("signed_box needs at least one active dim");
    if (box_lower.size() != active_dims.size() || box_upper.size() != active_dims.size()) {
        throw GridError("signed_box bound lengths differ from active dim count");
    }
    for (std::size_t k = 0; k < active_dims.size(); ++k) {
        if (active_dims[k] >= grid.dim_count()) {
            throw GridError("signed_box dim " + std::to_string(active_dims[k]) + " out of range");
        }
        if (!(box_lower[k] <= box_upper[k])) throw GridError("signed_box bounds unordered");
        if (std::isinf(box_lower[k]) && std::isinf(box_upper[k])) {
            throw GridError("signed_box needs a finite bound in every active dim");
        }
    }
    std::vector<double> values(grid.node_count());
    std::vector<std::size_t> idx(grid.dim_count(), 0);
    StateVector x(grid.dim_count());
    for (std::size_t flat = 0; flat < values.size(); ++flat) {
        grid.unravel(flat, idx);
        for (std::size_t d = 0; d < x.size(); ++d) x[d] = grid.coordinate(d, idx[d]);
        values[flat] = signed_box_value(x, active_dims, box_lower, box_upper);
    }
    return ValueFn(grid, std::move(values));
}

namespace {

template <typename Op>
ValueFn pointwise(const ValueFn& a, const ValueFn& b, Op op) {
    if (a.grid() != b.grid()) throw GridError("set operation on mismatched grids");
    std::vector<double> out(a.size());
    const auto va = a.values();
    const auto vb = b.values();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(va[i], vb[i]);
    return ValueFn(a.grid(), std::move(out));
}

// Fractional node positions within rounding of a node are treated as the
// node, so queries at node coordinates return node values exactly.
double snap_to_node(double s) {
    const double r = std::round(s);
    return std::abs(s - r) < 1e-9 ? r : s;
}

}  // namespace

ValueFn set_union(const ValueFn& a, const ValueFn& b) {
    return pointwise(a, b, [](double x, double y) { return std::min(x, y); });
}

ValueFn set_intersection(const ValueFn& a, const ValueFn& b) {
    return pointwise(a, b, [](double x, double y) { return std::max(x, y); });
}

ValueFn set_complement(const ValueFn& a) {
    std::vector<double> out(a.values().begin(), a.values().end());
    for (double& v : out) v = -v;
    return ValueFn(a.grid(), std::move(out));
}

bool try_interpolate(const ValueFn& v, std::span<const double> x, double& out) {
    const Grid& g = v.grid();
    const std::size_t n = g.dim_count();
    if (x.size() != n) throw GridError("interpolation state has wrong dimension");

    // Per-dim bracketing nodes and weight of the upper node.
    constexpr std::size_t kMaxDims = 16;
    if (n > kMaxDims) throw GridError("interpolation supports at most 16 dims");
    std::size_t lo_idx[kMaxDims];
    std::size_t hi_idx[kMaxDims];
    double weight[kMaxDims];

    for (std::size_t d = 0; d < n; ++d) {
        const std::size_t count = g.node_count(d);
        const double h = g.spacing(d);
        double rel = x[d] - g.lower(d);
        if (g.periodic(d)) {
            const double period = g.period(d);
            rel = std::fmod(rel, period);
            if (rel < 0) rel += period;
            double s = snap_to_node(rel / h);
            auto i0 = static_cast<std::size_t>(std::floor(s));
            if (i0 >= count) {  // rel rounded up to the period
                i0 = 0;
                s = 0.0;
            }
            lo_idx[d] = i0;
            hi_idx[d] = (i0 + 1) % count;
            weight[d] = s - static_cast<double>(i0);
        } else {
            if (!(x[d] >= g.lower(d) && x[d] <= g.upper(d))) return false;
            const double s = snap_to_node(rel / h);
            auto i0 = static_cast<std::size_t>(std::floor(s));
            if (i0 >= count - 1) i0 = count - 2;
            lo_idx[d] = i0;
            hi_idx[d] = i0 + 1;
            weight[d] = std::clamp(s - static_cast<double>(i0), 0.0, 1.0);
        }
    }

    const auto values = v.values();
    double acc = 0.0;
    const std::size_t corners = std::size_t{1} << n;
    for (std::size_t c = 0; c < corners; ++c) {
        double w = 1.0;
        std::size_t flat = 0;
        for (std::size_t d = 0; d < n; ++d) {
            const bool upper = (c >> (n - 1 - d)) & 1U;
            w *= upper ? weight[d] : 1.0 - weight[d];
            flat += (upper ? hi_idx[d] : lo_idx[d]) * g.stride(d);
        }
        if (w != 0.0) acc += w * values[flat];
    }
    out = acc;
    return true;
}

double interpolate(const ValueFn& v, std::span<const double> x) {
    double out = 0.0;
    if (!try_interpolate(v, x, out)) throw GridError("interpolation state outside grid bounds");
    return out;
}

}  // namespace hjreach
