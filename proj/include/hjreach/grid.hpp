#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjreach {

/// Thrown when grids or value functions are combined inconsistently.
class GridError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using StateVector = std::vector<double>;

/**
 * Rectangular node grid over a box in R^n.
 *
 * Non-periodic dimensions place nodes on both bounds. Periodic dimensions
 * store the fundamental domain [lower, upper) only; the node at `upper`
 * is the node at `lower`.
 *
 * Storage order for values on the grid is row-major: the last dimension
 * varies fastest.
 */
class Grid {
public:
    Grid() = default;
    Grid(std::vector<double> lower, std::vector<double> upper,
         std::vector<std::size_t> node_counts, std::vector<bool> periodic);

    std::size_t dim_count() const { return lower_.size(); }
    std::size_t node_count() const { return node_total_; }

    const std::vector<double>& lower() const { return lower_; }
    const std::vector<double>& upper() const { return upper_; }
    const std::vector<std::size_t>& node_counts() const { return counts_; }
    const std::vector<bool>& periodic() const { return periodic_; }
    const std::vector<double>& spacing() const { return spacing_; }
    const std::vector<std::size_t>& strides() const { return strides_; }

    double lower(std::size_t dim) const { return lower_[dim]; }
    double upper(std::size_t dim) const { return upper_[dim]; }
    std::size_t node_count(std::size_t dim) const { return counts_[dim]; }
    bool periodic(std::size_t dim) const { return periodic_[dim]; }
    double spacing(std::size_t dim) const { return spacing_[dim]; }
    std::size_t stride(std::size_t dim) const { return strides_[dim]; }
    double max_spacing() const;

    /// Period length of a periodic dimension (upper - lower).
    double period(std::size_t dim) const { return upper_[dim] - lower_[dim]; }

    /// Coordinate of node `index` along `dim`.
    double coordinate(std::size_t dim, std::size_t index) const {
        return lower_[dim] + static_cast<double>(index) * spacing_[dim];
    }

    std::vector<double> axis(std::size_t dim) const;

    std::size_t ravel(std::span<const std::size_t> multi_index) const;
    void unravel(std::size_t flat, std::span<std::size_t> multi_index) const;
    std::vector<std::size_t> unravel(std::size_t flat) const;

    StateVector node_state(std::size_t flat) const;

    bool operator==(const Grid& other) const;
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<std::size_t> counts_;
    std::vector<bool> periodic_;
    std::vector<double> spacing_;
    std::vector<std::size_t> strides_;
    std::size_t node_total_ = 0;
};

/// Validating factory. Throws GridError on unordered bounds or counts < 3.
Grid make_grid(std::vector<double> lower, std::vector<double> upper,
               std::vector<std::size_t> node_counts, std::vector<bool> periodic);

/**
 * Implicit-surface value function: a real value per grid node. The set it
 * encodes is {x : value(x) <= 0}.
 */
class ValueFn {
public:
    ValueFn() = default;
    ValueFn(Grid grid, std::vector<double> values);
    ValueFn(Grid grid, double constant);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    std::size_t size() const { return values_.size(); }

    double operator[](std::size_t i) const { return values_[i]; }

    double min_value() const;
    double max_value() const;
    bool all_finite() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

/**
 * Axis-aligned box over `active_dims`. Value is the max over active dims
 * of max(lo - x_i, x_i - hi); negative inside, zero on the boundary, and
 * constant along inactive dims. Infinite bounds give half-spaces.
 */
ValueFn signed_box(const Grid& grid, std::span<const std::size_t> active_dims,
                   std::span<const double> box_lower, std::span<const double> box_upper);

/// Same formula evaluated at an arbitrary state.
double signed_box_value(std::span<const double> x, std::span<const std::size_t> active_dims,
                        std::span<const double> box_lower, std::span<const double> box_upper);

ValueFn set_union(const ValueFn& a, const ValueFn& b);
ValueFn set_intersection(const ValueFn& a, const ValueFn& b);
ValueFn set_complement(const ValueFn& a);

/// Multilinear interpolation. Periodic dims wrap; other dims throw
/// GridError when `x` lies outside [lower, upper].
double interpolate(const ValueFn& v, std::span<const double> x);

/// Like interpolate, but returns false instead of throwing out of bounds.
bool try_interpolate(const ValueFn& v, std::span<const double> x, double& out);

}  // namespace hjreach
