#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "hjreach/decomposition.hpp"
#include "hjreach/grid.hpp"

namespace hjreach {

struct CompareOptions {
    double band = 0.2;               ///< |value| band for max_abs_diff
    std::size_t band_cells = 2;      ///< mismatches must lie this close to a zero level
    std::size_t boundary_skip = 2;   ///< cells dropped at every non-periodic edge
};

/**
 * Agreement of two value functions on one grid, over interior nodes.
 * Containment a_in_b holds when every node with a <= 0 has b <= max spacing.
 */
struct ComparisonReport {
    std::size_t interior_nodes = 0;
    std::size_t mismatch_count = 0;
    double sign_mismatch_fraction = 0.0;
    std::size_t mismatches_outside_band = 0;
    std::size_t band_nodes = 0;
    double max_abs_diff = 0.0;
    std::size_t a_not_in_b = 0;
    std::size_t b_not_in_a = 0;
    bool a_in_b = true;
    bool b_in_a = true;
    double strict_b_only_fraction = 0.0;   ///< b <= 0 < a
    double strict_a_only_fraction = 0.0;   ///< a <= 0 < b
};

ComparisonReport compare_values(const ValueFn& a, const ValueFn& b, const CompareOptions& options = {});

/// 1 for nodes at least `boundary_skip` cells from every non-periodic edge.
std::vector<char> interior_mask(const Grid& grid, std::size_t boundary_skip);

/// Whether the Chebyshev neighborhood of radius `cells` around `flat` holds both signs of v.
bool near_zero_level(const ValueFn& v, std::size_t flat, std::size_t cells);

/**
 * Largest |exact(x)| over the zero crossings of `v` found by linear
 * interpolation along grid lines between interior nodes.
 */
double zero_crossing_error(const ValueFn& v, const std::function<double(std::span<const double>)>& exact,
                           std::size_t boundary_skip);

/// Evaluates `source` on the free dims with the others fixed. Keys are full-state dims.
ValueFn sample_slice(const ValueSource& source, const std::map<std::size_t, double>& fixed);

/// Header: free dim names then "value"; rows in row-major order over the slice grid.
void write_slice_csv(const std::filesystem::path& path, const ValueFn& slice,
                     const std::vector<std::string>& free_names);

void export_slice(const ValueSource& source, const std::map<std::size_t, double>& fixed,
                  const std::vector<std::string>& dim_names, const std::filesystem::path& path);

/// Dims of the full grid not listed in `fixed`, ascending.
std::vector<std::size_t> free_dims(std::size_t dim_count, const std::map<std::size_t, double>& fixed);

}  // namespace hjreach
