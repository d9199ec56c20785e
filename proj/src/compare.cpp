#include "hjreach/compare.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

namespace hjreach {

std::vector<char> interior_mask(const Grid& grid, std::size_t boundary_skip) {
    std::vector<char> mask(grid.node_count(), 1);
    std::vector<std::size_t> idx(grid.dim_count());
    for (std::size_t f = 0; f < mask.size(); ++f) {
        grid.unravel(f, idx);
        for (std::size_t k = 0; k < grid.dim_count(); ++k) {
            if (grid.periodic(k)) continue;
            if (idx[k] < boundary_skip || idx[k] + boundary_skip >= grid.node_count(k)) {
                mask[f] = 0;
                break;
            }
        }
    }
    return mask;
}

bool near_zero_level(const ValueFn& v, std::size_t flat, std::size_t cells) {
    const Grid& g = v.grid();
    const std::size_t dims = g.dim_count();
    const auto center = g.unravel(flat);
    const long r = static_cast<long>(cells);
    std::vector<long> offset(dims, -r);
    std::vector<std::size_t> idx(dims);
    bool inside = false;
    bool outside = false;
    while (true) {
        bool valid = true;
        for (std::size_t k = 0; k < dims && valid; ++k) {
            const long n = static_cast<long>(g.node_count(k));
            long i = static_cast<long>(center[k]) + offset[k];
            if (g.periodic(k)) {
                i = ((i % n) + n) % n;
            } else if (i < 0 || i >= n) {
                valid = false;
            }
            idx[k] = static_cast<std::size_t>(i);
        }
        if (valid) {
            (v[g.ravel(idx)] <= 0.0 ? inside : outside) = true;
            if (inside && outside) return true;
        }
        std::size_t k = dims;
        while (k-- > 0) {
            if (++offset[k] <= r) break;
            offset[k] = -r;
        }
        if (k == static_cast<std::size_t>(-1)) break;
    }
    return false;
}

ComparisonReport compare_values(const ValueFn& a, const ValueFn& b, const CompareOptions& options) {
    if (a.grid() != b.grid()) throw GridError("compare_values: grids differ");
    const Grid& g = a.grid();
    const auto mask = interior_mask(g, options.boundary_skip);
    const double slack = g.max_spacing();

    ComparisonReport r;
    std::size_t b_only = 0;
    std::size_t a_only = 0;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (!mask[i]) continue;
        ++r.interior_nodes;
        const bool ain = a[i] <= 0.0;
        const bool bin = b[i] <= 0.0;
        if (ain != bin) {
            ++r.mismatch_count;
            if (!near_zero_level(a, i, options.band_cells) && !near_zero_level(b, i, options.band_cells)) {
                ++r.mismatches_outside_band;
            }
            (ain ? a_only : b_only) += 1;
        }
        if (std::abs(a[i]) < options.band || std::abs(b[i]) < options.band) {
            ++r.band_nodes;
            r.max_abs_diff = std::max(r.max_abs_diff, std::abs(a[i] - b[i]));
        }
        if (ain && b[i] > slack) ++r.a_not_in_b;
        if (bin && a[i] > slack) ++r.b_not_in_a;
    }
    r.a_in_b = r.a_not_in_b == 0;
    r.b_in_a = r.b_not_in_a == 0;
    if (r.interior_nodes > 0) {
        const auto n = static_cast<double>(r.interior_nodes);
        r.sign_mismatch_fraction = static_cast<double>(r.mismatch_count) / n;
        r.strict_b_only_fraction = static_cast<double>(b_only) / n;
        r.strict_a_only_fraction = static_cast<double>(a_only) / n;
    }
    return r;
}

double zero_crossing_error(const ValueFn& v, const std::function<double(std::span<const double>)>& exact,
                           std::size_t boundary_skip) {
    const Grid& g = v.grid();
    const auto mask = interior_mask(g, boundary_skip);
    double worst = 0.0;
    std::vector<std::size_t> idx(g.dim_count());
    StateVector x(g.dim_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        if (!mask[i]) continue;
        g.unravel(i, idx);
        for (std::size_t k = 0; k < g.dim_count(); ++k) {
            std::size_t j;
            if (idx[k] + 1 < g.node_count(k)) {
                j = i + g.stride(k);
            } else if (g.periodic(k)) {
                j = i - idx[k] * g.stride(k);
            } else {
                continue;
            }
            if (!mask[j] || (v[i] <= 0.0) == (v[j] <= 0.0)) continue;
            const double s = v[i] / (v[i] - v[j]);
            for (std::size_t d = 0; d < g.dim_count(); ++d) x[d] = g.coordinate(d, idx[d]);
            x[k] += s * g.spacing(k);
            worst = std::max(worst, std::abs(exact(x)));
        }
    }
    return worst;
}

std::vector<std::size_t> free_dims(std::size_t dim_count, const std::map<std::size_t, double>& fixed) {
    std::vector<std::size_t> out;
    for (std::size_t d = 0; d < dim_count; ++d) {
        if (!fixed.count(d)) out.push_back(d);
    }
    return out;
}

ValueFn sample_slice(const ValueSource& source, const std::map<std::size_t, double>& fixed) {
    const Grid& g = source.grid();
    for (const auto& [dim, value] : fixed) {
        if (dim >= g.dim_count()) throw GridError("slice fixes an unknown dim");
        if (!g.periodic(dim) && (value < g.lower(dim) || value > g.upper(dim))) {
            throw GridError("slice coordinate " + std::to_string(value) + " outside dim " +
                            std::to_string(dim) + " bounds");
        }
    }
    const auto free = free_dims(g.dim_count(), fixed);
    if (free.empty()) throw GridError("slice leaves no free dims");
    std::vector<double> lo, hi;
    std::vector<std::size_t> counts;
    std::vector<bool> periodic;
    for (std::size_t d : free) {
        lo.push_back(g.lower(d));
        hi.push_back(g.upper(d));
        counts.push_back(g.node_count(d));
        periodic.push_back(g.periodic(d));
    }
    Grid slice(lo, hi, counts, periodic);
    StateVector x(g.dim_count());
    for (const auto& [dim, value] : fixed) x[dim] = value;
    std::vector<double> values(slice.node_count());
    std::vector<std::size_t> idx(free.size());
    for (std::size_t f = 0; f < values.size(); ++f) {
        slice.unravel(f, idx);
        for (std::size_t k = 0; k < free.size(); ++k) x[free[k]] = slice.coordinate(k, idx[k]);
        values[f] = source.value_at(x);
    }
    return ValueFn(std::move(slice), std::move(values));
}

void write_slice_csv(const std::filesystem::path& path, const ValueFn& slice,
                     const std::vector<std::string>& free_names) {
    const Grid& g = slice.grid();
    if (free_names.size() != g.dim_count()) throw GridError("slice name count mismatch");
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& n : free_names) out << n << ',';
    out << "value\n";
    out << std::setprecision(17);
    std::vector<std::size_t> idx(g.dim_count());
    for (std::size_t f = 0; f < slice.size(); ++f) {
        g.unravel(f, idx);
        for (std::size_t k = 0; k < g.dim_count(); ++k) out << g.coordinate(k, idx[k]) << ',';
        out << slice[f] << '\n';
    }
}

void export_slice(const ValueSource& source, const std::map<std::size_t, double>& fixed,
                  const std::vector<std::string>& dim_names, const std::filesystem::path& path) {
    const auto slice = sample_slice(source, fixed);
    std::vector<std::string> names;
    for (std::size_t d : free_dims(source.grid().dim_count(), fixed)) {
        names.push_back(d < dim_names.size() ? dim_names[d] : "x" + std::to_string(d));
    }
    write_slice_csv(path, slice, names);
}

}  // namespace hjreach
