#include "hjreach/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace hjreach {

ControlSignal::ControlSignal(double t_start, double t_end, std::vector<std::vector<double>> pieces)
    : t_start_(t_start), t_end_(t_end), pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw ModelError("control signal needs at least one piece");
    if (!(t_end_ >= t_start_)) throw ModelError("control signal interval is reversed");
    for (const auto& p : pieces_) {
        if (p.size() != pieces_.front().size()) throw ModelError("control pieces differ in width");
        for (double v : p) {
            if (!std::isfinite(v)) throw ModelError("control value is not finite");
        }
    }
}

ControlSignal ControlSignal::constant(double t_start, double t_end, std::vector<double> value,
                                      std::size_t piece_count) {
    return ControlSignal(t_start, t_end, std::vector<std::vector<double>>(piece_count, value));
}

void ControlSignal::check_bounds(const std::vector<Interval>& bounds) const {
    if (channel_count() != bounds.size()) throw ModelError("signal width does not match bounds");
    for (const auto& p : pieces_) {
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (!bounds[k].contains(p[k])) {
                throw ModelError("signal channel " + std::to_string(k) + " outside bounds");
            }
        }
    }
}

ControlSignal ControlSignal::shifted(double tau) const {
    return ControlSignal(t_start_ + tau, t_end_ + tau, pieces_);
}

Trajectory simulate(const SystemModel& model, const StateVector& x0, const ControlSignal& control,
                    const ControlSignal* disturbance, std::size_t steps_per_piece, bool every_step) {
    const std::size_t n = model.dim_count();
    if (x0.size() != n) throw ModelError("initial state has wrong dimension");
    for (double v : x0) {
        if (!std::isfinite(v)) throw ModelError("initial state is not finite");
    }
    if (steps_per_piece == 0) throw ModelError("steps_per_piece must be positive");
    control.check_bounds(model.control_bounds());
    if (disturbance) {
        disturbance->check_bounds(model.disturbance_bounds());
        if (disturbance->piece_count() != control.piece_count() ||
            disturbance->t_start() != control.t_start() || disturbance->t_end() != control.t_end()) {
            throw ModelError("disturbance partition differs from control partition");
        }
    }

    Trajectory traj;
    StateVector x = x0;
    traj.times.push_back(control.t_start());
    traj.states.push_back(x);

    const double piece_len = control.piece_duration();
    const double h = piece_len / static_cast<double>(steps_per_piece);
    StateVector k1(n), k2(n), k3(n), k4(n), tmp(n);
    for (std::size_t p = 0; p < control.piece_count(); ++p) {
        const auto u = control.piece(p);
        const std::span<const double> d =
            disturbance ? disturbance->piece(p) : std::span<const double>(model.nominal_disturbance());
        const double piece_start = control.t_start() + static_cast<double>(p) * piece_len;
        for (std::size_t s = 0; s < steps_per_piece; ++s) {
            model.flow_into(x, u, d, k1);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k1[i];
            model.flow_into(tmp, u, d, k2);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * h * k2[i];
            model.flow_into(tmp, u, d, k3);
            for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + h * k3[i];
            model.flow_into(tmp, u, d, k4);
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
                if (!std::isfinite(x[i])) {
                    throw ModelError("trajectory became non-finite in piece " + std::to_string(p));
                }
            }
            if (every_step && s + 1 < steps_per_piece) {
                traj.times.push_back(piece_start + static_cast<double>(s + 1) * h);
                traj.states.push_back(x);
            }
        }
        traj.times.push_back(p + 1 == control.piece_count() ? control.t_end()
                                                             : piece_start + piece_len);
        traj.states.push_back(x);
    }
    return traj;
}

double trajectory_target_value(const Trajectory& traj, const ValueFn& target, SolveMode mode) {
    auto value_of = [&](const StateVector& x) {
        double v;
        return try_interpolate(target, x, v) ? v : std::numeric_limits<double>::infinity();
    };
    if (mode == SolveMode::set) return value_of(traj.states.back());
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : traj.states) best = std::min(best, value_of(x));
    return best;
}

McResult mc_reach_check(const SystemModel& model, const StateVector& x0, const ValueFn& target,
                        double horizon, Objective objective, std::size_t sample_count,
                        std::uint64_t seed, const McOptions& options) {
    if (horizon > 0.0) throw ModelError("horizon must be non-positive");
    const auto& bounds = model.control_bounds();
    const std::size_t m = bounds.size();
    const std::size_t pieces = std::max<std::size_t>(1, options.piece_count);
    const bool maximal = objective == Objective::maximal;

    McResult result;
    auto judge = [&](const ControlSignal& signal) {
        ++result.samples_tried;
        double v;
        if (horizon == 0.0) {
            v = trajectory_target_value({{0.0}, {x0}}, target, options.mode);
        } else {
            v = trajectory_target_value(
                simulate(model, x0, signal, nullptr, options.steps_per_piece, options.mode == SolveMode::tube),
                target, options.mode);
        }
        const bool hit = maximal ? v <= 0.0 : v > 0.0;
        if (hit) {
            result.found = true;
            result.witness = signal;
        }
        return hit;
    };

    const std::size_t corners = m < 20 ? (std::size_t{1} << m) : 0;
    for (std::size_t c = 0; c < corners; ++c) {
        std::vector<double> u(m);
        for (std::size_t k = 0; k < m; ++k) u[k] = (c >> k) & 1U ? bounds[k].hi : bounds[k].lo;
        if (judge(ControlSignal::constant(horizon, 0.0, u, pieces))) return result;
    }
    // Constant signals on a five-level lattice per channel: for the linear
    // test systems some lattice point reaches any reachable box.
    std::size_t lattice = 0;
    if (m > 0 && m < 8) {
        lattice = 1;
        for (std::size_t k = 0; k < m; ++k) lattice *= 5;
        if (lattice > sample_count) lattice = 0;
    }
    for (std::size_t c = 0; c < lattice; ++c) {
        std::vector<double> u(m);
        std::size_t code = c;
        bool corner = true;
        for (std::size_t k = 0; k < m; ++k) {
            const std::size_t level = code % 5;
            code /= 5;
            corner = corner && (level == 0 || level == 4);
            u[k] = level == 4 ? bounds[k].hi
                              : bounds[k].lo + 0.25 * static_cast<double>(level) * (bounds[k].hi - bounds[k].lo);
        }
        if (corner) continue;
        if (judge(ControlSignal::constant(horizon, 0.0, u, pieces))) return result;
    }
    for (std::size_t s = result.samples_tried; s < std::max(sample_count, result.samples_tried); ++s) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32)};
        std::mt19937_64 rng(seq);
        std::vector<std::vector<double>> values(pieces, std::vector<double>(m));
        // Even samples hold one random value for the whole horizon.
        const bool hold = s % 2 == 0;
        for (auto& piece : values) {
            if (hold && &piece != &values.front()) {
                piece = values.front();
                continue;
            }
            for (std::size_t k = 0; k < m; ++k) {
                const Interval& iv = bounds[k];
                piece[k] = iv.hi > iv.lo ? std::uniform_real_distribution<double>(iv.lo, iv.hi)(rng)
                                         : iv.lo;
                piece[k] = std::clamp(piece[k], iv.lo, iv.hi);
            }
        }
        if (judge(ControlSignal(horizon, 0.0, std::move(values)))) return result;
    }
    return result;
}

AnalyticBrs analytic_linear_brs(const Grid& grid, const LinearParams& params,
                                std::span<const double> box_lower, std::span<const double> box_upper,
                                double t, Objective objective) {
    const std::size_t n = grid.dim_count();
    if (params.rate.size() != n || box_lower.size() != n || box_upper.size() != n) {
        throw GridError("analytic_linear_brs: dimension mismatch");
    }
    AnalyticBrs out;
    out.lower.assign(box_lower.begin(), box_lower.end());
    out.upper.assign(box_upper.begin(), box_upper.end());
    const double span = std::abs(t);
    for (std::size_t i = 0; i < n; ++i) {
        if (params.kind == LinearParams::Kind::advection) {
            out.lower[i] += params.rate[i] * t;
            out.upper[i] += params.rate[i] * t;
        } else if (objective == Objective::maximal) {
            out.lower[i] -= params.rate[i] * span;
            out.upper[i] += params.rate[i] * span;
        } else {
            out.lower[i] += params.rate[i] * span;
            out.upper[i] -= params.rate[i] * span;
        }
        if (out.lower[i] > out.upper[i]) out.empty = true;
    }
    // With a collapsed box max(lo - x, x - hi) >= (lo - hi) / 2 > 0 everywhere.
    std::vector<double> values(grid.node_count());
    std::vector<std::size_t> idx(n);
    for (std::size_t f = 0; f < values.size(); ++f) {
        grid.unravel(f, idx);
        double v = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid.coordinate(i, idx[i]);
            v = std::max({v, out.lower[i] - x, x - out.upper[i]});
        }
        values[f] = v;
    }
    out.value = ValueFn(grid, std::move(values));
    return out;
}

}  // namespace hjreach
