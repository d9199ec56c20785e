#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hjreach/dynamics.hpp"
#include "hjreach/grid.hpp"
#include "hjreach/solver.hpp"

namespace hjreach {

/// Piecewise-constant input on a uniform partition of [t_start, t_end].
class ControlSignal {
public:
    ControlSignal(double t_start, double t_end, std::vector<std::vector<double>> pieces);

    static ControlSignal constant(double t_start, double t_end, std::vector<double> value,
                                  std::size_t piece_count = 1);

    double t_start() const { return t_start_; }
    double t_end() const { return t_end_; }
    std::size_t piece_count() const { return pieces_.size(); }
    std::size_t channel_count() const { return pieces_.front().size(); }
    double piece_duration() const { return (t_end_ - t_start_) / static_cast<double>(pieces_.size()); }
    std::span<const double> piece(std::size_t k) const { return pieces_.at(k); }

    /// Throws ModelError if any value leaves the bounds.
    void check_bounds(const std::vector<Interval>& bounds) const;

    /// Same values on the interval moved by tau.
    ControlSignal shifted(double tau) const;

private:
    double t_start_;
    double t_end_;
    std::vector<std::vector<double>> pieces_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<StateVector> states;
};

/**
 * Classical RK4 with `steps_per_piece` fixed steps inside every piece.
 * Samples are taken at piece boundaries, including both endpoints, or
 * after every RK step when `every_step` is set. A disturbance signal must
 * use the control's partition; without one the nominal disturbance applies.
 */
Trajectory simulate(const SystemModel& model, const StateVector& x0, const ControlSignal& control,
                    const ControlSignal* disturbance = nullptr, std::size_t steps_per_piece = 32,
                    bool every_step = false);

struct McOptions {
    SolveMode mode = SolveMode::set;
    std::size_t piece_count = 16;
    std::size_t steps_per_piece = 32;
};

/**
 * For the maximal objective `found` means a sampled control drives x0 into
 * the target (a membership witness). For the minimal objective it means a
 * sampled control keeps x0 out of the target (a counterexample to
 * membership). States that leave the target's grid count as outside.
 */
struct McResult {
    bool found = false;
    std::optional<ControlSignal> witness;
    std::size_t samples_tried = 0;
};

/// Bang-bang corner signals first, then constant signals on a five-level
/// lattice, then random signals from `seed` (alternately held constant or
/// drawn per piece).
McResult mc_reach_check(const SystemModel& model, const StateVector& x0, const ValueFn& target,
                        double horizon, Objective objective, std::size_t sample_count,
                        std::uint64_t seed, const McOptions& options = {});

/// Target value at the trajectory end (set) or its minimum along the samples (tube).
double trajectory_target_value(const Trajectory& traj, const ValueFn& target, SolveMode mode);

struct LinearParams {
    enum class Kind { integrator, advection } kind = Kind::integrator;
    std::vector<double> rate;   ///< control bound per axis, or advection velocity per axis
};

struct AnalyticBrs {
    ValueFn value;
    std::vector<double> lower;
    std::vector<double> upper;
    bool empty = false;
};

/**
 * Closed-form BRS for the linear test systems with an axis-aligned box
 * target over all grid dims: the integrator box grows (maximal) or shrinks
 * (minimal) by rate |t| per axis; advection translates it by c t.
 */
AnalyticBrs analytic_linear_brs(const Grid& grid, const LinearParams& params,
                                std::span<const double> box_lower, std::span<const double> box_upper,
                                double t, Objective objective);

}  // namespace hjreach
