#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hjreach/dynamics.hpp"
#include "hjreach/grid.hpp"

namespace hjreach {

class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SolveMode { set, tube };
enum class TimeScheme { euler, tvd_rk2 };
enum class SpaceScheme { upwind1 };

/// Called with (time, value) at the start time and after every completed step.
using StepObserver = std::function<void(double, const ValueFn&)>;

struct SolveConfig {
    double horizon = -1.0;                ///< t < 0, or 0 for a no-op solve
    std::vector<double> snapshot_times;   ///< within [horizon, 0]; empty means {0, horizon}
    PlayerRole role;
    SolveMode mode = SolveMode::set;
    double cfl = 0.5;
    TimeScheme time_scheme = TimeScheme::euler;
    SpaceScheme space_scheme = SpaceScheme::upwind1;
    double max_dt = std::numeric_limits<double>::infinity();
    StepObserver observer;
};

struct ExtremaSample {
    double time;
    double min;
    double max;
};

struct SolveStats {
    std::size_t steps = 0;
    double wall_seconds = 0.0;
    double min_dt = std::numeric_limits<double>::infinity();
    double max_abs_hamiltonian = 0.0;
    std::vector<ExtremaSample> extrema;
};

struct Snapshot {
    double time;
    ValueFn value;
};

/// Snapshots are ordered by decreasing time (0 first).
struct SolveResult {
    std::vector<Snapshot> snapshots;
    SolveStats stats;

    const ValueFn& at(double time) const;
    const ValueFn& final_value() const { return snapshots.back().value; }
};

struct Derivatives {
    std::vector<double> left;
    std::vector<double> right;
};

/// First-order one-sided differences along `dim`. Periodic dims wrap;
/// other edges use the ghost value 2 v[edge] - v[inner].
Derivatives spatial_derivatives(const ValueFn& v, std::size_t dim);

/// Numerical Hamiltonian H((pl + pr) / 2) + sum_i alpha_i (pr_i - pl_i) / 2.
double lax_friedrichs(const SystemModel& model, std::span<const double> x,
                      std::span<const double> p_left, std::span<const double> p_right,
                      PlayerRole role);

/// min(time_remaining, cfl / sum_i(alpha_i / dx_i)); alphas are per-dim maxima.
double cfl_timestep(const Grid& grid, std::span<const double> alphas, double cfl,
                    double time_remaining);

/// Worker threads used by the solver; HJREACH_THREADS overrides the default.
std::size_t solver_thread_count();

/**
 * Explicit backward-in-time integrator for one value function.
 *
 * Starts at time 0 with the target and moves toward negative times. The
 * dissipation coefficients depend only on the state, so they are evaluated
 * once per node at construction.
 */
class Stepper {
public:
    Stepper(ModelPtr model, ValueFn target, const SolveConfig& config);

    double time() const { return time_; }
    const ValueFn& value() const { return value_; }
    const ValueFn& target() const { return target_; }
    const SystemModel& model() const { return *model_; }
    const SolveStats& stats() const { return stats_; }

    /// Largest stable step: the CFL bound clipped to max_dt.
    double stable_dt() const { return stable_dt_; }

    /// One full step of size dt toward negative time.
    void step(double dt);

    /// One step that lands exactly on `target_time`.
    void step_to(double target_time);

    /// Steps until time() == target_time using stable steps, landing exactly.
    void advance_to(double target_time);

private:
    void advance_by(double dt, double new_time);
    void evaluate(std::span<const double> v, std::span<double> out);

    ModelPtr model_;
    ValueFn target_;
    ValueFn value_;
    PlayerRole role_;
    SolveMode mode_;
    TimeScheme scheme_;
    StepObserver observer_;
    std::vector<double> alpha_;   // node-major, dim-minor
    double stable_dt_;
    double time_ = 0.0;
    std::vector<double> rate_;
    std::vector<double> stage_;
    SolveStats stats_;
};

/// Checks and normalizes the snapshot schedule; returns times sorted descending.
std::vector<double> snapshot_schedule(const SolveConfig& config);

SolveResult integrate(ModelPtr model, const ValueFn& target, const SolveConfig& config);

}  // namespace hjreach
