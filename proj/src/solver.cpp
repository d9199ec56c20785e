#include "hjreach/solver.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace hjreach {

namespace {

constexpr std::size_t kMaxDims = 16;

// Backward and forward differences at flat index i along one dim.
inline void one_sided(const double* v, std::size_t i, std::size_t ik, std::size_t n,
                      std::size_t stride, bool periodic, double inv_dx, double& left,
                      double& right) {
    const double c = v[i];
    double lo;
    double hi;
    if (ik == 0) {
        hi = v[i + stride];
        lo = periodic ? v[i + (n - 1) * stride] : 2.0 * c - hi;
    } else if (ik == n - 1) {
        lo = v[i - stride];
        hi = periodic ? v[i - (n - 1) * stride] : 2.0 * c - lo;
    } else {
        lo = v[i - stride];
        hi = v[i + stride];
    }
    left = (c - lo) * inv_dx;
    right = (hi - c) * inv_dx;
}

}  // namespace

const ValueFn& SolveResult::at(double time) const {
    for (const Snapshot& s : snapshots) {
        if (std::abs(s.time - time) <= 1e-12 * std::max(1.0, std::abs(time))) return s.value;
    }
    throw SolverError("no snapshot at time " + std::to_string(time));
}

Derivatives spatial_derivatives(const ValueFn& v, std::size_t dim) {
    const Grid& g = v.grid();
    if (dim >= g.dim_count()) throw GridError("spatial_derivatives: dim out of range");
    Derivatives d{std::vector<double>(v.size()), std::vector<double>(v.size())};
    const std::size_t n = g.node_count(dim);
    const std::size_t stride = g.stride(dim);
    const double inv_dx = 1.0 / g.spacing(dim);
    const double* data = v.values().data();
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::size_t ik = (i / stride) % n;
        one_sided(data, i, ik, n, stride, g.periodic(dim), inv_dx, d.left[i], d.right[i]);
    }
    return d;
}

double lax_friedrichs(const SystemModel& model, std::span<const double> x,
                      std::span<const double> p_left, std::span<const double> p_right,
                      PlayerRole role) {
    const std::size_t n = model.dim_count();
    if (p_left.size() != n || p_right.size() != n) {
        throw ModelError("lax_friedrichs: costate dimension mismatch");
    }
    std::vector<double> mid(n);
    double dissipation = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mid[i] = 0.5 * (p_left[i] + p_right[i]);
        dissipation += eval_alpha(model, x, i) * 0.5 * (p_right[i] - p_left[i]);
    }
    return eval_hamiltonian(model, x, mid, role) + dissipation;
}

double cfl_timestep(const Grid& grid, std::span<const double> alphas, double cfl,
                    double time_remaining) {
    if (alphas.size() != grid.dim_count()) throw GridError("cfl_timestep: alpha count mismatch");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw SolverError("cfl number must lie in (0, 1]");
    double rate = 0.0;
    for (std::size_t i = 0; i < alphas.size(); ++i) rate += alphas[i] / grid.spacing(i);
    if (rate <= 0.0) return time_remaining;
    return std::min(time_remaining, cfl / rate);
}

std::size_t solver_thread_count() {
    static const std::size_t count = [] {
        if (const char* env = std::getenv("HJREACH_THREADS")) {
            try {
                const long n = std::stol(env);
                if (n >= 1) return static_cast<std::size_t>(n);
            } catch (const std::exception&) {
            }
        }
#ifdef _OPENMP
        return static_cast<std::size_t>(omp_get_max_threads());
#else
        return std::size_t{1};
#endif
    }();
    return count;
}

Stepper::Stepper(ModelPtr model, ValueFn target, const SolveConfig& config)
    : model_(std::move(model)),
      target_(std::move(target)),
      value_(target_),
      role_(config.role),
      mode_(config.mode),
      scheme_(config.time_scheme),
      observer_(config.observer) {
    if (!model_) throw SolverError("no model given");
    const Grid& g = target_.grid();
    const std::size_t dims = g.dim_count();
    if (dims != model_->dim_count()) throw SolverError("target grid does not match model dimension");
    if (dims > kMaxDims) throw SolverError("too many dimensions");
    if (!target_.all_finite()) throw SolverError("target has non-finite values");
    if (!(config.max_dt > 0.0)) throw SolverError("max_dt must be positive");

    alpha_.resize(g.node_count() * dims);
    std::vector<double> peak(dims, 0.0);
    StateVector x(dims);
    std::vector<std::size_t> idx(dims);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        g.unravel(i, idx);
        for (std::size_t k = 0; k < dims; ++k) x[k] = g.coordinate(k, idx[k]);
        for (std::size_t k = 0; k < dims; ++k) {
            const double a = model_->alpha(x, k);
            if (!std::isfinite(a)) {
                throw SolverError("dissipation bound is not finite at node " + std::to_string(i));
            }
            alpha_[i * dims + k] = a;
            peak[k] = std::max(peak[k], a);
        }
    }
    stable_dt_ = std::min(cfl_timestep(g, peak, config.cfl, std::numeric_limits<double>::infinity()),
                          config.max_dt);

    rate_.resize(g.node_count());
    stats_.extrema.push_back({0.0, value_.min_value(), value_.max_value()});
    if (observer_) observer_(time_, value_);
}

void Stepper::evaluate(std::span<const double> v, std::span<double> out) {
    const Grid& g = target_.grid();
    const std::size_t dims = g.dim_count();
    const std::size_t last = dims - 1;
    const std::size_t row_len = g.node_count(last);
    const auto rows = static_cast<std::ptrdiff_t>(g.node_count() / row_len);
    const double* data = v.data();
    const SystemModel& model = *model_;
    const PlayerRole role = role_;
    std::array<double, kMaxDims> inv_dx{};
    for (std::size_t k = 0; k < dims; ++k) inv_dx[k] = 1.0 / g.spacing(k);

    double peak = 0.0;
#pragma omp parallel for schedule(static) reduction(max : peak) \
    num_threads(static_cast<int>(solver_thread_count()))
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        std::array<std::size_t, kMaxDims> idx{};
        std::array<double, kMaxDims> x{};
        std::array<double, kMaxDims> pl{};
        std::array<double, kMaxDims> pr{};
        std::array<double, kMaxDims> pm{};
        const std::size_t base = static_cast<std::size_t>(r) * row_len;
        g.unravel(base, std::span<std::size_t>(idx.data(), dims));
        for (std::size_t k = 0; k < dims; ++k) x[k] = g.coordinate(k, idx[k]);
        for (std::size_t j = 0; j < row_len; ++j) {
            const std::size_t i = base + j;
            idx[last] = j;
            x[last] = g.coordinate(last, j);
            const double* a = &alpha_[i * dims];
            double dissipation = 0.0;
            for (std::size_t k = 0; k < dims; ++k) {
                one_sided(data, i, idx[k], g.node_count(k), g.stride(k), g.periodic(k), inv_dx[k],
                          pl[k], pr[k]);
                pm[k] = 0.5 * (pl[k] + pr[k]);
                dissipation += a[k] * 0.5 * (pr[k] - pl[k]);
            }
            const double h =
                model.hamiltonian(std::span<const double>(x.data(), dims),
                                  std::span<const double>(pm.data(), dims), role) +
                dissipation;
            out[i] = h;
            peak = std::max(peak, std::abs(h));
        }
    }
    stats_.max_abs_hamiltonian = std::max(stats_.max_abs_hamiltonian, peak);
}

void Stepper::step(double dt) { advance_by(dt, time_ - dt); }

void Stepper::advance_by(double dt, double new_time) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw SolverError("step size must be positive and finite");
    auto& v = value_.mutable_values();
    const std::size_t n = v.size();
    evaluate(v, rate_);
    if (scheme_ == TimeScheme::euler) {
        for (std::size_t i = 0; i < n; ++i) v[i] += dt * rate_[i];
    } else {
        stage_.resize(n);
        for (std::size_t i = 0; i < n; ++i) stage_[i] = v[i] + dt * rate_[i];
        evaluate(stage_, rate_);
        for (std::size_t i = 0; i < n; ++i) v[i] = 0.5 * (v[i] + stage_[i] + dt * rate_[i]);
    }
    if (mode_ == SolveMode::tube) {
        const auto t = target_.values();
        for (std::size_t i = 0; i < n; ++i) v[i] = std::min(v[i], t[i]);
    }
    ++stats_.steps;
    time_ = new_time;
    stats_.min_dt = std::min(stats_.min_dt, dt);
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(v[i])) {
            throw SolverError("non-finite value at step " + std::to_string(stats_.steps) + ", node " +
                              std::to_string(i) + ", time " + std::to_string(time_));
        }
    }
    stats_.extrema.push_back({time_, value_.min_value(), value_.max_value()});
    if (observer_) observer_(time_, value_);
}

void Stepper::step_to(double target_time) {
    if (!(target_time < time_)) throw SolverError("step_to needs an earlier time");
    advance_by(time_ - target_time, target_time);
}

void Stepper::advance_to(double target_time) {
    if (target_time > time_) throw SolverError("cannot advance forward in time");
    while (time_ > target_time) {
        const double remaining = time_ - target_time;
        const double dt = stable_dt_;
        if (remaining <= dt * (1.0 + 1e-9)) {
            step_to(target_time);
        } else {
            step(dt);
        }
    }
}

std::vector<double> snapshot_schedule(const SolveConfig& config) {
    if (!std::isfinite(config.horizon) || config.horizon > 0.0) {
        throw SolverError("horizon must be a finite non-positive time");
    }
    std::vector<double> times = config.snapshot_times;
    if (times.empty()) times = {0.0, config.horizon};
    for (double t : times) {
        if (!std::isfinite(t) || t > 0.0 || t < config.horizon) {
            throw SolverError("snapshot time " + std::to_string(t) + " outside [horizon, 0]");
        }
    }
    if (std::find(times.begin(), times.end(), 0.0) == times.end()) {
        throw SolverError("snapshot times must include 0");
    }
    std::sort(times.begin(), times.end(), std::greater<>());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    return times;
}

SolveResult integrate(ModelPtr model, const ValueFn& target, const SolveConfig& config) {
    const auto times = snapshot_schedule(config);
    const auto start = std::chrono::steady_clock::now();
    Stepper stepper(std::move(model), target, config);
    SolveResult result;
    for (double t : times) {
        stepper.advance_to(t);
        result.snapshots.push_back({t, stepper.value()});
    }
    result.stats = stepper.stats();
    result.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace hjreach
