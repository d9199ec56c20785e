#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace hjreach {

class ModelError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double mid() const { return 0.5 * (lo + hi); }
    double half_width() const { return 0.5 * (hi - lo); }
    bool contains(double v) const { return v >= lo && v <= hi; }
};

/// Role of the control: make the set as large (maximal) or as small (minimal) as possible.
enum class Objective { maximal, minimal };

/**
 * Quantifier pattern for the Hamiltonian. With a disturbance present the
 * disturbance always opposes the control and is optimized innermost:
 * maximal -> min_u max_d, minimal -> max_u min_d. Without one, d is held
 * at the admissible value closest to zero.
 */
struct PlayerRole {
    Objective objective = Objective::maximal;
    bool disturbance_present = false;
};

/// max over v in [lo, hi] of coef * v.
inline double affine_max(double coef, const Interval& iv) {
    return coef * iv.mid() + std::abs(coef) * iv.half_width();
}

/// min over v in [lo, hi] of coef * v.
inline double affine_min(double coef, const Interval& iv) {
    return coef * iv.mid() - std::abs(coef) * iv.half_width();
}

/**
 * Control- and disturbance-affine system xdot = f(x, u, d).
 *
 * Concrete models provide the flow, the closed-form optimized Hamiltonian
 * and the Lax-Friedrichs dissipation bound. All methods are const and
 * reentrant.
 */
class SystemModel {
public:
    SystemModel(std::string name, std::vector<std::string> dim_names,
                std::vector<Interval> control_bounds, std::vector<Interval> disturbance_bounds,
                std::map<std::string, double> parameters);
    virtual ~SystemModel() = default;

    const std::string& name() const { return name_; }
    std::size_t dim_count() const { return dim_names_.size(); }
    const std::vector<std::string>& dim_names() const { return dim_names_; }
    const std::vector<Interval>& control_bounds() const { return control_bounds_; }
    const std::vector<Interval>& disturbance_bounds() const { return disturbance_bounds_; }
    const std::map<std::string, double>& parameters() const { return parameters_; }
    double parameter(const std::string& key) const;

    /// True when any disturbance interval has nonzero width.
    bool has_disturbance() const;

    /// Angle states; always periodic on a grid.
    virtual std::vector<bool> periodic_dims() const;

    /// dx/ds with bound checks on u and d. An empty `d` means zero disturbance.
    std::vector<double> flow(std::span<const double> x, std::span<const double> u,
                             std::span<const double> d = {}) const;

    /// Unchecked flow; `d` has disturbance_bounds().size() entries.
    virtual void flow_into(std::span<const double> x, std::span<const double> u,
                           std::span<const double> d, std::span<double> out) const = 0;

    /// Optimized p . f(x, u, d) per `role`.
    virtual double hamiltonian(std::span<const double> x, std::span<const double> p,
                               PlayerRole role) const = 0;

    /// max over admissible (u, d) of |f_dim(x, u, d)|.
    virtual double alpha(std::span<const double> x, std::size_t dim) const = 0;

    /// Disturbance vector used when the role has no disturbance.
    const std::vector<double>& nominal_disturbance() const { return nominal_disturbance_; }

protected:
    /// Control contribution coef_k * u_k optimized per role (min for maximal,
    /// max for minimal).
    double control_term(double coef, std::size_t k, PlayerRole role) const {
        const Interval& iv = control_bounds_[k];
        return role.objective == Objective::maximal ? affine_min(coef, iv) : affine_max(coef, iv);
    }

    /// Disturbance contribution to the Hamiltonian: coef_k * d_k optimized
    /// against the control (max for maximal, min for minimal).
    double disturbance_term(double coef, std::size_t k, PlayerRole role) const {
        if (!role.disturbance_present) return coef * nominal_disturbance_[k];
        const Interval& iv = disturbance_bounds_[k];
        return role.objective == Objective::maximal ? affine_max(coef, iv) : affine_min(coef, iv);
    }

    /// max over d_k of |base + coef * d_k|.
    double disturbance_reach(double base, double coef, std::size_t k) const {
        const Interval& iv = disturbance_bounds_[k];
        return std::abs(base + coef * iv.mid()) + std::abs(coef) * iv.half_width();
    }

private:
    std::string name_;
    std::vector<std::string> dim_names_;
    std::vector<Interval> control_bounds_;
    std::vector<Interval> disturbance_bounds_;
    std::map<std::string, double> parameters_;
    std::vector<double> nominal_disturbance_;
};

/// Checked wrapper: validates p length then calls model.hamiltonian.
double eval_hamiltonian(const SystemModel& model, std::span<const double> x,
                        std::span<const double> p, PlayerRole role);

/// Checked wrapper around model.alpha.
double eval_alpha(const SystemModel& model, std::span<const double> x, std::size_t dim);

using ModelPtr = std::shared_ptr<const SystemModel>;

}  // namespace hjreach
