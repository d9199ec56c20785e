#include "hjreach/dynamics.hpp"

#include <algorithm>

namespace hjreach {

SystemModel::SystemModel(std::string name, std::vector<std::string> dim_names,
                         std::vector<Interval> control_bounds,
                         std::vector<Interval> disturbance_bounds,
                         std::map<std::string, double> parameters)
    : name_(std::move(name)),
      dim_names_(std::move(dim_names)),
      control_bounds_(std::move(control_bounds)),
      disturbance_bounds_(std::move(disturbance_bounds)),
      parameters_(std::move(parameters)) {
    for (const auto& [key, value] : parameters_) {
        if (!std::isfinite(value)) throw ModelError(name_ + ": parameter " + key + " is not finite");
    }
    auto check = [this](const std::vector<Interval>& bounds, const char* what) {
        for (const Interval& iv : bounds) {
            if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
                throw ModelError(name_ + ": " + what + " bound is not a closed interval");
            }
        }
    };
    check(control_bounds_, "control");
    check(disturbance_bounds_, "disturbance");
    nominal_disturbance_.reserve(disturbance_bounds_.size());
    for (const Interval& iv : disturbance_bounds_) {
        nominal_disturbance_.push_back(std::clamp(0.0, iv.lo, iv.hi));
    }
}

double SystemModel::parameter(const std::string& key) const {
    auto it = parameters_.find(key);
    if (it == parameters_.end()) throw ModelError(name_ + ": unknown parameter " + key);
    return it->second;
}

bool SystemModel::has_disturbance() const {
    return std::any_of(disturbance_bounds_.begin(), disturbance_bounds_.end(),
                       [](const Interval& iv) { return iv.hi > iv.lo; });
}

std::vector<bool> SystemModel::periodic_dims() const {
    return std::vector<bool>(dim_count(), false);
}

std::vector<double> SystemModel::flow(std::span<const double> x, std::span<const double> u,
                                      std::span<const double> d) const {
    if (x.size() != dim_count()) throw ModelError(name_ + ": state has wrong dimension");
    if (u.size() != control_bounds_.size()) throw ModelError(name_ + ": control has wrong dimension");
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (!control_bounds_[k].contains(u[k])) {
            throw ModelError(name_ + ": control " + std::to_string(k) + " outside bounds");
        }
    }
    std::span<const double> dist = d;
    if (d.empty()) {
        dist = nominal_disturbance_;
    } else {
        if (d.size() != disturbance_bounds_.size()) {
            throw ModelError(name_ + ": disturbance has wrong dimension");
        }
        for (std::size_t k = 0; k < d.size(); ++k) {
            if (!disturbance_bounds_[k].contains(d[k])) {
                throw ModelError(name_ + ": disturbance " + std::to_string(k) + " outside bounds");
            }
        }
    }
    std::vector<double> out(dim_count());
    flow_into(x, u, dist, out);
    return out;
}

double eval_hamiltonian(const SystemModel& model, std::span<const double> x,
                        std::span<const double> p, PlayerRole role) {
    if (x.size() != model.dim_count() || p.size() != model.dim_count()) {
        throw ModelError(model.name() + ": state/costate dimension mismatch");
    }
    return model.hamiltonian(x, p, role);
}

double eval_alpha(const SystemModel& model, std::span<const double> x, std::size_t dim) {
    if (x.size() != model.dim_count()) throw ModelError(model.name() + ": state dimension mismatch");
    if (dim >= model.dim_count()) throw ModelError(model.name() + ": dim out of range");
    return model.alpha(x, dim);
}

}  // namespace hjreach
