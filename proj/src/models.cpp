#include "hjreach/models.hpp"

#include <cmath>
#include <functional>

namespace hjreach {

namespace {

ParameterMap merge(ParameterMap defaults, const ParameterMap& overrides, const std::string& model,
                   const std::function<bool(const std::string&)>& extra_key = {}) {
    for (const auto& [key, value] : overrides) {
        if (!defaults.count(key) && !(extra_key && extra_key(key))) {
            throw ModelError(model + ": unknown parameter " + key);
        }
        defaults[key] = value;
    }
    return defaults;
}

double get(const ParameterMap& m, const std::string& key) { return m.at(key); }

Interval symmetric(double radius, const std::string& model, const char* what) {
    if (radius < 0) throw ModelError(model + ": " + what + " bound must be non-negative");
    return {-radius, radius};
}

ParameterMap dubins_params(const ParameterMap& overrides, const std::string& model) {
    return merge({{"speed", 1.0}, {"turn_rate", 1.0}, {"dstb_x", 0.0}, {"dstb_y", 0.0},
                  {"dstb_theta", 0.0}},
                 overrides, model);
}

std::size_t dim_count_param(const ParameterMap& p, const std::string& model) {
    const double n = p.at("dim_count");
    if (!(n >= 1) || n != std::floor(n) || n > 16) {
        throw ModelError(model + ": dim_count must be an integer in [1, 16]");
    }
    return static_cast<std::size_t>(n);
}

bool indexed_key(const std::string& key, const std::string& prefix) {
    if (key.rfind(prefix + "_", 0) != 0) return false;
    const auto tail = key.substr(prefix.size() + 1);
    return !tail.empty() && tail.find_first_not_of("0123456789") == std::string::npos;
}

std::vector<std::string> axis_names(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
    return names;
}

ParameterMap linear_params(const ParameterMap& overrides, const std::string& model,
                           const std::string& prefix) {
    auto p = merge({{"dim_count", 1.0}, {prefix, 1.0}}, overrides, model,
                   [&](const std::string& k) { return indexed_key(k, prefix); });
    const std::size_t n = dim_count_param(p, model);
    for (const auto& [key, value] : p) {
        if (indexed_key(key, prefix) && std::stoul(key.substr(prefix.size() + 1)) >= n) {
            throw ModelError(model + ": " + key + " exceeds dim_count");
        }
    }
    return p;
}

double axis_value(const ParameterMap& p, const std::string& prefix, std::size_t i) {
    auto it = p.find(prefix + "_" + std::to_string(i));
    return it != p.end() ? it->second : p.at(prefix);
}

std::vector<Interval> integrator_bounds(const ParameterMap& p) {
    const std::size_t n = dim_count_param(p, "single_integrator");
    std::vector<Interval> out;
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back(symmetric(axis_value(p, "ubar", i), "single_integrator", "control"));
    }
    return out;
}

// |drift + coef * u| maximized over u in the interval.
double reach(double drift, double coef, const Interval& iv) {
    return std::abs(drift + coef * iv.mid()) + std::abs(coef) * iv.half_width();
}

}  // namespace

// ---------------------------------------------------------------- Dubins

Dubins3D::Dubins3D(const ParameterMap& overrides)
    : SystemModel(
          "dubins3d", {"px", "py", "theta"},
          {symmetric(dubins_params(overrides, "dubins3d").at("turn_rate"), "dubins3d", "control")},
          {symmetric(dubins_params(overrides, "dubins3d").at("dstb_x"), "dubins3d", "disturbance"),
           symmetric(dubins_params(overrides, "dubins3d").at("dstb_y"), "dubins3d", "disturbance"),
           symmetric(dubins_params(overrides, "dubins3d").at("dstb_theta"), "dubins3d",
                     "disturbance")},
          dubins_params(overrides, "dubins3d")),
      speed_(parameter("speed")) {}

void Dubins3D::flow_into(std::span<const double> x, std::span<const double> u,
                         std::span<const double> d, std::span<double> out) const {
    out[0] = speed_ * std::cos(x[2]) + d[0];
    out[1] = speed_ * std::sin(x[2]) + d[1];
    out[2] = u[0] + d[2];
}

double Dubins3D::hamiltonian(std::span<const double> x, std::span<const double> p,
                             PlayerRole role) const {
    return p[0] * speed_ * std::cos(x[2]) + p[1] * speed_ * std::sin(x[2]) +
           control_term(p[2], 0, role) + disturbance_term(p[0], 0, role) +
           disturbance_term(p[1], 1, role) + disturbance_term(p[2], 2, role);
}

double Dubins3D::alpha(std::span<const double> x, std::size_t dim) const {
    switch (dim) {
        case 0: return disturbance_reach(speed_ * std::cos(x[2]), 1.0, 0);
        case 1: return disturbance_reach(speed_ * std::sin(x[2]), 1.0, 1);
        default: {
            const Interval& w = control_bounds()[0];
            const Interval& dt = disturbance_bounds()[2];
            return std::abs(w.mid() + dt.mid()) + w.half_width() + dt.half_width();
        }
    }
}

DubinsSub::DubinsSub(Axis axis, const ParameterMap& overrides)
    : SystemModel(axis == Axis::x ? "dubins_sub_x" : "dubins_sub_y",
                  axis == Axis::x ? std::vector<std::string>{"px", "theta"}
                                  : std::vector<std::string>{"py", "theta"},
                  {symmetric(dubins_params(overrides, "dubins_sub").at("turn_rate"), "dubins_sub",
                             "control")},
                  {symmetric(dubins_params(overrides, "dubins_sub")
                                 .at(axis == Axis::x ? "dstb_x" : "dstb_y"),
                             "dubins_sub", "disturbance"),
                   symmetric(dubins_params(overrides, "dubins_sub").at("dstb_theta"), "dubins_sub",
                             "disturbance")},
                  dubins_params(overrides, "dubins_sub")),
      axis_(axis),
      speed_(parameter("speed")) {}

void DubinsSub::flow_into(std::span<const double> x, std::span<const double> u,
                          std::span<const double> d, std::span<double> out) const {
    out[0] = speed_ * (axis_ == Axis::x ? std::cos(x[1]) : std::sin(x[1])) + d[0];
    out[1] = u[0] + d[1];
}

double DubinsSub::hamiltonian(std::span<const double> x, std::span<const double> p,
                              PlayerRole role) const {
    const double heading = axis_ == Axis::x ? std::cos(x[1]) : std::sin(x[1]);
    return p[0] * speed_ * heading + control_term(p[1], 0, role) +
           disturbance_term(p[0], 0, role) + disturbance_term(p[1], 1, role);
}

double DubinsSub::alpha(std::span<const double> x, std::size_t dim) const {
    if (dim == 0) {
        const double heading = axis_ == Axis::x ? std::cos(x[1]) : std::sin(x[1]);
        return disturbance_reach(speed_ * heading, 1.0, 0);
    }
    const Interval& w = control_bounds()[0];
    const Interval& dt = disturbance_bounds()[1];
    return std::abs(w.mid() + dt.mid()) + w.half_width() + dt.half_width();
}

// ---------------------------------------------------------------- linear

SingleIntegrator::SingleIntegrator(const ParameterMap& overrides)
    : SystemModel("single_integrator",
                  axis_names(dim_count_param(linear_params(overrides, "single_integrator", "ubar"),
                                             "single_integrator")),
                  integrator_bounds(linear_params(overrides, "single_integrator", "ubar")), {},
                  linear_params(overrides, "single_integrator", "ubar")) {}

void SingleIntegrator::flow_into(std::span<const double>, std::span<const double> u,
                                 std::span<const double>, std::span<double> out) const {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = u[i];
}

double SingleIntegrator::hamiltonian(std::span<const double>, std::span<const double> p,
                                     PlayerRole role) const {
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) h += control_term(p[i], i, role);
    return h;
}

double SingleIntegrator::alpha(std::span<const double>, std::size_t dim) const {
    return reach(0.0, 1.0, control_bounds()[dim]);
}

Advection::Advection(const ParameterMap& overrides)
    : SystemModel("advection",
                  axis_names(dim_count_param(linear_params(overrides, "advection", "velocity"),
                                             "advection")),
                  {}, {}, linear_params(overrides, "advection", "velocity")) {
    for (std::size_t i = 0; i < dim_count(); ++i) {
        velocity_.push_back(axis_value(parameters(), "velocity", i));
    }
}

void Advection::flow_into(std::span<const double>, std::span<const double>,
                          std::span<const double>, std::span<double> out) const {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = velocity_[i];
}

double Advection::hamiltonian(std::span<const double>, std::span<const double> p,
                              PlayerRole) const {
    double h = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) h += p[i] * velocity_[i];
    return h;
}

double Advection::alpha(std::span<const double>, std::size_t dim) const {
    return std::abs(velocity_[dim]);
}

// ---------------------------------------------------------------- Quad6D

Quad6DParams Quad6DParams::from(const ParameterMap& overrides) {
    Quad6DParams q;
    const auto p = merge(q.to_map(), overrides, "quad6d");
    q.mass = get(p, "mass");
    q.gravity = get(p, "gravity");
    q.drag_v = get(p, "drag_v");
    q.drag_phi = get(p, "drag_phi");
    q.inertia = get(p, "inertia");
    q.arm = get(p, "arm");
    q.thrust_min = get(p, "thrust_min");
    q.thrust_max = get(p, "thrust_max");
    if (!(q.mass > 0 && q.inertia > 0)) throw ModelError("quad6d: mass and inertia must be positive");
    return q;
}

ParameterMap Quad6DParams::to_map() const {
    return {{"mass", mass},       {"gravity", gravity},   {"drag_v", drag_v},
            {"drag_phi", drag_phi}, {"inertia", inertia}, {"arm", arm},
            {"thrust_min", thrust_min}, {"thrust_max", thrust_max}};
}

Quad6D::Quad6D(const ParameterMap& overrides)
    : SystemModel("quad6d", {"px", "vx", "py", "vy", "phi", "omega"},
                  {{Quad6DParams::from(overrides).thrust_min, Quad6DParams::from(overrides).thrust_max},
                   {Quad6DParams::from(overrides).thrust_min, Quad6DParams::from(overrides).thrust_max}},
                  {}, Quad6DParams::from(overrides).to_map()),
      q_(Quad6DParams::from(overrides)) {}

void Quad6D::flow_into(std::span<const double> x, std::span<const double> u,
                       std::span<const double>, std::span<double> out) const {
    const double m = q_.mass;
    const double total = u[0] + u[1];
    out[0] = x[1];
    out[1] = -q_.drag_v * x[1] / m - total * std::sin(x[4]) / m;
    out[2] = x[3];
    out[3] = -(m * q_.gravity + q_.drag_v * x[3]) / m + total * std::cos(x[4]) / m;
    out[4] = x[5];
    out[5] = -q_.drag_phi * x[5] / q_.inertia - q_.arm * u[0] / q_.inertia +
             q_.arm * u[1] / q_.inertia;
}

double Quad6D::hamiltonian(std::span<const double> x, std::span<const double> p,
                           PlayerRole role) const {
    const double m = q_.mass;
    const double lever = q_.arm / q_.inertia;
    const double s = std::sin(x[4]) / m;
    const double c = std::cos(x[4]) / m;
    const double drift = p[0] * x[1] + p[1] * (-q_.drag_v * x[1] / m) + p[2] * x[3] +
                         p[3] * (-q_.gravity - q_.drag_v * x[3] / m) + p[4] * x[5] +
                         p[5] * (-q_.drag_phi * x[5] / q_.inertia);
    const double c1 = -p[1] * s + p[3] * c - p[5] * lever;
    const double c2 = -p[1] * s + p[3] * c + p[5] * lever;
    return drift + control_term(c1, 0, role) + control_term(c2, 1, role);
}

double Quad6D::alpha(std::span<const double> x, std::size_t dim) const {
    const Interval& t1 = control_bounds()[0];
    const Interval& t2 = control_bounds()[1];
    const double m = q_.mass;
    const double lever = q_.arm / q_.inertia;
    switch (dim) {
        case 0: return std::abs(x[1]);
        case 1: {
            const double coef = -std::sin(x[4]) / m;
            return std::abs(-q_.drag_v * x[1] / m + coef * (t1.mid() + t2.mid())) +
                   std::abs(coef) * (t1.half_width() + t2.half_width());
        }
        case 2: return std::abs(x[3]);
        case 3: {
            const double coef = std::cos(x[4]) / m;
            return std::abs(-q_.gravity - q_.drag_v * x[3] / m + coef * (t1.mid() + t2.mid())) +
                   std::abs(coef) * (t1.half_width() + t2.half_width());
        }
        case 4: return std::abs(x[5]);
        default:
            return std::abs(-q_.drag_phi * x[5] / q_.inertia + lever * (t2.mid() - t1.mid())) +
                   lever * (t1.half_width() + t2.half_width());
    }
}

Quad6DSub::Quad6DSub(Axis axis, const ParameterMap& overrides)
    : SystemModel(axis == Axis::x ? "quad6d_sub_x" : "quad6d_sub_y",
                  axis == Axis::x ? std::vector<std::string>{"px", "vx", "phi", "omega"}
                                  : std::vector<std::string>{"py", "vy", "phi", "omega"},
                  {{Quad6DParams::from(overrides).thrust_min, Quad6DParams::from(overrides).thrust_max},
                   {Quad6DParams::from(overrides).thrust_min, Quad6DParams::from(overrides).thrust_max}},
                  {}, Quad6DParams::from(overrides).to_map()),
      axis_(axis),
      q_(Quad6DParams::from(overrides)) {}

void Quad6DSub::flow_into(std::span<const double> x, std::span<const double> u,
                          std::span<const double>, std::span<double> out) const {
    const double m = q_.mass;
    const double total = u[0] + u[1];
    out[0] = x[1];
    if (axis_ == Axis::x) {
        out[1] = -q_.drag_v * x[1] / m - total * std::sin(x[2]) / m;
    } else {
        out[1] = -(m * q_.gravity + q_.drag_v * x[1]) / m + total * std::cos(x[2]) / m;
    }
    out[2] = x[3];
    out[3] = -q_.drag_phi * x[3] / q_.inertia - q_.arm * u[0] / q_.inertia +
             q_.arm * u[1] / q_.inertia;
}

double Quad6DSub::hamiltonian(std::span<const double> x, std::span<const double> p,
                              PlayerRole role) const {
    const double m = q_.mass;
    const double lever = q_.arm / q_.inertia;
    const double gravity = axis_ == Axis::x ? 0.0 : q_.gravity;
    const double thrust_dir = axis_ == Axis::x ? -std::sin(x[2]) / m : std::cos(x[2]) / m;
    const double drift = p[0] * x[1] + p[1] * (-gravity - q_.drag_v * x[1] / m) + p[2] * x[3] +
                         p[3] * (-q_.drag_phi * x[3] / q_.inertia);
    const double c1 = p[1] * thrust_dir - p[3] * lever;
    const double c2 = p[1] * thrust_dir + p[3] * lever;
    return drift + control_term(c1, 0, role) + control_term(c2, 1, role);
}

double Quad6DSub::alpha(std::span<const double> x, std::size_t dim) const {
    const Interval& t1 = control_bounds()[0];
    const Interval& t2 = control_bounds()[1];
    const double m = q_.mass;
    switch (dim) {
        case 0: return std::abs(x[1]);
        case 1: {
            const double gravity = axis_ == Axis::x ? 0.0 : q_.gravity;
            const double coef = axis_ == Axis::x ? -std::sin(x[2]) / m : std::cos(x[2]) / m;
            return std::abs(-gravity - q_.drag_v * x[1] / m + coef * (t1.mid() + t2.mid())) +
                   std::abs(coef) * (t1.half_width() + t2.half_width());
        }
        case 2: return std::abs(x[3]);
        default: {
            const double lever = q_.arm / q_.inertia;
            return std::abs(-q_.drag_phi * x[3] / q_.inertia + lever * (t2.mid() - t1.mid())) +
                   lever * (t1.half_width() + t2.half_width());
        }
    }
}

// ---------------------------------------------------------------- Quad10D

Quad10DParams Quad10DParams::from(const ParameterMap& overrides) {
    Quad10DParams q;
    const auto p = merge(q.to_map(), overrides, "quad10d");
    q.gravity = get(p, "gravity");
    q.d0 = get(p, "d0");
    q.d1 = get(p, "d1");
    q.n0 = get(p, "n0");
    q.k_thrust = get(p, "k_thrust");
    q.max_angle = get(p, "max_angle");
    q.thrust_max = get(p, "thrust_max");
    q.dstb_xy = get(p, "dstb_xy");
    q.dstb_z = get(p, "dstb_z");
    return q;
}

ParameterMap Quad10DParams::to_map() const {
    return {{"gravity", gravity},     {"d0", d0},
            {"d1", d1},               {"n0", n0},
            {"k_thrust", k_thrust},   {"max_angle", max_angle},
            {"thrust_max", thrust_max}, {"dstb_xy", dstb_xy},
            {"dstb_z", dstb_z}};
}

Quad10D::Quad10D(const ParameterMap& overrides)
    : SystemModel("quad10d", {"px", "vx", "thx", "wx", "py", "vy", "thy", "wy", "pz", "vz"},
                  {symmetric(Quad10DParams::from(overrides).max_angle, "quad10d", "control"),
                   symmetric(Quad10DParams::from(overrides).max_angle, "quad10d", "control"),
                   {0.0, Quad10DParams::from(overrides).thrust_max}},
                  {symmetric(Quad10DParams::from(overrides).dstb_xy, "quad10d", "disturbance"),
                   symmetric(Quad10DParams::from(overrides).dstb_xy, "quad10d", "disturbance"),
                   symmetric(Quad10DParams::from(overrides).dstb_z, "quad10d", "disturbance")},
                  Quad10DParams::from(overrides).to_map()),
      q_(Quad10DParams::from(overrides)) {}

void Quad10D::flow_into(std::span<const double> x, std::span<const double> u,
                        std::span<const double> d, std::span<double> out) const {
    for (std::size_t axis = 0; axis < 2; ++axis) {
        const std::size_t o = 4 * axis;
        out[o + 0] = x[o + 1] + d[axis];
        out[o + 1] = q_.gravity * std::tan(x[o + 2]);
        out[o + 2] = -q_.d1 * x[o + 2] + x[o + 3];
        out[o + 3] = -q_.d0 * x[o + 2] + q_.n0 * u[axis];
    }
    out[8] = x[9] + d[2];
    out[9] = q_.k_thrust * u[2] - q_.gravity;
}

double Quad10D::hamiltonian(std::span<const double> x, std::span<const double> p,
                            PlayerRole role) const {
    double h = 0.0;
    for (std::size_t axis = 0; axis < 2; ++axis) {
        const std::size_t o = 4 * axis;
        h += p[o] * x[o + 1] + p[o + 1] * q_.gravity * std::tan(x[o + 2]) +
             p[o + 2] * (-q_.d1 * x[o + 2] + x[o + 3]) + p[o + 3] * (-q_.d0 * x[o + 2]) +
             control_term(p[o + 3] * q_.n0, axis, role) + disturbance_term(p[o], axis, role);
    }
    h += p[8] * x[9] - p[9] * q_.gravity + control_term(p[9] * q_.k_thrust, 2, role) +
         disturbance_term(p[8], 2, role);
    return h;
}

double Quad10D::alpha(std::span<const double> x, std::size_t dim) const {
    if (dim < 8) {
        const std::size_t axis = dim / 4;
        const std::size_t o = 4 * axis;
        switch (dim % 4) {
            case 0: return disturbance_reach(x[o + 1], 1.0, axis);
            case 1: return std::abs(q_.gravity * std::tan(x[o + 2]));
            case 2: return std::abs(-q_.d1 * x[o + 2] + x[o + 3]);
            default: return reach(-q_.d0 * x[o + 2], q_.n0, control_bounds()[axis]);
        }
    }
    if (dim == 8) return disturbance_reach(x[9], 1.0, 2);
    return reach(-q_.gravity, q_.k_thrust, control_bounds()[2]);
}

Quad10DSubXY::Quad10DSubXY(Axis axis, const ParameterMap& overrides)
    : SystemModel(axis == Axis::x ? "quad10d_sub_x" : "quad10d_sub_y",
                  axis == Axis::x ? std::vector<std::string>{"px", "vx", "thx", "wx"}
                                  : std::vector<std::string>{"py", "vy", "thy", "wy"},
                  {symmetric(Quad10DParams::from(overrides).max_angle, "quad10d", "control")},
                  {symmetric(Quad10DParams::from(overrides).dstb_xy, "quad10d", "disturbance")},
                  Quad10DParams::from(overrides).to_map()),
      q_(Quad10DParams::from(overrides)) {}

void Quad10DSubXY::flow_into(std::span<const double> x, std::span<const double> u,
                             std::span<const double> d, std::span<double> out) const {
    out[0] = x[1] + d[0];
    out[1] = q_.gravity * std::tan(x[2]);
    out[2] = -q_.d1 * x[2] + x[3];
    out[3] = -q_.d0 * x[2] + q_.n0 * u[0];
}

double Quad10DSubXY::hamiltonian(std::span<const double> x, std::span<const double> p,
                                 PlayerRole role) const {
    return p[0] * x[1] + p[1] * q_.gravity * std::tan(x[2]) + p[2] * (-q_.d1 * x[2] + x[3]) +
           p[3] * (-q_.d0 * x[2]) + control_term(p[3] * q_.n0, 0, role) +
           disturbance_term(p[0], 0, role);
}

double Quad10DSubXY::alpha(std::span<const double> x, std::size_t dim) const {
    switch (dim) {
        case 0: return disturbance_reach(x[1], 1.0, 0);
        case 1: return std::abs(q_.gravity * std::tan(x[2]));
        case 2: return std::abs(-q_.d1 * x[2] + x[3]);
        default: return reach(-q_.d0 * x[2], q_.n0, control_bounds()[0]);
    }
}

Quad10DSubZ::Quad10DSubZ(const ParameterMap& overrides)
    : SystemModel("quad10d_sub_z", {"pz", "vz"},
                  {{0.0, Quad10DParams::from(overrides).thrust_max}},
                  {symmetric(Quad10DParams::from(overrides).dstb_z, "quad10d", "disturbance")},
                  Quad10DParams::from(overrides).to_map()),
      q_(Quad10DParams::from(overrides)) {}

void Quad10DSubZ::flow_into(std::span<const double> x, std::span<const double> u,
                            std::span<const double> d, std::span<double> out) const {
    out[0] = x[1] + d[0];
    out[1] = q_.k_thrust * u[0] - q_.gravity;
}

double Quad10DSubZ::hamiltonian(std::span<const double> x, std::span<const double> p,
                                PlayerRole role) const {
    return p[0] * x[1] - p[1] * q_.gravity + control_term(p[1] * q_.k_thrust, 0, role) +
           disturbance_term(p[0], 0, role);
}

double Quad10DSubZ::alpha(std::span<const double> x, std::size_t dim) const {
    if (dim == 0) return disturbance_reach(x[1], 1.0, 0);
    return reach(-q_.gravity, q_.k_thrust, control_bounds()[0]);
}

// ---------------------------------------------------------------- factory

std::vector<std::string> builtin_model_names() {
    return {"dubins3d",     "dubins_sub_x",  "dubins_sub_y",  "single_integrator",
            "advection",    "quad6d",        "quad6d_sub_x",  "quad6d_sub_y",
            "quad10d",      "quad10d_sub_x", "quad10d_sub_y", "quad10d_sub_z"};
}

ModelPtr make_model(const std::string& name, const ParameterMap& overrides) {
    if (name == "dubins3d") return std::make_shared<Dubins3D>(overrides);
    if (name == "dubins_sub_x") return std::make_shared<DubinsSub>(Axis::x, overrides);
    if (name == "dubins_sub_y") return std::make_shared<DubinsSub>(Axis::y, overrides);
    if (name == "single_integrator") return std::make_shared<SingleIntegrator>(overrides);
    if (name == "advection") return std::make_shared<Advection>(overrides);
    if (name == "quad6d") return std::make_shared<Quad6D>(overrides);
    if (name == "quad6d_sub_x") return std::make_shared<Quad6DSub>(Axis::x, overrides);
    if (name == "quad6d_sub_y") return std::make_shared<Quad6DSub>(Axis::y, overrides);
    if (name == "quad10d") return std::make_shared<Quad10D>(overrides);
    if (name == "quad10d_sub_x") return std::make_shared<Quad10DSubXY>(Axis::x, overrides);
    if (name == "quad10d_sub_y") return std::make_shared<Quad10DSubXY>(Axis::y, overrides);
    if (name == "quad10d_sub_z") return std::make_shared<Quad10DSubZ>(overrides);
    throw ModelError("unknown model " + name);
}

}  // namespace hjreach
