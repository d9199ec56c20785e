#pragma once

#include <map>
#include <string>
#include <vector>

#include "hjreach/dynamics.hpp"

namespace hjreach {

using ParameterMap = std::map<std::string, double>;

enum class Axis { x, y };

// Dubins car with constant speed.
//   parameters: speed (1), turn_rate (1), dstb_x, dstb_y, dstb_theta (0)
//   state (px, py, theta); control omega in [-turn_rate, turn_rate];
//   disturbance (d_x, d_y, d_theta), each in [-dstb_*, dstb_*].
class Dubins3D final : public SystemModel {
public:
    explicit Dubins3D(const ParameterMap& overrides = {});
    std::vector<bool> periodic_dims() const override { return {false, false, true}; }
    void flow_into(std::span<const double> x, std::span<const double> u,
                   std::span<const double> d, std::span<double> out) const override;
    double hamiltonian(std::span<const double> x, std::span<const double> p,
                       PlayerRole role) const override;
    double alpha(std::span<const double> x, std::size_t dim) const override;

private:
    double speed_;
};

// One position axis of the Dubins car together with the shared heading.
//   state (p, theta); control omega; disturbance (d_p, d_theta).
class DubinsSub final : public SystemModel {
public:
    DubinsSub(Axis axis, const ParameterMap& overrides = {});
    std::vector<bool> periodic_dims() const override { return {false, true}; }
    void flow_into(std::span<const double> x, std::span<const double> u,
                   std::span<const double> d, std::span<double> out) const override;
    double hamiltonian(std::span<const double> x, std::span<const double> p,
                       PlayerRole role) const override;
    double alpha(std::span<const double> x, std::size_t dim) const override;

private:
    Axis axis_;
    double speed_;
};

// xdot_i = u_i with |u_i| <= ubar_i.
//   parameters: dim_count (1), ubar (1), ubar_<i> per-axis overrides.
class SingleIntegrator final : public SystemModel {
public:
    explicit SingleIntegrator(const ParameterMap& overrides = {});
    void flow_into(std::span<const double> x, std::span<const double> u,
                   std::span<const double> d, std::span<double> out) const override;
    double hamiltonian(std::span<const double> x, std::span<const double> p,
                       PlayerRole role) const override;
    double alpha(std::span<const double> x, std::size_t dim) const override;
};

// Pure advection xdot = c, no inputs. c = 0 gives the zero-dynamics model.
//   parameters: dim_count (1), velocity (1), velocity_<i> overrides.
class Advection final : public SystemModel {
public:
    explicit Advection(const ParameterMap& overrides = {});
    void flow_into(std::span<const double> x, std::span<const double> u,
                   std::span<const double> d, std::span<double> out) const override;
    double hamiltonian(std::span<const double> x, std::span<const double> p,
                       PlayerRole role) const override;
    double alpha(std::span<const double> x, std::size_t dim) const override;

private:
    std::vector<double> velocity_;
};

/// Physical constants shared by the planar quadrotor models.
struct Quad6DParams {
    double mass = 1.3;
    double gravity = 9.81;
    double drag_v = 0.25;
    double drag_phi = 0.02255;
    double inertia = 0.03;
    double arm = 0.32;
    double thrust_min = 0.0;
    double thrust_max = 1.2 * 1.3 * 9.81;

    static Quad6DParams from(const ParameterMap& overrides);
    ParameterMap to_map() const;
};

// Planar acrobatic quadrotor, state (px, vx, py, vy, phi, omega), rotor
// thrusts (T1, T2). Used for trajectory simulation.
class Quad6D final : public SystemModel {
public:
    explicit Quad6D(const ParameterMap& overrides = {});
    std::vector<bool> periodic_dims() const override { return {false, false, false, false, true, false}; }
    void flow_into(std::span<const double> x, std::span<const double> u,
                   std::span<const double> d, std::span<double> out) const override;
    double hamiltonian(std::span<const double> x, std::span<const double> p,
                       PlayerRole role) const override;
    double alpha(std::span<const double> x, std::size_t dim) const override;

private:
    Quad6DParams q_;
};

// 4D quadrotor subsystem (p, v, phi, omega) along one translational axis.
class Quad6DSub final : public SystemModel {
public:
    Quad6DSub(Axis axis, const ParameterMap& overrides = {});
    std::vector<bool> periodic_dims() const override { return {false, false, true, false}; }
    void flow_into(std::span<const double> x, std::span<const double> u,
                   std::span<const double> d, std::span<double> out) const override;
    double hamiltonian(std::span<const double> x, std::span<const double> p,
                       PlayerRole role) const override;
    double alpha(std::span<const double> x, std::size_t dim) const override;

private:
    Axis axis_;
    Quad6DParams q_;
};

/// Near-hover quadrotor constants.
struct Quad10DParams {
    double gravity = 9.81;
    double d0 = 10.0;
    double d1 = 8.0;
    double n0 = 10.0;
    double k_thrust = 0.91;
    double max_angle = 10.0 * 3.14159265358979323846 / 180.0;
    double thrust_max = 2.0 * 9.81;
    double dstb_xy = 0.5;
    double dstb_z = 1.0;

    static Quad10DParams from(const ParameterMap& overrides);
    ParameterMap to_map() const;
};

// Near-hover quadrotor, state (px, vx, thx, wx, py, vy, thy, wy, pz, vz),
// controls (Sx, Sy, Tz), disturbance (dx, dy, dz).
class Quad10D final : public SystemModel {
public:
    explicit Quad10D(const ParameterMap& overrides = {});
    void flow_into(std::span<const double> x, std::span<const double> u,
                   std::span<const double> d, std::span<double> out) const override;
    double hamiltonian(std::span<const double> x, std::span<const double> p,
                       PlayerRole role) const override;
    double alpha(std::span<const double> x, std::size_t dim) const override;

private:
    Quad10DParams q_;
};

// Lateral near-hover subsystem (p, v, theta, omega), control S, disturbance d.
class Quad10DSubXY final : public SystemModel {
public:
    Quad10DSubXY(Axis axis, const ParameterMap& overrides = {});
    void flow_into(std::span<const double> x, std::span<const double> u,
                   std::span<const double> d, std::span<double> out) const override;
    double hamiltonian(std::span<const double> x, std::span<const double> p,
                       PlayerRole role) const override;
    double alpha(std::span<const double> x, std::size_t dim) const override;

private:
    Quad10DParams q_;
};

// Vertical near-hover subsystem (pz, vz), control Tz, disturbance dz.
class Quad10DSubZ final : public SystemModel {
public:
    explicit Quad10DSubZ(const ParameterMap& overrides = {});
    void flow_into(std::span<const double> x, std::span<const double> u,
                   std::span<const double> d, std::span<double> out) const override;
    double hamiltonian(std::span<const double> x, std::span<const double> p,
                       PlayerRole role) const override;
    double alpha(std::span<const double> x, std::size_t dim) const override;

private:
    Quad10DParams q_;
};

/**
 * Builds a built-in model by name. Known names: dubins3d, dubins_sub_x,
 * dubins_sub_y, single_integrator, advection, quad6d, quad6d_sub_x,
 * quad6d_sub_y, quad10d, quad10d_sub_x, quad10d_sub_y, quad10d_sub_z.
 * Unknown parameter keys are rejected.
 */
ModelPtr make_model(const std::string& name, const ParameterMap& overrides = {});

std::vector<std::string> builtin_model_names();

}  // namespace hjreach
