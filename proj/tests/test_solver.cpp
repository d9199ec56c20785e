#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "hjreach/models.hpp"
#include "hjreach/solver.hpp"

using namespace hjreach;

namespace {

const double pi = std::numbers::pi;

ValueFn box_1d(const Grid& g, double lo, double hi) {
    const std::vector<std::size_t> d{0};
    return signed_box(g, d, std::vector<double>{lo}, std::vector<double>{hi});
}

// Zero crossings of a 1D field by linear interpolation between nodes.
std::vector<double> crossings(const ValueFn& v) {
    std::vector<double> out;
    const Grid& g = v.grid();
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
        if ((v[i] <= 0.0) != (v[i + 1] <= 0.0)) {
            out.push_back(g.coordinate(0, i) + v[i] / (v[i] - v[i + 1]) * g.spacing(0));
        }
    }
    return out;
}

// A model whose Hamiltonian turns into NaN at positive x.
class Poisoned final : public SystemModel {
public:
    Poisoned() : SystemModel("poisoned", {"x"}, {}, {}, {}) {}
    void flow_into(std::span<const double>, std::span<const double>, std::span<const double>,
                   std::span<double> out) const override {
        out[0] = 0.0;
    }
    double hamiltonian(std::span<const double> x, std::span<const double>, PlayerRole) const override {
        return x[0] > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    }
    double alpha(std::span<const double>, std::size_t) const override { return 1.0; }
};

}  // namespace

TEST_CASE("spatial derivatives") {
    const Grid g = make_grid({0}, {1}, {11}, {false});
    const auto zero = spatial_derivatives(ValueFn(g, 3.0), 0);
    for (std::size_t i = 0; i < 11; ++i) {
        CHECK(zero.left[i] == 0.0);
        CHECK(zero.right[i] == 0.0);
    }
    std::vector<double> lin(11);
    for (std::size_t i = 0; i < 11; ++i) lin[i] = g.coordinate(0, i);
    const auto d = spatial_derivatives(ValueFn(g, lin), 0);
    for (std::size_t i = 0; i < 11; ++i) {
        CHECK(d.left[i] == doctest::Approx(1.0));
        CHECK(d.right[i] == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(spatial_derivatives(ValueFn(g, 0.0), 1), GridError);
}

TEST_CASE("periodic derivatives match an unrolled three-period grid") {
    const std::size_t n = 24;
    const Grid p = make_grid({-pi}, {pi}, {n}, {true});
    const Grid wide = make_grid({-3 * pi}, {3 * pi}, {3 * n}, {true});
    std::vector<double> a(n), b(3 * n);
    for (std::size_t i = 0; i < n; ++i) a[i] = std::sin(p.coordinate(0, i));
    for (std::size_t i = 0; i < 3 * n; ++i) b[i] = a[i % n];
    const auto da = spatial_derivatives(ValueFn(p, a), 0);
    const auto db = spatial_derivatives(ValueFn(wide, b), 0);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(da.left[i] == doctest::Approx(db.left[n + i]).epsilon(1e-12));
        CHECK(da.right[i] == doctest::Approx(db.right[n + i]).epsilon(1e-12));
    }
}

TEST_CASE("lax_friedrichs") {
    const auto dubins = make_model("dubins3d");
    const PlayerRole role{Objective::minimal, false};
    const std::vector<double> x{0.2, -0.1, 0.7};
    const std::vector<double> p{0.4, -1.2, 0.3};
    CHECK(lax_friedrichs(*dubins, x, p, p, role) == eval_hamiltonian(*dubins, x, p, role));
    const std::vector<double> z(3, 0.0);
    CHECK(lax_friedrichs(*dubins, x, z, z, role) == 0.0);

    // Unit advection: H(p) = p, alpha = 1. The monotone flux reduces to the
    // upwind difference taken from the right, c * p_right.
    const auto adv = make_model("advection");
    const std::vector<double> x1{0.0};
    const double h = lax_friedrichs(*adv, x1, std::vector<double>{0.0}, std::vector<double>{2.0}, role);
    CHECK(h == doctest::Approx(2.0));
    const auto back = make_model("advection", {{"velocity", -1.0}});
    CHECK(lax_friedrichs(*back, x1, std::vector<double>{0.0}, std::vector<double>{2.0}, role) ==
          doctest::Approx(0.0));
}

TEST_CASE("cfl_timestep") {
    const Grid g1 = make_grid({0}, {1}, {11}, {false});
    CHECK(cfl_timestep(g1, std::vector<double>{2.0}, 0.5, 10.0) == doctest::Approx(0.025));
    CHECK(cfl_timestep(g1, std::vector<double>{0.0}, 0.5, 0.3) == 0.3);
    CHECK(cfl_timestep(g1, std::vector<double>{2.0}, 0.5, 0.01) == 0.01);
    const Grid g2 = make_grid({0, 0}, {1, 2}, {11, 11}, {false, false});
    CHECK(cfl_timestep(g2, std::vector<double>{1.0, 2.0}, 0.8, 1.0) == doctest::Approx(0.8 / 20.0));
    CHECK_THROWS_AS(cfl_timestep(g1, std::vector<double>{1.0}, 1.5, 1.0), SolverError);
}

TEST_CASE("horizon 0 returns the target") {
    const Grid g = make_grid({-1.5}, {1.5}, {31}, {false});
    const ValueFn target = box_1d(g, -0.5, 0.5);
    SolveConfig c;
    c.horizon = 0.0;
    const auto r = integrate(make_model("advection"), target, c);
    REQUIRE(r.snapshots.size() == 1);
    CHECK(r.snapshots[0].time == 0.0);
    for (std::size_t i = 0; i < target.size(); ++i) CHECK(r.final_value()[i] == target[i]);
    CHECK(r.stats.steps == 0);
}

TEST_CASE("zero dynamics leave the target unchanged") {
    const Grid g = make_grid({-1, -1}, {1, 1}, {21, 21}, {false, false});
    const std::vector<std::size_t> d{0, 1};
    const ValueFn target = signed_box(g, d, std::vector<double>{-0.3, -0.6}, std::vector<double>{0.5, 0.2});
    SolveConfig c;
    c.horizon = -0.7;
    c.max_dt = 0.05;
    const auto r = integrate(make_model("advection", {{"dim_count", 2}, {"velocity", 0.0}}), target, c);
    CHECK(r.stats.steps == 14);
    for (std::size_t i = 0; i < target.size(); ++i) CHECK(r.final_value()[i] == target[i]);
}

TEST_CASE("advection translates the box") {
    const Grid g = make_grid({-3}, {3}, {241}, {false});
    SolveConfig c;
    c.horizon = -1.0;
    const auto r = integrate(make_model("advection"), box_1d(g, -0.5, 0.5), c);
    const auto xs = crossings(r.final_value());
    REQUIRE(xs.size() == 2);
    CHECK(std::abs(xs[0] + 1.5) <= 1.5 * g.spacing(0));
    CHECK(std::abs(xs[1] + 0.5) <= 1.5 * g.spacing(0));
}

TEST_CASE("snapshot schedule") {
    SolveConfig c;
    c.horizon = -1.0;
    c.snapshot_times = {-0.5, 0.0, -1.0, -0.5};
    CHECK(snapshot_schedule(c) == std::vector<double>{0.0, -0.5, -1.0});
    c.snapshot_times = {-0.5, -1.0};
    CHECK_THROWS_AS(snapshot_schedule(c), SolverError);
    c.snapshot_times = {0.0, -1.5};
    CHECK_THROWS_AS(snapshot_schedule(c), SolverError);
    c.snapshot_times = {};
    c.horizon = 0.5;
    CHECK_THROWS_AS(snapshot_schedule(c), SolverError);
}

TEST_CASE("snapshots land exactly on requested times") {
    const Grid g = make_grid({-2}, {2}, {41}, {false});
    SolveConfig c;
    c.horizon = -1.0;
    c.snapshot_times = {0.0, -0.3, -0.77, -1.0};
    std::vector<double> seen;
    c.observer = [&](double t, const ValueFn&) { seen.push_back(t); };
    const auto r = integrate(make_model("single_integrator"), box_1d(g, -0.5, 0.5), c);
    REQUIRE(r.snapshots.size() == 4);
    CHECK(r.snapshots[1].time == -0.3);
    CHECK(r.snapshots[2].time == -0.77);
    CHECK_NOTHROW(r.at(-0.77));
    CHECK_THROWS_AS(r.at(-0.5), SolverError);
    CHECK(seen.front() == 0.0);
    CHECK(seen.size() == r.stats.steps + 1);
    CHECK(std::find(seen.begin(), seen.end(), -0.3) != seen.end());
    CHECK(seen.back() == -1.0);
    for (std::size_t k = 1; k < seen.size(); ++k) CHECK(seen[k] < seen[k - 1]);
}

TEST_CASE("stepper stats and rejections") {
    const Grid g = make_grid({-2}, {2}, {41}, {false});
    const auto model = make_model("single_integrator");
    SolveConfig c;
    Stepper s(model, box_1d(g, -0.5, 0.5), c);
    CHECK(s.stable_dt() == doctest::Approx(0.5 * 0.1));
    s.step(0.01);
    CHECK(s.time() == doctest::Approx(-0.01));
    s.step_to(-0.02);
    CHECK(s.time() == -0.02);
    CHECK_THROWS_AS(s.step(-1.0), SolverError);
    CHECK_THROWS_AS(s.step_to(0.0), SolverError);
    CHECK_THROWS_AS(s.advance_to(0.1), SolverError);
    CHECK(s.stats().extrema.size() == 3);

    const Grid g2 = make_grid({-2, -2}, {2, 2}, {5, 5}, {false, false});
    CHECK_THROWS(Stepper(model, ValueFn(g2, 1.0), c));
    SolveConfig bad;
    bad.cfl = 0.0;
    CHECK_THROWS_AS(Stepper(model, box_1d(g, -0.5, 0.5), bad), SolverError);
}

TEST_CASE("non-finite values abort with the step and node") {
    const Grid g = make_grid({0}, {1}, {11}, {false});
    SolveConfig c;
    c.horizon = -0.5;
    try {
        integrate(std::make_shared<Poisoned>(), ValueFn(g, 1.0), c);
        FAIL("expected an abort");
    } catch (const SolverError& e) {
        const std::string what = e.what();
        CHECK(what.find("step 1") != std::string::npos);
        CHECK(what.find("node 6") != std::string::npos);
    }
}

TEST_CASE("tvd_rk2 agrees with euler to first order") {
    const Grid g = make_grid({-3}, {3}, {121}, {false});
    SolveConfig c;
    c.horizon = -1.0;
    const auto target = box_1d(g, -0.5, 0.5);
    const auto e = integrate(make_model("advection"), target, c);
    c.time_scheme = TimeScheme::tvd_rk2;
    const auto r = integrate(make_model("advection"), target, c);
    const auto xe = crossings(e.final_value());
    const auto xr = crossings(r.final_value());
    REQUIRE(xr.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) CHECK(std::abs(xe[k] - xr[k]) <= g.spacing(0));
}
