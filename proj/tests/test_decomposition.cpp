#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hjreach/decomposition.hpp"
#include "hjreach/models.hpp"

using namespace hjreach;

namespace {

const double pi = std::numbers::pi;

SubsystemMapping dubins_mapping() { return SubsystemMapping(3, {{0}, {1}}, {2}); }

Grid dubins_grid(std::size_t n = 11) {
    return make_grid({-1.5, -1.5, -pi}, {1.5, 1.5, pi}, {n, n, n}, {false, false, true});
}

ValueFn random_field(const Grid& g, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(g.node_count());
    for (auto& x : v) x = u(rng);
    return ValueFn(g, v);
}

StateVector random_state(const Grid& g, std::mt19937_64& rng) {
    StateVector x(g.dim_count());
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double hi = g.periodic(d) ? g.upper(d) - 1e-9 : g.upper(d);
        x[d] = std::uniform_real_distribution<double>(g.lower(d), hi)(rng);
    }
    return x;
}

}  // namespace

TEST_CASE("mapping validation") {
    CHECK_NOTHROW(SubsystemMapping(3, {{0}, {1}}, {2}));
    CHECK_NOTHROW(SubsystemMapping(2, {{0}, {1}}, {}));
    CHECK_THROWS_AS(SubsystemMapping(3, {{0}, {0}}, {2}), DecompositionError);
    CHECK_THROWS_AS(SubsystemMapping(3, {{0}, {1}}, {}), DecompositionError);
    CHECK_THROWS_AS(SubsystemMapping(3, {{0}, {1}}, {2, 1}), DecompositionError);
    CHECK_THROWS_AS(SubsystemMapping(2, {{0}, {3}}, {}), DecompositionError);
    CHECK_THROWS_AS(SubsystemMapping(2, {}, {0, 1}), DecompositionError);
    const SubsystemMapping m(5, {{4, 0}, {2}}, {3, 1});
    CHECK(m.subsystem_dims(0) == std::vector<std::size_t>{0, 1, 3, 4});
    CHECK(m.subsystem_dims(1) == std::vector<std::size_t>{1, 2, 3});
    CHECK_THROWS_AS(m.subsystem_dims(2), DecompositionError);
}

TEST_CASE("project_state") {
    const auto m = dubins_mapping();
    const std::vector<double> x{1, 2, 0.5};
    CHECK(project_state(x, m, 0) == StateVector{1, 0.5});
    CHECK(project_state(x, m, 1) == StateVector{2, 0.5});
    const SubsystemMapping plain(2, {{0}, {1}}, {});
    CHECK(project_state(std::vector<double>{1, 2}, plain, 0) == StateVector{1});
    CHECK_THROWS_AS(project_state(x, m, 2), DecompositionError);
    CHECK_THROWS_AS(project_state(std::vector<double>{1, 2}, m, 0), DecompositionError);
}

TEST_CASE("project_grid keeps retained dim metadata") {
    const auto m = dubins_mapping();
    const Grid g = make_grid({-1, -2, -pi}, {1, 2, pi}, {5, 7, 9}, {false, false, true});
    const Grid a = project_grid(g, m, 0);
    CHECK(a.lower() == std::vector<double>{-1, -pi});
    CHECK(a.node_counts() == std::vector<std::size_t>{5, 9});
    CHECK(a.periodic() == std::vector<bool>{false, true});
    const Grid b = project_grid(g, m, 1);
    CHECK(b.upper() == std::vector<double>{2, pi});
    CHECK(b.node_counts() == std::vector<std::size_t>{7, 9});
    const SubsystemMapping plain(3, {{0}, {1, 2}}, {});
    CHECK(project_grid(g, plain, 1).node_counts() == std::vector<std::size_t>{7, 9});
}

TEST_CASE("backproject broadcasts along missing dims") {
    const Grid sub = make_grid({0, 0}, {1, 1}, {3, 3}, {false, false});
    std::vector<double> vals(9);
    for (std::size_t i = 0; i < 9; ++i) vals[i] = static_cast<double>(i);
    const ValueFn vs(sub, vals);
    const SubsystemMapping m(3, {{0}, {1}}, {2});
    const Grid full = make_grid({0, 0, 0}, {1, 2, 1}, {3, 3, 3}, {false, false, false});
    const ValueFn bp = backproject_value(vs, full, m, 0);
    CHECK(bp.size() == 27);
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            for (std::size_t k = 0; k < 3; ++k) {
                CHECK(bp[full.ravel(std::vector<std::size_t>{i, j, k})] == vals[sub.ravel(std::vector<std::size_t>{i, k})]);
            }
        }
    }
    CHECK_THROWS_AS(backproject_value(vs, full, m, 1), DecompositionError);
    const ValueFn other(make_grid({0, 0}, {2, 1}, {3, 3}, {false, false}), 0.0);
    CHECK_THROWS_AS(backproject_value(other, full, m, 0), DecompositionError);
}

TEST_CASE("project_value is the minimum over removed dims") {
    const Grid full = make_grid({0, 0}, {1, 1}, {3, 3}, {false, false});
    const SubsystemMapping m(2, {{0}, {1}}, {});
    std::vector<double> vals{1, -1, 4, 0, 5, 2, 3, 3, 3};
    const ValueFn p = project_value(ValueFn(full, vals), m, 0);
    CHECK(p.values()[0] == -1.0);
    CHECK(p.values()[1] == 0.0);
    CHECK(p.values()[2] == 3.0);
    const ValueFn c = project_value(ValueFn(full, 2.5), m, 1);
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c[i] == 2.5);
}

TEST_CASE("reconstruct examples") {
    const Grid full = dubins_grid(7);
    const auto m = dubins_mapping();
    const std::vector<ValueFn> subs{ValueFn(project_grid(full, m, 0), -1.0),
                                    ValueFn(project_grid(full, m, 1), -1.0)};
    for (auto kind : {TargetKind::intersection, TargetKind::union_of}) {
        const ValueFn r = reconstruct(subs, full, m, kind);
        CHECK(r.max_value() <= 0.0);
    }
    const std::vector<ValueFn> one{subs[0]};
    CHECK_THROWS_AS(reconstruct(one, full, m, TargetKind::intersection), DecompositionError);
}

TEST_CASE("reconstruct with three partitions and is permutation invariant") {
    std::mt19937_64 rng(3);
    const Grid full = make_grid({0, 0, 0, 0}, {1, 1, 1, 1}, {4, 3, 5, 3}, {false, false, false, true});
    const SubsystemMapping m(4, {{0}, {1, 2}, {3}}, {});
    const SubsystemMapping swapped(4, {{3}, {0}, {1, 2}}, {});
    std::vector<ValueFn> subs;
    for (std::size_t s = 0; s < 3; ++s) subs.push_back(random_field(project_grid(full, m, s), rng));
    const std::vector<ValueFn> perm{subs[2], subs[0], subs[1]};
    for (auto kind : {TargetKind::intersection, TargetKind::union_of}) {
        const ValueFn a = reconstruct(subs, full, m, kind);
        const ValueFn b = reconstruct(perm, full, swapped, kind);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    }
}

TEST_CASE("lazy reconstruction matches the dense one at nodes") {
    std::mt19937_64 rng(4);
    const Grid full = dubins_grid(9);
    const auto m = dubins_mapping();
    std::vector<ValueFn> subs{random_field(project_grid(full, m, 0), rng), random_field(project_grid(full, m, 1), rng)};
    for (auto kind : {TargetKind::intersection, TargetKind::union_of}) {
        const ValueFn dense = reconstruct(subs, full, m, kind);
        const LazyReconstruction lazy(subs, full, m, kind);
        for (std::size_t i = 0; i < full.node_count(); i += 7) {
            CHECK(lazy.value_at(full.node_state(i)) == dense[i]);
        }
        for (int k = 0; k < 100; ++k) {
            const auto x = random_state(full, rng);
            const double a = interpolate(subs[0], project_state(x, m, 0));
            const double b = interpolate(subs[1], project_state(x, m, 1));
            CHECK(lazy.value_at(x) == (kind == TargetKind::intersection ? std::max(a, b) : std::min(a, b)));
        }
    }
}

TEST_CASE("brt_from_brs_union") {
    const Grid g = make_grid({0}, {1}, {3}, {false});
    const std::vector<ValueFn> single{ValueFn(g, {1.0, -1.0, 2.0})};
    const auto r1 = brt_from_brs_union(single, Objective::minimal);
    CHECK(r1.value.values()[1] == -1.0);
    CHECK(r1.all_nonempty);
    CHECK_FALSE(r1.subset_only);

    const std::vector<ValueFn> with_empty{ValueFn(g, {1.0, -1.0, 2.0}), ValueFn(g, {0.5, 0.5, 0.5})};
    const auto r2 = brt_from_brs_union(with_empty, Objective::minimal);
    CHECK_FALSE(r2.all_nonempty);
    CHECK(r2.subset_only);
    CHECK(r2.value.values()[0] == 0.5);
    const auto r3 = brt_from_brs_union(with_empty, Objective::maximal);
    CHECK_FALSE(r3.subset_only);

    CHECK_THROWS(brt_from_brs_union(std::vector<ValueFn>{}, Objective::minimal));
    const std::vector<ValueFn> mixed{ValueFn(g, 0.0), ValueFn(make_grid({0}, {2}, {3}, {false}), 0.0)};
    CHECK_THROWS_AS(brt_from_brs_union(mixed, Objective::minimal), GridError);
}

TEST_CASE("union of a growing BRS family has the last member's sub-zero set") {
    const Grid g = make_grid({-3}, {3}, {61}, {false});
    const std::vector<std::size_t> d{0};
    SolveConfig c;
    c.horizon = -1.0;
    c.snapshot_times = {0.0, -0.25, -0.5, -0.75, -1.0};
    c.role.objective = Objective::maximal;
    const auto r = integrate(make_model("single_integrator"),
                             signed_box(g, d, std::vector<double>{-0.5}, std::vector<double>{0.5}), c);
    std::vector<ValueFn> family;
    for (const auto& s : r.snapshots) family.push_back(s.value);
    const auto u = brt_from_brs_union(family, Objective::maximal);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        CHECK((u.value[i] <= 0.0) == (r.final_value()[i] <= 0.0));
        CHECK(u.value[i] <= r.final_value()[i]);
    }
}

TEST_CASE("lockstep driver shares one step schedule") {
    const Grid full = dubins_grid(21);
    const auto m = dubins_mapping();
    const auto params = ParameterMap{};
    std::vector<SubsystemProblem> problems;
    const std::vector<std::size_t> d0{0};
    problems.push_back({make_model("dubins_sub_x", params),
                        signed_box(project_grid(full, m, 0), d0, std::vector<double>{-0.5}, std::vector<double>{0.5})});
    problems.push_back({make_model("dubins_sub_y", params),
                        signed_box(project_grid(full, m, 1), d0, std::vector<double>{-0.5}, std::vector<double>{0.5})});
    SolveConfig c;
    c.horizon = -0.5;
    c.snapshot_times = {0.0, -0.2, -0.5};
    c.role.objective = Objective::minimal;
    std::vector<double> times;
    const auto r = lockstep_integrate(problems, c, [&](double t, std::span<const ValueFn* const> v) {
        CHECK(v.size() == 2);
        times.push_back(t);
    });
    REQUIRE(r.subsystems.size() == 2);
    CHECK(r.subsystems[0].snapshots.size() == 3);
    CHECK(r.subsystems[1].snapshots[1].time == -0.2);
    CHECK(times.front() == 0.0);
    CHECK(times.back() == -0.5);
    CHECK(times.size() == r.steps + 1);
    CHECK(std::find(times.begin(), times.end(), -0.2) != times.end());
}
