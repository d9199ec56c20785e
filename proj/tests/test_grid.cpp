#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hjreach/grid.hpp"

using namespace hjreach;

namespace {

const double pi = std::numbers::pi;

std::vector<std::size_t> dims(std::initializer_list<std::size_t> d) { return d; }

}  // namespace

TEST_CASE("make_grid spacing") {
    const Grid a = make_grid({-1.0}, {1.0}, {5}, {false});
    CHECK(a.spacing(0) == doctest::Approx(0.5));
    CHECK(a.node_count() == 5);
    CHECK(a.coordinate(0, 4) == doctest::Approx(1.0));

    const Grid p = make_grid({-pi}, {pi}, {4}, {true});
    CHECK(p.spacing(0) == doctest::Approx(pi / 2));
    CHECK(p.coordinate(0, 3) == doctest::Approx(pi / 2));

    CHECK_THROWS_AS(make_grid({0.0}, {0.0}, {5}, {false}), GridError);
    CHECK_THROWS_AS(make_grid({1.0}, {0.0}, {5}, {false}), GridError);
    CHECK_THROWS_AS(make_grid({0.0}, {1.0}, {2}, {false}), GridError);
    CHECK_THROWS_AS(make_grid({0.0, 0.0}, {1.0}, {5}, {false}), GridError);
}

TEST_CASE("ravel and unravel are inverse, last dim fastest") {
    const Grid g = make_grid({0, 0, 0}, {1, 1, 1}, {3, 4, 5}, {false, true, false});
    CHECK(g.stride(2) == 1);
    CHECK(g.stride(1) == 5);
    CHECK(g.stride(0) == 20);
    for (std::size_t f = 0; f < g.node_count(); ++f) {
        CHECK(g.ravel(g.unravel(f)) == f);
    }
}

TEST_CASE("signed_box values") {
    const Grid g = make_grid({-1.5}, {1.5}, {7}, {false});
    const ValueFn v = signed_box(g, dims({0}), std::vector<double>{-0.5}, std::vector<double>{0.5});
    CHECK(v[3] == doctest::Approx(-0.5));   // x = 0
    CHECK(v[4] == doctest::Approx(0.0));    // x = 0.5
    const std::vector<double> x{1.0, 1.0};
    CHECK(signed_box_value(x, dims({0, 1}), std::vector<double>{-0.5, -0.5}, std::vector<double>{0.5, 0.5}) ==
          doctest::Approx(0.5));

    const Grid g2 = make_grid({-1, -1}, {1, 1}, {5, 5}, {false, false});
    const ValueFn slab = signed_box(g2, dims({1}), std::vector<double>{-0.5}, std::vector<double>{0.5});
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(slab[g2.ravel(std::vector<std::size_t>{i, 2})] == slab[g2.ravel(std::vector<std::size_t>{0, 2})]);
    }
    CHECK_THROWS_AS(signed_box(g2, dims({2}), std::vector<double>{0}, std::vector<double>{1}), GridError);
}

TEST_CASE("set algebra on explicit values") {
    const Grid g = make_grid({0}, {1}, {3}, {false});
    const ValueFn a(g, {1.0, -1.0, 0.0});
    const ValueFn b(g, {-2.0, 3.0, 0.0});
    const ValueFn u = set_union(a, b);
    const ValueFn n = set_intersection(a, b);
    const ValueFn c = set_complement(a);
    CHECK(u[0] == -2.0);
    CHECK(u[1] == -1.0);
    CHECK(n[0] == 1.0);
    CHECK(n[1] == 3.0);
    CHECK(c[0] == -1.0);
    CHECK(c[1] == 1.0);

    CHECK(set_union(a, a).values()[1] == a[1]);
    const ValueFn empty(g, 10.0);
    const ValueFn full(g, -10.0);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(set_union(a, empty)[i] == a[i]);
        CHECK(set_intersection(a, full)[i] == a[i]);
        CHECK(set_complement(set_complement(a))[i] == a[i]);
    }

    const Grid other = make_grid({0}, {2}, {3}, {false});
    CHECK_THROWS_AS(set_union(a, ValueFn(other, 0.0)), GridError);
}

TEST_CASE("ValueFn rejects wrong length") {
    const Grid g = make_grid({0}, {1}, {3}, {false});
    CHECK_THROWS_AS(ValueFn(g, std::vector<double>{1.0, 2.0}), GridError);
}

TEST_CASE("interpolate") {
    const Grid g = make_grid({0}, {2}, {3}, {false});
    const ValueFn v(g, {1.0, 3.0, 7.0});
    CHECK(interpolate(v, std::vector<double>{1.0}) == 3.0);
    CHECK(interpolate(v, std::vector<double>{0.5}) == doctest::Approx(2.0));
    CHECK(interpolate(v, std::vector<double>{2.0}) == 7.0);
    CHECK_THROWS_AS(interpolate(v, std::vector<double>{2.1}), GridError);
    double out = 0.0;
    CHECK_FALSE(try_interpolate(v, std::vector<double>{-0.1}, out));
    CHECK(try_interpolate(v, std::vector<double>{1.5}, out));
    CHECK(out == doctest::Approx(5.0));
}

TEST_CASE("periodic interpolation wraps to the node at lower") {
    // Compare against an explicitly extended non-periodic grid holding the seam node.
    const std::size_t n = 16;
    const Grid p = make_grid({-pi}, {pi}, {n}, {true});
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = std::cos(3.0 * p.coordinate(0, i)) + 0.1 * static_cast<double>(i);
    const ValueFn v(p, vals);

    const Grid ext = make_grid({-pi}, {pi}, {n + 1}, {false});
    std::vector<double> ext_vals = vals;
    ext_vals.push_back(vals.front());
    const ValueFn e(ext, ext_vals);

    for (double eps : {1e-3, 0.05, 0.2, 0.39}) {
        const double x = pi - eps;
        CHECK(interpolate(v, std::vector<double>{x}) == doctest::Approx(interpolate(e, std::vector<double>{x})).epsilon(1e-12));
        // One period away gives the same value.
        CHECK(interpolate(v, std::vector<double>{x + 2 * pi}) ==
              doctest::Approx(interpolate(v, std::vector<double>{x})).epsilon(1e-12));
        CHECK(interpolate(v, std::vector<double>{x - 4 * pi}) ==
              doctest::Approx(interpolate(v, std::vector<double>{x})).epsilon(1e-12));
    }
}

TEST_CASE("interpolate is exact for multi-affine functions") {
    const Grid g = make_grid({-1, 0, 2}, {1, 3, 5}, {5, 4, 6}, {false, false, false});
    auto f = [](double x, double y, double z) { return 1.0 + 2 * x - y + 0.5 * z + 0.25 * x * y - x * y * z; };
    std::vector<double> vals(g.node_count());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const auto s = g.node_state(i);
        vals[i] = f(s[0], s[1], s[2]);
    }
    const ValueFn v(g, vals);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> ux(-1, 1), uy(0, 3), uz(2, 5);
    for (int k = 0; k < 200; ++k) {
        const double x = ux(rng), y = uy(rng), z = uz(rng);
        CHECK(interpolate(v, std::vector<double>{x, y, z}) == doctest::Approx(f(x, y, z)).epsilon(1e-12));
    }
}
