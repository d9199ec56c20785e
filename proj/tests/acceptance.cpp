// Runs the acceptance criteria and prints one PASS/FAIL line for each.
// Exit status is 0 only when every criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "hjreach/models.hpp"
#include "hjreach/scenario.hpp"
#include "hjreach/value_io.hpp"

using namespace hjreach;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const double pi = std::numbers::pi;
const fs::path kScenarios = fs::path(HJREACH_SOURCE_DIR) / "scenarios";

struct Outcome {
    bool passed;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

fs::path out_root() {
    const fs::path p = fs::current_path() / "acceptance_runs";
    fs::create_directories(p);
    return p;
}

ScenarioReport run_bundled(const std::string& name, double* wall = nullptr) {
    const auto start = std::chrono::steady_clock::now();
    const auto config = load_scenario(kScenarios / (name + ".json"));
    const fs::path out = out_root() / name;
    fs::remove_all(out);
    auto report = run_scenario(config, out, 1);
    if (wall) *wall = seconds_since(start);
    return report;
}

// Mismatch fraction at most 2% and every mismatch within 2 cells of a zero level.
Outcome exactness(const std::string& name, double time_limit = 0.0) {
    double wall = 0.0;
    const auto r = run_bundled(name, &wall);
    bool ok = !r.comparisons.empty();
    double worst = 0.0;
    std::size_t outside = 0;
    for (const auto& c : r.comparisons) {
        worst = std::max(worst, c.report.sign_mismatch_fraction);
        outside += c.report.mismatches_outside_band;
    }
    ok = ok && worst <= 0.02 && outside == 0;
    if (time_limit > 0.0) ok = ok && wall <= time_limit;
    return {ok, fmt("worst mismatch fraction %.4f, %zu outside the 2-cell band, %.1f s", worst, outside, wall)};
}

Outcome criterion_speedup() {
    const std::size_t n = 101;
    const Grid grid = make_grid({-1.5, -1.5, -pi}, {1.5, 1.5, pi}, {n, n, n}, {false, false, true});
    const auto model = make_model("dubins3d");
    const auto spec = builtin_decomposition(*model);
    SolveConfig c;
    c.horizon = -0.5;
    c.role.objective = Objective::minimal;
    const std::vector<std::size_t> d{0, 1};
    const ValueFn target = signed_box(grid, d, std::vector<double>{-0.5, -0.5}, std::vector<double>{0.5, 0.5});
    const double full = integrate(model, target, c).stats.wall_seconds;
    double subs = 0.0;
    for (std::size_t s = 0; s < 2; ++s) {
        const Grid g = project_grid(grid, spec->mapping, s);
        const std::vector<std::size_t> d0{0};
        const ValueFn t = signed_box(g, d0, std::vector<double>{-0.5}, std::vector<double>{0.5});
        subs += integrate(spec->sub_models[s], t, c).stats.wall_seconds;
    }
    const double ratio = full / subs;
    return {ratio >= 10.0, fmt("full %.3f s, subsystems %.4f s, speedup %.1f", full, subs, ratio)};
}

// Wider than the other Dubins runs: on [-1.5, 1.5]^2 the set-mode values at
// outflow corners drift down through the extrapolated edge, and the running
// union keeps those transients.
Outcome criterion_tube_vs_sets() {
    const std::size_t n = 81;
    const Grid grid = make_grid({-2.0, -2.0, -pi}, {2.0, 2.0, pi}, {n, n, n}, {false, false, true});
    const auto model = make_model("dubins3d");
    const std::vector<std::size_t> d{0, 1};
    const ValueFn target = signed_box(grid, d, std::vector<double>{-0.5, -0.5}, std::vector<double>{0.5, 0.5});
    SolveConfig c;
    c.horizon = -0.5;
    c.role.objective = Objective::minimal;
    BrsUnionAccumulator acc;
    c.observer = [&](double, const ValueFn& v) { acc.add(v); };
    integrate(model, target, c);
    const UnionResult from_sets = acc.result(Objective::minimal);
    c.observer = nullptr;
    c.mode = SolveMode::tube;
    const ValueFn tube = integrate(model, target, c).final_value();
    CompareOptions o;
    o.band = 0.2;
    const auto cmp = compare_values(from_sets.value, tube, o);
    const double limit = 2.0 * grid.max_spacing();
    const bool ok = cmp.max_abs_diff <= limit && from_sets.all_nonempty && !from_sets.subset_only;
    return {ok, fmt("%zu snapshots, max |diff| in band %.4f (limit %.4f), all nonempty %s", acc.count(),
                    cmp.max_abs_diff, limit, from_sets.all_nonempty ? "yes" : "no")};
}

Outcome criterion_shared_disturbance() {
    const auto r = run_bundled("dubins_dstb_shared");
    if (r.comparisons.empty()) return {false, "no comparison"};
    bool contained = true;
    std::size_t escapes = 0;
    for (const auto& c : r.comparisons) {
        contained = contained && c.report.a_in_b;
        escapes += c.report.a_not_in_b;
    }
    const double strict = r.comparisons.back().report.strict_b_only_fraction;
    return {contained && strict >= 0.005,
            fmt("full set inside reconstruction: %s (%zu escapes), strict over-approximation %.4f",
                contained ? "yes" : "no", escapes, strict)};
}

Outcome criterion_linear_exactness() {
    const auto r = run_bundled("decoupled_2d");
    if (!r.analytic_error_cells) return {false, "no analytic comparison"};
    const double e = *r.analytic_error_cells;
    return {e <= 1.5, fmt("worst zero-crossing error %.4f cells at 201 nodes/dim", e)};
}

double advection_error(std::size_t nodes) {
    const Grid g = make_grid({-3}, {3}, {nodes}, {false});
    std::vector<double> vals(nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        const double x = g.coordinate(0, i);
        vals[i] = x * x - 0.25;
    }
    SolveConfig c;
    c.horizon = -1.0;
    const ValueFn v = integrate(make_model("advection"), ValueFn(g, vals), c).final_value();
    double worst = 0.0;
    std::size_t found = 0;
    for (std::size_t i = 0; i + 1 < nodes; ++i) {
        if ((v[i] <= 0.0) != (v[i + 1] <= 0.0)) {
            const double x = g.coordinate(0, i) + v[i] / (v[i] - v[i + 1]) * g.spacing(0);
            worst = std::max(worst, std::min(std::abs(x + 1.5), std::abs(x + 0.5)));
            ++found;
        }
    }
    return found == 2 ? worst : INFINITY;
}

Outcome criterion_convergence() {
    const double e1 = advection_error(101), e2 = advection_error(201), e3 = advection_error(401);
    const double r1 = e1 / e2, r2 = e2 / e3;
    const bool ok = e1 > e2 && e2 > e3 && std::abs(r1 - 2.0) <= 0.6 && std::abs(r2 - 2.0) <= 0.6;
    return {ok, fmt("errors %.3e, %.3e, %.3e; ratios %.2f, %.2f", e1, e2, e3, r1, r2)};
}

Outcome criterion_high_dim() {
    const auto config = load_scenario(kScenarios / "quad10d_max.json");
    const fs::path out = out_root() / "quad10d_max";
    fs::remove_all(out);
    const auto r = run_scenario(config, out, 1);
    const double solve = r.decomposed_seconds();
    bool slices_ok = false;
    for (const auto& c : r.checks) {
        if (c.name.rfind("slices_nested_", 0) == 0) slices_ok = c.passed;
    }

    std::ifstream in(out / "manifest.json");
    const json manifest = json::parse(in);
    std::vector<ValueFn> subs;
    for (const auto& s : manifest["subsystems"]) {
        subs.push_back(load_value(out / s["values"].back().get<std::string>()).value);
    }
    const auto spec = builtin_decomposition(*config.model);
    const LazyReconstruction lazy(subs, config.grid, spec->mapping, config.target_kind);
    std::mt19937_64 rng(7);
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        StateVector x(config.grid.dim_count());
        for (std::size_t d = 0; d < x.size(); ++d) {
            x[d] = std::uniform_real_distribution<double>(config.grid.lower(d), config.grid.upper(d))(rng);
        }
        double expect = config.target_kind == TargetKind::intersection ? -INFINITY : INFINITY;
        for (std::size_t s = 0; s < subs.size(); ++s) {
            const double v = interpolate(subs[s], project_state(x, spec->mapping, s));
            expect = config.target_kind == TargetKind::intersection ? std::max(expect, v) : std::min(expect, v);
        }
        worst = std::max(worst, std::abs(lazy.value_at(x) - expect));
    }
    const bool ok = solve <= 600.0 && slices_ok && worst <= 1e-12;
    return {ok, fmt("subsystem solves %.1f s, slices nested %s, lazy vs definition %.1e at 10^4 states", solve,
                    slices_ok ? "yes" : "no", worst)};
}

Outcome criterion_property_suites() {
    const std::vector<std::string> suites{HJREACH_PROPERTY_SUITES};
    std::string failed;
    for (const auto& exe : suites) {
        const std::string cmd = "\"" + exe + "\" --minimal > /dev/null 2>&1";
        if (std::system(cmd.c_str()) != 0) failed += " " + fs::path(exe).filename().string();
    }
    return {failed.empty(), failed.empty() ? fmt("%zu suites green", suites.size()) : "failing:" + failed};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 avoid set exactness (shared control, intersection)", [] { return exactness("dubins_min_brs", 300.0); }},
        {"2 reach set exactness (shared control, union)", [] { return exactness("dubins_max_brs_union"); }},
        {"3 decomposition speedup at 101 nodes/dim", criterion_speedup},
        {"4 union of every-step sets equals the tube", criterion_tube_vs_sets},
        {"5 shared disturbance over-approximates", criterion_shared_disturbance},
        {"6 decoupled disturbance exactness", [] { return exactness("dubins_dstb_decoupled"); }},
        {"7 decoupled linear system against the closed form", criterion_linear_exactness},
        {"8 first-order convergence of advection", criterion_convergence},
        {"9 ten-dimensional quadrotor from subsystems", criterion_high_dim},
        {"10 property suites", criterion_property_suites},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("error: ") + e.what()};
        }
        std::printf("%s  %s: %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
        std::fflush(stdout);
        failures += !o.passed;
    }
    return failures == 0 ? 0 : 1;
}
