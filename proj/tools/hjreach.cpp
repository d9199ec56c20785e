// hjreach: run reachability scenarios, compare value dumps, export slices.
//
//   hjreach run --scenario scenarios/dubins_min_brs.json --out out/dubins
//   hjreach compare --a out/x/full_2.json --b out/x/decomposed_2.json --band 0.2
//   hjreach slice --in out/dubins --fix theta=0 --out theta0.csv
//
// Exit codes: 0 success, 2 a threshold check failed, 1 any error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hjreach/compare.hpp"
#include "hjreach/scenario.hpp"
#include "hjreach/value_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace hjreach;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int run_command(const std::string& scenario, const std::string& out, double grid_scale, std::uint64_t seed) {
    const ScenarioConfig config = load_scenario(scenario, grid_scale);
    std::cerr << "running " << config.name << " (" << config.grid.dim_count() << "D)\n";
    const ScenarioReport report = run_scenario(config, out, seed);
    for (const auto& c : report.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    }
    if (report.full_seconds) std::cout << "full solve " << *report.full_seconds << " s\n";
    if (!report.subsystem_seconds.empty()) {
        std::cout << "subsystem solves " << report.decomposed_seconds() << " s\n";
    }
    std::cout << "report: " << (fs::path(out) / "report.json").string() << '\n';
    return report.passed() ? 0 : 2;
}

int compare_command(const std::string& a, const std::string& b, const CompareOptions& options,
                    std::optional<double> max_mismatch) {
    const ValueDump da = load_value(a);
    const ValueDump db = load_value(b);
    const ComparisonReport r = compare_values(da.value, db.value, options);
    json j = {{"interior_nodes", r.interior_nodes},
              {"sign_mismatch_fraction", r.sign_mismatch_fraction},
              {"mismatches_outside_band", r.mismatches_outside_band},
              {"max_abs_diff", r.max_abs_diff},
              {"a_in_b", r.a_in_b},
              {"b_in_a", r.b_in_a},
              {"strict_a_only_fraction", r.strict_a_only_fraction},
              {"strict_b_only_fraction", r.strict_b_only_fraction}};
    std::cout << j.dump(2) << '\n';
    if (max_mismatch && r.sign_mismatch_fraction > *max_mismatch) return 2;
    return 0;
}

std::map<std::size_t, double> parse_fixes(const std::vector<std::string>& fixes,
                                          const std::vector<std::string>& names) {
    std::map<std::size_t, double> out;
    for (const auto& f : fixes) {
        const auto eq = f.find('=');
        if (eq == std::string::npos) throw UsageError("--fix expects dim=value, got " + f);
        const std::string dim = f.substr(0, eq);
        auto it = std::find(names.begin(), names.end(), dim);
        if (it == names.end()) throw UsageError("unknown dim " + dim);
        std::size_t used = 0;
        const double v = std::stod(f.substr(eq + 1), &used);
        if (used != f.size() - eq - 1 || !std::isfinite(v)) throw UsageError("bad value in " + f);
        out[static_cast<std::size_t>(it - names.begin())] = v;
    }
    return out;
}

std::size_t pick_time(const json& manifest, std::optional<double> time) {
    const auto times = manifest.at("times").get<std::vector<double>>();
    if (!time) return times.size() - 1;
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (std::abs(times[k] - *time) <= 1e-12) return k;
    }
    throw UsageError("time " + std::to_string(*time) + " is not a snapshot of this run");
}

int slice_command(const std::string& in, const std::vector<std::string>& fixes, const std::string& out,
                  std::optional<double> time, const std::string& source) {
    const fs::path path(in);
    if (!fs::is_directory(path)) {
        const ValueDump dump = load_value(path);
        std::vector<std::string> names = dump.dim_names;
        if (names.empty()) {
            for (std::size_t d = 0; d < dump.value.grid().dim_count(); ++d) names.push_back("x" + std::to_string(d));
        }
        export_slice(DenseSource(dump.value), parse_fixes(fixes, names), names, out);
        return 0;
    }

    std::ifstream mf(path / "manifest.json");
    if (!mf) throw UsageError(in + " has no manifest.json");
    const json manifest = json::parse(mf);
    const auto names = manifest.at("dim_names").get<std::vector<std::string>>();
    const auto fixed = parse_fixes(fixes, names);
    const std::size_t k = pick_time(manifest, time);

    std::string which = source;
    if (which == "auto") which = manifest.contains("subsystems") ? "decomposed" : "full";
    if (which == "full" || (which == "decomposed" && manifest.contains("decomposed"))) {
        if (!manifest.contains(which)) throw UsageError("run has no " + which + " dumps");
        const ValueDump dump = load_value(path / manifest[which][k].get<std::string>());
        export_slice(DenseSource(dump.value), fixed, names, out);
        return 0;
    }
    if (which != "decomposed") throw UsageError("--source must be full, decomposed or auto");
    if (!manifest.contains("subsystems")) throw UsageError("run has no subsystem dumps");
    if (manifest.at("reconstruct") == "brt_from_sets") {
        throw UsageError("tubes built from subsystem sets are sliced during the run; see slices/ in " + in);
    }

    const json& g = manifest.at("grid");
    const Grid grid(g.at("lower").get<std::vector<double>>(), g.at("upper").get<std::vector<double>>(),
                    g.at("node_counts").get<std::vector<std::size_t>>(),
                    g.at("periodic").get<std::vector<bool>>());
    const SubsystemMapping mapping(names.size(),
                                   manifest.at("mapping").at("partitions").get<std::vector<std::vector<std::size_t>>>(),
                                   manifest.at("mapping").at("common").get<std::vector<std::size_t>>());
    std::vector<ValueFn> subs;
    for (const auto& s : manifest.at("subsystems")) {
        subs.push_back(load_value(path / s.at("values")[k].get<std::string>()).value);
    }
    const TargetKind kind = manifest.at("target_kind") == "intersection" ? TargetKind::intersection
                                                                          : TargetKind::union_of;
    export_slice(LazyReconstruction(std::move(subs), grid, mapping, kind), fixed, names, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hamilton-Jacobi reachability with system decomposition"};
    app.require_subcommand(1);

    std::string scenario, out_dir;
    double grid_scale = 1.0;
    std::uint64_t seed = 0;
    auto* run = app.add_subcommand("run", "Run a scenario and write dumps, slices and a report");
    run->add_option("--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--grid-scale", grid_scale, "Refinement factor for every node count")
        ->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Seed for the sampled trajectory checks");

    std::string a, b;
    CompareOptions options;
    std::optional<double> max_mismatch;
    auto* compare = app.add_subcommand("compare", "Compare two value dumps on the same grid");
    compare->add_option("--a", a, "First dump (.json)")->required()->check(CLI::ExistingFile);
    compare->add_option("--b", b, "Second dump (.json)")->required()->check(CLI::ExistingFile);
    compare->add_option("--band", options.band, "Band |V| < band for max_abs_diff")->capture_default_str();
    compare->add_option("--band-cells", options.band_cells, "Allowed mismatch distance from a zero level")
        ->capture_default_str();
    compare->add_option("--boundary-skip", options.boundary_skip, "Edge cells ignored")->capture_default_str();
    compare->add_option("--max-mismatch", max_mismatch, "Exit 2 when the sign mismatch fraction exceeds this");

    std::string in, slice_out, source = "auto";
    std::vector<std::string> fixes;
    std::optional<double> time;
    auto* slice = app.add_subcommand("slice", "Export a slice of a dump or of a run directory as CSV");
    slice->add_option("--in", in, "Dump file or run output directory")->required()->check(CLI::ExistingPath);
    slice->add_option("--fix", fixes, "dim=value for every fixed dim")->required();
    slice->add_option("--out", slice_out, "CSV path")->required();
    slice->add_option("--time", time, "Snapshot time (default: final)");
    slice->add_option("--source", source, "full, decomposed or auto")
        ->check(CLI::IsMember({"auto", "full", "decomposed"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*run) return run_command(scenario, out_dir, grid_scale, seed);
        if (*compare) return compare_command(a, b, options, max_mismatch);
        return slice_command(in, fixes, slice_out, time, source);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
