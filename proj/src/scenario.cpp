#include "hjreach/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hjreach/oracle.hpp"
#include "hjreach/value_io.hpp"

namespace hjreach {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ScenarioError(path + ": " + what);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed,
                const std::set<std::string>& required = {}) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) fail(path + "." + key, "unknown field");
    }
    for (const auto& key : required) {
        if (!j.contains(key)) fail(path + "." + key, "missing required field");
    }
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) fail(path, "must be finite");
    return v;
}

std::size_t count(const json& j, const std::string& path) {
    if (!j.is_number_integer() || j.get<long long>() < 0) fail(path, "expected a non-negative integer");
    return j.get<std::size_t>();
}

std::string text(const json& j, const std::string& path) {
    if (!j.is_string()) fail(path, "expected a string");
    return j.get<std::string>();
}

bool flag(const json& j, const std::string& path) {
    if (!j.is_boolean()) fail(path, "expected true or false");
    return j.get<bool>();
}

template <class E>
E choose(const json& j, const std::string& path, const std::vector<std::pair<const char*, E>>& options) {
    const auto s = text(j, path);
    std::string known;
    for (const auto& [name, value] : options) {
        if (s == name) return value;
        known += known.empty() ? name : std::string("|") + name;
    }
    fail(path, "expected one of " + known);
}

std::size_t dim_index(const std::vector<std::string>& names, const std::string& name,
                      const std::string& path) {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) fail(path, "unknown dim " + name);
    return static_cast<std::size_t>(it - names.begin());
}

// Evaluates max/min of subsystem values at a full state without copying them.
class ViewReconstruction final : public ValueSource {
public:
    ViewReconstruction(std::vector<const ValueFn*> subs, const Grid& grid,
                       const SubsystemMapping& mapping, TargetKind kind)
        : subs_(std::move(subs)), grid_(grid), mapping_(mapping), kind_(kind) {}

    const Grid& grid() const override { return grid_; }
    double value_at(std::span<const double> x) const override {
        double v = 0.0;
        for (std::size_t s = 0; s < subs_.size(); ++s) {
            const double vs = interpolate(*subs_[s], project_state(x, mapping_, s));
            v = s == 0 ? vs : kind_ == TargetKind::intersection ? std::max(v, vs) : std::min(v, vs);
        }
        return v;
    }

private:
    std::vector<const ValueFn*> subs_;
    const Grid& grid_;
    const SubsystemMapping& mapping_;
    TargetKind kind_;
};

ConservativenessVerdict scenario_verdict(const ScenarioConfig& c, const DecompositionSpec& spec) {
    const Objective obj = c.solve.role.objective;
    if (c.object == ReachObject::brt_from_sets) {
        return brt_from_sets_overall(obj, c.target_kind, spec.shared_control, spec.shared_disturbance);
    }
    return conservativeness(obj, c.target_kind, spec.shared_control, spec.shared_disturbance, c.object);
}

bool needs_full(RunPlan p) { return p != RunPlan::decomposed; }
bool needs_decomposed(RunPlan p) { return p != RunPlan::full; }

// Box bounds per full dim when the target is an intersection of boxes.
void target_box(const ScenarioConfig& c, std::vector<double>& lo, std::vector<double>& hi) {
    const std::size_t n = c.grid.dim_count();
    lo.assign(n, -kInf);
    hi.assign(n, kInf);
    for (const auto& box : c.boxes) {
        for (std::size_t k = 0; k < box.dims.size(); ++k) {
            lo[box.dims[k]] = std::max(lo[box.dims[k]], box.lower[k]);
            hi[box.dims[k]] = std::min(hi[box.dims[k]], box.upper[k]);
        }
    }
}

std::string tag(std::size_t k) { return std::to_string(k); }

json grid_json(const Grid& g) {
    return {{"lower", g.lower()},
            {"upper", g.upper()},
            {"node_counts", g.node_counts()},
            {"periodic", g.periodic()}};
}

json comparison_json(const ComparisonReport& r) {
    return {{"interior_nodes", r.interior_nodes},
            {"mismatch_count", r.mismatch_count},
            {"sign_mismatch_fraction", r.sign_mismatch_fraction},
            {"mismatches_outside_band", r.mismatches_outside_band},
            {"band_nodes", r.band_nodes},
            {"max_abs_diff", r.max_abs_diff},
            {"a_in_b", r.a_in_b},
            {"b_in_a", r.b_in_a},
            {"a_not_in_b", r.a_not_in_b},
            {"b_not_in_a", r.b_not_in_a},
            {"strict_b_only_fraction", r.strict_b_only_fraction},
            {"strict_a_only_fraction", r.strict_a_only_fraction}};
}

std::string format(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::optional<DecompositionSpec> builtin_decomposition(const SystemModel& model) {
    const std::string& name = model.name();
    const auto& params = model.parameters();
    if (name == "dubins3d") {
        return DecompositionSpec{SubsystemMapping(3, {{0}, {1}}, {2}),
                                 {make_model("dubins_sub_x", params), make_model("dubins_sub_y", params)},
                                 true,
                                 model.parameter("dstb_theta") > 0.0};
    }
    if (name == "quad6d") {
        return DecompositionSpec{SubsystemMapping(6, {{0, 1}, {2, 3}}, {4, 5}),
                                 {make_model("quad6d_sub_x", params), make_model("quad6d_sub_y", params)},
                                 true,
                                 false};
    }
    if (name == "quad10d") {
        return DecompositionSpec{
            SubsystemMapping(10, {{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9}}, {}),
            {make_model("quad10d_sub_x", params), make_model("quad10d_sub_y", params),
             make_model("quad10d_sub_z", params)},
            false,
            false};
    }
    if (name == "single_integrator" || name == "advection") {
        const bool integrator = name == "single_integrator";
        const std::string key = integrator ? "ubar" : "velocity";
        const std::size_t n = model.dim_count();
        std::vector<std::vector<std::size_t>> parts;
        std::vector<ModelPtr> subs;
        const std::vector<double> origin(n, 0.0);
        const auto drift = integrator ? std::vector<double>{} : model.flow(origin, {});
        for (std::size_t i = 0; i < n; ++i) {
            parts.push_back({i});
            const double rate = integrator ? model.control_bounds()[i].hi : drift[i];
            subs.push_back(make_model(name, {{"dim_count", 1.0}, {key, rate}}));
        }
        return DecompositionSpec{SubsystemMapping(n, parts, {}), subs, false, false};
    }
    return std::nullopt;
}

std::size_t scale_node_count(std::size_t nodes, bool periodic, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw ScenarioError("grid scale must be positive");
    const double scaled = periodic ? std::round(static_cast<double>(nodes) * factor)
                                   : std::round(static_cast<double>(nodes - 1) * factor) + 1.0;
    return std::max<std::size_t>(3, static_cast<std::size_t>(scaled));
}

ScenarioConfig parse_scenario(const std::string& source, double grid_scale) {
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::exception& e) {
        throw ScenarioError(std::string("document: malformed JSON: ") + e.what());
    }
    check_keys(doc,
               "scenario",
               {"schema", "name", "description", "model", "grid", "target", "solve", "plan",
                "reconstruct", "compare", "oracle", "slices"},
               {"schema", "name", "model", "grid", "target", "solve"});
    if (!doc["schema"].is_number_integer() || doc["schema"].get<int>() != 1) {
        fail("scenario.schema", "only schema 1 is supported");
    }

    ScenarioConfig c;
    c.name = text(doc["name"], "scenario.name");
    if (c.name.empty() || c.name.find_first_of("/\\") != std::string::npos) {
        fail("scenario.name", "must be a plain non-empty name");
    }
    if (doc.contains("description")) c.description = text(doc["description"], "scenario.description");

    const json& m = doc["model"];
    check_keys(m, "scenario.model", {"name", "params"}, {"name"});
    c.model_name = text(m["name"], "scenario.model.name");
    if (m.contains("params")) {
        if (!m["params"].is_object()) fail("scenario.model.params", "expected an object");
        for (const auto& [key, value] : m["params"].items()) {
            c.params[key] = number(value, "scenario.model.params." + key);
        }
    }
    try {
        c.model = make_model(c.model_name, c.params);
    } catch (const ModelError& e) {
        fail("scenario.model", e.what());
    }
    const auto& names = c.model->dim_names();
    const auto periodic = c.model->periodic_dims();

    const json& g = doc["grid"];
    std::set<std::string> grid_keys(names.begin(), names.end());
    check_keys(g, "scenario.grid", grid_keys, grid_keys);
    std::vector<double> lo, hi;
    std::vector<std::size_t> counts;
    for (std::size_t d = 0; d < names.size(); ++d) {
        const std::string path = "scenario.grid." + names[d];
        const json& axis = g[names[d]];
        check_keys(axis, path, {"lower", "upper", "nodes"}, {"lower", "upper", "nodes"});
        lo.push_back(number(axis["lower"], path + ".lower"));
        hi.push_back(number(axis["upper"], path + ".upper"));
        const std::size_t n = count(axis["nodes"], path + ".nodes");
        if (n < 3) fail(path + ".nodes", "must be at least 3");
        counts.push_back(grid_scale == 1.0 ? n : scale_node_count(n, periodic[d], grid_scale));
        if (!(lo.back() < hi.back())) fail(path, "lower must be below upper");
    }
    c.grid = Grid(lo, hi, counts, periodic);

    const json& t = doc["target"];
    check_keys(t, "scenario.target", {"kind", "boxes"}, {"kind", "boxes"});
    c.target_kind = choose<TargetKind>(t["kind"], "scenario.target.kind",
                                       {{"intersection", TargetKind::intersection},
                                        {"union", TargetKind::union_of}});
    if (!t["boxes"].is_array() || t["boxes"].empty()) {
        fail("scenario.target.boxes", "expected a non-empty array");
    }
    for (std::size_t b = 0; b < t["boxes"].size(); ++b) {
        const std::string path = "scenario.target.boxes[" + std::to_string(b) + "]";
        const json& box = t["boxes"][b];
        check_keys(box, path, grid_keys);
        if (box.empty()) fail(path, "box constrains no dims");
        BoxSpec spec;
        for (std::size_t d = 0; d < names.size(); ++d) {
            if (!box.contains(names[d])) continue;
            const std::string bpath = path + "." + names[d];
            check_keys(box[names[d]], bpath, {"lower", "upper"});
            const double blo = box[names[d]].contains("lower") ? number(box[names[d]]["lower"], bpath + ".lower") : -kInf;
            const double bhi = box[names[d]].contains("upper") ? number(box[names[d]]["upper"], bpath + ".upper") : kInf;
            if (std::isinf(blo) && std::isinf(bhi)) fail(bpath, "needs a lower or upper bound");
            if (!(blo <= bhi)) fail(bpath, "lower must not exceed upper");
            spec.dims.push_back(d);
            spec.lower.push_back(blo);
            spec.upper.push_back(bhi);
        }
        c.boxes.push_back(std::move(spec));
    }

    const json& s = doc["solve"];
    check_keys(s, "scenario.solve", {"horizon", "role", "cfl", "time_scheme", "snapshots", "max_dt"},
               {"horizon", "role"});
    c.solve.horizon = number(s["horizon"], "scenario.solve.horizon");
    if (c.solve.horizon > 0.0) fail("scenario.solve.horizon", "must be <= 0");
    c.solve.role.objective = choose<Objective>(s["role"], "scenario.solve.role",
                                               {{"maximal", Objective::maximal},
                                                {"minimal", Objective::minimal}});
    c.solve.role.disturbance_present = c.model->has_disturbance();
    if (s.contains("cfl")) {
        c.solve.cfl = number(s["cfl"], "scenario.solve.cfl");
        if (!(c.solve.cfl > 0.0 && c.solve.cfl <= 1.0)) fail("scenario.solve.cfl", "must lie in (0, 1]");
    }
    if (s.contains("time_scheme")) {
        c.solve.time_scheme = choose<TimeScheme>(s["time_scheme"], "scenario.solve.time_scheme",
                                                 {{"euler", TimeScheme::euler},
                                                  {"tvd_rk2", TimeScheme::tvd_rk2}});
    }
    if (s.contains("max_dt")) {
        c.solve.max_dt = number(s["max_dt"], "scenario.solve.max_dt");
        if (!(c.solve.max_dt > 0.0)) fail("scenario.solve.max_dt", "must be positive");
    }
    if (s.contains("snapshots")) {
        if (!s["snapshots"].is_array()) fail("scenario.solve.snapshots", "expected an array");
        for (std::size_t k = 0; k < s["snapshots"].size(); ++k) {
            c.solve.snapshot_times.push_back(
                number(s["snapshots"][k], "scenario.solve.snapshots[" + std::to_string(k) + "]"));
        }
    }
    std::vector<double> times;
    try {
        times = snapshot_schedule(c.solve);
    } catch (const SolverError& e) {
        fail("scenario.solve.snapshots", e.what());
    }

    if (doc.contains("plan")) {
        c.plan = choose<RunPlan>(doc["plan"], "scenario.plan",
                                 {{"full", RunPlan::full},
                                  {"decomposed", RunPlan::decomposed},
                                  {"both", RunPlan::both}});
    }
    if (doc.contains("reconstruct")) {
        c.object = choose<ReachObject>(doc["reconstruct"], "scenario.reconstruct",
                                       {{"brs", ReachObject::brs},
                                        {"brt_from_tubes", ReachObject::brt_from_tubes},
                                        {"brt_from_sets", ReachObject::brt_from_sets}});
    }
    if (needs_full(c.plan) && c.grid.dim_count() > 4) {
        fail("scenario.plan", "a full solve needs at most 4 dims");
    }

    if (doc.contains("compare")) {
        const json& cmp = doc["compare"];
        check_keys(cmp, "scenario.compare",
                   {"expect", "analytic", "band", "band_cells", "boundary_skip",
                    "max_mismatch_fraction", "min_strict_fraction"});
        if (cmp.contains("expect")) {
            c.expect = choose<Expectation>(cmp["expect"], "scenario.compare.expect",
                                           {{"none", Expectation::none},
                                            {"exact", Expectation::exact},
                                            {"over", Expectation::over},
                                            {"under", Expectation::under}});
        }
        if (cmp.contains("analytic")) c.analytic = flag(cmp["analytic"], "scenario.compare.analytic");
        if (cmp.contains("band")) c.compare.band = number(cmp["band"], "scenario.compare.band");
        if (cmp.contains("band_cells")) c.compare.band_cells = count(cmp["band_cells"], "scenario.compare.band_cells");
        if (cmp.contains("boundary_skip")) {
            c.compare.boundary_skip = count(cmp["boundary_skip"], "scenario.compare.boundary_skip");
        }
        if (cmp.contains("max_mismatch_fraction")) {
            c.max_mismatch_fraction = number(cmp["max_mismatch_fraction"], "scenario.compare.max_mismatch_fraction");
        }
        if (cmp.contains("min_strict_fraction")) {
            c.min_strict_fraction = number(cmp["min_strict_fraction"], "scenario.compare.min_strict_fraction");
        }
    }

    if (doc.contains("oracle")) {
        check_keys(doc["oracle"], "scenario.oracle", {"samples", "spot_checks"});
        if (doc["oracle"].contains("samples")) c.oracle_samples = count(doc["oracle"]["samples"], "scenario.oracle.samples");
        if (doc["oracle"].contains("spot_checks")) {
            c.oracle_spot_checks = count(doc["oracle"]["spot_checks"], "scenario.oracle.spot_checks");
        }
    }

    if (doc.contains("slices")) {
        if (!doc["slices"].is_array()) fail("scenario.slices", "expected an array");
        std::set<std::string> seen;
        for (std::size_t k = 0; k < doc["slices"].size(); ++k) {
            const std::string path = "scenario.slices[" + std::to_string(k) + "]";
            const json& sl = doc["slices"][k];
            check_keys(sl, path, {"name", "fix", "time"}, {"name", "fix"});
            SliceRequest req;
            req.name = text(sl["name"], path + ".name");
            if (req.name.empty() || !seen.insert(req.name).second) fail(path + ".name", "must be unique and non-empty");
            check_keys(sl["fix"], path + ".fix", grid_keys);
            for (const auto& [dim, value] : sl["fix"].items()) {
                const std::size_t d = dim_index(names, dim, path + ".fix");
                const double v = number(value, path + ".fix." + dim);
                if (!periodic[d] && (v < c.grid.lower(d) || v > c.grid.upper(d))) {
                    fail(path + ".fix." + dim, "outside the grid");
                }
                req.fixed[d] = v;
            }
            if (req.fixed.size() == names.size()) fail(path + ".fix", "leaves no free dims");
            if (sl.contains("time")) {
                req.time = number(sl["time"], path + ".time");
                if (std::find(times.begin(), times.end(), *req.time) == times.end()) {
                    fail(path + ".time", "not one of the snapshot times");
                }
            }
            c.slices.push_back(std::move(req));
        }
    }

    // Cross-field rules.
    if (needs_decomposed(c.plan)) {
        const auto spec = builtin_decomposition(*c.model);
        if (!spec) fail("scenario.plan", "model " + c.model_name + " has no built-in decomposition");
        const auto verdict = scenario_verdict(c, *spec);
        if (verdict.status == VerdictStatus::not_recoverable) {
            fail("scenario.reconstruct", std::string("decomposition cannot recover this object (") +
                                             verdict.citation + ")");
        }
        const VerdictStatus wanted = c.expect == Expectation::exact ? VerdictStatus::exact
                                     : c.expect == Expectation::over ? VerdictStatus::conservative_over
                                                                     : VerdictStatus::conservative_under;
        if (c.expect != Expectation::none && verdict.status != wanted) {
            fail("scenario.compare.expect", std::string("the decomposition is ") + to_string(verdict.status) +
                                                " here (" + verdict.citation + ")");
        }
        subsystem_targets(c, *spec);   // validates box placement
    }
    if (c.expect != Expectation::none && c.plan != RunPlan::both) {
        fail("scenario.compare.expect", "comparisons need plan \"both\"");
    }
    if (c.analytic) {
        if (c.model_name != "single_integrator" && c.model_name != "advection") {
            fail("scenario.compare.analytic", "closed-form sets exist only for the linear test models");
        }
        if (c.target_kind != TargetKind::intersection) {
            fail("scenario.compare.analytic", "closed-form sets need an intersection target");
        }
        if (c.object != ReachObject::brs) fail("scenario.compare.analytic", "closed-form sets are BRSs");
    }
    if (c.oracle_spot_checks > 0 && !(c.analytic && needs_full(c.plan))) {
        fail("scenario.oracle.spot_checks", "spot checks need an analytic comparison and a full solve");
    }
    return c;
}

ScenarioConfig load_scenario(const fs::path& path, double grid_scale) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path.string() + ": cannot open");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), grid_scale);
}

ValueFn full_target(const ScenarioConfig& config) {
    std::optional<ValueFn> out;
    for (const auto& box : config.boxes) {
        ValueFn v = signed_box(config.grid, box.dims, box.lower, box.upper);
        if (!out) {
            out = std::move(v);
        } else {
            out = config.target_kind == TargetKind::intersection ? set_intersection(*out, v)
                                                                 : set_union(*out, v);
        }
    }
    return *out;
}

std::vector<ValueFn> subsystem_targets(const ScenarioConfig& config, const DecompositionSpec& spec) {
    const auto& mapping = spec.mapping;
    std::vector<std::optional<ValueFn>> out(mapping.subsystem_count());
    for (std::size_t b = 0; b < config.boxes.size(); ++b) {
        const auto& box = config.boxes[b];
        const std::string path = "scenario.target.boxes[" + std::to_string(b) + "]";
        std::vector<std::size_t> owners;
        for (std::size_t s = 0; s < mapping.subsystem_count(); ++s) {
            const auto& dims = mapping.subsystem_dims(s);
            const bool inside = std::all_of(box.dims.begin(), box.dims.end(), [&](std::size_t d) {
                return std::find(dims.begin(), dims.end(), d) != dims.end();
            });
            if (inside) owners.push_back(s);
        }
        if (owners.size() != 1) {
            fail(path, owners.empty() ? "box spans several subsystems"
                                      : "box touches only shared dims, so no single subsystem owns it");
        }
        const std::size_t s = owners.front();
        if (out[s]) fail(path, "a second box for subsystem " + std::to_string(s));
        const auto& dims = mapping.subsystem_dims(s);
        std::vector<std::size_t> local;
        for (std::size_t d : box.dims) {
            local.push_back(static_cast<std::size_t>(std::find(dims.begin(), dims.end(), d) - dims.begin()));
        }
        const Grid sub_grid = project_grid(config.grid, mapping, s);
        if (sub_grid.periodic() != spec.sub_models[s]->periodic_dims()) {
            fail("scenario.grid", "subsystem periodicity differs from the projected grid");
        }
        out[s] = signed_box(sub_grid, local, box.lower, box.upper);
    }
    std::vector<ValueFn> targets;
    for (std::size_t s = 0; s < out.size(); ++s) {
        if (!out[s]) fail("scenario.target.boxes", "subsystem " + std::to_string(s) + " has no box");
        targets.push_back(std::move(*out[s]));
    }
    return targets;
}

double ScenarioReport::decomposed_seconds() const {
    double total = 0.0;
    for (double s : subsystem_seconds) total += s;
    return total;
}

bool ScenarioReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

ScenarioReport run_scenario(const ScenarioConfig& config, const fs::path& out_dir, std::uint64_t seed) {
    fs::create_directories(out_dir);
    ScenarioReport report;
    report.name = config.name;
    report.times = snapshot_schedule(config.solve);
    const auto& times = report.times;
    const Grid& grid = config.grid;
    const bool dense = grid.dim_count() <= 4;
    const auto& names = config.dim_names();
    const Objective objective = config.solve.role.objective;

    json manifest;
    manifest["name"] = config.name;
    manifest["dim_names"] = names;
    manifest["grid"] = grid_json(grid);
    manifest["times"] = times;
    manifest["target_kind"] = to_string(config.target_kind);
    manifest["reconstruct"] = to_string(config.object);

    SolveConfig solve = config.solve;
    solve.observer = nullptr;
    solve.mode = config.object == ReachObject::brs ? SolveMode::set : SolveMode::tube;

    // Full-dimensional solve.
    std::vector<ValueFn> full_values;
    if (needs_full(config.plan)) {
        const SolveResult res = integrate(config.model, full_target(config), solve);
        report.full_seconds = res.stats.wall_seconds;
        json dumps = json::array();
        for (std::size_t k = 0; k < res.snapshots.size(); ++k) {
            full_values.push_back(res.snapshots[k].value);
            const std::string file = "full_" + tag(k) + ".json";
            save_value(out_dir / file, full_values.back(), names);
            dumps.push_back(file);
        }
        manifest["full"] = dumps;
    }

    // Decomposed solve.
    std::vector<std::vector<ValueFn>> sub_values;    // [subsystem][time]
    std::vector<ValueFn> recon_values;               // dense reconstruction per time
    std::map<std::size_t, std::vector<ValueFn>> tube_slices;   // slice -> per time (lazy tubes)
    std::optional<DecompositionSpec> spec;
    if (needs_decomposed(config.plan)) {
        spec = builtin_decomposition(*config.model);
        const auto targets = subsystem_targets(config, *spec);
        const auto& mapping = spec->mapping;
        sub_values.resize(mapping.subsystem_count());

        if (config.object != ReachObject::brt_from_sets) {
            for (std::size_t s = 0; s < mapping.subsystem_count(); ++s) {
                const SolveResult res = integrate(spec->sub_models[s], targets[s], solve);
                report.subsystem_seconds.push_back(res.stats.wall_seconds);
                for (const auto& snap : res.snapshots) sub_values[s].push_back(snap.value);
            }
            if (dense) {
                for (std::size_t k = 0; k < times.size(); ++k) {
                    std::vector<ValueFn> at;
                    for (auto& per_time : sub_values) at.push_back(per_time[k]);
                    recon_values.push_back(reconstruct(at, grid, mapping, config.target_kind));
                }
            }
        } else {
            SolveConfig sets = solve;
            sets.mode = SolveMode::set;
            std::vector<SubsystemProblem> problems;
            for (std::size_t s = 0; s < mapping.subsystem_count(); ++s) {
                problems.push_back({spec->sub_models[s], targets[s]});
            }
            BrsUnionAccumulator acc;
            std::map<std::size_t, ValueFn> slice_acc;
            std::size_t next = 0;
            report.nonempty_checked = dense;
            auto observe = [&](double time, std::span<const ValueFn* const> current) {
                const bool snap = next < times.size() && time == times[next];
                if (dense) {
                    std::vector<ValueFn> at;
                    for (const ValueFn* v : current) at.push_back(*v);
                    acc.add(reconstruct(at, grid, mapping, config.target_kind));
                    if (snap) recon_values.push_back(acc.result(objective).value);
                } else {
                    ViewReconstruction view({current.begin(), current.end()}, grid, mapping,
                                            config.target_kind);
                    for (std::size_t i = 0; i < config.slices.size(); ++i) {
                        ValueFn sample = sample_slice(view, config.slices[i].fixed);
                        auto it = slice_acc.find(i);
                        if (it == slice_acc.end()) {
                            it = slice_acc.emplace(i, std::move(sample)).first;
                        } else {
                            auto& dst = it->second.mutable_values();
                            for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = std::min(dst[j], sample[j]);
                        }
                        if (snap) tube_slices[i].push_back(it->second);
                    }
                }
                if (snap) ++next;
            };
            const LockstepResult res = lockstep_integrate(problems, sets, observe);
            for (std::size_t s = 0; s < res.subsystems.size(); ++s) {
                report.subsystem_seconds.push_back(res.subsystems[s].stats.wall_seconds);
                for (const auto& snap : res.subsystems[s].snapshots) sub_values[s].push_back(snap.value);
            }
            if (dense) {
                const UnionResult u = acc.result(objective);
                report.all_nonempty = u.all_nonempty;
                report.subset_only = u.subset_only;
            }
        }

        json subs = json::array();
        for (std::size_t s = 0; s < sub_values.size(); ++s) {
            std::vector<std::string> sub_names;
            for (std::size_t d : mapping.subsystem_dims(s)) sub_names.push_back(names[d]);
            json files = json::array();
            for (std::size_t k = 0; k < sub_values[s].size(); ++k) {
                const std::string file = "sub" + tag(s) + "_" + tag(k) + ".json";
                save_value(out_dir / file, sub_values[s][k], sub_names);
                files.push_back(file);
            }
            subs.push_back({{"model", spec->sub_models[s]->name()},
                            {"dims", mapping.subsystem_dims(s)},
                            {"values", files}});
        }
        manifest["subsystems"] = subs;
        manifest["subsystem_values"] = config.object == ReachObject::brt_from_sets ? "brs"
                                       : config.object == ReachObject::brs        ? "brs"
                                                                                  : "tube";
        json parts = json::array();
        for (std::size_t s = 0; s < mapping.subsystem_count(); ++s) parts.push_back(mapping.partition(s));
        manifest["mapping"] = {{"partitions", parts}, {"common", mapping.common()}};
        if (!recon_values.empty()) {
            json files = json::array();
            for (std::size_t k = 0; k < recon_values.size(); ++k) {
                const std::string file = "decomposed_" + tag(k) + ".json";
                save_value(out_dir / file, recon_values[k], names);
                files.push_back(file);
            }
            manifest["decomposed"] = files;
        }
        const auto verdict = scenario_verdict(config, *spec);
        manifest["verdict"] = {{"status", to_string(verdict.status)},
                               {"citation", verdict.citation},
                               {"requires_nonempty_brs", verdict.requires_nonempty_brs}};
        if (verdict.requires_nonempty_brs && objective == Objective::minimal && report.nonempty_checked) {
            report.checks.push_back({"nonempty_minimal_brs", report.all_nonempty,
                                     report.all_nonempty ? "every reconstructed BRS has a node <= 0"
                                                         : "some reconstructed BRS is empty; union is subset-only"});
        }
    }

    // Full against decomposed.
    if (config.plan == RunPlan::both) {
        for (std::size_t k = 0; k < times.size(); ++k) {
            report.comparisons.push_back({times[k], compare_values(full_values[k], recon_values[k], config.compare)});
        }
        const ComparisonReport& last = report.comparisons.back().report;
        switch (config.expect) {
            case Expectation::exact:
                report.checks.push_back({"sign_mismatch_fraction",
                                         last.sign_mismatch_fraction <= config.max_mismatch_fraction,
                                         format(last.sign_mismatch_fraction) + " <= " +
                                             format(config.max_mismatch_fraction)});
                report.checks.push_back({"mismatches_near_zero_level", last.mismatches_outside_band == 0,
                                         std::to_string(last.mismatches_outside_band) +
                                             " mismatching nodes farther than " +
                                             std::to_string(config.compare.band_cells) + " cells"});
                break;
            case Expectation::over:
                report.checks.push_back({"full_within_decomposed", last.a_in_b,
                                         std::to_string(last.a_not_in_b) + " full-set nodes outside"});
                report.checks.push_back({"strict_over_fraction",
                                         last.strict_b_only_fraction >= config.min_strict_fraction,
                                         format(last.strict_b_only_fraction) + " >= " +
                                             format(config.min_strict_fraction)});
                break;
            case Expectation::under:
                report.checks.push_back({"decomposed_within_full", last.b_in_a,
                                         std::to_string(last.b_not_in_a) + " decomposed-set nodes outside"});
                report.checks.push_back({"strict_under_fraction",
                                         last.strict_a_only_fraction >= config.min_strict_fraction,
                                         format(last.strict_a_only_fraction) + " >= " +
                                             format(config.min_strict_fraction)});
                break;
            case Expectation::none:
                break;
        }
    }

    // Closed-form comparison for the linear models.
    if (config.analytic) {
        std::vector<double> lo, hi;
        target_box(config, lo, hi);
        LinearParams params;
        const std::size_t n = grid.dim_count();
        if (config.model_name == "advection") {
            params.kind = LinearParams::Kind::advection;
            params.rate = config.model->flow(std::vector<double>(n, 0.0), {});
        } else {
            for (const auto& iv : config.model->control_bounds()) params.rate.push_back(iv.hi);
        }
        const AnalyticBrs exact = analytic_linear_brs(grid, params, lo, hi, times.back(), objective);
        auto exact_at = [&](std::span<const double> x) {
            double v = -kInf;
            for (std::size_t i = 0; i < n; ++i) v = std::max({v, exact.lower[i] - x[i], x[i] - exact.upper[i]});
            return v;
        };
        double worst = 0.0;
        if (!full_values.empty()) worst = std::max(worst, zero_crossing_error(full_values.back(), exact_at, config.compare.boundary_skip));
        if (!recon_values.empty()) worst = std::max(worst, zero_crossing_error(recon_values.back(), exact_at, config.compare.boundary_skip));
        report.analytic_error_cells = worst / grid.max_spacing();
        report.checks.push_back({"analytic_zero_crossings", *report.analytic_error_cells <= 1.5,
                                 format(*report.analytic_error_cells) + " cells <= 1.5"});
        save_value(out_dir / "analytic.json", exact.value, names);
        manifest["analytic"] = "analytic.json";

        if (config.oracle_spot_checks > 0) {
            const ValueFn& solved = full_values.back();
            const ValueFn target = full_target(config);
            const double margin = 2.0 * grid.max_spacing();
            const auto mask = interior_mask(grid, config.compare.boundary_skip);
            std::vector<std::size_t> inside, outside;
            for (std::size_t i = 0; i < grid.node_count(); ++i) {
                if (!mask[i]) continue;
                if (solved[i] <= -margin) inside.push_back(i);
                if (exact.value[i] >= margin) outside.push_back(i);
            }
            std::mt19937_64 rng(seed);
            std::size_t failures = 0;
            std::size_t tried = 0;
            auto probe = [&](std::vector<std::size_t>& pool, bool member) {
                std::shuffle(pool.begin(), pool.end(), rng);
                for (std::size_t j = 0; j < std::min(pool.size(), config.oracle_spot_checks); ++j) {
                    const McResult r = mc_reach_check(*config.model, grid.node_state(pool[j]), target,
                                                      times.back(), objective, config.oracle_samples,
                                                      seed + tried, {});
                    ++tried;
                    // Maximal: members have a witness. Minimal: members have no counterexample.
                    const bool expected = objective == Objective::maximal ? member : !member;
                    if (r.found != expected) ++failures;
                }
            };
            probe(inside, true);
            probe(outside, false);
            report.checks.push_back({"monte_carlo_spot_checks", failures == 0,
                                     std::to_string(failures) + " of " + std::to_string(tried) +
                                         " spot checks disagree"});
        }
    }

    // Slices.
    json slice_files = json::array();
    auto emit = [&](const SliceRequest& req, const std::string& source_name, std::size_t k,
                    const ValueSource& source) {
        const std::string file = "slices/" + req.name + "_" + source_name + "_" + tag(k) + ".csv";
        export_slice(source, req.fixed, names, out_dir / file);
        slice_files.push_back({{"name", req.name}, {"source", source_name}, {"time", times[k]}, {"file", file}});
    };
    std::vector<std::vector<ValueFn>> checked_slices(config.slices.size());
    for (std::size_t i = 0; i < config.slices.size(); ++i) {
        const auto& req = config.slices[i];
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (req.time && *req.time != times[k]) continue;
            if (!full_values.empty()) emit(req, "full", k, DenseSource(full_values[k]));
            if (!needs_decomposed(config.plan)) continue;
            if (!recon_values.empty()) {
                emit(req, "decomposed", k, DenseSource(recon_values[k]));
            } else if (config.object == ReachObject::brt_from_sets) {
                const ValueFn& sl = tube_slices.at(i)[k];
                const std::string file = "slices/" + req.name + "_decomposed_" + tag(k) + ".csv";
                std::vector<std::string> free_names;
                for (std::size_t d : free_dims(grid.dim_count(), req.fixed)) free_names.push_back(names[d]);
                write_slice_csv(out_dir / file, sl, free_names);
                slice_files.push_back({{"name", req.name}, {"source", "decomposed"}, {"time", times[k]}, {"file", file}});
                checked_slices[i].push_back(sl);
            } else {
                std::vector<ValueFn> at;
                for (auto& per_time : sub_values) at.push_back(per_time[k]);
                const LazyReconstruction lazy(std::move(at), grid, spec->mapping, config.target_kind);
                checked_slices[i].push_back(sample_slice(lazy, req.fixed));
                emit(req, "decomposed", k, lazy);
            }
        }
    }
    manifest["slices"] = slice_files;

    // Tube slices grow with |t|: each set contains the one before it.
    if (config.object != ReachObject::brs) {
        for (std::size_t i = 0; i < config.slices.size(); ++i) {
            const auto& seq = checked_slices[i];
            if (seq.size() < 2) continue;
            std::size_t violations = 0;
            for (std::size_t k = 1; k < seq.size(); ++k) {
                for (std::size_t j = 0; j < seq[k].size(); ++j) {
                    if (seq[k - 1][j] <= 0.0 && seq[k][j] > 0.0) ++violations;
                }
            }
            report.checks.push_back({"slices_nested_" + config.slices[i].name, violations == 0,
                                     std::to_string(violations) + " nodes leave the tube as |t| grows"});
        }
    }

    {
        std::ofstream out(out_dir / "manifest.json");
        out << manifest.dump(2) << '\n';
    }
    {
        std::ofstream out(out_dir / "report.json");
        out << report_to_json(report) << '\n';
    }
    return report;
}

std::string report_to_json(const ScenarioReport& report) {
    json j;
    j["name"] = report.name;
    j["times"] = report.times;
    j["passed"] = report.passed();
    json checks = json::array();
    for (const auto& c : report.checks) {
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    j["checks"] = checks;
    json cmp = json::array();
    for (const auto& c : report.comparisons) {
        json entry = comparison_json(c.report);
        entry["time"] = c.time;
        cmp.push_back(entry);
    }
    j["comparisons"] = cmp;
    j["timing"] = {{"full_seconds", report.full_seconds ? json(*report.full_seconds) : json(nullptr)},
                   {"subsystem_seconds", report.subsystem_seconds},
                   {"decomposed_seconds", report.decomposed_seconds()}};
    if (report.full_seconds && report.decomposed_seconds() > 0.0) {
        j["timing"]["speedup"] = *report.full_seconds / report.decomposed_seconds();
    }
    j["nonempty"] = {{"checked", report.nonempty_checked},
                     {"all_nonempty", report.all_nonempty},
                     {"subset_only", report.subset_only}};
    if (report.analytic_error_cells) j["analytic_error_cells"] = *report.analytic_error_cells;
    return j.dump(2);
}

}  // namespace hjreach
