#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjreach/compare.hpp"
#include "hjreach/decomposition.hpp"
#include "hjreach/models.hpp"
#include "hjreach/solver.hpp"

namespace hjreach {

/// Invalid scenario document; the message starts with the offending field path.
class ScenarioError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class RunPlan { full, decomposed, both };
enum class Expectation { none, exact, over, under };

/// Axis-aligned box over some named dims; missing bounds are infinite.
struct BoxSpec {
    std::vector<std::size_t> dims;
    std::vector<double> lower;
    std::vector<double> upper;
};

struct SliceRequest {
    std::string name;
    std::map<std::size_t, double> fixed;
    std::optional<double> time;   ///< every snapshot when absent
};

/// How a built-in model splits into self-contained subsystems.
struct DecompositionSpec {
    SubsystemMapping mapping;
    std::vector<ModelPtr> sub_models;
    bool shared_control = false;
    bool shared_disturbance = false;
};

std::optional<DecompositionSpec> builtin_decomposition(const SystemModel& model);

struct ScenarioConfig {
    std::string name;
    std::string description;
    std::string model_name;
    ParameterMap params;
    ModelPtr model;
    Grid grid;
    TargetKind target_kind = TargetKind::intersection;
    std::vector<BoxSpec> boxes;
    SolveConfig solve;
    RunPlan plan = RunPlan::both;
    ReachObject object = ReachObject::brs;
    Expectation expect = Expectation::none;
    bool analytic = false;
    CompareOptions compare;
    double max_mismatch_fraction = 0.02;
    double min_strict_fraction = 0.0;
    std::size_t oracle_samples = 64;
    std::size_t oracle_spot_checks = 0;
    std::vector<SliceRequest> slices;

    const std::vector<std::string>& dim_names() const { return model->dim_names(); }
};

/// Parses and validates a scenario document. `grid_scale` rescales node counts.
ScenarioConfig parse_scenario(const std::string& text, double grid_scale = 1.0);
ScenarioConfig load_scenario(const std::filesystem::path& path, double grid_scale = 1.0);

/// Node count after refinement by `factor`, keeping the end nodes of non-periodic dims.
std::size_t scale_node_count(std::size_t nodes, bool periodic, double factor);

/// Full-space target: boxes combined per target kind.
ValueFn full_target(const ScenarioConfig& config);

/// Target of each subsystem on its projected grid, in subsystem order.
std::vector<ValueFn> subsystem_targets(const ScenarioConfig& config, const DecompositionSpec& spec);

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

struct TimedComparison {
    double time;
    ComparisonReport report;
};

struct ScenarioReport {
    std::string name;
    std::vector<double> times;
    std::vector<TimedComparison> comparisons;   ///< full (a) against decomposed (b)
    std::vector<Check> checks;
    std::optional<double> full_seconds;
    std::vector<double> subsystem_seconds;
    bool all_nonempty = true;
    bool nonempty_checked = false;
    bool subset_only = false;
    std::optional<double> analytic_error_cells;

    double decomposed_seconds() const;
    bool passed() const;
};

/**
 * Runs a scenario, writing value dumps, slices, manifest.json and
 * report.json under `out_dir`. `seed` drives the Monte-Carlo spot checks.
 */
ScenarioReport run_scenario(const ScenarioConfig& config, const std::filesystem::path& out_dir,
                            std::uint64_t seed = 0);

std::string report_to_json(const ScenarioReport& report);

}  // namespace hjreach
