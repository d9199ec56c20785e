#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hjreach/dynamics.hpp"
#include "hjreach/grid.hpp"
#include "hjreach/solver.hpp"

namespace hjreach {

class DecompositionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * Partition of the full state indices {0..n-1} into disjoint parts plus an
 * optional common block shared by every subsystem. Subsystem i owns
 * part_i together with the common dims, in ascending full-state order.
 */
class SubsystemMapping {
public:
    SubsystemMapping(std::size_t full_dim_count, std::vector<std::vector<std::size_t>> partitions,
                     std::vector<std::size_t> common);

    std::size_t full_dim_count() const { return full_dim_count_; }
    std::size_t subsystem_count() const { return partitions_.size(); }
    const std::vector<std::size_t>& partition(std::size_t which) const;
    const std::vector<std::size_t>& common() const { return common_; }
    const std::vector<std::size_t>& subsystem_dims(std::size_t which) const;

private:
    std::size_t full_dim_count_;
    std::vector<std::vector<std::size_t>> partitions_;
    std::vector<std::size_t> common_;
    std::vector<std::vector<std::size_t>> dims_;
};

enum class TargetKind { intersection, union_of };

StateVector project_state(std::span<const double> x, const SubsystemMapping& mapping,
                          std::size_t which);

Grid project_grid(const Grid& grid, const SubsystemMapping& mapping, std::size_t which);

/// Cylinder over the dims the subsystem does not own.
ValueFn backproject_value(const ValueFn& v_sub, const Grid& full_grid,
                          const SubsystemMapping& mapping, std::size_t which);

/// Minimum over the removed dims.
ValueFn project_value(const ValueFn& v_full, const SubsystemMapping& mapping, std::size_t which);

/// Pointwise max (intersection) or min (union) of the back-projections.
ValueFn reconstruct(std::span<const ValueFn> sub_values, const Grid& full_grid,
                    const SubsystemMapping& mapping, TargetKind kind);

/// Anything that can be evaluated at a full-space state.
class ValueSource {
public:
    virtual ~ValueSource() = default;
    virtual const Grid& grid() const = 0;
    virtual double value_at(std::span<const double> x) const = 0;
};

class DenseSource final : public ValueSource {
public:
    explicit DenseSource(ValueFn value) : value_(std::move(value)) {}
    const Grid& grid() const override { return value_.grid(); }
    double value_at(std::span<const double> x) const override { return interpolate(value_, x); }
    const ValueFn& value() const { return value_; }

private:
    ValueFn value_;
};

/**
 * Reconstruction evaluated on demand: the max (intersection) or min (union)
 * of the subsystem values interpolated at the projected state. Holds only
 * subsystem data; `grid()` describes the full space for slicing.
 */
class LazyReconstruction final : public ValueSource {
public:
    LazyReconstruction(std::vector<ValueFn> sub_values, Grid full_grid, SubsystemMapping mapping,
                       TargetKind kind);

    const Grid& grid() const override { return full_grid_; }
    double value_at(std::span<const double> x) const override;
    const std::vector<ValueFn>& sub_values() const { return subs_; }
    const SubsystemMapping& mapping() const { return mapping_; }
    TargetKind kind() const { return kind_; }

private:
    std::vector<ValueFn> subs_;
    Grid full_grid_;
    SubsystemMapping mapping_;
    TargetKind kind_;
};

struct UnionResult {
    ValueFn value;
    bool all_nonempty = true;   ///< every input had a node with value <= 0
    bool subset_only = false;   ///< minimal role with an empty input: result may miss states
};

/// Running pointwise minimum over a sequence of set snapshots.
class BrsUnionAccumulator {
public:
    void add(const ValueFn& snapshot);
    bool empty() const { return count_ == 0; }
    std::size_t count() const { return count_; }
    UnionResult result(Objective objective) const;

private:
    std::optional<ValueFn> value_;
    std::size_t count_ = 0;
    bool all_nonempty_ = true;
};

UnionResult brt_from_brs_union(std::span<const ValueFn> snapshots, Objective objective);

enum class ReachObject { brs, brt_from_tubes, brt_from_sets };

enum class VerdictStatus { exact, conservative_over, conservative_under, not_recoverable };

/**
 * Whether decomposition recovers the requested object. conservative_over
 * means the reconstruction contains the true set; conservative_under means
 * it is contained in it.
 */
struct ConservativenessVerdict {
    VerdictStatus status;
    std::string citation;
    bool requires_nonempty_brs = false;   ///< holds only if every minimal BRS is nonempty
};

ConservativenessVerdict conservativeness(Objective objective, TargetKind target_kind,
                                         bool shared_control, bool shared_disturbance,
                                         ReachObject object);

/// Verdict for a tube built as the union of reconstructed BRSs.
ConservativenessVerdict brt_from_sets_overall(Objective objective, TargetKind target_kind,
                                              bool shared_control, bool shared_disturbance);

const char* to_string(VerdictStatus status);
const char* to_string(TargetKind kind);
const char* to_string(ReachObject object);

struct SubsystemProblem {
    ModelPtr model;
    ValueFn target;
};

/// Receives the current subsystem values at time 0 and after every common step.
using LockstepObserver = std::function<void(double, std::span<const ValueFn* const>)>;

struct LockstepResult {
    std::vector<SolveResult> subsystems;
    std::size_t steps = 0;
    double wall_seconds = 0.0;
};

/**
 * Advances one stepper per subsystem over a shared time schedule: each
 * common step uses the smallest stable step among the subsystems.
 */
LockstepResult lockstep_integrate(const std::vector<SubsystemProblem>& problems,
                                  const SolveConfig& config, const LockstepObserver& observer = {});

}  // namespace hjreach
