#include "hjreach/decomposition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace hjreach {

namespace {

// Flat sub-grid offset contributed by each full dim (0 for dims the
// subsystem does not own).
std::vector<std::size_t> sub_strides(const Grid& sub_grid, const SubsystemMapping& mapping,
                                     std::size_t which) {
    std::vector<std::size_t> out(mapping.full_dim_count(), 0);
    const auto& dims = mapping.subsystem_dims(which);
    for (std::size_t k = 0; k < dims.size(); ++k) out[dims[k]] = sub_grid.stride(k);
    return out;
}

// Calls fn(full_flat, sub_flat...) walking the full grid in row-major order.
template <class Fn>
void for_each_node(const Grid& full, const std::vector<std::vector<std::size_t>>& strides, Fn fn) {
    const std::size_t dims = full.dim_count();
    const std::size_t subs = strides.size();
    std::vector<std::size_t> idx(dims, 0);
    std::vector<std::size_t> offset(subs, 0);
    for (std::size_t flat = 0; flat < full.node_count(); ++flat) {
        fn(flat, offset);
        for (std::size_t k = dims; k-- > 0;) {
            ++idx[k];
            for (std::size_t s = 0; s < subs; ++s) offset[s] += strides[s][k];
            if (idx[k] < full.node_count(k)) break;
            for (std::size_t s = 0; s < subs; ++s) offset[s] -= idx[k] * strides[s][k];
            idx[k] = 0;
        }
    }
}

void check_sub_grid(const ValueFn& v_sub, const Grid& full_grid, const SubsystemMapping& mapping,
                    std::size_t which) {
    if (full_grid.dim_count() != mapping.full_dim_count()) {
        throw DecompositionError("full grid does not match mapping dimension");
    }
    if (v_sub.grid() != project_grid(full_grid, mapping, which)) {
        throw DecompositionError("subsystem " + std::to_string(which) +
                                 " grid is not the projection of the full grid");
    }
}

}  // namespace

SubsystemMapping::SubsystemMapping(std::size_t full_dim_count,
                                   std::vector<std::vector<std::size_t>> partitions,
                                   std::vector<std::size_t> common)
    : full_dim_count_(full_dim_count), partitions_(std::move(partitions)), common_(std::move(common)) {
    if (partitions_.empty()) throw DecompositionError("mapping needs at least one partition");
    std::vector<int> seen(full_dim_count_, 0);
    auto mark = [&](const std::vector<std::size_t>& dims) {
        for (std::size_t d : dims) {
            if (d >= full_dim_count_) throw DecompositionError("mapping dim index out of range");
            if (seen[d]++) throw DecompositionError("mapping dim " + std::to_string(d) + " used twice");
        }
    };
    for (auto& part : partitions_) {
        std::sort(part.begin(), part.end());
        mark(part);
    }
    std::sort(common_.begin(), common_.end());
    mark(common_);
    for (std::size_t d = 0; d < full_dim_count_; ++d) {
        if (!seen[d]) throw DecompositionError("mapping does not cover dim " + std::to_string(d));
    }
    for (const auto& part : partitions_) {
        std::vector<std::size_t> dims = part;
        dims.insert(dims.end(), common_.begin(), common_.end());
        std::sort(dims.begin(), dims.end());
        dims_.push_back(std::move(dims));
    }
}

const std::vector<std::size_t>& SubsystemMapping::partition(std::size_t which) const {
    if (which >= partitions_.size()) throw DecompositionError("invalid subsystem index");
    return partitions_[which];
}

const std::vector<std::size_t>& SubsystemMapping::subsystem_dims(std::size_t which) const {
    if (which >= dims_.size()) throw DecompositionError("invalid subsystem index");
    return dims_[which];
}

StateVector project_state(std::span<const double> x, const SubsystemMapping& mapping,
                          std::size_t which) {
    if (x.size() != mapping.full_dim_count()) throw DecompositionError("state has wrong dimension");
    StateVector z;
    for (std::size_t d : mapping.subsystem_dims(which)) z.push_back(x[d]);
    return z;
}

Grid project_grid(const Grid& grid, const SubsystemMapping& mapping, std::size_t which) {
    if (grid.dim_count() != mapping.full_dim_count()) {
        throw DecompositionError("grid does not match mapping dimension");
    }
    std::vector<double> lo;
    std::vector<double> hi;
    std::vector<std::size_t> counts;
    std::vector<bool> periodic;
    for (std::size_t d : mapping.subsystem_dims(which)) {
        lo.push_back(grid.lower(d));
        hi.push_back(grid.upper(d));
        counts.push_back(grid.node_count(d));
        periodic.push_back(grid.periodic(d));
    }
    return Grid(lo, hi, counts, periodic);
}

ValueFn backproject_value(const ValueFn& v_sub, const Grid& full_grid,
                          const SubsystemMapping& mapping, std::size_t which) {
    check_sub_grid(v_sub, full_grid, mapping, which);
    std::vector<double> out(full_grid.node_count());
    const auto src = v_sub.values();
    for_each_node(full_grid, {sub_strides(v_sub.grid(), mapping, which)},
                  [&](std::size_t flat, const std::vector<std::size_t>& off) { out[flat] = src[off[0]]; });
    return ValueFn(full_grid, std::move(out));
}

ValueFn project_value(const ValueFn& v_full, const SubsystemMapping& mapping, std::size_t which) {
    const Grid sub = project_grid(v_full.grid(), mapping, which);
    std::vector<double> out(sub.node_count(), std::numeric_limits<double>::infinity());
    const auto src = v_full.values();
    for_each_node(v_full.grid(), {sub_strides(sub, mapping, which)},
                  [&](std::size_t flat, const std::vector<std::size_t>& off) {
                      out[off[0]] = std::min(out[off[0]], src[flat]);
                  });
    return ValueFn(sub, std::move(out));
}

ValueFn reconstruct(std::span<const ValueFn> sub_values, const Grid& full_grid,
                    const SubsystemMapping& mapping, TargetKind kind) {
    if (sub_values.size() != mapping.subsystem_count()) {
        throw DecompositionError("expected one value function per subsystem");
    }
    std::vector<std::vector<std::size_t>> strides;
    std::vector<const double*> data;
    for (std::size_t s = 0; s < sub_values.size(); ++s) {
        check_sub_grid(sub_values[s], full_grid, mapping, s);
        strides.push_back(sub_strides(sub_values[s].grid(), mapping, s));
        data.push_back(sub_values[s].values().data());
    }
    std::vector<double> out(full_grid.node_count());
    const bool inter = kind == TargetKind::intersection;
    for_each_node(full_grid, strides, [&](std::size_t flat, const std::vector<std::size_t>& off) {
        double v = data[0][off[0]];
        for (std::size_t s = 1; s < data.size(); ++s) {
            v = inter ? std::max(v, data[s][off[s]]) : std::min(v, data[s][off[s]]);
        }
        out[flat] = v;
    });
    return ValueFn(full_grid, std::move(out));
}

LazyReconstruction::LazyReconstruction(std::vector<ValueFn> sub_values, Grid full_grid,
                                       SubsystemMapping mapping, TargetKind kind)
    : subs_(std::move(sub_values)),
      full_grid_(std::move(full_grid)),
      mapping_(std::move(mapping)),
      kind_(kind) {
    if (subs_.size() != mapping_.subsystem_count()) {
        throw DecompositionError("expected one value function per subsystem");
    }
    for (std::size_t s = 0; s < subs_.size(); ++s) check_sub_grid(subs_[s], full_grid_, mapping_, s);
}

double LazyReconstruction::value_at(std::span<const double> x) const {
    double v = 0.0;
    for (std::size_t s = 0; s < subs_.size(); ++s) {
        const double vs = interpolate(subs_[s], project_state(x, mapping_, s));
        if (s == 0) {
            v = vs;
        } else {
            v = kind_ == TargetKind::intersection ? std::max(v, vs) : std::min(v, vs);
        }
    }
    return v;
}

void BrsUnionAccumulator::add(const ValueFn& snapshot) {
    if (!value_) {
        value_ = snapshot;
    } else {
        if (snapshot.grid() != value_->grid()) throw GridError("snapshot grids differ");
        auto& acc = value_->mutable_values();
        const auto src = snapshot.values();
        for (std::size_t i = 0; i < acc.size(); ++i) acc[i] = std::min(acc[i], src[i]);
    }
    if (snapshot.min_value() > 0.0) all_nonempty_ = false;
    ++count_;
}

UnionResult BrsUnionAccumulator::result(Objective objective) const {
    if (!value_) throw DecompositionError("union of an empty snapshot list");
    return {*value_, all_nonempty_, objective == Objective::minimal && !all_nonempty_};
}

UnionResult brt_from_brs_union(std::span<const ValueFn> snapshots, Objective objective) {
    BrsUnionAccumulator acc;
    for (const ValueFn& v : snapshots) acc.add(v);
    return acc.result(objective);
}

ConservativenessVerdict conservativeness(Objective objective, TargetKind target_kind,
                                         bool shared_control, bool shared_disturbance,
                                         ReachObject object) {
    using V = VerdictStatus;
    const bool maximal = objective == Objective::maximal;
    const bool inter = target_kind == TargetKind::intersection;

    switch (object) {
        case ReachObject::brs:
            if (!shared_disturbance) {
                if (!shared_control) {
                    return {V::exact,
                            inter ? "decoupled controls: intersection of subsystem BRSs is exact"
                                  : "decoupled controls: union of subsystem BRSs is exact"};
                }
                if (maximal) {
                    return inter ? ConservativenessVerdict{V::not_recoverable,
                                                           "shared control: maximal BRS of an "
                                                           "intersection target is not recoverable"}
                                 : ConservativenessVerdict{V::exact,
                                                           "shared control: maximal BRS of a union "
                                                           "target is the union of subsystem BRSs"};
                }
                return inter ? ConservativenessVerdict{V::exact,
                                                       "shared control: minimal BRS of an "
                                                       "intersection target is the intersection of "
                                                       "subsystem BRSs"}
                             : ConservativenessVerdict{V::not_recoverable,
                                                       "shared control: minimal BRS of a union "
                                                       "target is not recoverable"};
            }
            if (shared_control) {
                if (maximal) {
                    return inter ? ConservativenessVerdict{V::not_recoverable,
                                                           "shared control and disturbance: maximal "
                                                           "BRS of an intersection target is not "
                                                           "recoverable"}
                                 : ConservativenessVerdict{V::conservative_under,
                                                           "shared disturbance: union of maximal "
                                                           "subsystem BRSs under-approximates"};
                }
                return inter ? ConservativenessVerdict{V::conservative_over,
                                                       "shared disturbance: intersection of minimal "
                                                       "subsystem BRSs over-approximates"}
                             : ConservativenessVerdict{V::not_recoverable,
                                                       "shared control and disturbance: minimal BRS "
                                                       "of a union target is not recoverable"};
            }
            return maximal ? ConservativenessVerdict{V::conservative_under,
                                                     "decoupled controls, shared disturbance: "
                                                     "maximal BRS reconstruction under-approximates"}
                           : ConservativenessVerdict{V::conservative_over,
                                                     "decoupled controls, shared disturbance: "
                                                     "minimal BRS reconstruction over-approximates"};

        case ReachObject::brt_from_tubes:
            if (inter) {
                return {V::not_recoverable,
                        "intersection target: subsystem tubes do not determine the tube; use the "
                        "union of BRSs"};
            }
            if (maximal) {
                return shared_disturbance
                           ? ConservativenessVerdict{V::conservative_under,
                                                     "shared disturbance: union of maximal "
                                                     "subsystem tubes under-approximates"}
                           : ConservativenessVerdict{V::exact,
                                                     "union target: maximal tube is the union of "
                                                     "subsystem tubes"};
            }
            if (shared_control) {
                return {V::not_recoverable,
                        "shared control: minimal tube of a union target is not recoverable"};
            }
            return shared_disturbance
                       ? ConservativenessVerdict{V::conservative_over,
                                                 "decoupled controls, shared disturbance: union of "
                                                 "minimal subsystem tubes over-approximates"}
                       : ConservativenessVerdict{V::exact,
                                                 "decoupled controls: minimal tube is the union "
                                                 "of subsystem tubes"};

        case ReachObject::brt_from_sets:
            if (maximal) {
                return shared_disturbance
                           ? ConservativenessVerdict{V::conservative_under,
                                                     "shared disturbance: union over time of "
                                                     "maximal BRSs under-approximates the tube"}
                           : ConservativenessVerdict{V::exact,
                                                     "maximal tube is the union over time of "
                                                     "maximal BRSs"};
            }
            return {V::exact,
                    "minimal tube is the union over time of minimal BRSs when every BRS is nonempty",
                    true};
    }
    return {V::not_recoverable, "unknown object"};
}

ConservativenessVerdict brt_from_sets_overall(Objective objective, TargetKind target_kind,
                                              bool shared_control, bool shared_disturbance) {
    const auto sets = conservativeness(objective, target_kind, shared_control, shared_disturbance,
                                       ReachObject::brs);
    const auto tube = conservativeness(objective, target_kind, shared_control, shared_disturbance,
                                       ReachObject::brt_from_sets);
    ConservativenessVerdict out{VerdictStatus::not_recoverable, sets.citation + "; " + tube.citation,
                                sets.requires_nonempty_brs || tube.requires_nonempty_brs};
    if (sets.status == VerdictStatus::not_recoverable || tube.status == VerdictStatus::not_recoverable) {
        return out;
    }
    if (sets.status == VerdictStatus::exact) {
        out.status = tube.status;
    } else if (tube.status == VerdictStatus::exact || tube.status == sets.status) {
        out.status = sets.status;
    }
    return out;
}

const char* to_string(VerdictStatus status) {
    switch (status) {
        case VerdictStatus::exact: return "exact";
        case VerdictStatus::conservative_over: return "conservative_over";
        case VerdictStatus::conservative_under: return "conservative_under";
        case VerdictStatus::not_recoverable: return "not_recoverable";
    }
    return "?";
}

const char* to_string(TargetKind kind) {
    return kind == TargetKind::intersection ? "intersection" : "union";
}

const char* to_string(ReachObject object) {
    switch (object) {
        case ReachObject::brs: return "brs";
        case ReachObject::brt_from_tubes: return "brt_from_tubes";
        case ReachObject::brt_from_sets: return "brt_from_sets";
    }
    return "?";
}

LockstepResult lockstep_integrate(const std::vector<SubsystemProblem>& problems,
                                  const SolveConfig& config, const LockstepObserver& observer) {
    if (problems.empty()) throw DecompositionError("no subsystems to integrate");
    const auto times = snapshot_schedule(config);
    const auto start = std::chrono::steady_clock::now();

    SolveConfig sub_config = config;
    sub_config.observer = nullptr;
    std::vector<Stepper> steppers;
    steppers.reserve(problems.size());
    for (const auto& p : problems) steppers.emplace_back(p.model, p.target, sub_config);

    std::vector<const ValueFn*> current(steppers.size());
    auto notify = [&] {
        if (!observer) return;
        for (std::size_t s = 0; s < steppers.size(); ++s) current[s] = &steppers[s].value();
        observer(steppers.front().time(), current);
    };

    double h = std::numeric_limits<double>::infinity();
    for (const auto& s : steppers) h = std::min(h, s.stable_dt());

    LockstepResult result;
    result.subsystems.resize(steppers.size());
    std::vector<double> wall(steppers.size(), 0.0);
    notify();
    for (double t : times) {
        while (steppers.front().time() > t) {
            const double remaining = steppers.front().time() - t;
            const bool land = remaining <= h * (1.0 + 1e-9);
            for (std::size_t s = 0; s < steppers.size(); ++s) {
                const auto t0 = std::chrono::steady_clock::now();
                if (land) {
                    steppers[s].step_to(t);
                } else {
                    steppers[s].step(h);
                }
                wall[s] += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            }
            ++result.steps;
            notify();
        }
        for (std::size_t s = 0; s < steppers.size(); ++s) {
            result.subsystems[s].snapshots.push_back({t, steppers[s].value()});
        }
    }
    for (std::size_t s = 0; s < steppers.size(); ++s) {
        result.subsystems[s].stats = steppers[s].stats();
        result.subsystems[s].stats.wall_seconds = wall[s];
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

}  // namespace hjreach
