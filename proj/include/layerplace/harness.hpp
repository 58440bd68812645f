#ifndef LAYERPLACE_HARNESS_HPP
#define LAYERPLACE_HARNESS_HPP

// Monte-Carlo experiment harness: sweep device mixes, transmission profiles
// and per-unit layer caps over freshly generated deployments, solve each
// trial, and aggregate latency statistics.

#include <cstdint>
#include <string>
#include <vector>

#include "layerplace/scenario.hpp"
#include "layerplace/solver.hpp"

namespace layerplace {

// Sentinel cap meaning "total layer count of the problem" (every layer can
// land on one unit). Reported under the label "C".
constexpr int kFullPipelineCap = -1;

struct ExperimentConfig {
    ScenarioParams scenario; // mix/range/rate/seed are overridden per row
    std::vector<CnnSpec> cnns;
    std::vector<SharingGroup> sharing;
    std::vector<int> layer_caps = {1};
    std::vector<TransmissionProfile> profiles;
    std::vector<DeviceMix> mixes;
    EvalConventions conventions;
    int trials = 100;
    SolverConfig solver{SolveMethod::local_search, 0, std::nullopt, 4};
    std::uint64_t master_seed = 0;
};

struct AggregateRow {
    std::string mix;
    std::string cap_label; // "1", "2", ... or "C"
    int cap = 0;           // resolved numeric cap
    std::string profile;
    std::string mode; // conventions tag

    double t_t_mean_ms = 0.0, t_t_std_ms = 0.0;
    double t_p_mean_ms = 0.0, t_p_std_ms = 0.0;
    double t_mean_ms = 0.0, t_std_ms = 0.0;
    int trials = 0;   // successful trials aggregated
    int failures = 0; // trials lost to generation failure or infeasibility
};

// One row per (mix, profile, cap), in that nesting order. Trial k of row r
// uses derive_seed(master_seed, r, k) for both generation and the solver, so
// results are reproducible row by row and independent of sweep shape edits
// only when the row order is unchanged. Failed trials (GenerationExhausted,
// Infeasible, BudgetExceeded) are counted, not fatal.
std::vector<AggregateRow> run_experiment(const ExperimentConfig& config);

enum class ReportFormat { csv, json, markdown };

ReportFormat report_format_from_string(const std::string& name);

// csv: one row per aggregate, times in ms with two decimals.
// json: full-precision array of row objects.
// markdown: per profile and mode, one table each for t_t, t_p and t with
// caps as rows and mixes as columns.
std::string emit_report(const std::vector<AggregateRow>& rows, ReportFormat format);

} // namespace layerplace

#endif
