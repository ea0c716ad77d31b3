#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "transid/bounds.hpp"
#include "transid/control.hpp"
#include "transid/datamat.hpp"
#include "transid/engine.hpp"

namespace transid {

/// A simulated transfer-identification run: random stable truth, perturbed
/// similar system, abundant similar data and a single true-system trajectory.
struct ExperimentConfig {
    int n = 2;
    int m = 1;  // 0 selects the autonomous variant
    double sigma = 0.05;
    Distribution distribution = Distribution::uniform;
    std::uint64_t seed = 0;
    int similar_length = 300;   // similar-system snapshots
    int segment_length = 10;    // similar data restart from a fresh state this often
    int extra_true_steps = 5;   // true trajectory length is n+m plus this
    double truth_radius = 0.9;
    RankPolicy policy{};
};

struct ExperimentSetup {
    ExperimentConfig config;
    LinearModel truth;
    LinearModel similar;
    StackedData similar_data;
    Trajectory true_trajectory;
};

ExperimentSetup make_experiment(const ExperimentConfig& config);

/// One row of the per-step trace. Truth-dependent fields are set only when the
/// true system is known.
struct TraceRow {
    int step = 0;
    int mu = 0;
    double d_to_similar = 0.0;
    bool fresh = false;
    int data_rank = 0;
    std::optional<double> d_to_truth;
    std::optional<double> frob_err_truth;
    std::optional<BoundReport> bounds;
};

struct RunResult {
    std::vector<TraceRow> trace;
    LinearModel final_model;
    bool completed = false;
    int steps = 0;
};

/// Pushes the true trajectory through an identifier built from `similar_data`
/// until completion or until the data run out. When `truth` is given, the
/// truth-side distances and (if `with_bounds`) the parameter bounds are filled.
RunResult run_identification(const StackedData& similar_data, const Trajectory& true_data,
                             const RankPolicy& policy, const LinearModel* truth = nullptr,
                             bool with_bounds = false);

RunResult run_experiment(const ExperimentSetup& setup, bool with_bounds = false);

/// Scalar summary of one run, used by the batch runners and the property suites.
struct ExperimentSummary {
    std::uint64_t seed = 0;
    int n = 0;
    int m = 0;
    bool completed = false;
    int steps = 0;
    int fresh_steps = 0;
    bool dims_preserved = true;     // dim(H_i) = n+m at every step
    double max_similar_drop = 0.0;  // largest decrease of d(S, H_i)
    double max_truth_rise = 0.0;    // largest increase of d(T_Ω, H_i), incl. from d(T_Ω, S)
    double final_d_to_truth = 0.0;
    double final_frob_err = 0.0;
    double max_consistency_residual = 0.0;
    double max_gap_excess = 0.0;  // max(gap - bound) over both sides
    double max_truth_bound_excess = 0.0;    // max(lhs - rhs)
    double max_similar_bound_excess = 0.0;
    bool error = false;
    std::string error_message;
};

ExperimentSummary summarize(const ExperimentSetup& setup, bool with_bounds);

/// Serial reference for the batch runner.
std::vector<ExperimentSummary> run_batch_serial(const std::vector<ExperimentConfig>& configs,
                                                bool with_bounds);
/// OpenMP version; identical results to run_batch_serial.
std::vector<ExperimentSummary> run_batch_parallel(const std::vector<ExperimentConfig>& configs,
                                                  bool with_bounds);

}  // namespace transid
