#include "transid/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "transid/errors.hpp"

namespace transid {

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over (seed, stream)
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Eigen::VectorXd gaussian_vector(int size, std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::VectorXd v(size);
    for (int i = 0; i < size; ++i) v(i) = dist(rng);
    return v;
}

std::vector<Eigen::VectorXd> uniform_inputs(int m, int length, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<Eigen::VectorXd> u(static_cast<std::size_t>(length), Eigen::VectorXd(m));
    for (auto& v : u)
        for (int i = 0; i < m; ++i) v(i) = dist(rng);
    return u;
}

double consistency_residual(const LinearModel& model, const Trajectory& traj, std::size_t upto) {
    double worst = 0.0;
    for (std::size_t k = 0; k < upto; ++k) {
        const Eigen::VectorXd r =
            traj.states[k + 1] - model.A * traj.states[k] - model.B * traj.inputs[k];
        worst = std::max(worst, r.norm() / std::max(1.0, traj.states[k + 1].norm()));
    }
    return worst;
}

}  // namespace

ExperimentSetup make_experiment(const ExperimentConfig& config) {
    if (config.n < 1 || config.m < 0) throw InputError("experiment: need n >= 1 and m >= 0");
    if (!(config.sigma > 0.0)) throw InputError("experiment: sigma must be positive");
    if (config.similar_length < config.n + config.m || config.segment_length < 1) {
        throw InputError("experiment: similar data must have at least n+m snapshots");
    }
    config.policy.validate();

    ExperimentSetup setup;
    setup.config = config;
    setup.truth = random_model(config.n, config.m, config.truth_radius, derive_seed(config.seed, 0));
    setup.similar = perturb(setup.truth,
                            PerturbationSpec{config.distribution, config.sigma, derive_seed(config.seed, 1)});

    std::mt19937_64 rng(derive_seed(config.seed, 2));
    std::vector<Trajectory> segments;
    for (int remaining = config.similar_length; remaining > 0;) {
        const int len = std::min(config.segment_length, remaining);
        segments.push_back(simulate(setup.similar, gaussian_vector(config.n, rng),
                                    uniform_inputs(config.m, len, rng)));
        remaining -= len;
    }
    setup.similar_data = stack(segments);

    std::mt19937_64 true_rng(derive_seed(config.seed, 3));
    const int true_length = config.n + config.m + config.extra_true_steps;
    setup.true_trajectory = simulate(setup.truth, gaussian_vector(config.n, true_rng),
                                     uniform_inputs(config.m, true_length, true_rng));
    return setup;
}

RunResult run_identification(const StackedData& similar_data, const Trajectory& true_data,
                             const RankPolicy& policy, const LinearModel* truth, bool with_bounds) {
    true_data.validate();
    if (true_data.n != similar_data.n || true_data.m != similar_data.m) {
        throw InputError("similar and true data disagree on dimensions (n, m)");
    }
    Identifier id(similar_data, policy);
    std::optional<Subspace> truth_space;
    if (truth != nullptr) {
        if (truth->n() != id.n() || truth->m() != id.m()) {
            throw InputError("truth model dimensions do not match the data");
        }
        truth_space = graph_subspace(*truth);
    }

    RunResult result;
    for (std::size_t k = 0; k < true_data.length() && !id.complete(); ++k) {
        const Eigen::VectorXd h = snapshot(true_data, k);
        const StepReport report =
            id.mode() == IdentifierMode::autonomous ? id.push_autonomous(h) : id.push(h);

        TraceRow row;
        row.step = report.step;
        row.mu = report.remaining_rank;
        row.d_to_similar = report.d_to_similar;
        row.fresh = report.rank_increased;
        row.data_rank = id.data_rank();
        if (truth_space) {
            const Subspace h_space = id.current_subspace();
            row.d_to_truth = distance(*truth_space, h_space);
            row.frob_err_truth = parameter_distance(report.model, *truth);
            if (with_bounds) {
                BoundReport b;
                b.step = report.step;
                const Eigen::VectorXd h1 = id.data_columns().col(0);
                truth_error_report(b, *truth, report.model, *truth_space, h_space, h1, id.data_rank());
                similar_deviation_report(b, id.similar_model(), report.model, id.similar_space(), h_space, h1,
                                 id.data_rank());
                row.bounds = b;
            }
        }
        result.trace.push_back(std::move(row));
    }
    result.final_model = id.model();
    result.completed = id.complete();
    result.steps = id.step();
    return result;
}

RunResult run_experiment(const ExperimentSetup& setup, bool with_bounds) {
    return run_identification(setup.similar_data, setup.true_trajectory, setup.config.policy,
                              &setup.truth, with_bounds);
}

ExperimentSummary summarize(const ExperimentSetup& setup, bool with_bounds) {
    ExperimentSummary s;
    s.seed = setup.config.seed;
    s.n = setup.config.n;
    s.m = setup.config.m;
    try {
        const RunResult run = run_experiment(setup, with_bounds);
        s.completed = run.completed;
        s.steps = run.steps;
        const double d_truth_similar =
            distance(graph_subspace(setup.truth), graph_subspace(setup.similar));
        double prev_similar = 0.0;
        double prev_truth = d_truth_similar;
        const int lambda = setup.config.n + setup.config.m;
        for (const auto& row : run.trace) {
            if (row.fresh) ++s.fresh_steps;
            if (row.data_rank + row.mu != lambda) s.dims_preserved = false;
            s.max_similar_drop = std::max(s.max_similar_drop, prev_similar - row.d_to_similar);
            s.max_truth_rise = std::max(s.max_truth_rise, *row.d_to_truth - prev_truth);
            prev_similar = row.d_to_similar;
            prev_truth = *row.d_to_truth;
            if (row.bounds) {
                const BoundReport& b = *row.bounds;
                s.max_gap_excess = std::max({s.max_gap_excess, b.gap_truth - b.gamma,
                                                b.gap_similar - b.beta});
                s.max_truth_bound_excess = std::max(s.max_truth_bound_excess, b.truth_error - b.truth_error_bound);
                s.max_similar_bound_excess = std::max(s.max_similar_bound_excess, b.similar_deviation - b.similar_deviation_bound);
            }
        }
        if (!run.trace.empty()) {
            s.final_d_to_truth = *run.trace.back().d_to_truth;
            s.final_frob_err = *run.trace.back().frob_err_truth;
        }
        // Every intermediate model must reproduce all data seen so far; re-run to check.
        Identifier id(setup.similar_data, setup.config.policy);
        for (std::size_t k = 0; k < setup.true_trajectory.length() && !id.complete(); ++k) {
            const Eigen::VectorXd h = snapshot(setup.true_trajectory, k);
            const StepReport r =
                id.mode() == IdentifierMode::autonomous ? id.push_autonomous(h) : id.push(h);
            s.max_consistency_residual = std::max(
                s.max_consistency_residual, consistency_residual(r.model, setup.true_trajectory, k + 1));
        }
    } catch (const std::exception& e) {
        s.error = true;
        s.error_message = e.what();
    }
    return s;
}

std::vector<ExperimentSummary> run_batch_serial(const std::vector<ExperimentConfig>& configs,
                                                bool with_bounds) {
    std::vector<ExperimentSummary> out(configs.size());
    for (std::size_t i = 0; i < configs.size(); ++i) {
        try {
            out[i] = summarize(make_experiment(configs[i]), with_bounds);
        } catch (const std::exception& e) {
            out[i].seed = configs[i].seed;
            out[i].error = true;
            out[i].error_message = e.what();
        }
    }
    return out;
}

std::vector<ExperimentSummary> run_batch_parallel(const std::vector<ExperimentConfig>& configs,
                                                  bool with_bounds) {
    std::vector<ExperimentSummary> out(configs.size());
    const auto count = static_cast<std::int64_t>(configs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            out[idx] = summarize(make_experiment(configs[idx]), with_bounds);
        } catch (const std::exception& e) {
            out[idx].seed = configs[idx].seed;
            out[idx].error = true;
            out[idx].error_message = e.what();
        }
    }
    return out;
}

}  // namespace transid
