#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "transid/control.hpp"
#include "transid/datamat.hpp"
#include "transid/demo_cases.hpp"
#include "transid/engine.hpp"
#include "transid/errors.hpp"
#include "transid/experiment.hpp"

namespace {

using namespace transid;

const std::vector<std::string> kAllColumns = {"step",           "mu",    "d_to_similar", "d_to_truth",
                                              "frob_err_truth", "gamma", "beta",         "rhs_thm9",
                                              "rhs_thm10"};
const std::vector<std::string> kFileColumns = {"step", "mu", "d_to_similar"};

bool needs_truth(const std::string& col) {
    return col != "step" && col != "mu" && col != "d_to_similar";
}

bool needs_bounds(const std::string& col) {
    return col == "gamma" || col == "beta" || col == "rhs_thm9" || col == "rhs_thm10";
}

// Requested columns in the canonical order; empty request selects every available column.
std::vector<std::string> select_columns(const std::vector<std::string>& requested, bool have_truth) {
    if (requested.empty()) return have_truth ? kAllColumns : kFileColumns;
    for (const auto& col : requested) {
        if (std::find(kAllColumns.begin(), kAllColumns.end(), col) == kAllColumns.end()) {
            throw InputError("unknown trace column '" + col + "'");
        }
        if (needs_truth(col) && !have_truth) {
            throw InputError("trace column '" + col + "' needs a known true system (--truth)");
        }
    }
    std::vector<std::string> out;
    for (const auto& col : kAllColumns) {
        if (std::find(requested.begin(), requested.end(), col) != requested.end()) out.push_back(col);
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string cell(const TraceRow& row, const std::string& col) {
    if (col == "step") return std::to_string(row.step);
    if (col == "mu") return std::to_string(row.mu);
    if (col == "d_to_similar") return fmt(row.d_to_similar);
    if (col == "d_to_truth") return fmt(*row.d_to_truth);
    if (col == "frob_err_truth") return fmt(*row.frob_err_truth);
    const BoundReport& b = *row.bounds;
    if (col == "gamma") return fmt(b.gamma);
    if (col == "beta") return fmt(b.beta);
    if (col == "rhs_thm9") return fmt(b.truth_error_bound);
    return fmt(b.similar_deviation_bound);
}

std::string format_trace(const std::vector<TraceRow>& trace, const std::vector<std::string>& cols) {
    std::ostringstream out;
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << "\n";
    for (const auto& row : trace) {
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cell(row, cols[i]);
        out << "\n";
    }
    return out.str();
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "' for writing");
    f << text;
    if (!f) throw InputError("failed writing '" + path + "'");
}

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void check_mode(const std::string& mode, int m) {
    if (mode == "autonomous" && m != 0) throw InputError("--mode autonomous needs data without inputs (m = 0)");
    if (mode == "driven" && m == 0) throw InputError("--mode driven needs data with inputs (m >= 1)");
}

// Monotone distances and exact completion; returns the failure messages.
std::vector<std::string> check_trace(const std::vector<TraceRow>& trace, bool completed, int lambda) {
    constexpr double slack = 1e-9;
    std::vector<std::string> problems;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const TraceRow& r = trace[i];
        if (r.data_rank + r.mu != lambda) {
            problems.push_back("step " + std::to_string(r.step) + ": dim(H_i) != n+m");
        }
        if (i == 0) continue;
        const TraceRow& p = trace[i - 1];
        if (r.d_to_similar < p.d_to_similar - slack) {
            problems.push_back("step " + std::to_string(r.step) + ": d_to_similar decreased");
        }
        if (r.d_to_truth && p.d_to_truth && *r.d_to_truth > *p.d_to_truth + slack) {
            problems.push_back("step " + std::to_string(r.step) + ": d_to_truth increased");
        }
    }
    if (!completed) problems.push_back("identification did not complete");
    if (completed && !trace.empty() && trace.back().d_to_truth && *trace.back().d_to_truth >= 1e-8) {
        problems.push_back("final d_to_truth " + fmt(*trace.back().d_to_truth) + " is not below 1e-8");
    }
    return problems;
}

int report_check(const std::vector<std::string>& problems) {
    for (const auto& p : problems) std::cerr << "check failed: " << p << "\n";
    if (problems.empty()) std::cerr << "check passed\n";
    return problems.empty() ? 0 : 1;
}

struct IdentifyOptions {
    std::vector<std::string> similar_files;
    std::string true_file;
    std::string truth_file;
    std::string out;
    std::string model_out;
    std::string mode;
    std::vector<std::string> columns;
    double tol = 1e-10;
    bool check = false;
};

int run_identify(const IdentifyOptions& o) {
    RankPolicy policy{o.tol};
    policy.validate();
    std::vector<Trajectory> similar;
    for (const auto& f : o.similar_files) similar.push_back(load_trajectory(f));
    const StackedData similar_data = stack(similar);
    const Trajectory truth_data = load_trajectory(o.true_file);
    if (!o.mode.empty()) check_mode(o.mode, similar_data.m);

    std::optional<LinearModel> truth;
    if (!o.truth_file.empty()) truth = parse_model_json(read_text(o.truth_file));
    const auto cols = select_columns(o.columns, truth.has_value());
    const bool with_bounds =
        std::any_of(cols.begin(), cols.end(), [](const std::string& c) { return needs_bounds(c); });

    const RunResult run = run_identification(similar_data, truth_data, policy,
                                              truth ? &*truth : nullptr, with_bounds);
    write_text(o.out, format_trace(run.trace, cols));
    if (!o.model_out.empty()) write_text(o.model_out, format_model_json(run.final_model, run.steps, run.completed));
    if (o.check) return report_check(check_trace(run.trace, run.completed, similar_data.lambda()));
    return 0;
}

struct ExperimentOptions {
    ExperimentConfig config;
    std::string dist = "uniform";
    std::string mode = "driven";
    std::string out;
    std::string model_out;
    std::vector<std::string> columns;
    bool check = false;
};

int run_experiment_cmd(ExperimentOptions o) {
    if (o.mode == "autonomous") {
        o.config.m = 0;
    } else if (o.config.m < 1) {
        throw InputError("--m must be at least 1 (use --mode autonomous for systems without inputs)");
    }
    o.config.distribution = o.dist == "gaussian" ? Distribution::gaussian : Distribution::uniform;
    const ExperimentSetup setup = make_experiment(o.config);
    const auto cols = select_columns(o.columns, true);
    const bool with_bounds =
        std::any_of(cols.begin(), cols.end(), [](const std::string& c) { return needs_bounds(c); });
    const RunResult run = run_experiment(setup, with_bounds);
    write_text(o.out, format_trace(run.trace, cols));
    if (!o.model_out.empty()) write_text(o.model_out, format_model_json(run.final_model, run.steps, run.completed));
    if (o.check) return report_check(check_trace(run.trace, run.completed, o.config.n + o.config.m));
    return 0;
}

void print_matrix(const char* name, const Eigen::MatrixXd& M) {
    std::printf("%s =\n", name);
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        std::printf("  ");
        for (Eigen::Index j = 0; j < M.cols(); ++j) std::printf(" %9.4f", M(i, j));
        std::printf("\n");
    }
}

void print_eigs(const char* label, const std::vector<std::complex<double>>& eigs) {
    std::printf("%s {", label);
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        if (std::abs(eigs[i].imag()) > 1e-12) {
            std::printf("%s%.5f%+.5fi", i ? ", " : "", eigs[i].real(), eigs[i].imag());
        } else {
            std::printf("%s%.5f", i ? ", " : "", eigs[i].real());
        }
    }
    std::printf("}\n");
}

int demo_scalar() {
    const demo::ScalarCase c = demo::scalar_case();
    Identifier id(c.similar);
    std::printf("similar data S = Im[[1,0],[0,1],[0.7,0.7]]\n");
    std::printf("step 0: (a, b) = (%.4f, %.4f), mu = %d\n", id.model().A(0, 0), id.model().B(0, 0),
                id.remaining_rank());
    const StepReport r = id.push(c.snapshot);
    std::printf("push h = [1; 1; 1]\n");
    print_matrix("H_1 basis [T_1 S_1]", id.h_basis());
    std::printf("step 1: (a, b) = (%.4f, %.4f), mu = %d, d(S, H_1) = %.6f\n", r.model.A(0, 0),
                r.model.B(0, 0), r.remaining_rank, r.d_to_similar);
    const LinearModel adv = extract_model(c.adversarial_basis, 1, 1);
    std::printf("arbitrary completion [[1,1.09302],[1,1],[1,1.4651]] gives (a, b) = (%.4f, %.4f)\n",
                adv.A(0, 0), adv.B(0, 0));
    return 0;
}

int demo_poleplace() {
    const demo::PolePlaceCase c = demo::pole_place_case();
    std::printf("||[A_S B_S] - [A_T B_T]||_F = %.4f\n", parameter_distance(c.similar, c.truth));

    Identifier id(c.similar_data());
    for (std::size_t k = 0; k < c.trajectory.length() && !id.complete(); ++k) {
        id.push(snapshot(c.trajectory, k));
    }
    const LinearModel& est = id.model();
    std::printf("identified after %d snapshots (data rank %d, mu = %d)\n", id.step(), id.data_rank(),
                id.remaining_rank());
    print_matrix("A_est", est.A);
    print_matrix("B_est", est.B);
    std::printf("||[A_est B_est] - [A_T B_T]||_F = %.4f\n", parameter_distance(est, c.truth));

    const FeedbackGain k_est = pole_place(est, c.targets);
    const FeedbackGain k_sim = pole_place(c.similar, c.targets);
    const FeedbackGain k_true = pole_place(c.truth, c.targets);
    print_matrix("K_est", k_est.K);
    print_eigs("eig(A_est - B_est K_est) =", closed_loop_eigs(est, k_est));
    print_eigs("eig(A_T - B_T K_est)     =", closed_loop_eigs(c.truth, k_est));
    std::printf("||K_est - K_T||_F = %.4f\n", (k_est.K - k_true.K).norm());
    const auto sim_loop = closed_loop_eigs(c.truth, k_sim);
    print_eigs("eig(A_T - B_T K_S)       =", sim_loop);
    std::printf("similar-system controller on the true system: %s\n",
                spectral_radius(c.truth.A - c.truth.B * k_sim.K) > 1.0 ? "unstable" : "stable");
    print_eigs("printed K_3 on the true system:", closed_loop_eigs(c.truth, {c.printed_k_estimate}));
    print_eigs("printed K_S on the true system:", closed_loop_eigs(c.truth, {c.printed_k_similar}));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transfer identification of linear systems from similar-system data"};
    app.require_subcommand(1);

    IdentifyOptions id_opts;
    auto* identify = app.add_subcommand("identify", "identify a model from similar data and a true trajectory");
    identify->add_option("--similar", id_opts.similar_files, "similar-system trajectory file(s), CSV or JSON")
        ->required();
    identify->add_option("--true", id_opts.true_file, "true-system trajectory file")->required();
    identify->add_option("--truth", id_opts.truth_file, "known true model (JSON); enables truth columns");
    identify->add_option("--tol", id_opts.tol, "relative rank tolerance");
    identify->add_option("--out", id_opts.out, "trace CSV (default stdout)");
    identify->add_option("--model-out", id_opts.model_out, "final model JSON");
    identify->add_option("--mode", id_opts.mode, "driven or autonomous (default: from the data)")
        ->check(CLI::IsMember({"driven", "autonomous"}));
    identify->add_option("--trace-cols", id_opts.columns, "trace columns")->delimiter(',');
    identify->add_flag("--check", id_opts.check, "fail unless distances are monotone and identification completes");

    ExperimentOptions ex_opts;
    auto* experiment = app.add_subcommand("experiment", "simulate a random truth/similar pair and identify");
    experiment->add_option("--n", ex_opts.config.n, "state dimension")->required()->check(CLI::PositiveNumber);
    experiment->add_option("--m", ex_opts.config.m, "input dimension");
    experiment->add_option("--sigma", ex_opts.config.sigma, "perturbation scale")->check(CLI::PositiveNumber);
    experiment->add_option("--dist", ex_opts.dist, "uniform or gaussian")
        ->check(CLI::IsMember({"uniform", "gaussian"}));
    experiment->add_option("--seed", ex_opts.config.seed, "random seed");
    experiment->add_option("--tol", ex_opts.config.policy.relative_tolerance, "relative rank tolerance");
    experiment->add_option("--similar-length", ex_opts.config.similar_length, "similar-system snapshots");
    experiment->add_option("--segment-length", ex_opts.config.segment_length, "similar data restart period");
    experiment->add_option("--mode", ex_opts.mode, "driven or autonomous")
        ->check(CLI::IsMember({"driven", "autonomous"}));
    experiment->add_option("--out", ex_opts.out, "trace CSV (default stdout)");
    experiment->add_option("--model-out", ex_opts.model_out, "final model JSON");
    experiment->add_option("--trace-cols", ex_opts.columns, "trace columns")->delimiter(',');
    experiment->add_flag("--check", ex_opts.check, "fail unless distances are monotone and identification completes");

    std::string demo_name;
    auto* demo = app.add_subcommand("demo", "worked examples");
    demo->add_option("name", demo_name, "scalar or poleplace")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*identify) return run_identify(id_opts);
        if (*experiment) return run_experiment_cmd(ex_opts);
        if (demo_name == "scalar") return demo_scalar();
        if (demo_name == "poleplace") return demo_poleplace();
        throw InputError("unknown demo '" + demo_name + "' (expected scalar or poleplace)");
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
