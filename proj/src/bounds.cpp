#include "transid/bounds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "transid/errors.hpp"

namespace transid {

namespace {

double condition_number(const Eigen::MatrixXd& block) {
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(block).singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin <= 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

// kappa * g * (1/nu + 1/hb + g/(nu*hb)); g = 0 gives 0 regardless of nu.
double relative_error_bound(double g, double kappa, double nu, double hb) {
    if (g == 0.0) return 0.0;
    if (nu <= std::numeric_limits<double>::min()) return std::numeric_limits<double>::infinity();
    return g * kappa * (1.0 / nu + 1.0 / hb + g / (nu * hb));
}

void check_angle(double d) {
    if (!(d >= 0.0 && d <= M_PI / 2 + 1e-12)) {
        throw InputError("subspace distance must lie in [0, pi/2], got " + std::to_string(d));
    }
}

}  // namespace

PartitionDeltas aligned_partition_deltas(const Subspace& reference_space, const Subspace& h_space,
                                         int n, int m) {
    const int lambda = n + m;
    if (reference_space.ambient_dim() != 2 * n + m || h_space.ambient_dim() != 2 * n + m ||
        reference_space.dim() != lambda || h_space.dim() != lambda) {
        throw InputError("aligned_partition_deltas: both subspaces must be (n+m)-dimensional in R^(2n+m)");
    }
    const auto [ref_hat, h_hat] = aligned_bases(reference_space, h_space);
    PartitionDeltas out;
    const Eigen::MatrixXd diff = h_hat - ref_hat;
    out.n1 = diff.topRows(lambda).norm();
    out.n2 = diff.bottomRows(n).norm();
    out.nu1 = ref_hat.topRows(lambda).norm();
    out.nu2 = h_hat.bottomRows(n).norm();
    out.gap = diff.norm();
    out.kappa = condition_number(ref_hat.topRows(lambda));
    return out;
}

double truth_gap_bound(int r, int lambda, double d) {
    if (r < 0 || r > lambda) throw InputError("truth_gap_bound: data rank must lie in [0, n+m]");
    check_angle(d);
    return 2.0 * std::sqrt(static_cast<double>(lambda - r)) * std::sin(d / 2.0);
}

double similar_gap_bound(int r, double d) {
    if (r < 0) throw InputError("similar_gap_bound: data rank must be nonnegative");
    check_angle(d);
    return 2.0 * std::sqrt(static_cast<double>(r)) * std::sin(d / 2.0);
}

double terminal_state_weight(const Eigen::VectorXd& h1, int n) {
    const double norm = h1.norm();
    if (n < 1 || h1.size() < n || norm == 0.0) {
        throw NumericalError("first snapshot is zero; the parameter bounds are undefined");
    }
    const double hb = h1.tail(n).norm() / norm;
    if (hb <= 1e-14) {
        throw NumericalError("terminal-state block of the first snapshot is numerically zero");
    }
    return hb;
}

void truth_error_report(BoundReport& report, const LinearModel& truth, const LinearModel& estimate,
                     const Subspace& truth_space, const Subspace& h_space,
                     const Eigen::VectorXd& h1, int data_rank) {
    const int n = truth.n();
    const int lambda = n + truth.m();
    const PartitionDeltas pd = aligned_partition_deltas(truth_space, h_space, n, truth.m());
    report.data_rank = data_rank;
    report.hb_norm = terminal_state_weight(h1, n);
    report.d_to_truth = distance(truth_space, h_space);
    report.gamma = truth_gap_bound(data_rank, lambda, report.d_to_truth);
    report.kappa_true = pd.kappa;
    report.nu1 = pd.nu1;
    report.gap_truth = pd.gap;
    report.truth_error_bound = relative_error_bound(report.gamma, pd.kappa, pd.nu1, report.hb_norm);
    report.truth_error = parameter_distance(estimate, truth) / estimate.stacked().norm();
}

void similar_deviation_report(BoundReport& report, const LinearModel& similar, const LinearModel& estimate,
                      const Subspace& similar_space, const Subspace& h_space,
                      const Eigen::VectorXd& h1, int data_rank) {
    const int n = similar.n();
    const PartitionDeltas pd = aligned_partition_deltas(similar_space, h_space, n, similar.m());
    report.data_rank = data_rank;
    report.hb_norm = terminal_state_weight(h1, n);
    report.d_to_similar = distance(similar_space, h_space);
    report.beta = similar_gap_bound(data_rank, report.d_to_similar);
    report.kappa_similar = pd.kappa;
    report.m1 = pd.n1;
    report.gap_similar = pd.gap;
    report.similar_deviation_bound = relative_error_bound(report.beta, pd.kappa, pd.n1, report.hb_norm);
    report.similar_deviation = parameter_distance(estimate, similar) / estimate.stacked().norm();
}

}  // namespace transid
