#pragma once

#include <Eigen/Dense>

#include "transid/engine.hpp"
#include "transid/subspace.hpp"

namespace transid {

/// Norms of the row blocks of the principal-vector bases (T̂, Ĥ) of a pair of
/// (n+m)-dimensional subspaces of R^(2n+m).
struct PartitionDeltas {
    double n1 = 0.0;   // ||[δX̂^-; δÛ^-]||_F
    double n2 = 0.0;   // ||δX̂^+||_F
    double nu1 = 0.0;  // ||[X̂_ref^-; Û_ref^-]||_F
    double nu2 = 0.0;  // ||X̂_h^+||_F
    double gap = 0.0;  // ||Ĥ - T̂||_F
    double kappa = 0.0;  // condition number of [X̂_ref^-; Û_ref^-]
};

PartitionDeltas aligned_partition_deltas(const Subspace& reference_space, const Subspace& h_space,
                                         int n, int m);

/// 2 sqrt(lambda - r) sin(d/2): bound on ||Ĥ_i - T̂||_F given the data rank r and d = d(T_Ω, H_i).
double truth_gap_bound(int r, int lambda, double d);
/// 2 sqrt(r) sin(d/2): bound on ||H̃_i - S̃||_F with d = d(S, H_i).
double similar_gap_bound(int r, double d);

struct BoundReport {
    int step = 0;
    int data_rank = 0;

    // truth side
    double d_to_truth = 0.0;
    double gamma = 0.0;
    double kappa_true = 0.0;
    double nu1 = 0.0;
    double gap_truth = 0.0;  // ||Ĥ_i - T̂||_F
    double truth_error_bound = 0.0;
    double truth_error = 0.0;

    // similar side
    double d_to_similar = 0.0;
    double beta = 0.0;
    double kappa_similar = 0.0;
    double m1 = 0.0;
    double gap_similar = 0.0;  // ||H̃_i - S̃||_F
    double similar_deviation_bound = 0.0;
    double similar_deviation = 0.0;

    double hb_norm = 0.0;
};

/// ||h_b|| where h_b is the last n entries of h1 / ||h1||. Throws NumericalError
/// if it is numerically zero (the parameter bounds are then undefined).
double terminal_state_weight(const Eigen::VectorXd& h1, int n);

/// Relative parameter-error bound against the true system. Fills the truth-side
/// fields and hb_norm of `report`.
void truth_error_report(BoundReport& report, const LinearModel& truth, const LinearModel& estimate,
                     const Subspace& truth_space, const Subspace& h_space,
                     const Eigen::VectorXd& h1, int data_rank);

/// Relative deviation bound from the similar system. Fills the similar-side fields.
void similar_deviation_report(BoundReport& report, const LinearModel& similar, const LinearModel& estimate,
                      const Subspace& similar_space, const Subspace& h_space,
                      const Eigen::VectorXd& h1, int data_rank);

}  // namespace transid
