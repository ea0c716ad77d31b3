#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "transid/control.hpp"
#include "transid/datamat.hpp"
#include "transid/engine.hpp"

namespace transid::demo {

/// Scalar system x+ = a x + b u with similar data S = [[1,0],[0,1],[0.7,0.7]]
/// and a single true snapshot [1;1;1].
struct ScalarCase {
    StackedData similar;
    Eigen::VectorXd snapshot;
    Eigen::MatrixXd adversarial_basis;  // a completion of the snapshot that yields (5, -4)
};

ScalarCase scalar_case();

/// Three-state, three-input pole-placement case: true system with B = I,
/// a far-off similar system, one true trajectory of four steps, the printed
/// identified model and the two printed feedback gains.
struct PolePlaceCase {
    LinearModel truth;
    LinearModel similar;
    Trajectory trajectory;
    LinearModel printed_estimate;
    Eigen::MatrixXd printed_k_estimate;
    Eigen::MatrixXd printed_k_similar;
    std::vector<std::complex<double>> targets;
    std::vector<double> printed_poles_estimate;
    std::vector<double> printed_poles_similar;

    /// Im [I; [A_S B_S]] as a stacked data matrix.
    StackedData similar_data() const;
};

PolePlaceCase pole_place_case();

/// Three informative data sets of a scalar system used to show that a small
/// subspace distance goes with a small parameter distance.
struct DistanceCase {
    Eigen::MatrixXd d0;
    Eigen::MatrixXd d1;
    Eigen::MatrixXd d2;
};

DistanceCase distance_case();

}  // namespace transid::demo
