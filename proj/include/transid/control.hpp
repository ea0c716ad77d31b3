#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "transid/datamat.hpp"
#include "transid/engine.hpp"

namespace transid {

enum class Distribution { uniform, gaussian };

/// Entrywise perturbation: uniform on (0, sigma) or normal with mean 0 and std sigma.
struct PerturbationSpec {
    Distribution distribution = Distribution::uniform;
    double sigma = 0.05;
    std::uint64_t seed = 0;
};

struct FeedbackGain {
    Eigen::MatrixXd K;  // m x n, u = -K x
};

Trajectory simulate(const LinearModel& model, const Eigen::VectorXd& x0,
                    const std::vector<Eigen::VectorXd>& inputs);

LinearModel perturb(const LinearModel& model, const PerturbationSpec& spec);

/// I.i.d. uniform(-1, 1) inputs, redrawn until the sequence is persistently
/// exciting of `order`. Requires length >= (m+1)*order.
std::vector<Eigen::VectorXd> pe_inputs(int m, int length, int order, std::uint64_t seed);

/// Random Gaussian (A, B) with A rescaled to the given spectral radius, redrawn
/// until (A, B) is controllable.
LinearModel random_model(int n, int m, double spectral_radius, std::uint64_t seed);

/// PBH test: rank [A - lambda I, B] = n for every eigenvalue lambda of A.
/// Avoids the Krylov matrix, which is numerically rank deficient for large n.
bool is_controllable(const LinearModel& model, const RankPolicy& policy = {});

/// State feedback K with eig(A - B K) = targets. Square invertible B uses
/// K = B^-1 (A - F); single input uses Ackermann; other shapes go through a
/// random single-input reduction (seeded, up to 10 attempts).
FeedbackGain pole_place(const LinearModel& model, const std::vector<std::complex<double>>& targets,
                        std::uint64_t seed = 0);

/// Eigenvalues of A - B K sorted by real part, then imaginary part.
std::vector<std::complex<double>> closed_loop_eigs(const LinearModel& model, const FeedbackGain& gain);

/// Largest |a_i - b_pi(i)| under the assignment pi minimizing the total distance.
double match_distance(const std::vector<std::complex<double>>& a,
                      const std::vector<std::complex<double>>& b);

double spectral_radius(const Eigen::MatrixXd& A);

}  // namespace transid
