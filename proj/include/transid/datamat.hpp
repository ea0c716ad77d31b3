#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "transid/subspace.hpp"

namespace transid {

/// Input/state record of one experiment: x(0..L) and u(0..L-1).
/// Autonomous trajectories have m == 0 and zero-length input vectors.
struct Trajectory {
    int n = 0;
    int m = 0;
    std::vector<Eigen::VectorXd> states;
    std::vector<Eigen::VectorXd> inputs;

    std::size_t length() const { return inputs.size(); }
    /// Throws InputError if lengths or vector sizes are inconsistent.
    void validate() const;
};

/// Rows [X^-; U^-; X^+] of (2n+m) x N; column j is [x(j); u(j); x(j+1)].
struct StackedData {
    int n = 0;
    int m = 0;
    Eigen::MatrixXd matrix;

    int ambient_dim() const { return 2 * n + m; }
    int lambda() const { return n + m; }
    Eigen::Index columns() const { return matrix.cols(); }

    auto x_minus() const { return matrix.topRows(n); }
    auto u_minus() const { return matrix.middleRows(n, m); }
    auto x_plus() const { return matrix.bottomRows(n); }
    /// [X^-; U^-]
    auto regressor() const { return matrix.topRows(n + m); }
};

/// h = [x(k); u(k); x(k+1)] for 0 <= k < traj.length().
Eigen::VectorXd snapshot(const Trajectory& traj, std::size_t k);

StackedData stack(const Trajectory& traj);
/// Concatenates the columns of several trajectories of equal (n, m).
StackedData stack(std::span<const Trajectory> trajectories);

/// Whether the depth-`order` block Hankel matrix of `inputs` has full row rank m*order.
bool persistency_order(std::span<const Eigen::VectorXd> inputs, int order,
                       const RankPolicy& policy = {});

enum class TrajectoryFormat { csv, json };

/// Chooses the format from the file extension (.json -> json, anything else -> csv).
TrajectoryFormat format_from_path(const std::filesystem::path& path);

/// CSV layout: header `t,x1..xn,u1..um`; one row per time step; the last row holds
/// x(L) with empty input cells. JSON mirror: {"n","m","states":[[..]],"inputs":[[..]]}.
Trajectory load_trajectory(const std::filesystem::path& path, TrajectoryFormat format);
Trajectory load_trajectory(const std::filesystem::path& path);
void save_trajectory(const Trajectory& traj, const std::filesystem::path& path,
                     TrajectoryFormat format);
void save_trajectory(const Trajectory& traj, const std::filesystem::path& path);

Trajectory parse_trajectory_csv(const std::string& text);
std::string format_trajectory_csv(const Trajectory& traj);
Trajectory parse_trajectory_json(const std::string& text);
std::string format_trajectory_json(const Trajectory& traj);

}  // namespace transid
