#pragma once

#include <string>

#include <Eigen/Dense>

#include "transid/datamat.hpp"
#include "transid/subspace.hpp"

namespace transid {

enum class Provenance { similar, step, truth };

std::string to_string(Provenance p);

/// x(k+1) = A x(k) + B u(k). Autonomous models carry an n x 0 B.
struct LinearModel {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Provenance provenance = Provenance::truth;
    int step = 0;  // meaningful for Provenance::step

    int n() const { return static_cast<int>(A.rows()); }
    int m() const { return static_cast<int>(B.cols()); }
    /// [A B]
    Eigen::MatrixXd stacked() const;
    void validate() const;
};

/// Frobenius norm of [A1 B1] - [A2 B2].
double parameter_distance(const LinearModel& a, const LinearModel& b);

/// Im [I; [A B]] -- the (n+m)-dimensional subspace every informative data set of
/// the model spans.
Subspace graph_subspace(const LinearModel& model);

/// Model JSON: {"n", "m", "A": rows, "B": rows, "steps", "completed", "provenance"}.
std::string format_model_json(const LinearModel& model, int steps, bool completed);
/// Reads A and B (and n, m when present, which must agree with A and B).
LinearModel parse_model_json(const std::string& text);

/// The unique (A, B) with X^+ = A X^- + B U^- for a basis H = [X^-; U^-; X^+]
/// whose top (n+m) rows have full rank. Throws NumericalError otherwise.
LinearModel extract_model(const Eigen::MatrixXd& basis, int n, int m,
                          const RankPolicy& policy = {});

struct StepReport {
    int step = 0;
    LinearModel model;
    int remaining_rank = 0;  // dim(T_i^perp ∩ S)
    bool rank_increased = false;
    double d_to_similar = 0.0;
    bool complete = false;
};

enum class IdentifierMode { driven, autonomous };

/// Incremental transfer identifier. Holds the similar-system subspace S and its
/// complement, the true-system snapshots pushed so far, and the current model
/// extracted from H_i = T_i + (T_i^perp ∩ S).
///
/// Single writer: push() mutates state; const queries are safe to share while
/// no push is in flight.
class Identifier {
public:
    /// Mode is autonomous iff similar.m == 0. Throws InputError when the similar
    /// regressor [X^-; U^-] has rank below n+m, or when the data do not span an
    /// (n+m)-dimensional subspace.
    explicit Identifier(const StackedData& similar, RankPolicy policy = {});

    StepReport push(const Eigen::VectorXd& h);
    StepReport push_autonomous(const Eigen::VectorXd& h);

    IdentifierMode mode() const { return mode_; }
    int n() const { return n_; }
    int m() const { return m_; }
    int lambda() const { return n_ + m_; }
    int ambient_dim() const { return 2 * n_ + m_; }
    int step() const { return step_; }
    /// dim T_i
    int data_rank() const { return static_cast<int>(data_basis_.cols()); }
    /// dim(T_i^perp ∩ S); zero once identification is complete.
    int remaining_rank() const { return static_cast<int>(complement_.dim()); }
    bool complete() const { return remaining_rank() == 0; }

    const RankPolicy& policy() const { return policy_; }
    const Subspace& similar_space() const { return similar_; }
    const Subspace& similar_left_kernel() const { return similar_perp_; }
    const LinearModel& similar_model() const { return similar_model_; }
    const LinearModel& model() const { return model_; }

    /// Every snapshot pushed, including ones that did not add a new direction.
    const Eigen::MatrixXd& data_log() const { return log_; }
    /// Retained snapshot columns that span T_i.
    const Eigen::MatrixXd& data_columns() const { return data_columns_; }
    /// Basis [T_i S_i] used for model extraction.
    Eigen::MatrixXd h_basis() const;
    /// H_i with an orthonormal basis; S at step 0.
    Subspace current_subspace() const;

private:
    StepReport advance(const Eigen::VectorXd& h);

    IdentifierMode mode_;
    int n_;
    int m_;
    RankPolicy policy_;
    Subspace similar_;
    Subspace similar_perp_;
    LinearModel similar_model_;
    Eigen::MatrixXd log_;
    Eigen::MatrixXd data_columns_;
    Eigen::MatrixXd data_basis_;  // orthonormal basis of T_i
    Subspace complement_;         // T_i^perp ∩ S
    LinearModel model_;
    double d_to_similar_ = 0.0;
    int step_ = 0;
};

}  // namespace transid
